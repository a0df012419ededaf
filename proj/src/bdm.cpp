#include "ctm/bdm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

PartitionMatrix partition(const OutputArray& image, int d) {
  if (d < 1) throw RejectedInput("patch side must be at least 1");
  if (image.empty()) throw RejectedInput("cannot partition an empty image");
  PartitionMatrix pm;
  pm.side = d;
  pm.tile_rows = (image.height() + d - 1) / d;
  pm.tile_cols = (image.width() + d - 1) / d;
  pm.pad_rows = pm.tile_rows * d - image.height();
  pm.pad_cols = pm.tile_cols * d - image.width();
  pm.patches.reserve(static_cast<std::size_t>(pm.tile_rows) * pm.tile_cols);
  for (int tr = 0; tr < pm.tile_rows; ++tr) {
    for (int tc = 0; tc < pm.tile_cols; ++tc) {
      OutputArray p(d, d, 0);
      for (int r = 0; r < d; ++r) {
        const int y = tr * d + r;
        if (y >= image.height()) break;
        for (int c = 0; c < d; ++c) {
          const int x = tc * d + c;
          if (x >= image.width()) break;
          p.set(r, c, image.at(y, x));
        }
      }
      pm.patches.push_back(Patch{tr, tc, std::move(p)});
    }
  }
  return pm;
}

std::vector<OutputArray> sliding_windows(const OutputArray& image, int d) {
  if (d < 1) throw RejectedInput("patch side must be at least 1");
  if (image.height() < d || image.width() < d) throw RejectedInput("image smaller than the window");
  std::vector<OutputArray> out;
  for (int r = 0; r + d <= image.height(); ++r)
    for (int c = 0; c + d <= image.width(); ++c) out.push_back(image.subarray(r, c, d, d));
  return out;
}

namespace {

void check_side(const ComplexityTable& table, int d) {
  if (table.side() && *table.side() != d)
    throw RejectedInput("table holds " + std::to_string(*table.side()) + "x" + std::to_string(*table.side()) +
                        " patches, not " + std::to_string(d) + "x" + std::to_string(d));
}

// Canonical patch -> multiplicity.
std::map<OutputArray, long> tally(const std::vector<OutputArray>& patches, const ComplexityTable& table) {
  std::map<OutputArray, long> counts;
  for (const auto& p : patches) ++counts[canonicalize(p, table.policy())];
  return counts;
}

double k_or_throw(const ComplexityTable& table, const OutputArray& canonical) {
  const auto* e = table.find_canonical(canonical);
  if (!e) throw IncompleteTable(canonical.key());
  return e->k;
}

std::vector<OutputArray> blocks(const OutputArray& image, int d, bool sliding) {
  if (sliding) return sliding_windows(image, d);
  auto pm = partition(image, d);
  std::vector<OutputArray> out;
  out.reserve(pm.patches.size());
  for (auto& p : pm.patches) out.push_back(std::move(p.cells));
  return out;
}

}  // namespace

double bdm(const OutputArray& image, const ComplexityTable& table, int d, BdmMode mode, bool sliding) {
  check_side(table, d);
  double total = 0.0;
  for (const auto& [patch, n] : tally(blocks(image, d, sliding), table)) {
    const double k = k_or_throw(table, patch);
    total += mode == BdmMode::Sum ? k * static_cast<double>(n) : k + std::log2(static_cast<double>(n));
  }
  return total;
}

double bdm_sum(const OutputArray& image, const ComplexityTable& table, int d) {
  return bdm(image, table, d, BdmMode::Sum);
}

double bdm_log(const OutputArray& image, const ComplexityTable& table, int d) {
  return bdm(image, table, d, BdmMode::Log);
}

namespace {

// Next whitespace-separated token of a PBM stream, skipping # comments.
bool pbm_token(std::istream& in, std::string& tok) {
  tok.clear();
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string skip;
      std::getline(in, skip);
      if (!tok.empty()) return true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) return true;
      continue;
    }
    tok += ch;
  }
  return !tok.empty();
}

}  // namespace

OutputArray read_pbm(std::istream& in) {
  std::string tok;
  if (!pbm_token(in, tok) || tok != "P1") throw RejectedInput("not a plain PBM (P1) image");
  int w = 0, h = 0;
  if (!pbm_token(in, tok) || (w = std::atoi(tok.c_str())) <= 0) throw RejectedInput("bad PBM width");
  if (!pbm_token(in, tok) || (h = std::atoi(tok.c_str())) <= 0) throw RejectedInput("bad PBM height");
  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(w) * h);
  // Pixels may be run together ("0101") or separated.
  while (cells.size() < static_cast<std::size_t>(w) * h && pbm_token(in, tok)) {
    for (char c : tok) {
      if (c != '0' && c != '1') throw RejectedInput("PBM pixel must be 0 or 1");
      cells.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  if (cells.size() != static_cast<std::size_t>(w) * h) throw RejectedInput("PBM pixel count does not match size");
  return OutputArray(h, w, std::move(cells));
}

void write_pbm(std::ostream& out, const OutputArray& image) {
  out << "P1\n" << image.width() << ' ' << image.height() << '\n';
  for (int r = 0; r < image.height(); ++r) out << image.row_string(r) << '\n';
}

OutputArray read_row_strings(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find_first_not_of("01") != std::string::npos) throw RejectedInput("image rows must contain only 0 and 1");
    rows.push_back(line);
  }
  if (rows.empty()) throw RejectedInput("image has no rows");
  return OutputArray::from_rows(rows);
}

void write_row_strings(std::ostream& out, const OutputArray& image) {
  for (int r = 0; r < image.height(); ++r) out << image.row_string(r) << '\n';
}

OutputArray load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RejectedInput("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::istringstream s(text);
  if (text.rfind("P1", 0) == 0) return read_pbm(s);
  return read_row_strings(s);
}

}  // namespace ctm
