#include "ctm/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

std::string SymmetryPolicy::name() const {
  std::string s;
  auto add = [&](const char* part) {
    if (!s.empty()) s += ',';
    s += part;
  };
  if (rotations) add("rot");
  if (reflections) add("ref");
  if (complement) add("comp");
  return s.empty() ? "none" : s;
}

SymmetryPolicy SymmetryPolicy::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "full") return full();
  SymmetryPolicy p;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part == "rot") p.rotations = true;
    else if (part == "ref") p.reflections = true;
    else if (part == "comp") p.complement = true;
    else throw RejectedInput("unknown symmetry '" + part + "' (expected rot, ref, comp, full or none)");
  }
  return p;
}

std::vector<OutputArray> orbit(const OutputArray& s, const SymmetryPolicy& policy) {
  std::vector<OutputArray> members{s};
  auto extend = [&](auto&& fn) {
    const auto n = members.size();
    for (std::size_t i = 0; i < n; ++i) members.push_back(fn(members[i]));
  };
  if (policy.rotations) {
    const auto n = members.size();
    for (std::size_t i = 0; i < n; ++i) {
      members.push_back(members[i].rotate90());
      members.push_back(members[i].rotate180());
      members.push_back(members[i].rotate270());
    }
  }
  if (policy.reflections) extend([](const OutputArray& a) { return a.reflect(); });
  if (policy.complement) extend([](const OutputArray& a) { return a.complement(); });
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

OutputArray canonicalize(const OutputArray& s, const SymmetryPolicy& policy) {
  if (policy.group_order() == 1) return s;
  return orbit(s, policy).front();
}

double k_from_counts(const BigInt& count, const BigInt& halting) {
  // Both counts may exceed double range individually only in absurd spaces;
  // the ratio is formed in long double to keep the low digits.
  long double c = count.convert_to<long double>();
  long double h = halting.convert_to<long double>();
  return static_cast<double>(-std::log2(c / h));
}

std::optional<double> k_of(const FrequencyDistribution& dist, const OutputArray& s) {
  auto it = dist.entries().find(s);
  if (it == dist.entries().end()) return std::nullopt;
  return k_from_counts(it->second, dist.halting());
}

ComplexityTable::ComplexityTable(TableSource source, SymmetryPolicy policy, std::optional<int> side)
    : source_(std::move(source)), policy_(policy), side_(side) {}

void ComplexityTable::accumulate(const OutputArray& canonical, const BigInt& count) {
  auto& e = entries_[canonical];
  e.count += count;
  e.k = k_from_counts(e.count, source_.halting);
}

const ComplexityTable::Entry* ComplexityTable::find_canonical(const OutputArray& canonical) const {
  auto it = entries_.find(canonical);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> ComplexityTable::lookup(const OutputArray& s) const {
  if (const auto* e = find_canonical(canonicalize(s, policy_))) return e->k;
  return std::nullopt;
}

double ComplexityTable::completeness() const {
  if (!side_) return 0.0;
  const int cells = *side_ * *side_;
  if (cells > 62) return 0.0;
  std::uint64_t covered = 0;
  for (const auto& [a, e] : entries_) covered += orbit(a, policy_).size();
  return static_cast<double>(covered) / std::ldexp(1.0, cells);
}

std::vector<std::pair<OutputArray, ComplexityTable::Entry>> ComplexityTable::sorted() const {
  std::vector<std::pair<OutputArray, Entry>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.first < b.first;
  });
  return out;
}

namespace {

TableSource source_of(const FrequencyDistribution& dist) {
  return TableSource{dist.space(), dist.budget(), dist.halting(), dist.nonhalting(), dist.record()};
}

ComplexityTable grouped_table(const FrequencyDistribution& dist, std::optional<int> side,
                              const SymmetryPolicy& policy) {
  ComplexityTable table(source_of(dist), policy, side);
  // Accumulate in array order so the floating k of each class is computed
  // from the same final count regardless of hash order.
  std::map<OutputArray, BigInt> sums;
  for (const auto& [s, c] : dist.entries()) {
    if (side && (s.height() != *side || s.width() != *side)) continue;
    sums[canonicalize(s, policy)] += c;
  }
  for (const auto& [s, c] : sums) table.accumulate(s, c);
  return table;
}

}  // namespace

ComplexityTable patch_table(const FrequencyDistribution& dist, int side, const SymmetryPolicy& policy) {
  if (side < 1) throw RejectedInput("patch side must be at least 1");
  return grouped_table(dist, side, policy);
}

ComplexityTable full_table(const FrequencyDistribution& dist, const SymmetryPolicy& policy) {
  return grouped_table(dist, std::nullopt, policy);
}

std::vector<RankedEntry> rank_report(const FrequencyDistribution& dist,
                                     const std::function<bool(const OutputArray&)>& keep) {
  std::vector<RankedEntry> out;
  for (const auto& [s, c] : dist.sorted()) {
    if (keep && !keep(s)) continue;
    out.push_back(RankedEntry{s, c, k_from_counts(c, dist.halting())});
  }
  return out;
}

std::vector<SquareCensus> square_census(const FrequencyDistribution& dist, int max_side) {
  std::vector<SquareCensus> out;
  for (int d = 1; d <= max_side; ++d) {
    SquareCensus c;
    c.side = d;
    c.possible = BigInt(1) << (d * d);
    for (const auto& [s, n] : dist.entries())
      if (s.height() == d && s.width() == d) ++c.present;
    out.push_back(c);
  }
  return out;
}

std::vector<Climber> find_climbers(const FrequencyDistribution& dist) {
  struct Item {
    const OutputArray* array;
    double k;
  };
  std::map<std::pair<int, int>, std::vector<Item>> by_shape;
  std::map<int, std::vector<Item>> by_area;
  for (const auto& [s, c] : dist.entries()) {
    Item it{&s, k_from_counts(c, dist.halting())};
    by_shape[{s.height(), s.width()}].push_back(it);
    by_area[s.height() * s.width()].push_back(it);
  }
  auto by_k = [](const Item& a, const Item& b) { return a.k != b.k ? a.k < b.k : *a.array < *b.array; };
  for (auto& [area, items] : by_area) std::sort(items.begin(), items.end(), by_k);

  std::vector<Climber> out;
  for (auto& [shape, items] : by_shape) {
    std::sort(items.begin(), items.end(), by_k);
    const auto n = items.size();
    const double median = n % 2 ? items[n / 2].k : 0.5 * (items[n / 2 - 1].k + items[n / 2].k);
    const int area = shape.first * shape.second;
    for (const auto& p : items) {
      if (p.k >= median) break;
      // Most complex smaller array still inside (k(P), median).
      const Item* witness = nullptr;
      for (const auto& [a, smaller] : by_area) {
        if (a >= area) break;
        auto hi = std::lower_bound(smaller.begin(), smaller.end(), median,
                                   [](const Item& it, double v) { return it.k < v; });
        if (hi == smaller.begin()) continue;
        const Item& cand = *(hi - 1);
        if (cand.k > p.k && (!witness || cand.k > witness->k)) witness = &cand;
      }
      if (witness) out.push_back(Climber{*p.array, p.k, median, *witness->array, witness->k});
    }
  }
  std::sort(out.begin(), out.end(), [](const Climber& a, const Climber& b) {
    return a.k != b.k ? a.k < b.k : a.array < b.array;
  });
  return out;
}

// ---------------------------------------------------------------------------
// File format: the distribution headers plus #policy and #side, then
// `<array> <count> <k>` records.

void write_table(std::ostream& out, const ComplexityTable& table) {
  const auto& src = table.source();
  out << "#space " << src.space.states << ' ' << src.space.symbols << ' ' << (src.space.dims == Dims::TwoD ? 2 : 1)
      << '\n';
  out << "#budget " << src.budget << '\n';
  out << "#halting " << src.halting << '\n';
  out << "#nonhalting " << src.nonhalting << '\n';
  out << "#policy " << table.policy().name() << '\n';
  out << "#side " << (table.side() ? std::to_string(*table.side()) : "any") << '\n';
  char buf[64];
  for (const auto& [s, e] : table.sorted()) {
    std::snprintf(buf, sizeof buf, "%.6f", e.k);
    out << s.key() << ' ' << e.count << ' ' << buf << '\n';
  }
}

ComplexityTable read_table(std::istream& in) {
  std::optional<MachineSpace> space;
  std::optional<std::int64_t> budget;
  std::optional<BigInt> halting, nonhalting;
  std::optional<SymmetryPolicy> policy;
  std::optional<int> side;
  bool side_seen = false;
  std::vector<std::pair<OutputArray, BigInt>> rows;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw RejectedInput("table line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line.front() == '#') {
      std::string tag, v;
      ls >> tag;
      if (tag == "#space") {
        int n = 0, m = 0, d = 0;
        if (!(ls >> n >> m >> d) || (d != 1 && d != 2)) fail("malformed #space header");
        space = MachineSpace{n, m, d == 2 ? Dims::TwoD : Dims::OneD};
      } else if (tag == "#budget") {
        std::int64_t b = 0;
        if (!(ls >> b)) fail("malformed #budget header");
        budget = b;
      } else if (tag == "#halting" || tag == "#nonhalting") {
        if (!(ls >> v) || v.find_first_not_of("0123456789") != std::string::npos) fail("malformed " + tag);
        (tag == "#halting" ? halting : nonhalting) = BigInt(v);
      } else if (tag == "#policy") {
        if (!(ls >> v)) fail("malformed #policy header");
        policy = SymmetryPolicy::parse(v);
      } else if (tag == "#side") {
        if (!(ls >> v)) fail("malformed #side header");
        side_seen = true;
        if (v != "any") side = std::stoi(v);
      } else if (tag != "#mode") {
        fail("unknown header '" + tag + "'");
      }
      continue;
    }
    std::string key, count, k;
    if (!(ls >> key >> count >> k) || count.find_first_not_of("0123456789") != std::string::npos)
      fail("malformed record '" + line + "'");
    rows.emplace_back(OutputArray::parse(key), BigInt(count));
  }
  if (!space || !budget || !halting || !nonhalting || !policy || !side_seen)
    throw RejectedInput("table file is missing headers");
  // k values are recomputed from the exact counts; the printed column is a
  // six-decimal rendering.
  ComplexityTable table(TableSource{*space, *budget, *halting, *nonhalting, {}}, *policy, side);
  for (const auto& [s, c] : rows) {
    if (c <= 0) throw RejectedInput("table record " + s.key() + " has a non-positive count");
    table.accumulate(s, c);
  }
  return table;
}

void save_table(const std::string& path, const ComplexityTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RejectedInput("cannot write " + path);
  write_table(out, table);
}

ComplexityTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RejectedInput("cannot read " + path);
  return read_table(in);
}

}  // namespace ctm
