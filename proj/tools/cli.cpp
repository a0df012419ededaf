#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>

#include "ctm/bdm.hpp"
#include "ctm/complexity.hpp"
#include "ctm/distribution.hpp"
#include "ctm/eca.hpp"
#include "ctm/errors.hpp"
#include "ctm/study.hpp"

#ifndef CTM_VERSION
#define CTM_VERSION "0.0.0"
#endif

namespace ctm::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RejectedInput("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char h[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(h, sizeof h, "%02x", md[i]);
    hex += h;
  }
  return hex;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// "10000000", "1e7" or "2.5e6"; must denote a whole number.
std::uint64_t parse_count(const std::string& text, const std::string& what) {
  static const std::regex plain("[0-9]+");
  static const std::regex sci("([0-9]+)(?:\\.([0-9]+))?[eE]\\+?([0-9]+)");
  std::smatch m;
  if (std::regex_match(text, plain)) return std::stoull(text);
  if (std::regex_match(text, m, sci)) {
    std::string digits = m[1].str() + m[2].str();
    long exp = std::stol(m[3].str()) - static_cast<long>(m[2].length());
    if (exp < 0) {
      if (digits.size() < static_cast<std::size_t>(-exp) ||
          digits.find_first_not_of('0', digits.size() + exp) != std::string::npos)
        throw RejectedInput(what + " must be a whole number: " + text);
      digits.resize(digits.size() + exp);
      exp = 0;
    }
    BigInt v(digits.empty() ? "0" : digits);
    for (long i = 0; i < exp; ++i) v *= 10;
    if (v > std::numeric_limits<std::uint64_t>::max()) throw RejectedInput(what + " is too large: " + text);
    return v.convert_to<std::uint64_t>();
  }
  throw RejectedInput(what + " is not a count: " + text);
}

// "0..127", "30", "0..10,30,110".
std::vector<int> parse_rules(const std::string& text) {
  std::vector<int> rules;
  std::istringstream in(text);
  std::string part;
  static const std::regex span("([0-9]+)\\.\\.([0-9]+)"), single("[0-9]+");
  while (std::getline(in, part, ',')) {
    std::smatch m;
    if (std::regex_match(part, m, span)) {
      int a = std::stoi(m[1]), b = std::stoi(m[2]);
      if (a > b) throw RejectedInput("empty rule range " + part);
      for (int r = a; r <= b; ++r) rules.push_back(r);
    } else if (std::regex_match(part, single)) {
      rules.push_back(std::stoi(part));
    } else {
      throw RejectedInput("bad rule list element '" + part + "'");
    }
  }
  for (int r : rules) EcaRule{r};
  if (rules.empty()) throw RejectedInput("no rules given");
  return rules;
}

std::pair<int, int> parse_span(const std::string& text, const std::string& what) {
  static const std::regex span("([0-9]+)\\.\\.([0-9]+)"), single("[0-9]+");
  std::smatch m;
  if (std::regex_match(text, m, span)) {
    int a = std::stoi(m[1]), b = std::stoi(m[2]);
    if (a > b) throw RejectedInput("empty " + what + " range " + text);
    return {a, b};
  }
  if (std::regex_match(text, single)) return {std::stoi(text), std::stoi(text)};
  throw RejectedInput("bad " + what + " range '" + text + "' (expected a..b)");
}

IndexRange parse_index_range(const std::string& text) {
  static const std::regex r("([0-9]+)-([0-9]+)");
  std::smatch m;
  if (!std::regex_match(text, m, r)) throw RejectedInput("bad index range '" + text + "' (expected a-b)");
  IndexRange range{BigInt(m[1].str()), BigInt(m[2].str())};
  if (range.begin >= range.end) throw RejectedInput("index range " + text + " is empty");
  return range;
}

MachineSpace make_space(int states, int symbols, int dims) {
  if (dims != 1 && dims != 2) throw RejectedInput("--dims must be 1 or 2");
  MachineSpace s{states, symbols, dims == 2 ? Dims::TwoD : Dims::OneD};
  s.validate();
  return s;
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RejectedInput("cannot write " + path);
  writer(out);
  if (!out) throw RejectedInput("error writing " + path);
}

void write_dist_csv(std::ostream& out, const FrequencyDistribution& d) {
  out << "array,count,k\n";
  for (const auto& [s, c] : d.sorted()) out << s.key() << ',' << c << ',' << fixed6(k_from_counts(c, d.halting())) << '\n';
}

void write_table_csv(std::ostream& out, const ComplexityTable& t) {
  out << "array,count,k\n";
  for (const auto& [s, e] : t.sorted()) out << s.key() << ',' << e.count << ',' << fixed6(e.k) << '\n';
}

bool looks_like_table(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#')
    if (line.rfind("#policy", 0) == 0) return true;
  return false;
}

std::string strip_slash(std::string p) {
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  return p;
}

std::string manifest_path(const std::string& out) { return strip_slash(out) + ".manifest.json"; }

// (path, digest) of an output file, or of every file under an output
// directory in sorted order.
std::vector<std::pair<std::string, std::string>> digest_outputs(const std::string& out) {
  std::vector<std::pair<std::string, std::string>> d;
  const std::string root = strip_slash(out);
  if (fs::is_directory(root)) {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) d.emplace_back(f, sha256_file(f));
  } else {
    d.emplace_back(root, sha256_file(root));
  }
  return d;
}

// State gathered while a subcommand runs, for its manifest.
struct Invocation {
  std::vector<std::string> inputs;
  std::string out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err, bool manifests) : out_(out), err_(err), manifests_(manifests) {}
  int run(const std::vector<std::string>& args);

 private:
  void add_build(CLI::App& app);
  void add_merge(CLI::App& app);
  void add_k(CLI::App& app);
  void add_patch_table(CLI::App& app);
  void add_table(CLI::App& app);
  void add_rank(CLI::App& app);
  void add_census(CLI::App& app);
  void add_climbers(CLI::App& app);
  void add_bdm(CLI::App& app);
  void add_eca(CLI::App& app);
  void add_compress_study(CLI::App& app);
  void add_compare(CLI::App& app);
  void add_calibrate(CLI::App& app);
  void add_replay(CLI::App& app);

  void write_manifest(const CLI::App& sub, const std::vector<std::string>& args, double seconds) const;

  std::ostream& out_;
  std::ostream& err_;
  bool manifests_;
  Invocation inv_;
  std::function<int()> action_;
  int exit_code_ = 0;
};

void Cli::add_build(CLI::App& app) {
  auto* sub = app.add_subcommand("build", "Build an output frequency distribution");
  struct Opts {
    int states = 0, symbols = 2, dims = 2;
    std::int64_t budget = 0;
    std::string mode = "exhaustive", samples, range, engine = "tree", format = "dist";
    std::optional<std::uint64_t> seed;
    bool direct = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--states", o->states, "Number of non-halting states")->required();
  sub->add_option("--symbols", o->symbols, "Number of symbols")->capture_default_str();
  sub->add_option("--dims", o->dims, "1 (tape) or 2 (grid)")->capture_default_str();
  sub->add_option("--budget", o->budget, "Step budget per run")->required();
  sub->add_option("--mode", o->mode, "exhaustive | sampled | full")->capture_default_str();
  sub->add_option("--samples", o->samples, "Sample count for --mode sampled (e.g. 1e7)");
  sub->add_option("--seed", o->seed, "Seed for --mode sampled");
  sub->add_option("--range", o->range, "Reduced index shard a-b (exhaustive only)");
  sub->add_option("--engine", o->engine, "tree | brute")->capture_default_str();
  sub->add_flag("--direct-blank-runs", o->direct, "Execute blank-1 runs instead of deriving them");
  sub->add_option("--workers", inv_.workers, "Worker threads")->capture_default_str();
  sub->add_option("--out", inv_.out, "Output file")->required();
  sub->add_option("--format", o->format, "dist | csv")->capture_default_str();
  sub->callback([this, o] {
    action_ = [this, o] {
      const auto space = make_space(o->states, o->symbols, o->dims);
      BuildOptions opts;
      opts.workers = inv_.workers;
      if (o->engine == "brute") opts.engine = BuildOptions::Engine::Brute;
      else if (o->engine != "tree") throw RejectedInput("--engine must be tree or brute");
      opts.direct_blank_runs = o->direct;
      if (!o->range.empty()) {
        if (o->mode != "exhaustive") throw RejectedInput("--range applies to --mode exhaustive only");
        opts.range = parse_index_range(o->range);
        opts.engine = BuildOptions::Engine::Brute;
      }
      std::optional<FrequencyDistribution> dist;
      if (o->mode == "sampled") {
        if (!o->seed) throw RejectedInput("--mode sampled requires --seed");
        if (o->samples.empty()) throw RejectedInput("--mode sampled requires --samples");
        inv_.seed = o->seed;
        dist = build_sampled(space, o->budget, parse_count(o->samples, "--samples"), *o->seed, opts);
      } else if (o->mode == "exhaustive" || o->mode == "full") {
        if (o->seed || !o->samples.empty()) throw RejectedInput("--seed and --samples apply to --mode sampled only");
        dist = build_exhaustive(space, o->budget, o->mode == "exhaustive", opts);
      } else {
        throw RejectedInput("--mode must be exhaustive, sampled or full");
      }
      if (o->format == "dist") save_distribution(inv_.out, *dist);
      else if (o->format == "csv") write_file(inv_.out, [&](std::ostream& s) { write_dist_csv(s, *dist); });
      else throw RejectedInput("--format must be dist or csv");
      out_ << "arrays " << dist->distinct() << " halting " << dist->halting() << " nonhalting " << dist->nonhalting()
           << '\n';
      return 0;
    };
  });
}

void Cli::add_merge(CLI::App& app) {
  auto* sub = app.add_subcommand("merge", "Merge distributions from disjoint shards or seeds");
  auto format = std::make_shared<std::string>("dist");
  sub->add_option("inputs", inv_.inputs, "Distribution files")->required()->expected(2, -1);
  sub->add_option("--out", inv_.out, "Output file")->required();
  sub->add_option("--format", *format, "dist | csv")->capture_default_str();
  sub->callback([this, format] {
    action_ = [this, format] {
      auto acc = load_distribution(inv_.inputs.front());
      for (std::size_t i = 1; i < inv_.inputs.size(); ++i) acc = merge(acc, load_distribution(inv_.inputs[i]));
      if (*format == "dist") save_distribution(inv_.out, acc);
      else if (*format == "csv") write_file(inv_.out, [&](std::ostream& s) { write_dist_csv(s, acc); });
      else throw RejectedInput("--format must be dist or csv");
      out_ << "arrays " << acc.distinct() << " halting " << acc.halting() << '\n';
      return 0;
    };
  });
}

void Cli::add_k(CLI::App& app) {
  auto* sub = app.add_subcommand("k", "Complexity of arrays from a distribution or table");
  struct Opts {
    std::string dist, table;
    std::vector<std::string> arrays;
  };
  auto o = std::make_shared<Opts>();
  auto* d = sub->add_option("--dist", o->dist, "Distribution file");
  auto* t = sub->add_option("--table", o->table, "Complexity table file");
  d->excludes(t);
  sub->add_option("--array", o->arrays, "Array key, e.g. 3x3:010101010")->required();
  sub->callback([this, o] {
    action_ = [this, o] {
      if (o->dist.empty() == o->table.empty()) throw RejectedInput("give exactly one of --dist or --table");
      std::function<std::optional<double>(const OutputArray&)> lookup;
      std::optional<FrequencyDistribution> dist;
      std::optional<ComplexityTable> table;
      if (!o->dist.empty()) {
        dist = load_distribution(o->dist);
        lookup = [&](const OutputArray& a) { return k_of(*dist, a); };
      } else {
        table = load_table(o->table);
        lookup = [&](const OutputArray& a) { return table->lookup(a); };
      }
      for (const auto& key : o->arrays) {
        auto a = OutputArray::parse(key);
        auto k = lookup(a);
        out_ << a.key() << ' ' << (k ? fixed6(*k) : std::string("absent")) << '\n';
      }
      return 0;
    };
  });
}

void Cli::add_patch_table(CLI::App& app) {
  auto* sub = app.add_subcommand("patch-table", "Complexity table of d x d arrays");
  struct Opts {
    std::string dist, symmetry = "none", format = "tbl";
    int d = 3;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--dist", o->dist, "Distribution file")->required();
  sub->add_option("--d", o->d, "Patch side")->capture_default_str();
  sub->add_option("--symmetry", o->symmetry, "none | full | comma list of rot,ref,comp")->capture_default_str();
  sub->add_option("--out", inv_.out, "Output file")->required();
  sub->add_option("--format", o->format, "tbl | csv")->capture_default_str();
  sub->callback([this, o] {
    action_ = [this, o] {
      inv_.inputs = {o->dist};
      auto t = patch_table(load_distribution(o->dist), o->d, SymmetryPolicy::parse(o->symmetry));
      if (o->format == "tbl") save_table(inv_.out, t);
      else if (o->format == "csv") write_file(inv_.out, [&](std::ostream& s) { write_table_csv(s, t); });
      else throw RejectedInput("--format must be tbl or csv");
      out_ << "classes " << t.size() << " completeness " << fixed6(t.completeness()) << '\n';
      return 0;
    };
  });
}

void Cli::add_table(CLI::App& app) {
  auto* sub = app.add_subcommand("table", "Complexity table of every array in a distribution");
  struct Opts {
    std::string dist, symmetry = "none", format = "tbl";
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--dist", o->dist, "Distribution file")->required();
  sub->add_option("--symmetry", o->symmetry, "none | full | comma list of rot,ref,comp")->capture_default_str();
  sub->add_option("--out", inv_.out, "Output file")->required();
  sub->add_option("--format", o->format, "tbl | csv")->capture_default_str();
  sub->callback([this, o] {
    action_ = [this, o] {
      inv_.inputs = {o->dist};
      auto t = full_table(load_distribution(o->dist), SymmetryPolicy::parse(o->symmetry));
      if (o->format == "tbl") save_table(inv_.out, t);
      else if (o->format == "csv") write_file(inv_.out, [&](std::ostream& s) { write_table_csv(s, t); });
      else throw RejectedInput("--format must be tbl or csv");
      out_ << "classes " << t.size() << '\n';
      return 0;
    };
  });
}

void Cli::add_rank(CLI::App& app) {
  auto* sub = app.add_subcommand("rank", "Arrays by descending frequency");
  struct Opts {
    std::string dist;
    std::optional<int> height, width, square;
    std::optional<std::size_t> top, bottom;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--dist", o->dist, "Distribution file")->required();
  sub->add_option("--height", o->height, "Keep arrays of this height");
  sub->add_option("--width", o->width, "Keep arrays of this width");
  sub->add_option("--square", o->square, "Keep d x d arrays");
  sub->add_option("--top", o->top, "Only the first N");
  sub->add_option("--bottom", o->bottom, "Only the last N");
  sub->add_option("--out", inv_.out, "CSV output (stdout when omitted)");
  sub->callback([this, o] {
    action_ = [this, o] {
      inv_.inputs = {o->dist};
      auto d = load_distribution(o->dist);
      auto rows = rank_report(d, [&](const OutputArray& a) {
        if (o->height && a.height() != *o->height) return false;
        if (o->width && a.width() != *o->width) return false;
        if (o->square && (a.height() != *o->square || a.width() != *o->square)) return false;
        return true;
      });
      auto emit = [&](std::ostream& s) {
        s << "rank,array,count,k\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const bool in_top = o->top && i < *o->top;
          const bool in_bottom = o->bottom && i + *o->bottom >= rows.size();
          if ((o->top || o->bottom) && !in_top && !in_bottom) continue;
          s << i + 1 << ',' << rows[i].array.key() << ',' << rows[i].count << ',' << fixed6(rows[i].k) << '\n';
        }
      };
      if (inv_.out.empty()) emit(out_);
      else write_file(inv_.out, emit);
      return 0;
    };
  });
}

void Cli::add_census(CLI::App& app) {
  auto* sub = app.add_subcommand("census", "Count the distinct d x d arrays present");
  auto dist = std::make_shared<std::string>();
  auto max_side = std::make_shared<int>(4);
  sub->add_option("--dist", *dist, "Distribution file")->required();
  sub->add_option("--max-side", *max_side, "Largest side")->capture_default_str();
  sub->callback([this, dist, max_side] {
    action_ = [this, dist, max_side] {
      out_ << "side,present,possible\n";
      for (const auto& c : square_census(load_distribution(*dist), *max_side))
        out_ << c.side << ',' << c.present << ',' << c.possible << '\n';
      return 0;
    };
  });
}

void Cli::add_climbers(CLI::App& app) {
  auto* sub = app.add_subcommand("climbers", "Arrays simpler than some smaller array");
  auto dist = std::make_shared<std::string>();
  sub->add_option("--dist", *dist, "Distribution file")->required();
  sub->add_option("--out", inv_.out, "CSV output (stdout when omitted)");
  sub->callback([this, dist] {
    action_ = [this, dist] {
      inv_.inputs = {*dist};
      auto cs = find_climbers(load_distribution(*dist));
      auto emit = [&](std::ostream& s) {
        s << "array,k,size_median_k,smaller,smaller_k\n";
        for (const auto& c : cs)
          s << c.array.key() << ',' << fixed6(c.k) << ',' << fixed6(c.size_median_k) << ',' << c.smaller.key() << ','
            << fixed6(c.smaller_k) << '\n';
      };
      if (inv_.out.empty()) emit(out_);
      else write_file(inv_.out, emit);
      return 0;
    };
  });
}

void Cli::add_bdm(CLI::App& app) {
  auto* sub = app.add_subcommand("bdm", "Block decomposition score of a binary image");
  struct Opts {
    std::string table, image, mode = "log";
    std::optional<int> d;
    bool sliding = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--table", o->table, "Patch complexity table")->required();
  sub->add_option("--image", o->image, "PBM (P1) or row-string image")->required();
  sub->add_option("--mode", o->mode, "sum | log")->capture_default_str();
  sub->add_option("--d", o->d, "Patch side (defaults to the table's)");
  sub->add_flag("--sliding", o->sliding, "Score every overlapping window instead of a partition");
  sub->callback([this, o] {
    action_ = [this, o] {
      auto t = load_table(o->table);
      const int d = o->d ? *o->d : t.side().value_or(3);
      BdmMode mode;
      if (o->mode == "sum") mode = BdmMode::Sum;
      else if (o->mode == "log") mode = BdmMode::Log;
      else throw RejectedInput("--mode must be sum or log");
      out_ << fixed6(bdm(load_image(o->image), t, d, mode, o->sliding)) << '\n';
      return 0;
    };
  });
}

void Cli::add_eca(CLI::App& app) {
  auto* sub = app.add_subcommand("eca-classify", "Rank elementary cellular automata by complexity");
  struct Opts {
    std::string rules = "0..127", init = "single", scorer;
    int steps = 36;
    std::optional<int> width;
    double density = 0.5;
    std::optional<std::uint64_t> seed;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--rules", o->rules, "Rule list, e.g. 0..127 or 30,110")->capture_default_str();
  sub->add_option("--init", o->init, "single | random:SEED | random (with --seed)")->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed for a random initial row");
  sub->add_option("--steps", o->steps, "Evolution steps")->capture_default_str();
  sub->add_option("--width", o->width, "Row width (single: 2t+1, random: 100)");
  sub->add_option("--density", o->density, "Density of a random initial row")->capture_default_str();
  sub->add_option("--scorer", o->scorer, "bdm-log:TABLE | bdm-sum:TABLE | compress[:deflate|gzip]")->required();
  sub->add_option("--workers", inv_.workers, "Worker threads")->capture_default_str();
  sub->add_option("--out", inv_.out, "CSV output")->required();
  sub->callback([this, o] {
    action_ = [this, o] {
      const auto rules = parse_rules(o->rules);
      if (o->steps < 0) throw RejectedInput("--steps must be non-negative");
      BitRow initial;
      if (o->init == "single") {
        if (o->seed) throw RejectedInput("--seed applies to random initial rows only");
        initial = single_cell_initial(o->width.value_or(2 * o->steps + 1));
      } else if (o->init.rfind("random", 0) == 0) {
        std::optional<std::uint64_t> seed = o->seed;
        if (o->init.size() > 6) {
          if (o->init[6] != ':') throw RejectedInput("--init must be single, random or random:SEED");
          auto s = parse_count(o->init.substr(7), "random seed");
          if (seed && *seed != s) throw RejectedInput("--init seed and --seed disagree");
          seed = s;
        }
        if (!seed) throw RejectedInput("a random initial row requires a seed (--init random:SEED or --seed)");
        inv_.seed = seed;
        initial = random_initial(o->width.value_or(100), *seed, o->density);
      } else {
        throw RejectedInput("--init must be single, random or random:SEED");
      }

      std::function<double(const OutputArray&)> scorer;
      std::shared_ptr<ComplexityTable> table;
      std::shared_ptr<Compressor> compressor;
      const auto& sc = o->scorer;
      if (sc.rfind("bdm-log:", 0) == 0 || sc.rfind("bdm-sum:", 0) == 0) {
        const std::string path = sc.substr(8);
        inv_.inputs = {path};
        table = std::make_shared<ComplexityTable>(load_table(path));
        const int d = table->side().value_or(3);
        const BdmMode mode = sc[4] == 'l' ? BdmMode::Log : BdmMode::Sum;
        scorer = [table, d, mode](const OutputArray& a) { return bdm(a, *table, d, mode); };
      } else if (sc == "compress" || sc.rfind("compress:", 0) == 0) {
        compressor = make_compressor(sc == "compress" ? "deflate" : sc.substr(9));
        scorer = [compressor](const OutputArray& a) {
          return static_cast<double>(compressed_image_size(a, *compressor));
        };
      } else {
        throw RejectedInput("unknown scorer '" + sc + "'");
      }
      auto ranked = classify(rules, initial, o->steps, scorer, inv_.workers);
      write_file(inv_.out, [&](std::ostream& s) {
        s << "rule,score,rank\n";
        for (std::size_t i = 0; i < ranked.size(); ++i)
          s << ranked[i].rule << ',' << fixed6(ranked[i].score) << ',' << i + 1 << '\n';
      });
      return 0;
    };
  });
}

void Cli::add_compress_study(CLI::App& app) {
  auto* sub = app.add_subcommand("compress-study", "Compressed size of files of strings by complexity decile");
  struct Opts {
    std::string catalog, lengths = "8..12", compressor = "deflate";
    std::optional<std::uint64_t> seed;
    int partitions = 10, files = 100, strings = 100;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--catalog", o->catalog, "1D distribution or complexity table")->required();
  sub->add_option("--lengths", o->lengths, "String lengths a..b")->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed for drawing strings")->required();
  sub->add_option("--partitions", o->partitions, "Complexity partitions")->capture_default_str();
  sub->add_option("--files", o->files, "Files per partition")->capture_default_str();
  sub->add_option("--strings", o->strings, "Strings per file")->capture_default_str();
  sub->add_option("--compressor", o->compressor, "deflate | gzip")->capture_default_str();
  sub->add_option("--workers", inv_.workers, "Accepted for uniformity; the study is single-threaded");
  sub->add_option("--out", inv_.out, "Output directory")->required();
  sub->callback([this, o] {
    action_ = [this, o] {
      inv_.inputs = {o->catalog};
      inv_.seed = o->seed;
      auto [lo, hi] = parse_span(o->lengths, "length");
      const StringCatalog cat = looks_like_table(o->catalog) ? build_catalog(load_table(o->catalog), lo, hi)
                                                            : build_catalog(load_distribution(o->catalog), lo, hi);
      auto comp = make_compressor(o->compressor);
      const fs::path root = strip_slash(inv_.out);
      if (fs::exists(root)) fs::remove_all(root);
      fs::create_directories(root);
      std::ostringstream sizes, summary, trend;
      sizes << "length,decile,file,bytes,compressed\n";
      summary << "length,decile,mean_compressed\n";
      trend << "length,strings,partition_size,discarded,spearman,degenerate,notice\n";
      for (int l = lo; l <= hi; ++l) {
        auto it = cat.by_length.find(l);
        if (it == cat.by_length.end() || it->second.size() < static_cast<std::size_t>(o->partitions)) {
          err_ << "length " << l << ": too few strings in the catalog, skipped\n";
          continue;
        }
        auto set = generate_files(cat, l, *o->seed, DecileLayout{o->partitions, o->files, o->strings});
        if (!set.scaling_notice.empty()) err_ << "notice: " << set.scaling_notice << '\n';
        auto tr = decile_trend(set, *comp);
        char name[64];
        std::vector<std::size_t> seen(static_cast<std::size_t>(set.partitions), 0);
        for (const auto& f : set.files) {
          std::snprintf(name, sizeof name, "L%02d/p%02d_f%03d.txt", l, f.decile, f.index);
          write_file((root / name).string(), [&](std::ostream& s) { s << f.content; });
          sizes << l << ',' << f.decile << ',' << f.index << ',' << f.content.size() << ','
                << tr.sizes[static_cast<std::size_t>(f.decile - 1)][seen[static_cast<std::size_t>(f.decile - 1)]++]
                << '\n';
        }
        for (std::size_t p = 0; p < tr.mean_sizes.size(); ++p)
          summary << l << ',' << p + 1 << ',' << fixed6(tr.mean_sizes[p]) << '\n';
        trend << l << ',' << it->second.size() << ',' << set.partition_size << ',' << set.discarded << ','
              << (tr.degenerate ? std::string("nan") : fixed6(tr.spearman)) << ',' << (tr.degenerate ? 1 : 0) << ",\""
              << set.scaling_notice << "\"\n";
        out_ << "length " << l << " spearman " << (tr.degenerate ? std::string("degenerate") : fixed6(tr.spearman))
             << '\n';
      }
      write_file((root / "sizes.csv").string(), [&](std::ostream& s) { s << sizes.str(); });
      write_file((root / "summary.csv").string(), [&](std::ostream& s) { s << summary.str(); });
      write_file((root / "trend.csv").string(), [&](std::ostream& s) { s << trend.str(); });
      return 0;
    };
  });
}

void Cli::add_compare(CLI::App& app) {
  auto* sub = app.add_subcommand("compare-1d2d", "Join 1D strings with height-1 arrays of a 2D distribution");
  auto a = std::make_shared<std::string>(), b = std::make_shared<std::string>();
  sub->add_option("--a", *a, "1D distribution")->required();
  sub->add_option("--b", *b, "2D distribution")->required();
  sub->add_option("--out", inv_.out, "CSV of paired values")->required();
  sub->callback([this, a, b] {
    action_ = [this, a, b] {
      inv_.inputs = {*a, *b};
      auto c = compare_1d_2d(load_distribution(*a), load_distribution(*b));
      write_file(inv_.out, [&](std::ostream& s) {
        s << "string,length,k_1d,k_2d\n";
        for (const auto& p : c.pairs) s << p.bits << ',' << p.length << ',' << fixed6(p.k_1d) << ',' << fixed6(p.k_2d) << '\n';
      });
      out_ << "shared " << c.pairs.size() << " pearson " << fixed6(c.overall.pearson) << " spearman "
           << fixed6(c.overall.spearman) << " partial_given_length " << fixed6(c.partial_given_length) << '\n';
      out_ << "fit k_2d = " << fixed6(c.fit.intercept) << " + " << fixed6(c.fit.slope) << " * k_1d\n";
      for (const auto& [l, r] : c.by_length)
        out_ << "length " << l << " pearson " << fixed6(r.pearson) << " spearman " << fixed6(r.spearman) << '\n';
      return 0;
    };
  });
}

void Cli::add_calibrate(CLI::App& app) {
  auto* sub = app.add_subcommand("calibrate", "Choose a step budget from sampled halting times");
  struct Opts {
    int states = 0, symbols = 2, dims = 2;
    std::string samples;
    std::int64_t probe = 2000;
    double miss = 1e-4;
    std::optional<std::uint64_t> seed;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--states", o->states, "Number of non-halting states")->required();
  sub->add_option("--symbols", o->symbols, "Number of symbols")->capture_default_str();
  sub->add_option("--dims", o->dims, "1 or 2")->capture_default_str();
  sub->add_option("--samples", o->samples, "Sample count (at least 1e4)")->required();
  sub->add_option("--probe-budget", o->probe, "Step budget of the probe runs")->capture_default_str();
  sub->add_option("--miss", o->miss, "Acceptable fraction of halting machines beyond the cutoff")->capture_default_str();
  sub->add_option("--seed", o->seed, "Sampling seed")->required();
  sub->add_option("--out", inv_.out, "CSV of the cumulative halting-time distribution")->required();
  sub->callback([this, o] {
    action_ = [this, o] {
      inv_.seed = o->seed;
      auto cal = calibrate_runtime(make_space(o->states, o->symbols, o->dims), parse_count(o->samples, "--samples"),
                                   o->probe, o->miss, *o->seed);
      write_file(inv_.out, [&](std::ostream& s) {
        s << "steps,halted,cumulative\n";
        for (const auto& [t, c] : cal.halting_times) s << t << ',' << c << ',' << fixed6(cal.cumulative(t)) << '\n';
      });
      out_ << "halted " << cal.halted << " timed_out " << cal.timed_out << " filtered " << cal.filtered
           << " max_observed " << cal.max_observed << " cutoff " << cal.cutoff << " missed "
           << fixed6(cal.missed_mass_bound) << (cal.busy_beaver_known ? " (known Busy Beaver runtime)" : "") << '\n';
      return 0;
    };
  });
}

void Cli::add_replay(CLI::App& app) {
  auto* sub = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  auto path = std::make_shared<std::string>();
  auto keep = std::make_shared<bool>(false);
  sub->add_option("--manifest", *path, "Manifest written next to an output")->required();
  sub->add_flag("--keep", *keep, "Keep the replayed outputs (<out>.replay)");
  sub->callback([this, path, keep] {
    action_ = [this, path, keep] {
      std::ifstream in(*path);
      if (!in) throw RejectedInput("cannot read " + *path);
      json m = json::parse(in);
      const fs::path old_cwd = fs::current_path();
      struct Restore {
        fs::path p;
        ~Restore() { fs::current_path(p); }
      } restore{old_cwd};
      fs::current_path(m.at("cwd").get<std::string>());

      for (const auto& i : m.at("inputs"))
        if (sha256_file(i.at("path")) != i.at("sha256"))
          throw RejectedInput("input " + i.at("path").get<std::string>() + " changed since the manifest was written");

      auto args = m.at("argv").get<std::vector<std::string>>();
      std::string original;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" && i + 1 < args.size()) {
          original = strip_slash(args[i + 1]);
          args[i + 1] = original + ".replay";
        } else if (args[i].rfind("--out=", 0) == 0) {
          original = strip_slash(args[i].substr(6));
          args[i] = "--out=" + original + ".replay";
        }
      }
      if (original.empty()) throw RejectedInput("manifest has no --out argument");
      const std::string replayed = original + ".replay";
      std::ostringstream sink_out, sink_err;
      Cli inner(sink_out, sink_err, false);
      if (int rc = inner.run(args); rc != 0) {
        err_ << sink_err.str();
        throw RejectedInput("replayed command failed");
      }
      bool same = true;
      auto fresh = digest_outputs(replayed);
      const auto& recorded = m.at("outputs");
      if (fresh.size() != recorded.size()) same = false;
      for (std::size_t i = 0; same && i < fresh.size(); ++i) {
        const std::string rel = fresh[i].first.substr(replayed.size());
        if (recorded[i].at("path") != original + rel || recorded[i].at("sha256") != fresh[i].second) {
          out_ << "differs: " << original + rel << '\n';
          same = false;
        }
      }
      if (!*keep) fs::remove_all(replayed);
      out_ << (same ? "identical" : "different") << ' ' << fresh.size() << " output(s)\n";
      return same ? 0 : 1;
    };
  });
}

void Cli::write_manifest(const CLI::App& sub, const std::vector<std::string>& args, double seconds) const {
  json params = json::object();
  for (const auto* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name();
    const auto& res = opt->results();
    params[name] = res.size() == 1 ? json(res.front()) : json(res);
  }
  json inputs = json::array();
  for (const auto& i : inv_.inputs) inputs.push_back({{"path", i}, {"sha256", sha256_file(i)}});
  json outputs = json::array();
  for (const auto& [p, d] : digest_outputs(inv_.out)) outputs.push_back({{"path", p}, {"sha256", d}});
  json m = {
      {"tool", "ctm"},
      {"version", CTM_VERSION},
      {"subcommand", sub.get_name()},
      {"argv", args},
      {"cwd", fs::current_path().string()},
      {"params", params},
      {"seed", inv_.seed ? json(*inv_.seed) : json(nullptr)},
      {"workers", inv_.workers},
      {"inputs", inputs},
      {"outputs", outputs},
      {"wall_clock_seconds", seconds},
  };
  write_file(manifest_path(inv_.out), [&](std::ostream& s) { s << m.dump(2) << '\n'; });
}

int Cli::run(const std::vector<std::string>& args) {
  CLI::App app{"Coding-theorem complexity tables, block decomposition and their experiments", "ctm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CTM_VERSION);
  add_build(app);
  add_merge(app);
  add_k(app);
  add_patch_table(app);
  add_table(app);
  add_rank(app);
  add_census(app);
  add_climbers(app);
  add_bdm(app);
  add_eca(app);
  add_compress_study(app);
  add_compare(app);
  add_calibrate(app);
  add_replay(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out_, err_);
  }
  if (inv_.workers < 1) {
    err_ << "ctm: --workers must be at least 1\n";
    return 1;
  }
  const CLI::App* sub = app.get_subcommands().front();
  try {
    const auto start = std::chrono::steady_clock::now();
    int rc = action_();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool makes_files = !inv_.out.empty() && sub->get_name() != "replay";
    if (rc == 0 && manifests_ && makes_files) write_manifest(*sub, args, seconds);
    return rc;
  } catch (const std::exception& e) {
    err_ << "ctm " << sub->get_name() << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err, true);
  return cli.run(args);
}

}  // namespace ctm::cli
