// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Detail lines are indented; the exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "ctm/bdm.hpp"
#include "ctm/complexity.hpp"
#include "ctm/distribution.hpp"
#include "ctm/eca.hpp"
#include "ctm/executor.hpp"
#include "ctm/machine.hpp"
#include "ctm/stats.hpp"
#include "ctm/study.hpp"

using namespace ctm;
namespace fs = std::filesystem;

namespace {

// Pinned parameters and tolerances.
constexpr int kBijectionIndices = 1'000'000;
constexpr std::uint64_t kBijectionSeed = 20240611;
constexpr std::int64_t kBusyBeaver42 = 107;
constexpr std::int64_t kBusyBeaverCheckBudget = 300;
constexpr std::int64_t kGridBudget = 2000;
constexpr std::uint64_t kGridSamples = 100'000'000;
constexpr std::uint64_t kGridSampleSeed = 1;
constexpr std::int64_t kContainmentBudget = 100;
constexpr int kCoverageMaxLength = 8;
constexpr double kRankThreshold = 0.90;
constexpr double kBdmTolerance = 1e-9;
constexpr int kBdmRandomImages = 1000;
constexpr std::uint64_t kBdmSeed = 5;
constexpr int kEcaSteps = 90;
constexpr int kEcaWidth = 100;
constexpr std::uint64_t kEcaSeed = 1;
constexpr double kEcaThreshold = 0.70;
constexpr std::uint64_t kDecileSeed = 7;
constexpr int kDecileMinLength = 8, kDecileMaxLength = 11;
constexpr DecileLayout kDecileLayout{10, 20, 50};
constexpr double kDecileThreshold = 0.8;
constexpr std::uint64_t kDeterminismSamples = 200'000;

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void detail(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char* fmt, ...) {
  std::printf("    ");
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
  std::fflush(stdout);
}

struct Verdict {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

MachineSpace space(int n, int m, int dims) { return MachineSpace{n, m, dims == 1 ? Dims::OneD : Dims::TwoD}; }

BuildOptions parallel() {
  BuildOptions o;
  o.workers = workers();
  return o;
}

// Distributions shared between criteria, built on first use.
struct Shared {
  std::optional<FrequencyDistribution> d22, d32, d42_1d, d42_grid_sampled, d42_grid_exhaustive;

  const FrequencyDistribution& grid22() {
    if (!d22) d22 = build_exhaustive(space(2, 2, 2), kGridBudget, true, parallel());
    return *d22;
  }
  const FrequencyDistribution& grid32() {
    if (!d32) d32 = build_exhaustive(space(3, 2, 2), kGridBudget, true, parallel());
    return *d32;
  }
  const FrequencyDistribution& tape42() {
    if (!d42_1d) d42_1d = build_exhaustive(space(4, 2, 1), kBusyBeaver42, true, parallel());
    return *d42_1d;
  }
  const FrequencyDistribution& grid42_sampled() {
    if (!d42_grid_sampled) {
      auto t0 = Clock::now();
      d42_grid_sampled = build_sampled(space(4, 2, 2), kGridBudget, kGridSamples, kGridSampleSeed, parallel());
      detail("built (4,2)_2D from %llu samples (seed %llu, budget %lld): %zu arrays in %.0f s",
             static_cast<unsigned long long>(kGridSamples), static_cast<unsigned long long>(kGridSampleSeed),
             static_cast<long long>(kGridBudget), d42_grid_sampled->distinct(), since(t0));
    }
    return *d42_grid_sampled;
  }
  const FrequencyDistribution& grid42_exhaustive() {
    if (!d42_grid_exhaustive) {
      auto t0 = Clock::now();
      BuildOptions o = parallel();
      o.ceiling = space(4, 2, 2).reduced_size();
      d42_grid_exhaustive = build_exhaustive(space(4, 2, 2), kContainmentBudget, true, o);
      detail("built exhaustive (4,2)_2D at budget %lld: %zu arrays in %.0f s", static_cast<long long>(kContainmentBudget),
             d42_grid_exhaustive->distinct(), since(t0));
    }
    return *d42_grid_exhaustive;
  }
};

Shared shared;

// ---------------------------------------------------------------------------

BigInt random_below(std::mt19937_64& rng, const BigInt& bound) {
  BigInt v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 64) + rng();
  return v % bound;
}

// Counts tables by assigning every entry every instruction, independent of
// the mixed-radix index.
std::pair<BigInt, BigInt> brute_counts(const MachineSpace& s) {
  const int entries = s.entry_count(), inst = s.instruction_count();
  std::vector<int> choice(static_cast<std::size_t>(entries), 0);
  BigInt full = 0, reduced = 0;
  while (true) {
    TransitionTable t(s);
    for (int e = 0; e < entries; ++e)
      t.set(e / s.symbols + 1, e % s.symbols, instruction_from_number(s, choice[static_cast<std::size_t>(e)]));
    ++full;
    if (t.in_reduced_form()) ++reduced;
    int e = 0;
    while (e < entries && ++choice[static_cast<std::size_t>(e)] == inst) choice[static_cast<std::size_t>(e++)] = 0;
    if (e == entries) break;
  }
  return {full, reduced};
}

Verdict ac1() {
  auto t0 = Clock::now();
  bool ok = true;
  for (int dims : {1, 2}) {
    const auto s = space(2, 2, dims);
    auto [full, reduced] = brute_counts(s);
    const bool match = full == count_machines(s, EnumerationMode::Full) &&
                       reduced == count_machines(s, EnumerationMode::Reduced);
    detail("%s brute force: %s full, %s reduced (%s)", s.describe().c_str(), full.str().c_str(),
           reduced.str().c_str(), match ? "matches" : "MISMATCH");
    ok &= match;
  }
  const auto s22 = space(2, 2, 2);
  ok &= count_machines(s22, EnumerationMode::Full) == 104976 && count_machines(s22, EnumerationMode::Reduced) == 11664;

  std::mt19937_64 rng(kBijectionSeed);
  std::vector<std::pair<MachineSpace, EnumerationMode>> targets;
  for (int n : {2, 3, 4})
    for (int dims : {1, 2})
      for (auto mode : {EnumerationMode::Full, EnumerationMode::Reduced}) targets.emplace_back(space(n, 2, dims), mode);
  int failures = 0;
  for (int i = 0; i < kBijectionIndices; ++i) {
    const auto& [s, mode] = targets[static_cast<std::size_t>(i) % targets.size()];
    MachineIndex idx{s, mode, random_below(rng, count_machines(s, mode))};
    failures += encode(decode(idx), mode).value != idx.value;
  }
  detail("encode(decode(i)) == i on %d random indices over 12 space/mode pairs: %d failures", kBijectionIndices,
         failures);
  ok &= failures == 0;
  const double secs = since(t0);
  return {ok && secs < 60.0, fmt("counting formulas and index bijection (%.1f s, limit 60 s)", secs)};
}

Verdict ac2() {
  auto t0 = Clock::now();
  const auto& d1 = shared.tape42();
  detail("exhaustive (4,2) 1D at budget %lld: %zu strings, %s halting, %s non-halting in %.1f s",
         static_cast<long long>(kBusyBeaver42), d1.distinct(), d1.halting().str().c_str(),
         d1.nonhalting().str().c_str(), since(t0));

  // Nothing more halts with a larger budget, so every halting machine halts within 107 steps.
  auto longer = build_exhaustive(space(4, 2, 1), kBusyBeaverCheckBudget, true, parallel());
  const bool within = longer.entries() == d1.entries() && longer.halting() == d1.halting();
  detail("rebuild at budget %lld: %s", static_cast<long long>(kBusyBeaverCheckBudget),
         within ? "identical halting outputs" : "MORE MACHINES HALT");

  auto missing_in = [&](const FrequencyDistribution& grid) {
    int total = 0, missing = 0;
    for (const auto& [s, c] : d1.entries()) {
      if (s.width() > kCoverageMaxLength) continue;
      ++total;
      missing += grid.entries().count(s) == 0;
    }
    return std::pair{total, missing};
  };
  auto [total, missing] = missing_in(shared.grid42_sampled());
  detail("strings of length <= %d: %d; absent from the sampled (4,2)_2D distribution: %d", kCoverageMaxLength, total,
         missing);
  auto [total_x, missing_x] = missing_in(shared.grid42_exhaustive());
  detail("absent from the exhaustive (4,2)_2D distribution at budget %lld: %d of %d",
         static_cast<long long>(kContainmentBudget), missing_x, total_x);
  return {within && missing == 0,
          fmt("exact 1D baseline: halts within %lld %s; sampled 2D coverage %d/%d strings of length <= %d",
              static_cast<long long>(kBusyBeaver42), within ? "yes" : "no", total - missing, total,
              kCoverageMaxLength)};
}

Verdict ac3() {
  const auto& a = shared.grid22();
  const auto& b = shared.grid32();
  std::vector<double> ka, kb;
  for (const auto& [s, c] : a.entries()) {
    auto it = b.entries().find(s);
    if (it == b.entries().end()) continue;
    ka.push_back(k_from_counts(c, a.halting()));
    kb.push_back(k_from_counts(it->second, b.halting()));
  }
  const double rs_grid = spearman(ka, kb);
  detail("(2,2)_2D vs (3,2)_2D exhaustive: %zu shared arrays, Spearman %.4f, Pearson %.4f", ka.size(), rs_grid,
         pearson(ka, kb));
  auto cmp = compare_1d_2d(shared.tape42(), shared.grid42_sampled());
  detail("(4,2) 1D vs (4,2)_2D sampled: %zu shared strings, Spearman %.4f, Pearson %.4f, partial given length %.4f",
         cmp.pairs.size(), cmp.overall.spearman, cmp.overall.pearson, cmp.partial_given_length);
  detail("fit k_2D = %.4f k_1D + %.4f", cmp.fit.slope, cmp.fit.intercept);
  return {rs_grid >= kRankThreshold && cmp.overall.spearman >= kRankThreshold,
          fmt("rank stability: Spearman %.4f and %.4f (threshold %.2f)", rs_grid, cmp.overall.spearman,
              kRankThreshold)};
}

// Returns the number of failed checks for one distribution.
int ctm_sanity(const char* name, const FrequencyDistribution& d) {
  int failed = 0;
  auto ranked = rank_report(d);
  int violations = 0;
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    const auto &p = ranked[i - 1], &q = ranked[i];
    if (q.count > p.count || (q.count < p.count && !(q.k > p.k)) || (q.count == p.count && q.k != p.k)) ++violations;
  }
  failed += violations != 0;

  double single_max = 0.0, other_min = INFINITY;
  for (const auto& r : ranked) {
    if (r.array.size() == 1) single_max = std::max(single_max, r.k);
    else other_min = std::min(other_min, r.k);
  }
  const bool single_min = single_max < other_min;
  failed += !single_min;

  std::string blocks;
  for (int side = 2; side <= 3; ++side) {
    std::vector<double> ks;
    for (const auto& r : ranked)
      if (r.array.height() == side && r.array.width() == side) ks.push_back(r.k);
    if (ks.empty()) continue;
    std::sort(ks.begin(), ks.end());
    const std::size_t n = ks.size();
    const double median = n % 2 ? ks[n / 2] : 0.5 * (ks[n / 2 - 1] + ks[n / 2]);
    for (std::uint8_t v : {0, 1}) {
      auto k = k_of(d, OutputArray(side, side, v));
      const bool above = k && *k < median;
      failed += !above;
      blocks += fmt(" %dx%d:%d %s", side, side, v, k ? fmt("%.2f<%.2f", *k, median).c_str() : "absent");
    }
  }
  detail("%-22s anti-monotone violations %d; single cells minimal %s; uniform blocks vs median%s", name, violations,
         single_min ? "yes" : "NO", blocks.empty() ? " n/a (no square blocks above 1x1)" : blocks.c_str());
  return failed;
}

Verdict ac4() {
  int failed = 0;
  failed += ctm_sanity("(2,2)_2D exhaustive", shared.grid22());
  failed += ctm_sanity("(3,2)_2D exhaustive", shared.grid32());
  failed += ctm_sanity("(4,2) 1D exhaustive", shared.tape42());
  failed += ctm_sanity("(4,2)_2D sampled", shared.grid42_sampled());
  failed += ctm_sanity("(4,2)_2D exhaustive", shared.grid42_exhaustive());
  return {failed == 0, fmt("CTM sanity over 5 distributions: %d failed checks", failed)};
}

OutputArray random_image(std::mt19937_64& rng, int h, int w) {
  OutputArray a(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) a.set(r, c, static_cast<std::uint8_t>(rng() & 1));
  return a;
}

OutputArray tile(const std::vector<OutputArray>& tiles, int rows, int cols, int d) {
  OutputArray img(rows * d, cols * d);
  for (int tr = 0; tr < rows; ++tr)
    for (int tc = 0; tc < cols; ++tc)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          img.set(tr * d + r, tc * d + c, tiles[static_cast<std::size_t>(tr * cols + tc)].at(r, c));
  return img;
}

Verdict ac5() {
  auto t0 = Clock::now();
  const auto table = patch_table(shared.grid42_sampled(), 3, SymmetryPolicy::none());
  detail("3x3 table from the sampled (4,2)_2D distribution: %zu patches, completeness %.4f", table.size(),
         table.completeness());
  std::mt19937_64 rng(kBdmSeed);

  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto p = random_image(rng, 3, 3);
    const int rows = 1 + static_cast<int>(rng() % 12), cols = 1 + static_cast<int>(rng() % 12);
    auto img = tile(std::vector<OutputArray>(static_cast<std::size_t>(rows * cols), p), rows, cols, 3);
    worst = std::max(worst, std::abs(bdm_log(img, table, 3) - (*table.lookup(p) + std::log2(rows * cols))));
  }
  detail("n-fold tilings: max |bdm_log - (k + log2 n)| = %.3g (tolerance %.0e)", worst, kBdmTolerance);

  int above = 0;
  for (int i = 0; i < kBdmRandomImages; ++i) {
    auto img = random_image(rng, 1 + static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 40));
    above += bdm_log(img, table, 3) > bdm_sum(img, table, 3);
  }
  detail("random images with bdm_log > bdm_sum: %d of %d", above, kBdmRandomImages);

  int shuffle_diffs = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<OutputArray> pool{random_image(rng, 3, 3), random_image(rng, 3, 3), random_image(rng, 3, 3)};
    std::vector<OutputArray> tiles;
    for (int j = 0; j < 20; ++j) tiles.push_back(pool[rng() % pool.size()]);
    auto shuffled = tiles;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffle_diffs += bdm_log(tile(tiles, 4, 5, 3), table, 3) != bdm_log(tile(shuffled, 4, 5, 3), table, 3);
  }
  detail("tile shuffles changing bdm_log: %d of 200", shuffle_diffs);
  return {worst <= kBdmTolerance && above == 0 && shuffle_diffs == 0,
          fmt("BDM identities (%.1f s after table construction)", since(t0))};
}

Verdict ac6() {
  const auto table = patch_table(shared.grid42_sampled(), 3, SymmetryPolicy::none());
  if (table.completeness() < 1.0) return {false, fmt("3x3 table incomplete (%.4f)", table.completeness())};
  const auto init = random_initial(kEcaWidth, kEcaSeed);
  std::vector<int> rules;
  for (int r = 0; r < 128; ++r) rules.push_back(r);
  std::vector<double> by_bdm(128), by_size(128);
  for (int r : rules) {
    auto diagram = evolve(EcaRule(r), init, kEcaSteps);
    by_bdm[static_cast<std::size_t>(r)] = bdm_log(diagram, table, 3);
    by_size[static_cast<std::size_t>(r)] = static_cast<double>(compressed_image_size(diagram, DeflateCompressor{}));
  }
  const double rs = spearman(by_bdm, by_size);
  detail("rules 0..127, t=%d, width %d, random initial seed %llu: Spearman %.4f, Pearson %.4f", kEcaSteps, kEcaWidth,
         static_cast<unsigned long long>(kEcaSeed), rs, pearson(by_bdm, by_size));
  detail("bdm_log: rule 0 %.1f, rule 30 %.1f, rule 110 %.1f", by_bdm[0], by_bdm[30], by_bdm[110]);
  detail("deflate: rule 0 %.0f, rule 30 %.0f, rule 110 %.0f", by_size[0], by_size[30], by_size[110]);
  const bool order = by_bdm[0] < by_bdm[30] && by_bdm[0] < by_bdm[110] && by_size[0] < by_size[30] &&
                     by_size[0] < by_size[110];
  return {rs >= kEcaThreshold && order,
          fmt("ECA classification: Spearman %.4f (threshold %.2f); rule 0 lowest of 0/30/110 under both %s", rs,
              kEcaThreshold, order ? "yes" : "no")};
}

Verdict ac7() {
  auto cat = build_catalog(shared.tape42(), kDecileMinLength, kDecileMaxLength);
  bool ok = true;
  std::string summary;
  for (int len = kDecileMinLength; len <= kDecileMaxLength; ++len) {
    auto files = generate_files(cat, len, kDecileSeed, kDecileLayout);
    auto trend = decile_trend(files, DeflateCompressor{});
    std::string means;
    for (double m : trend.mean_sizes) means += fmt(" %.1f", m);
    detail("length %d: %zu strings, partition %zu, Spearman %.4f, means%s%s", len, cat.by_length[len].size(),
           files.partition_size, trend.spearman, means.c_str(),
           files.scaling_notice.empty() ? "" : (" [" + files.scaling_notice + "]").c_str());
    const bool pass = !trend.degenerate && trend.spearman >= kDecileThreshold;
    ok &= pass;
    summary += fmt(" %d:%.2f", len, trend.spearman);
  }
  return {ok, fmt("compression deciles, Spearman by length%s (threshold %.1f each)", summary.c_str(),
                  kDecileThreshold)};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("ctm_acceptance_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  int rc = cli::run(args, o, e);
  if (out) *out = o.str();
  if (rc != 0) detail("ctm %s failed: %s", args.front().c_str(), e.str().c_str());
  return rc;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict ac8() {
  TempDir dir;
  int failures = 0;
  auto same_files = [&](const std::vector<std::string>& base, const char* what) {
    auto one = base, eight = base;
    one.insert(one.end(), {"--workers", "1", "--out", dir / (std::string(what) + "_w1")});
    eight.insert(eight.end(), {"--workers", "8", "--out", dir / (std::string(what) + "_w8")});
    if (cli(one) || cli(eight)) {
      ++failures;
      return;
    }
    const bool same = slurp(dir / (std::string(what) + "_w1")) == slurp(dir / (std::string(what) + "_w8"));
    failures += !same;
    detail("%-34s --workers 1 vs 8: %s", what, same ? "byte-identical" : "DIFFERENT");
  };
  same_files({"build", "--states", "4", "--dims", "2", "--budget", "2000", "--mode", "sampled", "--samples",
              std::to_string(kDeterminismSamples), "--seed", "3"},
             "sampled (4,2)_2D build");
  same_files({"build", "--states", "3", "--dims", "2", "--budget", "2000"}, "exhaustive (3,2)_2D build");
  same_files({"build", "--states", "3", "--dims", "2", "--budget", "2000", "--range", "0-500000"},
             "exhaustive (3,2)_2D shard build");

  // Every seeded command, then replay from its manifest.
  save_distribution(dir / "tape42.dist", shared.tape42());
  const std::vector<std::vector<std::string>> seeded = {
      {"build", "--states", "4", "--dims", "2", "--budget", "2000", "--mode", "sampled", "--samples", "50000",
       "--seed", "11", "--out", dir / "s.dist"},
      {"calibrate", "--states", "3", "--dims", "2", "--samples", "20000", "--probe-budget", "2000", "--seed", "12",
       "--out", dir / "cal.csv"},
      {"eca-classify", "--init", "random:13", "--scorer", "compress", "--out", dir / "eca.csv"},
      {"compress-study", "--catalog", dir / "tape42.dist", "--lengths", "8..9", "--seed", "14", "--files", "5",
       "--strings", "20", "--out", dir / "study"},
  };
  for (const auto& args : seeded) {
    if (cli(args)) {
      ++failures;
      continue;
    }
    std::string out;
    std::string manifest = args.back() + ".manifest.json";
    const bool ok = cli({"replay", "--manifest", manifest}, &out) == 0;
    failures += !ok;
    out.erase(out.find_last_not_of('\n') + 1);
    detail("%-34s replay: %s", args.front().c_str(), out.c_str());
  }
  return {failures == 0, fmt("determinism: %d failures over worker comparisons and manifest replays", failures)};
}

Verdict ac9() {
  const std::string path = CTM_SOURCE_DIR "/data/reference_constants.json";
  std::ifstream in(path);
  if (!in) return {false, "reference constants missing: " + path};
  auto j = nlohmann::json::parse(in);
  const bool documented = j.at("source") == "published" && j.at("excluded_from_reproduction") == true;
  const bool values = j.at("distinct_arrays") == 1068618 && j.at("halting") == 492407829568ull &&
                      j.at("k_min") == 2.22882 && j.at("k_max") == 36.2561 && j.at("k_mean") == 35.1201;
  detail("%s: source %s, excluded from reproduction %s", path.c_str(), j.at("source").dump().c_str(),
         j.at("excluded_from_reproduction").dump().c_str());

  // Optional comparison against a locally built full distribution.
  if (const char* ref = std::getenv("CTM_REFERENCE_DIST")) {
    auto d = load_distribution(ref);
    double lo = INFINITY, hi = 0, sum = 0;
    for (const auto& [s, c] : d.entries()) {
      const double k = k_from_counts(c, d.halting());
      lo = std::min(lo, k);
      hi = std::max(hi, k);
      sum += k;
    }
    detail("CTM_REFERENCE_DIST %s: %zu arrays, %s halting, K min %.5f max %.4f mean %.4f", ref, d.distinct(),
           d.halting().str().c_str(), lo, hi, sum / static_cast<double>(d.distinct()));
  }
  return {documented && values, "golden constants shipped as reference data (not reproduced)"};
}

}  // namespace

// With arguments, runs only the named criteria (e.g. AC5 AC8).
int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
  };
  auto start = Clock::now();
  int failed = 0;
  const std::vector<std::string> only(argv + 1, argv + argc);
  int run = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    ++run;
    auto t0 = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %s  %s [%.0f s]\n", name, v.pass ? "PASS" : "FAIL", v.summary.c_str(), since(t0));
  }
  std::printf("%d of %d criteria passed in %.0f s\n", run - failed, run, since(start));
  return failed ? 1 : 0;
}
