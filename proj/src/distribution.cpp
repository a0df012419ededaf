#include "ctm/distribution.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ctm/errors.hpp"
#include "ctm/executor.hpp"

namespace ctm {

// ---------------------------------------------------------------------------
// FrequencyDistribution

FrequencyDistribution::FrequencyDistribution(MachineSpace space, std::int64_t budget, BuildRecord record)
    : space_(space), budget_(budget), record_(std::move(record)) {
  space_.validate();
  if (budget < 1) throw RejectedInput("runtime budget must be at least 1");
}

void FrequencyDistribution::add(const OutputArray& s, const BigInt& count) {
  if (count <= 0) return;
  entries_[s] += count;
  halting_ += count;
}

void FrequencyDistribution::add_nonhalting(const BigInt& count) { nonhalting_ += count; }

BigInt FrequencyDistribution::count(const OutputArray& s) const {
  auto it = entries_.find(s);
  return it == entries_.end() ? BigInt(0) : it->second;
}

double FrequencyDistribution::frequency(const OutputArray& s) const {
  auto it = entries_.find(s);
  if (it == entries_.end() || halting_ == 0) return 0.0;
  return it->second.convert_to<double>() / halting_.convert_to<double>();
}

std::vector<std::pair<OutputArray, BigInt>> FrequencyDistribution::sorted() const {
  std::vector<std::pair<OutputArray, BigInt>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

void FrequencyDistribution::check_invariants() const {
  BigInt total = 0;
  for (const auto& [array, c] : entries_) {
    if (c <= 0) throw std::logic_error("distribution entry " + array.key() + " has a non-positive count");
    total += c;
  }
  if (total != halting_) throw std::logic_error("distribution entry counts do not sum to the halting tally");
}

bool operator==(const FrequencyDistribution& a, const FrequencyDistribution& b) {
  return a.space_ == b.space_ && a.budget_ == b.budget_ && a.record_ == b.record_ && a.halting_ == b.halting_ &&
         a.nonhalting_ == b.nonhalting_ && a.entries_ == b.entries_;
}

// ---------------------------------------------------------------------------
// Sampling

SampleStream::SampleStream(const MachineSpace& space, std::uint64_t seed, std::uint64_t chunk) : space_(space) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  rng_.seed(seq);
}

std::uint64_t SampleStream::below(std::uint64_t bound) {
  // Rejection keeps the draw exactly uniform and independent of the
  // standard library's distribution implementation.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = rng_();
  while (x >= limit) x = rng_();
  return x % bound;
}

void SampleStream::next(std::vector<int>& digits) {
  digits.resize(static_cast<std::size_t>(space_.entry_count()));
  digits[0] = static_cast<int>(below(static_cast<std::uint64_t>(space_.initial_choices())));
  for (std::size_t e = 1; e < digits.size(); ++e)
    digits[e] = static_cast<int>(below(static_cast<std::uint64_t>(space_.instruction_count())));
}

// ---------------------------------------------------------------------------
// Building

BigInt BuildOptions::default_ceiling() {
  if (const char* env = std::getenv("CTM_MAX_MACHINES")) {
    std::string text(env);
    try {
      if (text.find_first_of("eE.") != std::string::npos) return BigInt(static_cast<std::uint64_t>(std::stod(text)));
      return BigInt(text);
    } catch (const std::exception&) {
      throw RejectedInput("CTM_MAX_MACHINES is not a number: '" + text + "'");
    }
  }
  return BigInt(10'000'000'000ull);
}

namespace {

// Raw results of running right-moving machines from blank 0 plus their
// symbol-exchanged twins from blank 1, before orientation completion.
struct PartialBuild {
  FrequencyDistribution::Entries raw;
  BigInt nonhalting = 0;

  void add(const OutputArray& s, const BigInt& c) { raw[s] += c; }
  void absorb(PartialBuild&& other) {
    for (auto& [s, c] : other.raw) raw[s] += c;
    nonhalting += other.nonhalting;
  }
};

// Per-space lookup of packed instructions by digit.
struct InstructionCache {
  std::vector<PackedInstruction> by_number;
  std::vector<PackedInstruction> initial;

  explicit InstructionCache(const MachineSpace& space) {
    for (int i = 0; i < space.instruction_count(); ++i) by_number.push_back(pack(instruction_from_number(space, i)));
    for (int i = 0; i < space.initial_choices(); ++i) initial.push_back(pack(reduced_initial_instruction(space, i)));
  }

  void fill(EnumerationMode mode, const std::vector<int>& digits, std::vector<PackedInstruction>& program) const {
    program.resize(digits.size());
    for (std::size_t e = 0; e < digits.size(); ++e)
      program[e] = (e == 0 && mode == EnumerationMode::Reduced) ? initial[static_cast<std::size_t>(digits[e])]
                                                                : by_number[static_cast<std::size_t>(digits[e])];
  }
};

std::vector<PackedInstruction> swapped_program(const MachineSpace& space, const std::vector<PackedInstruction>& p) {
  const int m = space.symbols;
  auto sigma = [](int v) { return v == 0 ? 1 : v == 1 ? 0 : v; };
  std::vector<PackedInstruction> out(p.size());
  for (int s = 1; s <= space.states; ++s) {
    for (int r = 0; r < m; ++r) {
      auto ins = p[static_cast<std::size_t>((s - 1) * m + r)];
      ins.write = static_cast<std::int8_t>(sigma(ins.write));
      out[static_cast<std::size_t>((s - 1) * m + sigma(r))] = ins;
    }
  }
  return out;
}

OutputArray swap01(const OutputArray& a) { return a.swap_symbols(0, 1); }

std::vector<OutputArray> orientations(const MachineSpace& space, const OutputArray& a) {
  if (space.dims == Dims::TwoD) return {a, a.rotate90(), a.rotate180(), a.rotate270()};
  return {a, a.rotate180()};
}

template <typename Fn>
void run_workers(int workers, int units, Fn&& fn) {
  workers = std::max(1, std::min(workers, units));
  if (workers == 1) {
    for (int u = 0; u < units; ++u) fn(0, u);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int u = w; u < units; u += workers) fn(w, u);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

BigInt pow_int(int base, int exponent) {
  BigInt r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

// Depth-first exploration of the reduced enumeration under one initial
// transition. Entries are chosen only when a run first reads them; a run
// that halts or times out before reading an entry speaks for every value of
// that entry at once.
class TreeExplorer {
 public:
  TreeExplorer(const MachineSpace& space, std::int64_t budget, PartialBuild& out)
      : space_(space), cache_(space), sim_(space, budget, 256), out_(out) {
    for (int u = 0; u <= space.entry_count(); ++u) weight_.push_back(pow_int(space.instruction_count(), u));
  }

  void explore_initial(int digit) {
    std::vector<PackedInstruction> program(static_cast<std::size_t>(space_.entry_count()));
    program[0] = cache_.initial[static_cast<std::size_t>(digit)];
    explore(program, space_.entry_count() - 1);
  }

 private:
  void explore(std::vector<PackedInstruction>& program, int undefined) {
    auto trace = sim_.execute(program, 0);
    const BigInt& w = weight_[static_cast<std::size_t>(undefined)];
    switch (trace.outcome) {
      case Simulator::Outcome::Halted: {
        auto s = sim_.output();
        out_.add(swap01(s), w);
        out_.add(s, w);
        return;
      }
      case Simulator::Outcome::TimedOut:
        out_.nonhalting += 2 * w;
        return;
      case Simulator::Outcome::Undefined: break;
    }
    auto slot = static_cast<std::size_t>(trace.undefined_slot);
    const BigInt& child_weight = weight_[static_cast<std::size_t>(undefined - 1)];
    for (const auto& ins : cache_.by_number) {
      program[slot] = ins;
      if (static_filter(space_, program) == FilterVerdict::ProvablyNonHalting) {
        out_.nonhalting += 2 * child_weight;
        continue;
      }
      explore(program, undefined - 1);
    }
    program[slot] = PackedInstruction{};
  }

  MachineSpace space_;
  InstructionCache cache_;
  Simulator sim_;
  PartialBuild& out_;
  std::vector<BigInt> weight_;
};

// One run per index over [begin, begin + count) of the given enumeration.
void brute_range(const MachineSpace& space, std::int64_t budget, EnumerationMode mode, const BigInt& begin,
                 std::uint64_t count, bool direct_blank_runs, PartialBuild& out) {
  if (count == 0) return;
  InstructionCache cache(space);
  Simulator sim(space, budget, 256);
  auto digits = index_digits(MachineIndex{space, mode, begin});
  std::vector<PackedInstruction> program;
  const bool reduced = mode == EnumerationMode::Reduced;
  for (std::uint64_t i = 0; i < count; ++i) {
    cache.fill(mode, digits, program);
    if (static_filter(space, program) == FilterVerdict::ProvablyNonHalting) {
      // Exchanging symbols keeps the state graph, so both blanks are covered.
      out.nonhalting += 2;
    } else if (reduced && !direct_blank_runs) {
      auto trace = sim.execute(program, 0);
      if (trace.outcome == Simulator::Outcome::Halted) {
        auto s = sim.output();
        out.add(swap01(s), 1);
        out.add(s, 1);
      } else {
        out.nonhalting += 2;
      }
    } else {
      // Full enumeration runs the same machine from both blanks; the reduced
      // enumeration's blank-1 counterpart is the symbol-exchanged machine.
      auto other = reduced ? swapped_program(space, program) : program;
      auto t0 = sim.execute(program, 0);
      if (t0.outcome == Simulator::Outcome::Halted) out.add(sim.output(), 1);
      else out.nonhalting += 1;
      auto t1 = sim.execute(other, 1);
      if (t1.outcome == Simulator::Outcome::Halted) out.add(sim.output(), 1);
      else out.nonhalting += 1;
    }
    // Odometer increment.
    for (std::size_t e = 0; e < digits.size(); ++e) {
      int radix = (e == 0 && reduced) ? space.initial_choices() : space.instruction_count();
      if (++digits[e] < radix) break;
      digits[e] = 0;
    }
  }
}

std::vector<IndexRange> normalize(std::vector<IndexRange> ranges) {
  std::sort(ranges.begin(), ranges.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
  std::vector<IndexRange> out;
  for (auto& r : ranges) {
    if (r.begin >= r.end) continue;
    if (!out.empty() && out.back().end >= r.begin) {
      if (out.back().end > r.begin) throw MergeError("exhaustive shards overlap");
      out.back().end = r.end;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

// Orientation completion of a partial build and the analytic terms.
// `unit` is the number of machines behind each fixed choice of the initial
// transition.
void complete(const MachineSpace& space, PartialBuild&& part, const BigInt& orientation_weight,
              const std::optional<BigInt>& analytic_unit, FrequencyDistribution& dist) {
  const auto sorted_raw = [&] {
    std::vector<std::pair<OutputArray, BigInt>> v(part.raw.begin(), part.raw.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }();
  for (const auto& [s, c] : sorted_raw)
    for (const auto& o : orientations(space, s)) dist.add(o, c * orientation_weight);
  dist.add_nonhalting(part.nonhalting * space.directions() * orientation_weight);
  if (analytic_unit) {
    for (int blank = 0; blank < 2; ++blank) {
      // Initial transition halts at once: a single cell holding the symbol.
      for (int w = 0; w < space.symbols; ++w) dist.add(OutputArray(1, 1, static_cast<std::uint8_t>(w)), *analytic_unit);
      // Initial transition re-enters state 1 on a fresh blank cell: runs forever.
      dist.add_nonhalting(BigInt(space.directions() * space.symbols) * *analytic_unit);
    }
  }
}

void check_ceiling(const BigInt& size, const BuildOptions& options) {
  if (size > options.ceiling)
    throw CeilingExceeded("enumeration of " + size.str() + " machines exceeds the ceiling of " +
                          options.ceiling.str() + " (set CTM_MAX_MACHINES to raise it)");
}

}  // namespace

FrequencyDistribution build_exhaustive(const MachineSpace& space, std::int64_t budget, bool use_reduced,
                                       const BuildOptions& options) {
  space.validate();
  if (budget < 1) throw RejectedInput("runtime budget must be at least 1");
  const BigInt reduced_size = space.reduced_size();
  BuildRecord record;
  record.kind = BuildRecord::Kind::Exhaustive;

  if (!use_reduced) {
    if (options.range) throw RejectedInput("index ranges apply to the reduced enumeration only");
    const BigInt full = space.full_size();
    check_ceiling(full, options);
    record.ranges = {IndexRange{0, reduced_size}};
    FrequencyDistribution dist(space, budget, record);
    const auto total = full.convert_to<std::uint64_t>();
    const int units = std::max(1, options.workers);
    std::vector<PartialBuild> parts(static_cast<std::size_t>(units));
    run_workers(options.workers, units, [&](int, int u) {
      std::uint64_t lo = total * static_cast<std::uint64_t>(u) / units;
      std::uint64_t hi = total * static_cast<std::uint64_t>(u + 1) / units;
      brute_range(space, budget, EnumerationMode::Full, BigInt(lo), hi - lo, true, parts[static_cast<std::size_t>(u)]);
    });
    PartialBuild all;
    for (auto& p : parts) all.absorb(std::move(p));
    std::vector<std::pair<OutputArray, BigInt>> v(all.raw.begin(), all.raw.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [s, c] : v) dist.add(s, c);
    dist.add_nonhalting(all.nonhalting);
    return dist;
  }

  IndexRange range = options.range.value_or(IndexRange{0, reduced_size});
  if (range.begin < 0 || range.end > reduced_size || range.begin > range.end)
    throw RejectedInput("index range outside the reduced enumeration");
  check_ceiling(range.end - range.begin, options);
  record.ranges = normalize({range});
  const bool brute = options.engine == BuildOptions::Engine::Brute || options.range.has_value() ||
                     options.direct_blank_runs;

  PartialBuild all;
  if (brute) {
    const auto count = (range.end - range.begin).convert_to<std::uint64_t>();
    const int units = std::max(1, options.workers);
    std::vector<PartialBuild> parts(static_cast<std::size_t>(units));
    run_workers(options.workers, units, [&](int, int u) {
      std::uint64_t lo = count * static_cast<std::uint64_t>(u) / units;
      std::uint64_t hi = count * static_cast<std::uint64_t>(u + 1) / units;
      brute_range(space, budget, EnumerationMode::Reduced, range.begin + lo, hi - lo, options.direct_blank_runs,
                  parts[static_cast<std::size_t>(u)]);
    });
    for (auto& p : parts) all.absorb(std::move(p));
  } else {
    const int units = space.initial_choices();
    std::vector<PartialBuild> parts(static_cast<std::size_t>(units));
    run_workers(options.workers, units, [&](int, int u) {
      TreeExplorer explorer(space, budget, parts[static_cast<std::size_t>(u)]);
      explorer.explore_initial(u);
    });
    for (auto& p : parts) all.absorb(std::move(p));
  }

  FrequencyDistribution dist(space, budget, record);
  std::optional<BigInt> analytic;
  if (range.begin == 0) analytic = pow_int(space.instruction_count(), space.entry_count() - 1);
  complete(space, std::move(all), 1, analytic, dist);
  return dist;
}

FrequencyDistribution build_sampled(const MachineSpace& space, std::int64_t budget, std::uint64_t num_samples,
                                    std::uint64_t seed, const BuildOptions& options) {
  space.validate();
  if (budget < 1) throw RejectedInput("runtime budget must be at least 1");
  if (num_samples < 1) throw RejectedInput("sampled builds need at least one sample");
  if (space.initial_choices() < 1) throw RejectedInput("the reduced enumeration of a one-state space is empty");

  const std::uint64_t chunks = (num_samples + SampleStream::kChunkSize - 1) / SampleStream::kChunkSize;
  const int workers = std::max(1, options.workers);
  std::vector<PartialBuild> parts(static_cast<std::size_t>(workers));
  // Chunk results are plain counters; they are widened once per worker.
  std::vector<std::unordered_map<OutputArray, std::uint64_t, OutputArrayHash>> raw(static_cast<std::size_t>(workers));
  std::vector<std::uint64_t> nonhalting(static_cast<std::size_t>(workers), 0);
  run_workers(workers, workers, [&](int, int w) {
    InstructionCache cache(space);
    Simulator sim(space, budget, 256);
    std::vector<int> digits;
    std::vector<PackedInstruction> program;
    auto& counts = raw[static_cast<std::size_t>(w)];
    auto& nh = nonhalting[static_cast<std::size_t>(w)];
    for (std::uint64_t c = static_cast<std::uint64_t>(w); c < chunks; c += static_cast<std::uint64_t>(workers)) {
      SampleStream stream(space, seed, c);
      const std::uint64_t first = c * SampleStream::kChunkSize;
      const std::uint64_t n = std::min(SampleStream::kChunkSize, num_samples - first);
      for (std::uint64_t i = 0; i < n; ++i) {
        stream.next(digits);
        cache.fill(EnumerationMode::Reduced, digits, program);
        if (static_filter(space, program) == FilterVerdict::ProvablyNonHalting) {
          nh += 2;
          continue;
        }
        auto trace = sim.execute(program, 0);
        if (trace.outcome == Simulator::Outcome::Halted) {
          auto s = sim.output();
          ++counts[swap01(s)];
          ++counts[s];
        } else {
          nh += 2;
        }
      }
    }
    auto& part = parts[static_cast<std::size_t>(w)];
    for (const auto& [s, c] : counts) part.raw[s] += c;
    part.nonhalting += nh;
    counts.clear();
  });
  PartialBuild all;
  for (auto& p : parts) all.absorb(std::move(p));

  BuildRecord record;
  record.kind = BuildRecord::Kind::Sampled;
  record.seeds = {seed};
  record.samples = num_samples;
  FrequencyDistribution dist(space, budget, record);
  complete(space, std::move(all), BigInt(space.initial_choices()), BigInt(num_samples), dist);
  return dist;
}

FrequencyDistribution merge(const FrequencyDistribution& a, const FrequencyDistribution& b) {
  if (!(a.space() == b.space())) throw MergeError("cannot merge distributions of different machine spaces");
  if (a.budget() != b.budget()) throw MergeError("cannot merge distributions built with different budgets");
  if (b.empty() && b.record().ranges.empty() && b.record().samples == 0) return a;
  if (a.empty() && a.record().ranges.empty() && a.record().samples == 0) return b;
  if (a.record().kind != b.record().kind) throw MergeError("cannot merge exhaustive and sampled distributions");

  BuildRecord record;
  record.kind = a.record().kind;
  if (record.kind == BuildRecord::Kind::Exhaustive) {
    auto ranges = a.record().ranges;
    ranges.insert(ranges.end(), b.record().ranges.begin(), b.record().ranges.end());
    record.ranges = normalize(std::move(ranges));
  } else {
    record.seeds = a.record().seeds;
    for (auto s : b.record().seeds) {
      if (std::find(record.seeds.begin(), record.seeds.end(), s) != record.seeds.end())
        throw MergeError("sampled distributions share seed " + std::to_string(s));
      record.seeds.push_back(s);
    }
    std::sort(record.seeds.begin(), record.seeds.end());
    record.samples = a.record().samples + b.record().samples;
  }

  FrequencyDistribution out(a.space(), a.budget(), record);
  for (const auto& [s, c] : a.entries()) out.add(s, c);
  for (const auto& [s, c] : b.entries()) out.add(s, c);
  out.add_nonhalting(a.nonhalting() + b.nonhalting());
  return out;
}

// ---------------------------------------------------------------------------
// Runtime calibration

double RuntimeCalibration::cumulative(std::int64_t steps) const {
  if (halted == 0) return 0.0;
  std::uint64_t within = 0;
  for (const auto& [t, c] : halting_times) {
    if (t > steps) break;
    within += c;
  }
  return static_cast<double>(within) / static_cast<double>(halted);
}

std::optional<std::int64_t> known_busy_beaver_steps(const MachineSpace& space) {
  if (space.dims != Dims::OneD || space.symbols != 2) return std::nullopt;
  switch (space.states) {
    case 1: return 1;
    case 2: return 6;
    case 3: return 21;
    case 4: return 107;
    default: return std::nullopt;
  }
}

RuntimeCalibration calibrate_runtime(const MachineSpace& space, std::uint64_t sample_size, std::int64_t probe_budget,
                                     double acceptable_miss, std::uint64_t seed) {
  space.validate();
  if (sample_size < 10'000) throw RejectedInput("runtime calibration needs at least 10^4 samples");
  if (probe_budget < 100) throw RejectedInput("runtime calibration needs a probe budget of at least 100");
  if (acceptable_miss < 0.0 || acceptable_miss >= 1.0) throw RejectedInput("acceptable miss must lie in [0, 1)");
  if (space.initial_choices() < 1) throw RejectedInput("the reduced enumeration of a one-state space is empty");

  RuntimeCalibration cal;
  cal.sample_size = sample_size;
  cal.probe_budget = probe_budget;
  InstructionCache cache(space);
  Simulator sim(space, probe_budget, 256);
  std::vector<int> digits;
  std::vector<PackedInstruction> program;
  for (std::uint64_t c = 0; c * SampleStream::kChunkSize < sample_size; ++c) {
    SampleStream stream(space, seed, c);
    const std::uint64_t n = std::min(SampleStream::kChunkSize, sample_size - c * SampleStream::kChunkSize);
    for (std::uint64_t i = 0; i < n; ++i) {
      stream.next(digits);
      cache.fill(EnumerationMode::Reduced, digits, program);
      if (static_filter(space, program) == FilterVerdict::ProvablyNonHalting) {
        ++cal.filtered;
        continue;
      }
      auto trace = sim.execute(program, 0);
      if (trace.outcome == Simulator::Outcome::Halted) {
        ++cal.halting_times[trace.steps];
        ++cal.halted;
        cal.max_observed = std::max(cal.max_observed, trace.steps);
      } else {
        ++cal.timed_out;
      }
    }
  }
  if (cal.halted == 0) throw CalibrationFailure("no sampled machine halted within the probe budget");

  if (auto bb = known_busy_beaver_steps(space); bb && *bb <= probe_budget) {
    if (cal.max_observed > *bb) throw std::logic_error("sampled halting time exceeds the known Busy Beaver runtime");
    cal.busy_beaver_known = true;
    cal.cutoff = *bb;
    cal.missed_mass_bound = 0.0;
    return cal;
  }
  std::uint64_t within = 0;
  for (const auto& [t, c] : cal.halting_times) {
    within += c;
    double missed = static_cast<double>(cal.halted - within) / static_cast<double>(cal.halted);
    if (missed <= acceptable_miss) {
      cal.cutoff = t;
      cal.missed_mass_bound = missed;
      break;
    }
  }
  return cal;
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string ranges_text(const std::vector<IndexRange>& ranges) {
  std::string s;
  for (const auto& r : ranges) {
    if (!s.empty()) s += ',';
    s += r.begin.str() + "-" + r.end.str();
  }
  return s;
}

}  // namespace

void write_distribution(std::ostream& out, const FrequencyDistribution& dist) {
  const auto& sp = dist.space();
  out << "#space " << sp.states << ' ' << sp.symbols << ' ' << (sp.dims == Dims::TwoD ? 2 : 1) << '\n';
  out << "#budget " << dist.budget() << '\n';
  out << "#halting " << dist.halting() << '\n';
  out << "#nonhalting " << dist.nonhalting() << '\n';
  const auto& rec = dist.record();
  if (rec.kind == BuildRecord::Kind::Exhaustive) {
    out << "#mode exhaustive";
    const bool complete = rec.ranges.size() == 1 && rec.ranges[0] == IndexRange{0, sp.reduced_size()};
    if (!complete) out << " ranges=" << ranges_text(rec.ranges);
    out << '\n';
  } else {
    out << "#mode sampled seed=";
    for (std::size_t i = 0; i < rec.seeds.size(); ++i) out << (i ? "," : "") << rec.seeds[i];
    out << " samples=" << rec.samples << '\n';
  }
  for (const auto& [s, c] : dist.sorted()) out << s.key() << ' ' << c << '\n';
}

FrequencyDistribution read_distribution(std::istream& in) {
  std::optional<MachineSpace> space;
  std::optional<std::int64_t> budget;
  std::optional<BigInt> halting, nonhalting;
  std::optional<BuildRecord> record;
  std::vector<std::pair<OutputArray, BigInt>> rows;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw RejectedInput("distribution line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line.front() == '#') {
      std::string tag;
      ls >> tag;
      if (tag == "#space") {
        int n = 0, m = 0, d = 0;
        if (!(ls >> n >> m >> d) || (d != 1 && d != 2)) fail("malformed #space header");
        space = MachineSpace{n, m, d == 2 ? Dims::TwoD : Dims::OneD};
        space->validate();
      } else if (tag == "#budget") {
        std::int64_t b = 0;
        if (!(ls >> b)) fail("malformed #budget header");
        budget = b;
      } else if (tag == "#halting" || tag == "#nonhalting") {
        std::string v;
        if (!(ls >> v) || v.find_first_not_of("0123456789") != std::string::npos) fail("malformed " + tag);
        (tag == "#halting" ? halting : nonhalting) = BigInt(v);
      } else if (tag == "#mode") {
        std::string kind;
        ls >> kind;
        BuildRecord rec;
        std::string field;
        if (kind == "exhaustive") {
          rec.kind = BuildRecord::Kind::Exhaustive;
          if (!space) fail("#mode before #space");
          rec.ranges = {IndexRange{0, space->reduced_size()}};
          while (ls >> field) {
            if (field.rfind("ranges=", 0) != 0) fail("unknown mode field '" + field + "'");
            rec.ranges.clear();
            std::istringstream rs(field.substr(7));
            std::string part;
            while (std::getline(rs, part, ',')) {
              auto dash = part.find('-');
              if (dash == std::string::npos) fail("malformed range '" + part + "'");
              rec.ranges.push_back(IndexRange{BigInt(part.substr(0, dash)), BigInt(part.substr(dash + 1))});
            }
          }
        } else if (kind == "sampled") {
          rec.kind = BuildRecord::Kind::Sampled;
          while (ls >> field) {
            if (field.rfind("seed=", 0) == 0) {
              std::istringstream ss(field.substr(5));
              std::string part;
              while (std::getline(ss, part, ',')) rec.seeds.push_back(std::stoull(part));
            } else if (field.rfind("samples=", 0) == 0) {
              rec.samples = std::stoull(field.substr(8));
            } else {
              fail("unknown mode field '" + field + "'");
            }
          }
        } else {
          fail("unknown mode '" + kind + "'");
        }
        record = rec;
      } else {
        fail("unknown header '" + tag + "'");
      }
      continue;
    }
    std::string key, count;
    if (!(ls >> key >> count) || count.find_first_not_of("0123456789") != std::string::npos)
      fail("malformed record '" + line + "'");
    rows.emplace_back(OutputArray::parse(key), BigInt(count));
  }
  if (!space || !budget || !halting || !nonhalting || !record) throw RejectedInput("distribution file is missing headers");
  FrequencyDistribution dist(*space, *budget, *record);
  for (const auto& [s, c] : rows) {
    if (c <= 0) throw RejectedInput("distribution record " + s.key() + " has a non-positive count");
    if (dist.entries().count(s)) throw RejectedInput("distribution record " + s.key() + " is duplicated");
    dist.add(s, c);
  }
  if (dist.halting() != *halting) throw RejectedInput("distribution records do not sum to the #halting header");
  dist.add_nonhalting(*nonhalting);
  return dist;
}

void save_distribution(const std::string& path, const FrequencyDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RejectedInput("cannot write " + path);
  write_distribution(out, dist);
  if (!out) throw RejectedInput("failed writing " + path);
}

FrequencyDistribution load_distribution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RejectedInput("cannot read " + path);
  return read_distribution(in);
}

}  // namespace ctm
