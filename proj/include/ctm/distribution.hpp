#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctm/machine.hpp"
#include "ctm/output_array.hpp"

namespace ctm {

// Half-open range [begin, end) of reduced-enumeration indices.
struct IndexRange {
  BigInt begin;
  BigInt end;
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// How a distribution was produced. Exhaustive builds track which reduced
// indices they cover so shards can be merged; sampled builds track seeds.
struct BuildRecord {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::vector<IndexRange> ranges;
  std::vector<std::uint64_t> seeds;
  std::uint64_t samples = 0;

  friend bool operator==(const BuildRecord&, const BuildRecord&) = default;
};

// Empirical output distribution D(n,m): exact occurrence counts per output
// array plus halting and non-halting tallies. Frequencies are only formed at
// query time.
class FrequencyDistribution {
 public:
  using Entries = std::unordered_map<OutputArray, BigInt, OutputArrayHash>;

  FrequencyDistribution(MachineSpace space, std::int64_t budget, BuildRecord record);

  const MachineSpace& space() const { return space_; }
  std::int64_t budget() const { return budget_; }
  const BuildRecord& record() const { return record_; }
  BuildRecord& record() { return record_; }
  const BigInt& halting() const { return halting_; }
  const BigInt& nonhalting() const { return nonhalting_; }
  const Entries& entries() const { return entries_; }
  std::size_t distinct() const { return entries_.size(); }

  // Adds halting occurrences of s.
  void add(const OutputArray& s, const BigInt& count);
  void add_nonhalting(const BigInt& count);

  BigInt count(const OutputArray& s) const;
  // count(s) / halting, or 0 when s is absent.
  double frequency(const OutputArray& s) const;

  bool empty() const { return entries_.empty() && halting_ == 0 && nonhalting_ == 0; }

  // Descending count, ties by ascending array order.
  std::vector<std::pair<OutputArray, BigInt>> sorted() const;

  // Throws if the entry counts do not sum to the halting tally or any count
  // is non-positive.
  void check_invariants() const;

  friend bool operator==(const FrequencyDistribution& a, const FrequencyDistribution& b);

 private:
  MachineSpace space_;
  std::int64_t budget_;
  BuildRecord record_;
  BigInt halting_ = 0;
  BigInt nonhalting_ = 0;
  Entries entries_;
};

struct BuildOptions {
  int workers = 1;
  // Largest reduced (or full) space an exhaustive build may enumerate.
  BigInt ceiling = default_ceiling();
  enum class Engine { Tree, Brute };
  // Tree: explores only the table entries a run actually reads and weights
  // each leaf by the number of machines sharing it. Brute: one run per index.
  Engine engine = Engine::Tree;
  // Restrict an exhaustive reduced build to part of the index space (brute
  // engine only). The shard starting at 0 carries the analytic completions.
  std::optional<IndexRange> range;
  // Run the blank-1 grid directly instead of deriving it by exchanging
  // symbols 0 and 1 (brute engine only).
  bool direct_blank_runs = false;

  // 10^10 machines, or CTM_MAX_MACHINES when set.
  static BigInt default_ceiling();
};

// Every machine of the (reduced) enumeration, from blank 0 and blank 1. With
// use_reduced the completions are applied: immediate-halt single-cell
// outputs and initial-state movers are added analytically, and each output is
// added in every orientation reachable by the other initial moves.
FrequencyDistribution build_exhaustive(const MachineSpace& space, std::int64_t budget, bool use_reduced,
                                       const BuildOptions& options = {});

// Uniform reduced-enumeration machines with the same completions, scaled so
// every sample stands for instruction_count machines of the full space per
// blank symbol: each orientation of a sampled output counts m(n-1), each
// single-cell output counts once per sample.
FrequencyDistribution build_sampled(const MachineSpace& space, std::int64_t budget, std::uint64_t num_samples,
                                    std::uint64_t seed, const BuildOptions& options = {});

FrequencyDistribution merge(const FrequencyDistribution& a, const FrequencyDistribution& b);

struct RuntimeCalibration {
  std::uint64_t sample_size = 0;
  std::int64_t probe_budget = 0;
  std::map<std::int64_t, std::uint64_t> halting_times;
  std::uint64_t halted = 0;
  std::uint64_t timed_out = 0;
  std::uint64_t filtered = 0;
  std::int64_t max_observed = 0;
  std::int64_t cutoff = 0;
  // Fraction of sampled halting machines that halted after the cutoff.
  double missed_mass_bound = 0.0;
  bool busy_beaver_known = false;

  // Fraction of sampled halting machines halting within `steps`.
  double cumulative(std::int64_t steps) const;
};

// Known maximum halting times of 1D binary machines (Busy Beaver runtimes).
std::optional<std::int64_t> known_busy_beaver_steps(const MachineSpace& space);

RuntimeCalibration calibrate_runtime(const MachineSpace& space, std::uint64_t sample_size, std::int64_t probe_budget,
                                     double acceptable_miss, std::uint64_t seed);

// Uniformly random reduced-enumeration machines. Samples are drawn in chunks
// of kChunkSize, each chunk with its own seeded generator, so sample i is the
// same however many samples are drawn and however chunks are split across
// workers.
class SampleStream {
 public:
  static constexpr std::uint64_t kChunkSize = 1u << 16;

  SampleStream(const MachineSpace& space, std::uint64_t seed, std::uint64_t chunk);
  // Digits of the next sample, least significant (initial transition) first.
  void next(std::vector<int>& digits);

 private:
  std::uint64_t below(std::uint64_t bound);

  MachineSpace space_;
  std::mt19937_64 rng_;
};

void write_distribution(std::ostream& out, const FrequencyDistribution& dist);
FrequencyDistribution read_distribution(std::istream& in);
void save_distribution(const std::string& path, const FrequencyDistribution& dist);
FrequencyDistribution load_distribution(const std::string& path);

}  // namespace ctm
