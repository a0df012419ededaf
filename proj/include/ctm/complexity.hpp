#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctm/distribution.hpp"
#include "ctm/output_array.hpp"

namespace ctm {

// Which symmetries identify arrays. The group is generated by quarter turns,
// the left-right mirror and binary complement; its order is
// (4 or 1) x (2 or 1) x (2 or 1).
struct SymmetryPolicy {
  bool rotations = false;
  bool reflections = false;
  bool complement = false;

  static SymmetryPolicy none() { return {}; }
  static SymmetryPolicy full() { return {true, true, true}; }

  int group_order() const { return (rotations ? 4 : 1) * (reflections ? 2 : 1) * (complement ? 2 : 1); }
  // "none", or a comma list of rot, ref, comp.
  std::string name() const;
  static SymmetryPolicy parse(const std::string& text);

  friend bool operator==(const SymmetryPolicy&, const SymmetryPolicy&) = default;
};

// Distinct members of the orbit of s, in ascending order.
std::vector<OutputArray> orbit(const OutputArray& s, const SymmetryPolicy& policy);
// Smallest orbit member under (height, width, cells) order.
OutputArray canonicalize(const OutputArray& s, const SymmetryPolicy& policy);

// -log2(count / halting).
double k_from_counts(const BigInt& count, const BigInt& halting);
// Coding-theorem complexity of s in bits; nullopt when s never occurred,
// i.e. its complexity is beyond what the distribution resolves.
std::optional<double> k_of(const FrequencyDistribution& dist, const OutputArray& s);

struct TableSource {
  MachineSpace space;
  std::int64_t budget = 0;
  BigInt halting = 0;
  BigInt nonhalting = 0;
  BuildRecord record;
};

// Canonical array -> complexity. Immutable once built; lookups canonicalize
// their argument under the table's policy.
class ComplexityTable {
 public:
  struct Entry {
    BigInt count;
    double k = 0.0;
  };
  using Entries = std::unordered_map<OutputArray, Entry, OutputArrayHash>;

  ComplexityTable(TableSource source, SymmetryPolicy policy, std::optional<int> side);

  // Adds `count` occurrences to the class of `canonical` (already canonical).
  void accumulate(const OutputArray& canonical, const BigInt& count);

  std::optional<double> lookup(const OutputArray& s) const;
  const Entry* find_canonical(const OutputArray& canonical) const;

  const TableSource& source() const { return source_; }
  const SymmetryPolicy& policy() const { return policy_; }
  std::optional<int> side() const { return side_; }
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // For a side-d table over binary arrays: fraction of all 2^(d*d) arrays
  // whose class is present.
  double completeness() const;

  // Descending count, ties by canonical array order.
  std::vector<std::pair<OutputArray, Entry>> sorted() const;

 private:
  TableSource source_;
  SymmetryPolicy policy_;
  std::optional<int> side_;
  Entries entries_;
};

// All d x d arrays of the distribution grouped by class; the counts of a
// class's members are summed before taking -log2.
ComplexityTable patch_table(const FrequencyDistribution& dist, int side, const SymmetryPolicy& policy);
// Every array of the distribution, grouped the same way.
ComplexityTable full_table(const FrequencyDistribution& dist, const SymmetryPolicy& policy);

struct RankedEntry {
  OutputArray array;
  BigInt count;
  double k = 0.0;
};

// Descending count (ascending k), ties broken by array order.
std::vector<RankedEntry> rank_report(const FrequencyDistribution& dist,
                                     const std::function<bool(const OutputArray&)>& keep = {});

struct SquareCensus {
  int side = 0;
  std::uint64_t present = 0;
  BigInt possible = 0;
};

// Number of distinct d x d arrays present for d = 1..max_side.
std::vector<SquareCensus> square_census(const FrequencyDistribution& dist, int max_side);

// An array P of size a x b whose complexity is below that of some smaller
// array Q (fewer cells) which is itself below the median complexity of the
// a x b arrays.
struct Climber {
  OutputArray array;
  double k = 0.0;
  double size_median_k = 0.0;
  OutputArray smaller;
  double smaller_k = 0.0;
};

std::vector<Climber> find_climbers(const FrequencyDistribution& dist);

void write_table(std::ostream& out, const ComplexityTable& table);
ComplexityTable read_table(std::istream& in);
void save_table(const std::string& path, const ComplexityTable& table);
ComplexityTable load_table(const std::string& path);

}  // namespace ctm
