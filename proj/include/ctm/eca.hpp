#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ctm/output_array.hpp"

namespace ctm {

class EcaRule {
 public:
  explicit EcaRule(int number);
  int number() const { return number_; }
  // Neighbourhood (left, centre, right) packed as 4l + 2c + r.
  std::uint8_t apply(int neighbourhood) const { return static_cast<std::uint8_t>((number_ >> neighbourhood) & 1); }
  // The 0-1 reverted rule: complementing inputs and output.
  EcaRule reverted() const;

 private:
  int number_;
};

using BitRow = std::vector<std::uint8_t>;

// (steps + 1) x width diagram, row 0 the initial row, periodic boundaries.
OutputArray evolve(const EcaRule& rule, const BitRow& initial, int steps);

BitRow single_cell_initial(int width);
// Independent cells, each 1 with probability `density`, from a seeded mt19937_64.
BitRow random_initial(int width, std::uint64_t seed, double density = 0.5);

struct RuleScore {
  int rule = 0;
  double score = 0.0;
};

// Scores each rule's diagram and sorts ascending by score, ties by rule
// number. With workers > 1 rules are scored in parallel; the scorer must be
// safe to call concurrently.
std::vector<RuleScore> classify(const std::vector<int>& rules, const BitRow& initial, int steps,
                                const std::function<double(const OutputArray&)>& scorer, int workers = 1);

}  // namespace ctm
