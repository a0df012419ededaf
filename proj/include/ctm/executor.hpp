#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctm/machine.hpp"
#include "ctm/output_array.hpp"

namespace ctm {

struct RunConfig {
  std::int64_t max_steps = 2000;
  int blank_symbol = 0;
  // Skip machines the static filter proves non-halting.
  bool apply_static_filter = false;
};

enum class RunStatus { Halted, TimedOut, FilteredNonHalting };

struct RunResult {
  RunStatus status = RunStatus::TimedOut;
  // Transitions executed, the halting one included.
  std::int64_t steps_used = 0;
  std::optional<OutputArray> output;
};

enum class FilterVerdict { MayHalt, ProvablyNonHalting };

// Sound only: ProvablyNonHalting means no transition halts, or no halting
// transition belongs to a state reachable from state 1 in the state graph.
FilterVerdict static_filter(const TransitionTable& table);

// Runs from a grid (tape) filled with the blank symbol. The output is the
// smallest rectangle holding every cell the head occupied, read from the
// final grid.
RunResult run(const TransitionTable& table, const RunConfig& config);

// Compact instruction used by the enumeration engines. move == kUndefined
// marks an entry that has not been chosen yet.
struct PackedInstruction {
  static constexpr std::int8_t kUndefined = -1;
  std::int8_t next_state = 0;
  std::int8_t write = 0;
  std::int8_t move = kUndefined;

  bool defined() const { return move != kUndefined; }
};

std::vector<PackedInstruction> pack(const TransitionTable& table);
PackedInstruction pack(const Instruction& ins);

// Filter over a partially defined program; undefined entries may halt.
FilterVerdict static_filter(const MachineSpace& space, std::span<const PackedInstruction> program);

// Reusable simulation engine. Holds a dense grid centred on the start cell
// that is doubled whenever the head leaves it; only the cells written during
// a run are cleared before the next one.
class Simulator {
 public:
  enum class Outcome { Halted, TimedOut, Undefined };
  struct Trace {
    Outcome outcome = Outcome::TimedOut;
    std::int64_t steps = 0;
    // Entry slot the machine needed when outcome == Undefined.
    int undefined_slot = -1;
  };

  Simulator(MachineSpace space, std::int64_t max_steps, int initial_radius = 32);

  Trace execute(std::span<const PackedInstruction> program, int blank_symbol);
  // Output of the last execution (meaningful after Halted).
  OutputArray output() const;

  std::int64_t max_steps() const { return max_steps_; }
  int radius() const { return radius_; }

 private:
  template <bool kTwoD>
  Trace execute_impl(std::span<const PackedInstruction> program);
  void reset(int blank_symbol);
  void grow(int x, int y);
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y + radius_) * side_ + static_cast<std::size_t>(x + radius_);
  }

  struct Cell {
    int x;
    int y;
  };

  MachineSpace space_;
  std::int64_t max_steps_;
  int radius_;
  std::size_t side_;
  int rows_;  // 1 for tapes, side_ for grids
  int blank_ = -1;
  std::vector<std::uint8_t> grid_;
  std::vector<Cell> written_;
  int min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
};

}  // namespace ctm
