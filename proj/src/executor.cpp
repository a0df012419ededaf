#include "ctm/executor.hpp"

#include <algorithm>
#include <cstdlib>

#include "ctm/errors.hpp"

namespace ctm {

PackedInstruction pack(const Instruction& ins) {
  return PackedInstruction{static_cast<std::int8_t>(ins.next_state), static_cast<std::int8_t>(ins.write),
                           static_cast<std::int8_t>(ins.move)};
}

std::vector<PackedInstruction> pack(const TransitionTable& table) {
  std::vector<PackedInstruction> program;
  program.reserve(table.entries().size());
  for (const auto& e : table.entries()) program.push_back(pack(e));
  return program;
}

FilterVerdict static_filter(const MachineSpace& space, std::span<const PackedInstruction> program) {
  const int m = space.symbols;
  bool any_halt = false;
  for (const auto& ins : program) {
    if (!ins.defined() || ins.next_state == kHaltState) {
      any_halt = true;
      break;
    }
  }
  if (!any_halt) return FilterVerdict::ProvablyNonHalting;

  // Reachability over states; up to 100 states, so a bitmask vector suffices.
  std::vector<char> seen(static_cast<std::size_t>(space.states) + 1, 0);
  std::vector<int> stack{kInitialState};
  seen[kInitialState] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int r = 0; r < m; ++r) {
      const auto& ins = program[static_cast<std::size_t>((s - 1) * m + r)];
      if (!ins.defined() || ins.next_state == kHaltState) return FilterVerdict::MayHalt;
      if (!seen[ins.next_state]) {
        seen[ins.next_state] = 1;
        stack.push_back(ins.next_state);
      }
    }
  }
  return FilterVerdict::ProvablyNonHalting;
}

FilterVerdict static_filter(const TransitionTable& table) {
  auto program = pack(table);
  return static_filter(table.space(), program);
}

Simulator::Simulator(MachineSpace space, std::int64_t max_steps, int initial_radius)
    : space_(space), max_steps_(max_steps) {
  space_.validate();
  if (max_steps < 1) throw RejectedInput("step budget must be at least 1");
  radius_ = static_cast<int>(std::clamp<std::int64_t>(max_steps, 1, std::max(initial_radius, 1)));
  side_ = static_cast<std::size_t>(2 * radius_ + 1);
  rows_ = space_.dims == Dims::TwoD ? static_cast<int>(side_) : 1;
  grid_.assign(side_ * static_cast<std::size_t>(rows_), 0);
  blank_ = 0;
}

void Simulator::reset(int blank_symbol) {
  if (blank_symbol < 0 || blank_symbol >= space_.symbols) throw RejectedInput("blank symbol out of range");
  if (blank_symbol != blank_) {
    std::fill(grid_.begin(), grid_.end(), static_cast<std::uint8_t>(blank_symbol));
    blank_ = blank_symbol;
  } else {
    const bool two_d = space_.dims == Dims::TwoD;
    for (const auto& c : written_) grid_[two_d ? index(c.x, c.y) : static_cast<std::size_t>(c.x + radius_)] = blank_;
  }
  written_.clear();
  min_x_ = max_x_ = min_y_ = max_y_ = 0;
}

void Simulator::grow(int x, int y) {
  int needed = std::max(std::abs(x), std::abs(y));
  int new_radius = std::max(2 * radius_, needed);
  std::size_t new_side = static_cast<std::size_t>(2 * new_radius + 1);
  const bool two_d = space_.dims == Dims::TwoD;
  std::size_t new_rows = two_d ? new_side : 1;
  std::vector<std::uint8_t> next(new_side * new_rows, static_cast<std::uint8_t>(blank_));
  for (std::size_t r = 0; r < static_cast<std::size_t>(rows_); ++r) {
    std::size_t dst_row = two_d ? r + static_cast<std::size_t>(new_radius - radius_) : 0;
    std::copy_n(grid_.begin() + static_cast<std::ptrdiff_t>(r * side_), side_,
                next.begin() + static_cast<std::ptrdiff_t>(dst_row * new_side + (new_radius - radius_)));
  }
  grid_ = std::move(next);
  radius_ = new_radius;
  side_ = new_side;
  rows_ = static_cast<int>(new_rows);
}

template <bool kTwoD>
Simulator::Trace Simulator::execute_impl(std::span<const PackedInstruction> program) {
  const int m = space_.symbols;
  const auto blank = static_cast<std::uint8_t>(blank_);
  int x = 0, y = 0, state = kInitialState;
  for (std::int64_t step = 1; step <= max_steps_; ++step) {
    std::size_t at = kTwoD ? index(x, y) : static_cast<std::size_t>(x + radius_);
    std::uint8_t sym = grid_[at];
    int slot = (state - 1) * m + sym;
    const auto& ins = program[static_cast<std::size_t>(slot)];
    if (!ins.defined()) return Trace{Outcome::Undefined, step - 1, slot};
    if (ins.write != sym) {
      if (sym == blank) written_.push_back(Cell{x, y});
      grid_[at] = static_cast<std::uint8_t>(ins.write);
    }
    switch (static_cast<Move>(ins.move)) {
      case Move::Stop: return Trace{Outcome::Halted, step, -1};
      case Move::Right: ++x; break;
      case Move::Left: --x; break;
      case Move::Up: --y; break;
      case Move::Down: ++y; break;
    }
    state = ins.next_state;
    if (x < min_x_) min_x_ = x;
    if (x > max_x_) max_x_ = x;
    if constexpr (kTwoD) {
      if (y < min_y_) min_y_ = y;
      if (y > max_y_) max_y_ = y;
    }
    if (x < -radius_ || x > radius_ || y < -radius_ || y > radius_) grow(x, y);
  }
  return Trace{Outcome::TimedOut, max_steps_, -1};
}

Simulator::Trace Simulator::execute(std::span<const PackedInstruction> program, int blank_symbol) {
  if (program.size() != static_cast<std::size_t>(space_.entry_count()))
    throw RejectedInput("program size does not match the machine space");
  reset(blank_symbol);
  return space_.dims == Dims::TwoD ? execute_impl<true>(program) : execute_impl<false>(program);
}

OutputArray Simulator::output() const {
  const int h = max_y_ - min_y_ + 1;
  const int w = max_x_ - min_x_ + 1;
  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(h) * w);
  const bool two_d = space_.dims == Dims::TwoD;
  for (int y = min_y_; y <= max_y_; ++y)
    for (int x = min_x_; x <= max_x_; ++x)
      cells.push_back(grid_[two_d ? index(x, y) : static_cast<std::size_t>(x + radius_)]);
  return OutputArray(h, w, std::move(cells));
}

RunResult run(const TransitionTable& table, const RunConfig& config) {
  if (config.apply_static_filter && static_filter(table) == FilterVerdict::ProvablyNonHalting)
    return RunResult{RunStatus::FilteredNonHalting, 0, std::nullopt};
  Simulator sim(table.space(), config.max_steps);
  auto program = pack(table);
  auto trace = sim.execute(program, config.blank_symbol);
  if (trace.outcome == Simulator::Outcome::Halted) return RunResult{RunStatus::Halted, trace.steps, sim.output()};
  return RunResult{RunStatus::TimedOut, trace.steps, std::nullopt};
}

}  // namespace ctm
