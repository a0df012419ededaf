#include "ctm/machine.hpp"

#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

BigInt pow_big(int base, int exponent) {
  BigInt r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

BigInt MachineSpace::full_size() const { return pow_big(instruction_count(), entry_count()); }

BigInt MachineSpace::reduced_size() const {
  return BigInt(initial_choices()) * pow_big(instruction_count(), entry_count() - 1);
}

void MachineSpace::validate() const {
  if (states < 1) throw RejectedInput("machine space needs at least one state");
  if (symbols < 2) throw RejectedInput("machine space needs at least two symbols");
  if (states > 100 || symbols > 10) throw RejectedInput("machine space too large for the instruction encoding");
}

std::string MachineSpace::describe() const {
  return "(" + std::to_string(states) + "," + std::to_string(symbols) + ")" + (dims == Dims::TwoD ? "_2D" : "_1D");
}

Instruction instruction_from_number(const MachineSpace& space, int number) {
  const int m = space.symbols;
  if (number < 0 || number >= space.instruction_count())
    throw RejectedInput("instruction number " + std::to_string(number) + " out of range");
  if (number < m) return Instruction{kHaltState, number, Move::Stop};
  int rest = number - m;
  int write = rest % m;
  rest /= m;
  int state = rest % space.states + 1;
  int dir = rest / space.states;
  return Instruction{state, write, static_cast<Move>(dir)};
}

int instruction_number(const MachineSpace& space, const Instruction& ins) {
  const int m = space.symbols;
  if (ins.write < 0 || ins.write >= m) throw RejectedInput("written symbol out of range");
  if (ins.halts() != (ins.move == Move::Stop)) throw RejectedInput("an instruction stops if and only if it halts");
  if (ins.halts()) return ins.write;
  if (ins.next_state < 1 || ins.next_state > space.states) throw RejectedInput("next state out of range");
  int dir = static_cast<int>(ins.move);
  if (dir >= space.directions()) throw RejectedInput("move not available in a 1D space");
  return m + (dir * space.states + (ins.next_state - 1)) * m + ins.write;
}

Instruction reduced_initial_instruction(const MachineSpace& space, int digit) {
  if (digit < 0 || digit >= space.initial_choices()) throw RejectedInput("reduced initial digit out of range");
  return Instruction{2 + digit / space.symbols, digit % space.symbols, Move::Right};
}

int reduced_initial_digit(const MachineSpace& space, const Instruction& ins) {
  if (ins.move != Move::Right || ins.next_state < 2 || ins.next_state > space.states)
    throw RejectedInput("reduced enumeration requires an initial transition moving right to a state other than 1 and HALT");
  return (ins.next_state - 2) * space.symbols + ins.write;
}

TransitionTable::TransitionTable(MachineSpace space) : space_(space) {
  space_.validate();
  entries_.assign(static_cast<std::size_t>(space_.entry_count()), Instruction{});
}

TransitionTable::TransitionTable(MachineSpace space, std::vector<Instruction> entries)
    : space_(space), entries_(std::move(entries)) {
  space_.validate();
  if (entries_.size() != static_cast<std::size_t>(space_.entry_count()))
    throw RejectedInput("transition table needs exactly n*m entries");
  for (const auto& e : entries_) instruction_number(space_, e);
}

std::size_t TransitionTable::slot(int state, int read) const {
  if (state < 1 || state > space_.states || read < 0 || read >= space_.symbols)
    throw RejectedInput("transition (" + std::to_string(state) + "," + std::to_string(read) + ") out of range");
  return static_cast<std::size_t>((state - 1) * space_.symbols + read);
}

void TransitionTable::set(int state, int read, const Instruction& ins) {
  instruction_number(space_, ins);
  entries_[slot(state, read)] = ins;
}

bool TransitionTable::in_reduced_form() const {
  const auto& first = entries_.front();
  return first.move == Move::Right && first.next_state >= 2;
}

BigInt count_machines(const MachineSpace& space, EnumerationMode mode) {
  space.validate();
  return mode == EnumerationMode::Full ? space.full_size() : space.reduced_size();
}

std::vector<int> index_digits(const MachineIndex& index) {
  const auto& space = index.space;
  if (index.value < 0 || index.value >= count_machines(space, index.mode))
    throw RejectedInput("machine index out of range for " + space.describe());
  std::vector<int> digits(static_cast<std::size_t>(space.entry_count()));
  BigInt v = index.value;
  for (std::size_t e = 0; e < digits.size(); ++e) {
    int radix = (e == 0 && index.mode == EnumerationMode::Reduced) ? space.initial_choices() : space.instruction_count();
    digits[e] = static_cast<int>(v % radix);
    v /= radix;
  }
  return digits;
}

TransitionTable table_from_digits(const MachineSpace& space, EnumerationMode mode, const std::vector<int>& digits) {
  std::vector<Instruction> entries(digits.size());
  for (std::size_t e = 0; e < digits.size(); ++e) {
    entries[e] = (e == 0 && mode == EnumerationMode::Reduced) ? reduced_initial_instruction(space, digits[e])
                                                               : instruction_from_number(space, digits[e]);
  }
  return TransitionTable(space, std::move(entries));
}

TransitionTable decode(const MachineIndex& index) {
  return table_from_digits(index.space, index.mode, index_digits(index));
}

MachineIndex encode(const TransitionTable& table, EnumerationMode mode) {
  const auto& space = table.space();
  const auto& entries = table.entries();
  BigInt value = 0;
  for (std::size_t e = entries.size(); e-- > 0;) {
    if (e == 0 && mode == EnumerationMode::Reduced) {
      value = value * space.initial_choices() + reduced_initial_digit(space, entries[0]);
    } else {
      value = value * space.instruction_count() + instruction_number(space, entries[e]);
    }
  }
  return MachineIndex{space, mode, value};
}

char move_letter(Move m) {
  switch (m) {
    case Move::Right: return 'R';
    case Move::Left: return 'L';
    case Move::Up: return 'U';
    case Move::Down: return 'D';
    case Move::Stop: return 'S';
  }
  return '?';
}

Move move_from_letter(char c) {
  switch (c) {
    case 'R': return Move::Right;
    case 'L': return Move::Left;
    case 'U': return Move::Up;
    case 'D': return Move::Down;
    case 'S': return Move::Stop;
    default: throw RejectedInput(std::string("unknown move letter '") + c + "'");
  }
}

std::string to_text(const TransitionTable& table) {
  std::ostringstream out;
  const auto& space = table.space();
  for (int s = 1; s <= space.states; ++s) {
    for (int r = 0; r < space.symbols; ++r) {
      const auto& ins = table.at(s, r);
      out << s << ',' << r << " -> " << ins.next_state << ',' << ins.write << ',' << move_letter(ins.move) << '\n';
    }
  }
  return out.str();
}

TransitionTable parse_table(const MachineSpace& space, std::string_view text) {
  TransitionTable table(space);
  std::vector<bool> seen(static_cast<std::size_t>(space.entry_count()), false);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    int s = 0, r = 0, ns = 0, w = 0;
    char c1 = 0, c2 = 0, c3 = 0, mv = 0;
    std::string arrow;
    std::istringstream ls(line);
    if (!(ls >> s >> c1 >> r >> arrow >> ns >> c2 >> w >> c3 >> mv) || c1 != ',' || c2 != ',' || c3 != ',' ||
        arrow != "->")
      throw RejectedInput("malformed transition on line " + std::to_string(lineno) + ": '" + line + "'");
    table.set(s, r, Instruction{ns, w, move_from_letter(mv)});
    auto slot = static_cast<std::size_t>((s - 1) * space.symbols + r);
    if (seen[slot]) throw RejectedInput("duplicate transition on line " + std::to_string(lineno));
    seen[slot] = true;
  }
  for (bool b : seen)
    if (!b) throw RejectedInput("transition table is missing entries");
  return table;
}

TransitionTable embed_in_2d(const TransitionTable& table) {
  auto space = table.space();
  if (space.dims != Dims::OneD) throw RejectedInput("only 1D tables can be embedded in 2D");
  space.dims = Dims::TwoD;
  return TransitionTable(space, table.entries());
}

TransitionTable swap_symbols(const TransitionTable& table, int a, int b) {
  const auto& space = table.space();
  auto sigma = [&](int v) { return v == a ? b : v == b ? a : v; };
  TransitionTable out(space);
  for (int s = 1; s <= space.states; ++s) {
    for (int r = 0; r < space.symbols; ++r) {
      auto ins = table.at(s, r);
      ins.write = sigma(ins.write);
      out.set(s, sigma(r), ins);
    }
  }
  return out;
}

TransitionTable rotate_moves(const TransitionTable& table, int quarter_turns) {
  if (table.space().dims != Dims::TwoD) throw RejectedInput("only 2D tables can be rotated");
  // Clockwise on a grid whose rows grow downwards.
  auto turn = [](Move m) {
    switch (m) {
      case Move::Right: return Move::Down;
      case Move::Down: return Move::Left;
      case Move::Left: return Move::Up;
      case Move::Up: return Move::Right;
      case Move::Stop: return Move::Stop;
    }
    return m;
  };
  auto entries = table.entries();
  int q = ((quarter_turns % 4) + 4) % 4;
  for (auto& e : entries)
    for (int i = 0; i < q; ++i) e.move = turn(e.move);
  return TransitionTable(table.space(), std::move(entries));
}

TransitionTable reflect_moves(const TransitionTable& table) {
  auto entries = table.entries();
  for (auto& e : entries) {
    if (e.move == Move::Left) e.move = Move::Right;
    else if (e.move == Move::Right) e.move = Move::Left;
  }
  return TransitionTable(table.space(), std::move(entries));
}

}  // namespace ctm
