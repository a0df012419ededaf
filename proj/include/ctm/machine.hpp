#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ctm {

using BigInt = boost::multiprecision::cpp_int;

enum class Dims { OneD, TwoD };

// Direction order doubles as the instruction numbering order: right and left
// come first so that a 1D instruction keeps its number inside the 2D space.
enum class Move : std::uint8_t { Right = 0, Left = 1, Up = 2, Down = 3, Stop = 4 };

inline constexpr int kHaltState = 0;
inline constexpr int kInitialState = 1;

struct MachineSpace {
  int states = 1;
  int symbols = 2;
  Dims dims = Dims::TwoD;

  int directions() const { return dims == Dims::TwoD ? 4 : 2; }
  // Instructions available to one transition-table entry: m halting ones plus
  // one per (direction, next state, written symbol).
  int instruction_count() const { return directions() * states * symbols + symbols; }
  int entry_count() const { return states * symbols; }
  // Choices for the initial transition in the reduced enumeration: move right,
  // write any symbol, go to any of states 2..n.
  int initial_choices() const { return symbols * (states - 1); }

  BigInt full_size() const;
  BigInt reduced_size() const;

  void validate() const;
  std::string describe() const;

  friend bool operator==(const MachineSpace&, const MachineSpace&) = default;
};

enum class EnumerationMode { Full, Reduced };

struct Instruction {
  int next_state = kHaltState;
  int write = 0;
  Move move = Move::Stop;

  bool halts() const { return next_state == kHaltState; }
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// Instruction numbering inside one base-(instruction_count) digit:
//   0 .. m-1                 halt writing symbol 0 .. m-1
//   m + (d*n + (s-1))*m + w  move in direction d (Right, Left, Up, Down),
//                            go to state s, write w
Instruction instruction_from_number(const MachineSpace& space, int number);
int instruction_number(const MachineSpace& space, const Instruction& ins);

// The initial transition of a reduced-enumeration machine from its digit.
Instruction reduced_initial_instruction(const MachineSpace& space, int digit);
int reduced_initial_digit(const MachineSpace& space, const Instruction& ins);

// n*m entries indexed by (state - 1) * m + read.
class TransitionTable {
 public:
  explicit TransitionTable(MachineSpace space);
  TransitionTable(MachineSpace space, std::vector<Instruction> entries);

  const MachineSpace& space() const { return space_; }
  const Instruction& at(int state, int read) const { return entries_[slot(state, read)]; }
  void set(int state, int read, const Instruction& ins);
  const std::vector<Instruction>& entries() const { return entries_; }

  // True when the entry read first on a blank-0 grid moves right into a state
  // other than the initial and halting ones.
  bool in_reduced_form() const;

  friend bool operator==(const TransitionTable&, const TransitionTable&) = default;

 private:
  std::size_t slot(int state, int read) const;

  MachineSpace space_;
  std::vector<Instruction> entries_;
};

struct MachineIndex {
  MachineSpace space;
  EnumerationMode mode = EnumerationMode::Full;
  BigInt value;
};

BigInt count_machines(const MachineSpace& space, EnumerationMode mode);

// Mixed-radix encoding. Entry (1,0) is the least significant digit; in
// reduced mode it ranges over 0 .. m(n-1)-1, every other digit over
// 0 .. instruction_count-1.
MachineIndex encode(const TransitionTable& table, EnumerationMode mode);
TransitionTable decode(const MachineIndex& index);

// Digit vector form of the index, least significant first. Used by the
// enumeration hot paths to avoid big-integer arithmetic.
std::vector<int> index_digits(const MachineIndex& index);
TransitionTable table_from_digits(const MachineSpace& space, EnumerationMode mode, const std::vector<int>& digits);

// `state,read -> next,write,move` lines with moves U/D/L/R/S.
std::string to_text(const TransitionTable& table);
TransitionTable parse_table(const MachineSpace& space, std::string_view text);

char move_letter(Move m);
Move move_from_letter(char c);

// Same program, seen as a 2D machine that never moves up or down.
TransitionTable embed_in_2d(const TransitionTable& table);
// Relabels symbols a <-> b in reads and writes. Running the result from blank
// b reproduces the original run from blank a with a and b exchanged.
TransitionTable swap_symbols(const TransitionTable& table, int a, int b);
// Turns every move clockwise by quarter_turns (2D only).
TransitionTable rotate_moves(const TransitionTable& table, int quarter_turns);
// Exchanges left and right moves.
TransitionTable reflect_moves(const TransitionTable& table);

}  // namespace ctm
