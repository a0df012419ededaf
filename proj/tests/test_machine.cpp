#include <doctest.h>

#include <random>
#include <set>

#include "ctm/errors.hpp"
#include "ctm/executor.hpp"
#include "ctm/machine.hpp"
#include "fixtures.hpp"

using namespace ctm;
using fixtures::space;

namespace {

// Every table of a space, built entry by entry without the index machinery.
template <class F>
void for_each_table(const MachineSpace& s, F&& visit) {
  const int entries = s.entry_count(), inst = s.instruction_count();
  std::vector<int> choice(static_cast<std::size_t>(entries), 0);
  while (true) {
    TransitionTable t(s);
    for (int e = 0; e < entries; ++e)
      t.set(e / s.symbols + 1, e % s.symbols, instruction_from_number(s, choice[static_cast<std::size_t>(e)]));
    visit(t);
    int e = 0;
    while (e < entries && ++choice[static_cast<std::size_t>(e)] == inst) choice[static_cast<std::size_t>(e++)] = 0;
    if (e == entries) break;
  }
}

BigInt random_below(std::mt19937_64& rng, const BigInt& bound) {
  BigInt v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 64) + rng();
  return v % bound;
}

}  // namespace

TEST_CASE("instruction counts follow 4nm+m and 2nm+m") {
  CHECK(space(4, 2, 2).instruction_count() == 34);
  CHECK(space(4, 2, 1).instruction_count() == 18);
  CHECK(space(2, 2, 2).full_size() == 104976);
  CHECK(space(2, 2, 2).reduced_size() == 11664);
  // 6 * 34^7 machines in the reduced (4,2) grid space.
  CHECK(space(4, 2, 2).reduced_size() == BigInt(6) * BigInt(52523350144ull));
}

TEST_CASE("count_machines matches brute-force table generation") {
  for (int dims : {1, 2}) {
    const auto s = space(2, 2, dims);
    BigInt full = 0, reduced = 0;
    for_each_table(s, [&](const TransitionTable& t) {
      ++full;
      if (t.in_reduced_form()) ++reduced;
    });
    CAPTURE(dims);
    CHECK(full == count_machines(s, EnumerationMode::Full));
    CHECK(reduced == count_machines(s, EnumerationMode::Reduced));
  }
  CHECK(count_machines(space(2, 2, 2), EnumerationMode::Full) == 104976);
  CHECK(count_machines(space(2, 2, 2), EnumerationMode::Reduced) == 11664);
}

TEST_CASE("every (2,2) grid index decodes to a distinct table") {
  const auto s = space(2, 2, 2);
  for (auto mode : {EnumerationMode::Full, EnumerationMode::Reduced}) {
    std::set<std::string> seen;
    const auto n = count_machines(s, mode).convert_to<long>();
    for (long i = 0; i < n; ++i) {
      auto t = decode(MachineIndex{s, mode, i});
      if (mode == EnumerationMode::Reduced) REQUIRE(t.in_reduced_form());
      REQUIRE(encode(t, mode).value == i);
      seen.insert(to_text(t));
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("encode/decode bijection on random indices") {
  std::mt19937_64 rng(20240611);
  for (int n : {2, 3, 4}) {
    for (int dims : {1, 2}) {
      const auto s = space(n, 2, dims);
      for (auto mode : {EnumerationMode::Full, EnumerationMode::Reduced}) {
        const auto total = count_machines(s, mode);
        for (int i = 0; i < 5000; ++i) {
          MachineIndex idx{s, mode, random_below(rng, total)};
          auto back = encode(decode(idx), mode);
          REQUIRE(back.value == idx.value);
          REQUIRE(table_from_digits(s, mode, index_digits(idx)) == decode(idx));
        }
      }
    }
  }
}

TEST_CASE("decode rejects out-of-range indices") {
  const auto s = space(2, 2, 2);
  CHECK_THROWS_AS(decode(MachineIndex{s, EnumerationMode::Full, 104976}), RejectedInput);
  CHECK_THROWS_AS(decode(MachineIndex{s, EnumerationMode::Reduced, 11664}), RejectedInput);
  CHECK_THROWS_AS(decode(MachineIndex{s, EnumerationMode::Full, -1}), RejectedInput);
}

TEST_CASE("reduced initial digits") {
  const auto s = space(4, 2, 2);
  for (int d = 0; d < s.initial_choices(); ++d) {
    auto ins = reduced_initial_instruction(s, d);
    CHECK(ins.move == Move::Right);
    CHECK(ins.next_state >= 2);
    CHECK(reduced_initial_digit(s, ins) == d);
  }
  CHECK_THROWS_AS(reduced_initial_digit(s, Instruction{1, 0, Move::Right}), RejectedInput);
  CHECK_THROWS_AS(reduced_initial_digit(s, Instruction{2, 0, Move::Up}), RejectedInput);
  CHECK_THROWS_AS(reduced_initial_digit(s, Instruction{0, 0, Move::Stop}), RejectedInput);
}

TEST_CASE("instruction numbering round trip") {
  for (int dims : {1, 2}) {
    const auto s = space(3, 2, dims);
    for (int i = 0; i < s.instruction_count(); ++i) CHECK(instruction_number(s, instruction_from_number(s, i)) == i);
    CHECK(instruction_from_number(s, 0).halts());
    CHECK(instruction_from_number(s, 1) == Instruction{0, 1, Move::Stop});
  }
  // A 1D instruction keeps its number in the grid space.
  const auto one = space(3, 2, 1), two = space(3, 2, 2);
  for (int i = 0; i < one.instruction_count(); ++i)
    CHECK(instruction_number(two, instruction_from_number(one, i)) == i);
}

TEST_CASE("table text format round trip") {
  const auto s = space(3, 2, 2);
  auto t = parse_table(s, fixtures::kTurmite32);
  CHECK(t.at(1, 0) == Instruction{3, 1, Move::Right});
  CHECK(t.at(2, 1) == Instruction{3, 1, Move::Up});
  CHECK(parse_table(s, to_text(t)) == t);
  CHECK(t.in_reduced_form());
  CHECK_THROWS_AS(parse_table(s, "1,0 -> 3,1,R\n"), RejectedInput);
  CHECK_THROWS_AS(parse_table(s, "1,0 -> 3,1,Q\n"), RejectedInput);
}

TEST_CASE("worked turmite example decodes from its index") {
  const auto s = space(3, 2, 2);
  auto t = parse_table(s, fixtures::kTurmite32);
  auto idx = encode(t, EnumerationMode::Full);
  CHECK(idx.value < count_machines(s, EnumerationMode::Full));
  CHECK(decode(idx) == t);
  CHECK(decode(encode(t, EnumerationMode::Reduced)) == t);
}

TEST_CASE("rotating every move rotates the output") {
  std::mt19937_64 rng(7);
  const auto s = space(3, 2, 2);
  const auto total = count_machines(s, EnumerationMode::Full);
  int halted = 0;
  for (int i = 0; i < 3000; ++i) {
    auto t = decode(MachineIndex{s, EnumerationMode::Full, random_below(rng, total)});
    auto base = run(t, RunConfig{200});
    if (base.status != RunStatus::Halted) continue;
    ++halted;
    auto r90 = run(rotate_moves(t, 1), RunConfig{200});
    auto r180 = run(rotate_moves(t, 2), RunConfig{200});
    auto r270 = run(rotate_moves(t, 3), RunConfig{200});
    REQUIRE(r90.output == base.output->rotate90());
    REQUIRE(r180.output == base.output->rotate180());
    REQUIRE(r270.output == base.output->rotate270());
    REQUIRE(run(reflect_moves(t), RunConfig{200}).output == base.output->reflect());
  }
  CHECK(halted > 100);
}

TEST_CASE("swapping symbols complements the run from the other blank") {
  std::mt19937_64 rng(11);
  for (int dims : {1, 2}) {
    const auto s = space(3, 2, dims);
    const auto total = count_machines(s, EnumerationMode::Full);
    for (int i = 0; i < 2000; ++i) {
      auto t = decode(MachineIndex{s, EnumerationMode::Full, random_below(rng, total)});
      auto a = run(t, RunConfig{100, 0});
      auto b = run(swap_symbols(t, 0, 1), RunConfig{100, 1});
      REQUIRE(a.status == b.status);
      REQUIRE(a.steps_used == b.steps_used);
      if (a.output) REQUIRE(*b.output == a.output->complement());
    }
  }
}

TEST_CASE("a 1D machine embedded in the grid produces the same output") {
  std::mt19937_64 rng(3);
  const auto s = space(4, 2, 1);
  const auto total = count_machines(s, EnumerationMode::Full);
  for (int i = 0; i < 3000; ++i) {
    auto t = decode(MachineIndex{s, EnumerationMode::Full, random_below(rng, total)});
    for (int blank : {0, 1}) {
      auto a = run(t, RunConfig{107, blank});
      auto b = run(embed_in_2d(t), RunConfig{107, blank});
      REQUIRE(a.status == b.status);
      REQUIRE(a.steps_used == b.steps_used);
      REQUIRE(a.output == b.output);
      if (a.output) REQUIRE(a.output->height() == 1);
    }
  }
}

TEST_CASE("space validation") {
  CHECK_THROWS_AS(space(0, 2, 2).validate(), RejectedInput);
  CHECK_THROWS_AS(space(2, 1, 2).validate(), RejectedInput);
  CHECK_NOTHROW(space(4, 2, 2).validate());
  CHECK(space(4, 2, 2).describe() == "(4,2)_2D");
}
