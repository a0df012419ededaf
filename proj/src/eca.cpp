#include "ctm/eca.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <thread>

#include "ctm/errors.hpp"

namespace ctm {

EcaRule::EcaRule(int number) : number_(number) {
  if (number < 0 || number > 255) throw RejectedInput("ECA rule must be in 0..255");
}

EcaRule EcaRule::reverted() const {
  int r = 0;
  for (int i = 0; i < 8; ++i)
    if (!apply(7 - i)) r |= 1 << i;
  return EcaRule(r);
}

OutputArray evolve(const EcaRule& rule, const BitRow& initial, int steps) {
  const int w = static_cast<int>(initial.size());
  if (w < 3) throw RejectedInput("ECA row width must be at least 3");
  if (steps < 0) throw RejectedInput("step count must be non-negative");
  for (auto b : initial)
    if (b > 1) throw RejectedInput("ECA cells must be 0 or 1");
  OutputArray out(steps + 1, w, 0);
  for (int x = 0; x < w; ++x) out.set(0, x, initial[static_cast<std::size_t>(x)]);
  for (int t = 1; t <= steps; ++t) {
    for (int x = 0; x < w; ++x) {
      const int l = out.at(t - 1, (x + w - 1) % w), c = out.at(t - 1, x), r = out.at(t - 1, (x + 1) % w);
      out.set(t, x, rule.apply(4 * l + 2 * c + r));
    }
  }
  return out;
}

BitRow single_cell_initial(int width) {
  if (width < 3) throw RejectedInput("single-cell initial row needs width at least 3");
  BitRow row(static_cast<std::size_t>(width), 0);
  row[static_cast<std::size_t>(width / 2)] = 1;
  return row;
}

BitRow random_initial(int width, std::uint64_t seed, double density) {
  if (width < 3) throw RejectedInput("random initial row needs width at least 3");
  if (!(density >= 0.0 && density <= 1.0)) throw RejectedInput("density must be in [0, 1]");
  std::mt19937_64 rng(seed);
  // Compare raw 53-bit draws rather than using a distribution object so the
  // row is identical across standard library implementations.
  BitRow row(static_cast<std::size_t>(width));
  for (auto& b : row) b = static_cast<double>(rng() >> 11) * 0x1.0p-53 < density ? 1 : 0;
  return row;
}

std::vector<RuleScore> classify(const std::vector<int>& rules, const BitRow& initial, int steps,
                                const std::function<double(const OutputArray&)>& scorer, int workers) {
  std::vector<RuleScore> out(rules.size());
  std::vector<EcaRule> parsed;
  for (int r : rules) parsed.emplace_back(r);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < parsed.size() && !failed;) {
      try {
        out[i] = RuleScore{parsed[i].number(), scorer(evolve(parsed[i], initial, steps))};
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const int n = std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(parsed.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::stable_sort(out.begin(), out.end(), [](const RuleScore& a, const RuleScore& b) {
    return a.score != b.score ? a.score < b.score : a.rule < b.rule;
  });
  return out;
}

}  // namespace ctm
