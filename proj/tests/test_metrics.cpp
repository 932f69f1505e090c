#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "discode/error.hpp"
#include "discode/metrics.hpp"
#include "oracles.hpp"

using namespace discode;

namespace {

std::vector<LabeledScore> zip(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<LabeledScore> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back({"i" + std::to_string(i), x[i], y[i]});
  return out;
}

// Values on a coarse grid so ties are common.
std::vector<double> tied_sample(std::mt19937_64& rng, std::size_t n, int levels) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  std::vector<double> v(n);
  for (double& x : v) x = 0.5 * d(rng);
  return v;
}

}  // namespace

TEST_CASE("tau reference values") {
  CHECK(kendall_tau_b(zip({1, 2, 3}, {10, 20, 30})) == 1.0);
  CHECK(kendall_tau_b(zip({1, 2, 3}, {30, 20, 10})) == -1.0);
  CHECK(kendall_tau_c(zip({1, 2, 3}, {10, 20, 30})) == 1.0);
  CHECK(kendall_tau_c(zip({1, 2, 3}, {30, 20, 10})) == -1.0);

  // C = 4, D = 0, one tie in each variable: 4 / sqrt(5 * 5).
  const std::vector<double> x{1, 1, 2, 3}, y{1, 2, 2, 3};
  CHECK(kendall_tau_b(zip(x, y)) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(kendall_tau_b(zip(x, y)) == oracle::tau_b(x, y));
  // m = 3: 2 * 3 * 4 / (16 * 2).
  CHECK(kendall_tau_c(zip(x, y)) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("counts match brute force") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng() % 199;
    const auto x = tied_sample(rng, n, 2 + static_cast<int>(rng() % 8));
    const auto y = tied_sample(rng, n, 2 + static_cast<int>(rng() % 8));
    const auto fast = concordance_counts(zip(x, y));
    const auto slow = oracle::enumerate_pairs(x, y);
    CHECK(fast.n == static_cast<std::int64_t>(n));
    CHECK(fast.concordant_minus_discordant == slow.concordant - slow.discordant);
    CHECK(fast.tied_predicted == slow.tied_x);
    CHECK(fast.tied_human == slow.tied_y);
  }
}

TEST_CASE("tau statistics match brute force exactly on tied data") {
  std::mt19937_64 rng(2);
  int checked = 0;
  while (checked < 50) {
    const std::size_t n = 2 + rng() % 199;
    const auto x = tied_sample(rng, n, 2 + static_cast<int>(rng() % 6));
    const auto y = tied_sample(rng, n, 2 + static_cast<int>(rng() % 6));
    const auto data = zip(x, y);
    const auto c = oracle::enumerate_pairs(x, y);
    const std::int64_t n0 = static_cast<std::int64_t>(n * (n - 1) / 2);
    if (c.tied_x == n0 || c.tied_y == n0) {
      CHECK_THROWS_AS(kendall_tau_b(data), Error);
      continue;
    }
    CHECK(kendall_tau_b(data) == oracle::tau_b(x, y));
    CHECK(kendall_tau_c(data) == oracle::tau_c(x, y));
    ++checked;
  }
}

TEST_CASE("without ties both statistics equal the classic tau") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 5 + rng() % 100;
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = g(rng);
      y[k] = x[k] + g(rng);
    }
    const auto c = oracle::enumerate_pairs(x, y);
    const double classic = static_cast<double>(c.concordant - c.discordant) / (n * (n - 1) / 2.0);
    CHECK(kendall_tau_b(zip(x, y)) == doctest::Approx(classic).epsilon(1e-14));
    // tau-c with m = n equals tau_a exactly: 2n(C-D)/(n^2(n-1)).
    CHECK(kendall_tau_c(zip(x, y)) == doctest::Approx(classic).epsilon(1e-14));
  }
}

TEST_CASE("tau is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto x = tied_sample(rng, 80, 5);
    const auto y = tied_sample(rng, 80, 7);
    std::vector<double> ex(x.size()), ay(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      ex[k] = std::exp(x[k]);
      ay[k] = 3.0 * y[k] - 7.0;
    }
    CHECK(kendall_tau_b(zip(ex, ay)) == kendall_tau_b(zip(x, y)));
    CHECK(kendall_tau_c(zip(ex, ay)) == kendall_tau_c(zip(x, y)));
  }
}

TEST_CASE("undefined tau") {
  CHECK_THROWS_AS(kendall_tau_b(zip({1, 1, 1}, {1, 2, 3})), Error);
  CHECK_THROWS_AS(kendall_tau_c(zip({1, 2, 3}, {4, 4, 4})), Error);
  CHECK_THROWS_AS(kendall_tau_b(zip({1}, {1})), Error);
  try {
    kendall_tau_b(zip({2, 2}, {1, 3}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Metric);
  }
}

TEST_CASE("pairwise accuracy") {
  const std::vector<PreferencePair> one{{"a", 2.0, 1.0, Preferred::A}};
  CHECK(pairwise_accuracy(one) == 1.0);
  const std::vector<PreferencePair> tie{{"a", 1.5, 1.5, Preferred::A}};
  CHECK(pairwise_accuracy(tie) == 0.0);
  CHECK(pairwise_accuracy(tie, 0.5) == 0.5);

  const std::vector<PreferencePair> six{{"1", 0.9, 0.1, Preferred::A}, {"2", 0.2, 0.8, Preferred::B},
                                        {"3", 0.7, 0.3, Preferred::A}, {"4", 0.4, 0.6, Preferred::B},
                                        {"5", 0.1, 0.9, Preferred::A}, {"6", 0.5, 0.5, Preferred::B}};
  CHECK(pairwise_accuracy(six) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(pairwise_accuracy(six, 0.5) == doctest::Approx(4.5 / 6.0).epsilon(1e-15));

  CHECK_THROWS_AS(pairwise_accuracy(std::vector<PreferencePair>{}), Error);
  CHECK_THROWS_AS(pairwise_accuracy(one, 2.0), Error);
}

TEST_CASE("pairwise accuracy matches a direct count and ignores monotone transforms") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 4);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<PreferencePair> pairs, squashed;
    std::vector<double> pref, other;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = level(rng), b = level(rng);
      const auto who = rng() % 2 ? Preferred::A : Preferred::B;
      pairs.push_back({"p", a, b, who});
      squashed.push_back({"p", std::tanh(a), std::tanh(b), who});
      pref.push_back(who == Preferred::A ? a : b);
      other.push_back(who == Preferred::A ? b : a);
    }
    for (double credit : {0.0, 0.5}) {
      CHECK(pairwise_accuracy(pairs, credit) == oracle::accuracy(pref, other, credit));
      CHECK(pairwise_accuracy(squashed, credit) == pairwise_accuracy(pairs, credit));
    }
  }
}
