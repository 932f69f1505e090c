#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "discode/distribution.hpp"
#include "discode/divergence.hpp"
#include "discode/error.hpp"
#include "oracles.hpp"

using namespace discode;

namespace {

std::vector<DivergenceSpec> family() {
  return {DivergenceSpec::weighted_kl(0.3), DivergenceSpec::weighted_kl(1.0), DivergenceSpec::kl(),
          DivergenceSpec::jensen_shannon(), DivergenceSpec::renyi(0.5), DivergenceSpec::renyi(2.0),
          DivergenceSpec::beta(2.0), DivergenceSpec::beta(0.5)};
}

}  // namespace

TEST_CASE("cross entropy reference values") {
  const std::vector<double> u(10, 0.1);
  CHECK(cross_entropy(u, u) == doctest::Approx(2.302585092994046).epsilon(1e-14));
  CHECK(entropy(u) == doctest::Approx(2.302585092994046).epsilon(1e-14));

  const std::vector<double> p{0.7, 0.3}, half{0.5, 0.5};
  CHECK(cross_entropy(p, half) == doctest::Approx(0.6931471805599453).epsilon(1e-14));

  const std::vector<double> onehot{0.0, 1.0, 0.0}, q{0.2, 0.5, 0.3};
  CHECK(cross_entropy(onehot, q) == doctest::Approx(-std::log(0.5)).epsilon(1e-14));

  CHECK_THROWS_AS(cross_entropy(p, q), Error);
}

TEST_CASE("zero probabilities are floored") {
  const std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
  const double h = cross_entropy(p, q);
  CHECK(std::isfinite(h));
  CHECK(h == doctest::Approx(-0.5 * std::log(1e-12)).epsilon(1e-12));
  for (const auto& spec : family()) {
    CHECK(std::isfinite(divergence_value(spec, p, q)));
    CHECK(std::isfinite(divergence_value(spec, q, p)));
  }
}

TEST_CASE("Gibbs inequality") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::interior_simplex(rng, 7);
    const auto q = oracle::interior_simplex(rng, 7);
    CHECK(cross_entropy(p, q) >= entropy(p) - 1e-15);
  }
}

TEST_CASE("weighted kl reference cases") {
  const std::vector<double> u(10, 0.1);
  CHECK(divergence_value(DivergenceSpec::weighted_kl(1.0), u, u) ==
        doctest::Approx(-2.302585092994046).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (double alpha : {0.1, 0.25, 0.5, 0.8, 1.0}) {
    const auto q = oracle::interior_simplex(rng, 6);
    CHECK(divergence_value(DivergenceSpec::weighted_kl(alpha), q, q) ==
          doctest::Approx((1.0 - 2.0 * alpha) * entropy(q)).epsilon(1e-12));
  }
}

TEST_CASE("weighted kl at one half is half the KL") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto p = oracle::interior_simplex(rng, 10);
    const auto q = oracle::interior_simplex(rng, 10);
    const double w = divergence_value(DivergenceSpec::weighted_kl(0.5), p, q);
    const double k = divergence_value(DivergenceSpec::kl(), p, q);
    CHECK(std::abs(w - 0.5 * k) <= 1e-12);
  }
}

TEST_CASE("closed forms of the non-weighted divergences") {
  const std::vector<double> p{0.6, 0.3, 0.1}, q{0.2, 0.5, 0.3};
  double kl = 0.0;
  for (int k = 0; k < 3; ++k) kl += p[k] * std::log(p[k] / q[k]);
  CHECK(divergence_value(DivergenceSpec::kl(), p, q) == doctest::Approx(kl).epsilon(1e-14));

  double js = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double m = 0.5 * (p[k] + q[k]);
    js += 0.5 * p[k] * std::log(p[k] / m) + 0.5 * q[k] * std::log(q[k] / m);
  }
  CHECK(divergence_value(DivergenceSpec::jensen_shannon(), p, q) == doctest::Approx(js).epsilon(1e-14));

  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += std::sqrt(p[k] * q[k]);
  CHECK(divergence_value(DivergenceSpec::renyi(0.5), p, q) == doctest::Approx(-2.0 * std::log(s)).epsilon(1e-14));

  double b = 0.0;
  for (int k = 0; k < 3; ++k) b += (p[k] - q[k]) * (p[k] - q[k]);
  CHECK(divergence_value(DivergenceSpec::beta(2.0), p, q) == doctest::Approx(0.5 * b).epsilon(1e-14));
}

TEST_CASE("true divergences are non-negative and vanish only at p = q") {
  std::mt19937_64 rng(8);
  const std::vector<DivergenceSpec> proper{DivergenceSpec::kl(), DivergenceSpec::jensen_shannon(),
                                           DivergenceSpec::renyi(0.5), DivergenceSpec::renyi(3.0),
                                           DivergenceSpec::beta(2.0), DivergenceSpec::beta(-1.0)};
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::interior_simplex(rng, 5);
    const auto q = oracle::interior_simplex(rng, 5);
    for (const auto& spec : proper) {
      CHECK(divergence_value(spec, p, q) > 0.0);
      CHECK(std::abs(divergence_value(spec, p, p)) <= 1e-10);
    }
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(DivergenceSpec::renyi(1.0).validate(), Error);
  CHECK_THROWS_AS(DivergenceSpec::renyi(0.0).validate(), Error);
  CHECK_THROWS_AS(DivergenceSpec::beta(0.0).validate(), Error);
  CHECK_THROWS_AS(DivergenceSpec::beta(1.0).validate(), Error);
  CHECK_THROWS_AS(DivergenceSpec::weighted_kl(0.0).validate(), Error);
  CHECK_THROWS_AS(DivergenceSpec::weighted_kl(1.5).validate(), Error);
  CHECK_NOTHROW(DivergenceSpec::renyi().validate());
  CHECK_NOTHROW(DivergenceSpec::beta().validate());
  CHECK(DivergenceSpec::renyi().order == 0.5);
  CHECK(DivergenceSpec::beta().order == 2.0);
  for (auto k : {DivergenceKind::WeightedKL, DivergenceKind::KL, DivergenceKind::JensenShannon, DivergenceKind::Renyi,
                 DivergenceKind::Beta}) {
    CHECK(parse_divergence_kind(divergence_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_divergence_kind("hellinger"), Error);
}

TEST_CASE("gradient special cases") {
  std::mt19937_64 rng(2);
  const auto q = oracle::interior_simplex(rng, 8);
  const auto g = divergence_gradient(DivergenceSpec::weighted_kl(0.5), q, q);
  for (double v : g) CHECK(std::abs(v - g[0]) <= 1e-12);

  const auto gk = divergence_gradient(DivergenceSpec::kl(), q, q);
  double mean = 0.0;
  for (double v : gk) mean += v / gk.size();
  for (double v : gk) CHECK(std::abs(v - mean) <= 1e-12);

  const auto gw = divergence_gradient(DivergenceSpec::weighted_kl(0.3), q, q);
  for (std::size_t k = 0; k < q.size(); ++k) {
    CHECK(gw[k] == doctest::Approx(-0.7 * std::log(q[k]) + 0.3 * std::log(q[k]) + 0.3).epsilon(1e-13));
  }
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(17);
  for (const auto& spec : family()) {
    for (int i = 0; i < 100; ++i) {
      const auto p = oracle::interior_simplex(rng, 6);
      const auto q = oracle::interior_simplex(rng, 6);
      const auto analytic = divergence_gradient(spec, p, q);
      const auto fd = oracle::central_difference(
          [&](const std::vector<double>& x) { return divergence_value(spec, x, q); }, p, 1e-6);
      CHECK(oracle::relative_error(analytic, fd) <= 1e-5);
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::interior_simplex(rng, 6);
    const auto q = oracle::interior_simplex(rng, 6);
    const auto fd =
        oracle::central_difference([&](const std::vector<double>& x) { return cross_entropy(x, q); }, p, 1e-6);
    CHECK(oracle::relative_error(cross_entropy_gradient(p, q), fd) <= 1e-5);
  }
}
