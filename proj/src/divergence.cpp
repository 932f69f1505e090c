#include "discode/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discode/distribution.hpp"
#include "discode/error.hpp"

namespace discode {

namespace {

double safe_log(double x) { return std::log(std::max(x, kProbFloor)); }
double safe_pow(double x, double e) { return std::pow(std::max(x, kProbFloor), e); }

double kl_value(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * (safe_log(p[k]) - safe_log(q[k]));
  return s;
}

}  // namespace

std::string_view divergence_kind_name(DivergenceKind kind) noexcept {
  switch (kind) {
    case DivergenceKind::WeightedKL: return "wkl";
    case DivergenceKind::KL: return "kl";
    case DivergenceKind::JensenShannon: return "js";
    case DivergenceKind::Renyi: return "renyi";
    case DivergenceKind::Beta: return "beta";
  }
  return "unknown";
}

DivergenceKind parse_divergence_kind(std::string_view name) {
  for (auto kind : {DivergenceKind::WeightedKL, DivergenceKind::KL, DivergenceKind::JensenShannon,
                    DivergenceKind::Renyi, DivergenceKind::Beta}) {
    if (divergence_kind_name(kind) == name) return kind;
  }
  throw Error(ErrorKind::Parse, "unknown divergence '" + std::string(name) + "'");
}

DivergenceSpec DivergenceSpec::weighted_kl(double alpha) { return {DivergenceKind::WeightedKL, alpha, 0.0}; }
DivergenceSpec DivergenceSpec::kl() { return {DivergenceKind::KL, 0.5, 0.0}; }
DivergenceSpec DivergenceSpec::jensen_shannon() { return {DivergenceKind::JensenShannon, 0.5, 0.0}; }
DivergenceSpec DivergenceSpec::renyi(double order) { return {DivergenceKind::Renyi, 0.5, order}; }
DivergenceSpec DivergenceSpec::beta(double order) { return {DivergenceKind::Beta, 0.5, order}; }

void DivergenceSpec::validate() const {
  switch (kind) {
    case DivergenceKind::WeightedKL:
      if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::Range, "weighted KL alpha must lie in (0, 1], got " + std::to_string(alpha));
      }
      break;
    case DivergenceKind::Renyi:
      if (!std::isfinite(order) || order == 1.0 || order <= 0.0) {
        throw Error(ErrorKind::Config, "Renyi order must be positive and != 1");
      }
      break;
    case DivergenceKind::Beta:
      if (!std::isfinite(order) || order == 0.0 || order == 1.0) {
        throw Error(ErrorKind::Config, "beta-divergence order must not be 0 or 1");
      }
      break;
    case DivergenceKind::KL:
    case DivergenceKind::JensenShannon:
      break;
  }
}

double cross_entropy(std::span<const double> p, std::span<const double> q) {
  require_same_size(p.size(), q.size(), "cross_entropy");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s -= p[k] * safe_log(q[k]);
  return s;
}

double entropy(std::span<const double> p) { return cross_entropy(p, p); }

std::vector<double> cross_entropy_gradient(std::span<const double> p, std::span<const double> q) {
  require_same_size(p.size(), q.size(), "cross_entropy_gradient");
  std::vector<double> g(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) g[k] = -safe_log(q[k]);
  return g;
}

double divergence_value(const DivergenceSpec& spec, std::span<const double> p, std::span<const double> q) {
  spec.validate();
  require_same_size(p.size(), q.size(), "divergence");
  switch (spec.kind) {
    case DivergenceKind::WeightedKL:
      return (1.0 - spec.alpha) * cross_entropy(p, q) - spec.alpha * entropy(p);
    case DivergenceKind::KL:
      return kl_value(p, q);
    case DivergenceKind::JensenShannon: {
      std::vector<double> m(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) m[k] = 0.5 * (p[k] + q[k]);
      return 0.5 * kl_value(p, m) + 0.5 * kl_value(q, m);
    }
    case DivergenceKind::Renyi: {
      const double lambda = spec.order;
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) s += safe_pow(p[k], lambda) * safe_pow(q[k], 1.0 - lambda);
      return std::log(s) / (lambda - 1.0);
    }
    case DivergenceKind::Beta: {
      const double beta = spec.order;
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        s += safe_pow(p[k], beta) + (beta - 1.0) * safe_pow(q[k], beta) - beta * p[k] * safe_pow(q[k], beta - 1.0);
      }
      return s / (beta * (beta - 1.0));
    }
  }
  throw Error(ErrorKind::Config, "unknown divergence kind");
}

std::vector<double> divergence_gradient(const DivergenceSpec& spec, std::span<const double> p,
                                        std::span<const double> q) {
  spec.validate();
  require_same_size(p.size(), q.size(), "divergence_gradient");
  const std::size_t n = p.size();
  std::vector<double> g(n);
  switch (spec.kind) {
    case DivergenceKind::WeightedKL:
      for (std::size_t k = 0; k < n; ++k) {
        g[k] = -(1.0 - spec.alpha) * safe_log(q[k]) + spec.alpha * (safe_log(p[k]) + 1.0);
      }
      break;
    case DivergenceKind::KL:
      for (std::size_t k = 0; k < n; ++k) g[k] = safe_log(p[k]) - safe_log(q[k]) + 1.0;
      break;
    case DivergenceKind::JensenShannon:
      // The 1 - p/m and -q/m terms of the two halves cancel exactly.
      for (std::size_t k = 0; k < n; ++k) g[k] = 0.5 * (safe_log(p[k]) - safe_log(0.5 * (p[k] + q[k])));
      break;
    case DivergenceKind::Renyi: {
      const double lambda = spec.order;
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += safe_pow(p[k], lambda) * safe_pow(q[k], 1.0 - lambda);
      for (std::size_t k = 0; k < n; ++k) {
        g[k] = lambda * safe_pow(p[k], lambda - 1.0) * safe_pow(q[k], 1.0 - lambda) / ((lambda - 1.0) * s);
      }
      break;
    }
    case DivergenceKind::Beta: {
      const double beta = spec.order;
      for (std::size_t k = 0; k < n; ++k) {
        g[k] = (safe_pow(p[k], beta - 1.0) - safe_pow(q[k], beta - 1.0)) / (beta - 1.0);
      }
      break;
    }
  }
  return g;
}

}  // namespace discode
