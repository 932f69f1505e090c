#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace discode {

enum class DivergenceKind { WeightedKL, KL, JensenShannon, Renyi, Beta };

/// CLI names: "wkl", "kl", "js", "renyi", "beta".
std::string_view divergence_kind_name(DivergenceKind kind) noexcept;
DivergenceKind parse_divergence_kind(std::string_view name);

/**
 * A member of the divergence family used as the prior term.
 *
 * `alpha` only matters for the weighted KL; `order` is the Renyi lambda or
 * the beta-divergence beta. Orders that collapse to KL (Renyi 1, beta 0 or 1)
 * are rejected.
 */
struct DivergenceSpec {
  DivergenceKind kind = DivergenceKind::WeightedKL;
  double alpha = 0.5;
  double order = 0.0;

  static DivergenceSpec weighted_kl(double alpha);
  static DivergenceSpec kl();
  static DivergenceSpec jensen_shannon();
  static DivergenceSpec renyi(double order = 0.5);
  static DivergenceSpec beta(double order = 2.0);

  void validate() const;
};

// The functions below take plain probability vectors. The first argument is
// not required to be normalized, so gradients can be checked off the simplex.
// Every log and negative power floors its argument at kProbFloor.

/// H(p, q) = -sum p log q.
double cross_entropy(std::span<const double> p, std::span<const double> q);
/// H(p) = H(p, p).
double entropy(std::span<const double> p);

double divergence_value(const DivergenceSpec& spec, std::span<const double> p, std::span<const double> q);

/// Partial derivatives of divergence_value with respect to each p(k).
std::vector<double> divergence_gradient(const DivergenceSpec& spec, std::span<const double> p,
                                        std::span<const double> q);

/// Partial derivatives of cross_entropy with respect to each p(k): -log q(k).
std::vector<double> cross_entropy_gradient(std::span<const double> p, std::span<const double> q);

}  // namespace discode
