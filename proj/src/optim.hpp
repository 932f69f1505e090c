#pragma once

// Small deterministic first-order optimizers used by the numeric decoder.

#include <cmath>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "discode/error.hpp"

namespace discode::optim {

/// Returns f(x) and writes the gradient into grad (same size as x).
using Objective = std::function<double(std::span<const double> x, std::vector<double>& grad)>;

struct AdamConfig {
  int steps = 10;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

inline void require_finite(double f, int iteration) {
  if (!std::isfinite(f)) {
    throw Error(ErrorKind::Numeric, "non-finite loss at iteration " + std::to_string(iteration));
  }
}

/// Runs exactly cfg.steps Adam updates in place; returns the loss at the final iterate.
inline double adam(const Objective& f, std::vector<double>& x, const AdamConfig& cfg) {
  const std::size_t n = x.size();
  std::vector<double> g(n), m(n, 0.0), v(n, 0.0);
  double loss = f(x, g);
  require_finite(loss, 0);
  double b1t = 1.0, b2t = 1.0;
  for (int t = 1; t <= cfg.steps; ++t) {
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / (1.0 - b1t);
      const double v_hat = v[i] / (1.0 - b2t);
      x[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
    loss = f(x, g);
    require_finite(loss, t);
  }
  return loss;
}

struct LbfgsConfig {
  int max_iters = 20000;
  double tolerance = 1e-10;  // loss-improvement threshold
  int memory = 8;
  double max_move = 1.0;  // per-iteration cap on max |x_new - x|
  double grad_tolerance = 1e-9;  // a small improvement only stops once the gradient is this small too
};

struct LbfgsResult {
  double loss = 0.0;
  int iterations = 0;
};

/**
 * L-BFGS with Armijo backtracking. Stops once an iteration improves the loss
 * by less than cfg.tolerance while the gradient is also small, when the line
 * search cannot decrease the loss, or at max_iters.
 */
inline LbfgsResult lbfgs(const Objective& f, std::vector<double>& x, const LbfgsConfig& cfg) {
  const std::size_t n = x.size();
  auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  auto inf_norm = [](const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
  };

  std::vector<double> g(n), g_new(n), x_new(n), dir(n);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  double loss = f(x, g);
  require_finite(loss, 0);
  const double small_grad = cfg.grad_tolerance;

  int it = 0;
  while (it < cfg.max_iters) {
    if (inf_norm(g) == 0.0) break;
    ++it;

    // Two-loop recursion for dir = -H g.
    dir = g;
    std::vector<double> a(s_hist.size());
    for (std::size_t j = s_hist.size(); j-- > 0;) {
      a[j] = rho_hist[j] * dot(s_hist[j], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= a[j] * y_hist[j][i];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t j = 0; j < s_hist.size(); ++j) {
      const double b = rho_hist[j] * dot(y_hist[j], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (a[j] - b) * s_hist[j][i];
    }
    for (double& d : dir) d = -d;
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction: fall back to steepest descent and reset memory.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
    }

    // Cap the largest coordinate move per iteration. Without this a full
    // quasi-Newton step can land deep in softmax saturation, where the
    // gradient underflows and the solver stalls on a plateau.
    const double dir_norm = inf_norm(dir);
    double step = s_hist.empty() ? 1.0 / std::max(1.0, inf_norm(g)) : 1.0;
    if (step * dir_norm > cfg.max_move) step = cfg.max_move / dir_norm;
    double new_loss = loss;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      new_loss = f(x_new, g_new);
      if (std::isfinite(new_loss) && new_loss <= loss + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    require_finite(new_loss, it);

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > cfg.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double improvement = loss - new_loss;
    x.swap(x_new);
    g.swap(g_new);
    loss = new_loss;
    if (improvement < cfg.tolerance && inf_norm(g) < small_grad) break;
  }
  return {loss, it};
}

/// Returns f at softmax(u) and writes the gradient with respect to z = softmax(u) into grad_z.
using SimplexObjective = std::function<double(std::span<const double> u, std::vector<double>& grad_z)>;

struct MirrorConfig {
  int max_iters = 20000;
  double tolerance = 1e-10;      // loss-improvement threshold
  double kkt_tolerance = 1e-7;   // simplex optimality residual required alongside it
  int flat_limit = 50;           // consecutive non-improving steps taken as the roundoff floor
  double max_step = 1e8;
};

/**
 * Entropic mirror descent on the simplex, carried out on the logits:
 * u <- u - eta (g_z - <z, g_z>). The step doubles after every accepted
 * iteration and halves on an Armijo failure.
 *
 * Unlike plain gradient steps on u, the update of a component does not scale
 * with its own mass, so components that were pushed close to zero can grow
 * back instead of stalling on the softmax plateau.
 *
 * The KKT residual is max over k of (gbar - g_k) for components that want to
 * grow and z_k (g_k - gbar) for those that want to shrink; it vanishes
 * exactly at a minimizer on the closed simplex. Stops once the improvement is
 * below tolerance and either the residual is small or the loss has stopped
 * moving for flat_limit steps (double-precision floor).
 */
inline LbfgsResult mirror_descent(const SimplexObjective& f, std::vector<double>& u, const MirrorConfig& cfg) {
  const std::size_t n = u.size();
  auto softmax_of = [n](const std::vector<double>& x) {
    double m = -INFINITY;
    for (double v : x) m = std::max(m, v);
    std::vector<double> z(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (z[i] = std::exp(x[i] - m));
    for (double& v : z) v /= s;
    return z;
  };

  std::vector<double> g(n), g_new(n), u_new(n), d(n);
  double loss = f(u, g);
  require_finite(loss, 0);
  double eta = 1.0;

  int it = 0;
  int flat = 0;
  double improvement = INFINITY;
  while (it < cfg.max_iters) {
    const auto z = softmax_of(u);
    double gbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) gbar += z[i] * g[i];
    double kkt = 0.0, decrease = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = g[i] - gbar;
      kkt = std::max(kkt, d[i] < 0.0 ? -d[i] : z[i] * d[i]);
      decrease += z[i] * d[i] * d[i];
    }
    if (kkt == 0.0) break;
    if (improvement < cfg.tolerance && (kkt < cfg.kkt_tolerance || flat >= cfg.flat_limit)) break;
    ++it;

    bool accepted = false;
    double new_loss = loss;
    for (int ls = 0; ls < 80; ++ls) {
      for (std::size_t i = 0; i < n; ++i) u_new[i] = u[i] - eta * d[i];
      new_loss = f(u_new, g_new);
      if (std::isfinite(new_loss) && new_loss <= loss - 1e-4 * eta * decrease) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;

    // Re-centre so the logits stay bounded while the solution runs off to a vertex.
    double top = -INFINITY;
    for (double v : u_new) top = std::max(top, v);
    for (double& v : u_new) v -= top;

    improvement = loss - new_loss;
    u.swap(u_new);
    g.swap(g_new);
    loss = new_loss;
    eta = std::min(2.0 * eta, cfg.max_step);
    flat = improvement > 0.0 ? 0 : flat + 1;
  }
  return {loss, it};
}

}  // namespace discode::optim
