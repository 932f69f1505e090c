#include "discode/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "discode/error.hpp"

namespace discode {

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::Raw: return "raw";
    case Method::Smoothing: return "smoothing";
    case Method::Discode: return "discode";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::Raw, Method::Smoothing, Method::Discode}) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorKind::Parse, "unknown method '" + std::string(name) + "'");
}

void ScoreRecord::validate() const {
  const auto& sc = make_scale(scale);
  if (!logits && !probs) throw Error(ErrorKind::Input, "record '" + id + "' has neither logits nor probs");
  parse_raw_score(sc, raw_text);
  if (logits) {
    require_same_size(logits->size(), sc.size(), "logits vs scale");
    for (double v : *logits) {
      if (!std::isfinite(v)) throw Error(ErrorKind::Input, "record '" + id + "' has a non-finite logit");
    }
  }
  if (probs) {
    require_same_size(probs->size(), sc.size(), "probs vs scale");
    ScoreDistribution::normalized(*probs);
  }
  if (logits && probs) {
    const auto from_logits = softmax(*logits);
    const auto from_probs = ScoreDistribution::normalized(*probs);
    for (std::size_t k = 0; k < from_logits.size(); ++k) {
      if (std::abs(from_logits[k] - from_probs[k]) > 1e-6) {
        throw Error(ErrorKind::Input, "record '" + id + "': probs disagree with softmax(logits)");
      }
    }
  }
  if (features) {
    features->validate();
    require_same_size(features->candidates(), sc.size(), "features vs scale");
  }
}

ScoreDistribution ScoreRecord::distribution() const {
  if (logits) return ScoreDistribution::from_logits(*logits);
  if (probs) return ScoreDistribution::normalized(*probs);
  throw Error(ErrorKind::Input, "record '" + id + "' has neither logits nor probs");
}

namespace {

// Stationarity residual over the candidates z actually puts mass on. Zero-mass
// candidates come from exact zeros in p and are inactive constraints.
double support_residual(const ScoreDistribution& z, const ScoreDistribution& p, const ScoreDistribution& q,
                        double alpha) {
  std::vector<double> g;
  const auto lz = z.log_probs(), lp = p.log_probs(), lq = q.log_probs();
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (std::isfinite(lz[k])) g.push_back(-lp[k] - (1.0 - alpha) * lq[k] + alpha * lz[k] + alpha);
  }
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  double worst = 0.0;
  for (double v : g) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

}  // namespace

double expected_score(const RatingScale& scale, const ScoreDistribution& p) {
  require_same_size(scale.size(), p.size(), "expected_score");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += scale.value(k) * p[k];
  return std::clamp(s, scale.min_value(), scale.max_value());
}

double compose_final(const RatingScale& scale, const RawScore& raw, double s_hat) {
  if (scale.kind() == ScaleKind::Decimal01) return std::min(1.0, raw.integer_part + 0.1 * s_hat);
  return s_hat;
}

ScoredResult score_record(const ScoreRecord& record, Method method, const ScoringConfig& config) {
  record.validate();
  const RatingScale& scale = make_scale(record.scale);

  ScoredResult result;
  result.id = record.id;
  result.scale = record.scale;
  result.method = method;

  const bool feature_path = config.use_features && method == Method::Discode;
  if (feature_path && !record.features) {
    throw Error(ErrorKind::Config, "record '" + record.id + "': feature path requested but record has no features");
  }
  const ScoreDistribution p = feature_path ? record.features->distribution() : record.distribution();

  RawScore raw = parse_raw_score(scale, record.raw_text);
  const std::size_t top = p.argmax();
  if (top != raw.index) {
    result.warnings.push_back("raw_text '" + record.raw_text + "' disagrees with argmax candidate '" +
                              scale.label(top) + "'");
    raw.index = top;
  }

  switch (method) {
    case Method::Raw:
      result.score = compose_final(scale, raw, scale.value(top));
      return result;
    case Method::Smoothing:
      result.score = compose_final(scale, raw, expected_score(scale, p));
      result.distribution.emplace(p.probs().begin(), p.probs().end());
      return result;
    case Method::Discode:
      break;
  }

  const double alpha = adaptive_alpha(raw, scale, config.alpha);
  const ScoreDistribution q = gaussian_prior(raw, scale, config.prior_var);
  DivergenceSpec spec = config.divergence;
  SolveOptions opts = config.solve;
  if (spec.kind == DivergenceKind::WeightedKL) {
    spec.alpha = alpha;
  } else if (opts.mode == SolveMode::Analytic) {
    opts.mode = SolveMode::NumericConverged;
  }

  int iterations = 0;
  ScoreDistribution z = ScoreDistribution::uniform(p.size());
  if (feature_path) {
    const DecoderHead head = opts.mode == SolveMode::Analytic
                                 ? analytic_head(*record.features, q, alpha)
                                 : numeric_solve_head(*record.features, q, spec, opts, &iterations);
    z = head.apply(record.features->h);
  } else {
    auto solved = numeric_solve(p, q, spec, opts);
    iterations = solved.iterations;
    z = std::move(solved.distribution);
  }

  result.score = compose_final(scale, raw, expected_score(scale, z));
  result.distribution.emplace(z.probs().begin(), z.probs().end());
  if (spec.kind == DivergenceKind::WeightedKL) result.alpha = alpha;
  result.diagnostics["att_loss"] = att_loss(z.probs(), p.probs(), q.probs(), spec);
  result.diagnostics["residual"] = spec.kind == DivergenceKind::WeightedKL
                                       ? support_residual(z, p, q, alpha)
                                       : gradient_spread(z.probs(), p.probs(), q.probs(), spec);
  result.diagnostics["iterations"] = iterations;
  return result;
}

std::vector<ScoredResult> score_records(const std::vector<ScoreRecord>& records, Method method,
                                        const ScoringConfig& config, unsigned jobs) {
  std::vector<ScoredResult> results(records.size());
  std::vector<std::exception_ptr> errors(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        results[i] = score_record(records[i], method, config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(records.size(), 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace discode
