#include "discode/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "discode/error.hpp"

namespace discode {

namespace {

void require_finite(std::span<const LabeledScore> data) {
  for (const auto& d : data) {
    if (!std::isfinite(d.predicted) || !std::isfinite(d.human)) {
      throw Error(ErrorKind::Input, "non-finite score for id '" + d.id + "'");
    }
  }
}

// Number of pairs inside runs of equal values in a sorted sequence.
std::int64_t tied_pairs(const std::vector<double>& sorted, std::int64_t* distinct) {
  std::int64_t ties = 0;
  std::int64_t runs = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto len = static_cast<std::int64_t>(j - i);
    ties += len * (len - 1) / 2;
    ++runs;
    i = j;
  }
  if (distinct) *distinct = runs;
  return ties;
}

// Sorts v in place, returning the number of strict inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

ConcordanceCounts concordance_counts(std::span<const LabeledScore> data) {
  require_finite(data);
  ConcordanceCounts out;
  const auto n = static_cast<std::int64_t>(data.size());
  out.n = n;

  std::vector<std::pair<double, double>> xy;
  xy.reserve(data.size());
  for (const auto& d : data) xy.emplace_back(d.predicted, d.human);
  std::sort(xy.begin(), xy.end());

  std::vector<double> xs(data.size()), ys(data.size());
  for (std::size_t i = 0; i < xy.size(); ++i) {
    xs[i] = xy[i].first;
    ys[i] = xy[i].second;
  }
  out.tied_predicted = tied_pairs(xs, &out.distinct_predicted);

  std::int64_t joint = 0;
  for (std::size_t i = 0; i < xy.size();) {
    std::size_t j = i;
    while (j < xy.size() && xy[j] == xy[i]) ++j;
    const auto len = static_cast<std::int64_t>(j - i);
    joint += len * (len - 1) / 2;
    i = j;
  }

  // With pairs sorted by (x, y), every strict y-inversion is a discordant pair.
  std::vector<double> buf(ys.size());
  const std::int64_t discordant = merge_count(ys, buf, 0, ys.size());
  out.tied_human = tied_pairs(ys, &out.distinct_human);

  const std::int64_t n0 = n * (n - 1) / 2;
  const std::int64_t untied = n0 - out.tied_predicted - out.tied_human + joint;
  out.concordant_minus_discordant = untied - 2 * discordant;
  return out;
}

double kendall_tau_b(std::span<const LabeledScore> data) {
  if (data.size() < 2) throw Error(ErrorKind::Metric, "tau-b needs at least two observations");
  const auto c = concordance_counts(data);
  const std::int64_t n0 = c.n * (c.n - 1) / 2;
  if (c.tied_predicted == n0 || c.tied_human == n0) {
    throw Error(ErrorKind::Metric, "tau-b is undefined when a variable is constant");
  }
  return static_cast<double>(c.concordant_minus_discordant) /
         std::sqrt(static_cast<double>(n0 - c.tied_predicted) * static_cast<double>(n0 - c.tied_human));
}

double kendall_tau_c(std::span<const LabeledScore> data) {
  if (data.size() < 2) throw Error(ErrorKind::Metric, "tau-c needs at least two observations");
  const auto c = concordance_counts(data);
  const std::int64_t m = std::min(c.distinct_predicted, c.distinct_human);
  if (m < 2) throw Error(ErrorKind::Metric, "tau-c is undefined when a variable is constant");
  const auto n = static_cast<double>(c.n);
  const auto md = static_cast<double>(m);
  return 2.0 * md * static_cast<double>(c.concordant_minus_discordant) / (n * n * (md - 1.0));
}

double pairwise_accuracy(std::span<const PreferencePair> pairs, double tie_credit) {
  if (pairs.empty()) throw Error(ErrorKind::Metric, "accuracy needs at least one pair");
  if (!(tie_credit >= 0.0 && tie_credit <= 1.0)) throw Error(ErrorKind::Config, "tie credit must lie in [0, 1]");
  double credit = 0.0;
  for (const auto& p : pairs) {
    if (!std::isfinite(p.score_a) || !std::isfinite(p.score_b)) {
      throw Error(ErrorKind::Input, "non-finite score in pair '" + p.id + "'");
    }
    const double preferred = p.preferred == Preferred::A ? p.score_a : p.score_b;
    const double other = p.preferred == Preferred::A ? p.score_b : p.score_a;
    if (preferred > other) {
      credit += 1.0;
    } else if (preferred == other) {
      credit += tie_credit;
    }
  }
  return credit / static_cast<double>(pairs.size());
}

}  // namespace discode
