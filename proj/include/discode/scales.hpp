#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace discode {

enum class ScaleKind { Decimal01, Discrete15, Discrete09, LetterAE };

/// Serialized names: "decimal-0-1", "discrete-1-5", "discrete-0-9", "letter-A-E".
std::string_view scale_kind_name(ScaleKind kind) noexcept;
ScaleKind parse_scale_kind(std::string_view name);

/**
 * Candidate score set presented to the judge model.
 *
 * Candidates are stored in ascending value order. For the letter scale this
 * means index 0 is "E" (value 0) and index 4 is "A" (value 4). Logit and
 * probability vectors in records follow this same candidate order.
 */
class RatingScale {
public:
  RatingScale(ScaleKind kind, std::vector<std::string> labels, std::vector<double> values);

  ScaleKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double value(std::size_t index) const { return values_.at(index); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  double mean() const noexcept { return mu_; }
  double min_value() const noexcept { return values_.front(); }
  double max_value() const noexcept { return values_.back(); }

private:
  ScaleKind kind_;
  std::vector<std::string> labels_;
  std::vector<double> values_;
  double mu_;
};

/// A decoded score token resolved against a scale.
struct RawScore {
  std::size_t index = 0;
  int integer_part = 0;  // leading digit, decimal-0-1 only
  std::string text;
};

const RatingScale& make_scale(ScaleKind kind);

/**
 * Parses a judge's score text ("0.7", "Score: 4", " B ") into a candidate index.
 *
 * For the decimal scale the index is the first decimal digit and the leading
 * integer goes to integer_part, so "1.0" yields index 0 with integer_part 1.
 * Throws Error(Parse) for malformed text and Error(Range) for values that are
 * well formed but not on the scale.
 */
RawScore parse_raw_score(const RatingScale& scale, std::string_view text);

/// Label text a parsed score maps back to ("0.7" for decimal, "B" for letters).
std::string raw_score_label(const RatingScale& scale, const RawScore& raw);

/// RawScore for a candidate index (integer_part 0), as used when the argmax is authoritative.
RawScore raw_score_at(const RatingScale& scale, std::size_t index);

}  // namespace discode
