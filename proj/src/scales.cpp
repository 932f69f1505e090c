#include "discode/scales.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "discode/error.hpp"

namespace discode {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Drops a leading "Score:" (any case) if present.
std::string_view strip_prefix(std::string_view s) {
  constexpr std::string_view kPrefix = "score:";
  if (s.size() >= kPrefix.size()) {
    bool match = true;
    for (std::size_t i = 0; i < kPrefix.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(s[i])) != kPrefix[i]) {
        match = false;
        break;
      }
    }
    if (match) return trim(s.substr(kPrefix.size()));
  }
  return s;
}

struct NumberToken {
  bool negative = false;
  std::string_view integer;
  std::string_view fraction;
};

bool split_number(std::string_view s, NumberToken& out) {
  if (s.empty()) return false;
  if (s.front() == '+' || s.front() == '-') {
    out.negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  out.integer = s.substr(0, dot);
  out.fraction = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (out.integer.empty() || !std::all_of(out.integer.begin(), out.integer.end(), is_digit)) return false;
  if (dot != std::string_view::npos &&
      (out.fraction.empty() || !std::all_of(out.fraction.begin(), out.fraction.end(), is_digit))) {
    return false;
  }
  return true;
}

bool all_zero(std::string_view digits) {
  return std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
}

[[noreturn]] void parse_fail(std::string_view token) {
  throw Error(ErrorKind::Parse, "unparseable score token '" + std::string(token) + "'");
}

[[noreturn]] void range_fail(std::string_view token, const RatingScale& scale) {
  throw Error(ErrorKind::Range, "score '" + std::string(token) + "' is not on scale " +
                                    std::string(scale_kind_name(scale.kind())));
}

RatingScale build(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::Decimal01:
    case ScaleKind::Discrete09: {
      std::vector<std::string> labels;
      std::vector<double> values;
      for (int d = 0; d <= 9; ++d) {
        labels.push_back(kind == ScaleKind::Decimal01 ? "0." + std::to_string(d) : std::to_string(d));
        values.push_back(d);
      }
      return RatingScale(kind, std::move(labels), std::move(values));
    }
    case ScaleKind::Discrete15:
      return RatingScale(kind, {"1", "2", "3", "4", "5"}, {1, 2, 3, 4, 5});
    case ScaleKind::LetterAE:
      return RatingScale(kind, {"E", "D", "C", "B", "A"}, {0, 1, 2, 3, 4});
  }
  throw Error(ErrorKind::Config, "unknown scale kind");
}

}  // namespace

std::string_view scale_kind_name(ScaleKind kind) noexcept {
  switch (kind) {
    case ScaleKind::Decimal01: return "decimal-0-1";
    case ScaleKind::Discrete15: return "discrete-1-5";
    case ScaleKind::Discrete09: return "discrete-0-9";
    case ScaleKind::LetterAE: return "letter-A-E";
  }
  return "unknown";
}

ScaleKind parse_scale_kind(std::string_view name) {
  for (auto kind : {ScaleKind::Decimal01, ScaleKind::Discrete15, ScaleKind::Discrete09, ScaleKind::LetterAE}) {
    if (scale_kind_name(kind) == name) return kind;
  }
  throw Error(ErrorKind::Parse, "unknown scale kind '" + std::string(name) + "'");
}

RatingScale::RatingScale(ScaleKind kind, std::vector<std::string> labels, std::vector<double> values)
    : kind_(kind), labels_(std::move(labels)), values_(std::move(values)) {
  if (labels_.size() != values_.size() || values_.size() < 2) {
    throw Error(ErrorKind::Dimension, "a rating scale needs at least two labelled candidates");
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] > values_[i - 1])) {
      throw Error(ErrorKind::Range, "rating scale values must be strictly increasing");
    }
  }
  mu_ = std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

const RatingScale& make_scale(ScaleKind kind) {
  static const RatingScale decimal = build(ScaleKind::Decimal01);
  static const RatingScale one_five = build(ScaleKind::Discrete15);
  static const RatingScale zero_nine = build(ScaleKind::Discrete09);
  static const RatingScale letters = build(ScaleKind::LetterAE);
  switch (kind) {
    case ScaleKind::Decimal01: return decimal;
    case ScaleKind::Discrete15: return one_five;
    case ScaleKind::Discrete09: return zero_nine;
    case ScaleKind::LetterAE: return letters;
  }
  throw Error(ErrorKind::Config, "unknown scale kind");
}

RawScore parse_raw_score(const RatingScale& scale, std::string_view text) {
  const std::string_view token = strip_prefix(trim(text));
  if (token.empty()) parse_fail(text);

  RawScore raw;
  raw.text = std::string(text);

  if (scale.kind() == ScaleKind::LetterAE) {
    if (token.size() != 1 || !std::isupper(static_cast<unsigned char>(token.front()))) parse_fail(token);
    const auto it = std::find(scale.labels().begin(), scale.labels().end(), std::string(token));
    if (it == scale.labels().end()) range_fail(token, scale);
    raw.index = static_cast<std::size_t>(it - scale.labels().begin());
    return raw;
  }

  NumberToken num;
  if (!split_number(token, num)) parse_fail(token);
  if (num.negative) range_fail(token, scale);
  const auto integer = num.integer.size() > 3 ? 1000 : std::stoi(std::string(num.integer));

  if (scale.kind() == ScaleKind::Decimal01) {
    if (integer > 1 || (integer == 1 && !all_zero(num.fraction))) range_fail(token, scale);
    raw.integer_part = integer;
    raw.index = num.fraction.empty() ? 0 : static_cast<std::size_t>(num.fraction.front() - '0');
    return raw;
  }

  if (!all_zero(num.fraction)) range_fail(token, scale);
  const auto it = std::find(scale.values().begin(), scale.values().end(), static_cast<double>(integer));
  if (it == scale.values().end()) range_fail(token, scale);
  raw.index = static_cast<std::size_t>(it - scale.values().begin());
  return raw;
}

std::string raw_score_label(const RatingScale& scale, const RawScore& raw) {
  if (scale.kind() == ScaleKind::Decimal01) {
    return std::to_string(raw.integer_part) + "." + std::to_string(raw.index);
  }
  return scale.label(raw.index);
}

RawScore raw_score_at(const RatingScale& scale, std::size_t index) {
  if (index >= scale.size()) {
    throw Error(ErrorKind::Range, "candidate index " + std::to_string(index) + " out of range");
  }
  RawScore raw;
  raw.index = index;
  raw.text = scale.label(index);
  return raw;
}

}  // namespace discode
