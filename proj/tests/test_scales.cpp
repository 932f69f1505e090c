#include "doctest.h"

#include <functional>

#include "discode/error.hpp"
#include "discode/scales.hpp"

using namespace discode;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("canonical scales") {
  const auto& d09 = make_scale(ScaleKind::Discrete09);
  CHECK(d09.size() == 10);
  CHECK(d09.mean() == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(d09.value(0) == 0.0);
  CHECK(d09.value(9) == 9.0);

  const auto& d15 = make_scale(ScaleKind::Discrete15);
  CHECK(d15.size() == 5);
  CHECK(d15.mean() == 3.0);

  const auto& dec = make_scale(ScaleKind::Decimal01);
  CHECK(dec.size() == 10);
  CHECK(dec.label(7) == "0.7");
  CHECK(dec.value(7) == 7.0);

  const auto& letters = make_scale(ScaleKind::LetterAE);
  CHECK(letters.label(4) == "A");
  CHECK(letters.value(4) == 4.0);
  CHECK(letters.label(0) == "E");
  CHECK(letters.mean() == 2.0);

  for (auto k : {ScaleKind::Decimal01, ScaleKind::Discrete15, ScaleKind::Discrete09, ScaleKind::LetterAE}) {
    const auto& s = make_scale(k);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.value(i) > s.value(i - 1));
    CHECK(parse_scale_kind(scale_kind_name(k)) == k);
  }
}

TEST_CASE("scale kind names are the serialized strings") {
  CHECK(scale_kind_name(ScaleKind::Decimal01) == "decimal-0-1");
  CHECK(scale_kind_name(ScaleKind::Discrete15) == "discrete-1-5");
  CHECK(scale_kind_name(ScaleKind::Discrete09) == "discrete-0-9");
  CHECK(scale_kind_name(ScaleKind::LetterAE) == "letter-A-E");
  CHECK(kind_of([] { parse_scale_kind("decimal"); }) == ErrorKind::Parse);
}

TEST_CASE("scale invariants are enforced") {
  CHECK(kind_of([] { RatingScale(ScaleKind::Discrete09, {"a"}, {1.0}); }) == ErrorKind::Dimension);
  CHECK(kind_of([] { RatingScale(ScaleKind::Discrete09, {"a", "b"}, {1.0, 1.0}); }) == ErrorKind::Range);
  CHECK(kind_of([] { RatingScale(ScaleKind::Discrete09, {"a", "b"}, {1.0}); }) == ErrorKind::Dimension);
}

TEST_CASE("mean depends only on values, not labels") {
  RatingScale relabeled(ScaleKind::Discrete15, {"v", "w", "x", "y", "z"}, {1, 2, 3, 4, 5});
  CHECK(relabeled.mean() == make_scale(ScaleKind::Discrete15).mean());
}

TEST_CASE("parse_raw_score") {
  const auto& dec = make_scale(ScaleKind::Decimal01);
  auto r = parse_raw_score(dec, "0.7");
  CHECK(r.index == 7);
  CHECK(r.integer_part == 0);

  r = parse_raw_score(dec, "1.0");
  CHECK(r.index == 0);
  CHECK(r.integer_part == 1);

  r = parse_raw_score(dec, "  Score: 0.3 \n");
  CHECK(r.index == 3);
  CHECK(r.text == "  Score: 0.3 \n");

  r = parse_raw_score(dec, "0.75");
  CHECK(r.index == 7);

  const auto& d15 = make_scale(ScaleKind::Discrete15);
  CHECK(parse_raw_score(d15, "4").index == 3);
  CHECK(parse_raw_score(d15, "score: 5").index == 4);

  const auto& letters = make_scale(ScaleKind::LetterAE);
  CHECK(parse_raw_score(letters, "B").index == 3);
  CHECK(parse_raw_score(letters, "Score: A").index == 4);
}

TEST_CASE("parse_raw_score errors") {
  const auto& dec = make_scale(ScaleKind::Decimal01);
  const auto& d15 = make_scale(ScaleKind::Discrete15);
  const auto& letters = make_scale(ScaleKind::LetterAE);

  CHECK(kind_of([&] { parse_raw_score(dec, "seven"); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_raw_score(dec, ""); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_raw_score(dec, "0.7 great"); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_raw_score(dec, "1.5"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(dec, "2.0"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(dec, "-0.2"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(d15, "0"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(d15, "3.5"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(letters, "F"); }) == ErrorKind::Range);
  CHECK(kind_of([&] { parse_raw_score(letters, "AB"); }) == ErrorKind::Parse);

  try {
    parse_raw_score(dec, "Score: maybe");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("maybe") != std::string::npos);
  }
}

TEST_CASE("parse then label lookup reproduces the candidate label") {
  for (auto k : {ScaleKind::Decimal01, ScaleKind::Discrete15, ScaleKind::Discrete09, ScaleKind::LetterAE}) {
    const auto& s = make_scale(k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto raw = parse_raw_score(s, s.label(i));
      CHECK(raw.index == i);
      CHECK(s.label(raw.index) == s.label(i));
      CHECK(raw_score_label(s, raw) == s.label(i));
    }
  }
  CHECK(raw_score_label(make_scale(ScaleKind::Decimal01), parse_raw_score(make_scale(ScaleKind::Decimal01), "1.0")) ==
        "1.0");
}
