#include "discode/io.hpp"

#include <cmath>
#include <cstdio>

#include "discode/error.hpp"

namespace discode::io {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kRecordKeys = {"version", "id", "scale", "raw_text", "logits", "probs", "features", "meta"};

std::string quote(const std::string& s) { return json(s).dump(); }

std::string number_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out + "]";
}

// Minimal append-only JSON object writer with caller-controlled key order.
class ObjectLine {
public:
  ObjectLine& raw(const std::string& key, const std::string& encoded) {
    out_ += first_ ? "" : ",";
    out_ += quote(key) + ":" + encoded;
    first_ = false;
    return *this;
  }
  ObjectLine& str(const std::string& key, const std::string& value) { return raw(key, quote(value)); }
  ObjectLine& num(const std::string& key, double value) { return raw(key, format_number(value)); }
  std::string done() const { return "{" + out_ + "}"; }

private:
  std::string out_;
  bool first_ = true;
};

[[noreturn]] void field_error(ErrorKind kind, const std::string& path, const std::string& what) {
  throw Error(kind, path + ": " + what);
}

const json& require(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(ErrorKind::Input, key, "missing required key");
  return *it;
}

std::string get_string(const json& obj, const std::string& key) {
  const json& v = require(obj, key);
  if (!v.is_string()) field_error(ErrorKind::Input, key, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(ErrorKind::Input, path, "expected a number");
  return v.get<double>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) field_error(ErrorKind::Input, path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> sized_numbers(const json& v, const std::string& path, std::size_t expected, ScaleKind scale) {
  auto out = as_numbers(v, path);
  if (out.size() != expected) {
    field_error(ErrorKind::Dimension, path,
                "expected " + std::to_string(expected) + " values for scale " + std::string(scale_kind_name(scale)) +
                    ", got " + std::to_string(out.size()));
  }
  return out;
}

FeatureBundle features_from_json(const json& v, std::size_t candidates) {
  if (!v.is_object()) field_error(ErrorKind::Input, "features", "expected an object");
  FeatureBundle f;
  f.h = as_numbers(require(v, "h"), "features.h");
  f.c = as_numbers(require(v, "c"), "features.c");
  const json& rows = require(v, "V");
  if (!rows.is_array()) field_error(ErrorKind::Input, "features.V", "expected an array of rows");
  if (f.h.empty()) field_error(ErrorKind::Dimension, "features.h", "must not be empty");
  if (f.c.size() != candidates) {
    field_error(ErrorKind::Dimension, "features.c", "expected " + std::to_string(candidates) + " values");
  }
  if (rows.size() != candidates) {
    field_error(ErrorKind::Dimension, "features.V", "expected " + std::to_string(candidates) + " rows");
  }
  f.V = Matrix(candidates, f.h.size());
  for (std::size_t r = 0; r < candidates; ++r) {
    const std::string path = "features.V[" + std::to_string(r) + "]";
    const auto row = as_numbers(rows[r], path);
    if (row.size() != f.h.size()) {
      field_error(ErrorKind::Dimension, path, "expected " + std::to_string(f.h.size()) + " values");
    }
    std::copy(row.begin(), row.end(), f.V.data.begin() + static_cast<std::ptrdiff_t>(r * f.h.size()));
  }
  return f;
}

std::string features_to_json(const FeatureBundle& f) {
  std::string rows = "[";
  for (std::size_t r = 0; r < f.V.rows; ++r) {
    if (r) rows += ',';
    const auto row = f.V.row(r);
    rows += number_array(std::vector<double>(row.begin(), row.end()));
  }
  rows += "]";
  return ObjectLine().raw("h", number_array(f.h)).raw("V", rows).raw("c", number_array(f.c)).done();
}

template <typename T>
ReadOutcome<T> read_all(const std::filesystem::path& path, ParseMode mode, T (*parser)(const json&)) {
  LineReader<T> reader(path, mode, parser);
  ReadOutcome<T> out;
  while (auto item = reader.next()) out.items.push_back(std::move(*item));
  out.skipped = reader.skipped();
  out.problems = reader.problems();
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::Numeric, "cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string record_to_line(const ScoreRecord& record) {
  ObjectLine line;
  line.raw("version", std::to_string(kFormatVersion))
      .str("id", record.id)
      .str("scale", std::string(scale_kind_name(record.scale)))
      .str("raw_text", record.raw_text);
  if (record.logits) line.raw("logits", number_array(*record.logits));
  if (record.probs) line.raw("probs", number_array(*record.probs));
  if (record.features) line.raw("features", features_to_json(*record.features));
  if (!record.meta.empty()) {
    ObjectLine meta;
    for (const auto& [k, v] : record.meta) meta.str(k, v);
    line.raw("meta", meta.done());
  }
  for (const auto& [k, v] : record.extra.items()) line.raw(k, v.dump());
  return line.done();
}

ScoreRecord record_from_json(const json& obj) {
  if (!obj.is_object()) field_error(ErrorKind::Input, "$", "expected a JSON object");
  const json& version = require(obj, "version");
  if (!version.is_number_integer()) field_error(ErrorKind::Input, "version", "expected an integer");
  if (version.get<long long>() != kFormatVersion) {
    field_error(ErrorKind::Input, "version", "unsupported version " + version.dump());
  }

  ScoreRecord rec;
  rec.id = get_string(obj, "id");
  try {
    rec.scale = parse_scale_kind(get_string(obj, "scale"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) field_error(ErrorKind::Input, "scale", e.what());
    throw;
  }
  rec.raw_text = get_string(obj, "raw_text");
  const std::size_t n = make_scale(rec.scale).size();
  if (obj.contains("logits")) rec.logits = sized_numbers(obj["logits"], "logits", n, rec.scale);
  if (obj.contains("probs")) rec.probs = sized_numbers(obj["probs"], "probs", n, rec.scale);
  if (!rec.logits && !rec.probs) field_error(ErrorKind::Input, "logits", "missing both 'logits' and 'probs'");
  if (obj.contains("features")) rec.features = features_from_json(obj["features"], n);
  if (obj.contains("meta")) {
    const json& meta = obj["meta"];
    if (!meta.is_object()) field_error(ErrorKind::Input, "meta", "expected an object");
    for (const auto& [k, v] : meta.items()) {
      if (!v.is_string()) field_error(ErrorKind::Input, "meta." + k, "expected a string");
      rec.meta[k] = v.get<std::string>();
    }
  }
  for (const auto& [k, v] : obj.items()) {
    if (std::find(kRecordKeys.begin(), kRecordKeys.end(), k) == kRecordKeys.end()) rec.extra[k] = v;
  }
  rec.validate();
  return rec;
}

std::string result_to_line(const ScoredResult& result, const json& provenance) {
  ObjectLine line;
  line.str("id", result.id)
      .str("scale", std::string(scale_kind_name(result.scale)))
      .str("method", std::string(method_name(result.method)))
      .num("score", result.score);
  if (result.alpha) line.num("alpha", *result.alpha);
  if (result.distribution) line.raw("distribution", number_array(*result.distribution));
  if (!result.diagnostics.empty()) {
    ObjectLine diag;
    for (const auto& [k, v] : result.diagnostics) diag.num(k, v);
    line.raw("diagnostics", diag.done());
  }
  if (!result.warnings.empty()) line.raw("warnings", json(result.warnings).dump());
  if (provenance.is_object() && !provenance.empty()) line.raw("provenance", provenance.dump());
  return line.done();
}

ScoredResult result_from_json(const json& obj) {
  if (!obj.is_object()) field_error(ErrorKind::Input, "$", "expected a JSON object");
  ScoredResult r;
  r.id = get_string(obj, "id");
  r.scale = parse_scale_kind(get_string(obj, "scale"));
  r.method = parse_method(get_string(obj, "method"));
  r.score = as_number(require(obj, "score"), "score");
  if (obj.contains("alpha")) r.alpha = as_number(obj["alpha"], "alpha");
  if (obj.contains("distribution")) r.distribution = as_numbers(obj["distribution"], "distribution");
  if (obj.contains("diagnostics")) {
    const json& diag = obj["diagnostics"];
    if (!diag.is_object()) field_error(ErrorKind::Input, "diagnostics", "expected an object");
    for (const auto& [k, v] : diag.items()) r.diagnostics[k] = as_number(v, "diagnostics." + k);
  }
  if (obj.contains("warnings")) {
    for (const auto& w : obj["warnings"]) {
      if (!w.is_string()) field_error(ErrorKind::Input, "warnings", "expected strings");
      r.warnings.push_back(w.get<std::string>());
    }
  }
  return r;
}

Label label_from_json(const json& obj) {
  if (!obj.is_object()) field_error(ErrorKind::Input, "$", "expected a JSON object");
  if (obj.contains("human")) {
    return GradedLabel{get_string(obj, "id"), as_number(obj["human"], "human")};
  }
  PreferenceLabel p;
  p.id = get_string(obj, "id");
  p.score_a_id = get_string(obj, "score_a_id");
  p.score_b_id = get_string(obj, "score_b_id");
  const std::string pref = get_string(obj, "preferred");
  if (pref == "a") {
    p.preferred = Preferred::A;
  } else if (pref == "b") {
    p.preferred = Preferred::B;
  } else {
    field_error(ErrorKind::Input, "preferred", "expected \"a\" or \"b\"");
  }
  return p;
}

std::string label_to_line(const Label& label) {
  if (const auto* g = std::get_if<GradedLabel>(&label)) {
    return ObjectLine().str("id", g->id).num("human", g->human).done();
  }
  const auto& p = std::get<PreferenceLabel>(label);
  return ObjectLine()
      .str("id", p.id)
      .str("score_a_id", p.score_a_id)
      .str("score_b_id", p.score_b_id)
      .str("preferred", p.preferred == Preferred::A ? "a" : "b")
      .done();
}

template <typename T>
LineReader<T>::LineReader(const std::filesystem::path& path, ParseMode mode, Parser parser)
    : path_(path), in_(path), mode_(mode), parser_(parser) {
  if (!in_) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
}

template <typename T>
std::optional<T> LineReader<T>::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      return parser_(json::parse(line));
    } catch (const std::exception& e) {
      const auto* err = dynamic_cast<const Error*>(&e);
      const bool syntax = dynamic_cast<const json::parse_error*>(&e) != nullptr;
      const ErrorKind kind = err ? err->kind() : syntax ? ErrorKind::Parse : ErrorKind::Input;
      std::string message = path_.string() + ":" + std::to_string(line_no_) + ": " + e.what();
      if (mode_ == ParseMode::Strict) throw Error(kind, message);
      ++skipped_;
      problems_.push_back(std::move(message));
    }
  }
  if (in_.bad()) throw Error(ErrorKind::Io, "read failure on '" + path_.string() + "'");
  return std::nullopt;
}

template class LineReader<ScoreRecord>;
template class LineReader<ScoredResult>;
template class LineReader<Label>;

ReadOutcome<ScoreRecord> read_records(const std::filesystem::path& path, ParseMode mode) {
  return read_all<ScoreRecord>(path, mode, &record_from_json);
}

ReadOutcome<ScoredResult> read_results(const std::filesystem::path& path, ParseMode mode) {
  return read_all<ScoredResult>(path, mode, &result_from_json);
}

ReadOutcome<Label> read_labels(const std::filesystem::path& path, ParseMode mode) {
  return read_all<Label>(path, mode, &label_from_json);
}

LineWriter::LineWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
}

LineWriter::~LineWriter() {
  if (!closed_) out_.close();
}

void LineWriter::write(const std::string& line) {
  out_ << line << '\n';
  if (!out_) throw Error(ErrorKind::Io, "write failure on '" + path_.string() + "'");
}

void LineWriter::close() {
  out_.close();
  closed_ = true;
  if (out_.fail()) throw Error(ErrorKind::Io, "close failure on '" + path_.string() + "'");
}

void write_records(const std::filesystem::path& path, const std::vector<ScoreRecord>& records) {
  LineWriter w(path);
  for (const auto& r : records) w.write(record_to_line(r));
  w.close();
}

void write_results(const std::filesystem::path& path, const std::vector<ScoredResult>& results,
                   const json& provenance) {
  LineWriter w(path);
  for (const auto& r : results) w.write(result_to_line(r, provenance));
  w.close();
}

}  // namespace discode::io
