#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "discode/metrics.hpp"
#include "discode/scoring.hpp"

namespace discode::io {

inline constexpr int kFormatVersion = 1;

enum class ParseMode { Strict, Lenient };

/// Formats a double with 17 significant digits; throws Error(Numeric) for NaN/inf.
std::string format_number(double value);

/// One JSON object per line; see README for the key layout.
std::string record_to_line(const ScoreRecord& record);
/// Throws Error with the field path in the message (no line number).
ScoreRecord record_from_json(const nlohmann::ordered_json& obj);

std::string result_to_line(const ScoredResult& result, const nlohmann::ordered_json& provenance = {});
ScoredResult result_from_json(const nlohmann::ordered_json& obj);

/**
 * Streaming JSONL reader: one line in memory at a time.
 *
 * In strict mode the first bad line throws with its line number. In lenient
 * mode bad lines are skipped, counted, and their messages kept.
 */
template <typename T>
class LineReader {
public:
  using Parser = T (*)(const nlohmann::ordered_json&);

  LineReader(const std::filesystem::path& path, ParseMode mode, Parser parser);

  std::optional<T> next();
  std::size_t skipped() const noexcept { return skipped_; }
  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  std::filesystem::path path_;
  std::ifstream in_;
  ParseMode mode_;
  Parser parser_;
  std::size_t line_no_ = 0;
  std::size_t skipped_ = 0;
  std::vector<std::string> problems_;
};

struct GradedLabel {
  std::string id;
  double human = 0.0;
};

struct PreferenceLabel {
  std::string id;
  std::string score_a_id;
  std::string score_b_id;
  Preferred preferred = Preferred::A;
};

using Label = std::variant<GradedLabel, PreferenceLabel>;

Label label_from_json(const nlohmann::ordered_json& obj);
std::string label_to_line(const Label& label);

using RecordReader = LineReader<ScoreRecord>;
using ResultReader = LineReader<ScoredResult>;
using LabelReader = LineReader<Label>;

template <typename T>
struct ReadOutcome {
  std::vector<T> items;
  std::size_t skipped = 0;
  std::vector<std::string> problems;
};

ReadOutcome<ScoreRecord> read_records(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
ReadOutcome<ScoredResult> read_results(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
ReadOutcome<Label> read_labels(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);

/// Line-at-a-time writer; "\n" endings, flushes and checks the stream on close.
class LineWriter {
public:
  explicit LineWriter(const std::filesystem::path& path);
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void write(const std::string& line);
  void close();

private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool closed_ = false;
};

void write_records(const std::filesystem::path& path, const std::vector<ScoreRecord>& records);
void write_results(const std::filesystem::path& path, const std::vector<ScoredResult>& results,
                   const nlohmann::ordered_json& provenance = {});

}  // namespace discode::io
