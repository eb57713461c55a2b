#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/survey.h"

namespace surveymon::corpus {

/// One user prompt and the survey generated for it.
struct CorpusRecord {
  std::string id;
  std::string variant;
  std::string user_prompt;
  bool pii_flagged = false;
  std::string language;
  std::string created_at;  // RFC 3339, validated on load
  survey::Survey survey;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::string message, std::size_t line = 0)
      : std::runtime_error(std::move(message)), line_(line) {}
  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Why a corpus line could not be loaded.
struct LineIssue {
  std::size_t line = 0;
  std::string record_id;  // empty when the id itself was unreadable
  std::vector<survey::ParseIssue> issues;
};

struct LoadOptions {
  bool lenient = false;  // skip bad lines instead of throwing
};

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<LineIssue> skipped;
};

/// Parses one corpus line. Issue paths are JSON pointers into the line.
Checked<CorpusRecord, survey::ParseIssue> parse_record(std::string_view line);

/// Reads a JSONL corpus. Blank lines are ignored. Fail-fast mode throws
/// CorpusError carrying the line number; lenient mode collects the bad lines.
/// Duplicate ids are a line error.
LoadResult load_corpus(const std::filesystem::path& path, LoadOptions opts = {});
LoadResult load_corpus(std::istream& in, LoadOptions opts = {});

nlohmann::ordered_json to_json(const CorpusRecord& r);
/// One compact JSON object, no trailing newline.
std::string serialize_record(const CorpusRecord& r);
void write_corpus(std::ostream& out, const std::vector<CorpusRecord>& records);

/// True iff `ts` is an RFC 3339 date-time (e.g. 2023-10-01T12:00:00Z).
bool is_rfc3339(std::string_view ts);

enum class DropReason { kDuplicate, kPii, kLanguage, kPromptLength, kQuestionCount };

inline constexpr DropReason kAllDropReasons[] = {
    DropReason::kDuplicate, DropReason::kPii, DropReason::kLanguage,
    DropReason::kPromptLength, DropReason::kQuestionCount};

std::string_view reason_name(DropReason r);

struct FilterConfig {
  int min_prompt_chars = 200;
  int max_prompt_chars = 500;
  int min_questions = 5;
  int max_questions = 12;
  std::string required_language = "en";
  bool drop_pii = true;
  bool dedupe = true;
  /// Optional language detector; when empty the record's `language` is trusted.
  std::function<std::string(const CorpusRecord&)> detect_language;

  /// Throws std::invalid_argument when a bound is negative or a range inverted.
  void check() const;
};

FilterConfig filter_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const FilterConfig& cfg);

struct FilterReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::map<DropReason, std::size_t> dropped;  // every reason present, possibly 0

  std::size_t dropped_total() const;
};

nlohmann::ordered_json to_json(const FilterReport& report);
std::string format_table(const FilterReport& report);

struct FilterResult {
  std::vector<CorpusRecord> kept;
  FilterReport report;
};

/// Trimmed, whitespace-collapsed and case-folded prompt; the dedupe key.
std::string normalize_prompt(std::string_view prompt);

/// Prompt length in Unicode scalar values after trimming outer whitespace.
std::size_t prompt_length(std::string_view prompt);

/// Applies, in order: dedupe, PII, language, then prompt length and question
/// count (both inclusive ranges). Each dropped record is charged to the first
/// rule it fails. Kept records keep their input order.
FilterResult filter_corpus(const std::vector<CorpusRecord>& records, const FilterConfig& cfg);

/// Groups records by variant label, preserving input order within a group.
std::map<std::string, std::vector<CorpusRecord>> partition_by_variant(
    const std::vector<CorpusRecord>& records);

}  // namespace surveymon::corpus
