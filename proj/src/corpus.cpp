#include "surveymon/corpus.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "surveymon/utf8.h"

namespace surveymon::corpus {

using survey::IssueKind;
using survey::ParseIssue;

namespace {

bool digits(std::string_view s, std::size_t pos, std::size_t n, int& value) {
  if (pos + n > s.size()) return false;
  value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    value = value * 10 + (s[i] - '0');
  }
  return true;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// "en" accepts "en", "EN" and "en-US"; "en-GB" accepts only "en-gb".
bool language_matches(std::string_view actual, std::string_view required) {
  const std::string a = ascii_lower(actual);
  const std::string r = ascii_lower(required);
  return a == r || (a.size() > r.size() && a.compare(0, r.size(), r) == 0 && a[r.size()] == '-');
}

template <typename T>
std::optional<T> member(const nlohmann::json& obj, const char* key, std::vector<ParseIssue>& issues,
                        bool (nlohmann::json::*is_kind)() const noexcept, const char* kind) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    issues.push_back({fmt::format("/{}", key), IssueKind::kMissingField,
                      fmt::format("missing required field '{}'", key)});
    return std::nullopt;
  }
  if (!((*it).*is_kind)()) {
    issues.push_back({fmt::format("/{}", key), IssueKind::kBadType,
                      fmt::format("'{}' must be a {}", key, kind)});
    return std::nullopt;
  }
  return it->get<T>();
}

}  // namespace

bool is_rfc3339(std::string_view ts) {
  int year, month, day, hour, minute, second;
  if (!digits(ts, 0, 4, year) || ts.size() < 20 || ts[4] != '-' || !digits(ts, 5, 2, month) ||
      ts[7] != '-' || !digits(ts, 8, 2, day)) {
    return false;
  }
  if (ts[10] != 'T' && ts[10] != 't' && ts[10] != ' ') return false;
  if (!digits(ts, 11, 2, hour) || ts[13] != ':' || !digits(ts, 14, 2, minute) || ts[16] != ':' ||
      !digits(ts, 17, 2, second)) {
    return false;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return false;

  std::size_t pos = 19;
  if (pos < ts.size() && ts[pos] == '.') {
    const std::size_t start = ++pos;
    while (pos < ts.size() && ts[pos] >= '0' && ts[pos] <= '9') ++pos;
    if (pos == start) return false;
  }
  if (pos >= ts.size()) return false;
  if (ts[pos] == 'Z' || ts[pos] == 'z') return pos + 1 == ts.size();
  if (ts[pos] != '+' && ts[pos] != '-') return false;
  int oh, om;
  return pos + 6 == ts.size() && digits(ts, pos + 1, 2, oh) && ts[pos + 3] == ':' &&
         digits(ts, pos + 4, 2, om) && oh <= 23 && om <= 59;
}

Checked<CorpusRecord, ParseIssue> parse_record(std::string_view line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error& e) {
    return std::vector<ParseIssue>{{"", IssueKind::kMalformedJson, e.what()}};
  }
  if (!doc.is_object()) {
    return std::vector<ParseIssue>{{"", IssueKind::kBadType, "record must be a JSON object"}};
  }

  std::vector<ParseIssue> issues;
  using J = nlohmann::json;
  auto id = member<std::string>(doc, "id", issues, &J::is_string, "string");
  auto variant = member<std::string>(doc, "variant", issues, &J::is_string, "string");
  auto prompt = member<std::string>(doc, "user_prompt", issues, &J::is_string, "string");
  auto pii = member<bool>(doc, "pii_flagged", issues, &J::is_boolean, "boolean");
  auto language = member<std::string>(doc, "language", issues, &J::is_string, "string");
  auto created = member<std::string>(doc, "created_at", issues, &J::is_string, "string");

  if (id && id->empty()) {
    issues.push_back({"/id", IssueKind::kConstraintViolation, "'id' must not be empty"});
  }
  if (variant && variant->empty()) {
    issues.push_back({"/variant", IssueKind::kConstraintViolation, "'variant' must not be empty"});
  }
  if (created && !is_rfc3339(*created)) {
    issues.push_back({"/created_at", IssueKind::kConstraintViolation,
                      fmt::format("'{}' is not an RFC 3339 timestamp", *created)});
  }

  std::optional<survey::Survey> parsed;
  if (const auto it = doc.find("survey"); it == doc.end()) {
    issues.push_back({"/survey", IssueKind::kMissingField, "missing required field 'survey'"});
  } else {
    auto result = survey::parse_survey_value(*it, "/survey");
    if (result) {
      parsed = std::move(result).value();
    } else {
      issues.insert(issues.end(), result.issues().begin(), result.issues().end());
    }
  }

  if (!issues.empty()) return issues;
  return CorpusRecord{std::move(*id),  std::move(*variant), std::move(*prompt),
                      *pii,            std::move(*language), std::move(*created),
                      std::move(*parsed)};
}

LoadResult load_corpus(std::istream& in, LoadOptions opts) {
  LoadResult result;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;

  const auto reject = [&](LineIssue issue) {
    if (!opts.lenient) {
      const auto& first = issue.issues.front();
      throw CorpusError(fmt::format("line {}: {} at '{}': {}", issue.line,
                                    survey::issue_kind_name(first.kind), first.path, first.detail),
                        issue.line);
    }
    result.skipped.push_back(std::move(issue));
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (utf8::trim(line).empty()) continue;

    auto parsed = parse_record(line);
    if (!parsed) {
      std::string id;
      try {
        const auto doc = nlohmann::json::parse(line);
        if (doc.is_object() && doc.contains("id") && doc["id"].is_string()) id = doc["id"];
      } catch (const nlohmann::json::exception&) {
      }
      reject({lineno, std::move(id), parsed.issues()});
      continue;
    }
    CorpusRecord record = std::move(parsed).value();
    if (!ids.insert(record.id).second) {
      reject({lineno,
              record.id,
              {{"/id", IssueKind::kConstraintViolation,
                fmt::format("duplicate record id '{}'", record.id)}}});
      continue;
    }
    result.records.push_back(std::move(record));
  }
  if (in.bad()) throw CorpusError("read error while loading corpus");
  return result;
}

LoadResult load_corpus(const std::filesystem::path& path, LoadOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(fmt::format("cannot open corpus '{}'", path.string()));
  return load_corpus(in, opts);
}

nlohmann::ordered_json to_json(const CorpusRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["variant"] = r.variant;
  j["user_prompt"] = r.user_prompt;
  j["pii_flagged"] = r.pii_flagged;
  j["language"] = r.language;
  j["created_at"] = r.created_at;
  j["survey"] = survey::to_json(r.survey);
  return j;
}

std::string serialize_record(const CorpusRecord& r) {
  return to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_corpus(std::ostream& out, const std::vector<CorpusRecord>& records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

std::string_view reason_name(DropReason r) {
  switch (r) {
    case DropReason::kDuplicate:
      return "duplicate";
    case DropReason::kPii:
      return "pii";
    case DropReason::kLanguage:
      return "language";
    case DropReason::kPromptLength:
      return "prompt_length";
    case DropReason::kQuestionCount:
      return "question_count";
  }
  return "unknown";
}

void FilterConfig::check() const {
  if (min_prompt_chars < 0 || max_prompt_chars < 0 || min_questions < 0 || max_questions < 0) {
    throw std::invalid_argument("FilterConfig: bounds must be non-negative");
  }
  if (min_prompt_chars > max_prompt_chars) {
    throw std::invalid_argument("FilterConfig: min_prompt_chars > max_prompt_chars");
  }
  if (min_questions > max_questions) {
    throw std::invalid_argument("FilterConfig: min_questions > max_questions");
  }
}

FilterConfig filter_config_from_json(const nlohmann::json& j) {
  FilterConfig cfg;
  if (!j.is_object()) throw std::invalid_argument("filter config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "min_prompt_chars") {
      cfg.min_prompt_chars = value.get<int>();
    } else if (key == "max_prompt_chars") {
      cfg.max_prompt_chars = value.get<int>();
    } else if (key == "min_questions") {
      cfg.min_questions = value.get<int>();
    } else if (key == "max_questions") {
      cfg.max_questions = value.get<int>();
    } else if (key == "required_language") {
      cfg.required_language = value.get<std::string>();
    } else if (key == "drop_pii") {
      cfg.drop_pii = value.get<bool>();
    } else if (key == "dedupe") {
      cfg.dedupe = value.get<bool>();
    } else {
      throw std::invalid_argument(fmt::format("unknown filter config key '{}'", key));
    }
  }
  cfg.check();
  return cfg;
}

nlohmann::ordered_json to_json(const FilterConfig& cfg) {
  nlohmann::ordered_json j;
  j["min_prompt_chars"] = cfg.min_prompt_chars;
  j["max_prompt_chars"] = cfg.max_prompt_chars;
  j["min_questions"] = cfg.min_questions;
  j["max_questions"] = cfg.max_questions;
  j["required_language"] = cfg.required_language;
  j["drop_pii"] = cfg.drop_pii;
  j["dedupe"] = cfg.dedupe;
  return j;
}

std::size_t FilterReport::dropped_total() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : dropped) n += count;
  return n;
}

nlohmann::ordered_json to_json(const FilterReport& report) {
  nlohmann::ordered_json j;
  j["input_count"] = report.input_count;
  j["kept_count"] = report.kept_count;
  auto& dropped = j["dropped"] = nlohmann::ordered_json::object();
  for (auto reason : kAllDropReasons) {
    const auto it = report.dropped.find(reason);
    dropped[std::string(reason_name(reason))] = it == report.dropped.end() ? 0 : it->second;
  }
  return j;
}

std::string format_table(const FilterReport& report) {
  std::string out;
  out += fmt::format("{:<16}{:>8}\n", "stage", "count");
  out += fmt::format("{:<16}{:>8}\n", "input", report.input_count);
  for (auto reason : kAllDropReasons) {
    const auto it = report.dropped.find(reason);
    out += fmt::format("{:<16}{:>8}\n", fmt::format("-{}", reason_name(reason)),
                       it == report.dropped.end() ? 0 : it->second);
  }
  out += fmt::format("{:<16}{:>8}\n", "kept", report.kept_count);
  return out;
}

std::string normalize_prompt(std::string_view prompt) {
  return utf8::fold(utf8::collapse_whitespace(prompt));
}

std::size_t prompt_length(std::string_view prompt) { return utf8::length(utf8::trim(prompt)); }

FilterResult filter_corpus(const std::vector<CorpusRecord>& records, const FilterConfig& cfg) {
  cfg.check();
  FilterResult result;
  auto& report = result.report;
  report.input_count = records.size();
  for (auto reason : kAllDropReasons) report.dropped[reason] = 0;

  const auto in_range = [](std::size_t v, int lo, int hi) {
    return v >= static_cast<std::size_t>(lo) && v <= static_cast<std::size_t>(hi);
  };

  std::unordered_set<std::string> seen_prompts;
  for (const auto& r : records) {
    std::optional<DropReason> reason;
    if (cfg.dedupe && !seen_prompts.insert(normalize_prompt(r.user_prompt)).second) {
      reason = DropReason::kDuplicate;
    } else if (cfg.drop_pii && r.pii_flagged) {
      reason = DropReason::kPii;
    } else if (!language_matches(cfg.detect_language ? cfg.detect_language(r) : r.language,
                                 cfg.required_language)) {
      reason = DropReason::kLanguage;
    } else if (!in_range(prompt_length(r.user_prompt), cfg.min_prompt_chars,
                         cfg.max_prompt_chars)) {
      reason = DropReason::kPromptLength;
    } else if (!in_range(r.survey.questions.size(), cfg.min_questions, cfg.max_questions)) {
      reason = DropReason::kQuestionCount;
    }

    if (reason) {
      ++report.dropped[*reason];
    } else {
      result.kept.push_back(r);
    }
  }
  report.kept_count = result.kept.size();
  return result;
}

std::map<std::string, std::vector<CorpusRecord>> partition_by_variant(
    const std::vector<CorpusRecord>& records) {
  std::map<std::string, std::vector<CorpusRecord>> groups;
  for (const auto& r : records) groups[r.variant].push_back(r);
  return groups;
}

}  // namespace surveymon::corpus
