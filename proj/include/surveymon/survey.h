#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/checked.h"

namespace surveymon::survey {

/// Question types the generator may emit. Anything else parses as kOther and
/// keeps its raw type string as the label.
enum class QuestionTag {
  kOpenEnded,
  kSingleChoice,
  kMultipleSelection,
  kStarRating,
  kNps,
  kContactInfo,
  kOther,
};

inline constexpr std::size_t kNumTags = 7;

inline constexpr std::array<QuestionTag, kNumTags> kAllTags{
    QuestionTag::kOpenEnded, QuestionTag::kSingleChoice, QuestionTag::kMultipleSelection,
    QuestionTag::kStarRating, QuestionTag::kNps,          QuestionTag::kContactInfo,
    QuestionTag::kOther,
};

/// Wire name ("open_ended", ...). kOther has no fixed name and returns "other".
std::string_view tag_name(QuestionTag tag);
/// Inverse of tag_name for the six fixed tags; nullopt otherwise.
std::optional<QuestionTag> tag_from_name(std::string_view name);

/// Single choice, multiple selection, star rating and NPS.
constexpr bool is_closed_ended(QuestionTag tag) {
  return tag == QuestionTag::kSingleChoice || tag == QuestionTag::kMultipleSelection ||
         tag == QuestionTag::kStarRating || tag == QuestionTag::kNps;
}

/// Types whose scale is implied and therefore carry no explicit options.
constexpr bool forbids_options(QuestionTag tag) {
  return tag == QuestionTag::kOpenEnded || tag == QuestionTag::kNps ||
         tag == QuestionTag::kStarRating || tag == QuestionTag::kContactInfo;
}

constexpr bool requires_options(QuestionTag tag) {
  return tag == QuestionTag::kSingleChoice || tag == QuestionTag::kMultipleSelection;
}

class QuestionType {
 public:
  QuestionType() = default;
  /// Throws std::invalid_argument for kOther; use other().
  explicit QuestionType(QuestionTag tag);
  /// Throws std::invalid_argument on an empty label.
  static QuestionType other(std::string label);
  /// Known names map to their tag, everything else to other(name).
  static QuestionType from_wire(std::string_view name);

  QuestionTag tag() const { return tag_; }
  const std::string& label() const { return label_; }
  std::string wire_name() const;
  bool closed_ended() const { return is_closed_ended(tag_); }

  friend bool operator==(const QuestionType&, const QuestionType&) = default;

 private:
  QuestionTag tag_ = QuestionTag::kOpenEnded;
  std::string label_;
};

struct Question {
  std::string text;
  QuestionType type;
  std::vector<std::string> options;

  friend bool operator==(const Question&, const Question&) = default;
};

struct Survey {
  std::string title;
  std::optional<std::string> language;
  std::vector<Question> questions;

  friend bool operator==(const Survey&, const Survey&) = default;
};

enum class IssueKind { kMalformedJson, kMissingField, kBadType, kConstraintViolation };

std::string_view issue_kind_name(IssueKind kind);

struct ParseIssue {
  std::string path;  // JSON pointer to the offending node
  IssueKind kind;
  std::string detail;

  friend bool operator==(const ParseIssue&, const ParseIssue&) = default;
};

using SurveyResult = Checked<Survey, ParseIssue>;

/// Parses raw bytes as a survey document.
SurveyResult parse_survey(std::string_view raw);

/// Validates an already-decoded JSON value. `base_path` prefixes every issue
/// path, so a survey nested in a corpus record reports "/survey/questions/0".
SurveyResult parse_survey_value(const nlohmann::json& doc, std::string_view base_path = "");

/// Every invariant violation in `s`; empty iff the survey is valid.
std::vector<ParseIssue> validate(const Survey& s);

/// Canonical compact JSON: keys ordered title, language, questions and
/// text, type, options; "language" and empty "options" are omitted.
std::string serialize_survey(const Survey& s);
nlohmann::ordered_json to_json(const Survey& s);

/// Per-tag question counts.
struct TypeCounts {
  std::array<std::size_t, kNumTags> by_tag{};

  std::size_t of(QuestionTag tag) const { return by_tag[static_cast<std::size_t>(tag)]; }
  std::size_t total() const;
  std::size_t closed_ended() const;
};

TypeCounts question_type_counts(const Survey& s);

}  // namespace surveymon::survey
