#include "surveymon/survey.h"

#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "surveymon/utf8.h"

namespace surveymon::survey {

namespace {

constexpr std::array<std::string_view, kNumTags> kTagNames{
    "open_ended", "single_choice", "multiple_selection", "star_rating",
    "nps",        "contact_info",  "other",
};

bool blank(std::string_view s) { return utf8::trim(s).empty(); }

// BCP-47-style: a 2-8 letter primary subtag followed by alphanumeric subtags.
bool is_language_tag(std::string_view tag) {
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const std::size_t dash = tag.find('-', start);
    const std::string_view part =
        tag.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start);
    const std::size_t lo = first ? 2 : 1;
    if (part.size() < lo || part.size() > 8) return false;
    for (char c : part) {
      const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
      const bool digit = c >= '0' && c <= '9';
      if (!(alpha || (!first && digit))) return false;
    }
    if (dash == std::string_view::npos) return true;
    start = dash + 1;
    first = false;
  }
}

class IssueSink {
 public:
  explicit IssueSink(std::vector<ParseIssue>& out) : out_(out) {}
  void add(std::string path, IssueKind kind, std::string detail) {
    out_.push_back({std::move(path), kind, std::move(detail)});
  }

 private:
  std::vector<ParseIssue>& out_;
};

// Reads a required non-blank string member. Returns nullopt (with an issue
// recorded) when absent, mistyped or blank.
std::optional<std::string> required_text(const nlohmann::json& obj, const char* key,
                                         const std::string& path, IssueSink& sink) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    sink.add(path, IssueKind::kMissingField, fmt::format("missing required field '{}'", key));
    return std::nullopt;
  }
  if (!it->is_string()) {
    sink.add(path, IssueKind::kBadType, fmt::format("'{}' must be a string", key));
    return std::nullopt;
  }
  auto value = it->get<std::string>();
  if (blank(value)) {
    sink.add(path, IssueKind::kConstraintViolation, fmt::format("'{}' must not be blank", key));
    return std::nullopt;
  }
  return value;
}

std::optional<Question> parse_question(const nlohmann::json& node, const std::string& path,
                                       IssueSink& sink) {
  if (!node.is_object()) {
    sink.add(path, IssueKind::kBadType, "question must be an object");
    return std::nullopt;
  }
  auto text = required_text(node, "text", path + "/text", sink);
  auto type_name = required_text(node, "type", path + "/type", sink);

  std::vector<std::string> options;
  bool options_ok = true;
  if (const auto it = node.find("options"); it != node.end()) {
    if (!it->is_array()) {
      sink.add(path + "/options", IssueKind::kBadType, "'options' must be an array of strings");
      options_ok = false;
    } else {
      for (std::size_t j = 0; j < it->size(); ++j) {
        const auto& opt = (*it)[j];
        const std::string opt_path = fmt::format("{}/options/{}", path, j);
        if (!opt.is_string()) {
          sink.add(opt_path, IssueKind::kBadType, "answer option must be a string");
          options_ok = false;
        } else if (blank(opt.get_ref<const std::string&>())) {
          sink.add(opt_path, IssueKind::kConstraintViolation, "answer option must not be blank");
          options_ok = false;
        } else {
          options.push_back(opt.get<std::string>());
        }
      }
    }
  }

  if (!text || !type_name || !options_ok) return std::nullopt;

  const QuestionType type = QuestionType::from_wire(*type_name);
  bool valid = true;
  if (forbids_options(type.tag()) && !options.empty()) {
    sink.add(path + "/options", IssueKind::kConstraintViolation,
             fmt::format("'{}' questions take no answer options", type.wire_name()));
    valid = false;
  }
  if (requires_options(type.tag()) && options.size() < 2) {
    sink.add(path + "/options", IssueKind::kConstraintViolation,
             fmt::format("'{}' questions need at least 2 answer options, got {}",
                         type.wire_name(), options.size()));
    valid = false;
  }
  std::set<std::string_view> seen;
  for (std::size_t j = 0; j < options.size(); ++j) {
    if (!seen.insert(utf8::trim(options[j])).second) {
      sink.add(fmt::format("{}/options/{}", path, j), IssueKind::kConstraintViolation,
               "duplicate answer option");
      valid = false;
    }
  }
  if (!valid) return std::nullopt;
  return Question{std::move(*text), type, std::move(options)};
}

}  // namespace

std::string_view tag_name(QuestionTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<QuestionTag> tag_from_name(std::string_view name) {
  for (std::size_t i = 0; i + 1 < kNumTags; ++i) {
    if (kTagNames[i] == name) return static_cast<QuestionTag>(i);
  }
  return std::nullopt;
}

QuestionType::QuestionType(QuestionTag tag) : tag_(tag) {
  if (tag == QuestionTag::kOther) {
    throw std::invalid_argument("QuestionType: use QuestionType::other(label) for kOther");
  }
}

QuestionType QuestionType::other(std::string label) {
  if (label.empty()) throw std::invalid_argument("QuestionType: other() needs a label");
  if (tag_from_name(label)) {
    throw std::invalid_argument(fmt::format("QuestionType: '{}' is a supported type", label));
  }
  QuestionType t;
  t.tag_ = QuestionTag::kOther;
  t.label_ = std::move(label);
  return t;
}

QuestionType QuestionType::from_wire(std::string_view name) {
  if (auto tag = tag_from_name(name)) return QuestionType(*tag);
  return other(std::string(name));
}

std::string QuestionType::wire_name() const {
  return tag_ == QuestionTag::kOther ? label_ : std::string(tag_name(tag_));
}

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kMalformedJson:
      return "malformed_json";
    case IssueKind::kMissingField:
      return "missing_field";
    case IssueKind::kBadType:
      return "bad_type";
    case IssueKind::kConstraintViolation:
      return "constraint_violation";
  }
  return "unknown";
}

SurveyResult parse_survey(std::string_view raw) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::parse_error& e) {
    return std::vector<ParseIssue>{{"", IssueKind::kMalformedJson, e.what()}};
  }
  return parse_survey_value(doc);
}

SurveyResult parse_survey_value(const nlohmann::json& doc, std::string_view base_path) {
  std::vector<ParseIssue> issues;
  IssueSink sink(issues);
  const std::string base(base_path);

  if (!doc.is_object()) {
    sink.add(base, IssueKind::kBadType, "survey must be a JSON object");
    return issues;
  }

  Survey s;
  if (auto title = required_text(doc, "title", base + "/title", sink)) s.title = std::move(*title);

  if (const auto it = doc.find("language"); it != doc.end()) {
    if (!it->is_string()) {
      sink.add(base + "/language", IssueKind::kBadType, "'language' must be a string");
    } else if (!is_language_tag(it->get_ref<const std::string&>())) {
      sink.add(base + "/language", IssueKind::kConstraintViolation,
               fmt::format("'{}' is not a language tag", it->get_ref<const std::string&>()));
    } else {
      s.language = it->get<std::string>();
    }
  }

  const auto qs = doc.find("questions");
  if (qs == doc.end()) {
    sink.add(base + "/questions", IssueKind::kMissingField,
             "missing required field 'questions'");
  } else if (!qs->is_array()) {
    sink.add(base + "/questions", IssueKind::kBadType, "'questions' must be an array");
  } else if (qs->empty()) {
    sink.add(base + "/questions", IssueKind::kConstraintViolation,
             "a survey needs at least one question");
  } else {
    for (std::size_t i = 0; i < qs->size(); ++i) {
      if (auto q = parse_question((*qs)[i], fmt::format("{}/questions/{}", base, i), sink)) {
        s.questions.push_back(std::move(*q));
      }
    }
  }

  if (!issues.empty()) return issues;
  return s;
}

nlohmann::ordered_json to_json(const Survey& s) {
  nlohmann::ordered_json doc;
  doc["title"] = s.title;
  if (s.language) doc["language"] = *s.language;
  auto& questions = doc["questions"] = nlohmann::ordered_json::array();
  for (const auto& q : s.questions) {
    nlohmann::ordered_json item;
    item["text"] = q.text;
    item["type"] = q.type.wire_name();
    if (!q.options.empty()) item["options"] = q.options;
    questions.push_back(std::move(item));
  }
  return doc;
}

std::string serialize_survey(const Survey& s) {
  return to_json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::vector<ParseIssue> validate(const Survey& s) {
  const nlohmann::json doc = nlohmann::json::parse(serialize_survey(s));
  auto result = parse_survey_value(doc);
  return result.ok() ? std::vector<ParseIssue>{} : result.issues();
}

std::size_t TypeCounts::total() const {
  std::size_t n = 0;
  for (auto c : by_tag) n += c;
  return n;
}

std::size_t TypeCounts::closed_ended() const {
  std::size_t n = 0;
  for (auto tag : kAllTags) {
    if (is_closed_ended(tag)) n += of(tag);
  }
  return n;
}

TypeCounts question_type_counts(const Survey& s) {
  TypeCounts counts;
  for (const auto& q : s.questions) ++counts.by_tag[static_cast<std::size_t>(q.type.tag())];
  return counts;
}

}  // namespace surveymon::survey
