#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "surveymon/corpus.h"
#include "surveymon/random.h"
#include "surveymon/survey.h"

namespace testutil {

using surveymon::survey::Question;
using surveymon::survey::QuestionTag;
using surveymon::survey::QuestionType;
using surveymon::survey::Survey;

inline Question question(std::string text, QuestionTag tag, std::vector<std::string> options = {}) {
  return Question{std::move(text), QuestionType(tag), std::move(options)};
}

inline Question other_question(std::string text, std::string label) {
  return Question{std::move(text), QuestionType::other(std::move(label)), {}};
}

inline Survey survey_of(std::vector<Question> qs, std::string title = "Feedback") {
  return Survey{std::move(title), std::nullopt, std::move(qs)};
}

inline std::string repeat_to(std::size_t n, std::string_view unit = "abcd efgh ") {
  std::string s;
  while (s.size() < n) s += unit;
  s.resize(n);
  if (s.back() == ' ') s.back() = 'z';
  return s;
}

inline surveymon::corpus::CorpusRecord record(std::string id, std::string prompt, std::size_t n_questions,
                                              std::string variant = "V1") {
  surveymon::corpus::CorpusRecord r;
  r.id = std::move(id);
  r.variant = std::move(variant);
  r.user_prompt = std::move(prompt);
  r.language = "en";
  r.created_at = "2023-10-01T00:00:00Z";
  std::vector<Question> qs;
  for (std::size_t i = 0; i < n_questions; ++i) {
    qs.push_back(question("Question number " + std::to_string(i + 1) + "?", QuestionTag::kOpenEnded));
  }
  r.survey = survey_of(std::move(qs));
  return r;
}

/// Random valid survey drawing every question type, including other(label).
inline Survey random_survey(surveymon::rng::Engine& e, std::size_t max_questions = 12) {
  using namespace surveymon;
  static const char* kWords[] = {"how", "often", "do", "you", "shop", "online", "rate", "our",
                                 "service", "café", "delivery", "value", "state-of-the-art", "why"};
  const auto word = [&] { return std::string(kWords[rng::below(e, std::size(kWords))]); };
  const auto sentence = [&](long n) {
    std::string s;
    for (long i = 0; i < n; ++i) s += (i ? " " : "") + word();
    return s;
  };
  Survey s;
  s.title = "T " + word();
  const auto n = static_cast<std::size_t>(rng::between(e, 1, static_cast<long>(max_questions)));
  for (std::size_t i = 0; i < n; ++i) {
    const auto pick = rng::below(e, survey::kNumTags);
    const auto tag = survey::kAllTags[pick];
    Question q;
    q.text = sentence(rng::between(e, 1, 12)) + (rng::bernoulli(e, 0.7) ? "?" : "");
    if (tag == QuestionTag::kOther) {
      q.type = QuestionType::other(rng::bernoulli(e, 0.5) ? "matrix" : "ranking");
    } else {
      q.type = QuestionType(tag);
    }
    if (survey::requires_options(tag) || (tag == QuestionTag::kOther && rng::bernoulli(e, 0.5))) {
      const long k = rng::between(e, 2, 5);
      for (long j = 0; j < k; ++j) q.options.push_back("Option " + std::to_string(j) + " " + word());
    }
    s.questions.push_back(std::move(q));
  }
  return s;
}

}  // namespace testutil
