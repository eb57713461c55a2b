#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surveymon/corpus.h"
#include "surveymon/survey.h"
#include "surveymon/textstats.h"

namespace surveymon::features {

/// Survey metadata features. Text statistics are computed over the question
/// texts only, joined by single spaces; titles and answer options are
/// excluded except for avg_n_words_per_answer_option.
struct FeatureVector {
  std::size_t n_generated_questions = 0;
  std::size_t n_open_ended_questions = 0;
  std::size_t n_closed_ended_questions = 0;
  std::size_t n_multiple_selection_questions = 0;
  std::size_t n_single_choice_questions = 0;
  std::size_t n_contact_info_questions = 0;
  std::size_t n_nps_questions = 0;
  std::size_t n_unsupported_questions = 0;
  std::size_t n_characters_in_survey = 0;
  std::size_t n_words_in_survey = 0;
  double std_n_words_per_question = 0.0;
  double avg_word_length_in_survey = 0.0;
  double avg_n_answer_options = 0.0;
  double avg_n_words_per_question = 0.0;
  double avg_n_words_per_answer_option = 0.0;
  std::size_t max_word_length_in_survey = 0;
  bool any_special_character = false;
  double score_flesch_kincaid = 0.0;

  // Folded into n_closed_ended_questions; not an exported column.
  std::size_t n_star_rating_questions = 0;

  /// Exported columns, in the order of feature_names().
  std::vector<double> values() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr std::size_t kNumFeatures = 18;

/// Exported column names in canonical order.
const std::array<std::string_view, kNumFeatures>& feature_names();

/// Index of a column name, or npos-like kNumFeatures when unknown.
std::size_t feature_index(std::string_view name);

/// any_special_character is the only boolean column.
bool is_boolean_feature(std::size_t index);

/// Question texts joined by single spaces.
std::string concatenated_questions(const survey::Survey& s);

/// Options are admitted by every type except open-ended, NPS, star rating
/// and contact info.
bool admits_options(const survey::QuestionType& type);

/// Empty denominators yield 0.0 (no option-bearing questions, no options,
/// no words); a survey without words scores 0.0 on Flesch-Kincaid.
FeatureVector extract_features(const survey::Survey& s);

struct SurveyDistributions {
  text::NGramDistribution unigrams{text::NGramOrder::kUnigram, {}, 0};
  text::NGramDistribution bigrams{text::NGramOrder::kBigram, {}, 0};
  text::NGramDistribution characters{text::NGramOrder::kCharacter, {}, 0};

  void merge(const SurveyDistributions& other);
  friend bool operator==(const SurveyDistributions&, const SurveyDistributions&) = default;
};

/// Word grams are taken per question; characters over the joined text.
SurveyDistributions survey_distributions(const survey::Survey& s);

struct CorpusFeatures {
  std::vector<std::pair<std::string, FeatureVector>> per_record;
  SurveyDistributions pooled;

  /// One column of per_record, as reals.
  std::vector<double> column(std::size_t feature) const;
};

CorpusFeatures extract_corpus_features(const std::vector<corpus::CorpusRecord>& records);

/// Feature matrix CSV: "id" followed by the exported columns.
std::string feature_csv(const CorpusFeatures& cf);

/// Reads a matrix written by feature_csv (lines starting with '#' skipped).
CorpusFeatures read_feature_csv(std::istream& in);

nlohmann::ordered_json to_json(const SurveyDistributions& d);

/// Histogram bins over (-inf, e0), [e0, e1), ..., [e_last, +inf).
struct HistogramBins {
  std::vector<double> edges;  // strictly increasing, at least one

  /// One bin per integer in [lo, hi], centred on the integer.
  static HistogramBins integers(long lo, long hi);
  /// `count` equal-width bins over [lo, hi].
  static HistogramBins uniform(double lo, double hi, std::size_t count);
  static HistogramBins from_edges(std::vector<double> edges);
  /// Parses "int", "int:LO:HI", "uniform:K", "uniform:K:LO:HI" or
  /// "edges:E0,E1,...". Data-dependent forms derive their range from `values`.
  static HistogramBins parse(std::string_view spec, const std::vector<double>& values);
};

struct HistogramRow {
  double low;
  double high;
  std::size_t count;
};

/// Always includes the two open-ended end bins; counts sum to values.size().
std::vector<HistogramRow> feature_histogram(const std::vector<double>& values,
                                            const HistogramBins& bins);

/// "bin_low,bin_high,count" rows.
std::string histogram_csv(const std::vector<HistogramRow>& rows);

}  // namespace surveymon::features
