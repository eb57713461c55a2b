#include "surveymon/features.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "surveymon/csv.h"
#include "surveymon/utf8.h"

namespace surveymon::features {

using survey::QuestionTag;

namespace {

constexpr std::array<std::string_view, kNumFeatures> kNames{
    "n_generated_questions",
    "n_open_ended_questions",
    "n_closed_ended_questions",
    "n_multiple_selection_questions",
    "n_single_choice_questions",
    "n_contact_info_questions",
    "n_nps_questions",
    "n_unsupported_questions",
    "n_characters_in_survey",
    "n_words_in_survey",
    "std_n_words_per_question",
    "avg_word_length_in_survey",
    "avg_n_answer_options",
    "avg_n_words_per_question",
    "avg_n_words_per_answer_option",
    "max_word_length_in_survey",
    "any_special_character",
    "score_flesch_kincaid",
};

constexpr std::size_t kSpecialCharIndex = 16;

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

const std::array<std::string_view, kNumFeatures>& feature_names() { return kNames; }

std::size_t feature_index(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  return static_cast<std::size_t>(it - kNames.begin());
}

bool is_boolean_feature(std::size_t index) { return index == kSpecialCharIndex; }

std::vector<double> FeatureVector::values() const {
  const auto d = [](std::size_t v) { return static_cast<double>(v); };
  return {
      d(n_generated_questions),
      d(n_open_ended_questions),
      d(n_closed_ended_questions),
      d(n_multiple_selection_questions),
      d(n_single_choice_questions),
      d(n_contact_info_questions),
      d(n_nps_questions),
      d(n_unsupported_questions),
      d(n_characters_in_survey),
      d(n_words_in_survey),
      std_n_words_per_question,
      avg_word_length_in_survey,
      avg_n_answer_options,
      avg_n_words_per_question,
      avg_n_words_per_answer_option,
      d(max_word_length_in_survey),
      any_special_character ? 1.0 : 0.0,
      score_flesch_kincaid,
  };
}

std::string concatenated_questions(const survey::Survey& s) {
  std::string out;
  for (std::size_t i = 0; i < s.questions.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += s.questions[i].text;
  }
  return out;
}

bool admits_options(const survey::QuestionType& type) {
  return !survey::forbids_options(type.tag());
}

FeatureVector extract_features(const survey::Survey& s) {
  FeatureVector f;
  const auto counts = survey::question_type_counts(s);
  f.n_generated_questions = counts.total();
  f.n_open_ended_questions = counts.of(QuestionTag::kOpenEnded);
  f.n_closed_ended_questions = counts.closed_ended();
  f.n_multiple_selection_questions = counts.of(QuestionTag::kMultipleSelection);
  f.n_single_choice_questions = counts.of(QuestionTag::kSingleChoice);
  f.n_contact_info_questions = counts.of(QuestionTag::kContactInfo);
  f.n_nps_questions = counts.of(QuestionTag::kNps);
  f.n_unsupported_questions = counts.of(QuestionTag::kOther);
  f.n_star_rating_questions = counts.of(QuestionTag::kStarRating);

  const std::string joined = concatenated_questions(s);
  f.n_characters_in_survey = utf8::length(joined);
  f.any_special_character = text::has_special_character(joined);

  // Everything below is accumulated in integers so the result does not
  // depend on question order.
  text::TokenStats totals;
  std::size_t sum_words = 0;
  std::size_t sum_words_sq = 0;
  std::size_t sum_word_chars = 0;
  std::size_t option_questions = 0;
  std::size_t n_options = 0;
  std::size_t option_words = 0;
  for (const auto& q : s.questions) {
    const auto stats = text::token_stats(q.text);
    totals.n_words += stats.n_words;
    totals.n_sentences += stats.n_sentences;
    totals.n_syllables += stats.n_syllables;
    for (auto len : stats.word_lengths) {
      sum_word_chars += len;
      f.max_word_length_in_survey = std::max(f.max_word_length_in_survey, len);
    }
    sum_words += stats.n_words;
    sum_words_sq += stats.n_words * stats.n_words;

    if (admits_options(q.type)) {
      ++option_questions;
      n_options += q.options.size();
    }
    for (const auto& opt : q.options) option_words += text::tokenize(opt).size();
  }

  const std::size_t nq = s.questions.size();
  f.n_words_in_survey = totals.n_words;
  f.avg_word_length_in_survey = ratio(sum_word_chars, totals.n_words);
  f.avg_n_words_per_question = ratio(sum_words, nq);
  if (nq > 0) {
    // population variance = (n * sum(x^2) - sum(x)^2) / n^2
    const double num = static_cast<double>(nq * sum_words_sq - sum_words * sum_words);
    f.std_n_words_per_question = std::sqrt(num) / static_cast<double>(nq);
  }
  f.avg_n_answer_options = ratio(n_options, option_questions);
  f.avg_n_words_per_answer_option = ratio(option_words, n_options);
  f.score_flesch_kincaid = totals.n_words == 0 ? 0.0 : text::flesch_kincaid_grade(totals);
  return f;
}

void SurveyDistributions::merge(const SurveyDistributions& other) {
  unigrams.merge(other.unigrams);
  bigrams.merge(other.bigrams);
  characters.merge(other.characters);
}

SurveyDistributions survey_distributions(const survey::Survey& s) {
  std::vector<std::string> texts;
  texts.reserve(s.questions.size());
  for (const auto& q : s.questions) texts.push_back(q.text);
  return {text::ngram_distribution(texts, text::NGramOrder::kUnigram),
          text::ngram_distribution(texts, text::NGramOrder::kBigram),
          text::ngram_distribution(texts, text::NGramOrder::kCharacter)};
}

std::vector<double> CorpusFeatures::column(std::size_t feature) const {
  if (feature >= kNumFeatures) throw std::out_of_range("CorpusFeatures::column");
  std::vector<double> out;
  out.reserve(per_record.size());
  for (const auto& [id, fv] : per_record) out.push_back(fv.values()[feature]);
  return out;
}

CorpusFeatures extract_corpus_features(const std::vector<corpus::CorpusRecord>& records) {
  CorpusFeatures cf;
  cf.per_record.reserve(records.size());
  for (const auto& r : records) {
    cf.per_record.emplace_back(r.id, extract_features(r.survey));
    cf.pooled.merge(survey_distributions(r.survey));
  }
  return cf;
}

std::string feature_csv(const CorpusFeatures& cf) {
  std::string out = "id";
  for (auto name : kNames) {
    out.push_back(',');
    out += name;
  }
  out.push_back('\n');
  for (const auto& [id, fv] : cf.per_record) {
    out += csv::escape(id);
    for (double v : fv.values()) {
      out.push_back(',');
      out += csv::format_number(v);
    }
    out.push_back('\n');
  }
  return out;
}

CorpusFeatures read_feature_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw csv::CsvError("feature CSV has no header");
  const auto& header = rows.front();
  if (header.size() != kNumFeatures + 1 || header[0] != "id" ||
      !std::equal(kNames.begin(), kNames.end(), header.begin() + 1)) {
    throw csv::CsvError("feature CSV header does not match the feature schema");
  }
  CorpusFeatures cf;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw csv::CsvError(fmt::format("feature CSV row {} has {} fields, expected {}", r + 1,
                                      row.size(), header.size()));
    }
    std::array<double, kNumFeatures> v{};
    for (std::size_t i = 0; i < kNumFeatures; ++i) v[i] = csv::parse_number(row[i + 1]);
    const auto count = [](double x) { return static_cast<std::size_t>(std::llround(x)); };
    FeatureVector f;
    f.n_generated_questions = count(v[0]);
    f.n_open_ended_questions = count(v[1]);
    f.n_closed_ended_questions = count(v[2]);
    f.n_multiple_selection_questions = count(v[3]);
    f.n_single_choice_questions = count(v[4]);
    f.n_contact_info_questions = count(v[5]);
    f.n_nps_questions = count(v[6]);
    f.n_unsupported_questions = count(v[7]);
    f.n_characters_in_survey = count(v[8]);
    f.n_words_in_survey = count(v[9]);
    f.std_n_words_per_question = v[10];
    f.avg_word_length_in_survey = v[11];
    f.avg_n_answer_options = v[12];
    f.avg_n_words_per_question = v[13];
    f.avg_n_words_per_answer_option = v[14];
    f.max_word_length_in_survey = count(v[15]);
    f.any_special_character = v[16] != 0.0;
    f.score_flesch_kincaid = v[17];
    cf.per_record.emplace_back(row[0], f);
  }
  return cf;
}

nlohmann::ordered_json to_json(const SurveyDistributions& d) {
  const auto dist = [](const text::NGramDistribution& x) {
    nlohmann::ordered_json j;
    j["order"] = text::order_name(x.order);
    j["total"] = x.total;
    j["distinct"] = x.counts.size();
    auto& counts = j["counts"] = nlohmann::ordered_json::object();
    for (const auto& [gram, c] : x.counts) counts[gram] = c;
    return j;
  };
  nlohmann::ordered_json j;
  j["unigrams"] = dist(d.unigrams);
  j["bigrams"] = dist(d.bigrams);
  j["characters"] = dist(d.characters);
  return j;
}

HistogramBins HistogramBins::from_edges(std::vector<double> edges) {
  if (edges.empty()) throw std::invalid_argument("histogram needs at least one edge");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw std::invalid_argument("histogram edges must be finite");
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw std::invalid_argument("histogram edges must be strictly increasing");
    }
  }
  return HistogramBins{std::move(edges)};
}

HistogramBins HistogramBins::integers(long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("integer histogram: lo > hi");
  std::vector<double> edges;
  for (long v = lo; v <= hi + 1; ++v) edges.push_back(static_cast<double>(v) - 0.5);
  return from_edges(std::move(edges));
}

HistogramBins HistogramBins::uniform(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("uniform histogram needs at least one bin");
  if (!(hi > lo)) throw std::invalid_argument("uniform histogram: hi must exceed lo");
  std::vector<double> edges;
  for (std::size_t i = 0; i <= count; ++i) {
    edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count));
  }
  // The top edge is exclusive; nudge it so `hi` lands in the last bin.
  edges.back() = std::nextafter(hi, std::numeric_limits<double>::infinity());
  return from_edges(std::move(edges));
}

HistogramBins HistogramBins::parse(std::string_view spec, const std::vector<double>& values) {
  std::vector<std::string> parts;
  {
    std::size_t start = 0;
    while (true) {
      const auto colon = spec.find(':', start);
      parts.emplace_back(spec.substr(start, colon == std::string_view::npos ? spec.npos
                                                                            : colon - start));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
  }
  const auto [mn, mx] = values.empty()
                            ? std::pair{0.0, 0.0}
                            : std::pair{*std::min_element(values.begin(), values.end()),
                                        *std::max_element(values.begin(), values.end())};
  const auto kind = parts[0];
  try {
    if (kind == "int" && parts.size() == 1) {
      return integers(static_cast<long>(std::floor(mn)), static_cast<long>(std::ceil(mx)));
    }
    if (kind == "int" && parts.size() == 3) {
      return integers(static_cast<long>(csv::parse_number(parts[1])),
                      static_cast<long>(csv::parse_number(parts[2])));
    }
    if (kind == "uniform" && (parts.size() == 2 || parts.size() == 4)) {
      const auto k = static_cast<std::size_t>(csv::parse_number(parts[1]));
      double lo = mn;
      double hi = mx;
      if (parts.size() == 4) {
        lo = csv::parse_number(parts[2]);
        hi = csv::parse_number(parts[3]);
      } else if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
      }
      return uniform(lo, hi, k);
    }
    if (kind == "edges" && parts.size() == 2) {
      std::vector<double> edges;
      std::string_view list = parts[1];
      std::size_t start = 0;
      while (true) {
        const auto comma = list.find(',', start);
        edges.push_back(csv::parse_number(
            list.substr(start, comma == std::string_view::npos ? list.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      return from_edges(std::move(edges));
    }
  } catch (const csv::CsvError& e) {
    throw std::invalid_argument(fmt::format("bad bin spec '{}': {}", spec, e.what()));
  }
  throw std::invalid_argument(fmt::format("bad bin spec '{}'", spec));
}

std::vector<HistogramRow> feature_histogram(const std::vector<double>& values,
                                            const HistogramBins& bins) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto& e = bins.edges;
  std::vector<HistogramRow> rows;
  rows.push_back({-kInf, e.front(), 0});
  for (std::size_t i = 0; i + 1 < e.size(); ++i) rows.push_back({e[i], e[i + 1], 0});
  rows.push_back({e.back(), kInf, 0});

  for (double v : values) {
    // Index of the first edge > v is the row index: row 0 is (-inf, e0).
    const auto idx = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), v) - e.begin());
    ++rows[idx].count;
  }
  return rows;
}

std::string histogram_csv(const std::vector<HistogramRow>& rows) {
  std::string out = "bin_low,bin_high,count\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", csv::format_number(r.low), csv::format_number(r.high),
                       r.count);
  }
  return out;
}

}  // namespace surveymon::features
