#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.h"
#include "surveymon/features.h"

using namespace surveymon;
using namespace surveymon::features;
using survey::QuestionTag;
using testutil::question;

namespace {

void check_partition(const FeatureVector& f) {
  const auto per_type = f.n_open_ended_questions + f.n_multiple_selection_questions +
                        f.n_single_choice_questions + f.n_contact_info_questions + f.n_nps_questions +
                        f.n_unsupported_questions + f.n_star_rating_questions;
  CHECK(per_type == f.n_generated_questions);
  CHECK(f.n_closed_ended_questions == f.n_multiple_selection_questions + f.n_single_choice_questions +
                                          f.n_nps_questions + f.n_star_rating_questions);
}

}  // namespace

TEST_CASE("five open ended questions of six words") {
  std::vector<survey::Question> qs;
  for (int i = 0; i < 5; ++i) qs.push_back(question("How do you like our shop?", QuestionTag::kOpenEnded));
  const auto f = extract_features(testutil::survey_of(qs));
  CHECK(f.n_generated_questions == 5);
  CHECK(f.n_open_ended_questions == 5);
  CHECK(f.n_closed_ended_questions == 0);
  CHECK(f.avg_n_words_per_question == 6.0);
  CHECK(f.std_n_words_per_question == 0.0);
  CHECK(f.n_words_in_survey == 30);
  CHECK(f.avg_n_answer_options == 0.0);
  CHECK(f.avg_n_words_per_answer_option == 0.0);
}

TEST_CASE("one single choice question, tallied by hand") {
  const auto f = extract_features(
      testutil::survey_of({question("Pick one", QuestionTag::kSingleChoice, {"Yes", "No"})}));
  CHECK(f.avg_n_answer_options == 2.0);
  CHECK(f.avg_n_words_per_answer_option == 1.0);
  CHECK(f.n_words_in_survey == 2);
  CHECK(f.n_characters_in_survey == 8);
  CHECK(f.max_word_length_in_survey == 4);
  CHECK(f.avg_word_length_in_survey == 3.5);
  CHECK(f.n_closed_ended_questions == 1);
}

TEST_CASE("special characters and unsupported types") {
  const auto f = extract_features(testutil::survey_of(
      {question("Rate & review", QuestionTag::kOpenEnded), testutil::other_question("Rank these", "matrix"),
       question("Stars?", QuestionTag::kStarRating)}));
  CHECK(f.any_special_character);
  CHECK(f.n_unsupported_questions == 1);
  CHECK(f.n_closed_ended_questions == 1);
  CHECK(f.n_star_rating_questions == 1);
  check_partition(f);
}

TEST_CASE("character count includes the joining spaces") {
  const auto f = extract_features(testutil::survey_of(
      {question("Ab?", QuestionTag::kOpenEnded), question("Cé?", QuestionTag::kOpenEnded)}));
  CHECK(f.n_characters_in_survey == 7);
}

TEST_CASE("population std and options average by hand") {
  const auto f = extract_features(testutil::survey_of(
      {question("one two", QuestionTag::kOpenEnded), question("one two three four", QuestionTag::kOpenEnded),
       question("a b c", QuestionTag::kMultipleSelection, {"x y", "z", "w v u"}),
       question("d", QuestionTag::kSingleChoice, {"p", "q"})}));
  // word counts 2, 4, 3, 1: mean 2.5, population variance 1.25
  CHECK(f.avg_n_words_per_question == 2.5);
  CHECK(std::abs(f.std_n_words_per_question - std::sqrt(1.25)) < 1e-12);
  CHECK(f.avg_n_answer_options == 2.5);
  CHECK(f.avg_n_words_per_answer_option == 8.0 / 5.0);
}

TEST_CASE("exported columns") {
  CHECK(feature_names().size() == kNumFeatures);
  CHECK(feature_names()[0] == "n_generated_questions");
  CHECK(feature_names()[17] == "score_flesch_kincaid");
  CHECK(feature_index("any_special_character") == 16);
  CHECK(is_boolean_feature(16));
  CHECK(feature_index("nope") == kNumFeatures);
  const auto f = extract_features(testutil::survey_of({question("Why?", QuestionTag::kOpenEnded)}));
  CHECK(f.values().size() == kNumFeatures);
}

TEST_CASE("partition, permutation invariance and monotonicity on random surveys") {
  rng::Engine e(21);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = testutil::random_survey(e);
    const auto f = extract_features(s);
    check_partition(f);
    for (double v : f.values()) CHECK(std::isfinite(v));

    auto shuffled = s;
    rng::shuffle(std::span<survey::Question>(shuffled.questions), e);
    CHECK(extract_features(shuffled) == f);

    auto longer = s;
    longer.questions.push_back(testutil::random_survey(e, 1).questions[0]);
    const auto g = extract_features(longer);
    CHECK(g.n_generated_questions >= f.n_generated_questions);
    CHECK(g.n_words_in_survey >= f.n_words_in_survey);
    CHECK(g.n_characters_in_survey >= f.n_characters_in_survey);
  }
}

TEST_CASE("pooled distributions are additive") {
  const auto r = testutil::record("a", "p", 3);
  auto r2 = r;
  r2.id = "b";
  const auto single = extract_corpus_features({r});
  const auto twice = extract_corpus_features({r, r2});
  CHECK(twice.pooled.unigrams.total == 2 * single.pooled.unigrams.total);
  CHECK(twice.pooled.bigrams.total == 2 * single.pooled.bigrams.total);
  CHECK(twice.pooled.characters.total == 2 * single.pooled.characters.total);

  const auto empty = extract_corpus_features({});
  CHECK(empty.per_record.empty());
  CHECK(empty.pooled.unigrams.total == 0);
}

TEST_CASE("pooled totals equal per-survey sums on a mixed corpus") {
  rng::Engine e(4);
  std::vector<corpus::CorpusRecord> rs;
  std::uint64_t uni = 0, bi = 0, chars = 0;
  for (int i = 0; i < 10; ++i) {
    auto r = testutil::record("r" + std::to_string(i), "p", 1);
    r.survey = testutil::random_survey(e);
    const auto d = survey_distributions(r.survey);
    uni += d.unigrams.total;
    bi += d.bigrams.total;
    chars += d.characters.total;
    rs.push_back(r);
  }
  const auto cf = extract_corpus_features(rs);
  CHECK(cf.per_record.size() == 10);
  CHECK(cf.pooled.unigrams.total == uni);
  CHECK(cf.pooled.bigrams.total == bi);
  CHECK(cf.pooled.characters.total == chars);
}

TEST_CASE("distribution merge is associative and commutative on random surveys") {
  rng::Engine e(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = survey_distributions(testutil::random_survey(e));
    const auto b = survey_distributions(testutil::random_survey(e));
    const auto c = survey_distributions(testutil::random_survey(e));
    auto ab_c = a;
    ab_c.merge(b);
    ab_c.merge(c);
    auto bc = b;
    bc.merge(c);
    auto a_bc = a;
    a_bc.merge(bc);
    auto cb_a = c;
    cb_a.merge(b);
    cb_a.merge(a);
    CHECK(ab_c == a_bc);
    CHECK(ab_c == cb_a);
  }
}

TEST_CASE("feature csv round trip") {
  rng::Engine e(12);
  std::vector<corpus::CorpusRecord> rs;
  for (int i = 0; i < 20; ++i) {
    auto r = testutil::record("id" + std::to_string(i), "p", 1);
    r.survey = testutil::random_survey(e);
    rs.push_back(r);
  }
  const auto cf = extract_corpus_features(rs);
  std::istringstream in("# comment line\n" + feature_csv(cf));
  const auto back = read_feature_csv(in);
  REQUIRE(back.per_record.size() == cf.per_record.size());
  for (std::size_t i = 0; i < cf.per_record.size(); ++i) {
    CHECK(back.per_record[i].first == cf.per_record[i].first);
    CHECK(back.per_record[i].second.values() == cf.per_record[i].second.values());
  }
  std::istringstream bad("id,foo\nx,1\n");
  CHECK_THROWS(read_feature_csv(bad));
}

TEST_CASE("histograms") {
  SUBCASE("integer bins") {
    const std::vector<double> v{1, 1, 2};
    const auto rows = feature_histogram(v, HistogramBins::integers(1, 2));
    std::size_t ones = 0, twos = 0, total = 0;
    for (const auto& r : rows) {
      if (r.low < 1 && r.high > 1) ones = r.count;
      if (r.low < 2 && r.high > 2) twos = r.count;
      total += r.count;
    }
    CHECK(ones == 2);
    CHECK(twos == 1);
    CHECK(total == 3);
  }
  SUBCASE("empty values") {
    for (const auto& r : feature_histogram({}, HistogramBins::uniform(0, 1, 4))) CHECK(r.count == 0);
  }
  SUBCASE("conservation over 1000 counts") {
    rng::Engine e(1);
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(static_cast<double>(rng::binomial(e, 8, 0.4)));
    for (const char* spec : {"int", "int:2:5", "uniform:3", "edges:1,2.5,7", "uniform:4:-10:0"}) {
      std::size_t total = 0;
      for (const auto& r : feature_histogram(v, HistogramBins::parse(spec, v))) total += r.count;
      CHECK(total == 1000);
    }
  }
  SUBCASE("bad specs") {
    CHECK_THROWS(HistogramBins::parse("edges:3,2", {}));
    CHECK_THROWS(HistogramBins::parse("weird", {}));
  }
}
