#include <doctest.h>

#include <sstream>

#include "surveymon/human_eval.h"
#include "surveymon/random.h"

using namespace surveymon::human_eval;
using nlohmann::json;

namespace {

json raw(const std::string& survey, const std::string& variant, std::array<int, kNumMetrics> scores) {
  json j{{"survey_id", survey}, {"variant", variant}, {"rater_id", "r1"}};
  for (std::size_t i = 0; i < kNumMetrics; ++i) j["scores"][std::string(metric_name(kAllMetrics[i]))] = scores[i];
  return j;
}

EvalRecord rec(const std::string& survey, const std::string& variant, std::array<int, kNumMetrics> scores) {
  return validate_eval(raw(survey, variant, scores)).value();
}

bool mentions(const std::vector<EvalIssue>& issues, std::string_view text) {
  for (const auto& i : issues) {
    if (i.message.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("metric catalogue") {
  CHECK(kAllMetrics.size() == 6);
  CHECK(metric_level(MetricId::kQuestionTextQuality) == Level::kQuestion);
  CHECK(metric_level(MetricId::kBiasCheck) == Level::kQuestion);
  CHECK(metric_level(MetricId::kMissingQuestions) == Level::kSurvey);
  CHECK(metric_level(MetricId::kQuestionVariety) == Level::kSurvey);
  for (auto m : kAllMetrics) CHECK(metric_from_name(metric_name(m)) == m);
  CHECK_FALSE(metric_from_name("fluency").has_value());
}

TEST_CASE("validation") {
  CHECK(validate_eval(raw("s", "A", {0, 1, 2, 2, 1, 0})).ok());

  auto bad = raw("s", "A", {0, 1, 3, 2, 1, 0});
  auto r = validate_eval(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(mentions(r.issues(), "out of range"));
  CHECK(r.issues()[0].path == "/scores/bias_check");

  bad = raw("s", "A", {0, 1, 2, 2, 1, 0});
  bad["scores"].erase("question_variety");
  r = validate_eval(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(mentions(r.issues(), "missing metric"));

  bad = raw("s", "A", {0, 1, 2, 2, 1, 0});
  bad["scores"]["fluency"] = 1;
  CHECK_FALSE(validate_eval(bad).ok());

  bad = raw("s", "A", {0, 1, 2, 2, 1, 0});
  bad["scores"]["bias_check"] = 1.5;
  CHECK_FALSE(validate_eval(bad).ok());
}

TEST_CASE("summaries") {
  SUBCASE("two records") {
    const auto s = summarize_evals({rec("a", "A", {1, 1, 2, 1, 1, 1}), rec("b", "A", {1, 1, 0, 1, 1, 1})});
    const auto& m = s.at("A").metric(MetricId::kBiasCheck);
    CHECK(m.mean() == 1.0);
    CHECK(m.distribution == std::array<std::size_t, 3>{1, 0, 1});
  }
  SUBCASE("one record") {
    const auto s = summarize_evals({rec("a", "A", {0, 1, 2, 2, 1, 0})});
    const auto& v = s.at("A");
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      CHECK(v.metrics[i].mean() == std::array<double, 6>{0, 1, 2, 2, 1, 0}[i]);
    }
  }
  SUBCASE("empty") { CHECK(summarize_evals({}).empty()); }
}

TEST_CASE("summary of a disjoint union equals the merge of summaries") {
  surveymon::rng::Engine e(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EvalRecord> a, b, all;
    const auto n = surveymon::rng::below(e, 20);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<int, kNumMetrics> sc{};
      for (auto& x : sc) x = static_cast<int>(surveymon::rng::below(e, 3));
      const std::string variant = surveymon::rng::bernoulli(e, 0.5) ? "V1" : "V2";
      const auto r = rec("s" + std::to_string(i), variant, sc);
      (surveymon::rng::bernoulli(e, 0.5) ? a : b).push_back(r);
      all.push_back(r);
    }
    const auto merged = merge(summarize_evals(a), summarize_evals(b));
    CHECK(merged == summarize_evals(all));
    for (const auto& [variant, vs] : merged) {
      for (const auto& m : vs.metrics) {
        CHECK(m.n() == vs.n_records);
        CHECK(m.mean() >= 0.0);
        CHECK(m.mean() <= 2.0);
      }
    }
  }
}

TEST_CASE("variant comparison") {
  const auto a = summarize_evals({rec("1", "A", {1, 1, 1, 1, 1, 1}), rec("2", "A", {2, 0, 1, 1, 1, 1})});
  SUBCASE("identical blocks") {
    for (const auto& d : compare_variants(a.at("A"), a.at("A"))) CHECK(d.delta == 0.0);
  }
  SUBCASE("one metric up by one") {
    const auto b = summarize_evals({rec("1", "B", {1, 1, 2, 1, 1, 1}), rec("2", "B", {2, 0, 2, 1, 1, 1})});
    for (const auto& d : compare_variants(a.at("A"), b.at("B"))) {
      CHECK(d.delta == (d.metric == MetricId::kBiasCheck ? 1.0 : 0.0));
    }
  }
  SUBCASE("mixed fixture by hand") {
    const auto b = summarize_evals({rec("1", "B", {0, 2, 2, 0, 1, 2}), rec("2", "B", {0, 2, 1, 2, 2, 2}),
                                    rec("3", "B", {1, 2, 0, 1, 0, 2})});
    // A means: 1.5 0.5 1 1 1 1. B means: 1/3 2 1 1 1 2.
    const std::array<double, 6> hand{1.0 / 3.0 - 1.5, 1.5, 0.0, 0.0, 0.0, 1.0};
    const auto deltas = compare_variants(a.at("A"), b.at("B"));
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      CHECK(std::abs(deltas[i].delta - hand[i]) < 1e-12);
      CHECK(deltas[i].n_a == 2);
      CHECK(deltas[i].n_b == 3);
    }
  }
  SUBCASE("an empty block has no means") { CHECK_THROWS(compare_variants(a.at("A"), VariantSummary{})); }
}

TEST_CASE("csv and jsonl readers") {
  std::istringstream csv(
      "survey_id,variant,rater_id,question_text_quality,answer_options,bias_check,missing_questions,"
      "relevance_to_prompt,question_variety,note\n"
      "s1,A,r1,2,2,1,1,2,1,fine\n"
      "s2,A,r1,2,2,3,1,2,1,\n"
      "s3,B,r2,0,0,0,0,0,0,\"odd, wording\"\n");
  const auto load = read_evals_csv(csv);
  CHECK(load.records.size() == 2);
  REQUIRE(load.issues.size() == 1);
  CHECK(load.issues[0].path.find("line 3") != std::string::npos);
  CHECK(load.records[1].note == "odd, wording");

  std::istringstream bad_header("survey_id,variant,question_text_quality\n");
  CHECK_FALSE(read_evals_csv(bad_header).issues.empty());

  std::istringstream jsonl(raw("s1", "A", {1, 1, 1, 1, 1, 1}).dump() + "\n\nnot json\n");
  const auto jl = read_evals_jsonl(jsonl);
  CHECK(jl.records.size() == 1);
  CHECK(jl.issues.size() == 1);
}

TEST_CASE("summary output is ordered and complete") {
  const auto s = summarize_evals({rec("1", "B", {1, 1, 1, 1, 1, 1}), rec("2", "A", {2, 2, 2, 2, 2, 2})});
  const auto j = to_json(s);
  CHECK(j.begin().key() == "A");
  CHECK(format_table(s).find("question_variety") != std::string::npos);
}
