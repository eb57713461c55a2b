#include <doctest.h>

#include <cmath>
#include <set>

#include "surveymon/corpus.h"
#include "surveymon/synth.h"
#include "surveymon/utf8.h"

using namespace surveymon;
using namespace surveymon::synth;
using survey::QuestionTag;

TEST_CASE("int distributions") {
  CHECK(IntDist::fixed(5).mean() == 5.0);
  CHECK(IntDist::fixed(5).variance() == 0.0);
  CHECK(IntDist::uniform(3, 6).mean() == 4.5);
  // Discrete uniform on 4 points: (4^2 - 1) / 12.
  CHECK(IntDist::uniform(3, 6).variance() == 15.0 / 12.0);
  CHECK(IntDist::binomial(8, 0.25).mean() == 2.0);
  CHECK(IntDist::binomial(8, 0.25).variance() == 1.5);
  CHECK(IntDist::binomial(8, 0.25).max() == 8);

  rng::Engine e(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = IntDist::uniform(3, 6).sample(e);
    CHECK(v >= 3);
    CHECK(v <= 6);
  }
  CHECK(IntDist::from_json(7) == IntDist::fixed(7));
  CHECK(IntDist::from_json(IntDist::binomial(4, 0.5).to_json()) == IntDist::binomial(4, 0.5));
  CHECK_THROWS_AS(IntDist::uniform(4, 3), SpecError);
  CHECK_THROWS_AS(IntDist::binomial(4, 1.5), SpecError);
  CHECK_THROWS_AS(IntDist::from_json(nlohmann::json{{"kind", "poisson"}}), SpecError);
}

TEST_CASE("fixed question count") {
  GenSpec spec;
  spec.question_count = IntDist::fixed(5);
  const auto rs = generate(spec);
  CHECK(rs.size() == 100);
  for (const auto& r : rs) CHECK(r.survey.questions.size() == 5);
}

TEST_CASE("same seed gives identical corpora") {
  GenSpec spec;
  spec.n_records = 50;
  spec.seed = 77;
  spec.special_char_rate = 0.3;
  std::string a, b;
  for (const auto& r : generate(spec)) a += corpus::serialize_record(r) + "\n";
  for (const auto& r : generate(spec)) b += corpus::serialize_record(r) + "\n";
  CHECK(a == b);
  spec.seed = 78;
  std::string c;
  for (const auto& r : generate(spec)) c += corpus::serialize_record(r) + "\n";
  CHECK(a != c);
}

TEST_CASE("degenerate mixture") {
  GenSpec spec;
  spec.type_mixture = {{"multiple_selection", 1.0}};
  for (const auto& r : generate(spec)) {
    for (const auto& q : r.survey.questions) {
      CHECK(q.type.tag() == QuestionTag::kMultipleSelection);
      CHECK(q.options.size() >= 2);
    }
  }
}

TEST_CASE("records are well formed") {
  GenSpec spec;
  spec.n_records = 300;
  spec.special_char_rate = 0.5;
  spec.type_mixture = {{"open_ended", 0.2}, {"single_choice", 0.2}, {"matrix", 0.2}, {"star_rating", 0.4}};
  spec.type_counts = {{"nps", IntDist::binomial(3, 0.5)}};
  std::set<std::string> ids;
  for (const auto& r : generate(spec)) {
    const auto line = corpus::serialize_record(r);
    const auto back = corpus::parse_record(line);
    REQUIRE(back.ok());
    CHECK(corpus::serialize_record(back.value()) == line);
    CHECK(survey::validate(r.survey).empty());
    CHECK(ids.insert(r.id).second);
    CHECK(r.language == "en");
    CHECK_FALSE(r.pii_flagged);
    const auto len = utf8::length(r.user_prompt);
    CHECK(len >= 200);
    CHECK(len <= 500);
    for (const auto& q : r.survey.questions) {
      std::set<std::string> opts(q.options.begin(), q.options.end());
      CHECK(opts.size() == q.options.size());
    }
  }
}

TEST_CASE("ids and timestamps") {
  GenSpec spec;
  spec.n_records = 2;
  spec.variant = "V1";
  const auto rs = generate(spec);
  CHECK(rs[0].id == "V1-000001");
  CHECK(rs[1].id == "V1-000002");
  CHECK(rs[0].created_at == "2023-10-01T00:00:00Z");
  CHECK(rs[1].created_at == "2023-10-01T00:01:00Z");
}

TEST_CASE("exact prompt length") {
  GenSpec spec;
  spec.n_records = 50;
  for (long n : {1L, 23L, 200L, 777L}) {
    spec.prompt_length = IntDist::fixed(n);
    for (const auto& r : generate(spec)) CHECK(utf8::length(r.user_prompt) == static_cast<std::size_t>(n));
  }
}

TEST_CASE("question count mean within three standard errors") {
  GenSpec spec;
  spec.n_records = 2000;
  spec.seed = 5;
  // One fixed extra question keeps the zero draw legal.
  spec.type_counts = {{"nps", IntDist::fixed(1)}};
  for (const auto& dist : {IntDist::uniform(3, 12), IntDist::binomial(20, 0.3)}) {
    spec.question_count = dist;
    double sum = 0.0;
    for (const auto& r : generate(spec)) sum += static_cast<double>(r.survey.questions.size());
    const double n = static_cast<double>(spec.n_records);
    const double se = std::sqrt(dist.variance() / n);
    CHECK(std::abs(sum / n - 1.0 - dist.mean()) < 3.0 * se);
  }
}

TEST_CASE("per-type frequencies within three standard errors") {
  GenSpec spec;
  spec.n_records = 1000;
  spec.seed = 9;
  spec.question_count = IntDist::fixed(4);
  const auto rs = generate(spec);
  std::map<QuestionTag, double> counts;
  double total = 0.0;
  for (const auto& r : rs) {
    for (const auto& q : r.survey.questions) {
      counts[q.type.tag()] += 1.0;
      total += 1.0;
    }
  }
  for (const auto& [name, p] : spec.type_mixture) {
    const auto tag = survey::QuestionType::from_wire(name).tag();
    const double se = std::sqrt(p * (1 - p) / total);
    CAPTURE(name);
    CHECK(std::abs(counts[tag] / total - p) < 3.0 * se);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(spec_from_json({{"n_records", 10}, {"colour", "red"}}), SpecError);
  CHECK_THROWS_AS(spec_from_json({{"type_mixture", {{"open_ended", 0.5}}}}), SpecError);
  CHECK_THROWS_AS(spec_from_json({{"options_per_question", 1}}), SpecError);
  CHECK_THROWS_AS(spec_from_json({{"question_count", 0}}), SpecError);
  CHECK_NOTHROW(spec_from_json({{"question_count", 0}, {"type_counts", {{"nps", 2}}}}));
  CHECK_THROWS_AS(spec_from_json({{"special_char_rate", 2.0}}), SpecError);

  GenSpec spec;
  spec.type_counts = {{"nps", IntDist::fixed(1)}};
  const auto back = spec_from_json(nlohmann::json::parse(to_json(spec).dump()));
  CHECK(to_json(back) == to_json(spec));
}

TEST_CASE("word list") {
  const auto& words = word_list();
  CHECK(words.size() >= 100);
  for (const auto& w : words) CHECK_FALSE(w.empty());
}
