#include "surveymon/synth.h"

#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "surveymon/utf8.h"

namespace surveymon::synth {
namespace {

// Plain vocabulary, grouped loosely by length; no punctuation so the text
// statistics are driven only by the spec's length distributions.
constexpr const char* kWords[] = {
    "at",       "be",        "do",        "go",        "in",        "it",        "my",
    "on",       "or",        "so",        "to",        "up",        "we",        "us",
    "age",      "app",       "day",       "how",       "new",       "our",       "pay",
    "use",      "way",       "why",       "you",       "buy",       "fit",       "job",
    "area",     "best",      "care",      "cost",      "easy",      "fast",      "food",
    "help",     "home",      "item",      "long",      "meal",      "menu",      "shop",
    "site",     "size",      "team",      "time",      "tool",      "work",      "often",
    "brand",    "class",     "event",     "guest",     "price",     "order",     "staff",
    "store",    "style",     "usage",     "value",     "visit",     "local",     "clean",
    "travel",   "office",    "online",   "policy",    "health",    "rating",    "return",
    "income",   "budget",    "career",    "course",    "design",    "market",    "member",
    "feature",  "product",   "quality",   "service",   "support",   "website",   "payment",
    "account",  "benefit",   "channel",   "comfort",   "company",   "contact",   "program",
    "customer", "delivery",  "employee",  "training",  "platform",  "shopping",  "purchase",
    "schedule", "location",  "question",  "research",  "software",  "business",  "material",
    "checkout", "community", "education", "equipment", "frequency", "marketing", "interview",
    "recommend", "important", "satisfied", "wellbeing", "nutrition", "promotion", "knowledge",
    "experience", "department", "restaurant", "membership", "management", "technology",
    "preference", "percentage", "profession", "reputation", "convenience", "information",
    "environment", "performance", "subscription", "satisfaction", "organization", "availability",
    "communication", "accessibility", "affordability",
};

const std::map<std::size_t, std::vector<std::size_t>>& words_by_length() {
  static const auto table = [] {
    std::map<std::size_t, std::vector<std::size_t>> t;
    const auto& words = word_list();
    for (std::size_t i = 0; i < words.size(); ++i) t[words[i].size()].push_back(i);
    return t;
  }();
  return table;
}

/// A word whose length is the draw from `length`, clamped to the lengths
/// the list actually has.
const std::string& draw_word(rng::Engine& e, const IntDist& length) {
  const auto& table = words_by_length();
  const long want = length.sample(e);
  auto it = table.lower_bound(static_cast<std::size_t>(std::max(want, 0L)));
  if (it == table.end()) it = std::prev(table.end());
  const auto& bucket = it->second;
  return word_list()[bucket[rng::below(e, bucket.size())]];
}

std::string draw_words(rng::Engine& e, const IntDist& length, long n) {
  std::string out;
  for (long i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += draw_word(e, length);
  }
  return out;
}

std::string capitalised(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string prompt_text(rng::Engine& e, const GenSpec& spec) {
  const auto len = static_cast<std::size_t>(spec.prompt_length.sample(e));
  std::string text = "Create a survey about";
  while (text.size() < len) {
    text += ' ';
    text += draw_word(e, spec.word_length);
  }
  text.resize(len);
  // Keep the trimmed length equal to the drawn length.
  if (text.back() == ' ') text.back() = 's';
  return text;
}

std::string timestamp(std::size_t minutes_after_start) {
  using namespace std::chrono;
  const sys_days start = year{2023} / October / 1;
  const auto t = start + minutes{minutes_after_start};
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:00Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count());
}

survey::Question make_question(rng::Engine& e, const GenSpec& spec, const survey::QuestionType& type) {
  survey::Question q;
  q.type = type;
  q.text = capitalised(draw_words(e, spec.word_length, spec.words_per_question.sample(e))) + "?";
  if (survey::requires_options(type.tag())) {
    const long n = spec.options_per_question.sample(e);
    std::set<std::string> seen;
    for (long j = 0; j < n; ++j) {
      std::string opt;
      for (int attempt = 0; attempt < 16; ++attempt) {
        opt = capitalised(draw_words(e, spec.word_length, spec.option_words.sample(e)));
        if (!seen.count(opt)) break;
      }
      if (seen.count(opt)) opt += fmt::format(" {}", j + 1);
      seen.insert(opt);
      q.options.push_back(std::move(opt));
    }
  }
  return q;
}

corpus::CorpusRecord make_record(const GenSpec& spec, const std::vector<std::pair<survey::QuestionType, double>>& mixture,
                                 const std::vector<std::pair<survey::QuestionType, IntDist>>& extras,
                                 std::size_t i) {
  rng::Engine e(rng::derive(spec.seed, i));
  corpus::CorpusRecord r;
  r.id = fmt::format("{}-{:06}", spec.variant, i + 1);
  r.variant = spec.variant;
  r.language = "en";
  r.created_at = timestamp(i);
  r.user_prompt = prompt_text(e, spec);
  r.survey.title = "Survey about " + draw_words(e, spec.word_length, 2);

  auto& qs = r.survey.questions;
  const long n = spec.question_count.sample(e);
  for (long k = 0; k < n; ++k) {
    const double u = rng::uniform01(e);
    double acc = 0.0;
    const survey::QuestionType* chosen = &mixture.back().first;
    for (const auto& [type, p] : mixture) {
      acc += p;
      if (u < acc) {
        chosen = &type;
        break;
      }
    }
    qs.push_back(make_question(e, spec, *chosen));
  }
  for (const auto& [type, dist] : extras) {
    const long m = dist.sample(e);
    for (long k = 0; k < m; ++k) qs.push_back(make_question(e, spec, type));
  }
  rng::shuffle(std::span<survey::Question>(qs), e);

  if (!qs.empty() && rng::bernoulli(e, spec.special_char_rate)) {
    auto& q = qs[rng::below(e, qs.size())];
    q.text.insert(q.text.size() - 1, " & " + draw_word(e, spec.word_length));
  }
  return r;
}

void check_dist(const IntDist& d, long min_allowed, const char* name) {
  if (d.min() < min_allowed) {
    throw SpecError(fmt::format("{} must not go below {}", name, min_allowed));
  }
}

}  // namespace

IntDist IntDist::fixed(long k) {
  IntDist d;
  d.kind_ = Kind::kFixed;
  d.a_ = d.b_ = k;
  return d;
}

IntDist IntDist::uniform(long lo, long hi) {
  if (lo > hi) throw SpecError(fmt::format("uniform({}, {}) has lo > hi", lo, hi));
  IntDist d;
  d.kind_ = Kind::kUniform;
  d.a_ = lo;
  d.b_ = hi;
  return d;
}

IntDist IntDist::binomial(long n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw SpecError(fmt::format("binomial({}, {}) needs n >= 0 and p in [0, 1]", n, p));
  }
  IntDist d;
  d.kind_ = Kind::kBinomial;
  d.b_ = n;
  d.p_ = p;
  return d;
}

long IntDist::min() const { return a_; }
long IntDist::max() const { return b_; }

double IntDist::mean() const {
  switch (kind_) {
    case Kind::kFixed:
      return static_cast<double>(a_);
    case Kind::kUniform:
      return (static_cast<double>(a_) + static_cast<double>(b_)) / 2.0;
    case Kind::kBinomial:
      return static_cast<double>(b_) * p_;
  }
  return 0.0;
}

double IntDist::variance() const {
  switch (kind_) {
    case Kind::kFixed:
      return 0.0;
    case Kind::kUniform: {
      const double w = static_cast<double>(b_ - a_ + 1);
      return (w * w - 1.0) / 12.0;
    }
    case Kind::kBinomial:
      return static_cast<double>(b_) * p_ * (1.0 - p_);
  }
  return 0.0;
}

long IntDist::sample(rng::Engine& e) const {
  switch (kind_) {
    case Kind::kFixed:
      return a_;
    case Kind::kUniform:
      return rng::between(e, a_, b_);
    case Kind::kBinomial:
      return rng::binomial(e, b_, p_);
  }
  return a_;
}

IntDist IntDist::from_json(const nlohmann::json& j) {
  try {
    if (j.is_number_integer()) return fixed(j.get<long>());
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "fixed") return fixed(j.at("k").get<long>());
    if (kind == "uniform") return uniform(j.at("lo").get<long>(), j.at("hi").get<long>());
    if (kind == "binomial") return binomial(j.at("n").get<long>(), j.at("p").get<double>());
    throw SpecError(fmt::format("unknown distribution kind '{}'", kind));
  } catch (const nlohmann::json::exception& ex) {
    throw SpecError(fmt::format("bad distribution {}: {}", j.dump(), ex.what()));
  }
}

nlohmann::ordered_json IntDist::to_json() const {
  switch (kind_) {
    case Kind::kFixed:
      return {{"kind", "fixed"}, {"k", a_}};
    case Kind::kUniform:
      return {{"kind", "uniform"}, {"lo", a_}, {"hi", b_}};
    case Kind::kBinomial:
      return {{"kind", "binomial"}, {"n", b_}, {"p", p_}};
  }
  return {};
}

void GenSpec::check() const {
  if (variant.empty()) throw SpecError("variant must not be empty");
  check_dist(question_count, 0, "question_count");
  long min_questions = question_count.min();
  for (const auto& [name, dist] : type_counts) {
    if (name.empty()) throw SpecError("type_counts has an empty type name");
    check_dist(dist, 0, "type_counts");
    min_questions += dist.min();
  }
  if (min_questions < 1) throw SpecError("every survey needs at least one question");

  if (type_mixture.empty()) throw SpecError("type_mixture must not be empty");
  double total = 0.0;
  for (const auto& [name, p] : type_mixture) {
    if (name.empty()) throw SpecError("type_mixture has an empty type name");
    if (!(p >= 0.0 && p <= 1.0)) throw SpecError(fmt::format("type_mixture['{}'] = {} is not a probability", name, p));
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw SpecError(fmt::format("type_mixture sums to {}, not 1", total));

  check_dist(words_per_question, 1, "words_per_question");
  check_dist(options_per_question, 2, "options_per_question");
  check_dist(option_words, 1, "option_words");
  check_dist(word_length, 1, "word_length");
  check_dist(prompt_length, 1, "prompt_length");
  if (!(special_char_rate >= 0.0 && special_char_rate <= 1.0)) {
    throw SpecError("special_char_rate must lie in [0, 1]");
  }
}

GenSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("generator spec must be a JSON object");
  GenSpec s;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n_records") {
        s.n_records = v.get<std::size_t>();
      } else if (key == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (key == "variant") {
        s.variant = v.get<std::string>();
      } else if (key == "question_count") {
        s.question_count = IntDist::from_json(v);
      } else if (key == "type_mixture") {
        s.type_mixture = v.get<std::map<std::string, double>>();
      } else if (key == "type_counts") {
        s.type_counts.clear();
        for (const auto& [name, d] : v.items()) s.type_counts[name] = IntDist::from_json(d);
      } else if (key == "words_per_question") {
        s.words_per_question = IntDist::from_json(v);
      } else if (key == "options_per_question") {
        s.options_per_question = IntDist::from_json(v);
      } else if (key == "option_words") {
        s.option_words = IntDist::from_json(v);
      } else if (key == "word_length") {
        s.word_length = IntDist::from_json(v);
      } else if (key == "prompt_length") {
        s.prompt_length = IntDist::from_json(v);
      } else if (key == "special_char_rate") {
        s.special_char_rate = v.get<double>();
      } else {
        throw SpecError(fmt::format("unknown generator spec key '{}'", key));
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw SpecError(fmt::format("bad generator spec: {}", ex.what()));
  }
  s.check();
  return s;
}

nlohmann::ordered_json to_json(const GenSpec& spec) {
  nlohmann::ordered_json j;
  j["n_records"] = spec.n_records;
  j["seed"] = spec.seed;
  j["variant"] = spec.variant;
  j["question_count"] = spec.question_count.to_json();
  j["type_mixture"] = spec.type_mixture;
  auto& counts = j["type_counts"] = nlohmann::ordered_json::object();
  for (const auto& [name, d] : spec.type_counts) counts[name] = d.to_json();
  j["words_per_question"] = spec.words_per_question.to_json();
  j["options_per_question"] = spec.options_per_question.to_json();
  j["option_words"] = spec.option_words.to_json();
  j["word_length"] = spec.word_length.to_json();
  j["prompt_length"] = spec.prompt_length.to_json();
  j["special_char_rate"] = spec.special_char_rate;
  return j;
}

std::vector<corpus::CorpusRecord> generate(const GenSpec& spec) {
  spec.check();
  std::vector<std::pair<survey::QuestionType, double>> mixture;
  for (const auto& [name, p] : spec.type_mixture) {
    if (p > 0.0) mixture.emplace_back(survey::QuestionType::from_wire(name), p);
  }
  std::vector<std::pair<survey::QuestionType, IntDist>> extras;
  for (const auto& [name, d] : spec.type_counts) extras.emplace_back(survey::QuestionType::from_wire(name), d);

  std::vector<corpus::CorpusRecord> out;
  out.reserve(spec.n_records);
  for (std::size_t i = 0; i < spec.n_records; ++i) out.push_back(make_record(spec, mixture, extras, i));
  return out;
}

const std::vector<std::string>& word_list() {
  static const std::vector<std::string> words(std::begin(kWords), std::end(kWords));
  return words;
}

}  // namespace surveymon::synth
