#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/corpus.h"
#include "surveymon/random.h"

namespace surveymon::synth {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integer distribution: fixed(k), uniform(lo, hi) inclusive, or binomial(n, p).
class IntDist {
 public:
  enum class Kind { kFixed, kUniform, kBinomial };

  IntDist() = default;
  static IntDist fixed(long k);
  static IntDist uniform(long lo, long hi);
  static IntDist binomial(long n, double p);

  Kind kind() const { return kind_; }
  long min() const;
  long max() const;
  double mean() const;
  double variance() const;
  long sample(rng::Engine& e) const;

  /// {"kind": "fixed", "k": 5}, {"kind": "uniform", "lo": 1, "hi": 4},
  /// {"kind": "binomial", "n": 8, "p": 0.25}, or a bare integer for fixed.
  static IntDist from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  friend bool operator==(const IntDist&, const IntDist&) = default;

 private:
  Kind kind_ = Kind::kFixed;
  long a_ = 0;
  long b_ = 0;
  double p_ = 0.0;
};

struct GenSpec {
  std::size_t n_records = 100;
  std::uint64_t seed = 0;
  std::string variant = "synth";

  /// Questions drawn from type_mixture.
  IntDist question_count = IntDist::uniform(5, 12);
  /// Probability per type wire name; unknown names become other(label).
  std::map<std::string, double> type_mixture{{"open_ended", 0.3},  {"single_choice", 0.3},
                                             {"multiple_selection", 0.2}, {"star_rating", 0.1},
                                             {"nps", 0.05},       {"contact_info", 0.05}};
  /// Extra questions of a given type added on top of question_count, so one
  /// type's count can be shifted while the rest stay put.
  std::map<std::string, IntDist> type_counts;

  IntDist words_per_question = IntDist::uniform(6, 14);
  IntDist options_per_question = IntDist::uniform(2, 5);  // choice types only
  IntDist option_words = IntDist::uniform(1, 3);
  IntDist word_length = IntDist::uniform(2, 9);           // letters per word
  IntDist prompt_length = IntDist::uniform(200, 500);     // characters
  double special_char_rate = 0.0;                          // per record

  /// Throws SpecError on an ill-formed distribution or mixture.
  void check() const;
};

/// Rejects unknown keys; missing keys keep their defaults.
GenSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const GenSpec& spec);

/// Seed-deterministic; record i draws from its own engine seeded with
/// derive(seed, i). Ids are "<variant>-000001", ...; timestamps start at
/// 2023-10-01T00:00:00Z and advance one minute per record.
std::vector<corpus::CorpusRecord> generate(const GenSpec& spec);

/// The bundled word list.
const std::vector<std::string>& word_list();

}  // namespace surveymon::synth
