#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace surveymon::text {

class TextError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lower-cased word tokens. Splits on whitespace and strips leading/trailing
/// characters that are neither letters nor digits, so "state-of-the-art,"
/// becomes "state-of-the-art". Tokens that are pure punctuation vanish.
std::vector<std::string> tokenize(std::string_view text);

/// Vowel-group syllable estimate (a e i o u y), minus one for a silent
/// trailing "e" unless the word ends in consonant + "le"; never below 1.
std::size_t count_syllables(std::string_view word);

/// Sentences are runs of text ended by one or more of . ? ! that contain at
/// least one word; a text with words always has at least one sentence.
std::size_t count_sentences(std::string_view text);

struct TokenStats {
  std::size_t n_words = 0;
  std::size_t n_sentences = 0;
  std::size_t n_syllables = 0;
  std::vector<std::size_t> word_lengths;  // in Unicode scalar values
};

TokenStats token_stats(std::string_view text);

/// Flesch-Kincaid grade level:
///   0.39 * words/sentences + 11.8 * syllables/words - 15.59
/// Throws TextError when the text has no words.
double flesch_kincaid_grade(std::string_view text);
double flesch_kincaid_grade(const TokenStats& stats);

enum class NGramOrder { kUnigram = 1, kBigram = 2, kCharacter = 0 };

std::string_view order_name(NGramOrder order);

struct NGramDistribution {
  NGramOrder order = NGramOrder::kUnigram;
  std::map<std::string, std::uint64_t> counts;  // word grams are space-joined
  std::uint64_t total = 0;

  /// Pools `other` into this distribution. Orders must match.
  void merge(const NGramDistribution& other);

  friend bool operator==(const NGramDistribution&, const NGramDistribution&) = default;
};

/// Word grams are counted per text and never span two texts. Character
/// grams run over the texts joined by single spaces, case-folded, with
/// whitespace runs collapsed to one space.
NGramDistribution ngram_distribution(std::span<const std::string> texts, NGramOrder order);

/// Unique grams / total grams. Throws TextError for an empty distribution.
double distinct_n(const NGramDistribution& dist);

/// True iff some character is not a letter, digit, whitespace or one of
/// . , ? ! ' " ( ) - : ;
bool has_special_character(std::string_view text);

}  // namespace surveymon::text
