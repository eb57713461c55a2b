#include "surveymon/textstats.h"

#include <algorithm>
#include <string_view>

#include <fmt/format.h>

#include "surveymon/utf8.h"

namespace surveymon::text {

namespace {

bool is_vowel(char32_t cp) {
  static constexpr std::u32string_view kVowels =
      U"aeiouyàáâãäåæèéêëìí"
      U"îïòóôõöøùúûüýÿ";
  return kVowels.find(cp) != std::u32string_view::npos;
}

bool is_consonant(char32_t cp) { return utf8::is_letter(cp) && !is_vowel(cp); }

bool is_sentence_end(char32_t cp) { return cp == U'.' || cp == U'?' || cp == U'!'; }

bool is_standard_punctuation(char32_t cp) {
  static constexpr std::u32string_view kAllowed = U".,?!'\"()-:;";
  return kAllowed.find(cp) != std::u32string_view::npos;
}

// Splits on whitespace, strips non-alphanumeric edges and folds case.
void append_tokens(std::u32string_view cps, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && !utf8::is_alnum(cps[lo])) ++lo;
    while (hi > lo && !utf8::is_alnum(cps[hi - 1])) --hi;
    if (lo < hi) {
      std::string token;
      for (std::size_t k = lo; k < hi; ++k) utf8::append(utf8::fold(cps[k]), token);
      out.push_back(std::move(token));
    }
    i = j;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  append_tokens(utf8::decode(text), tokens);
  return tokens;
}

std::size_t count_syllables(std::string_view word) {
  std::u32string cps = utf8::decode(word);
  for (auto& cp : cps) cp = utf8::fold(cp);

  std::size_t groups = 0;
  bool in_group = false;
  for (char32_t cp : cps) {
    const bool v = is_vowel(cp);
    if (v && !in_group) ++groups;
    in_group = v;
  }

  const std::size_t n = cps.size();
  if (n >= 2 && cps[n - 1] == U'e' && !is_vowel(cps[n - 2])) {
    const bool consonant_le = cps[n - 2] == U'l' && n >= 3 && is_consonant(cps[n - 3]);
    if (!consonant_le && groups > 0) --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

std::size_t count_sentences(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::size_t sentences = 0;
  std::size_t start = 0;
  std::vector<std::string> scratch;
  const auto close_segment = [&](std::size_t end) {
    scratch.clear();
    append_tokens(std::u32string_view(cps).substr(start, end - start), scratch);
    if (!scratch.empty()) ++sentences;
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_sentence_end(cps[i])) {
      close_segment(i);
      while (i < cps.size() && is_sentence_end(cps[i])) ++i;
      start = i;
    } else {
      ++i;
    }
  }
  close_segment(cps.size());
  return sentences;
}

TokenStats token_stats(std::string_view text) {
  TokenStats stats;
  const auto tokens = tokenize(text);
  stats.n_words = tokens.size();
  stats.word_lengths.reserve(tokens.size());
  for (const auto& t : tokens) {
    stats.word_lengths.push_back(utf8::length(t));
    stats.n_syllables += count_syllables(t);
  }
  stats.n_sentences = stats.n_words == 0 ? 0 : std::max<std::size_t>(count_sentences(text), 1);
  return stats;
}

double flesch_kincaid_grade(const TokenStats& stats) {
  if (stats.n_words == 0) throw TextError("flesch_kincaid_grade: text has no words");
  const double words = static_cast<double>(stats.n_words);
  const double sentences = static_cast<double>(std::max<std::size_t>(stats.n_sentences, 1));
  const double syllables = static_cast<double>(stats.n_syllables);
  return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
}

double flesch_kincaid_grade(std::string_view text) { return flesch_kincaid_grade(token_stats(text)); }

std::string_view order_name(NGramOrder order) {
  switch (order) {
    case NGramOrder::kUnigram:
      return "unigram";
    case NGramOrder::kBigram:
      return "bigram";
    case NGramOrder::kCharacter:
      return "character";
  }
  return "unknown";
}

void NGramDistribution::merge(const NGramDistribution& other) {
  if (other.order != order) {
    throw TextError(fmt::format("cannot merge {} and {} distributions", order_name(order),
                                order_name(other.order)));
  }
  for (const auto& [gram, count] : other.counts) counts[gram] += count;
  total += other.total;
}

NGramDistribution ngram_distribution(std::span<const std::string> texts, NGramOrder order) {
  NGramDistribution dist;
  dist.order = order;

  if (order == NGramOrder::kCharacter) {
    std::string joined;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (i > 0) joined.push_back(' ');
      joined += texts[i];
    }
    for (char32_t cp : utf8::decode(utf8::collapse_whitespace(joined))) {
      std::string key;
      utf8::append(utf8::fold(cp), key);
      ++dist.counts[key];
      ++dist.total;
    }
    return dist;
  }

  const std::size_t n = order == NGramOrder::kBigram ? 2 : 1;
  for (const auto& t : texts) {
    const auto tokens = tokenize(t);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        gram.push_back(' ');
        gram += tokens[i + k];
      }
      ++dist.counts[gram];
      ++dist.total;
    }
  }
  return dist;
}

double distinct_n(const NGramDistribution& dist) {
  if (dist.total == 0) throw TextError("distinct_n: empty distribution");
  return static_cast<double>(dist.counts.size()) / static_cast<double>(dist.total);
}

bool has_special_character(std::string_view text) {
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_alnum(cp) || utf8::is_space(cp) || is_standard_punctuation(cp)) continue;
    return true;
  }
  return false;
}

}  // namespace surveymon::text
