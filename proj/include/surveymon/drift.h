#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/features.h"
#include "surveymon/textstats.h"

namespace surveymon::drift {

class DriftError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Population Stability Index:  sum_i (actual_i - expected_i) * ln(actual_i / expected_i).
///
/// Both vectors must have the same length (>= 2), sum to 1 within 1e-9 and
/// be strictly positive; smoothing is the caller's job. The result is >= 0,
/// exactly symmetric in its arguments and exactly 0 for equal vectors.
double psi(std::span<const double> expected, std::span<const double> actual);

enum class BinKind { kInteger, kQuantile, kCategorical };

std::string_view bin_kind_name(BinKind kind);

/// Binning knobs for scalar features.
struct BinConfig {
  std::size_t max_distinct = 20;  // integer bins when the baseline has at most this many values
  std::size_t quantile_bins = 10;
  double epsilon = 1e-4;          // added to every bin mass before renormalising

  void check() const;
};

struct Binned {
  BinKind kind = BinKind::kInteger;
  std::vector<double> expected;  // smoothed baseline probabilities
  std::vector<double> actual;    // smoothed candidate probabilities
  /// Integer/categorical: the category values. Quantile: the inner edges;
  /// bin i covers (edge[i-1], edge[i]] with open ends.
  std::vector<double> points;

  std::size_t size() const { return expected.size(); }
  std::string summary() const;
};

/// Adds `epsilon` to every mass and renormalises.
std::vector<double> smooth(std::span<const double> mass, double epsilon);

/// Bins both slices with identical bins derived from the baseline.
///
/// Integer bins (one per value seen in either slice) are used when every
/// baseline value is an integer and there are at most max_distinct of them;
/// otherwise quantile edges are taken from the baseline (linear
/// interpolation, duplicate edges collapsed). Throws DriftError on an empty
/// baseline or non-finite values.
Binned bin_values(std::span<const double> baseline, std::span<const double> candidate,
                  const BinConfig& cfg);

/// Boolean features: two fixed categories {0, 1}.
Binned bin_boolean(std::span<const double> baseline, std::span<const double> candidate,
                   double epsilon);

/// PSI of binned slices. A single bin holds all mass on both sides and
/// scores 0.
double binned_psi(const Binned& b);

/// PSI over the top_k most frequent baseline grams (ties broken
/// lexicographically) plus one OTHER bucket holding the rest of both slices.
double distribution_psi(const text::NGramDistribution& baseline,
                        const text::NGramDistribution& candidate, std::size_t top_k,
                        double epsilon = 1e-4);

enum class Status { kPass, kModerate, kFail };

std::string_view status_name(Status s);

struct Thresholds {
  double moderate = 0.1;  // psi < moderate -> pass
  double fail = 0.2;      // psi >= fail -> fail

  Status classify(double psi) const;
};

struct DriftConfig {
  Thresholds thresholds;
  BinConfig bins;
  std::size_t top_k = 500;

  void check() const;
};

DriftConfig drift_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const DriftConfig& cfg);

struct PsiResult {
  std::string feature;
  double psi = 0.0;
  Status status = Status::kPass;
  std::string bins_used;
};

struct DriftReport {
  std::string baseline_variant;
  std::string candidate_variant;
  DriftConfig config;
  std::vector<PsiResult> results;
  std::size_t n_fail = 0;
  std::size_t n_pass = 0;  // pass + moderate
  std::string max_feature;

  const PsiResult* find(std::string_view feature) const;
};

/// Row names of the three distribution comparisons.
inline constexpr std::string_view kUnigramRow = "drift:unigrams_distribution";
inline constexpr std::string_view kBigramRow = "drift:bigrams_distribution";
inline constexpr std::string_view kCharacterRow = "drift:characters_distribution";

/// One row per exported scalar feature, then unigram, bigram and character
/// distribution rows. Throws DriftError when either slice is empty.
DriftReport run_drift(const features::CorpusFeatures& baseline,
                      const features::CorpusFeatures& candidate, const DriftConfig& cfg,
                      std::string baseline_label = "baseline",
                      std::string candidate_label = "candidate");

nlohmann::ordered_json to_json(const DriftReport& report);

/// PSI rendered with three decimals; values below 1e-6 print as 0.000.
std::string format_psi(double psi);

/// Per-feature table with status column and FAIL/PASS totals.
std::string format_table(const DriftReport& report);

/// Feature x comparison matrix of PSI values followed by one FAIL/PASS line
/// per comparison. `only_failed` keeps rows that failed somewhere. The
/// largest PSI in each column is marked with '*'.
std::string format_comparison_table(std::span<const DriftReport> reports, bool only_failed);

}  // namespace surveymon::drift
