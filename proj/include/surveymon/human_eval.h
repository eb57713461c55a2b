#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/checked.h"

namespace surveymon::human_eval {

/// Expert checklist items, each scored 0 (poor), 1 (acceptable) or 2 (good).
enum class MetricId {
  kQuestionTextQuality,
  kAnswerOptions,
  kBiasCheck,
  kMissingQuestions,
  kRelevanceToPrompt,
  kQuestionVariety,
};

inline constexpr std::size_t kNumMetrics = 6;
inline constexpr std::array<MetricId, kNumMetrics> kAllMetrics{
    MetricId::kQuestionTextQuality, MetricId::kAnswerOptions,     MetricId::kBiasCheck,
    MetricId::kMissingQuestions,    MetricId::kRelevanceToPrompt, MetricId::kQuestionVariety,
};

enum class Level { kQuestion, kSurvey };

std::string_view metric_name(MetricId m);
std::optional<MetricId> metric_from_name(std::string_view name);
Level metric_level(MetricId m);
std::string_view level_name(Level l);

struct EvalRecord {
  std::string survey_id;
  std::string variant;
  std::string rater_id;
  std::array<int, kNumMetrics> scores{};  // indexed by MetricId
  std::string note;

  int score(MetricId m) const { return scores[static_cast<std::size_t>(m)]; }
};

struct EvalIssue {
  std::string path;
  std::string message;
};

/// Accepts {survey_id, variant, rater_id, scores: {metric: 0|1|2}, note?}.
Checked<EvalRecord, EvalIssue> validate_eval(const nlohmann::json& raw);

/// Reads evaluation records from CSV (survey_id, variant, rater_id, the six
/// metric columns, note) or JSONL. Lines that fail validation are returned
/// as issues with a "line N" path prefix.
struct EvalLoad {
  std::vector<EvalRecord> records;
  std::vector<EvalIssue> issues;
};
EvalLoad read_evals_csv(std::istream& in);
EvalLoad read_evals_jsonl(std::istream& in);

struct MetricSummary {
  std::array<std::size_t, 3> distribution{};  // counts of scores 0, 1, 2

  std::size_t n() const { return distribution[0] + distribution[1] + distribution[2]; }
  double mean() const;
};

struct VariantSummary {
  std::size_t n_records = 0;
  std::array<MetricSummary, kNumMetrics> metrics{};

  const MetricSummary& metric(MetricId m) const { return metrics[static_cast<std::size_t>(m)]; }
  friend bool operator==(const VariantSummary& a, const VariantSummary& b) {
    if (a.n_records != b.n_records) return false;
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      if (a.metrics[i].distribution != b.metrics[i].distribution) return false;
    }
    return true;
  }
};

/// Variant label -> summary, ordered by label.
using EvalSummary = std::map<std::string, VariantSummary>;

EvalSummary summarize_evals(const std::vector<EvalRecord>& records);

/// Combines summaries of disjoint record sets.
EvalSummary merge(const EvalSummary& a, const EvalSummary& b);

struct MetricDelta {
  MetricId metric;
  double mean_a;
  double mean_b;
  double delta;  // mean_b - mean_a
  std::size_t n_a;
  std::size_t n_b;
};

/// Per-metric mean differences. Throws std::invalid_argument when a block
/// has no scores for some metric.
std::vector<MetricDelta> compare_variants(const VariantSummary& a, const VariantSummary& b);

nlohmann::ordered_json to_json(const EvalSummary& s);
nlohmann::ordered_json to_json(const std::vector<MetricDelta>& deltas, std::string_view a,
                               std::string_view b);
std::string format_table(const EvalSummary& s);
std::string format_table(const std::vector<MetricDelta>& deltas, std::string_view a,
                         std::string_view b);

}  // namespace surveymon::human_eval
