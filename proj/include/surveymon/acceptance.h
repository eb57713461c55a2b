#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveymon/corpus.h"
#include "surveymon/features.h"

namespace surveymon::acceptance {

class AcceptanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Whether the user kept the generated survey. Restarting with a new prompt
/// and leaving both count as kNotAccept.
enum class Label { kNotAccept = 0, kAccept = 1 };

std::string_view label_name(Label l);
/// "accept", "not_accept", "restart" and "drop_out".
std::optional<Label> parse_outcome(std::string_view text);

/// Bumped whenever the column layout changes.
inline constexpr int kDatasetSchemaVersion = 1;

struct LabeledExample {
  std::string id;
  std::vector<double> x;
  Label y = Label::kNotAccept;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<LabeledExample> examples;

  std::size_t feature(std::string_view name) const;  // throws when unknown
  std::size_t count(Label l) const;
};

struct Profile {
  std::string industry;
  std::string job_role;
};

struct DatasetOptions {
  /// Adds one-hot industry and job-role columns, each with an "unknown"
  /// category for values outside the vocabulary or missing profiles.
  bool include_profile = false;
  std::vector<std::string> industries;
  std::vector<std::string> job_roles;
  std::map<std::string, Profile> profiles;  // by record id
};

/// Columns: prompt_char_length, prompt_word_count, the survey features,
/// then optional profile one-hots. Throws AcceptanceError when a record
/// has no outcome.
Dataset build_dataset(const std::vector<corpus::CorpusRecord>& records,
                      const std::map<std::string, Label>& outcomes,
                      const DatasetOptions& opts = {});

/// Reads "id,outcome" CSV.
std::map<std::string, Label> read_outcomes_csv(std::istream& in);

std::string dataset_csv(const Dataset& d);
Dataset read_dataset_csv(std::istream& in);

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> test;
  std::vector<std::size_t> train_index;  // positions in the input, ascending
  std::vector<std::size_t> test_index;
};

/// Each class contributes round(fraction * class_size) training examples,
/// clamped to [1, class_size - 1], then nudged toward its ideal by at most
/// one per class so the training set has round(fraction * n) examples
/// overall when that is reachable. Throws when a class has fewer than two
/// examples.
Split stratified_split(std::span<const LabeledExample> data, const SplitConfig& cfg);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;  // recorded for provenance; full-batch descent draws nothing
};

/// Logistic regression over standardised features.
struct LinearModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // on standardised features
  double bias = 0.0;
  std::vector<double> means;    // from the training set only
  std::vector<double> scales;   // population std, 1 where a column is constant
  TrainConfig config;
  std::vector<double> loss_history;  // per epoch, before the update

  double predict_proba(std::span<const double> x) const;
  Label predict(std::span<const double> x) const;
};

/// Minimises mean logistic loss + l2/2 * |w|^2 by full-batch gradient
/// descent. Throws AcceptanceError on an empty or single-class set and on
/// non-finite features.
LinearModel train(std::span<const LabeledExample> data, std::span<const std::string> feature_names,
                  const TrainConfig& cfg = {});

nlohmann::ordered_json to_json(const LinearModel& m);
LinearModel model_from_json(const nlohmann::json& j);

struct EvalMetrics {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::optional<double> auc;  // undefined when the test set has one class
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;  // positive class = accept, threshold 0.5
};

/// Mann-Whitney AUC with midranks for ties; nullopt when a class is absent.
std::optional<double> auc_score(std::span<const double> scores, std::span<const Label> labels);

EvalMetrics evaluate(const LinearModel& m, std::span<const LabeledExample> test);
nlohmann::ordered_json to_json(const EvalMetrics& m);

struct FeatureImportance {
  std::string feature;
  double mean_drop = 0.0;
  double std_drop = 0.0;
};

/// Accuracy drop when one column is shuffled, averaged over `repeats`
/// shuffles; ranked by mean drop, ties by column order.
std::vector<FeatureImportance> permutation_importance(const LinearModel& m,
                                                      std::span<const LabeledExample> test,
                                                      std::uint64_t seed, std::size_t repeats = 10);

nlohmann::ordered_json to_json(const std::vector<FeatureImportance>& imp);

struct LabelHistogramRow {
  Label label;
  features::HistogramRow bin;
};

/// Per-label histogram of one dataset column.
std::vector<LabelHistogramRow> label_histogram(const Dataset& d, std::string_view feature,
                                               const features::HistogramBins& bins);
std::string label_histogram_csv(const std::vector<LabelHistogramRow>& rows);

}  // namespace surveymon::acceptance
