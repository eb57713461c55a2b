#include "surveymon/acceptance.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "surveymon/csv.h"
#include "surveymon/random.h"
#include "surveymon/textstats.h"
#include "surveymon/utf8.h"

namespace surveymon::acceptance {

namespace {

constexpr std::array<Label, 2> kLabels{Label::kNotAccept, Label::kAccept};

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// -log p(y | s) for a logistic score s.
double log_loss(double s, double y) { return std::max(s, 0.0) - y * s + std::log1p(std::exp(-std::abs(s))); }

double target(Label l) { return l == Label::kAccept ? 1.0 : 0.0; }

void one_hot(std::vector<double>& x, const std::vector<std::string>& vocab, const std::string& value) {
  bool hit = false;
  for (const auto& v : vocab) {
    const bool match = !hit && v == value;
    x.push_back(match ? 1.0 : 0.0);
    hit = hit || match;
  }
  x.push_back(hit ? 0.0 : 1.0);  // unknown
}

struct Standardized {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
};

Standardized standardize(const LinearModel& m, std::span<const LabeledExample> data) {
  Standardized s;
  s.rows.reserve(data.size());
  for (const auto& ex : data) {
    std::vector<double> z(ex.x.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = (ex.x[j] - m.means[j]) / m.scales[j];
    s.rows.push_back(std::move(z));
    s.y.push_back(target(ex.y));
  }
  return s;
}

double score(const LinearModel& m, std::span<const double> z) {
  double s = m.bias;
  for (std::size_t j = 0; j < z.size(); ++j) s += m.weights[j] * z[j];
  return s;
}

}  // namespace

std::string_view label_name(Label l) { return l == Label::kAccept ? "accept" : "not_accept"; }

std::optional<Label> parse_outcome(std::string_view text) {
  const std::string t = utf8::fold(utf8::trim(text));
  if (t == "accept") return Label::kAccept;
  if (t == "not_accept" || t == "restart" || t == "drop_out") return Label::kNotAccept;
  return std::nullopt;
}

std::size_t Dataset::feature(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw AcceptanceError(fmt::format("unknown feature '{}'", name));
  return static_cast<std::size_t>(it - feature_names.begin());
}

std::size_t Dataset::count(Label l) const {
  return static_cast<std::size_t>(
      std::count_if(examples.begin(), examples.end(), [&](const auto& e) { return e.y == l; }));
}

Dataset build_dataset(const std::vector<corpus::CorpusRecord>& records,
                      const std::map<std::string, Label>& outcomes, const DatasetOptions& opts) {
  Dataset d;
  d.feature_names = {"prompt_char_length", "prompt_word_count"};
  for (auto name : features::feature_names()) d.feature_names.emplace_back(name);
  if (opts.include_profile) {
    for (const auto& v : opts.industries) d.feature_names.push_back("industry=" + v);
    d.feature_names.emplace_back("industry=unknown");
    for (const auto& v : opts.job_roles) d.feature_names.push_back("job_role=" + v);
    d.feature_names.emplace_back("job_role=unknown");
  }

  d.examples.reserve(records.size());
  for (const auto& r : records) {
    const auto outcome = outcomes.find(r.id);
    if (outcome == outcomes.end()) {
      throw AcceptanceError(fmt::format("no outcome for record '{}'", r.id));
    }
    LabeledExample ex{r.id, {}, outcome->second};
    ex.x.reserve(d.feature_names.size());
    ex.x.push_back(static_cast<double>(corpus::prompt_length(r.user_prompt)));
    ex.x.push_back(static_cast<double>(text::tokenize(r.user_prompt).size()));
    for (double v : features::extract_features(r.survey).values()) ex.x.push_back(v);
    if (opts.include_profile) {
      const auto p = opts.profiles.find(r.id);
      const Profile profile = p == opts.profiles.end() ? Profile{} : p->second;
      one_hot(ex.x, opts.industries, profile.industry);
      one_hot(ex.x, opts.job_roles, profile.job_role);
    }
    d.examples.push_back(std::move(ex));
  }
  return d;
}

std::map<std::string, Label> read_outcomes_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  if (header.size() < 2 || header[0] != "id" || header[1] != "outcome") {
    throw AcceptanceError("outcomes CSV must start with columns id,outcome");
  }
  std::map<std::string, Label> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw AcceptanceError(fmt::format("outcomes CSV line {} is short", r + 1));
    const auto label = parse_outcome(rows[r][1]);
    if (!label) {
      throw AcceptanceError(
          fmt::format("outcomes CSV line {}: unknown outcome '{}'", r + 1, rows[r][1]));
    }
    if (!out.emplace(rows[r][0], *label).second) {
      throw AcceptanceError(fmt::format("outcomes CSV line {}: duplicate id '{}'", r + 1, rows[r][0]));
    }
  }
  return out;
}

std::string dataset_csv(const Dataset& d) {
  std::string out = "id,label";
  for (const auto& name : d.feature_names) out += "," + csv::escape(name);
  out.push_back('\n');
  for (const auto& ex : d.examples) {
    out += csv::escape(ex.id);
    out.push_back(',');
    out += label_name(ex.y);
    for (double v : ex.x) out += "," + csv::format_number(v);
    out.push_back('\n');
  }
  return out;
}

Dataset read_dataset_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw AcceptanceError("dataset CSV is empty");
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw AcceptanceError("dataset CSV must start with columns id,label and have features");
  }
  Dataset d;
  d.feature_names.assign(header.begin() + 2, header.end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw AcceptanceError(fmt::format("dataset CSV line {} has {} fields, expected {}", r + 1,
                                        row.size(), header.size()));
    }
    const auto label = parse_outcome(row[1]);
    if (!label) throw AcceptanceError(fmt::format("dataset CSV line {}: bad label '{}'", r + 1, row[1]));
    LabeledExample ex{row[0], {}, *label};
    for (std::size_t j = 2; j < row.size(); ++j) {
      try {
        ex.x.push_back(csv::parse_number(row[j]));
      } catch (const csv::CsvError& e) {
        throw AcceptanceError(fmt::format("dataset CSV line {}: {}", r + 1, e.what()));
      }
    }
    d.examples.push_back(std::move(ex));
  }
  return d;
}

Split stratified_split(std::span<const LabeledExample> data, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw AcceptanceError("train_fraction must be in (0, 1)");
  }
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data[i].y)].push_back(i);
  }
  for (auto l : kLabels) {
    const auto n = by_class[static_cast<std::size_t>(l)].size();
    if (n < 2) {
      throw AcceptanceError(
          fmt::format("class '{}' has {} examples; stratified split needs 2", label_name(l), n));
    }
  }

  std::array<long, 2> take{};
  std::array<double, 2> ideal{};
  long sum = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto n = static_cast<long>(by_class[c].size());
    ideal[c] = cfg.train_fraction * static_cast<double>(n);
    take[c] = std::clamp(std::lround(ideal[c]), 1L, n - 1);
    sum += take[c];
  }
  const long want = std::lround(cfg.train_fraction * static_cast<double>(data.size()));

  // Nudge the classes whose rounding strayed furthest, at most once each and
  // only toward the ideal, so each class stays within one example of it.
  std::array<bool, 2> nudged{};
  while (sum != want) {
    const long step = sum < want ? 1 : -1;
    std::optional<std::size_t> pick;
    for (std::size_t c = 0; c < 2; ++c) {
      const long n = static_cast<long>(by_class[c].size());
      const long next = take[c] + step;
      if (nudged[c] || next < 1 || next > n - 1) continue;
      const double gap = step * (ideal[c] - static_cast<double>(take[c]));
      if (gap < 0.0) continue;
      if (!pick || gap > step * (ideal[*pick] - static_cast<double>(take[*pick]))) pick = c;
    }
    if (!pick) break;
    take[*pick] += step;
    nudged[*pick] = true;
    sum += step;
  }

  Split s;
  for (std::size_t c = 0; c < 2; ++c) {
    auto idx = by_class[c];
    rng::Engine engine(rng::derive(cfg.seed, c));
    rng::shuffle(std::span<std::size_t>(idx), engine);
    const auto cut = static_cast<std::size_t>(take[c]);
    s.train_index.insert(s.train_index.end(), idx.begin(), idx.begin() + static_cast<long>(cut));
    s.test_index.insert(s.test_index.end(), idx.begin() + static_cast<long>(cut), idx.end());
  }
  std::sort(s.train_index.begin(), s.train_index.end());
  std::sort(s.test_index.begin(), s.test_index.end());
  for (auto i : s.train_index) s.train.push_back(data[i]);
  for (auto i : s.test_index) s.test.push_back(data[i]);
  return s;
}

double LinearModel::predict_proba(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw AcceptanceError(fmt::format("expected {} features, got {}", weights.size(), x.size()));
  }
  double s = bias;
  for (std::size_t j = 0; j < x.size(); ++j) s += weights[j] * ((x[j] - means[j]) / scales[j]);
  return sigmoid(s);
}

Label LinearModel::predict(std::span<const double> x) const {
  return predict_proba(x) >= 0.5 ? Label::kAccept : Label::kNotAccept;
}

LinearModel train(std::span<const LabeledExample> data, std::span<const std::string> feature_names,
                  const TrainConfig& cfg) {
  if (data.empty()) throw AcceptanceError("train: empty training set");
  if (!(cfg.learning_rate > 0.0) || cfg.l2 < 0.0) {
    throw AcceptanceError("train: learning_rate must be positive and l2 non-negative");
  }
  const std::size_t d = feature_names.size();
  std::array<std::size_t, 2> per_class{};
  for (const auto& ex : data) {
    if (ex.x.size() != d) {
      throw AcceptanceError(fmt::format("train: example '{}' has {} features, expected {}", ex.id,
                                        ex.x.size(), d));
    }
    for (double v : ex.x) {
      if (!std::isfinite(v)) throw AcceptanceError(fmt::format("train: non-finite feature in '{}'", ex.id));
    }
    ++per_class[static_cast<std::size_t>(ex.y)];
  }
  if (per_class[0] == 0 || per_class[1] == 0) throw AcceptanceError("train: need both classes");

  LinearModel m;
  m.feature_names.assign(feature_names.begin(), feature_names.end());
  m.config = cfg;
  m.weights.assign(d, 0.0);
  m.means.assign(d, 0.0);
  m.scales.assign(d, 1.0);

  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (const auto& ex : data) sum += ex.x[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& ex : data) ss += (ex.x[j] - mean) * (ex.x[j] - mean);
    const double sd = std::sqrt(ss / n);
    m.means[j] = mean;
    m.scales[j] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }

  const Standardized z = standardize(m, data);
  std::vector<double> grad(d);
  m.loss_history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < z.rows.size(); ++i) {
      const double s = score(m, z.rows[i]);
      loss += log_loss(s, z.y[i]);
      const double r = sigmoid(s) - z.y[i];
      grad_b += r;
      for (std::size_t j = 0; j < d; ++j) grad[j] += r * z.rows[i][j];
    }
    double penalty = 0.0;
    for (double w : m.weights) penalty += w * w;
    m.loss_history.push_back(loss / n + 0.5 * cfg.l2 * penalty);

    for (std::size_t j = 0; j < d; ++j) {
      m.weights[j] -= cfg.learning_rate * (grad[j] / n + cfg.l2 * m.weights[j]);
    }
    m.bias -= cfg.learning_rate * grad_b / n;
  }
  return m;
}

nlohmann::ordered_json to_json(const LinearModel& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["model"] = "logistic_regression";
  j["feature_names"] = m.feature_names;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["standardization"] = {{"means", m.means}, {"scales", m.scales}};
  j["config"] = {{"learning_rate", m.config.learning_rate},
                 {"epochs", m.config.epochs},
                 {"l2", m.config.l2},
                 {"seed", m.config.seed}};
  j["final_loss"] = m.loss_history.empty() ? 0.0 : m.loss_history.back();
  return j;
}

LinearModel model_from_json(const nlohmann::json& j) {
  LinearModel m;
  try {
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.means = j.at("standardization").at("means").get<std::vector<double>>();
    m.scales = j.at("standardization").at("scales").get<std::vector<double>>();
    const auto& c = j.at("config");
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.epochs = c.at("epochs").get<std::size_t>();
    m.config.l2 = c.at("l2").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw AcceptanceError(fmt::format("bad model JSON: {}", e.what()));
  }
  const auto d = m.feature_names.size();
  if (m.weights.size() != d || m.means.size() != d || m.scales.size() != d) {
    throw AcceptanceError("bad model JSON: vector lengths disagree with feature_names");
  }
  return m;
}

std::optional<double> auc_score(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw AcceptanceError("auc_score: length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == Label::kAccept) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

EvalMetrics evaluate(const LinearModel& m, std::span<const LabeledExample> test) {
  EvalMetrics out;
  out.n = test.size();
  if (test.empty()) return out;
  std::vector<double> scores;
  std::vector<Label> labels;
  scores.reserve(test.size());
  labels.reserve(test.size());
  for (const auto& ex : test) {
    const double p = m.predict_proba(ex.x);
    const bool predicted = p >= 0.5;
    const bool actual = ex.y == Label::kAccept;
    if (predicted && actual) ++out.tp;
    if (!predicted && !actual) ++out.tn;
    if (predicted && !actual) ++out.fp;
    if (!predicted && actual) ++out.fn;
    scores.push_back(p);
    labels.push_back(ex.y);
  }
  out.accuracy = static_cast<double>(out.tp + out.tn) / static_cast<double>(out.n);
  out.auc = auc_score(scores, labels);
  return out;
}

nlohmann::ordered_json to_json(const EvalMetrics& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  j["accuracy"] = m.accuracy;
  j["auc"] = m.auc ? nlohmann::ordered_json(*m.auc) : nlohmann::ordered_json(nullptr);
  j["confusion"] = {{"tp", m.tp}, {"tn", m.tn}, {"fp", m.fp}, {"fn", m.fn}};
  return j;
}

std::vector<FeatureImportance> permutation_importance(const LinearModel& m,
                                                      std::span<const LabeledExample> test,
                                                      std::uint64_t seed, std::size_t repeats) {
  if (test.empty()) throw AcceptanceError("permutation_importance: empty test set");
  if (repeats == 0) throw AcceptanceError("permutation_importance: repeats must be positive");
  const Standardized z = standardize(m, test);
  const std::size_t n = z.rows.size();

  std::vector<double> base_scores(n);
  std::size_t base_correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    base_scores[i] = score(m, z.rows[i]);
    base_correct += ((base_scores[i] >= 0.0) == (z.y[i] == 1.0)) ? 1 : 0;
  }
  const double base_acc = static_cast<double>(base_correct) / static_cast<double>(n);

  std::vector<FeatureImportance> out;
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < m.weights.size(); ++j) {
    std::vector<double> drops;
    for (std::size_t r = 0; r < repeats; ++r) {
      std::iota(perm.begin(), perm.end(), 0);
      rng::Engine engine(rng::derive(seed, j, r));
      rng::shuffle(std::span<std::size_t>(perm), engine);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = base_scores[i] + m.weights[j] * (z.rows[perm[i]][j] - z.rows[i][j]);
        correct += ((s >= 0.0) == (z.y[i] == 1.0)) ? 1 : 0;
      }
      drops.push_back(base_acc - static_cast<double>(correct) / static_cast<double>(n));
    }
    const double mean = std::accumulate(drops.begin(), drops.end(), 0.0) / static_cast<double>(repeats);
    double ss = 0.0;
    for (double x : drops) ss += (x - mean) * (x - mean);
    out.push_back({m.feature_names[j], mean, std::sqrt(ss / static_cast<double>(repeats))});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.mean_drop > b.mean_drop; });
  return out;
}

nlohmann::ordered_json to_json(const std::vector<FeatureImportance>& imp) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t rank = 0; rank < imp.size(); ++rank) {
    rows.push_back({{"rank", rank + 1},
                    {"feature", imp[rank].feature},
                    {"mean_accuracy_drop", imp[rank].mean_drop},
                    {"std_accuracy_drop", imp[rank].std_drop}});
  }
  return rows;
}

std::vector<LabelHistogramRow> label_histogram(const Dataset& d, std::string_view feature,
                                               const features::HistogramBins& bins) {
  const std::size_t col = d.feature(feature);
  std::vector<LabelHistogramRow> out;
  for (auto l : kLabels) {
    std::vector<double> values;
    for (const auto& ex : d.examples) {
      if (ex.y == l) values.push_back(ex.x[col]);
    }
    for (const auto& row : features::feature_histogram(values, bins)) out.push_back({l, row});
  }
  return out;
}

std::string label_histogram_csv(const std::vector<LabelHistogramRow>& rows) {
  std::string out = "label,bin_low,bin_high,count\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", label_name(r.label), csv::format_number(r.bin.low),
                       csv::format_number(r.bin.high), r.bin.count);
  }
  return out;
}

}  // namespace surveymon::acceptance
