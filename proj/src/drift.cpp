#include "surveymon/drift.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "surveymon/csv.h"

namespace surveymon::drift {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_probabilities(std::span<const double> v, const char* which) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw DriftError(fmt::format("psi: {} has a non-positive entry {}; smooth first", which, x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DriftError(fmt::format("psi: {} sums to {}, not 1", which, sum));
  }
}

std::vector<double> to_mass(const std::vector<std::size_t>& counts, std::size_t n) {
  std::vector<double> mass(counts.size(), 0.0);
  if (n == 0) return mass;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mass[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return mass;
}

void check_finite(std::span<const double> values, const char* which) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DriftError(fmt::format("{} slice has a non-finite value", which));
  }
}

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Binned categorical(std::vector<double> categories, std::span<const double> baseline,
                   std::span<const double> candidate, double epsilon, BinKind kind) {
  const auto count = [&](std::span<const double> values) {
    std::vector<std::size_t> counts(categories.size(), 0);
    for (double v : values) {
      const auto it = std::lower_bound(categories.begin(), categories.end(), v);
      if (it != categories.end() && *it == v) ++counts[static_cast<std::size_t>(it - categories.begin())];
    }
    return counts;
  };
  Binned b;
  b.kind = kind;
  b.expected = smooth(to_mass(count(baseline), baseline.size()), epsilon);
  b.actual = smooth(to_mass(count(candidate), candidate.size()), epsilon);
  b.points = std::move(categories);
  return b;
}

}  // namespace

double psi(std::span<const double> expected, std::span<const double> actual) {
  if (expected.size() != actual.size()) {
    throw DriftError(fmt::format("psi: length mismatch ({} vs {})", expected.size(), actual.size()));
  }
  if (expected.size() < 2) throw DriftError("psi: need at least two bins");
  check_probabilities(expected, "expected");
  check_probabilities(actual, "actual");

  double total = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    // Written as a product of two differences so that swapping the
    // arguments negates both factors and the sum is bit-identical.
    total += (actual[i] - expected[i]) * (std::log(actual[i]) - std::log(expected[i]));
  }
  return total;
}

std::string_view bin_kind_name(BinKind kind) {
  switch (kind) {
    case BinKind::kInteger:
      return "integer";
    case BinKind::kQuantile:
      return "quantile";
    case BinKind::kCategorical:
      return "categorical";
  }
  return "unknown";
}

void BinConfig::check() const {
  if (quantile_bins < 2) throw DriftError("quantile_bins must be at least 2");
  if (max_distinct < 1) throw DriftError("max_distinct must be at least 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DriftError("epsilon must be positive");
}

std::string Binned::summary() const { return fmt::format("{}({})", bin_kind_name(kind), size()); }

std::vector<double> smooth(std::span<const double> mass, double epsilon) {
  std::vector<double> out(mass.begin(), mass.end());
  double total = 0.0;
  for (auto& m : out) {
    m += epsilon;
    total += m;
  }
  for (auto& m : out) m /= total;
  return out;
}

Binned bin_values(std::span<const double> baseline, std::span<const double> candidate,
                  const BinConfig& cfg) {
  cfg.check();
  if (baseline.empty()) throw DriftError("bin_values: empty baseline");
  check_finite(baseline, "baseline");
  check_finite(candidate, "candidate");

  std::set<double> base_distinct(baseline.begin(), baseline.end());
  const bool all_integer = std::all_of(baseline.begin(), baseline.end(),
                                       [](double v) { return v == std::floor(v); });
  if (all_integer && base_distinct.size() <= cfg.max_distinct) {
    std::set<double> cats = base_distinct;
    cats.insert(candidate.begin(), candidate.end());
    return categorical({cats.begin(), cats.end()}, baseline, candidate, cfg.epsilon,
                       BinKind::kInteger);
  }

  std::vector<double> sorted(baseline.begin(), baseline.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges;
  for (std::size_t i = 1; i < cfg.quantile_bins; ++i) {
    const double e =
        quantile(sorted, static_cast<double>(i) / static_cast<double>(cfg.quantile_bins));
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }

  const auto count = [&](std::span<const double> values) {
    std::vector<std::size_t> counts(edges.size() + 1, 0);
    for (double v : values) {
      ++counts[static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), v) -
                                        edges.begin())];
    }
    return counts;
  };
  Binned b;
  b.kind = BinKind::kQuantile;
  b.expected = smooth(to_mass(count(baseline), baseline.size()), cfg.epsilon);
  b.actual = smooth(to_mass(count(candidate), candidate.size()), cfg.epsilon);
  b.points = std::move(edges);
  return b;
}

Binned bin_boolean(std::span<const double> baseline, std::span<const double> candidate,
                   double epsilon) {
  if (baseline.empty()) throw DriftError("bin_boolean: empty baseline");
  const auto to_bool = [](std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(v != 0.0 ? 1.0 : 0.0);
    return out;
  };
  const auto b = to_bool(baseline);
  const auto c = to_bool(candidate);
  return categorical({0.0, 1.0}, b, c, epsilon, BinKind::kCategorical);
}

double binned_psi(const Binned& b) {
  if (b.size() < 2) return 0.0;
  return psi(b.expected, b.actual);
}

double distribution_psi(const text::NGramDistribution& baseline,
                        const text::NGramDistribution& candidate, std::size_t top_k,
                        double epsilon) {
  if (baseline.total == 0) throw DriftError("distribution_psi: empty baseline distribution");
  if (top_k == 0) throw DriftError("distribution_psi: top_k must be at least 1");

  std::vector<std::pair<std::string_view, std::uint64_t>> ranked;
  ranked.reserve(baseline.counts.size());
  for (const auto& [gram, c] : baseline.counts) ranked.emplace_back(gram, c);
  // counts is a sorted map, so a stable sort on count keeps lexicographic ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_k) ranked.resize(top_k);

  std::vector<double> expected;
  std::vector<double> actual;
  std::uint64_t base_covered = 0;
  std::uint64_t cand_covered = 0;
  const auto frac = [](std::uint64_t c, std::uint64_t total) {
    return total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total);
  };
  for (const auto& [gram, c] : ranked) {
    const auto it = candidate.counts.find(std::string(gram));
    const std::uint64_t cc = it == candidate.counts.end() ? 0 : it->second;
    base_covered += c;
    cand_covered += cc;
    expected.push_back(frac(c, baseline.total));
    actual.push_back(frac(cc, candidate.total));
  }
  expected.push_back(frac(baseline.total - base_covered, baseline.total));
  actual.push_back(frac(candidate.total - cand_covered, candidate.total));
  return psi(smooth(expected, epsilon), smooth(actual, epsilon));
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kPass:
      return "pass";
    case Status::kModerate:
      return "moderate";
    case Status::kFail:
      return "fail";
  }
  return "unknown";
}

Status Thresholds::classify(double value) const {
  if (value < moderate) return Status::kPass;
  if (value < fail) return Status::kModerate;
  return Status::kFail;
}

void DriftConfig::check() const {
  bins.check();
  if (!(thresholds.moderate > 0.0) || !(thresholds.fail > thresholds.moderate)) {
    throw DriftError("thresholds must satisfy 0 < moderate < fail");
  }
  if (top_k < 1) throw DriftError("top_k must be at least 1");
}

DriftConfig drift_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DriftError("drift config must be a JSON object");
  DriftConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "moderate_threshold") {
      cfg.thresholds.moderate = value.get<double>();
    } else if (key == "fail_threshold") {
      cfg.thresholds.fail = value.get<double>();
    } else if (key == "max_distinct_integers") {
      cfg.bins.max_distinct = value.get<std::size_t>();
    } else if (key == "quantile_bins") {
      cfg.bins.quantile_bins = value.get<std::size_t>();
    } else if (key == "epsilon") {
      cfg.bins.epsilon = value.get<double>();
    } else if (key == "top_k") {
      cfg.top_k = value.get<std::size_t>();
    } else {
      throw DriftError(fmt::format("unknown drift config key '{}'", key));
    }
  }
  cfg.check();
  return cfg;
}

nlohmann::ordered_json to_json(const DriftConfig& cfg) {
  nlohmann::ordered_json j;
  j["moderate_threshold"] = cfg.thresholds.moderate;
  j["fail_threshold"] = cfg.thresholds.fail;
  j["max_distinct_integers"] = cfg.bins.max_distinct;
  j["quantile_bins"] = cfg.bins.quantile_bins;
  j["epsilon"] = cfg.bins.epsilon;
  j["top_k"] = cfg.top_k;
  return j;
}

const PsiResult* DriftReport::find(std::string_view feature) const {
  for (const auto& r : results) {
    if (r.feature == feature) return &r;
  }
  return nullptr;
}

DriftReport run_drift(const features::CorpusFeatures& baseline,
                      const features::CorpusFeatures& candidate, const DriftConfig& cfg,
                      std::string baseline_label, std::string candidate_label) {
  cfg.check();
  if (baseline.per_record.empty()) throw DriftError("run_drift: empty baseline slice");
  if (candidate.per_record.empty()) throw DriftError("run_drift: empty candidate slice");

  DriftReport report;
  report.baseline_variant = std::move(baseline_label);
  report.candidate_variant = std::move(candidate_label);
  report.config = cfg;

  const auto& names = features::feature_names();
  for (std::size_t i = 0; i < features::kNumFeatures; ++i) {
    const auto base = baseline.column(i);
    const auto cand = candidate.column(i);
    const Binned b = features::is_boolean_feature(i)
                         ? bin_boolean(base, cand, cfg.bins.epsilon)
                         : bin_values(base, cand, cfg.bins);
    report.results.push_back({std::string(names[i]), binned_psi(b), Status::kPass, b.summary()});
  }

  const auto add_dist = [&](std::string_view row, const text::NGramDistribution& base,
                            const text::NGramDistribution& cand) {
    PsiResult r{std::string(row), 0.0, Status::kPass, fmt::format("categorical(top_k={})", cfg.top_k)};
    // A slice without any grams of this order has nothing to compare.
    if (base.total > 0) {
      r.psi = distribution_psi(base, cand, cfg.top_k, cfg.bins.epsilon);
    } else if (cand.total > 0) {
      r.psi = distribution_psi(cand, base, cfg.top_k, cfg.bins.epsilon);
    }
    report.results.push_back(std::move(r));
  };
  add_dist(kUnigramRow, baseline.pooled.unigrams, candidate.pooled.unigrams);
  add_dist(kBigramRow, baseline.pooled.bigrams, candidate.pooled.bigrams);
  add_dist(kCharacterRow, baseline.pooled.characters, candidate.pooled.characters);

  double best = -1.0;
  for (auto& r : report.results) {
    r.status = cfg.thresholds.classify(r.psi);
    if (r.status == Status::kFail) {
      ++report.n_fail;
    } else {
      ++report.n_pass;
    }
    if (r.psi > best) {
      best = r.psi;
      report.max_feature = r.feature;
    }
  }
  return report;
}

nlohmann::ordered_json to_json(const DriftReport& report) {
  nlohmann::ordered_json j;
  j["baseline"] = report.baseline_variant;
  j["candidate"] = report.candidate_variant;
  j["config"] = to_json(report.config);
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    nlohmann::ordered_json row;
    row["feature"] = r.feature;
    row["psi"] = r.psi;
    row["status"] = status_name(r.status);
    row["bins"] = r.bins_used;
    rows.push_back(std::move(row));
  }
  j["n_fail"] = report.n_fail;
  j["n_pass"] = report.n_pass;
  j["max_feature"] = report.max_feature;
  return j;
}

std::string format_psi(double value) {
  if (value < 1e-6) return "0.000";
  return fmt::format("{:.3f}", value);
}

std::string format_table(const DriftReport& report) {
  std::size_t width = 8;
  for (const auto& r : report.results) width = std::max(width, r.feature.size());

  const auto& c = report.config;
  std::string out;
  out += fmt::format("drift test: {} -> {}\n", report.baseline_variant, report.candidate_variant);
  out += fmt::format(
      "config: moderate<{} fail>={} epsilon={} quantile_bins={} max_distinct_integers={} "
      "top_k={}\n",
      csv::format_number(c.thresholds.moderate), csv::format_number(c.thresholds.fail),
      csv::format_number(c.bins.epsilon), c.bins.quantile_bins, c.bins.max_distinct, c.top_k);
  out += fmt::format("{:<{}}  {:>8}  {:<8}  {}\n", "feature", width, "psi", "status", "bins");
  for (const auto& r : report.results) {
    const char* mark = r.feature == report.max_feature ? " *" : "";
    out += fmt::format("{:<{}}  {:>8}  {:<8}  {}{}\n", r.feature, width, format_psi(r.psi),
                       status_name(r.status), r.bins_used, mark);
  }
  out += fmt::format("FAIL {}  PASS {}  (moderate counts as PASS)\n", report.n_fail,
                     report.n_pass);
  out += fmt::format("largest change: {}\n", report.max_feature);
  out +=
      "note: PSI below 1e-6 prints as 0.000; averages over empty denominators are reported "
      "as 0.0\n";
  return out;
}

std::string format_comparison_table(std::span<const DriftReport> reports, bool only_failed) {
  std::vector<std::string> features;
  for (const auto& rep : reports) {
    for (const auto& r : rep.results) {
      if (std::find(features.begin(), features.end(), r.feature) == features.end()) {
        features.push_back(r.feature);
      }
    }
  }

  std::vector<std::string> headers;
  for (const auto& rep : reports) {
    headers.push_back(fmt::format("<{}, {}>", rep.baseline_variant, rep.candidate_variant));
  }

  std::size_t width = 8;
  for (const auto& f : features) width = std::max(width, f.size());
  std::vector<std::size_t> col(reports.size(), 8);
  for (std::size_t k = 0; k < reports.size(); ++k) col[k] = std::max(col[k], headers[k].size());

  std::string out = fmt::format("{:<{}}", "feature", width);
  for (std::size_t k = 0; k < reports.size(); ++k) out += fmt::format("  {:>{}}", headers[k], col[k]);
  out.push_back('\n');

  for (const auto& f : features) {
    bool failed = false;
    for (const auto& rep : reports) {
      if (const auto* r = rep.find(f); r && r->status == Status::kFail) failed = true;
    }
    if (only_failed && !failed) continue;
    out += fmt::format("{:<{}}", f, width);
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const auto* r = reports[k].find(f);
      std::string cell = "-";
      if (r) cell = format_psi(r->psi) + (f == reports[k].max_feature ? "*" : " ");
      out += fmt::format("  {:>{}}", cell, col[k]);
    }
    out.push_back('\n');
  }

  out.push_back('\n');
  std::size_t exp_width = 10;
  for (const auto& h : headers) exp_width = std::max(exp_width, h.size());
  out += fmt::format("{:<{}}  {:>4}  {:>4}\n", "experiment", exp_width, "FAIL", "PASS");
  for (std::size_t k = 0; k < reports.size(); ++k) {
    out += fmt::format("{:<{}}  {:>4}  {:>4}\n", headers[k], exp_width, reports[k].n_fail,
                       reports[k].n_pass);
  }
  return out;
}

}  // namespace surveymon::drift
