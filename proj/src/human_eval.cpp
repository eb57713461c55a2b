#include "surveymon/human_eval.h"

#include <stdexcept>

#include <fmt/format.h>

#include "surveymon/csv.h"
#include "surveymon/utf8.h"

namespace surveymon::human_eval {

namespace {

constexpr std::array<std::string_view, kNumMetrics> kMetricNames{
    "question_text_quality", "answer_options",      "bias_check",
    "missing_questions",     "relevance_to_prompt", "question_variety",
};

void prefix_issues(std::vector<EvalIssue>& issues, std::size_t line,
                   const std::vector<EvalIssue>& found) {
  for (const auto& i : found) {
    issues.push_back({fmt::format("line {}{}", line, i.path.empty() ? "" : " " + i.path),
                      i.message});
  }
}

}  // namespace

std::string_view metric_name(MetricId m) { return kMetricNames[static_cast<std::size_t>(m)]; }

std::optional<MetricId> metric_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumMetrics; ++i) {
    if (kMetricNames[i] == name) return static_cast<MetricId>(i);
  }
  return std::nullopt;
}

Level metric_level(MetricId m) {
  switch (m) {
    case MetricId::kQuestionTextQuality:
    case MetricId::kAnswerOptions:
    case MetricId::kBiasCheck:
      return Level::kQuestion;
    default:
      return Level::kSurvey;
  }
}

std::string_view level_name(Level l) { return l == Level::kQuestion ? "question" : "survey"; }

Checked<EvalRecord, EvalIssue> validate_eval(const nlohmann::json& raw) {
  std::vector<EvalIssue> issues;
  if (!raw.is_object()) {
    return std::vector<EvalIssue>{{"", "evaluation record must be a JSON object"}};
  }
  EvalRecord rec;
  const auto text_field = [&](const char* key, std::string& out, bool required) {
    const auto it = raw.find(key);
    if (it == raw.end() || it->is_null()) {
      if (required) issues.push_back({fmt::format("/{}", key), "missing field"});
      return;
    }
    if (!it->is_string()) {
      issues.push_back({fmt::format("/{}", key), "must be a string"});
      return;
    }
    out = it->get<std::string>();
    if (required && utf8::trim(out).empty()) {
      issues.push_back({fmt::format("/{}", key), "must not be blank"});
    }
  };
  text_field("survey_id", rec.survey_id, true);
  text_field("variant", rec.variant, true);
  text_field("rater_id", rec.rater_id, true);
  text_field("note", rec.note, false);

  const auto scores = raw.find("scores");
  if (scores == raw.end()) {
    issues.push_back({"/scores", "missing field"});
  } else if (!scores->is_object()) {
    issues.push_back({"/scores", "must be an object"});
  } else {
    std::array<bool, kNumMetrics> seen{};
    for (const auto& [name, value] : scores->items()) {
      const std::string path = fmt::format("/scores/{}", name);
      const auto metric = metric_from_name(name);
      if (!metric) {
        issues.push_back({path, "unknown metric"});
        continue;
      }
      const auto idx = static_cast<std::size_t>(*metric);
      seen[idx] = true;
      if (!value.is_number_integer()) {
        issues.push_back({path, "score must be an integer"});
        continue;
      }
      const auto score = value.get<long long>();
      if (score < 0 || score > 2) {
        issues.push_back({path, fmt::format("score {} out of range [0, 2]", score)});
        continue;
      }
      rec.scores[idx] = static_cast<int>(score);
    }
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      if (!seen[i]) issues.push_back({fmt::format("/scores/{}", kMetricNames[i]), "missing metric"});
    }
  }
  if (!issues.empty()) return issues;
  return rec;
}

EvalLoad read_evals_csv(std::istream& in) {
  EvalLoad load;
  const auto rows = csv::read(in);
  if (rows.empty()) return load;

  const auto& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"survey_id", "variant", "rater_id"}) {
    if (!col.count(required)) load.issues.push_back({"header", fmt::format("missing column '{}'", required)});
  }
  for (auto name : kMetricNames) {
    if (!col.count(std::string(name))) {
      load.issues.push_back({"header", fmt::format("missing metric column '{}'", name)});
    }
  }
  for (const auto& [name, idx] : col) {
    if (name != "survey_id" && name != "variant" && name != "rater_id" && name != "note" &&
        !metric_from_name(name)) {
      load.issues.push_back({"header", fmt::format("unknown column '{}'", name)});
    }
  }
  if (!load.issues.empty()) return load;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      load.issues.push_back({fmt::format("line {}", r + 1),
                             fmt::format("{} fields, expected {}", row.size(), header.size())});
      continue;
    }
    nlohmann::json raw = nlohmann::json::object();
    raw["survey_id"] = row[col["survey_id"]];
    raw["variant"] = row[col["variant"]];
    raw["rater_id"] = row[col["rater_id"]];
    if (col.count("note")) raw["note"] = row[col["note"]];
    auto& scores = raw["scores"] = nlohmann::json::object();
    for (auto name : kMetricNames) {
      const std::string& cell = row[col[std::string(name)]];
      const std::string trimmed(utf8::trim(cell));
      if (trimmed.empty()) continue;  // reported as missing metric
      try {
        const double v = csv::parse_number(trimmed);
        if (v == static_cast<double>(static_cast<long long>(v))) {
          scores[std::string(name)] = static_cast<long long>(v);
        } else {
          scores[std::string(name)] = v;
        }
      } catch (const csv::CsvError&) {
        scores[std::string(name)] = cell;
      }
    }
    auto rec = validate_eval(raw);
    if (rec) {
      load.records.push_back(std::move(rec).value());
    } else {
      prefix_issues(load.issues, r + 1, rec.issues());
    }
  }
  return load;
}

EvalLoad read_evals_jsonl(std::istream& in) {
  EvalLoad load;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (utf8::trim(line).empty()) continue;
    nlohmann::json raw;
    try {
      raw = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      load.issues.push_back({fmt::format("line {}", lineno), e.what()});
      continue;
    }
    auto rec = validate_eval(raw);
    if (rec) {
      load.records.push_back(std::move(rec).value());
    } else {
      prefix_issues(load.issues, lineno, rec.issues());
    }
  }
  return load;
}

double MetricSummary::mean() const {
  const std::size_t count = n();
  if (count == 0) return 0.0;
  return static_cast<double>(distribution[1] + 2 * distribution[2]) / static_cast<double>(count);
}

EvalSummary summarize_evals(const std::vector<EvalRecord>& records) {
  EvalSummary summary;
  for (const auto& r : records) {
    auto& v = summary[r.variant];
    ++v.n_records;
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      const int s = r.scores[i];
      if (s < 0 || s > 2) throw std::invalid_argument("summarize_evals: score outside [0, 2]");
      ++v.metrics[i].distribution[static_cast<std::size_t>(s)];
    }
  }
  return summary;
}

EvalSummary merge(const EvalSummary& a, const EvalSummary& b) {
  EvalSummary out = a;
  for (const auto& [variant, vb] : b) {
    auto& v = out[variant];
    v.n_records += vb.n_records;
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      for (std::size_t s = 0; s < 3; ++s) {
        v.metrics[i].distribution[s] += vb.metrics[i].distribution[s];
      }
    }
  }
  return out;
}

std::vector<MetricDelta> compare_variants(const VariantSummary& a, const VariantSummary& b) {
  std::vector<MetricDelta> out;
  for (auto m : kAllMetrics) {
    const auto& ma = a.metric(m);
    const auto& mb = b.metric(m);
    if (ma.n() == 0 || mb.n() == 0) {
      throw std::invalid_argument(
          fmt::format("compare_variants: no scores for metric '{}'", metric_name(m)));
    }
    out.push_back({m, ma.mean(), mb.mean(), mb.mean() - ma.mean(), ma.n(), mb.n()});
  }
  return out;
}

nlohmann::ordered_json to_json(const EvalSummary& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [variant, v] : s) {
    nlohmann::ordered_json block;
    block["n_records"] = v.n_records;
    auto& metrics = block["metrics"] = nlohmann::ordered_json::object();
    for (auto m : kAllMetrics) {
      const auto& ms = v.metric(m);
      nlohmann::ordered_json item;
      item["level"] = level_name(metric_level(m));
      item["mean"] = ms.mean();
      item["distribution"] = {{"0", ms.distribution[0]}, {"1", ms.distribution[1]},
                              {"2", ms.distribution[2]}};
      metrics[std::string(metric_name(m))] = std::move(item);
    }
    j[variant] = std::move(block);
  }
  return j;
}

nlohmann::ordered_json to_json(const std::vector<MetricDelta>& deltas, std::string_view a,
                               std::string_view b) {
  nlohmann::ordered_json j;
  j["a"] = a;
  j["b"] = b;
  auto& rows = j["deltas"] = nlohmann::ordered_json::array();
  for (const auto& d : deltas) {
    rows.push_back({{"metric", metric_name(d.metric)},
                    {"mean_a", d.mean_a},
                    {"mean_b", d.mean_b},
                    {"delta", d.delta},
                    {"n_a", d.n_a},
                    {"n_b", d.n_b}});
  }
  return j;
}

std::string format_table(const EvalSummary& s) {
  std::string out;
  for (const auto& [variant, v] : s) {
    out += fmt::format("variant {} (n={})\n", variant, v.n_records);
    out += fmt::format("  {:<22} {:<8} {:>6} {:>5} {:>5} {:>5}\n", "metric", "level", "mean", "0",
                       "1", "2");
    for (auto m : kAllMetrics) {
      const auto& ms = v.metric(m);
      out += fmt::format("  {:<22} {:<8} {:>6.3f} {:>5} {:>5} {:>5}\n", metric_name(m),
                         level_name(metric_level(m)), ms.mean(), ms.distribution[0],
                         ms.distribution[1], ms.distribution[2]);
    }
  }
  return out;
}

std::string format_table(const std::vector<MetricDelta>& deltas, std::string_view a,
                         std::string_view b) {
  std::string out = fmt::format("{:<22} {:>8} {:>8} {:>8}\n", "metric", a, b, "delta");
  for (const auto& d : deltas) {
    out += fmt::format("{:<22} {:>8.3f} {:>8.3f} {:>+8.3f}\n", metric_name(d.metric), d.mean_a,
                       d.mean_b, d.delta);
  }
  return out;
}

}  // namespace surveymon::human_eval
