// surveymon: command-line front end for corpus validation, filtering,
// feature extraction, drift reports, evaluation summaries, acceptance
// modelling, prompt gating and synthetic corpora.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "surveymon/acceptance.h"
#include "surveymon/corpus.h"
#include "surveymon/drift.h"
#include "surveymon/features.h"
#include "surveymon/human_eval.h"
#include "surveymon/provenance.h"
#include "surveymon/safeguards.h"
#include "surveymon/synth.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace sm = surveymon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFindings = 2;

struct Global {
  std::string config_path;
  bool quiet = false;
  bool verbose = false;
  json config = json::object();

  /// The named section of the --config document, or an empty object.
  json section(const char* name) const {
    const auto it = config.find(name);
    return it == config.end() ? json::object() : *it;
  }
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  return out;
}

void write_json(const fs::path& path, const ordered_json& j) { open_out(path) << j.dump(2) << '\n'; }

/// Prepends the provenance header to a JSON payload.
ordered_json with_meta(const ordered_json& meta, const ordered_json& body) {
  ordered_json out;
  out["meta"] = meta;
  for (const auto& [key, value] : body.items()) out[key] = value;
  return out;
}

void log_effective(std::string_view command, const ordered_json& effective) {
  spdlog::info("{} effective config: {}", command, effective.dump());
}

std::vector<sm::corpus::CorpusRecord> load(const fs::path& path) {
  auto result = sm::corpus::load_corpus(path);
  spdlog::debug("loaded {} records from {}", result.records.size(), path.string());
  return std::move(result.records);
}

// validate -----------------------------------------------------------------

struct ValidateArgs {
  std::string corpus;
};

int run_validate(const Global&, const ValidateArgs& a) {
  log_effective("validate", {{"corpus", a.corpus}});
  const auto result = sm::corpus::load_corpus(fs::path(a.corpus), {.lenient = true});
  std::size_t n_issues = 0;
  for (const auto& li : result.skipped) {
    for (const auto& issue : li.issues) {
      ordered_json j;
      j["line"] = li.line;
      j["id"] = li.record_id;
      j["path"] = issue.path;
      j["kind"] = sm::survey::issue_kind_name(issue.kind);
      j["detail"] = issue.detail;
      std::cerr << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
      ++n_issues;
    }
  }
  spdlog::info("{} valid records, {} invalid lines, {} issues", result.records.size(),
               result.skipped.size(), n_issues);
  return result.skipped.empty() ? kExitOk : kExitFindings;
}

// filter -------------------------------------------------------------------

struct FilterArgs {
  std::string in;
  std::string out;
  std::string report;
};

int run_filter(const Global& g, const FilterArgs& a) {
  const auto cfg = sm::corpus::filter_config_from_json(g.section("filter"));
  cfg.check();
  const ordered_json cfg_json = sm::corpus::to_json(cfg);
  log_effective("filter", {{"in", a.in}, {"out", a.out}, {"report", a.report}, {"filter", cfg_json}});

  const auto records = load(a.in);
  const auto result = sm::corpus::filter_corpus(records, cfg);
  {
    auto out = open_out(a.out);
    sm::corpus::write_corpus(out, result.kept);
  }
  const auto report =
      with_meta(sm::provenance::meta("filter", cfg_json), sm::corpus::to_json(result.report));
  if (a.report.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_json(a.report, report);
  }
  if (!g.quiet && !a.report.empty()) std::cout << sm::corpus::format_table(result.report);
  return kExitOk;
}

// extract ------------------------------------------------------------------

struct ExtractArgs {
  std::string corpus;
  std::string out;
  std::string pooled;
};

int run_extract(const Global&, const ExtractArgs& a) {
  log_effective("extract", {{"corpus", a.corpus}, {"out", a.out}, {"pooled", a.pooled}});
  const auto cf = sm::features::extract_corpus_features(load(a.corpus));
  const auto meta = sm::provenance::meta("extract", json::object());
  {
    auto out = open_out(a.out);
    out << sm::provenance::csv_comment(meta) << sm::features::feature_csv(cf);
  }
  if (!a.pooled.empty()) write_json(a.pooled, with_meta(meta, sm::features::to_json(cf.pooled)));
  spdlog::info("wrote features for {} surveys", cf.per_record.size());
  return kExitOk;
}

// drift --------------------------------------------------------------------

struct DriftArgs {
  std::string baseline;
  std::string candidate;
  std::string out;
  bool table = false;
};

std::string variant_label(const std::vector<sm::corpus::CorpusRecord>& records, const std::string& path) {
  const auto groups = sm::corpus::partition_by_variant(records);
  if (groups.size() == 1) return groups.begin()->first;
  return fs::path(path).stem().string();
}

int run_drift(const Global& g, const DriftArgs& a) {
  const auto cfg = sm::drift::drift_config_from_json(g.section("drift"));
  cfg.check();
  const ordered_json cfg_json = sm::drift::to_json(cfg);
  log_effective("drift", {{"baseline", a.baseline}, {"candidate", a.candidate}, {"out", a.out}, {"drift", cfg_json}});

  const auto base = load(a.baseline);
  const auto cand = load(a.candidate);
  const auto report = sm::drift::run_drift(sm::features::extract_corpus_features(base),
                                           sm::features::extract_corpus_features(cand), cfg,
                                           variant_label(base, a.baseline), variant_label(cand, a.candidate));
  const auto payload = with_meta(sm::provenance::meta("drift", cfg_json), sm::drift::to_json(report));
  if (a.out.empty()) {
    std::cout << payload.dump(2) << '\n';
  } else {
    write_json(a.out, payload);
  }
  if (a.table && !g.quiet) std::cout << sm::drift::format_table(report);
  spdlog::info("drift: {} FAIL, {} PASS", report.n_fail, report.n_pass);
  return report.n_fail == 0 ? kExitOk : kExitFindings;
}

// hist ---------------------------------------------------------------------

struct HistArgs {
  std::string features;
  std::string feature;
  std::string bins;
  std::string out;
};

int run_hist(const Global&, const HistArgs& a) {
  log_effective("hist", {{"features", a.features}, {"feature", a.feature}, {"bins", a.bins}, {"out", a.out}});
  const auto idx = sm::features::feature_index(a.feature);
  if (idx >= sm::features::kNumFeatures) throw std::invalid_argument(fmt::format("unknown feature '{}'", a.feature));
  auto in = open_in(a.features);
  const auto cf = sm::features::read_feature_csv(in);
  const auto values = cf.column(idx);
  const auto bins = sm::features::HistogramBins::parse(a.bins, values);
  const auto rows = sm::features::feature_histogram(values, bins);
  const json cfg = {{"feature", a.feature}, {"bins", a.bins}};
  auto out = open_out(a.out);
  out << sm::provenance::csv_comment(sm::provenance::meta("hist", cfg)) << sm::features::histogram_csv(rows);
  return kExitOk;
}

// human-eval summarize -----------------------------------------------------

struct EvalArgs {
  std::string evals;
  std::vector<std::string> compare;
  std::string out;
  bool table = false;
};

int run_human_eval(const Global& g, const EvalArgs& a) {
  log_effective("human-eval summarize", {{"evals", a.evals}, {"compare", a.compare}, {"out", a.out}});
  auto in = open_in(a.evals);
  const bool jsonl = fs::path(a.evals).extension() == ".jsonl";
  const auto load = jsonl ? sm::human_eval::read_evals_jsonl(in) : sm::human_eval::read_evals_csv(in);
  for (const auto& issue : load.issues) spdlog::warn("{}: {}", issue.path, issue.message);

  const auto summary = sm::human_eval::summarize_evals(load.records);
  ordered_json body;
  body["summary"] = sm::human_eval::to_json(summary);
  std::string table = sm::human_eval::format_table(summary);
  if (a.compare.size() == 2) {
    const auto find = [&](const std::string& v) -> const sm::human_eval::VariantSummary& {
      const auto it = summary.find(v);
      if (it == summary.end()) throw std::invalid_argument(fmt::format("no evaluations for variant '{}'", v));
      return it->second;
    };
    const auto deltas = sm::human_eval::compare_variants(find(a.compare[0]), find(a.compare[1]));
    body["comparison"] = sm::human_eval::to_json(deltas, a.compare[0], a.compare[1]);
    table += '\n' + sm::human_eval::format_table(deltas, a.compare[0], a.compare[1]);
  }
  const auto payload = with_meta(sm::provenance::meta("human-eval summarize", json::object()), body);
  if (a.out.empty()) {
    std::cout << payload.dump(2) << '\n';
  } else {
    write_json(a.out, payload);
  }
  if (a.table && !g.quiet) std::cout << table;
  return load.issues.empty() ? kExitOk : kExitFindings;
}

// build-dataset ------------------------------------------------------------

struct DatasetArgs {
  std::string corpus;
  std::string outcomes;
  std::string out;
};

int run_build_dataset(const Global&, const DatasetArgs& a) {
  log_effective("build-dataset", {{"corpus", a.corpus}, {"outcomes", a.outcomes}, {"out", a.out}});
  auto in = open_in(a.outcomes);
  const auto outcomes = sm::acceptance::read_outcomes_csv(in);
  const auto d = sm::acceptance::build_dataset(load(a.corpus), outcomes);
  auto out = open_out(a.out);
  out << sm::provenance::csv_comment(sm::provenance::meta(
             "build-dataset", {{"schema_version", sm::acceptance::kDatasetSchemaVersion}}))
      << sm::acceptance::dataset_csv(d);
  spdlog::info("dataset: {} examples, {} accept, {} not_accept", d.examples.size(),
               d.count(sm::acceptance::Label::kAccept), d.count(sm::acceptance::Label::kNotAccept));
  return kExitOk;
}

// train-acceptance ---------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::uint64_t seed = 0;
  std::string out;
  std::string metrics;
  std::string importance;
  std::optional<double> train_fraction;
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
  std::optional<double> l2;
  std::size_t repeats = 10;
};

int run_train(const Global& g, const TrainArgs& a) {
  sm::acceptance::SplitConfig split_cfg;
  sm::acceptance::TrainConfig train_cfg;
  const json section = g.section("train");
  for (const auto& [key, v] : section.items()) {
    if (key == "train_fraction") {
      split_cfg.train_fraction = v.get<double>();
    } else if (key == "epochs") {
      train_cfg.epochs = v.get<std::size_t>();
    } else if (key == "learning_rate") {
      train_cfg.learning_rate = v.get<double>();
    } else if (key == "l2") {
      train_cfg.l2 = v.get<double>();
    } else {
      throw std::invalid_argument(fmt::format("unknown train config key '{}'", key));
    }
  }
  if (a.train_fraction) split_cfg.train_fraction = *a.train_fraction;
  if (a.epochs) train_cfg.epochs = *a.epochs;
  if (a.learning_rate) train_cfg.learning_rate = *a.learning_rate;
  if (a.l2) train_cfg.l2 = *a.l2;
  split_cfg.seed = train_cfg.seed = a.seed;

  ordered_json cfg_json;
  cfg_json["train_fraction"] = split_cfg.train_fraction;
  cfg_json["epochs"] = train_cfg.epochs;
  cfg_json["learning_rate"] = train_cfg.learning_rate;
  cfg_json["l2"] = train_cfg.l2;
  cfg_json["importance_repeats"] = a.repeats;
  cfg_json["seed"] = a.seed;
  log_effective("train-acceptance", {{"dataset", a.dataset}, {"out", a.out}, {"metrics", a.metrics},
                                     {"importance", a.importance}, {"train", cfg_json}});

  auto in = open_in(a.dataset);
  const auto d = sm::acceptance::read_dataset_csv(in);
  const auto split = sm::acceptance::stratified_split(d.examples, split_cfg);
  const auto model = sm::acceptance::train(split.train, d.feature_names, train_cfg);
  const auto meta = sm::provenance::meta("train-acceptance", cfg_json, a.seed);

  write_json(a.out, with_meta(meta, sm::acceptance::to_json(model)));
  if (!a.metrics.empty()) {
    ordered_json m;
    m["n_train"] = split.train.size();
    m["n_test"] = split.test.size();
    m["train"] = sm::acceptance::to_json(sm::acceptance::evaluate(model, split.train));
    m["test"] = sm::acceptance::to_json(sm::acceptance::evaluate(model, split.test));
    write_json(a.metrics, with_meta(meta, m));
  }
  if (!a.importance.empty()) {
    const auto imp = sm::acceptance::permutation_importance(model, split.test, a.seed, a.repeats);
    write_json(a.importance, with_meta(meta, {{"importance", sm::acceptance::to_json(imp)}}));
  }
  return kExitOk;
}

// gate ---------------------------------------------------------------------

struct GateArgs {
  std::string rules;
  std::size_t max_chars = 0;
  std::optional<std::size_t> rate;
  long long window_s = 3600;
  std::string state;
  bool jsonl = false;
  std::string user = "anonymous";
};

int run_gate(const Global&, const GateArgs& a) {
  namespace sg = sm::safeguards;
  const auto rules = a.rules.empty() ? sg::default_rules() : sg::rules_from_json(read_json_file(a.rules));
  const auto cfg = sg::make_gate_config(a.max_chars, rules);

  std::optional<sg::RateLimiter> limiter;
  if (a.rate) {
    limiter.emplace(sg::RateLimitConfig{*a.rate, std::chrono::seconds(a.window_s)});
    if (!a.state.empty() && fs::exists(a.state)) limiter->restore(read_json_file(a.state));
  }
  ordered_json eff;
  eff["rules"] = a.rules.empty() ? "(built-in)" : a.rules;
  eff["n_rules"] = rules.size();
  eff["max_chars"] = a.max_chars;
  if (a.rate) {
    eff["rate"] = *a.rate;
    eff["window_s"] = a.window_s;
    eff["state"] = a.state;
  }
  log_effective("gate", eff);

  std::string line;
  std::size_t n = 0;
  std::size_t rejected = 0;
  while (std::getline(std::cin, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string prompt = line;
    std::string user = a.user;
    sg::TimePoint now = std::chrono::time_point_cast<sg::Duration>(std::chrono::system_clock::now());
    if (a.jsonl) {
      if (line.empty()) continue;
      const auto j = json::parse(line);
      prompt = j.at("prompt").get<std::string>();
      user = j.value("user", a.user);
      if (const auto it = j.find("time"); it != j.end()) {
        now = sg::TimePoint{std::chrono::duration_cast<sg::Duration>(std::chrono::duration<double>(it->get<double>()))};
      }
    }
    ordered_json out;
    out["line"] = n;
    if (limiter) {
      const auto rd = limiter->check(user, now);
      if (!rd.allowed) {
        out["verdict"] = "reject";
        out["reason"] = "rate_limited";
        out["retry_after_s"] = std::chrono::duration<double>(rd.retry_after).count();
        ++rejected;
        std::cout << out.dump() << '\n';
        continue;
      }
      out["remaining"] = rd.remaining;
    }
    const auto decision = sg::gate_prompt(prompt, cfg);
    if (!decision.allowed()) ++rejected;
    const auto dj = sg::to_json(decision);
    for (const auto& [key, value] : dj.items()) out[key] = value;
    std::cout << out.dump() << '\n';
  }
  if (limiter && !a.state.empty()) write_json(a.state, limiter->snapshot());
  spdlog::info("gate: {} prompts, {} rejected", n, rejected);
  return kExitOk;
}

// synth --------------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string variant;
};

int run_synth(const Global&, const SynthArgs& a) {
  auto spec = sm::synth::spec_from_json(read_json_file(a.spec));
  if (a.seed) spec.seed = *a.seed;
  if (a.n) spec.n_records = *a.n;
  if (!a.variant.empty()) spec.variant = a.variant;
  spec.check();
  log_effective("synth", {{"spec", a.spec}, {"out", a.out}, {"synth", sm::synth::to_json(spec)}});
  const auto records = sm::synth::generate(spec);
  auto out = open_out(a.out);
  sm::corpus::write_corpus(out, records);
  spdlog::info("wrote {} records", records.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_logger_st("surveymon");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);

  CLI::App app{"Survey generation monitoring: corpus checks, features, drift and safeguards"};
  app.set_version_flag("--version", std::string(sm::provenance::tool_version()));
  app.require_subcommand(1);

  Global g;
  app.add_option("--config", g.config_path, "JSON config with per-module sections (filter, drift, train)")
      ->check(CLI::ExistingFile);
  app.add_flag("-q,--quiet", g.quiet, "Keep stdout to machine-readable payloads only");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging on stderr");

  std::function<int()> run;

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Parse every corpus record; issues go to stderr as JSONL (exit 2 if any)");
  validate->add_option("corpus", va.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  validate->callback([&] { run = [&] { return run_validate(g, va); }; });

  FilterArgs fa;
  auto* filter = app.add_subcommand("filter", "Apply the corpus filter and write the kept records");
  filter->add_option("in", fa.in, "Input corpus JSONL")->required()->check(CLI::ExistingFile);
  filter->add_option("-o,--out", fa.out, "Kept corpus JSONL")->required();
  filter->add_option("--report", fa.report, "Filter report JSON (stdout when omitted)");
  filter->callback([&] { run = [&] { return run_filter(g, fa); }; });

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "Write the per-survey feature matrix");
  extract->add_option("corpus", ea.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--out", ea.out, "Feature CSV")->required();
  extract->add_option("--pooled", ea.pooled, "Pooled n-gram distributions JSON");
  extract->callback([&] { run = [&] { return run_extract(g, ea); }; });

  DriftArgs da;
  auto* drift = app.add_subcommand("drift", "PSI drift report between two corpora (exit 2 on any FAIL)");
  drift->add_option("baseline", da.baseline, "Baseline corpus JSONL")->required()->check(CLI::ExistingFile);
  drift->add_option("candidate", da.candidate, "Candidate corpus JSONL")->required()->check(CLI::ExistingFile);
  drift->add_option("-o,--out", da.out, "Report JSON (stdout when omitted)");
  drift->add_flag("--table", da.table, "Print the per-feature table to stdout");
  drift->callback([&] { run = [&] { return run_drift(g, da); }; });

  HistArgs ha;
  auto* hist = app.add_subcommand("hist", "Histogram data for one feature column");
  hist->add_option("features", ha.features, "Feature CSV from extract")->required()->check(CLI::ExistingFile);
  hist->add_option("--feature", ha.feature, "Column name")->required();
  hist->add_option("--bins", ha.bins, "int | int:LO:HI | uniform:K[:LO:HI] | edges:E0,E1,...")->default_val("int");
  hist->add_option("-o,--out", ha.out, "Histogram CSV")->required();
  hist->callback([&] { run = [&] { return run_hist(g, ha); }; });

  EvalArgs hva;
  auto* human = app.add_subcommand("human-eval", "Human evaluation summaries");
  human->require_subcommand(1);
  auto* summarize = human->add_subcommand("summarize", "Per-variant score distributions and means");
  summarize->add_option("evals", hva.evals, "Evaluations CSV or JSONL")->required()->check(CLI::ExistingFile);
  summarize->add_option("--compare", hva.compare, "Two variants to compare (A B)")->expected(2);
  summarize->add_option("-o,--out", hva.out, "Summary JSON (stdout when omitted)");
  summarize->add_flag("--table", hva.table, "Print tables to stdout");
  summarize->callback([&] { run = [&] { return run_human_eval(g, hva); }; });

  DatasetArgs dsa;
  auto* dataset = app.add_subcommand("build-dataset", "Join a corpus with outcome labels into a training table");
  dataset->add_option("corpus", dsa.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  dataset->add_option("--outcomes", dsa.outcomes, "CSV with columns id,outcome")->required()->check(CLI::ExistingFile);
  dataset->add_option("-o,--out", dsa.out, "Dataset CSV")->required();
  dataset->callback([&] { run = [&] { return run_build_dataset(g, dsa); }; });

  TrainArgs ta;
  auto* train = app.add_subcommand("train-acceptance", "Fit the acceptance model and report metrics");
  train->add_option("dataset", ta.dataset, "Dataset CSV from build-dataset")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", ta.seed, "Split and importance seed")->required();
  train->add_option("-o,--out", ta.out, "Model JSON")->required();
  train->add_option("--metrics", ta.metrics, "Train/test metrics JSON");
  train->add_option("--importance", ta.importance, "Permutation importance JSON");
  train->add_option("--train-fraction", ta.train_fraction, "Training share of each class");
  train->add_option("--epochs", ta.epochs, "Gradient descent epochs");
  train->add_option("--learning-rate", ta.learning_rate, "Step size");
  train->add_option("--l2", ta.l2, "L2 penalty");
  train->add_option("--repeats", ta.repeats, "Shuffles per feature for importance")->default_val(10);
  train->callback([&] { run = [&] { return run_train(g, ta); }; });

  GateArgs ga;
  auto* gate = app.add_subcommand("gate", "Screen prompts from stdin; one JSON decision per line on stdout");
  gate->add_option("--rules", ga.rules, "Rule file JSON (built-in rules when omitted)")->check(CLI::ExistingFile);
  gate->add_option("--max-chars", ga.max_chars, "Maximum prompt length in characters")->required()->check(CLI::PositiveNumber);
  gate->add_option("--rate", ga.rate, "Allowed prompts per user per window")->check(CLI::PositiveNumber);
  gate->add_option("--window", ga.window_s, "Rate window in seconds")->default_val(3600)->check(CLI::PositiveNumber);
  gate->add_option("--state", ga.state, "Rate limiter snapshot, read at start and written at exit");
  gate->add_flag("--jsonl", ga.jsonl, "Input lines are {\"prompt\", \"user\"?, \"time\"? (epoch seconds)}");
  gate->add_option("--user", ga.user, "User id for plain-text input")->default_val("anonymous");
  gate->callback([&] { run = [&] { return run_gate(g, ga); }; });

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus from a generator spec");
  synth->add_option("--spec", sa.spec, "Generator spec JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--out", sa.out, "Corpus JSONL")->required();
  synth->add_option("--seed", sa.seed, "Override the spec seed");
  synth->add_option("-n,--records", sa.n, "Override the record count");
  synth->add_option("--variant", sa.variant, "Override the variant label");
  synth->callback([&] { run = [&] { return run_synth(g, sa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::info);
  try {
    if (!g.config_path.empty()) g.config = read_json_file(g.config_path);
    if (!g.config.is_object()) throw std::invalid_argument("--config must hold a JSON object");
    return run();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
}
