#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "usikit/corpus.hpp"
#include "usikit/error.hpp"
#include "usikit/pipeline.hpp"
#include "usikit/qc.hpp"
#include "usikit/report.hpp"
#include "usikit/serialize.hpp"
#include "usikit/usi.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace usikit;

namespace {

// Flags shared by every subcommand. Values left unset fall back to the
// config file, then to built-in defaults.
struct Common {
  std::string config;
  std::string patterns;
  std::string out;
  std::optional<std::size_t> bins;
  std::optional<std::size_t> threads;
  std::string ceiling;
  std::vector<std::string> categories;
};

fs::path default_patterns() {
  if (const char* env = std::getenv("USI_KIT_PATTERNS"); env && *env) return env;
  return USIKIT_DEFAULT_PATTERNS;
}

PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_pipeline_config(c.config);
  if (!c.patterns.empty()) cfg.patterns_dir = c.patterns;
  if (cfg.patterns_dir.empty()) cfg.patterns_dir = default_patterns();
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.bins) {
    if (*c.bins < 1) throw Error("cli", "--bins must be at least 1");
    cfg.bins = *c.bins;
  }
  if (c.threads) cfg.threads = std::max<std::size_t>(1, *c.threads);
  if (!c.ceiling.empty()) cfg.ceiling = ceiling_scheme_from_name(c.ceiling);
  for (const auto& entry : c.categories) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
      throw Error("cli", "--category expects NAME=CATEGORY, got '" + entry + "'");
    }
    cfg.categories[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return cfg;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  const fs::path path(out);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cli", out + ": cannot write");
    f << content;
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("cli", out + ": write failed");
    }
  }
  fs::rename(tmp, path);
}

std::vector<Corpus> load_all(const std::vector<std::string>& paths, const FilterConfig& filter) {
  std::vector<Corpus> out;
  for (const auto& p : paths) out.push_back(load_corpus(p, filter));
  return out;
}

std::vector<fs::path> as_paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

void add_common(CLI::App* app, Common& c, bool with_out = true) {
  app->add_option("--config", c.config, "TOML config file; flags override its values")->check(CLI::ExistingFile);
  app->add_option("--patterns", c.patterns, "lexicon/pattern directory (default: $USI_KIT_PATTERNS or built-in)");
  if (with_out) app->add_option("--out", c.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"usi-kit: behavioral alignment metrics for user-simulator transcripts"};
  app.require_subcommand(1);
  Common common;
  std::function<void()> action;

  // extract
  std::string transcripts;
  auto* extract = app.add_subcommand("extract", "per-interaction and corpus-level feature vectors");
  extract->add_option("--transcripts", transcripts, "transcript file or directory")->required();
  add_common(extract, common);
  extract->add_option("--threads", common.threads, "worker threads");
  extract->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      cfg.sim_paths = {transcripts};
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      const Corpus corpus = load_corpus(transcripts, cfg.filter);
      emit(common.out, io::dump(features_document(corpus, registry, config_echo(cfg, registry), cfg.threads)));
    };
  });

  // align
  std::string model;
  std::vector<std::string> human;
  auto* align = app.add_subcommand("align", "Dice alignment of a feature vector against human batches");
  align->add_option("--model", model, "features.json of the simulator (omit for the human ceiling)");
  align->add_option("--human", human, "features.json of a human batch (repeatable)")->required();
  align->add_option("--ceiling", common.ceiling, "pairwise | leave-one-out");
  add_common(align, common);
  align->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      if (!model.empty()) cfg.sim_paths = {model};
      cfg.human_paths = as_paths(human);
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      std::vector<json> docs;
      for (const auto& h : human) docs.push_back(io::read_json_file(h));
      const json model_doc = model.empty() ? json() : io::read_json_file(model);
      emit(common.out, io::dump(align_document(model_doc, docs, cfg.ceiling, config_echo(cfg, registry))));
    };
  });

  // ece
  std::string sim;
  auto* ece_cmd = app.add_subcommand("ece", "expected calibration error against human batches");
  ece_cmd->add_option("--sim", sim, "simulator transcripts (omit for the human ceiling)");
  ece_cmd->add_option("--human", human, "human batch transcripts (repeatable)")->required();
  ece_cmd->add_option("--bins", common.bins, "number of difficulty bins");
  ece_cmd->add_option("--ceiling", common.ceiling, "pairwise | leave-one-out");
  add_common(ece_cmd, common);
  ece_cmd->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      if (!sim.empty()) cfg.sim_paths = {sim};
      cfg.human_paths = as_paths(human);
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      const auto humans = load_all(human, cfg.filter);
      std::optional<Corpus> sim_corpus;
      if (!sim.empty()) sim_corpus = load_corpus(sim, cfg.filter);
      emit(common.out, io::dump(ece_document(sim_corpus ? &*sim_corpus : nullptr, humans, cfg.bins, cfg.ceiling,
                                             config_echo(cfg, registry))));
    };
  });

  // eval-gap
  auto* eval_cmd = app.add_subcommand("eval-gap", "survey agreement (Eval) against human batches");
  eval_cmd->add_option("--sim", sim, "simulator transcripts with surveys (omit for the human ceiling)");
  eval_cmd->add_option("--human", human, "human batch transcripts (repeatable)")->required();
  eval_cmd->add_option("--ceiling", common.ceiling, "pairwise | leave-one-out");
  add_common(eval_cmd, common);
  eval_cmd->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      if (!sim.empty()) cfg.sim_paths = {sim};
      cfg.human_paths = as_paths(human);
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      const auto humans = load_all(human, cfg.filter);
      std::optional<Corpus> sim_corpus;
      if (!sim.empty()) sim_corpus = load_corpus(sim, cfg.filter);
      emit(common.out, io::dump(eval_document(sim_corpus ? &*sim_corpus : nullptr, humans, cfg.survey_mapping,
                                              cfg.ceiling, config_echo(cfg, registry))));
    };
  });

  // usi
  std::string align_path, ece_path, eval_path;
  std::vector<double> components;
  auto* usi_cmd = app.add_subcommand("usi", "User-Sim Index from stage reports or raw components");
  usi_cmd->add_option("--align", align_path, "align.json");
  usi_cmd->add_option("--ece", ece_path, "ece.json");
  usi_cmd->add_option("--eval", eval_path, "eval.json (omit for the five-component variant)");
  usi_cmd->add_option("--components", components, "D1,D2,D3,D4,ECE[,Eval]")->delimiter(',')->expected(5, 6);
  add_common(usi_cmd, common);
  usi_cmd->callback([&] {
    action = [&] {
      if (!components.empty()) {
        if (!align_path.empty() || !ece_path.empty() || !eval_path.empty()) {
          throw Error("cli", "--components cannot be combined with --align/--ece/--eval");
        }
        UsiComponents c;
        for (std::size_t i = 0; i < 4; ++i) c.dims[i] = components[i];
        c.ece = components[4];
        if (components.size() == 6) c.eval = components[5];
        emit(common.out, io::dump(json{{"kind", "usi_components"}, {"components", io::to_json(c)},
                                       {"usi", usi_score(c)}, {"no_survey_variant", !c.eval}}));
        return;
      }
      if (align_path.empty() || ece_path.empty()) throw Error("cli", "usi needs --align and --ece, or --components");
      PipelineConfig cfg = resolve(common);
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      const json eval = eval_path.empty() ? json() : io::read_json_file(eval_path);
      emit(common.out, io::dump(usi_document(io::read_json_file(align_path), io::read_json_file(ece_path), eval,
                                             config_echo(cfg, registry))));
    };
  });

  // contingency
  auto* cont = app.add_subcommand("contingency", "human task-success judgment vs binary reward");
  cont->add_option("--human", human, "human batch transcripts (repeatable)")->required();
  add_common(cont, common);
  cont->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      cfg.human_paths = as_paths(human);
      const auto registry = PatternRegistry::load(cfg.patterns_dir);
      const auto humans = load_all(human, cfg.filter);
      emit(common.out, io::dump(contingency_document(humans, cfg.judgment_mapping, config_echo(cfg, registry))));
    };
  });

  // qc
  std::string labels;
  auto* qc = app.add_subcommand("qc", "judge-vs-truth confusion matrix, precision, recall, kappa");
  qc->add_option("--labels", labels, "CSV of id, judge_label, truth_label")->required()->check(CLI::ExistingFile);
  qc->add_option("--out", common.out, "output file (default: stdout)");
  qc->callback([&] {
    action = [&] {
      const auto pairs = read_labels_csv(labels);
      const auto m = confusion_from_labels(pairs);
      emit(common.out, io::dump(json{{"kind", "qc"},
                                     {"labels", labels},
                                     {"confusion", io::to_json(m)},
                                     {"stats", io::to_json(qc_stats(m))}}));
    };
  });

  // report
  std::vector<std::string> usi_paths;
  std::string format = "md";
  std::string bar_chart_path;
  auto* report = app.add_subcommand("report", "leaderboard from one or more usi.json files");
  report->add_option("--usi", usi_paths, "usi.json (repeatable)")->required();
  report->add_option("--format", format, "md | csv | json");
  report->add_option("--category", common.categories, "NAME=CATEGORY (repeatable)");
  report->add_option("--bar-chart", bar_chart_path, "also write per-metric bar-chart data as CSV");
  report->add_option("--config", common.config, "TOML config file ([categories])")->check(CLI::ExistingFile);
  report->add_option("--out", common.out, "output file (default: stdout)");
  report->callback([&] {
    action = [&] {
      const PipelineConfig cfg = resolve(common);
      std::vector<UsiRow> rows;
      json bar_charts = json::object();
      json inputs = json::array();
      for (const auto& p : usi_paths) {
        const json doc = io::read_json_file(p);
        if (!doc.contains("rows")) throw Error("cli", p + ": not a usi report");
        inputs.push_back(json{{"path", p}, {"config", doc.value("config", json())}});
        for (const auto& r : doc.at("rows")) {
          rows.push_back(io::usi_row_from_json(r));
          if (r.contains("bar_chart")) bar_charts[r.at("source").at("name").get<std::string>()] = r.at("bar_chart");
        }
      }
      const auto board = leaderboard(std::move(rows), cfg.categories);
      const json echo = {{"tool", "usi-kit"}, {"categories", cfg.categories}, {"usi_inputs", inputs}};
      switch (report_format_from_name(format)) {
        case ReportFormat::md: emit(common.out, render_markdown(board, bar_charts, echo)); break;
        case ReportFormat::csv: emit(common.out, render_csv(board, echo)); break;
        case ReportFormat::json: {
          json doc = render_json(board, bar_charts);
          doc["config"] = echo;
          emit(common.out, io::dump(doc));
          break;
        }
      }
      if (!bar_chart_path.empty()) emit(bar_chart_path, render_bar_chart_csv(bar_charts));
    };
  });

  // run
  std::vector<std::string> sims;
  auto* run = app.add_subcommand("run", "full pipeline: features, alignment, ECE, Eval, USI, reports");
  run->add_option("--sim", sims, "simulator transcripts (repeatable)");
  run->add_option("--human", human, "human batch transcripts (repeatable)");
  run->add_option("--bins", common.bins, "number of difficulty bins");
  run->add_option("--threads", common.threads, "worker threads");
  run->add_option("--ceiling", common.ceiling, "pairwise | leave-one-out");
  run->add_option("--category", common.categories, "NAME=CATEGORY (repeatable)");
  add_common(run, common);
  run->get_option("--out")->description("output directory");
  run->callback([&] {
    action = [&] {
      PipelineConfig cfg = resolve(common);
      if (!sims.empty()) cfg.sim_paths = as_paths(sims);
      if (!human.empty()) cfg.human_paths = as_paths(human);
      const auto result = run_pipeline(cfg);
      for (const auto& p : result.written) std::cerr << "wrote " << p.string() << "\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "usi-kit: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "usi-kit: error: io: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
