#include "usikit/pipeline.hpp"

#include <fstream>
#include <set>

#include "usikit/config.hpp"
#include "usikit/error.hpp"
#include "usikit/parallel.hpp"
#include "usikit/report.hpp"
#include "usikit/serialize.hpp"
#include "usikit/usi.hpp"

namespace usikit {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

json with_config(json doc, const json& config) {
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

SourceId ceiling_source() { return SourceId{SourceKind::human_batch, kHumanCeilingName}; }

std::vector<std::string> batch_labels(const std::vector<Corpus>& human) {
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& c : human) {
    if (!seen.insert(c.source.name).second) {
      throw Error("cli", "human batch label '" + c.source.name + "' appears twice; batches need distinct labels");
    }
    labels.push_back(c.source.name);
  }
  return labels;
}

json stats_json(const std::vector<double>& values) { return io::to_json(BatchStats::of(values)); }

// (i, j) index pairs for the ceiling: every i < j, or each i against the rest.
template <typename Fn>
void for_each_ceiling_pair(std::size_t n, CeilingScheme scheme, Fn&& fn) {
  if (n < 2) throw Error("alignment", "human ceiling needs at least two batches");
  if (scheme == CeilingScheme::pairwise) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) fn(i, std::optional<std::size_t>(j));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i, std::optional<std::size_t>());
  }
}

std::string pair_label(const std::vector<std::string>& labels, std::size_t i, std::optional<std::size_t> j) {
  return labels[i] + "|" + (j ? labels[*j] : std::string("rest"));
}

const json& find_batch(const json& doc, const std::string& label, const char* what) {
  for (const auto& b : doc.at("per_batch")) {
    if (b.at("batch").get<std::string>() == label) return b;
  }
  throw Error("usi", std::string(what) + " report has no entry for batch '" + label + "'");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cli", path.string() + ": cannot write");
  out << content;
  if (!out) throw Error("cli", path.string() + ": write failed");
}

}  // namespace

void PipelineConfig::validate() const {
  if (sim_paths.empty()) throw Error("cli", "no simulator transcripts given");
  if (human_paths.empty()) throw Error("cli", "no human batch transcripts given");
  std::error_code ec;
  for (const auto& p : sim_paths) {
    if (!fs::exists(p, ec)) throw Error("cli", "simulator transcript path not found: " + p.string());
  }
  for (const auto& p : human_paths) {
    if (!fs::exists(p, ec)) throw Error("cli", "human batch path not found: " + p.string());
  }
  if (!fs::is_directory(patterns_dir, ec)) throw Error("cli", "pattern directory not found: " + patterns_dir.string());
  if (bins < 1) throw Error("cli", "bin count must be at least 1");
  if (out_dir.empty()) throw Error("cli", "no output directory given");
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  const ConfigFile cfg = ConfigFile::load(path);
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  PipelineConfig out;
  if (auto v = cfg.get_strings("run", "sim")) {
    for (const auto& p : *v) out.sim_paths.push_back(resolve(p));
  }
  if (auto v = cfg.get_strings("run", "human")) {
    for (const auto& p : *v) out.human_paths.push_back(resolve(p));
  }
  if (auto v = cfg.get_string("run", "patterns")) out.patterns_dir = resolve(*v);
  if (auto v = cfg.get_string("run", "out")) out.out_dir = resolve(*v);
  if (auto v = cfg.get_int("run", "bins")) {
    if (*v < 1) throw Error("config", "[run] bins must be at least 1");
    out.bins = static_cast<std::size_t>(*v);
  }
  if (auto v = cfg.get_int("run", "threads")) {
    if (*v < 1) throw Error("config", "[run] threads must be at least 1");
    out.threads = static_cast<std::size_t>(*v);
  }
  if (auto v = cfg.get_string("run", "ceiling")) out.ceiling = ceiling_scheme_from_name(*v);

  if (const auto* sec = cfg.section("categories")) {
    for (const auto& [name, _] : *sec) out.categories[name] = *cfg.get_string("categories", name);
  }
  if (const auto* sec = cfg.section("survey")) {
    for (const auto& [name, _] : *sec) {
      const auto field = survey_field_from_name(name);
      if (!field) throw Error("config", "[survey] unknown field '" + name + "'");
      out.survey_mapping.set(*field, *cfg.get_numbers("survey", name));
    }
  }
  if (auto v = cfg.get_strings("filter", "meta_patterns")) out.filter.meta_patterns = *v;
  if (auto v = cfg.get_strings("filter", "markup_patterns")) out.filter.markup_patterns = *v;
  if (auto labels = cfg.get_strings("judgment", "labels")) {
    auto options = cfg.get_strings("judgment", "option_labels");
    if (!options || options->size() != 5) throw Error("config", "[judgment] option_labels needs five entries");
    out.judgment_mapping.labels = *labels;
    for (std::size_t i = 0; i < 5; ++i) {
      auto it = std::find(labels->begin(), labels->end(), (*options)[i]);
      if (it == labels->end()) throw Error("config", "[judgment] label '" + (*options)[i] + "' not in labels");
      out.judgment_mapping.row_of_option[i] = static_cast<std::size_t>(it - labels->begin());
    }
  }
  return out;
}

json config_echo(const PipelineConfig& config, const PatternRegistry& registry) {
  json sims = json::array(), humans = json::array();
  for (const auto& p : config.sim_paths) sims.push_back(p.generic_string());
  for (const auto& p : config.human_paths) humans.push_back(p.generic_string());
  return json{
      {"tool", "usi-kit"},
      {"version", kVersion},
      {"bins", config.bins},
      {"difficulty", "1 - pooled human success rate per task; equal-count bins, ties by task_id"},
      {"ece_aggregation", "per-batch ECE averaged in USI; pooled ECE reported alongside"},
      {"ceiling_scheme", std::string(ceiling_scheme_name(config.ceiling))},
      {"patterns",
       {{"dir", config.patterns_dir.generic_string()},
        {"version", registry.version()},
        {"fingerprint", registry.fingerprint()}}},
      {"survey_mapping", io::to_json(config.survey_mapping)},
      {"survey_mapping_default", config.survey_mapping.is_default()},
      {"judgment_mapping", io::to_json(config.judgment_mapping)},
      {"filter", {{"meta_patterns", config.filter.meta_patterns}, {"markup_patterns", config.filter.markup_patterns}}},
      {"inputs", {{"sim", sims}, {"human", humans}}},
      {"categories", config.categories},
  };
}

json features_document(const Corpus& corpus, const PatternRegistry& registry, const json& config,
                       std::size_t threads) {
  const auto vectors = extract_all(corpus, registry, threads);
  json interactions = json::array();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& it = corpus.interactions[i];
    interactions.push_back(json{{"task_id", it.task_id}, {"run_id", it.run_id}, {"features", io::to_json(vectors[i])}});
  }
  return with_config(json{{"kind", "features"},
                          {"source", io::to_json(corpus.source)},
                          {"n_interactions", vectors.size()},
                          {"corpus", io::to_json(mean_features(vectors))},
                          {"interactions", interactions}},
                     config);
}

json align_document(const json& model, const std::vector<json>& human, CeilingScheme scheme, const json& config) {
  std::vector<LabeledFeatures> batches;
  std::set<std::string> seen;
  json labels = json::array();
  for (const auto& doc : human) {
    LabeledFeatures lf{doc.at("source").at("name").get<std::string>(), io::features_from_json(doc.at("corpus"))};
    if (!seen.insert(lf.label).second) throw Error("alignment", "human batch label '" + lf.label + "' appears twice");
    labels.push_back(lf.label);
    batches.push_back(std::move(lf));
  }
  if (batches.empty()) throw Error("alignment", "no human batches to compare against");

  json doc{{"kind", "alignment"}, {"human_batches", labels}};
  if (model.is_null()) {
    const auto cmp = human_ceiling(batches, scheme);
    doc.update(io::to_json(cmp));
    doc["source"] = io::to_json(ceiling_source());
    doc["ceiling"] = true;
    doc["ceiling_scheme"] = std::string(ceiling_scheme_name(scheme));
  } else {
    const FeatureVector model_fv = io::features_from_json(model.at("corpus"));
    const auto cmp = compare_to_batches(model_fv, batches);
    doc.update(io::to_json(cmp));
    doc["source"] = model.at("source");
    doc["ceiling"] = false;
    std::vector<FeatureVector> human_fvs;
    for (const auto& b : batches) human_fvs.push_back(b.features);
    doc["bar_chart"] = io::bar_chart(model_fv, mean_features(human_fvs));
  }
  return with_config(std::move(doc), config);
}

json ece_document(const Corpus* sim, const std::vector<Corpus>& human, std::size_t bins, CeilingScheme scheme,
                  const json& config) {
  if (human.empty()) throw Error("outcomes", "no human batches");
  const auto labels = batch_labels(human);
  std::vector<std::vector<OutcomeRecord>> human_records;
  std::vector<OutcomeRecord> pooled;
  json human_rates = json::object();
  for (std::size_t i = 0; i < human.size(); ++i) {
    human_records.push_back(outcome_records(human[i]));
    pooled.insert(pooled.end(), human_records.back().begin(), human_records.back().end());
    human_rates[labels[i]] = success_rate(human_records.back());
  }
  const BinSet binset = bin_tasks(pooled, bins);

  json per_batch = json::array();
  std::vector<double> values;
  auto add = [&](const std::string& label, const EceResult& r) {
    values.push_back(r.ece);
    per_batch.push_back(json{{"batch", label}, {"ece", r.ece}, {"sim_rate", r.sim_rate}, {"human_rate", r.human_rate}});
  };

  json doc{{"kind", "ece"}, {"bins", io::to_json(binset)}};
  if (sim) {
    const auto sim_records = outcome_records(*sim);
    for (std::size_t i = 0; i < human.size(); ++i) add(labels[i], ece_detail(sim_records, human_records[i], binset));
    doc["source"] = io::to_json(sim->source);
    doc["ceiling"] = false;
    doc["pooled"] = ece(sim_records, pooled, binset);
    doc["success_rate"] = json{{"sim", success_rate(sim_records)}, {"human", human_rates}};
  } else {
    for_each_ceiling_pair(human.size(), scheme, [&](std::size_t i, std::optional<std::size_t> j) {
      std::vector<OutcomeRecord> other;
      if (j) {
        other = human_records[*j];
      } else {
        for (std::size_t k = 0; k < human.size(); ++k) {
          if (k != i) other.insert(other.end(), human_records[k].begin(), human_records[k].end());
        }
      }
      add(pair_label(labels, i, j), ece_detail(human_records[i], other, binset));
    });
    doc["source"] = io::to_json(ceiling_source());
    doc["ceiling"] = true;
    doc["ceiling_scheme"] = std::string(ceiling_scheme_name(scheme));
    doc["pooled"] = nullptr;
    doc["success_rate"] = json{{"human", human_rates}};
  }
  doc["per_batch"] = per_batch;
  doc["stats"] = stats_json(values);
  return with_config(std::move(doc), config);
}

json eval_document(const Corpus* sim, const std::vector<Corpus>& human, const SurveyMapping& mapping,
                   CeilingScheme scheme, const json& config) {
  if (human.empty()) throw Error("surveys", "no human batches");
  const auto labels = batch_labels(human);
  json doc{{"kind", "eval"}};
  doc["source"] = io::to_json(sim ? sim->source : ceiling_source());
  doc["ceiling"] = sim == nullptr;
  if (!sim) doc["ceiling_scheme"] = std::string(ceiling_scheme_name(scheme));

  const bool sim_has = sim ? has_any_survey(*sim) : true;
  const bool human_has = std::all_of(human.begin(), human.end(), [](const Corpus& c) { return has_any_survey(c); });
  if (!sim_has || !human_has) {
    doc["available"] = false;
    doc["reason"] = !sim_has ? "simulator corpus has no survey data" : "a human batch has no survey data";
    doc["per_batch"] = json::array();
    doc["stats"] = nullptr;
    return with_config(std::move(doc), config);
  }

  std::vector<EvalReport> reports;
  if (sim) {
    const auto sim_entries = survey_entries(*sim);
    for (std::size_t i = 0; i < human.size(); ++i) {
      const auto human_entries = survey_entries(human[i]);
      reports.push_back(eval_alignment(sim_entries, human_entries, mapping));
      reports.back().batch = labels[i];
    }
  } else {
    for_each_ceiling_pair(human.size(), scheme, [&](std::size_t i, std::optional<std::size_t> j) {
      std::vector<SurveyEntry> other;
      if (j) {
        other = survey_entries(human[*j]);
      } else {
        for (std::size_t k = 0; k < human.size(); ++k) {
          if (k == i) continue;
          auto e = survey_entries(human[k]);
          other.insert(other.end(), e.begin(), e.end());
        }
      }
      reports.push_back(eval_alignment(survey_entries(human[i]), other, mapping));
      reports.back().batch = pair_label(labels, i, j);
    });
  }
  json per_batch = json::array();
  for (const auto& r : reports) per_batch.push_back(io::to_json(r));
  doc["available"] = true;
  doc["per_batch"] = per_batch;
  doc["stats"] = io::to_json(aggregate_eval(reports));
  return with_config(std::move(doc), config);
}

json usi_document(const json& align, const json& ece_doc, const json& eval, const json& config) {
  const SourceId source = io::source_from_json(align.at("source"));
  if (io::source_from_json(ece_doc.at("source")) != source) {
    throw Error("usi", "alignment and ECE reports describe different sources");
  }
  const bool with_eval = !eval.is_null() && eval.value("available", false);
  if (with_eval && io::source_from_json(eval.at("source")) != source) {
    throw Error("usi", "alignment and Eval reports describe different sources");
  }

  std::vector<UsiComponents> components;
  for (const auto& b : align.at("per_batch")) {
    UsiComponents c;
    c.batch = b.at("batch").get<std::string>();
    for (std::size_t d = 0; d < 4; ++d) c.dims[d] = b.at("dims").at("D" + std::to_string(d + 1)).get<double>();
    c.ece = find_batch(ece_doc, c.batch, "ECE").at("ece").get<double>();
    if (with_eval) c.eval = find_batch(eval, c.batch, "Eval").at("eval_score").get<double>();
    components.push_back(std::move(c));
  }
  UsiRow row = build_usi_row(source, components);
  if (ece_doc.contains("pooled") && ece_doc.at("pooled").is_number()) row.ece_pooled = ece_doc.at("pooled").get<double>();

  json row_json = io::to_json(row);
  if (align.contains("bar_chart")) row_json["bar_chart"] = align.at("bar_chart");
  return with_config(json{{"kind", "usi"}, {"rows", json::array({row_json})}}, config);
}

json contingency_document(const std::vector<Corpus>& human, const JudgmentMapping& mapping, const json& config) {
  const auto table = judgment_table(human, mapping);
  const auto stats = contingency_stats(table);
  return with_config(json{{"kind", "contingency"}, {"table", io::to_json(table)}, {"stats", io::to_json(stats)}},
                     config);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  const PatternRegistry registry = PatternRegistry::load(config.patterns_dir);
  const json echo = config_echo(config, registry);

  // Load every corpus; slots are filled by index so order is fixed.
  std::vector<fs::path> paths = config.sim_paths;
  paths.insert(paths.end(), config.human_paths.begin(), config.human_paths.end());
  std::vector<Corpus> loaded(paths.size());
  parallel_for(paths.size(), config.threads, [&](std::size_t i) { loaded[i] = load_corpus(paths[i], config.filter); });

  const std::size_t n_sim = config.sim_paths.size();
  std::vector<Corpus> sims(std::make_move_iterator(loaded.begin()), std::make_move_iterator(loaded.begin() + n_sim));
  std::vector<Corpus> humans(std::make_move_iterator(loaded.begin() + n_sim), std::make_move_iterator(loaded.end()));
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (sims[i].source.kind != SourceKind::simulator) {
      throw Error("cli", config.sim_paths[i].string() + ": expected source_kind \"simulator\"");
    }
  }
  for (std::size_t i = 0; i < humans.size(); ++i) {
    if (humans[i].source.kind != SourceKind::human_batch) {
      throw Error("cli", config.human_paths[i].string() + ": expected source_kind \"human_batch\"");
    }
  }
  batch_labels(humans);

  std::vector<json> sim_features, human_features;
  for (const auto& c : sims) sim_features.push_back(features_document(c, registry, nullptr, config.threads));
  for (const auto& c : humans) human_features.push_back(features_document(c, registry, nullptr, config.threads));

  json align_items = json::array(), ece_items = json::array(), eval_items = json::array();
  json rows = json::array();
  auto add_row = [&](const json& a, const json& e, const json& v) {
    align_items.push_back(a);
    ece_items.push_back(e);
    eval_items.push_back(v);
    rows.push_back(usi_document(a, e, v, nullptr).at("rows").at(0));
  };
  if (humans.size() >= 2) {
    add_row(align_document(nullptr, human_features, config.ceiling, nullptr),
            ece_document(nullptr, humans, config.bins, config.ceiling, nullptr),
            eval_document(nullptr, humans, config.survey_mapping, config.ceiling, nullptr));
  }
  for (std::size_t i = 0; i < sims.size(); ++i) {
    add_row(align_document(sim_features[i], human_features, config.ceiling, nullptr),
            ece_document(&sims[i], humans, config.bins, config.ceiling, nullptr),
            eval_document(&sims[i], humans, config.survey_mapping, config.ceiling, nullptr));
  }

  std::vector<UsiRow> usi_rows;
  json bar_charts = json::object();
  for (const auto& r : rows) {
    usi_rows.push_back(io::usi_row_from_json(r));
    if (r.contains("bar_chart")) bar_charts[r.at("source").at("name").get<std::string>()] = r.at("bar_chart");
  }
  const Leaderboard board = leaderboard(usi_rows, config.categories);

  json feature_items = json::array();
  for (auto& f : sim_features) feature_items.push_back(std::move(f));
  for (auto& f : human_features) feature_items.push_back(std::move(f));

  std::vector<std::pair<std::string, std::string>> outputs = {
      {"features.json", io::dump(json{{"kind", "features_set"}, {"config", echo}, {"items", feature_items}})},
      {"align.json", io::dump(json{{"kind", "alignment_set"}, {"config", echo}, {"items", align_items}})},
      {"ece.json", io::dump(json{{"kind", "ece_set"}, {"config", echo}, {"items", ece_items}})},
      {"eval.json", io::dump(json{{"kind", "eval_set"}, {"config", echo}, {"items", eval_items}})},
      {"usi.json", io::dump(json{{"kind", "usi"}, {"config", echo}, {"rows", rows}})},
      {"report.md", render_markdown(board, bar_charts, echo)},
      {"report.csv", render_csv(board, echo)},
      {"report.json", io::dump(with_config(render_json(board, bar_charts), echo))},
  };

  PipelineResult result;
  std::vector<fs::path> temporaries;
  try {
    fs::create_directories(config.out_dir);
    for (const auto& [name, content] : outputs) {
      const fs::path tmp = config.out_dir / (name + ".tmp");
      temporaries.push_back(tmp);
      write_file(tmp, content);
    }
    for (const auto& [name, _] : outputs) {
      const fs::path dest = config.out_dir / name;
      fs::rename(config.out_dir / (name + ".tmp"), dest);
      result.written.push_back(dest);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : temporaries) fs::remove(p, ec);
    for (const auto& p : result.written) fs::remove(p, ec);
    throw;
  }
  return result;
}

}  // namespace usikit
