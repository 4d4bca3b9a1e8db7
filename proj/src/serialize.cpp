#include "usikit/serialize.hpp"

#include <fstream>
#include <sstream>

#include "usikit/error.hpp"

namespace usikit::io {
namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double number_at(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw Error("io", std::string(what) + ": missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

}  // namespace

json to_json(const SourceId& s) {
  return json{{"kind", std::string(source_kind_name(s.kind))}, {"name", s.name}};
}

SourceId source_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("kind")) throw Error("io", "malformed source object");
  SourceId s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "simulator") s.kind = SourceKind::simulator;
  else if (kind == "human_batch") s.kind = SourceKind::human_batch;
  else throw Error("io", "unknown source kind '" + kind + "'");
  s.name = j.at("name").get<std::string>();
  return s;
}

json to_json(const FeatureVector& fv) {
  json j = json::object();
  for (Metric m : all_metrics()) j[std::string(metric_name(m))] = fv[m];
  return j;
}

FeatureVector features_from_json(const json& j) {
  if (!j.is_object()) throw Error("io", "feature vector must be an object");
  FeatureVector fv;
  for (Metric m : all_metrics()) {
    const std::string name(metric_name(m));
    auto it = j.find(name);
    if (it == j.end() || !it->is_number()) throw Error("io", "feature vector is missing metric '" + name + "'");
    fv[m] = it->get<double>();
  }
  return fv;
}

json to_json(const BatchStats& s) {
  return json{{"mean", s.mean}, {"std", s.std}, {"n_batches", s.n_batches}};
}

BatchStats batch_stats_from_json(const json& j) {
  BatchStats s;
  s.mean = number_at(j, "mean", "batch stats");
  s.std = number_at(j, "std", "batch stats");
  s.n_batches = static_cast<std::size_t>(number_at(j, "n_batches", "batch stats"));
  return s;
}

json to_json(const AlignmentScore& a) {
  return json{{"batch", a.batch}, {"dims", a.dims}, {"per_metric", a.per_metric}};
}

json to_json(const BatchComparison& c) {
  json per_batch = json::array();
  for (const auto& s : c.per_batch) per_batch.push_back(to_json(s));
  json dims = json::object();
  for (const auto& [k, v] : c.dims) dims[k] = to_json(v);
  return json{{"per_batch", per_batch}, {"dims", dims}};
}

json to_json(const BinSet& b) {
  json difficulty = json::object();
  for (const auto& [k, v] : b.difficulty) difficulty[k] = v;
  return json{{"count", b.bins}, {"sizes", b.sizes}, {"total", b.total}, {"assignment", b.assignment},
              {"difficulty", difficulty}};
}

json to_json(const EvalReport& r) {
  return json{{"batch", r.batch},
              {"mae", r.mae},
              {"eval_score", r.eval_score},
              {"per_dimension_mae", r.per_dimension_mae},
              {"per_dimension_delta", r.per_dimension_delta},
              {"per_dimension_delta_normalized", r.per_dimension_delta_normalized},
              {"paired_tasks", r.paired_tasks},
              {"excluded_tasks", r.excluded_tasks}};
}

json to_json(const SurveyMapping& m) {
  json j = json::object();
  for (SurveyField f : kSurveyFields) j[std::string(survey_field_name(f))] = m.values(f);
  return j;
}

json to_json(const JudgmentMapping& m) {
  json rows = json::object();
  static constexpr const char* kOptions[] = {"no_policy", "no_failed", "partially", "yes", "fully"};
  for (std::size_t i = 0; i < m.row_of_option.size(); ++i) rows[kOptions[i]] = m.labels[m.row_of_option[i]];
  return json{{"labels", m.labels}, {"task_success_option_to_label", rows}};
}

json to_json(const ContingencyTable& t) {
  return json{{"row_labels", t.row_labels}, {"col_labels", t.col_labels}, {"counts", t.counts}, {"n", t.total()}};
}

json to_json(const ContingencyStats& s) {
  return json{{"chi_square", s.chi_square}, {"cramers_v", s.cramers_v}, {"dof", s.dof}};
}

json to_json(const ConfusionMatrix& m) {
  return json{{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}, {"n", m.n()}};
}

json to_json(const QcStats& s) {
  return json{{"precision", opt(s.precision)},
              {"recall", opt(s.recall)},
              {"accuracy", opt(s.accuracy)},
              {"kappa", opt(s.kappa)}};
}

json to_json(const UsiComponents& c) {
  return json{{"batch", c.batch},
              {"dims", c.dims},
              {"ece", c.ece},
              {"eval", opt(c.eval)},
              {"usi", usi_score(c)}};
}

json to_json(const UsiRow& r) {
  json dims = json::object();
  for (std::size_t d = 0; d < 4; ++d) dims["D" + std::to_string(d + 1)] = to_json(r.dims[d]);
  json batches = json::array();
  for (const auto& b : r.batches) batches.push_back(to_json(b));
  return json{{"source", to_json(r.source)},
              {"dims", dims},
              {"eval", r.eval ? to_json(*r.eval) : json(nullptr)},
              {"ece", to_json(r.ece)},
              {"ece_pooled", opt(r.ece_pooled)},
              {"usi", to_json(r.usi)},
              {"no_survey_variant", r.no_survey_variant},
              {"batches", batches}};
}

UsiRow usi_row_from_json(const json& j) {
  if (!j.is_object()) throw Error("io", "USI row must be an object");
  UsiRow r;
  r.source = source_from_json(j.at("source"));
  for (std::size_t d = 0; d < 4; ++d) r.dims[d] = batch_stats_from_json(j.at("dims").at("D" + std::to_string(d + 1)));
  if (j.contains("eval") && !j.at("eval").is_null()) r.eval = batch_stats_from_json(j.at("eval"));
  r.ece = batch_stats_from_json(j.at("ece"));
  if (j.contains("ece_pooled") && !j.at("ece_pooled").is_null()) r.ece_pooled = j.at("ece_pooled").get<double>();
  r.usi = batch_stats_from_json(j.at("usi"));
  r.no_survey_variant = j.value("no_survey_variant", !r.eval.has_value());
  if (j.contains("batches")) {
    for (const auto& b : j.at("batches")) {
      UsiComponents c;
      c.batch = b.value("batch", "");
      c.dims = b.at("dims").get<std::array<double, 4>>();
      c.ece = b.at("ece").get<double>();
      if (!b.at("eval").is_null()) c.eval = b.at("eval").get<double>();
      r.batches.push_back(std::move(c));
    }
  }
  return r;
}

json bar_chart(const FeatureVector& model, const FeatureVector& human) {
  json rows = json::array();
  for (Metric m : all_metrics()) {
    rows.push_back(json{{"metric", std::string(metric_name(m))}, {"model_value", model[m]}, {"human_value", human[m]}});
  }
  return rows;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("io", path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", path.string() + ": cannot write");
  out << dump(j);
  if (!out) throw Error("io", path.string() + ": write failed");
}

}  // namespace usikit::io
