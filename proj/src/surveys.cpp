#include "usikit/surveys.hpp"

#include <cmath>
#include <set>

#include "usikit/error.hpp"

namespace usikit {
namespace {

constexpr std::array<std::string_view, kSurveyFieldCount> kFieldNames = {
    "task_success",   "efficiency",       "question_amount", "answer_effort",
    "human_likeness", "interaction_flow", "overall_score",   "reuse",
};
constexpr std::array<std::size_t, kSurveyFieldCount> kOptionCounts = {5, 4, 3, 3, 3, 4, 5, 5};

std::size_t idx(SurveyField f) { return static_cast<std::size_t>(f); }

// Per-task accumulation over runs: normalized and raw option means per field.
struct TaskSurvey {
  std::array<double, kSurveyFieldCount> normalized{};
  std::array<double, kSurveyFieldCount> raw{};
  std::size_t responses = 0;
};

std::map<std::string, TaskSurvey> group_by_task(std::span<const SurveyEntry> entries, const SurveyMapping& mapping,
                                                std::string_view side) {
  std::map<std::string, TaskSurvey> out;
  for (const auto& e : entries) {
    auto& task = out[e.task_id];
    if (!e.survey) continue;
    for (SurveyField f : kSurveyFields) {
      const auto& answer = (*e.survey)[f];
      if (!answer) {
        throw Error("surveys", std::string(side) + " survey for task " + e.task_id + " is missing field '" +
                                   std::string(survey_field_name(f)) + "'");
      }
      task.normalized[idx(f)] += mapping.normalize(f, *answer);
      task.raw[idx(f)] += *answer;
    }
    ++task.responses;
  }
  for (auto& [_, task] : out) {
    if (task.responses == 0) continue;
    for (std::size_t i = 0; i < kSurveyFieldCount; ++i) {
      task.normalized[i] /= static_cast<double>(task.responses);
      task.raw[i] /= static_cast<double>(task.responses);
    }
  }
  return out;
}

}  // namespace

std::string_view survey_field_name(SurveyField field) { return kFieldNames[idx(field)]; }

std::optional<SurveyField> survey_field_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSurveyFieldCount; ++i) {
    if (kFieldNames[i] == name) return static_cast<SurveyField>(i);
  }
  return std::nullopt;
}

std::size_t survey_option_count(SurveyField field) { return kOptionCounts[idx(field)]; }

bool SurveyResponse::scorable() const {
  for (const auto& o : options) {
    if (!o) return false;
  }
  return true;
}

SurveyMapping::SurveyMapping() {
  for (SurveyField f : kSurveyFields) {
    const std::size_t k = survey_option_count(f);
    auto& v = values_[idx(f)];
    for (std::size_t i = 0; i < k; ++i) v.push_back(static_cast<double>(i) / static_cast<double>(k - 1));
  }
}

void SurveyMapping::set(SurveyField field, std::vector<double> values) {
  if (values.size() != survey_option_count(field)) {
    throw Error("surveys", "mapping for '" + std::string(survey_field_name(field)) + "' needs " +
                               std::to_string(survey_option_count(field)) + " values");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error("surveys", "mapping values for '" + std::string(survey_field_name(field)) + "' must lie in [0,1]");
    }
  }
  values_[idx(field)] = std::move(values);
}

const std::vector<double>& SurveyMapping::values(SurveyField field) const { return values_[idx(field)]; }

double SurveyMapping::normalize(SurveyField field, int option_index) const {
  const auto& v = values_[idx(field)];
  if (option_index < 0 || static_cast<std::size_t>(option_index) >= v.size()) {
    throw Error("surveys", "option " + std::to_string(option_index) + " out of range for '" +
                               std::string(survey_field_name(field)) + "'");
  }
  return v[static_cast<std::size_t>(option_index)];
}

bool SurveyMapping::is_default() const {
  const SurveyMapping reference;
  return values_ == reference.values_;
}

double normalize_response(SurveyField field, int option_index) {
  static const SurveyMapping mapping;
  return mapping.normalize(field, option_index);
}

double task_mae(std::span<const double> sim, std::span<const double> human) {
  if (sim.size() != human.size() || sim.empty()) throw Error("surveys", "MAE needs two equal-length nonempty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) sum += std::abs(sim[i] - human[i]);
  return sum / static_cast<double>(sim.size());
}

std::vector<SurveyEntry> survey_entries(const Corpus& corpus) {
  std::vector<SurveyEntry> out;
  out.reserve(corpus.interactions.size());
  for (const auto& it : corpus.interactions) out.push_back(SurveyEntry{it.task_id, it.survey});
  return out;
}

bool has_any_survey(const Corpus& corpus) {
  for (const auto& it : corpus.interactions) {
    if (it.survey) return true;
  }
  return false;
}

EvalReport eval_alignment(std::span<const SurveyEntry> sim, std::span<const SurveyEntry> human,
                          const SurveyMapping& mapping) {
  const auto sim_tasks = group_by_task(sim, mapping, "simulator");
  const auto human_tasks = group_by_task(human, mapping, "human");

  std::vector<std::string> unpaired;
  for (const auto& [t, _] : sim_tasks) {
    if (!human_tasks.count(t)) unpaired.push_back(t);
  }
  for (const auto& [t, _] : human_tasks) {
    if (!sim_tasks.count(t)) unpaired.push_back(t);
  }
  if (!unpaired.empty()) {
    std::string list;
    for (const auto& t : unpaired) list += (list.empty() ? "" : ", ") + t;
    throw Error("surveys", "unpaired tasks: " + list);
  }

  EvalReport report;
  std::array<double, kSurveyFieldCount> abs_sum{}, delta_sum{}, delta_norm_sum{};
  double mae_sum = 0.0;
  for (const auto& [task, s] : sim_tasks) {
    const auto& h = human_tasks.at(task);
    if (s.responses == 0 || h.responses == 0) {
      ++report.excluded_tasks;
      continue;
    }
    ++report.paired_tasks;
    mae_sum += task_mae(s.normalized, h.normalized);
    for (std::size_t i = 0; i < kSurveyFieldCount; ++i) {
      abs_sum[i] += std::abs(s.normalized[i] - h.normalized[i]);
      delta_sum[i] += s.raw[i] - h.raw[i];
      delta_norm_sum[i] += s.normalized[i] - h.normalized[i];
    }
  }
  if (report.paired_tasks == 0) throw Error("surveys", "no task has a survey on both sides");

  const double n = static_cast<double>(report.paired_tasks);
  report.mae = mae_sum / n;
  report.eval_score = (1.0 - report.mae) * 100.0;
  for (SurveyField f : kSurveyFields) {
    const std::string name(survey_field_name(f));
    report.per_dimension_mae[name] = abs_sum[idx(f)] / n;
    report.per_dimension_delta[name] = delta_sum[idx(f)] / n;
    report.per_dimension_delta_normalized[name] = delta_norm_sum[idx(f)] / n;
  }
  return report;
}

BatchStats aggregate_eval(std::span<const EvalReport> reports) {
  if (reports.empty()) throw Error("surveys", "no batch reports to aggregate");
  std::vector<double> scores;
  for (const auto& r : reports) scores.push_back(r.eval_score);
  return BatchStats::of(scores);
}

}  // namespace usikit
