#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usikit/corpus.hpp"
#include "usikit/stats.hpp"
#include "usikit/survey_response.hpp"

namespace usikit {

// Numeric value of each answer option per field. The default spaces options
// evenly on [0,1] in questionnaire order: index / (k - 1).
class SurveyMapping {
 public:
  SurveyMapping();

  // Values must lie in [0,1] and there must be one per option.
  void set(SurveyField field, std::vector<double> values);
  const std::vector<double>& values(SurveyField field) const;

  double normalize(SurveyField field, int option_index) const;
  bool is_default() const;

 private:
  std::array<std::vector<double>, kSurveyFieldCount> values_;
};

double normalize_response(SurveyField field, int option_index);

// Mean absolute difference over paired field values.
double task_mae(std::span<const double> sim, std::span<const double> human);

struct SurveyEntry {
  std::string task_id;
  std::optional<SurveyResponse> survey;
};

std::vector<SurveyEntry> survey_entries(const Corpus& corpus);
bool has_any_survey(const Corpus& corpus);

struct EvalReport {
  std::map<std::string, double> per_dimension_mae;
  double mae = 0.0;
  double eval_score = 100.0;
  // mean(sim - human) on the raw option-index scale
  std::map<std::string, double> per_dimension_delta;
  // same, on the normalized scale
  std::map<std::string, double> per_dimension_delta_normalized;
  std::size_t paired_tasks = 0;
  std::size_t excluded_tasks = 0;
  std::string batch;
};

// Pairs on task_id. Several entries for one task (runs) are averaged first.
// A task whose survey is absent on either side is excluded and counted; a
// task present on only one side is an error, as is a partially answered
// survey.
EvalReport eval_alignment(std::span<const SurveyEntry> sim, std::span<const SurveyEntry> human,
                          const SurveyMapping& mapping = SurveyMapping{});

BatchStats aggregate_eval(std::span<const EvalReport> reports);

}  // namespace usikit
