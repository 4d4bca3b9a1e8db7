#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace usikit {

// The eight scored questions of the post-task survey, in questionnaire order.
enum class SurveyField : std::size_t {
  task_success,
  efficiency,
  question_amount,
  answer_effort,
  human_likeness,
  interaction_flow,
  overall_score,
  reuse,
};

inline constexpr std::size_t kSurveyFieldCount = 8;

inline constexpr std::array<SurveyField, kSurveyFieldCount> kSurveyFields = {
    SurveyField::task_success,   SurveyField::efficiency,
    SurveyField::question_amount, SurveyField::answer_effort,
    SurveyField::human_likeness, SurveyField::interaction_flow,
    SurveyField::overall_score,  SurveyField::reuse,
};

std::string_view survey_field_name(SurveyField field);
std::optional<SurveyField> survey_field_from_name(std::string_view name);

// Number of answer options, e.g. 5 for task_success.
std::size_t survey_option_count(SurveyField field);

// Option indices are 0-based in the order the options are printed on the
// questionnaire. A field may be unanswered; a response is scorable only when
// all eight are present.
struct SurveyResponse {
  std::array<std::optional<int>, kSurveyFieldCount> options{};
  std::array<std::string, 2> free_text{};

  std::optional<int>& operator[](SurveyField f) {
    return options[static_cast<std::size_t>(f)];
  }
  const std::optional<int>& operator[](SurveyField f) const {
    return options[static_cast<std::size_t>(f)];
  }

  bool scorable() const;

  friend bool operator==(const SurveyResponse&, const SurveyResponse&) = default;
};

}  // namespace usikit
