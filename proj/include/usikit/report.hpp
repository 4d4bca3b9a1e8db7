#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "usikit/usi.hpp"

namespace usikit {

enum class ReportFormat { md, csv, json };

ReportFormat report_format_from_name(std::string_view name);

// Leaderboard table. Scores use one decimal, ECE three; the best value per
// column is bold in markdown; rows without survey data carry a dagger. A
// non-null `config` is appended (markdown) or prepended as '#' lines (csv).
std::string render_markdown(const Leaderboard& board, const nlohmann::json& bar_charts,
                            const nlohmann::json& config = nullptr);
std::string render_csv(const Leaderboard& board, const nlohmann::json& config = nullptr);
nlohmann::json render_json(const Leaderboard& board, const nlohmann::json& bar_charts);

// Long-format CSV of source, metric, model_value, human_value.
std::string render_bar_chart_csv(const nlohmann::json& bar_charts);

}  // namespace usikit
