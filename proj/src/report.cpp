#include "usikit/report.hpp"

#include <sstream>

#include <fmt/format.h>

#include "usikit/error.hpp"
#include "usikit/serialize.hpp"

namespace usikit {
namespace {

using nlohmann::json;

constexpr const char* kDagger = "†";

std::string stat_cell(const BatchStats& s, int precision) {
  return fmt::format("{:.{}f} ± {:.{}f}", s.mean, precision, s.std, precision);
}

std::string display_name(const UsiRow& r) {
  return r.no_survey_variant ? r.source.name + kDagger : r.source.name;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

ReportFormat report_format_from_name(std::string_view name) {
  if (name == "md" || name == "markdown") return ReportFormat::md;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw Error("cli", "unknown report format '" + std::string(name) + "' (expected md, csv or json)");
}

std::string render_markdown(const Leaderboard& board, const json& bar_charts, const json& config) {
  std::ostringstream os;
  os << "| Group | Model | D1 Comm. | D2 Info. | D3 Clarif. | D4 React. | Eval | ECE (lower is better) | USI |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& g : board.groups) {
    for (const auto& r : g.rows) {
      auto cell = [&](Column c, const std::string& text) {
        return board.is_best(c, r.source.name) ? "**" + text + "**" : text;
      };
      os << "| " << g.category << " | " << display_name(r);
      for (std::size_t d = 0; d < 4; ++d) os << " | " << cell(kColumns[d], stat_cell(r.dims[d], 1));
      os << " | " << (r.eval ? cell(Column::eval, stat_cell(*r.eval, 1)) : std::string("n/a"));
      os << " | " << cell(Column::ece, stat_cell(r.ece, 3));
      os << " | " << cell(Column::usi, stat_cell(r.usi, 1)) << " |\n";
    }
  }
  os << "\nScores are mean ± std across human batches. " << kDagger
     << " marks simulators without survey data (USI over five components). Bold marks the best simulator per column.\n";

  if (bar_charts.is_object() && !bar_charts.empty()) {
    os << "\n## Per-metric values\n\n| Model | Metric | Model value | Human value |\n|---|---|---|---|\n";
    for (const auto& [source, rows] : bar_charts.items()) {
      for (const auto& row : rows) {
        os << "| " << source << " | " << row.at("metric").get<std::string>() << " | "
           << fmt::format("{:.2f}", row.at("model_value").get<double>()) << " | "
           << fmt::format("{:.2f}", row.at("human_value").get<double>()) << " |\n";
      }
    }
  }
  if (!config.is_null()) os << "\n## Configuration\n\n```json\n" << config.dump(2) << "\n```\n";
  return os.str();
}

std::string render_csv(const Leaderboard& board, const json& config) {
  std::ostringstream os;
  if (!config.is_null()) {
    std::istringstream lines(config.dump(2));
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  }
  os << "group,model,no_survey_variant";
  for (Column c : kColumns) os << ',' << column_name(c) << "_mean," << column_name(c) << "_std";
  os << '\n';
  for (const auto& g : board.groups) {
    for (const auto& r : g.rows) {
      os << csv_field(g.category) << ',' << csv_field(r.source.name) << ',' << (r.no_survey_variant ? "true" : "false");
      for (std::size_t d = 0; d < 4; ++d) os << ',' << fmt::format("{}", r.dims[d].mean) << ',' << fmt::format("{}", r.dims[d].std);
      if (r.eval) os << ',' << fmt::format("{}", r.eval->mean) << ',' << fmt::format("{}", r.eval->std);
      else os << ",,";
      os << ',' << fmt::format("{}", r.ece.mean) << ',' << fmt::format("{}", r.ece.std);
      os << ',' << fmt::format("{}", r.usi.mean) << ',' << fmt::format("{}", r.usi.std) << '\n';
    }
  }
  return os.str();
}

json render_json(const Leaderboard& board, const json& bar_charts) {
  json groups = json::array();
  for (const auto& g : board.groups) {
    json rows = json::array();
    for (const auto& r : g.rows) rows.push_back(io::to_json(r));
    groups.push_back(json{{"category", g.category}, {"rows", rows}});
  }
  json best = json::object();
  for (const auto& [c, names] : board.best) best[std::string(column_name(c))] = names;
  return json{{"kind", "leaderboard"}, {"groups", groups}, {"best", best},
              {"bar_chart", bar_charts.is_null() ? json::object() : bar_charts}};
}

std::string render_bar_chart_csv(const json& bar_charts) {
  std::ostringstream os;
  os << "model,metric,model_value,human_value\n";
  if (!bar_charts.is_object()) return os.str();
  for (const auto& [source, rows] : bar_charts.items()) {
    for (const auto& row : rows) {
      os << csv_field(source) << ',' << row.at("metric").get<std::string>() << ','
         << fmt::format("{}", row.at("model_value").get<double>()) << ','
         << fmt::format("{}", row.at("human_value").get<double>()) << '\n';
    }
  }
  return os.str();
}

}  // namespace usikit
