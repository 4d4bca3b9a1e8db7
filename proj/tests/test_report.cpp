#include <gtest/gtest.h>

#include "usikit/error.hpp"
#include "usikit/report.hpp"
#include "usikit/serialize.hpp"

namespace usikit {
namespace {

using nlohmann::json;

Leaderboard board() {
  const std::vector<UsiComponents> with_eval{{{60, 70, 80, 90}, 0.2, 75.0, "a"}, {{62, 72, 82, 92}, 0.1, 77.0, "b"}};
  const std::vector<UsiComponents> without{{{50, 50, 50, 50}, 0.5, std::nullopt, "a"}};
  std::vector<UsiRow> rows{build_usi_row({SourceKind::simulator, "good, sim"}, with_eval),
                           build_usi_row({SourceKind::simulator, "plain"}, without)};
  return leaderboard(rows, {{"good, sim", "proprietary"}});
}

TEST(Report, MarkdownMarksBestAndDagger) {
  const json charts = {{"plain", json::array({json{{"metric", "polite_pct"}, {"model_value", 12.5}, {"human_value", 3.0}}})}};
  const auto md = render_markdown(board(), charts);
  EXPECT_NE(md.find("| proprietary | good, sim | **61.0 ± 1.0**"), std::string::npos) << md;
  EXPECT_NE(md.find("plain†"), std::string::npos);
  EXPECT_NE(md.find("**0.150 ± 0.050**"), std::string::npos);
  EXPECT_NE(md.find("| n/a |"), std::string::npos);
  EXPECT_NE(md.find("| plain | polite_pct | 12.50 | 3.00 |"), std::string::npos);
}

TEST(Report, CsvQuotesAndBlankEval) {
  const auto csv = render_csv(board());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "group,model,no_survey_variant,D1_mean,D1_std,D2_mean,D2_std,D3_mean,D3_std,D4_mean,D4_std,"
            "Eval_mean,Eval_std,ECE_mean,ECE_std,USI_mean,USI_std");
  EXPECT_NE(csv.find("proprietary,\"good, sim\",false,61,1,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("custom,plain,true,50,0,50,0,50,0,50,0,,,0.5,0,50,0"), std::string::npos) << csv;
}

TEST(Report, JsonRoundTripsRows) {
  const auto j = render_json(board(), json());
  EXPECT_EQ(j.at("kind"), "leaderboard");
  EXPECT_EQ(j.at("best").at("USI"), json::array({"good, sim"}));
  const auto row = io::usi_row_from_json(j.at("groups")[1].at("rows")[0]);
  EXPECT_EQ(row.source.name, "plain");
  EXPECT_TRUE(row.no_survey_variant);
  EXPECT_DOUBLE_EQ(row.usi.mean, 50.0);
}

TEST(Report, BarChartCsvAndFormats) {
  const json charts = {{"m", json::array({json{{"metric", "open_wds"}, {"model_value", 40.0}, {"human_value", 6.5}}})}};
  EXPECT_EQ(render_bar_chart_csv(charts), "model,metric,model_value,human_value\nm,open_wds,40,6.5\n");
  EXPECT_EQ(report_format_from_name("markdown"), ReportFormat::md);
  EXPECT_EQ(report_format_from_name("csv"), ReportFormat::csv);
  EXPECT_THROW(report_format_from_name("xlsx"), Error);
}

}  // namespace
}  // namespace usikit
