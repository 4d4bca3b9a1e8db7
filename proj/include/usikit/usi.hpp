#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usikit/corpus.hpp"
#include "usikit/stats.hpp"

namespace usikit {

// One batch's inputs to the index: D1..D4 and Eval on [0,100], ECE on [0,1].
struct UsiComponents {
  std::array<double, 4> dims{};
  double ece = 0.0;
  std::optional<double> eval;
  std::string batch;
};

// (D1+D2+D3+D4+(1-ECE)*100+Eval)/6, or the five-term mean without Eval.
double usi_score(double d1, double d2, double d3, double d4, double ece,
                 std::optional<double> eval);
double usi_score(const UsiComponents& c);

struct UsiRow {
  SourceId source;
  std::array<BatchStats, 4> dims{};
  std::optional<BatchStats> eval;
  BatchStats ece;
  BatchStats usi;
  std::optional<double> ece_pooled;
  bool no_survey_variant = false;
  std::vector<UsiComponents> batches;
};

// Per-batch USI from per-batch components, then mean/std of every column.
// All batches must agree on whether Eval is present.
UsiRow build_usi_row(SourceId source, std::span<const UsiComponents> batches);

inline constexpr std::string_view kCategoryOrder[] = {
    "human", "proprietary", "open-source", "specialized", "custom",
};

enum class Column { d1, d2, d3, d4, eval, ece, usi };
inline constexpr std::array<Column, 7> kColumns = {Column::d1, Column::d2,   Column::d3, Column::d4,
                                                   Column::eval, Column::ece, Column::usi};
std::string_view column_name(Column c);

struct LeaderboardGroup {
  std::string category;
  std::vector<UsiRow> rows;
};

struct Leaderboard {
  std::vector<LeaderboardGroup> groups;
  // column -> source names holding the best value among non-human rows
  std::map<Column, std::set<std::string>> best;

  bool is_best(Column c, const std::string& name) const;
};

// Groups rows by category (human batches always under "human", unmapped
// sources under "custom"), sorts each group by USI descending with ties broken
// by name, and marks the best value per column (lowest for ECE).
Leaderboard leaderboard(std::vector<UsiRow> rows, const std::map<std::string, std::string>& grouping);

}  // namespace usikit
