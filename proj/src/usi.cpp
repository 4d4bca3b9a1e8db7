#include "usikit/usi.hpp"

#include <algorithm>
#include <cmath>

#include "usikit/error.hpp"

namespace usikit {
namespace {

void check_range(double v, double hi, const char* what) {
  if (!(v >= 0.0 && v <= hi)) {
    throw Error("usi", std::string(what) + " = " + std::to_string(v) + " outside [0, " + std::to_string(hi) + "]");
  }
}

std::optional<double> column_value(const UsiRow& row, Column c) {
  switch (c) {
    case Column::d1: return row.dims[0].mean;
    case Column::d2: return row.dims[1].mean;
    case Column::d3: return row.dims[2].mean;
    case Column::d4: return row.dims[3].mean;
    case Column::eval: return row.eval ? std::optional<double>(row.eval->mean) : std::nullopt;
    case Column::ece: return row.ece.mean;
    case Column::usi: return row.usi.mean;
  }
  return std::nullopt;
}

}  // namespace

double usi_score(double d1, double d2, double d3, double d4, double ece, std::optional<double> eval) {
  check_range(d1, 100.0, "D1");
  check_range(d2, 100.0, "D2");
  check_range(d3, 100.0, "D3");
  check_range(d4, 100.0, "D4");
  check_range(ece, 1.0, "ECE");
  const double calibration = (1.0 - ece) * 100.0;
  if (eval) {
    check_range(*eval, 100.0, "Eval");
    return (d1 + d2 + d3 + d4 + calibration + *eval) / 6.0;
  }
  return (d1 + d2 + d3 + d4 + calibration) / 5.0;
}

double usi_score(const UsiComponents& c) {
  return usi_score(c.dims[0], c.dims[1], c.dims[2], c.dims[3], c.ece, c.eval);
}

UsiRow build_usi_row(SourceId source, std::span<const UsiComponents> batches) {
  if (batches.empty()) throw Error("usi", "no batch components for '" + source.name + "'");
  const bool with_eval = batches.front().eval.has_value();
  for (const auto& b : batches) {
    if (b.eval.has_value() != with_eval) {
      throw Error("usi", "batches for '" + source.name + "' disagree on whether Eval is present");
    }
  }

  UsiRow row;
  row.source = std::move(source);
  row.no_survey_variant = !with_eval;
  row.batches.assign(batches.begin(), batches.end());

  std::vector<double> col;
  for (std::size_t d = 0; d < 4; ++d) {
    col.clear();
    for (const auto& b : batches) col.push_back(b.dims[d]);
    row.dims[d] = BatchStats::of(col);
  }
  col.clear();
  for (const auto& b : batches) col.push_back(b.ece);
  row.ece = BatchStats::of(col);
  if (with_eval) {
    col.clear();
    for (const auto& b : batches) col.push_back(*b.eval);
    row.eval = BatchStats::of(col);
  }
  col.clear();
  for (const auto& b : batches) col.push_back(usi_score(b));
  row.usi = BatchStats::of(col);
  return row;
}

std::string_view column_name(Column c) {
  switch (c) {
    case Column::d1: return "D1";
    case Column::d2: return "D2";
    case Column::d3: return "D3";
    case Column::d4: return "D4";
    case Column::eval: return "Eval";
    case Column::ece: return "ECE";
    case Column::usi: return "USI";
  }
  return "";
}

bool Leaderboard::is_best(Column c, const std::string& name) const {
  auto it = best.find(c);
  return it != best.end() && it->second.count(name) > 0;
}

Leaderboard leaderboard(std::vector<UsiRow> rows, const std::map<std::string, std::string>& grouping) {
  std::map<std::string, std::vector<UsiRow>> by_category;
  for (auto& row : rows) {
    std::string category = "custom";
    if (row.source.kind == SourceKind::human_batch) {
      category = "human";
    } else if (auto it = grouping.find(row.source.name); it != grouping.end()) {
      category = it->second;
    }
    by_category[category].push_back(std::move(row));
  }

  Leaderboard board;
  auto emit = [&](const std::string& category) {
    auto it = by_category.find(category);
    if (it == by_category.end()) return;
    auto group_rows = std::move(it->second);
    by_category.erase(it);
    std::sort(group_rows.begin(), group_rows.end(), [](const UsiRow& a, const UsiRow& b) {
      if (a.usi.mean != b.usi.mean) return a.usi.mean > b.usi.mean;
      return a.source.name < b.source.name;
    });
    board.groups.push_back(LeaderboardGroup{category, std::move(group_rows)});
  };
  for (auto category : kCategoryOrder) emit(std::string(category));
  while (!by_category.empty()) emit(by_category.begin()->first);

  for (Column c : kColumns) {
    std::optional<double> best_value;
    for (const auto& g : board.groups) {
      if (g.category == "human") continue;
      for (const auto& r : g.rows) {
        const auto v = column_value(r, c);
        if (!v) continue;
        const bool better = !best_value || (c == Column::ece ? *v < *best_value : *v > *best_value);
        if (better) best_value = v;
      }
    }
    if (!best_value) continue;
    for (const auto& g : board.groups) {
      if (g.category == "human") continue;
      for (const auto& r : g.rows) {
        if (column_value(r, c) == best_value) board.best[c].insert(r.source.name);
      }
    }
  }
  return board;
}

}  // namespace usikit
