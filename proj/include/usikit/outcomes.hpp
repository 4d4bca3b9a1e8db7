#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usikit/corpus.hpp"

namespace usikit {

struct OutcomeRecord {
  std::string task_id;
  int reward = 0;
  std::int64_t run_id = 0;
};

// Throws when an interaction has no recorded reward.
std::vector<OutcomeRecord> outcome_records(const Corpus& corpus);

// Per-task success rate (mean over that task's records), keyed by task_id.
std::map<std::string, double> task_success_rates(std::span<const OutcomeRecord> records);

// Mean over tasks of the per-task mean reward.
double success_rate(std::span<const OutcomeRecord> records);

struct BinSet {
  std::size_t bins = 1;
  std::map<std::string, std::size_t> assignment;  // task_id -> bin
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  std::map<std::string, double> difficulty;       // 1 - pooled human success
};

// Sorts tasks by difficulty (ties by task_id) and cuts them into `bins`
// equal-count groups: sorted position i goes to bin floor(i * bins / n).
BinSet bin_tasks(std::span<const OutcomeRecord> human_records, std::size_t bins);

struct EceResult {
  double ece = 0.0;
  std::vector<double> sim_rate;    // per bin
  std::vector<double> human_rate;  // per bin
};

// Sum over bins of |S_b|/N * |sim rate - human rate|. Runs are averaged within
// a task first. Throws listing task_ids when the two sides or the bins do not
// cover the same tasks.
EceResult ece_detail(std::span<const OutcomeRecord> sim, std::span<const OutcomeRecord> human,
                     const BinSet& bins);
double ece(std::span<const OutcomeRecord> sim, std::span<const OutcomeRecord> human,
           const BinSet& bins);

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t total() const;
  ContingencyTable transposed() const;
};

struct ContingencyStats {
  double chi_square = 0.0;
  double cramers_v = 0.0;
  std::size_t dof = 0;
};

ContingencyStats contingency_stats(const ContingencyTable& table);

// Collapse of the 5-way task-success answer into judgment categories.
struct JudgmentMapping {
  std::vector<std::string> labels{"Yes", "No", "Policy-constrained"};
  // task_success option index -> row in `labels`
  std::array<std::size_t, 5> row_of_option{2, 1, 1, 0, 0};
};

// Rows: judgment categories; columns: reward 0 and 1. Interactions without a
// reward or without a task_success answer are skipped.
ContingencyTable judgment_table(std::span<const Corpus> corpora, const JudgmentMapping& mapping = {});

}  // namespace usikit
