#include "usikit/outcomes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "usikit/error.hpp"

namespace usikit {
namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

std::vector<OutcomeRecord> outcome_records(const Corpus& corpus) {
  std::vector<OutcomeRecord> out;
  out.reserve(corpus.interactions.size());
  for (const auto& it : corpus.interactions) {
    if (!it.reward) {
      throw Error("outcomes", "source '" + corpus.source.name + "': task " + it.task_id + " run " +
                                  std::to_string(it.run_id) + " has no recorded reward");
    }
    out.push_back(OutcomeRecord{it.task_id, *it.reward, it.run_id});
  }
  return out;
}

std::map<std::string, double> task_success_rates(std::span<const OutcomeRecord> records) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (r.reward != 0 && r.reward != 1) {
      throw Error("outcomes", "reward for task " + r.task_id + " must be 0 or 1");
    }
    auto& [sum, n] = acc[r.task_id];
    sum += r.reward;
    ++n;
  }
  std::map<std::string, double> rates;
  for (const auto& [task, sn] : acc) rates[task] = sn.first / static_cast<double>(sn.second);
  return rates;
}

double success_rate(std::span<const OutcomeRecord> records) {
  if (records.empty()) throw Error("outcomes", "success rate of an empty record set");
  const auto rates = task_success_rates(records);
  double sum = 0.0;
  for (const auto& [_, r] : rates) sum += r;
  return sum / static_cast<double>(rates.size());
}

BinSet bin_tasks(std::span<const OutcomeRecord> human_records, std::size_t bins) {
  if (bins < 1) throw Error("outcomes", "bin count must be at least 1");
  const auto rates = task_success_rates(human_records);
  if (bins > rates.size()) {
    throw Error("outcomes", "bin count " + std::to_string(bins) + " exceeds the number of tasks (" +
                                std::to_string(rates.size()) + ")");
  }
  std::vector<std::pair<double, std::string>> order;
  order.reserve(rates.size());
  BinSet set;
  for (const auto& [task, rate] : rates) {
    const double difficulty = 1.0 - rate;
    set.difficulty[task] = difficulty;
    order.emplace_back(difficulty, task);
  }
  std::sort(order.begin(), order.end());

  set.bins = bins;
  set.total = order.size();
  set.sizes.assign(bins, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t b = i * bins / order.size();
    set.assignment[order[i].second] = b;
    ++set.sizes[b];
  }
  return set;
}

EceResult ece_detail(std::span<const OutcomeRecord> sim, std::span<const OutcomeRecord> human, const BinSet& bins) {
  const auto sim_rates = task_success_rates(sim);
  const auto human_rates = task_success_rates(human);

  std::set<std::string> all;
  for (const auto& [t, _] : sim_rates) all.insert(t);
  for (const auto& [t, _] : human_rates) all.insert(t);
  for (const auto& [t, _] : bins.assignment) all.insert(t);
  std::vector<std::string> unpaired;
  for (const auto& t : all) {
    if (!sim_rates.count(t) || !human_rates.count(t) || !bins.assignment.count(t)) unpaired.push_back(t);
  }
  if (!unpaired.empty()) throw Error("outcomes", "unpaired tasks: " + join_ids(unpaired));
  if (all.empty()) throw Error("outcomes", "no paired tasks");

  std::vector<double> sim_sum(bins.bins, 0.0), human_sum(bins.bins, 0.0);
  std::vector<std::size_t> count(bins.bins, 0);
  for (const auto& [task, b] : bins.assignment) {
    if (b >= bins.bins) throw Error("outcomes", "task " + task + " assigned to bin out of range");
    sim_sum[b] += sim_rates.at(task);
    human_sum[b] += human_rates.at(task);
    ++count[b];
  }

  EceResult result;
  result.sim_rate.assign(bins.bins, 0.0);
  result.human_rate.assign(bins.bins, 0.0);
  const double total = static_cast<double>(bins.assignment.size());
  for (std::size_t b = 0; b < bins.bins; ++b) {
    if (count[b] == 0) continue;
    const double n = static_cast<double>(count[b]);
    result.sim_rate[b] = sim_sum[b] / n;
    result.human_rate[b] = human_sum[b] / n;
    result.ece += (n / total) * std::abs(result.sim_rate[b] - result.human_rate[b]);
  }
  return result;
}

double ece(std::span<const OutcomeRecord> sim, std::span<const OutcomeRecord> human, const BinSet& bins) {
  return ece_detail(sim, human, bins).ece;
}

std::uint64_t ContingencyTable::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t;
  t.row_labels = col_labels;
  t.col_labels = row_labels;
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  t.counts.assign(cols, std::vector<std::uint64_t>(counts.size(), 0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) t.counts[j][i] = counts[i][j];
  }
  return t;
}

ContingencyStats contingency_stats(const ContingencyTable& table) {
  const std::size_t rows = table.counts.size();
  if (rows < 2) throw Error("outcomes", "contingency table needs at least two rows");
  const std::size_t cols = table.counts.front().size();
  if (cols < 2) throw Error("outcomes", "contingency table needs at least two columns");
  for (const auto& row : table.counts) {
    if (row.size() != cols) throw Error("outcomes", "contingency table rows differ in length");
  }

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double c = static_cast<double>(table.counts[i][j]);
      row_sum[i] += c;
      col_sum[j] += c;
      n += c;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_sum[i] == 0.0) {
      const std::string label = i < table.row_labels.size() ? table.row_labels[i] : std::to_string(i);
      throw Error("outcomes", "row '" + label + "' has a zero marginal");
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_sum[j] == 0.0) {
      const std::string label = j < table.col_labels.size() ? table.col_labels[j] : std::to_string(j);
      throw Error("outcomes", "column '" + label + "' has a zero marginal");
    }
  }

  ContingencyStats stats;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / n;
      const double d = static_cast<double>(table.counts[i][j]) - expected;
      stats.chi_square += d * d / expected;
    }
  }
  stats.dof = (rows - 1) * (cols - 1);
  const double k = static_cast<double>(std::min(rows, cols) - 1);
  stats.cramers_v = std::min(1.0, std::sqrt(stats.chi_square / (n * k)));
  return stats;
}

ContingencyTable judgment_table(std::span<const Corpus> corpora, const JudgmentMapping& mapping) {
  for (auto row : mapping.row_of_option) {
    if (row >= mapping.labels.size()) throw Error("outcomes", "judgment mapping points past its labels");
  }
  ContingencyTable table;
  table.row_labels = mapping.labels;
  table.col_labels = {"reward=0", "reward=1"};
  table.counts.assign(mapping.labels.size(), std::vector<std::uint64_t>(2, 0));
  for (const auto& corpus : corpora) {
    for (const auto& it : corpus.interactions) {
      if (!it.reward || !it.survey) continue;
      const auto& answer = (*it.survey)[SurveyField::task_success];
      if (!answer) continue;
      ++table.counts[mapping.row_of_option[static_cast<std::size_t>(*answer)]][static_cast<std::size_t>(*it.reward)];
    }
  }
  return table;
}

}  // namespace usikit
