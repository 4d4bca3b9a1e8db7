#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "usikit/alignment.hpp"
#include "usikit/features.hpp"
#include "usikit/outcomes.hpp"
#include "usikit/qc.hpp"
#include "usikit/surveys.hpp"

namespace usikit::testsupport {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// A nonnegative value with a fair share of exact zeros and equal pairs.
double metric_value(Rng& rng) {
  switch (pick(rng, 0, 5)) {
    case 0: return 0.0;
    case 1: return static_cast<double>(pick(rng, 0, 100));
    default: return uniform(rng, 0.0, 100.0);
  }
}

// One property: `check` returns an empty string on success, else a message.
struct Runner {
  Rng rng;
  std::size_t cases;
  std::vector<PropertyResult> results;

  void run(const std::string& name, const std::function<std::string(Rng&)>& check) {
    PropertyResult r{name, 0, 0, {}};
    for (std::size_t i = 0; i < cases; ++i) {
      ++r.cases;
      std::string msg;
      try {
        msg = check(rng);
      } catch (const std::exception& e) {
        msg = std::string("threw: ") + e.what();
      }
      if (!msg.empty()) {
        if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + msg;
      }
    }
    results.push_back(std::move(r));
  }
};

template <typename... Ts>
std::string describe(const Ts&... parts) {
  std::ostringstream os;
  os.precision(17);
  ((os << parts << ' '), ...);
  return os.str();
}

std::vector<OutcomeRecord> random_records(Rng& rng, std::size_t tasks, std::size_t max_runs, const std::string& prefix) {
  std::vector<OutcomeRecord> out;
  for (std::size_t t = 0; t < tasks; ++t) {
    const std::size_t runs = pick(rng, 1, max_runs);
    const double p = uniform(rng, 0.0, 1.0);
    for (std::size_t r = 0; r < runs; ++r) {
      out.push_back({prefix + std::to_string(1000 + t), rng() % 1000 < p * 1000 ? 1 : 0, static_cast<std::int64_t>(r)});
    }
  }
  return out;
}

ContingencyTable random_table(Rng& rng) {
  ContingencyTable t;
  const std::size_t rows = pick(rng, 2, 5), cols = pick(rng, 2, 5);
  for (std::size_t r = 0; r < rows; ++r) t.row_labels.push_back("r" + std::to_string(r));
  for (std::size_t c = 0; c < cols; ++c) t.col_labels.push_back("c" + std::to_string(c));
  t.counts.assign(rows, std::vector<std::uint64_t>(cols, 0));
  for (auto& row : t.counts) {
    for (auto& v : row) v = pick(rng, 0, 3) == 0 ? 0 : pick(rng, 0, 60);
  }
  // Keep every marginal nonzero.
  for (std::size_t r = 0; r < rows; ++r) t.counts[r][r % cols] += 1;
  for (std::size_t c = 0; c < cols; ++c) t.counts[c % rows][c] += 1;
  return t;
}

const std::vector<std::string> kWords = {"i",     "need",  "to",   "return", "the",   "order", "ok",    "please",
                                         "maybe", "wrong", "you",  "sure",   "thanks", "ugh",  "12345", "ABC123",
                                         "what",  "mean?", "fine", "—",      "instead", "this", "is",    "frustrated"};

Interaction random_interaction(Rng& rng, const std::string& task) {
  Interaction it;
  it.task_id = task;
  it.source = {SourceKind::simulator, "prop"};
  const std::size_t turns = pick(rng, 1, 8);
  for (std::size_t i = 0; i < turns; ++i) {
    Turn t;
    t.role = pick(rng, 0, 3) == 0 ? Role::agent : Role::user;
    if (i == 0) t.role = Role::user;
    const std::size_t n = pick(rng, 0, 12);
    for (std::size_t w = 0; w < n; ++w) {
      if (w) t.text.push_back(' ');
      t.text += kWords[pick(rng, 0, kWords.size() - 1)];
    }
    t.raw_text = t.text;
    t.index = i;
    it.turns.push_back(std::move(t));
  }
  return it;
}

}  // namespace

std::vector<PropertyResult> run_properties(const PatternRegistry& shipped, std::uint64_t seed, std::size_t cases) {
  Runner run{Rng(seed), cases, {}};

  // Dice
  run.run("dice.symmetry", [](Rng& rng) -> std::string {
    const double a = metric_value(rng), b = metric_value(rng);
    return dice(a, b) == dice(b, a) ? "" : describe("dice not symmetric for", a, b);
  });
  run.run("dice.bounds", [](Rng& rng) -> std::string {
    const double a = metric_value(rng), b = metric_value(rng);
    const double d = dice(a, b);
    return d >= 0.0 && d <= 100.0 ? "" : describe("dice out of range", a, b, d);
  });
  run.run("dice.identity_and_zero", [](Rng& rng) -> std::string {
    const double a = metric_value(rng);
    if (std::abs(dice(a, a) - 100.0) > 1e-12) return describe("dice(a,a) != 100 for", a);
    return dice(0.0, 0.0) == 100.0 ? "" : "dice(0,0) != 100";
  });
  run.run("dice.scale_covariance", [](Rng& rng) -> std::string {
    const double a = metric_value(rng), b = metric_value(rng), c = std::exp(uniform(rng, -5.0, 5.0));
    return std::abs(dice(c * a, c * b) - dice(a, b)) <= 1e-9 ? "" : describe("scale changed dice", a, b, c);
  });
  run.run("dice.unimodal_in_model", [](Rng& rng) -> std::string {
    const double h = uniform(rng, 0.01, 100.0);
    double m1 = uniform(rng, 0.0, 200.0), m2 = uniform(rng, 0.0, 200.0);
    if (m1 > m2) std::swap(m1, m2);
    if (m2 <= h && dice(m1, h) > dice(m2, h) + 1e-12) return describe("decreasing below H", m1, m2, h);
    if (m1 >= h && dice(m1, h) + 1e-12 < dice(m2, h)) return describe("increasing above H", m1, m2, h);
    return "";
  });

  // ECE
  run.run("ece.range", [](Rng& rng) -> std::string {
    const std::size_t tasks = pick(rng, 1, 40);
    const auto human = random_records(rng, tasks, 3, "t");
    const auto sim = random_records(rng, tasks, 3, "t");
    const auto bins = bin_tasks(human, pick(rng, 1, tasks));
    const double e = ece(sim, human, bins);
    return e >= 0.0 && e <= 1.0 ? "" : describe("ece out of range", e);
  });
  run.run("ece.self_is_zero", [](Rng& rng) -> std::string {
    const std::size_t tasks = pick(rng, 1, 40);
    const auto human = random_records(rng, tasks, 3, "t");
    const double e = ece(human, human, bin_tasks(human, pick(rng, 1, tasks)));
    return e == 0.0 ? "" : describe("ece(h,h) =", e);
  });
  run.run("ece.single_bin_is_rate_gap", [](Rng& rng) -> std::string {
    const std::size_t tasks = pick(rng, 1, 40);
    const auto human = random_records(rng, tasks, 3, "t");
    const auto sim = random_records(rng, tasks, 3, "t");
    const double e = ece(sim, human, bin_tasks(human, 1));
    const double gap = std::abs(success_rate(sim) - success_rate(human));
    return std::abs(e - gap) <= 1e-12 ? "" : describe("B=1 ece", e, "gap", gap);
  });
  run.run("ece.relabel_and_order_invariant", [](Rng& rng) -> std::string {
    const std::size_t tasks = pick(rng, 1, 40);
    const std::size_t b = pick(rng, 1, tasks);
    auto human = random_records(rng, tasks, 3, "t");
    auto sim = random_records(rng, tasks, 3, "t");
    const double base = ece(sim, human, bin_tasks(human, b));
    // Order-preserving rename keeps the tie-break order; shuffling changes input order only.
    for (auto* v : {&human, &sim}) {
      for (auto& r : *v) r.task_id = "task/" + r.task_id + "/x";
      std::shuffle(v->begin(), v->end(), rng);
    }
    const double moved = ece(sim, human, bin_tasks(human, b));
    return std::abs(base - moved) <= 1e-12 ? "" : describe("relabel changed ece", base, moved);
  });
  run.run("ece.bin_index_relabel", [](Rng& rng) -> std::string {
    const std::size_t tasks = pick(rng, 2, 40);
    const auto human = random_records(rng, tasks, 3, "t");
    const auto sim = random_records(rng, tasks, 3, "t");
    BinSet bins = bin_tasks(human, pick(rng, 2, tasks));
    const double base = ece(sim, human, bins);
    // Reverse bin numbering.
    for (auto& [task, idx] : bins.assignment) idx = bins.bins - 1 - idx;
    std::reverse(bins.sizes.begin(), bins.sizes.end());
    const double moved = ece(sim, human, bins);
    return std::abs(base - moved) <= 1e-12 ? "" : describe("bin relabel changed ece", base, moved);
  });

  // Question classifier
  const auto synthetic = PatternRegistry::from_tables(
      {{"politeness", {"please"}}, {"acknowledgment", {"ok"}}, {"uncertainty", {"maybe"}},
       {"certainty", {"definitely"}}, {"emotion", {"ugh"}}, {"accusation", {"useless"}},
       {"pivot", {"instead"}}, {"id_confusion", {"how may i help"}}},
      {{"pushback", {"\\bPBK\\b"}}, {"clarification", {"\\bCLR\\b"}}, {"info_seeking", {"\\bINF\\b"}},
       {"identifier", {"\\b[0-9]{5,}\\b"}}, {"formal_dash", {"—"}}});
  run.run("classifier.priority_synthetic", [&](Rng& rng) -> std::string {
    const bool p = pick(rng, 0, 1), c = pick(rng, 0, 1), i = pick(rng, 0, 1);
    std::vector<std::string> parts = {"so", "well", "hmm"};
    if (p) parts.push_back("PBK");
    if (c) parts.push_back("CLR");
    if (i) parts.push_back("INF");
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string text;
    for (const auto& s : parts) text += s + " ";
    const auto want = p ? QuestionClass::pushback
                        : c ? QuestionClass::clarification : i ? QuestionClass::info_seeking : QuestionClass::none;
    const auto got = synthetic.classify_question(text);
    return got == want ? "" : describe("classified", question_class_name(got), "for", text);
  });
  const std::vector<std::string> pushback = {"Are you sure?", "You already asked me that.", "Why do you need that?",
                                             "That's not what I asked."};
  const std::vector<std::string> clarify = {"What do you mean?", "Can you clarify?", "Could you explain that?",
                                            "What exactly do you need?"};
  const std::vector<std::string> info = {"What is the status of my order?", "Can you check the refund?",
                                         "How much is the fee?", "When will it arrive?"};
  run.run("classifier.priority_shipped_overlap", [&](Rng& rng) -> std::string {
    const bool p = pick(rng, 0, 1), c = pick(rng, 0, 1), i = pick(rng, 0, 1);
    std::vector<std::string> parts;
    if (p) parts.push_back(pushback[pick(rng, 0, pushback.size() - 1)]);
    if (c) parts.push_back(clarify[pick(rng, 0, clarify.size() - 1)]);
    if (i) parts.push_back(info[pick(rng, 0, info.size() - 1)]);
    if (parts.empty()) parts.push_back("Thanks.");
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string text;
    for (const auto& s : parts) text += (text.empty() ? "" : " ") + s;
    const auto want = p ? QuestionClass::pushback
                        : c ? QuestionClass::clarification : i ? QuestionClass::info_seeking : QuestionClass::none;
    const auto got = shipped.classify_question(text);
    return got == want ? "" : describe("classified", question_class_name(got), "for", text);
  });

  // Surveys
  run.run("survey.normalization_monotone", [](Rng& rng) -> std::string {
    const SurveyField f = kSurveyFields[pick(rng, 0, kSurveyFieldCount - 1)];
    const std::size_t k = survey_option_count(f);
    std::vector<double> values(k);
    for (auto& v : values) v = uniform(rng, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    SurveyMapping custom;
    custom.set(f, values);
    const SurveyMapping standard;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const int a = static_cast<int>(i), b = a + 1;
      if (!(standard.normalize(f, a) < standard.normalize(f, b))) return describe("default not increasing", i);
      if (custom.normalize(f, a) > custom.normalize(f, b)) return describe("custom not monotone", i);
    }
    return "";
  });
  run.run("survey.mae_symmetric_and_bounded", [](Rng& rng) -> std::string {
    const std::size_t n = pick(rng, 1, 12);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = uniform(rng, 0.0, 1.0);
      b[i] = pick(rng, 0, 3) == 0 ? a[i] : uniform(rng, 0.0, 1.0);
    }
    const double ab = task_mae(a, b), ba = task_mae(b, a);
    if (ab != ba) return describe("mae asymmetric", ab, ba);
    return ab >= 0.0 && ab <= 1.0 ? "" : describe("mae out of range", ab);
  });

  // Contingency
  run.run("cramers_v.bounds", [](Rng& rng) -> std::string {
    const auto s = contingency_stats(random_table(rng));
    if (s.chi_square < 0.0) return describe("negative chi-square", s.chi_square);
    return s.cramers_v >= 0.0 && s.cramers_v <= 1.0 ? "" : describe("V out of range", s.cramers_v);
  });
  run.run("cramers_v.transpose_invariant", [](Rng& rng) -> std::string {
    const auto t = random_table(rng);
    const auto a = contingency_stats(t), b = contingency_stats(t.transposed());
    if (std::abs(a.cramers_v - b.cramers_v) > 1e-12) return describe("V changed", a.cramers_v, b.cramers_v);
    return std::abs(a.chi_square - b.chi_square) <= 1e-9 * std::max(1.0, a.chi_square)
               ? ""
               : describe("chi-square changed", a.chi_square, b.chi_square);
  });

  // QC
  run.run("kappa.bounds_and_label_swap", [](Rng& rng) -> std::string {
    ConfusionMatrix m{pick(rng, 0, 50), pick(rng, 0, 50), pick(rng, 0, 50), pick(rng, 0, 50)};
    if (m.n() == 0) m.tp = 1;
    const auto s = qc_stats(m);
    if (s.kappa && (*s.kappa < -1.0 - 1e-12 || *s.kappa > 1.0 + 1e-12)) return describe("kappa out of range", *s.kappa);
    for (const auto& v : {s.precision, s.recall, s.accuracy}) {
      if (v && (*v < 0.0 || *v > 1.0)) return describe("rate out of range", *v);
    }
    const auto swapped = qc_stats(ConfusionMatrix{m.tn, m.fn, m.fp, m.tp});
    if (s.kappa.has_value() != swapped.kappa.has_value()) return "kappa definedness changed under label swap";
    if (s.kappa && std::abs(*s.kappa - *swapped.kappa) > 1e-12) return describe("kappa changed", *s.kappa, *swapped.kappa);
    if (std::abs(*s.accuracy - *swapped.accuracy) > 1e-15) return "accuracy changed under label swap";
    if (s.precision && *s.precision * static_cast<double>(m.tp + m.fp) != static_cast<double>(m.tp)) {
      // tp/(tp+fp)*(tp+fp) can be off by one ulp; compare with a tight tolerance.
      if (std::abs(*s.precision * static_cast<double>(m.tp + m.fp) - static_cast<double>(m.tp)) > 1e-9) {
        return "precision identity failed";
      }
    }
    const bool perfect = m.fp == 0 && m.fn == 0 && m.tp > 0 && m.tn > 0;
    if (perfect != (s.kappa && *s.kappa == 1.0)) return describe("kappa==1 iff perfect violated", m.tp, m.fp, m.fn, m.tn);
    return "";
  });

  // Features
  run.run("features.percentages_bounded", [&](Rng& rng) -> std::string {
    const auto fv = extract_features(random_interaction(rng, "t"), shipped);
    for (Metric m : all_metrics()) {
      const double v = fv[m];
      if (v < 0.0 || !std::isfinite(v)) return describe("negative or non-finite", metric_name(m), v);
      if (is_percentage(m) && v > 100.0) return describe("percentage above 100", metric_name(m), v);
    }
    if (fv[Metric::pushbk_pct] + fv[Metric::clarfyq_pct] + fv[Metric::infoq_pct] > 100.0 + 1e-9) {
      return "question classes overlap";
    }
    return "";
  });
  run.run("features.ack_turn_appended", [&](Rng& rng) -> std::string {
    Interaction it = random_interaction(rng, "t");
    const auto before = extract_features(it, shipped);
    Turn ok;
    ok.role = Role::user;
    ok.text = ok.raw_text = "ok";
    ok.index = it.turns.size();
    it.turns.push_back(ok);
    const auto after = extract_features(it, shipped);
    if (before[Metric::wds_per_turn] > 1.0 && !(after[Metric::wds_per_turn] < before[Metric::wds_per_turn])) {
      return describe("wds_per_turn did not drop", before[Metric::wds_per_turn], after[Metric::wds_per_turn]);
    }
    if (before[Metric::ack_pct] < 100.0 && !(after[Metric::ack_pct] > before[Metric::ack_pct])) {
      return describe("ack_pct did not rise", before[Metric::ack_pct], after[Metric::ack_pct]);
    }
    return "";
  });
  run.run("features.corpus_permutation_and_threads", [&](Rng& rng) -> std::string {
    Corpus c;
    c.source = {SourceKind::simulator, "prop"};
    const std::size_t n = pick(rng, 1, 6);
    for (std::size_t i = 0; i < n; ++i) c.interactions.push_back(random_interaction(rng, "t" + std::to_string(i)));
    const auto sequential = extract_all(c, shipped, 1);
    const auto parallel = extract_all(c, shipped, 4);
    for (std::size_t i = 0; i < n; ++i) {
      if (sequential[i].values != parallel[i].values) return "parallel extraction differs";
    }
    const auto base = mean_features(sequential);
    auto shuffled = sequential;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto moved = mean_features(shuffled);
    for (Metric m : all_metrics()) {
      if (std::abs(base[m] - moved[m]) > 1e-9) return describe("permutation changed", metric_name(m));
    }
    return "";
  });

  return std::move(run.results);
}

}  // namespace usikit::testsupport
