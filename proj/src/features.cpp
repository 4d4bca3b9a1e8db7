#include "usikit/features.hpp"

#include <cmath>
#include <unordered_map>

#include "usikit/error.hpp"
#include "usikit/parallel.hpp"
#include "usikit/text.hpp"

namespace usikit {
namespace {

constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "wds_per_turn", "short_pct",   "polite_pct",   "formal_pct", "ack_pct",     "verb_cv",    "repeat_pct",
    "idconf_pct",   "frontid_pct", "ids_per_turn", "open_wds",   "uncert_pct",  "certn_pct",  "pushbk_pct",
    "clarfyq_pct",  "infoq_pct",   "emot_pct",     "accuse_pct", "pivot_pct",
};

double pct(std::size_t hits, std::size_t total) {
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

std::string_view metric_name(Metric m) { return kMetricNames[static_cast<std::size_t>(m)]; }

std::optional<Metric> metric_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == name) return static_cast<Metric>(i);
  }
  return std::nullopt;
}

bool is_percentage(Metric m) {
  return m != Metric::wds_per_turn && m != Metric::verb_cv && m != Metric::ids_per_turn && m != Metric::open_wds;
}

const std::array<Metric, kMetricCount>& all_metrics() {
  static const auto metrics = [] {
    std::array<Metric, kMetricCount> out{};
    for (std::size_t i = 0; i < kMetricCount; ++i) out[i] = static_cast<Metric>(i);
    return out;
  }();
  return metrics;
}

DimensionMap::DimensionMap(std::map<std::string, std::vector<std::string>> dims) {
  std::array<bool, kMetricCount> covered{};
  for (const auto& [dim, names] : dims) {
    if (names.empty()) throw Error("features", "dimension '" + dim + "' has no metrics");
    auto& resolved = resolved_[dim];
    for (const auto& name : names) {
      const auto m = metric_from_name(name);
      if (!m) throw Error("features", "dimension '" + dim + "' names unknown metric '" + name + "'");
      resolved.push_back(*m);
      covered[static_cast<std::size_t>(*m)] = true;
    }
  }
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (!covered[i]) throw Error("features", "metric '" + std::string(kMetricNames[i]) + "' belongs to no dimension");
  }
}

const DimensionMap& DimensionMap::standard() {
  static const DimensionMap map({
      {"D1", {"wds_per_turn", "short_pct", "polite_pct", "formal_pct", "ack_pct", "verb_cv", "repeat_pct",
              "idconf_pct"}},
      {"D2", {"frontid_pct", "ids_per_turn", "wds_per_turn", "open_wds"}},
      {"D3", {"uncert_pct", "certn_pct", "pushbk_pct", "clarfyq_pct", "infoq_pct"}},
      {"D4", {"emot_pct", "accuse_pct", "pivot_pct"}},
  });
  return map;
}

std::vector<std::string> DimensionMap::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : resolved_) out.push_back(k);
  return out;
}

std::vector<std::size_t> user_word_counts(const Interaction& interaction) {
  std::vector<std::size_t> counts;
  for (const auto& t : interaction.turns) {
    if (t.role == Role::user) counts.push_back(text::word_count(t.text));
  }
  return counts;
}

double front_load_ratio(std::span<const std::size_t> word_counts) {
  std::size_t total = 0;
  std::size_t front = 0;
  for (std::size_t i = 0; i < word_counts.size(); ++i) {
    total += word_counts[i];
    if (i < 2) front += word_counts[i];
  }
  if (total == 0) return 100.0;
  return pct(front, total);
}

double front_load_ratio(const Interaction& interaction) {
  const auto counts = user_word_counts(interaction);
  if (counts.empty()) throw Error("features", "empty interaction");
  return front_load_ratio(counts);
}

double verbosity_cv(std::span<const std::size_t> word_counts) {
  if (word_counts.size() <= 1) return 0.0;
  double sum = 0.0;
  for (auto c : word_counts) sum += static_cast<double>(c);
  const double m = sum / static_cast<double>(word_counts.size());
  if (m == 0.0) return 0.0;
  double ss = 0.0;
  for (auto c : word_counts) {
    const double d = static_cast<double>(c) - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(word_counts.size())) / m;
}

double verbosity_cv(const Interaction& interaction) {
  const auto counts = user_word_counts(interaction);
  return verbosity_cv(counts);
}

bool repeated_trigram_flag(std::span<const std::string> user_texts) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : user_texts) {
    const std::string folded = text::fold_case(t);
    const auto tokens = text::whitespace_tokens(folded);
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
      std::string key;
      key.append(tokens[i]).push_back(' ');
      key.append(tokens[i + 1]).push_back(' ');
      key.append(tokens[i + 2]);
      if (++counts[key] > kRepeatTrigramThreshold) return true;
    }
  }
  return false;
}

bool repeated_trigram_flag(const Interaction& interaction) {
  std::vector<std::string> texts;
  for (const auto& t : interaction.turns) {
    if (t.role == Role::user) texts.push_back(t.text);
  }
  return repeated_trigram_flag(texts);
}

FeatureVector extract_features(const Interaction& interaction, const PatternRegistry& registry) {
  std::vector<std::string> texts;
  for (const auto& t : interaction.turns) {
    if (t.role == Role::user) texts.push_back(t.text);
  }
  if (texts.empty()) throw Error("features", "empty interaction");
  const std::size_t n = texts.size();

  std::vector<std::size_t> words;
  words.reserve(n);
  std::size_t total_words = 0, short_turns = 0, polite = 0, formal = 0, ack = 0, ids = 0;
  std::size_t uncert = 0, certn = 0, pushbk = 0, clarfyq = 0, infoq = 0, emot = 0, accuse = 0, pivot = 0;
  bool id_confusion = false;

  for (const auto& t : texts) {
    const std::size_t wc = text::word_count(t);
    words.push_back(wc);
    total_words += wc;
    if (wc <= kShortTurnMaxWords) ++short_turns;

    const PreparedText prepared(t);
    if (registry.contains(prepared, "politeness")) ++polite;
    if (registry.contains(prepared, "formal_dash")) ++formal;
    if (registry.matches_only(prepared, "acknowledgment")) ++ack;
    if (registry.contains(prepared, "id_confusion")) id_confusion = true;
    ids += registry.count_identifiers(prepared);
    if (registry.contains(prepared, "uncertainty")) ++uncert;
    if (registry.contains(prepared, "certainty")) ++certn;
    switch (registry.classify_question(prepared)) {
      case QuestionClass::pushback: ++pushbk; break;
      case QuestionClass::clarification: ++clarfyq; break;
      case QuestionClass::info_seeking: ++infoq; break;
      case QuestionClass::none: break;
    }
    if (registry.contains(prepared, "emotion")) ++emot;
    if (registry.contains(prepared, "accusation")) ++accuse;
    if (registry.contains(prepared, "pivot")) ++pivot;
  }

  FeatureVector fv;
  fv[Metric::wds_per_turn] = static_cast<double>(total_words) / static_cast<double>(n);
  fv[Metric::short_pct] = pct(short_turns, n);
  fv[Metric::polite_pct] = pct(polite, n);
  fv[Metric::formal_pct] = pct(formal, n);
  fv[Metric::ack_pct] = pct(ack, n);
  fv[Metric::verb_cv] = verbosity_cv(words);
  fv[Metric::repeat_pct] = repeated_trigram_flag(texts) ? 100.0 : 0.0;
  fv[Metric::idconf_pct] = id_confusion ? 100.0 : 0.0;
  fv[Metric::frontid_pct] = front_load_ratio(words);
  fv[Metric::ids_per_turn] = static_cast<double>(ids) / static_cast<double>(n);
  fv[Metric::open_wds] = static_cast<double>(words.front());
  fv[Metric::uncert_pct] = pct(uncert, n);
  fv[Metric::certn_pct] = pct(certn, n);
  fv[Metric::pushbk_pct] = pct(pushbk, n);
  fv[Metric::clarfyq_pct] = pct(clarfyq, n);
  fv[Metric::infoq_pct] = pct(infoq, n);
  fv[Metric::emot_pct] = pct(emot, n);
  fv[Metric::accuse_pct] = pct(accuse, n);
  fv[Metric::pivot_pct] = pct(pivot, n);
  return fv;
}

std::vector<FeatureVector> extract_all(const Corpus& corpus, const PatternRegistry& registry, std::size_t threads) {
  std::vector<FeatureVector> out(corpus.interactions.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    try {
      out[i] = extract_features(corpus.interactions[i], registry);
    } catch (const Error& e) {
      const auto& it = corpus.interactions[i];
      throw Error(e.module(), e.message() + " (task " + it.task_id + ", run " + std::to_string(it.run_id) + ")");
    }
  });
  return out;
}

FeatureVector mean_features(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw Error("features", "empty corpus");
  FeatureVector sum;
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < kMetricCount; ++i) sum.values[i] += v.values[i];
  }
  for (auto& x : sum.values) x /= static_cast<double>(vectors.size());
  return sum;
}

FeatureVector corpus_features(const Corpus& corpus, const PatternRegistry& registry, std::size_t threads) {
  if (corpus.interactions.empty()) throw Error("features", "empty corpus");
  const auto vectors = extract_all(corpus, registry, threads);
  return mean_features(vectors);
}

}  // namespace usikit
