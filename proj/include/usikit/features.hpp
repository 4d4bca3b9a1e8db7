#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usikit/corpus.hpp"
#include "usikit/patterns.hpp"

namespace usikit {

// The 19 behavioral metrics. Wds/trn belongs to both D1 and D2 but is stored
// once.
enum class Metric : std::size_t {
  // D1 communication style
  wds_per_turn,
  short_pct,
  polite_pct,
  formal_pct,
  ack_pct,
  verb_cv,
  repeat_pct,
  idconf_pct,
  // D2 information pattern
  frontid_pct,
  ids_per_turn,
  open_wds,
  // D3 clarification
  uncert_pct,
  certn_pct,
  pushbk_pct,
  clarfyq_pct,
  infoq_pct,
  // D4 error reaction
  emot_pct,
  accuse_pct,
  pivot_pct,
};

inline constexpr std::size_t kMetricCount = 19;

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);
bool is_percentage(Metric m);
const std::array<Metric, kMetricCount>& all_metrics();

struct FeatureVector {
  std::array<double, kMetricCount> values{};

  double& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Dimension name ("D1".."D4") -> metric names.
class DimensionMap {
 public:
  // Throws when a metric name is unknown, a dimension is empty, or some
  // metric is not covered by any dimension.
  explicit DimensionMap(std::map<std::string, std::vector<std::string>> dims);

  static const DimensionMap& standard();

  const std::map<std::string, std::vector<Metric>>& dimensions() const { return resolved_; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::vector<Metric>> resolved_;
};

// Word counts of the interaction's user turns in order.
std::vector<std::size_t> user_word_counts(const Interaction& interaction);

// 100 * words in the first two turns / all words. 100 when there are no words.
double front_load_ratio(std::span<const std::size_t> word_counts);
double front_load_ratio(const Interaction& interaction);

// Population std / mean of turn word counts; 0 for one turn or zero mean.
double verbosity_cv(std::span<const std::size_t> word_counts);
double verbosity_cv(const Interaction& interaction);

// True iff some case-folded whitespace trigram inside a single user turn
// occurs more than five times across the interaction.
bool repeated_trigram_flag(const Interaction& interaction);
bool repeated_trigram_flag(std::span<const std::string> user_texts);

inline constexpr std::size_t kShortTurnMaxWords = 3;
inline constexpr std::size_t kRepeatTrigramThreshold = 5;

// Throws Error("features", "empty interaction") without user turns.
FeatureVector extract_features(const Interaction& interaction, const PatternRegistry& registry);

// Per-interaction vectors in corpus order (sorted by task_id, run_id).
std::vector<FeatureVector> extract_all(const Corpus& corpus, const PatternRegistry& registry,
                                       std::size_t threads = 1);

// Arithmetic mean with a fixed summation order.
FeatureVector mean_features(std::span<const FeatureVector> vectors);

FeatureVector corpus_features(const Corpus& corpus, const PatternRegistry& registry,
                              std::size_t threads = 1);

}  // namespace usikit
