#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace usikit {

enum class Label { pass, fail };

struct LabelPair {
  std::string id;
  Label judge = Label::pass;
  Label truth = Label::pass;
};

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t n() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_from_labels(std::span<const LabelPair> pairs);

// nullopt marks a statistic whose denominator is zero.
struct QcStats {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> kappa;
};

QcStats qc_stats(const ConfusionMatrix& m);

// CSV with columns id, judge_label, truth_label. A header row is optional.
// Labels: pass/fail (also 1/0, true/false, yes/no), case-insensitive.
std::vector<LabelPair> read_labels_csv(const std::filesystem::path& path);

}  // namespace usikit
