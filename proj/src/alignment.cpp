#include "usikit/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "usikit/error.hpp"

namespace usikit {

double dice(double model_value, double human_value) {
  if (!(model_value >= 0.0) || !(human_value >= 0.0) || std::isinf(model_value) || std::isinf(human_value)) {
    throw Error("alignment", "dice needs finite nonnegative values, got (" + std::to_string(model_value) + ", " +
                                 std::to_string(human_value) + ")");
  }
  if (model_value == 0.0 && human_value == 0.0) return 100.0;
  return 100.0 * 2.0 * std::min(model_value, human_value) / (model_value + human_value);
}

AlignmentScore dimension_scores(const FeatureVector& model, const FeatureVector& human, const DimensionMap& dim_map) {
  AlignmentScore score;
  for (const auto& [dim, metrics] : dim_map.dimensions()) {
    double sum = 0.0;
    for (Metric m : metrics) {
      const double d = dice(model[m], human[m]);
      score.per_metric[std::string(metric_name(m))] = d;
      sum += d;
    }
    score.dims[dim] = sum / static_cast<double>(metrics.size());
  }
  return score;
}

namespace {

std::map<std::string, BatchStats> reduce_dims(const std::vector<AlignmentScore>& scores) {
  std::map<std::string, BatchStats> out;
  if (scores.empty()) return out;
  for (const auto& [dim, _] : scores.front().dims) {
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& s : scores) values.push_back(s.dims.at(dim));
    out[dim] = BatchStats::of(values);
  }
  return out;
}

}  // namespace

BatchComparison compare_to_batches(const FeatureVector& model, std::span<const LabeledFeatures> human_batches,
                                   const DimensionMap& dim_map) {
  if (human_batches.empty()) throw Error("alignment", "no human batches to compare against");
  BatchComparison out;
  for (const auto& batch : human_batches) {
    auto score = dimension_scores(model, batch.features, dim_map);
    score.batch = batch.label;
    out.per_batch.push_back(std::move(score));
  }
  out.dims = reduce_dims(out.per_batch);
  return out;
}

std::string_view ceiling_scheme_name(CeilingScheme scheme) {
  return scheme == CeilingScheme::pairwise ? "pairwise" : "leave_one_out";
}

CeilingScheme ceiling_scheme_from_name(std::string_view name) {
  if (name == "pairwise") return CeilingScheme::pairwise;
  if (name == "leave_one_out" || name == "leave-one-out") return CeilingScheme::leave_one_out;
  throw Error("alignment", "unknown ceiling scheme '" + std::string(name) + "'");
}

BatchComparison human_ceiling(std::span<const LabeledFeatures> human_batches, CeilingScheme scheme,
                              const DimensionMap& dim_map) {
  if (human_batches.size() < 2) throw Error("alignment", "human ceiling needs at least two batches");
  BatchComparison out;
  const std::size_t n = human_batches.size();
  if (scheme == CeilingScheme::pairwise) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto score = dimension_scores(human_batches[i].features, human_batches[j].features, dim_map);
        score.batch = human_batches[i].label + "|" + human_batches[j].label;
        out.per_batch.push_back(std::move(score));
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<FeatureVector> others;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others.push_back(human_batches[j].features);
      }
      auto score = dimension_scores(human_batches[i].features, mean_features(others), dim_map);
      score.batch = human_batches[i].label + "|rest";
      out.per_batch.push_back(std::move(score));
    }
  }
  out.dims = reduce_dims(out.per_batch);
  return out;
}

}  // namespace usikit
