#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "usikit/features.hpp"
#include "usikit/stats.hpp"

namespace usikit {

// Sorensen-Dice agreement of two nonnegative values on a 0-100 scale;
// 100 when both are zero.
double dice(double model_value, double human_value);

struct AlignmentScore {
  std::map<std::string, double> per_metric;
  std::map<std::string, double> dims;
  std::string batch;
};

AlignmentScore dimension_scores(const FeatureVector& model, const FeatureVector& human,
                                const DimensionMap& dim_map = DimensionMap::standard());

struct LabeledFeatures {
  std::string label;
  FeatureVector features;
};

struct BatchComparison {
  std::vector<AlignmentScore> per_batch;
  std::map<std::string, BatchStats> dims;
};

// Scores the model against each human batch independently.
BatchComparison compare_to_batches(const FeatureVector& model,
                                   std::span<const LabeledFeatures> human_batches,
                                   const DimensionMap& dim_map = DimensionMap::standard());

enum class CeilingScheme { pairwise, leave_one_out };

std::string_view ceiling_scheme_name(CeilingScheme scheme);
CeilingScheme ceiling_scheme_from_name(std::string_view name);

// Human-human agreement. Pairwise: every unordered pair (i < j), labelled
// "a|b". Leave-one-out: each batch against the mean of the others.
BatchComparison human_ceiling(std::span<const LabeledFeatures> human_batches,
                              CeilingScheme scheme = CeilingScheme::pairwise,
                              const DimensionMap& dim_map = DimensionMap::standard());

}  // namespace usikit
