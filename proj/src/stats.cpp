#include "usikit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "usikit/error.hpp"

namespace usikit {

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("stats", "mean of an empty set");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

BatchStats BatchStats::of(std::span<const double> values) {
  if (values.empty()) throw Error("stats", "no batch scores to aggregate");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return BatchStats{*lo, 0.0, values.size()};
  return BatchStats{usikit::mean(values), usikit::population_std(values), values.size()};
}

}  // namespace usikit
