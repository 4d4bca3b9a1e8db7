#pragma once

#include <cstddef>
#include <span>

namespace usikit {

// Mean and population standard deviation over a set of batch-level scores.
struct BatchStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_batches = 0;

  // Throws on an empty span. Identical inputs give std == 0 exactly.
  static BatchStats of(std::span<const double> values);
};

double mean(std::span<const double> values);
double population_std(std::span<const double> values);

}  // namespace usikit
