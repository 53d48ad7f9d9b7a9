#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hardlattice {

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t batches = 0;
};

inline constexpr std::size_t kDefaultBatches = 20;

// Batch-means estimate: the series is cut into `batches` contiguous blocks of
// equal length (the remainder at the end is dropped) and the standard error is
// that of the block averages.
MeanEstimate batch_means(std::span<const double> series, std::size_t batches = kDefaultBatches);

// Two-sided normal quantile for a confidence level, e.g. 0.95 -> 1.96.
double normal_two_sided_quantile(double confidence);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov distribution.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Integrated autocorrelation time with Sokal's automatic window (c = 5).
double integrated_autocorrelation_time(std::span<const double> series);

}  // namespace hardlattice
