#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace wep {

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)| for
/// sorted, non-empty samples. Throws std::domain_error otherwise.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Same statistic; the inputs are copied and sorted first.
double ks_distance_unsorted(std::vector<double> a, std::vector<double> b);

/// Linear-interpolation quantile (R type 7) of a sorted sample.
double quantile_sorted(std::span<const double> sorted, double level);

/// Quantile of an unsorted sample (copied).
double quantile(std::vector<double> sample, double level);

struct MeanEstimate {
  double mean = 0.0;
  /// Standard error of the mean, sd / sqrt(n).
  double se = 0.0;
};

MeanEstimate mean_and_se(std::span<const double> sample);

/// Unbiased sample variance together with its standard error, estimated
/// from the centered squares.
struct VarianceEstimate {
  double variance = 0.0;
  double se = 0.0;
};

VarianceEstimate variance_and_se(std::span<const double> sample);

}  // namespace wep
