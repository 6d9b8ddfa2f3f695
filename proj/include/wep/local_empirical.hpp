#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wep/rng.hpp"

namespace wep {

/// Univariate density that can be evaluated, integrated and sampled.
struct DensitySpec {
  enum class Kind { normal, uniform };

  Kind kind = Kind::normal;
  /// normal: mean and standard deviation; uniform: lower and upper end.
  double first = 0.0;
  double second = 1.0;

  static DensitySpec normal(double mean, double sd) { return {Kind::normal, mean, sd}; }
  static DensitySpec uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }

  void validate() const;
  double pdf(double x) const;
  double sample(Rng& rng) const;
  std::string name() const;
};

/// One-dimensional local empirical process setup: observations are
/// rescaled as (Z - center) / bandwidth and the class is
/// {1_[s_lo, t] : t in t_grid}.
struct LocalConfig {
  double center = 0.0;
  double bandwidth = 0.1;
  double s_lo = -1.0;
  double s_hi = 1.0;
  DensitySpec density = DensitySpec::normal(0.0, 1.0);
  std::vector<double> t_grid;

  /// Grid of `points` equally spaced values s_lo + i (s_hi - s_lo) / points,
  /// i = 1..points (the last one is s_hi).
  static std::vector<double> even_grid(double s_lo, double s_hi, std::size_t points);

  /// Throws std::domain_error unless bandwidth > 0, s_lo < s_hi and the
  /// grid is sorted and inside [s_lo, s_hi].
  void validate() const;

  double window_length() const { return s_hi - s_lo; }
};

/// P(lo <= Z <= hi) by adaptive Gauss-Kronrod quadrature (absolute tolerance
/// 1e-10). Throws std::runtime_error if the error estimate stays above it.
double interval_probability(const DensitySpec& density, double lo, double hi);

/// a = P((Z - center) / bandwidth in [s_lo, s_hi]).
double window_probability(const LocalConfig& cfg);

struct LocalDraw {
  /// T_{n,h}(1_[s_lo, t]) for each grid t.
  std::vector<double> t_values;
  /// Uncentered counts #{i : (Z_i - z)/h in [s_lo, t]} per grid t.
  std::vector<std::uint64_t> counts;
  std::uint64_t count_in_window = 0;
  /// count_in_window / n
  double a_hat = 0.0;
};

/// Precomputes the exact centering terms so that many replications can be
/// simulated against one configuration.
class LocalSimulator {
 public:
  explicit LocalSimulator(LocalConfig cfg);

  const LocalConfig& config() const noexcept { return cfg_; }
  double window_probability() const noexcept { return window_prob_; }
  /// P(Z in z + h [s_lo, t]) for each grid t.
  const std::vector<double>& centering() const noexcept { return centering_; }
  /// lambda(S) f(z), the variance scale of the limit.
  double limit_scale() const;

  /// T_{n,h}(f) = (n h)^{-1/2} sum_i [f((Z_i - z)/h) - E f((Z_i - z)/h)].
  LocalDraw simulate(std::uint64_t n, Rng& rng) const;

  /// (window count - n a) / sqrt(n h), the Bernoulli drift numerator.
  double drift(std::uint64_t n, Rng& rng) const;

 private:
  LocalConfig cfg_;
  double window_prob_ = 0.0;
  std::vector<double> centering_;
};

LocalDraw simulate_t_process(const LocalConfig& cfg, std::uint64_t n, Rng& rng);
double drift_statistic(const LocalConfig& cfg, std::uint64_t n, Rng& rng);

/// Monte Carlo moments of T over R replications, normalized by
/// lambda(S) f(z). Replication r uses Rng(master_seed, Stream::local, r).
struct LocalCovarianceStudy {
  double bandwidth = 0.0;
  std::uint64_t n = 0;
  std::size_t replications = 0;
  std::vector<double> t_grid;
  /// Mean of T(t) / sqrt(lambda(S) f(z)).
  std::vector<double> mean;
  /// Row-major normalized covariance and its Monte Carlo standard error.
  std::vector<double> covariance;
  std::vector<double> covariance_se;
  /// (min(t1, t2) - s_lo) / lambda(S), the Brownian-motion covariance.
  std::vector<double> target;

  std::size_t dim() const noexcept { return t_grid.size(); }
  double cov(std::size_t i, std::size_t j) const { return covariance[i * dim() + j]; }
  double se(std::size_t i, std::size_t j) const { return covariance_se[i * dim() + j]; }
  double tgt(std::size_t i, std::size_t j) const { return target[i * dim() + j]; }
};

LocalCovarianceStudy local_covariance_study(const LocalConfig& cfg, std::uint64_t n,
                                            std::size_t replications, std::uint64_t master_seed,
                                            unsigned threads = 1);

}  // namespace wep
