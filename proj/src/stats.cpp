#include "wep/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace wep {

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("KS distance of an empty sample");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end())) {
    throw std::domain_error("KS distance expects sorted samples");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  // Step through the pooled points; ties advance both samples together.
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_distance_unsorted(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return ks_distance(a, b);
}

double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw std::domain_error("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> sample, double level) {
  std::sort(sample.begin(), sample.end());
  return quantile_sorted(sample, level);
}

MeanEstimate mean_and_se(std::span<const double> sample) {
  if (sample.size() < 2) throw std::domain_error("mean_and_se needs at least two values");
  const double n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

VarianceEstimate variance_and_se(std::span<const double> sample) {
  if (sample.size() < 2) throw std::domain_error("variance_and_se needs at least two values");
  const double n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= n;
  std::vector<double> squares;
  squares.reserve(sample.size());
  for (double x : sample) squares.push_back((x - mean) * (x - mean));
  const MeanEstimate m = mean_and_se(squares);
  return {m.mean * n / (n - 1.0), m.se * n / (n - 1.0)};
}

}  // namespace wep
