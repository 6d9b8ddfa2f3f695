#include "wep/local_empirical.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wep/parallel.hpp"

namespace wep {

namespace {

constexpr double kQuadratureTolerance = 1e-10;

}  // namespace

void DensitySpec::validate() const {
  if (kind == Kind::normal && !(second > 0.0)) throw std::domain_error("normal density needs sd > 0");
  if (kind == Kind::uniform && !(first < second)) throw std::domain_error("uniform density needs lo < hi");
}

double DensitySpec::pdf(double x) const {
  if (kind == Kind::normal) {
    const double u = (x - first) / second;
    return std::exp(-0.5 * u * u) / (second * boost::math::constants::root_two_pi<double>());
  }
  return (x >= first && x <= second) ? 1.0 / (second - first) : 0.0;
}

double DensitySpec::sample(Rng& rng) const {
  if (kind == Kind::normal) return first + second * rng.normal();
  return first + (second - first) * rng.uniform();
}

std::string DensitySpec::name() const { return kind == Kind::normal ? "normal" : "uniform"; }

std::vector<double> LocalConfig::even_grid(double s_lo, double s_hi, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = s_lo + (s_hi - s_lo) * static_cast<double>(i + 1) / static_cast<double>(points);
  }
  if (points > 0) grid.back() = s_hi;
  return grid;
}

void LocalConfig::validate() const {
  density.validate();
  if (!(bandwidth > 0.0)) throw std::domain_error("bandwidth must be positive");
  if (!(s_lo < s_hi)) throw std::domain_error("window needs s_lo < s_hi");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::domain_error("t grid must be sorted");
  for (double t : t_grid) {
    if (t < s_lo || t > s_hi) throw std::domain_error("t grid must lie inside the window");
  }
}

double interval_probability(const DensitySpec& density, double lo, double hi) {
  density.validate();
  if (!(hi > lo)) return 0.0;
  if (density.kind == DensitySpec::Kind::uniform) {
    // Integrate only where the density is smooth.
    lo = std::max(lo, density.first);
    hi = std::min(hi, density.second);
    if (!(hi > lo)) return 0.0;
  }
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double x) { return density.pdf(x); }, lo, hi, 20, 1e-12, &error);
  if (!(error <= kQuadratureTolerance)) {
    throw std::runtime_error("quadrature did not reach the requested tolerance");
  }
  return value;
}

double window_probability(const LocalConfig& cfg) {
  cfg.validate();
  return interval_probability(cfg.density, cfg.center + cfg.bandwidth * cfg.s_lo,
                              cfg.center + cfg.bandwidth * cfg.s_hi);
}

LocalSimulator::LocalSimulator(LocalConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  window_prob_ = wep::window_probability(cfg_);
  const double lo = cfg_.center + cfg_.bandwidth * cfg_.s_lo;
  centering_.reserve(cfg_.t_grid.size());
  for (double t : cfg_.t_grid) {
    centering_.push_back(interval_probability(cfg_.density, lo, cfg_.center + cfg_.bandwidth * t));
  }
}

double LocalSimulator::limit_scale() const {
  return cfg_.window_length() * cfg_.density.pdf(cfg_.center);
}

LocalDraw LocalSimulator::simulate(std::uint64_t n, Rng& rng) const {
  if (n == 0) throw std::domain_error("local process needs n >= 1");
  const std::size_t k = cfg_.t_grid.size();
  // bucket[i] counts rescaled points in (t_{i-1}, t_i]; bucket[0] starts at s_lo.
  std::vector<std::uint64_t> bucket(k, 0);
  LocalDraw out;
  const double inv_h = 1.0 / cfg_.bandwidth;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = (cfg_.density.sample(rng) - cfg_.center) * inv_h;
    if (u < cfg_.s_lo || u > cfg_.s_hi) continue;
    ++out.count_in_window;
    const auto it = std::lower_bound(cfg_.t_grid.begin(), cfg_.t_grid.end(), u);
    if (it != cfg_.t_grid.end()) ++bucket[static_cast<std::size_t>(it - cfg_.t_grid.begin())];
  }
  const double nn = static_cast<double>(n);
  const double norm = 1.0 / std::sqrt(nn * cfg_.bandwidth);
  out.counts.resize(k);
  out.t_values.resize(k);
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < k; ++i) {
    running += bucket[i];
    out.counts[i] = running;
    out.t_values[i] = (static_cast<double>(running) - nn * centering_[i]) * norm;
  }
  out.a_hat = static_cast<double>(out.count_in_window) / nn;
  return out;
}

double LocalSimulator::drift(std::uint64_t n, Rng& rng) const {
  if (n == 0) return 0.0;
  std::uint64_t count = 0;
  const double inv_h = 1.0 / cfg_.bandwidth;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = (cfg_.density.sample(rng) - cfg_.center) * inv_h;
    if (u >= cfg_.s_lo && u <= cfg_.s_hi) ++count;
  }
  const double nn = static_cast<double>(n);
  return (static_cast<double>(count) - nn * window_prob_) / std::sqrt(nn * cfg_.bandwidth);
}

LocalDraw simulate_t_process(const LocalConfig& cfg, std::uint64_t n, Rng& rng) {
  return LocalSimulator(cfg).simulate(n, rng);
}

double drift_statistic(const LocalConfig& cfg, std::uint64_t n, Rng& rng) {
  return LocalSimulator(cfg).drift(n, rng);
}

LocalCovarianceStudy local_covariance_study(const LocalConfig& cfg, std::uint64_t n,
                                            std::size_t replications, std::uint64_t master_seed,
                                            unsigned threads) {
  if (replications < 2) throw std::domain_error("covariance study needs at least 2 replications");
  const LocalSimulator sim(cfg);
  const std::size_t k = cfg.t_grid.size();
  const double scale = 1.0 / std::sqrt(sim.limit_scale());

  const auto draws = parallel_map(replications, threads, [&](std::size_t r) {
    Rng rng(master_seed, Stream::local, r);
    std::vector<double> v = sim.simulate(n, rng).t_values;
    for (double& x : v) x *= scale;
    return v;
  });

  LocalCovarianceStudy out;
  out.bandwidth = cfg.bandwidth;
  out.n = n;
  out.replications = replications;
  out.t_grid = cfg.t_grid;
  out.mean.assign(k, 0.0);
  const double reps = static_cast<double>(replications);
  for (const auto& v : draws) {
    for (std::size_t i = 0; i < k; ++i) out.mean[i] += v[i];
  }
  for (double& m : out.mean) m /= reps;

  out.covariance.assign(k * k, 0.0);
  out.covariance_se.assign(k * k, 0.0);
  out.target.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const auto& v : draws) {
        const double prod = (v[i] - out.mean[i]) * (v[j] - out.mean[j]);
        sum += prod;
        sum_sq += prod * prod;
      }
      const double mean_prod = sum / reps;
      const double var_prod = std::max(0.0, (sum_sq / reps - mean_prod * mean_prod)) * reps / (reps - 1.0);
      out.covariance[i * k + j] = sum / (reps - 1.0);
      out.covariance_se[i * k + j] = std::sqrt(var_prod / reps);
      out.target[i * k + j] =
          (std::min(cfg.t_grid[i], cfg.t_grid[j]) - cfg.s_lo) / cfg.window_length();
    }
  }
  return out;
}

}  // namespace wep
