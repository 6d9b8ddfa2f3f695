#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wep/measures.hpp"
#include "wep/rng.hpp"

namespace wep {

/// Weighted sample sum_i beta_i delta_{Y_i} together with the conditional
/// law of the Y_i's, taken not to depend on beta.
struct WeightedSample {
  WeightSeq weights;
  std::vector<AtomId> atoms;
  DiscreteMeasure baseline;

  /// Throws std::domain_error on a length mismatch or a non-probability
  /// baseline.
  void validate() const;
};

/// Envelope of the indexing class; identically one for indicators.
using Envelope = std::function<double(AtomId)>;

/// The process G_n(f) = sum_i beta_i [f(Y_i) - E f(Y_i)] over indicators,
/// as the signed measure sum_i beta_i delta_{Y_i} - ||beta||_1 baseline.
///
/// Atoms whose envelope exceeds envelope_threshold are cut out (the
/// truncated process). For indicators any threshold >= 1 changes nothing
/// and a threshold < 1 yields the zero measure.
DiscreteMeasure gn_signed_measure(const WeightedSample& s, double envelope_threshold = kInfinity,
                                  const Envelope& envelope = {});

/// ||G_n||_F over all indicators.
double gn_sup_norm(const WeightedSample& s);

/// Gaussian values Z_y on the singletons of the support.
struct GaussianFieldDraw {
  std::vector<Atom> values;

  double total() const noexcept;
};

/// Brownian bridge on singletons: B_y ~ N(0, p_y) independent, then
/// Z_y = B_y - p_y sum_z B_z, so Cov(Z_y, Z_y') = p_y 1{y=y'} - p_y p_y'.
GaussianFieldDraw sample_bridge(const DiscreteMeasure& p, Rng& rng);

/// Repeated bridge draws over one measure; sqrt(p_y) is computed once.
class BridgeSampler {
 public:
  explicit BridgeSampler(const DiscreteMeasure& p);

  GaussianFieldDraw draw(Rng& rng) const;
  /// bridge_sup_norm(draw(rng)) without building the draw.
  double draw_sup_norm(Rng& rng) const;

 private:
  std::vector<AtomId> ids_;
  std::vector<double> mass_;
  std::vector<double> root_mass_;
};

/// sup_C |sum_{y in C} Z_y| = (sum |Z_y| + |sum Z_y|) / 2.
double bridge_sup_norm(const GaussianFieldDraw& d);

/// sum_y | n^{-1/2} sum_{i : x_i = y} xi_i | with xi_i i.i.d. N(0,1).
/// Its mean is sqrt(2/pi) sum_y sqrt(n_y / n). Throws on an empty sample.
double multiplier_abs_sum(std::span<const AtomId> sample, Rng& rng);

}  // namespace wep
