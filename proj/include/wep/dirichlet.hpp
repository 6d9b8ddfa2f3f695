#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wep/measures.hpp"
#include "wep/rng.hpp"

namespace wep {

inline constexpr double kDefaultStickTolerance = 1e-10;

/// Walker alias table over the atoms of a probability measure. O(1) draws,
/// two uniforms each.
class AliasTable {
 public:
  explicit AliasTable(const DiscreteMeasure& p);

  /// Index into p.atoms().
  std::size_t sample_index(Rng& rng) const;
  AtomId sample(Rng& rng) const { return ids_[sample_index(rng)]; }
  std::span<const AtomId> ids() const noexcept { return ids_; }

 private:
  std::vector<AtomId> ids_;
  std::vector<double> accept_;
  std::vector<std::size_t> alias_;
};

/// Dirichlet process parameters: mean measure and concentration M.
struct DpParams {
  DiscreteMeasure base;
  double concentration = 1.0;

  /// Throws std::domain_error unless concentration > 0 and base is a
  /// probability measure.
  void validate() const;
};

/// One truncated stick-breaking draw. weights[i] = V_i prod_{j<i} (1 - V_j)
/// with the V's stored in stick_fractions.
struct StickBreakingDraw {
  WeightSeq weights;
  std::vector<AtomId> atoms;
  std::vector<double> stick_fractions;

  double remainder() const noexcept { return weights.remainder(); }
};

/// Breaks sticks with V ~ Beta(1, M) (by inversion, V = 1 - U^{1/M}) until
/// the untouched stick is below tol. The leftover is the remainder.
WeightSeq sample_stick_weights(double concentration, double tol, Rng& rng);

/// Same stick sequence as sample_stick_weights, also returning the V's.
StickBreakingDraw sample_sticks(double concentration, double tol, Rng& rng);

/// Full Sethuraman draw: sticks plus atoms i.i.d. from the base.
StickBreakingDraw sample_stick_breaking(const DpParams& params, double tol, Rng& rng);

/// sum_i beta_i delta_{Y_i} with coinciding atoms merged. Total mass is
/// 1 - remainder; no renormalization.
DiscreteMeasure sample_dp(const DpParams& params, double tol, Rng& rng);

/// Repeated posterior draws against a fixed base share one alias table.
class DpSampler {
 public:
  explicit DpSampler(DpParams params, double tol = kDefaultStickTolerance);

  const DpParams& params() const noexcept { return params_; }
  double tolerance() const noexcept { return tol_; }

  DiscreteMeasure draw(Rng& rng) const;

 private:
  DpParams params_;
  double tol_;
  AliasTable table_;
};

/// Conjugate update: DP(theta_n alpha + (1 - theta_n) P_x, M + n) with
/// theta_n = M / (M + n).
DpParams posterior_params(const DpParams& prior, std::span<const AtomId> sample);

}  // namespace wep
