#include "wep/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

namespace wep {

AliasTable::AliasTable(const DiscreteMeasure& p) {
  if (p.empty()) throw std::domain_error("alias table over an empty measure");
  const std::size_t k = p.size();
  ids_.reserve(k);
  std::vector<double> scaled(k);
  const double total = p.total_mass();
  for (std::size_t i = 0; i < k; ++i) {
    const Atom& a = p.atoms()[i];
    if (!(a.mass > 0.0)) throw std::domain_error("alias table needs positive masses");
    ids_.push_back(a.id);
    scaled[i] = a.mass / total * static_cast<double>(k);
  }
  accept_.assign(k, 1.0);
  alias_.resize(k);
  for (std::size_t i = 0; i < k; ++i) alias_[i] = i;

  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < k; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : small) accept_[i] = 1.0;
  for (std::size_t i : large) accept_[i] = 1.0;
}

std::size_t AliasTable::sample_index(Rng& rng) const {
  const std::size_t column = rng.below(ids_.size());
  return rng.uniform() < accept_[column] ? column : alias_[column];
}

void DpParams::validate() const {
  if (!(concentration > 0.0)) throw std::domain_error("DP concentration must be positive");
  if (!base.is_probability()) throw std::domain_error("DP base must be a probability measure");
}

StickBreakingDraw sample_sticks(double concentration, double tol, Rng& rng) {
  if (!(concentration > 0.0)) throw std::domain_error("DP concentration must be positive");
  if (!(tol > 0.0 && tol < 1.0)) throw std::domain_error("stick tolerance must lie in (0, 1)");
  std::vector<double> weights;
  std::vector<double> fractions;
  const double inv_m = 1.0 / concentration;
  double rest = 1.0;
  while (rest >= tol) {
    // 1 - V = U^{1/M}; expm1 keeps V accurate when it is tiny (large M).
    const double log_keep = std::log(rng.uniform_pos()) * inv_m;
    const double v = -std::expm1(log_keep);
    fractions.push_back(v);
    weights.push_back(rest * v);
    rest *= std::exp(log_keep);
  }
  return {WeightSeq(std::move(weights), rest), {}, std::move(fractions)};
}

WeightSeq sample_stick_weights(double concentration, double tol, Rng& rng) {
  return sample_sticks(concentration, tol, rng).weights;
}

StickBreakingDraw sample_stick_breaking(const DpParams& params, double tol, Rng& rng) {
  params.validate();
  if (!(tol > 0.0 && tol < 1.0)) throw std::domain_error("stick tolerance must lie in (0, 1)");
  // Same interleaving as DpSampler::draw, so both see identical streams.
  const AliasTable table(params.base);
  const double inv_m = 1.0 / params.concentration;
  std::vector<double> weights;
  std::vector<double> fractions;
  std::vector<AtomId> atoms;
  double rest = 1.0;
  while (rest >= tol) {
    const double log_keep = std::log(rng.uniform_pos()) * inv_m;
    const double v = -std::expm1(log_keep);
    fractions.push_back(v);
    weights.push_back(rest * v);
    rest *= std::exp(log_keep);
    atoms.push_back(table.sample(rng));
  }
  return {WeightSeq(std::move(weights), rest), std::move(atoms), std::move(fractions)};
}

DiscreteMeasure sample_dp(const DpParams& params, double tol, Rng& rng) {
  params.validate();
  return DpSampler(params, tol).draw(rng);
}

DpSampler::DpSampler(DpParams params, double tol)
    : params_(std::move(params)), tol_(tol), table_((params_.validate(), params_.base)) {
  if (!(tol_ > 0.0 && tol_ < 1.0)) throw std::domain_error("stick tolerance must lie in (0, 1)");
}

DiscreteMeasure DpSampler::draw(Rng& rng) const {
  // Sticks and atoms are interleaved: V_i then Y_i.
  const double inv_m = 1.0 / params_.concentration;
  std::vector<double> mass(table_.ids().size(), 0.0);
  double rest = 1.0;
  while (rest >= tol_) {
    const double log_keep = std::log(rng.uniform_pos()) * inv_m;
    const double w = rest * -std::expm1(log_keep);
    rest *= std::exp(log_keep);
    mass[table_.sample_index(rng)] += w;
  }
  std::vector<Atom> atoms;
  atoms.reserve(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] > 0.0) atoms.push_back({table_.ids()[i], mass[i]});
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

DpParams posterior_params(const DpParams& prior, std::span<const AtomId> sample) {
  prior.validate();
  if (sample.empty()) return prior;
  const double n = static_cast<double>(sample.size());
  const double theta = prior.concentration / (prior.concentration + n);
  return {mix(prior.base, DiscreteMeasure::empirical(sample), theta), prior.concentration + n};
}

}  // namespace wep
