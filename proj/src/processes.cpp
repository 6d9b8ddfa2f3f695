#include "wep/processes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wep {

void WeightedSample::validate() const {
  if (weights.size() != atoms.size()) {
    throw std::domain_error("weighted sample: weights and atoms differ in length");
  }
  if (!baseline.is_probability()) {
    throw std::domain_error("weighted sample: baseline must be a probability measure");
  }
}

DiscreteMeasure gn_signed_measure(const WeightedSample& s, double envelope_threshold,
                                  const Envelope& envelope) {
  s.validate();
  auto keep = [&](AtomId y) {
    const double e = envelope ? envelope(y) : 1.0;
    return e <= envelope_threshold;
  };
  std::vector<Atom> point_masses;
  point_masses.reserve(s.atoms.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const double w = s.weights.weights()[i];
    l1 += w;
    if (keep(s.atoms[i])) point_masses.push_back({s.atoms[i], w});
  }
  std::vector<Atom> centering;
  centering.reserve(s.baseline.size());
  for (const Atom& a : s.baseline.atoms()) {
    if (keep(a.id)) centering.push_back({a.id, a.mass * l1});
  }
  return DiscreteMeasure::from_atoms(std::move(point_masses)) -
         DiscreteMeasure::from_atoms(std::move(centering));
}

double gn_sup_norm(const WeightedSample& s) { return signed_sup_norm(gn_signed_measure(s)); }

double GaussianFieldDraw::total() const noexcept {
  double t = 0.0;
  for (const Atom& a : values) t += a.mass;
  return t;
}

BridgeSampler::BridgeSampler(const DiscreteMeasure& p) {
  if (!p.is_probability()) throw std::domain_error("bridge needs a probability measure");
  for (const Atom& a : p.atoms()) {
    ids_.push_back(a.id);
    mass_.push_back(a.mass);
    root_mass_.push_back(std::sqrt(a.mass));
  }
}

GaussianFieldDraw BridgeSampler::draw(Rng& rng) const {
  GaussianFieldDraw out;
  out.values.resize(ids_.size());
  double sum_b = 0.0;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const double b = root_mass_[i] * rng.normal();
    out.values[i] = {ids_[i], b};
    sum_b += b;
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) out.values[i].mass -= mass_[i] * sum_b;
  return out;
}

double BridgeSampler::draw_sup_norm(Rng& rng) const { return bridge_sup_norm(draw(rng)); }

GaussianFieldDraw sample_bridge(const DiscreteMeasure& p, Rng& rng) {
  return BridgeSampler(p).draw(rng);
}

double bridge_sup_norm(const GaussianFieldDraw& d) {
  double abs_sum = 0.0;
  double sum = 0.0;
  for (const Atom& a : d.values) {
    abs_sum += std::abs(a.mass);
    sum += a.mass;
  }
  return 0.5 * (abs_sum + std::abs(sum));
}

double multiplier_abs_sum(std::span<const AtomId> sample, Rng& rng) {
  if (sample.empty()) throw std::domain_error("multiplier statistic of an empty sample");
  // xi_i is drawn in sample order; grouping happens afterwards.
  std::vector<Atom> terms;
  terms.reserve(sample.size());
  for (AtomId x : sample) terms.push_back({x, rng.normal()});
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Atom& a, const Atom& b) { return a.id < b.id; });
  const double scale = 1.0 / std::sqrt(static_cast<double>(sample.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < terms.size();) {
    double group = 0.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].id == terms[i].id; ++j) group += terms[j].mass;
    total += std::abs(scale * group);
    i = j;
  }
  return total;
}

}  // namespace wep
