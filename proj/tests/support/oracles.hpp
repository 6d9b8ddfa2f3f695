#pragma once

// Test-only reference computations, independent of the library's fast
// paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wep/measures.hpp"
#include "wep/rng.hpp"

namespace wep::oracle {

/// max over all 2^k subsets C of |mu(C)|, by enumeration.
inline double subset_sup_bruteforce(const std::vector<double>& masses) {
  const std::size_t k = masses.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1U) s += masses[i];
    }
    best = std::max(best, std::abs(s));
  }
  return best;
}

inline double subset_sup_bruteforce(const DiscreteMeasure& mu) {
  std::vector<double> m;
  for (const Atom& a : mu.atoms()) m.push_back(a.mass);
  return subset_sup_bruteforce(m);
}

/// Random probability measure on up to max_atoms atoms with ids in [0, id_range).
inline DiscreteMeasure random_probability(Rng& rng, std::size_t max_atoms, std::uint64_t id_range) {
  const std::size_t k = 1 + rng.below(max_atoms);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = -std::log(rng.uniform_pos());
    atoms.push_back({rng.below(id_range), w});
    total += w;
  }
  for (Atom& a : atoms) a.mass /= total;
  return DiscreteMeasure::from_atoms(std::move(atoms)).normalized();
}

/// Random signed measure with k atoms, masses uniform in [-1, 1].
inline DiscreteMeasure random_signed(Rng& rng, std::size_t k) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) atoms.push_back({i, 2.0 * rng.uniform() - 1.0});
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

}  // namespace wep::oracle
