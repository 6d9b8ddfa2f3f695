#include "wep/families.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wep {

namespace {

constexpr std::size_t kMaxTruncatedAtoms = 50'000'000;

// sum_{k >= K} k^{-s} by Euler-Maclaurin with three correction terms;
// relative error O(K^{-4}) for K >= 10.
double zeta_tail_from(double K, double s) {
  return std::pow(K, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(K, -s) +
         s * std::pow(K, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(K, -s - 3.0) / 720.0;
}

// Mass of atoms {n_atoms, n_atoms + 1, ...} for an infinite family.
double tail_mass(const FamilySpec& spec, std::size_t n_atoms) {
  switch (spec.kind) {
    case FamilySpec::Kind::geometric:
      return std::pow(spec.ratio, static_cast<double>(n_atoms));
    case FamilySpec::Kind::zeta: {
      const double norm = boost::math::zeta(spec.exponent);
      const double first = static_cast<double>(n_atoms) + 1.0;
      if (first >= 10.0) return zeta_tail_from(first, spec.exponent) / norm;
      double head = 0.0;
      for (std::size_t y = 0; y < n_atoms; ++y) head += family_mass(spec, y);
      return std::max(0.0, 1.0 - head);
    }
    default:
      return 0.0;
  }
}

}  // namespace

void FamilySpec::validate() const {
  switch (kind) {
    case Kind::dirac:
      return;
    case Kind::uniform:
      if (size == 0) throw std::domain_error("uniform family needs size >= 1");
      return;
    case Kind::geometric:
      if (!(ratio > 0.0 && ratio < 1.0)) throw std::domain_error("geometric ratio must lie in (0, 1)");
      return;
    case Kind::zeta:
      if (!(exponent > 1.0)) throw std::domain_error("zeta exponent must exceed 1");
      return;
  }
}

std::string FamilySpec::name() const {
  switch (kind) {
    case Kind::dirac:
      return "dirac";
    case Kind::uniform:
      return "uniform";
    case Kind::geometric:
      return "geometric";
    case Kind::zeta:
      return "zeta";
  }
  return "unknown";
}

double family_mass(const FamilySpec& spec, AtomId y) {
  switch (spec.kind) {
    case FamilySpec::Kind::dirac:
      return y == spec.atom ? 1.0 : 0.0;
    case FamilySpec::Kind::uniform:
      return y < spec.size ? 1.0 / static_cast<double>(spec.size) : 0.0;
    case FamilySpec::Kind::geometric:
      return (1.0 - spec.ratio) * std::pow(spec.ratio, static_cast<double>(y));
    case FamilySpec::Kind::zeta:
      return std::pow(static_cast<double>(y) + 1.0, -spec.exponent) /
             boost::math::zeta(spec.exponent);
  }
  return 0.0;
}

TruncatedLaw truncate_by_support(const FamilySpec& spec, std::size_t n_atoms) {
  spec.validate();
  if (spec.kind == FamilySpec::Kind::dirac) return {DiscreteMeasure::dirac(spec.atom), 0.0};
  if (spec.kind == FamilySpec::Kind::uniform) {
    if (n_atoms >= spec.size) return {DiscreteMeasure::uniform(spec.size), 0.0};
    std::vector<Atom> atoms(n_atoms);
    for (std::size_t y = 0; y < n_atoms; ++y) atoms[y] = {y, family_mass(spec, y)};
    return {DiscreteMeasure::from_atoms(std::move(atoms)),
            static_cast<double>(spec.size - n_atoms) / static_cast<double>(spec.size)};
  }
  if (n_atoms > kMaxTruncatedAtoms) throw std::length_error("truncation keeps too many atoms");
  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  if (spec.kind == FamilySpec::Kind::zeta) {
    const double norm = boost::math::zeta(spec.exponent);
    for (std::size_t y = 0; y < n_atoms; ++y) {
      atoms.push_back({y, std::pow(static_cast<double>(y) + 1.0, -spec.exponent) / norm});
    }
  } else {
    double m = 1.0 - spec.ratio;
    for (std::size_t y = 0; y < n_atoms; ++y) {
      atoms.push_back({y, m});
      m *= spec.ratio;
    }
  }
  return {DiscreteMeasure::from_atoms(std::move(atoms)), tail_mass(spec, n_atoms)};
}

TruncatedLaw truncate_by_tail(const FamilySpec& spec, double tol) {
  spec.validate();
  if (!(tol > 0.0)) throw std::domain_error("truncation tolerance must be positive");
  if (spec.finite_support()) return truncate_by_support(spec, spec.size);
  std::size_t n = 1;
  if (spec.kind == FamilySpec::Kind::geometric) {
    n = static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(spec.ratio)));
    while (n > 0 && tail_mass(spec, n - 1) < tol) --n;
    while (tail_mass(spec, n) >= tol) ++n;
  } else {
    // Tail ~ N^{1-s} / ((s-1) zeta(s)); start from that guess and refine.
    const double s = spec.exponent;
    const double guess = std::pow(tol * (s - 1.0) * boost::math::zeta(s), 1.0 / (1.0 - s));
    if (!(guess < static_cast<double>(kMaxTruncatedAtoms))) {
      throw std::length_error("zeta truncation at this tolerance keeps too many atoms");
    }
    n = static_cast<std::size_t>(std::max(1.0, guess));
    while (n > 1 && tail_mass(spec, n - 1) < tol) --n;
    while (tail_mass(spec, n) >= tol) ++n;
  }
  return truncate_by_support(spec, n);
}

AtomId sample_family(const FamilySpec& spec, Rng& rng) {
  switch (spec.kind) {
    case FamilySpec::Kind::dirac:
      return spec.atom;
    case FamilySpec::Kind::uniform:
      return rng.below(spec.size);
    case FamilySpec::Kind::geometric: {
      // P(Y >= y) = ratio^y, so Y = floor(log U / log ratio) with U in (0, 1].
      const double y = std::floor(std::log(rng.uniform_pos()) / std::log(spec.ratio));
      return static_cast<AtomId>(y);
    }
    case FamilySpec::Kind::zeta: {
      // Devroye's rejection sampler for the Zipf law on {1, 2, ...}.
      const double a = spec.exponent;
      const double b = std::pow(2.0, a - 1.0);
      for (;;) {
        const double u = rng.uniform_pos();
        const double v = rng.uniform();
        const double x = std::floor(std::pow(u, -1.0 / (a - 1.0)));
        if (!(x < 1e18)) continue;
        const double t = std::pow(1.0 + 1.0 / x, a - 1.0);
        if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<AtomId>(x) - 1;
      }
    }
  }
  return 0;
}

}  // namespace wep
