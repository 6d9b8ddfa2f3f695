#pragma once

#include <cstddef>
#include <string>

#include "wep/measures.hpp"
#include "wep/rng.hpp"

namespace wep {

/// Named laws on the non-negative integers.
///
///   dirac      delta_{atom}
///   uniform    uniform on {0, ..., size-1}
///   geometric  p_y = (1 - ratio) ratio^y
///   zeta       p_y = (y + 1)^{-exponent} / zeta(exponent), exponent > 1
struct FamilySpec {
  enum class Kind { dirac, uniform, geometric, zeta };

  Kind kind = Kind::geometric;
  AtomId atom = 0;
  std::size_t size = 1;
  double ratio = 0.5;
  double exponent = 2.0;

  static FamilySpec dirac(AtomId id) { return {Kind::dirac, id, 1, 0.5, 2.0}; }
  static FamilySpec uniform(std::size_t m) { return {Kind::uniform, 0, m, 0.5, 2.0}; }
  static FamilySpec geometric(double ratio) { return {Kind::geometric, 0, 1, ratio, 2.0}; }
  static FamilySpec zeta(double exponent) { return {Kind::zeta, 0, 1, 0.5, exponent}; }

  bool finite_support() const noexcept {
    return kind == Kind::dirac || kind == Kind::uniform;
  }

  /// Throws std::domain_error on out-of-range parameters.
  void validate() const;

  std::string name() const;
};

/// A law restricted to a finite set of atoms. `masses` holds the exact
/// family masses (not renormalized); `remainder` is the mass of everything
/// that was cut.
struct TruncatedLaw {
  DiscreteMeasure masses;
  double remainder = 0.0;

  /// Renormalized onto the stored support.
  DiscreteMeasure probability() const { return masses.normalized(); }
};

/// Exact mass of atom y under the family.
double family_mass(const FamilySpec& spec, AtomId y);

/// Keeps the smallest prefix {0, ..., N-1} whose complement has mass < tol.
/// Finite families are returned whole with remainder 0.
TruncatedLaw truncate_by_tail(const FamilySpec& spec, double tol);

/// Keeps atoms {0, ..., n_atoms-1} (clipped to the support of finite
/// families).
TruncatedLaw truncate_by_support(const FamilySpec& spec, std::size_t n_atoms);

/// One exact draw from the (untruncated) family.
AtomId sample_family(const FamilySpec& spec, Rng& rng);

}  // namespace wep
