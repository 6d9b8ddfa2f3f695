#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace wep {

/// Index into the countable ambient space. Any concrete countable space is
/// encoded by the caller.
using AtomId = std::uint64_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Arithmetic results with |mass| below this are dropped (and tallied in
/// lost_mass()).
inline constexpr double kDropThreshold = 1e-15;

/// Tolerance on total mass for a measure to count as a probability.
inline constexpr double kProbabilityTolerance = 1e-12;

struct Atom {
  AtomId id;
  double mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported signed measure, stored as atoms sorted by id.
///
/// Invariants: no stored atom has mass exactly zero, ids strictly increase,
/// and when is_probability() holds every mass is positive and the total is
/// within kProbabilityTolerance of one.
class DiscreteMeasure {
 public:
  /// The zero measure.
  DiscreteMeasure() = default;

  /// Signed measure from arbitrary (id, mass) pairs. Duplicate ids are
  /// merged; exact zeros are removed.
  static DiscreteMeasure from_atoms(std::vector<Atom> atoms);

  /// Probability measure; throws std::domain_error if masses are not all
  /// positive or do not sum to one.
  static DiscreteMeasure probability(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(AtomId id);
  /// Uniform on ids first, first+1, ..., first+m-1.
  static DiscreteMeasure uniform(std::size_t m, AtomId first = 0);
  /// Empirical measure n^{-1} sum_i delta_{x_i}; throws on an empty sample.
  static DiscreteMeasure empirical(std::span<const AtomId> sample);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  bool is_probability() const noexcept { return is_probability_; }

  /// Total |mass| dropped below kDropThreshold while producing this value.
  double lost_mass() const noexcept { return lost_mass_; }

  double total_mass() const noexcept;
  double mass(AtomId id) const noexcept;
  /// mu(C) for a set given as a list of ids (duplicates counted once).
  double mass_of(std::span<const AtomId> set) const;

  /// Rescaled to total mass one. Throws std::domain_error when some mass is
  /// non-positive or the total is zero.
  DiscreteMeasure normalized() const;

  DiscreteMeasure scaled(double factor) const;

  friend DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b);
  friend DiscreteMeasure operator-(const DiscreteMeasure& a, const DiscreteMeasure& b);
  friend DiscreteMeasure mix(const DiscreteMeasure& a, const DiscreteMeasure& b, double theta);

 private:
  static DiscreteMeasure combine(const DiscreteMeasure& a, double wa,
                                 const DiscreteMeasure& b, double wb);

  std::vector<Atom> atoms_;
  bool is_probability_ = false;
  double lost_mass_ = 0.0;
};

/// Non-negative weight vector with the mass truncated away tracked
/// separately. l1() never includes the remainder.
class WeightSeq {
 public:
  WeightSeq() = default;
  /// Throws std::domain_error on a negative entry or remainder.
  explicit WeightSeq(std::vector<double> weights, double remainder = 0.0);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double remainder() const noexcept { return remainder_; }
  double l1() const noexcept;

 private:
  std::vector<double> weights_;
  double remainder_ = 0.0;
};

/// (sum_i w_i^r)^{1/r}, or max_i w_i for r = kInfinity. Zero for the empty
/// sequence. Throws std::domain_error for r < 1.
double lr_norm(const WeightSeq& w, double r);
double lr_norm(std::span<const double> w, double r);

/// sup_C |mu(C)| over all subsets C, in linear time:
/// max(positive part, negative part) = (sum |m| + |sum m|) / 2.
double signed_sup_norm(const DiscreteMeasure& mu);

/// sup_C |p(C) - q(C)|; for probabilities equals half the l1 distance.
double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// sum_y sqrt(p({y})) over stored atoms. Throws std::domain_error on a
/// negative mass.
double ddb_statistic(const DiscreteMeasure& p);

/// theta * a + (1 - theta) * b for probability measures a, b.
DiscreteMeasure mix(const DiscreteMeasure& a, const DiscreteMeasure& b, double theta);

/// One "id,mass" line per atom, masses with 17 significant digits.
void write_csv(std::ostream& out, const DiscreteMeasure& mu);
/// Inverse of write_csv. Lines that are empty or start with '#' are skipped,
/// as is an optional "id,mass" header.
DiscreteMeasure read_csv(std::istream& in);

}  // namespace wep
