#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "wep/measures.hpp"

namespace wep {

// Bracketing for the class of all indicator functions 1_C, C a subset of the
// countable space. All routines see only the stored support of the measure;
// callers holding a truncated law pass its remainder where an argument
// allows it.

/// Band of a mass m in (0, 1]: the j >= 0 with 16^{-j-1} < m <= 16^{-j}.
unsigned mass_band(double mass);

/// Census of the bands: j -> r_j = #{y : 16^{-j-1} < p_y <= 16^{-j}}.
struct BandCensus {
  std::map<unsigned, std::size_t> counts;

  std::size_t count(unsigned j) const;
  /// sum_{j <= upto} r_j
  std::size_t cumulative(unsigned upto) const;
};

BandCensus aj_partition(const DiscreteMeasure& p);

/// min{ J >= 0 : sum_{y : p_y <= 16^{-J}} p_y + unseen_tail <= 4^{-k} }.
///
/// unseen_tail is mass cut from the stored support; it is charged to every
/// tail, which can only raise the index. Throws std::domain_error when
/// unseen_tail alone exceeds 4^{-k}.
unsigned jk_index(const DiscreteMeasure& p, unsigned k, double unseen_tail = 0.0);

/// m(k) = sum_{j=0}^{j(k)} r_j. 2^{m(k)} brackets of L2(p)-size 2^{-k}
/// cover all indicators.
std::size_t mk_count(const DiscreteMeasure& p, unsigned k, double unseen_tail = 0.0);

struct DyadicLevel {
  unsigned k;
  unsigned j;
  std::size_t m;
  /// 2^m as a double (inf once m > 1023).
  double count_bound() const { return std::ldexp(1.0, static_cast<int>(m)); }
};

struct DyadicEntropyProfile {
  std::vector<DyadicLevel> levels;  // k = 1, 2, ..., k_max
  BandCensus census;
  double unseen_tail = 0.0;
};

DyadicEntropyProfile dyadic_profile(const DiscreteMeasure& p, unsigned k_max,
                                    double unseen_tail = 0.0);

/// [[1_lower, 1_upper]] with lower a subset of upper. Sets are sorted ids.
struct IndicatorBracket {
  std::vector<AtomId> lower;
  std::vector<AtomId> upper;

  /// lower ⊆ C ⊆ upper, with C given as ids (any order).
  bool contains(std::span<const AtomId> set) const;
};

/// ||1_upper - 1_lower||_{q,r} = q(upper \ lower)^{1/r}.
double bracket_diameter(const DiscreteMeasure& q, const IndicatorBracket& b, int norm_order);

struct BracketCover {
  std::vector<IndicatorBracket> brackets;
  double radius = 0.0;
  int norm_order = 1;
  /// The finite core C0; brackets are [[1_C, 1_{C ∪ C0^c}]] for C ⊆ C0.
  std::vector<AtomId> core;
  /// p(C0^c) over the stored support, the common diameter of all brackets.
  double diameter = 0.0;

  /// Some bracket contains C (restricted to the stored support).
  bool covers(std::span<const AtomId> set) const;
};

/// L1 cover from the smallest mass-ordered core C0 (ties by ascending id)
/// with p(C0) > 1 - eps. Throws std::domain_error when the whole stored
/// support leaves at least eps outside, and std::length_error for cores with
/// more than 24 atoms.
BracketCover bracket_cover_l1(const DiscreteMeasure& p, double eps);

/// Number of atoms in C0 without building the cover.
std::size_t l1_core_size(const DiscreteMeasure& p, double eps);

/// Exact N_[](eps, indicators, ||.||_{p,r}) by exhaustive search over all
/// candidate brackets. Support of at most 4 atoms; throws
/// std::length_error otherwise.
std::size_t brute_force_bracket_number(const DiscreteMeasure& p, double eps, int norm_order);

struct EntropyBound {
  double value = 0.0;
  /// Bound on the part of the series that was not summed.
  double truncation_error = 0.0;
  /// First dyadic level p with 2^{-(p-1)} <= delta.
  unsigned level = 1;
};

/// sqrt(log 2) * sum_{k >= p} sqrt(m(k)) 2^{-k}: the dyadic majorant of the
/// bracketing integral J_[](delta, indicators, p).
EntropyBound entropy_integral_bound(const DiscreteMeasure& p, double delta);

/// Right-hand side of the tail-sum bound on J_[](2^{-(level-1)}):
/// sqrt(sum_y sqrt(p_y)) * sqrt(sum_{p_y <= 16^{-j(level)+1}} sqrt(p_y)).
struct TailSumBound {
  unsigned level = 1;
  unsigned j = 0;
  /// sum_y sqrt(p_y)
  double ddb_sum = 0.0;
  /// sum over the tail band set of sqrt(p_y)
  double tail_sum = 0.0;

  /// Product of the two square roots, without the universal constant.
  double structural() const { return std::sqrt(ddb_sum) * std::sqrt(tail_sum); }

  /// A constant valid for the structural product, read off the chaining
  /// inequalities: sqrt(log 2) * 2 * sqrt(8 * 32).
  static double conservative_constant() { return std::sqrt(std::log(2.0)) * 2.0 * std::sqrt(256.0); }
};

TailSumBound lemma6_rhs(const DiscreteMeasure& p, unsigned level, double unseen_tail = 0.0);

}  // namespace wep
