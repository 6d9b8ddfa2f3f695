#include "wep/bracketing.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wep {

namespace {

// 16^{-j} exactly.
double sixteen_pow(int j) { return std::ldexp(1.0, -4 * j); }

void require_nonnegative(const DiscreteMeasure& p) {
  for (const Atom& a : p.atoms()) {
    if (a.mass < 0.0) throw std::domain_error("bracketing needs a non-negative measure");
  }
}

// Mass carried by each band, indexed by j.
std::vector<double> band_masses(const DiscreteMeasure& p) {
  std::vector<double> out;
  for (const Atom& a : p.atoms()) {
    const unsigned j = mass_band(a.mass);
    if (out.size() <= j) out.resize(j + 1, 0.0);
    out[j] += a.mass;
  }
  return out;
}

std::vector<AtomId> sorted_unique(std::span<const AtomId> ids) {
  std::vector<AtomId> v(ids.begin(), ids.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Atoms ordered by decreasing mass, ties by ascending id.
std::vector<Atom> by_decreasing_mass(const DiscreteMeasure& p) {
  std::vector<Atom> atoms(p.atoms().begin(), p.atoms().end());
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.mass > b.mass; });
  return atoms;
}

}  // namespace

unsigned mass_band(double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) {
    throw std::domain_error("mass band defined only for masses in (0, 1]");
  }
  int j = static_cast<int>(std::floor(-std::log(mass) / std::log(16.0)));
  j = std::max(j, 0);
  while (j > 0 && mass > sixteen_pow(j)) --j;
  while (mass <= sixteen_pow(j + 1)) ++j;
  return static_cast<unsigned>(j);
}

std::size_t BandCensus::count(unsigned j) const {
  auto it = counts.find(j);
  return it == counts.end() ? 0 : it->second;
}

std::size_t BandCensus::cumulative(unsigned upto) const {
  std::size_t total = 0;
  for (auto it = counts.begin(); it != counts.end() && it->first <= upto; ++it) total += it->second;
  return total;
}

BandCensus aj_partition(const DiscreteMeasure& p) {
  require_nonnegative(p);
  BandCensus census;
  for (const Atom& a : p.atoms()) ++census.counts[mass_band(a.mass)];
  return census;
}

unsigned jk_index(const DiscreteMeasure& p, unsigned k, double unseen_tail) {
  require_nonnegative(p);
  const double target = std::ldexp(1.0, -2 * static_cast<int>(k));
  if (unseen_tail > target) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "truncation remainder " << unseen_tail << " exceeds 4^-" << k
        << "; refine the truncation";
    throw std::domain_error(msg.str());
  }
  // tails[J] = sum_{j >= J} band mass, summed from the small end.
  const std::vector<double> bands = band_masses(p);
  std::vector<double> tails(bands.size() + 1, 0.0);
  for (std::size_t j = bands.size(); j-- > 0;) tails[j] = tails[j + 1] + bands[j];
  for (unsigned J = 0;; ++J) {
    const double tail = (J < tails.size() ? tails[J] : 0.0) + unseen_tail;
    if (tail <= target) return J;
  }
}

std::size_t mk_count(const DiscreteMeasure& p, unsigned k, double unseen_tail) {
  return aj_partition(p).cumulative(jk_index(p, k, unseen_tail));
}

DyadicEntropyProfile dyadic_profile(const DiscreteMeasure& p, unsigned k_max, double unseen_tail) {
  DyadicEntropyProfile profile;
  profile.census = aj_partition(p);
  profile.unseen_tail = unseen_tail;
  for (unsigned k = 1; k <= k_max; ++k) {
    const unsigned j = jk_index(p, k, unseen_tail);
    profile.levels.push_back({k, j, profile.census.cumulative(j)});
  }
  return profile;
}

bool IndicatorBracket::contains(std::span<const AtomId> set) const {
  const std::vector<AtomId> c = sorted_unique(set);
  return std::includes(c.begin(), c.end(), lower.begin(), lower.end()) &&
         std::includes(upper.begin(), upper.end(), c.begin(), c.end());
}

double bracket_diameter(const DiscreteMeasure& q, const IndicatorBracket& b, int norm_order) {
  if (norm_order != 1 && norm_order != 2) throw std::domain_error("norm order must be 1 or 2");
  std::vector<AtomId> diff;
  std::set_difference(b.upper.begin(), b.upper.end(), b.lower.begin(), b.lower.end(),
                      std::back_inserter(diff));
  const double m = q.mass_of(diff);
  return norm_order == 1 ? m : std::sqrt(m);
}

bool BracketCover::covers(std::span<const AtomId> set) const {
  // Restrict to the support spanned by the brackets (the first bracket's
  // upper set is exactly the support minus the core).
  std::vector<AtomId> support = core;
  if (!brackets.empty()) {
    support.insert(support.end(), brackets.front().upper.begin(), brackets.front().upper.end());
  }
  std::sort(support.begin(), support.end());
  std::vector<AtomId> restricted;
  const std::vector<AtomId> c = sorted_unique(set);
  std::set_intersection(c.begin(), c.end(), support.begin(), support.end(),
                        std::back_inserter(restricted));
  return std::any_of(brackets.begin(), brackets.end(),
                     [&](const IndicatorBracket& b) { return b.contains(restricted); });
}

std::size_t l1_core_size(const DiscreteMeasure& p, double eps) {
  require_nonnegative(p);
  if (!(eps > 0.0)) throw std::domain_error("bracket radius must be positive");
  const std::vector<Atom> ordered = by_decreasing_mass(p);
  const double needed = 1.0 - eps;
  double covered = 0.0;
  std::size_t n = 0;
  while (!(covered > needed)) {
    if (n == ordered.size()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "stored support carries mass " << covered << " but the cover needs more than "
          << needed << "; extend the truncation so the tail is below " << eps;
      throw std::domain_error(msg.str());
    }
    covered += ordered[n++].mass;
  }
  return n;
}

BracketCover bracket_cover_l1(const DiscreteMeasure& p, double eps) {
  const std::size_t core_size = l1_core_size(p, eps);
  if (core_size > 24) throw std::length_error("L1 bracket cover would need more than 2^24 brackets");
  const std::vector<Atom> ordered = by_decreasing_mass(p);

  BracketCover cover;
  cover.radius = eps;
  cover.norm_order = 1;
  for (std::size_t i = 0; i < core_size; ++i) cover.core.push_back(ordered[i].id);
  std::vector<AtomId> outside;
  for (std::size_t i = core_size; i < ordered.size(); ++i) {
    outside.push_back(ordered[i].id);
    cover.diameter += ordered[i].mass;
  }
  std::sort(outside.begin(), outside.end());

  const std::uint64_t n_brackets = std::uint64_t{1} << core_size;
  cover.brackets.reserve(n_brackets);
  for (std::uint64_t mask = 0; mask < n_brackets; ++mask) {
    IndicatorBracket b;
    for (std::size_t i = 0; i < core_size; ++i) {
      if (mask >> i & 1U) b.lower.push_back(cover.core[i]);
    }
    std::sort(b.lower.begin(), b.lower.end());
    std::merge(b.lower.begin(), b.lower.end(), outside.begin(), outside.end(),
               std::back_inserter(b.upper));
    cover.brackets.push_back(std::move(b));
  }
  std::sort(cover.core.begin(), cover.core.end());
  return cover;
}

std::size_t brute_force_bracket_number(const DiscreteMeasure& p, double eps, int norm_order) {
  require_nonnegative(p);
  if (norm_order != 1 && norm_order != 2) throw std::domain_error("norm order must be 1 or 2");
  if (!(eps > 0.0)) throw std::domain_error("bracket radius must be positive");
  const std::size_t k = p.size();
  if (k > 4) throw std::length_error("exhaustive bracket search is limited to 4 atoms");

  const unsigned n_sets = 1U << k;           // indicators, as masks over atoms
  const std::uint32_t full = (n_sets == 32) ? ~0U : ((1U << n_sets) - 1U);
  const double slack = 1e-12;

  // Each admissible bracket (L ⊆ U) covers the sets C with L ⊆ C ⊆ U.
  std::set<std::uint32_t> candidate_masks;
  for (unsigned lower = 0; lower < n_sets; ++lower) {
    for (unsigned upper = 0; upper < n_sets; ++upper) {
      if ((lower & upper) != lower) continue;
      double diff_mass = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if ((upper & ~lower) >> i & 1U) diff_mass += p.atoms()[i].mass;
      }
      const double diameter = norm_order == 1 ? diff_mass : std::sqrt(diff_mass);
      if (diameter > eps * (1.0 + slack)) continue;
      std::uint32_t covered = 0;
      for (unsigned c = 0; c < n_sets; ++c) {
        if ((lower & c) == lower && (c & upper) == c) covered |= 1U << c;
      }
      candidate_masks.insert(covered);
    }
  }
  // Only maximal brackets matter for a minimum cover.
  std::vector<std::uint32_t> maximal;
  for (std::uint32_t m : candidate_masks) {
    const bool dominated = std::any_of(candidate_masks.begin(), candidate_masks.end(),
                                       [m](std::uint32_t o) { return o != m && (o & m) == m; });
    if (!dominated) maximal.push_back(m);
  }

  // Breadth-first search over covered-set states.
  std::vector<std::uint8_t> depth(std::size_t{full} + 1, 0xFF);
  std::deque<std::uint32_t> queue{0};
  depth[0] = 0;
  while (!queue.empty()) {
    const std::uint32_t state = queue.front();
    queue.pop_front();
    if (state == full) return depth[state];
    for (std::uint32_t m : maximal) {
      const std::uint32_t next = state | m;
      if (depth[next] == 0xFF) {
        depth[next] = static_cast<std::uint8_t>(depth[state] + 1);
        queue.push_back(next);
      }
    }
  }
  throw std::logic_error("degenerate brackets always cover; search cannot fail");
}

EntropyBound entropy_integral_bound(const DiscreteMeasure& p, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("entropy integral needs delta > 0");
  EntropyBound out;
  unsigned level = 1;
  while (std::ldexp(1.0, -static_cast<int>(level - 1)) > delta) ++level;
  out.level = level;

  const BandCensus census = aj_partition(p);
  const double support = static_cast<double>(std::max<std::size_t>(p.size(), 1));
  const double root_log2 = std::sqrt(std::log(2.0));
  double sum = 0.0;
  for (unsigned k = level;; ++k) {
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    sum += std::sqrt(static_cast<double>(census.cumulative(jk_index(p, k)))) * scale;
    // m(k) <= #support, so what is left is at most sqrt(#support) 2^{-k}.
    const double rest = std::sqrt(support) * scale;
    if (rest < 1e-12) {
      out.value = root_log2 * sum;
      out.truncation_error = root_log2 * rest;
      return out;
    }
  }
}

TailSumBound lemma6_rhs(const DiscreteMeasure& p, unsigned level, double unseen_tail) {
  if (level < 1) throw std::domain_error("tail-sum bound needs level >= 1");
  TailSumBound out;
  out.level = level;
  out.j = jk_index(p, level, unseen_tail);
  out.ddb_sum = ddb_statistic(p);
  const double threshold = std::ldexp(1.0, -4 * (static_cast<int>(out.j) - 1));
  // Summed from the smallest masses up.
  std::vector<double> tail;
  for (const Atom& a : p.atoms()) {
    if (a.mass <= threshold) tail.push_back(a.mass);
  }
  std::sort(tail.begin(), tail.end());
  for (double m : tail) out.tail_sum += std::sqrt(m);
  return out;
}

}  // namespace wep
