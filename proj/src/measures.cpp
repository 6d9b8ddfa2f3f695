#include "wep/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wep {

namespace {

// Sorts by id and merges duplicates; exact zeros are removed.
std::vector<Atom> canonicalize(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.id < b.id; });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.mass)) {
      throw std::domain_error("non-finite mass at atom " + std::to_string(a.id));
    }
    if (!out.empty() && out.back().id == a.id) {
      out.back().mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [](const Atom& a) { return a.mass == 0.0; });
  return out;
}

// Neumaier-compensated sum of the masses; plain summation of 10^6 equal
// atoms already drifts by ~1e-11.
double compensated_total(std::span<const Atom> atoms) {
  double sum = 0.0, carry = 0.0;
  for (const Atom& a : atoms) {
    const double t = sum + a.mass;
    if (std::abs(sum) >= std::abs(a.mass)) {
      carry += (sum - t) + a.mass;
    } else {
      carry += (a.mass - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

bool validates_as_probability(std::span<const Atom> atoms) {
  if (atoms.empty()) return false;
  for (const Atom& a : atoms) {
    if (!(a.mass > 0.0)) return false;
  }
  return std::abs(compensated_total(atoms) - 1.0) <= kProbabilityTolerance;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<Atom> atoms) {
  DiscreteMeasure mu;
  mu.atoms_ = canonicalize(std::move(atoms));
  return mu;
}

DiscreteMeasure DiscreteMeasure::probability(std::vector<Atom> atoms) {
  DiscreteMeasure mu = from_atoms(std::move(atoms));
  if (!validates_as_probability(mu.atoms_)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "not a probability measure (total mass " << mu.total_mass()
        << ", or a non-positive atom)";
    throw std::domain_error(msg.str());
  }
  mu.is_probability_ = true;
  return mu;
}

DiscreteMeasure DiscreteMeasure::dirac(AtomId id) {
  return probability({{id, 1.0}});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t m, AtomId first) {
  if (m == 0) throw std::domain_error("uniform measure on zero atoms");
  std::vector<Atom> atoms(m);
  const double w = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) atoms[i] = {first + i, w};
  return probability(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::empirical(std::span<const AtomId> sample) {
  if (sample.empty()) throw std::domain_error("empirical measure of an empty sample");
  std::vector<AtomId> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i) / n});
    i = j;
  }
  return probability(std::move(atoms));
}

double DiscreteMeasure::total_mass() const noexcept {
  return compensated_total(atoms_);
}

double DiscreteMeasure::mass(AtomId id) const noexcept {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), id,
                             [](const Atom& a, AtomId v) { return a.id < v; });
  return (it != atoms_.end() && it->id == id) ? it->mass : 0.0;
}

double DiscreteMeasure::mass_of(std::span<const AtomId> set) const {
  std::vector<AtomId> ids(set.begin(), set.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  double total = 0.0;
  for (AtomId id : ids) total += mass(id);
  return total;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  const double total = total_mass();
  if (!(total > 0.0)) throw std::domain_error("cannot normalize a measure with non-positive total");
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) {
    if (!(a.mass > 0.0)) throw std::domain_error("cannot normalize a signed measure");
    a.mass /= total;
  }
  DiscreteMeasure mu = probability(std::move(atoms));
  mu.lost_mass_ = lost_mass_ / total;
  return mu;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  return combine(*this, factor, DiscreteMeasure{}, 0.0);
}

DiscreteMeasure DiscreteMeasure::combine(const DiscreteMeasure& a, double wa,
                                         const DiscreteMeasure& b, double wb) {
  DiscreteMeasure out;
  out.atoms_.reserve(a.size() + b.size());
  out.lost_mass_ = std::abs(wa) * a.lost_mass_ + std::abs(wb) * b.lost_mass_;
  auto push = [&out](AtomId id, double m) {
    if (std::abs(m) < kDropThreshold) {
      out.lost_mass_ += std::abs(m);
    } else {
      out.atoms_.push_back({id, m});
    }
  };
  auto ia = a.atoms_.begin();
  auto ib = b.atoms_.begin();
  while (ia != a.atoms_.end() || ib != b.atoms_.end()) {
    if (ib == b.atoms_.end() || (ia != a.atoms_.end() && ia->id < ib->id)) {
      push(ia->id, wa * ia->mass);
      ++ia;
    } else if (ia == a.atoms_.end() || ib->id < ia->id) {
      push(ib->id, wb * ib->mass);
      ++ib;
    } else {
      push(ia->id, wa * ia->mass + wb * ib->mass);
      ++ia;
      ++ib;
    }
  }
  return out;
}

DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return DiscreteMeasure::combine(a, 1.0, b, 1.0);
}

DiscreteMeasure operator-(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return DiscreteMeasure::combine(a, 1.0, b, -1.0);
}

WeightSeq::WeightSeq(std::vector<double> weights, double remainder)
    : weights_(std::move(weights)), remainder_(remainder) {
  if (!(remainder_ >= 0.0)) throw std::domain_error("negative weight remainder");
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::domain_error("negative weight");
  }
}

double WeightSeq::l1() const noexcept {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

double lr_norm(std::span<const double> w, double r) {
  if (!(r >= 1.0)) throw std::domain_error("l^r norm requires r >= 1");
  if (std::isinf(r)) {
    double best = 0.0;
    for (double x : w) best = std::max(best, std::abs(x));
    return best;
  }
  if (r == 1.0) {
    double total = 0.0;
    for (double x : w) total += std::abs(x);
    return total;
  }
  if (r == 2.0) {
    double total = 0.0;
    for (double x : w) total += x * x;
    return std::sqrt(total);
  }
  double total = 0.0;
  for (double x : w) total += std::pow(std::abs(x), r);
  return std::pow(total, 1.0 / r);
}

double lr_norm(const WeightSeq& w, double r) { return lr_norm(w.weights(), r); }

double signed_sup_norm(const DiscreteMeasure& mu) {
  double positive = 0.0;
  double negative = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (a.mass > 0.0) {
      positive += a.mass;
    } else {
      negative -= a.mass;
    }
  }
  return std::max(positive, negative);
}

double tv_distance(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  // Merge walk instead of materializing p - q, so nothing is dropped.
  double positive = 0.0;
  double negative = 0.0;
  auto accumulate = [&](double d) {
    if (d > 0.0) {
      positive += d;
    } else {
      negative -= d;
    }
  };
  auto ip = p.atoms().begin();
  auto iq = q.atoms().begin();
  while (ip != p.atoms().end() || iq != q.atoms().end()) {
    if (iq == q.atoms().end() || (ip != p.atoms().end() && ip->id < iq->id)) {
      accumulate(ip->mass);
      ++ip;
    } else if (ip == p.atoms().end() || iq->id < ip->id) {
      accumulate(-iq->mass);
      ++iq;
    } else {
      accumulate(ip->mass - iq->mass);
      ++ip;
      ++iq;
    }
  }
  return std::max(positive, negative);
}

double ddb_statistic(const DiscreteMeasure& p) {
  double total = 0.0;
  for (const Atom& a : p.atoms()) {
    if (a.mass < 0.0) throw std::domain_error("ddb_statistic of a signed measure");
    total += std::sqrt(a.mass);
  }
  return total;
}

DiscreteMeasure mix(const DiscreteMeasure& a, const DiscreteMeasure& b, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("mixing weight outside [0, 1]");
  if (!a.is_probability() || !b.is_probability()) {
    throw std::domain_error("mix requires probability measures");
  }
  if (theta == 1.0) return a;
  if (theta == 0.0) return b;
  DiscreteMeasure out = a.scaled(theta) + b.scaled(1.0 - theta);
  const double lost = out.lost_mass();
  DiscreteMeasure result = DiscreteMeasure::probability(
      std::vector<Atom>(out.atoms().begin(), out.atoms().end()));
  result.lost_mass_ = lost;
  return result;
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  const auto old_precision = out.precision(17);
  for (const Atom& a : mu.atoms()) out << a.id << ',' << a.mass << '\n';
  out.precision(old_precision);
}

DiscreteMeasure read_csv(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "id,mass") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("measure CSV line " + std::to_string(line_no) + ": missing comma");
    }
    try {
      std::size_t used = 0;
      const AtomId id = std::stoull(line.substr(0, comma), &used);
      const double m = std::stod(line.substr(comma + 1));
      atoms.push_back({id, m});
    } catch (const std::logic_error&) {
      throw std::runtime_error("measure CSV line " + std::to_string(line_no) + ": bad number");
    }
  }
  DiscreteMeasure mu = DiscreteMeasure::from_atoms(atoms);
  if (validates_as_probability(mu.atoms())) return DiscreteMeasure::probability(std::move(atoms));
  return mu;
}

}  // namespace wep
