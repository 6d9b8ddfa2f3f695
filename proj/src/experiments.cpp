#include "wep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "wep/dirichlet.hpp"
#include "wep/parallel.hpp"
#include "wep/processes.hpp"
#include "wep/stats.hpp"

namespace wep {

namespace {

constexpr double kSeriesTolerance = 1e-6;

// Round-trip precision for every float written to CSV.
struct CsvPrecision {
  explicit CsvPrecision(std::ostream& out) : out_(out), saved_(out.precision(17)) {}
  ~CsvPrecision() { out_.precision(saved_); }
  CsvPrecision(const CsvPrecision&) = delete;
  CsvPrecision& operator=(const CsvPrecision&) = delete;

 private:
  std::ostream& out_;
  std::streamsize saved_;
};

NormSummary summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {quantile_sorted(values, 0.5), quantile_sorted(values, 0.95)};
}

SeriesVerdict classify(const std::vector<double>& increments) {
  if (increments.empty()) return SeriesVerdict::undecided;
  if (std::abs(increments.back()) < kSeriesTolerance) return SeriesVerdict::convergent;
  if (increments.size() >= 3) {
    const std::size_t k = increments.size();
    const bool flat = increments[k - 1] >= 0.9 * increments[k - 2] &&
                      increments[k - 2] >= 0.9 * increments[k - 3];
    if (flat) return SeriesVerdict::divergent;
  }
  return SeriesVerdict::undecided;
}

// Posterior base alpha_x for the first n points of the stream.
DpParams posterior_for(const DiscreteMeasure& alpha, double concentration,
                       const std::vector<AtomId>& stream, std::size_t n) {
  return posterior_params(DpParams{alpha, concentration},
                          std::span<const AtomId>(stream.data(), n));
}

std::uint64_t max_n(const ExperimentConfig& cfg) {
  if (cfg.n_schedule.empty()) throw std::invalid_argument("experiment needs a non-empty n_schedule");
  return cfg.n_schedule.back();
}

}  // namespace

Rng replication_rng(std::uint64_t master, Stream stream, std::uint64_t group, std::uint64_t r) {
  return Rng(derive_seed(derive_seed(master, static_cast<std::uint64_t>(stream), group),
                         static_cast<std::uint64_t>(stream), r));
}

std::vector<AtomId> data_stream(const FamilySpec& law, std::size_t n, std::uint64_t master) {
  law.validate();
  Rng rng(master, Stream::data);
  std::vector<AtomId> xs(n);
  for (auto& x : xs) x = sample_family(law, rng);
  return xs;
}

DiscreteMeasure prior_mean(const ExperimentConfig& cfg) {
  return truncate_by_tail(cfg.prior.mean.family, cfg.prior.mean.tol).probability();
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::convergent:
      return "convergent";
    case SeriesVerdict::divergent:
      return "divergent";
    case SeriesVerdict::undecided:
      return "undecided";
  }
  return "unknown";
}

DdbReport check_ddb(const FamilySpec& family, const std::vector<std::size_t>& support_schedule) {
  family.validate();
  DdbReport report;
  report.family = family;
  std::vector<double> increments;
  std::vector<double> entropy_increments;
  double previous = 0.0;
  double previous_entropy = 0.0;
  for (std::size_t n_atoms : support_schedule) {
    const TruncatedLaw law = truncate_by_support(family, n_atoms);
    DdbRow row;
    row.support = law.masses.size();
    row.remainder = law.remainder;
    row.partial_sum = ddb_statistic(law.masses);
    row.increment = report.rows.empty() ? row.partial_sum : row.partial_sum - previous;
    row.entropy_bound = entropy_integral_bound(law.masses, 1.0).value;
    if (!report.rows.empty()) {
      increments.push_back(row.increment);
      entropy_increments.push_back(row.entropy_bound - previous_entropy);
    }
    previous = row.partial_sum;
    previous_entropy = row.entropy_bound;
    report.rows.push_back(row);
    // Finite families stop changing once the whole support is stored.
    if (family.finite_support() && law.remainder == 0.0) {
      increments.push_back(0.0);
      entropy_increments.push_back(0.0);
      break;
    }
  }
  report.verdict = classify(increments);
  report.entropy_verdict = classify(entropy_increments);
  return report;
}

void DdbReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "support,remainder,ddb_partial_sum,increment,entropy_bound,verdict\n";
  for (const DdbRow& r : rows) {
    out << r.support << ',' << r.remainder << ',' << r.partial_sum << ',' << r.increment << ','
        << r.entropy_bound << ',' << to_string(verdict) << '\n';
  }
}

ConditionReport check_theorem1_conditions(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t n_max = max_n(cfg);
  const std::vector<AtomId> stream = data_stream(cfg.base.family, n_max, cfg.master_seed);
  const DiscreteMeasure alpha = prior_mean(cfg);
  const DiscreteMeasure p0 = truncate_by_tail(cfg.base.family, cfg.base.tol).probability();
  const double p = cfg.conditions.moment_order;
  const double M = cfg.prior.concentration;

  ConditionReport report;
  report.weights = cfg.conditions.weights;
  for (std::size_t g = 0; g < cfg.n_schedule.size(); ++g) {
    const std::uint64_t n = cfg.n_schedule[g];
    const double nn = static_cast<double>(n);
    DiscreteMeasure baseline = p0;
    if (cfg.conditions.weights == WeightScheme::dp_posterior) {
      baseline = posterior_for(alpha, M, stream, n).base;
    }

    struct Norms {
      double l1, l2, l4, linf;
    };
    const auto draws = parallel_map(cfg.replications, cfg.threads, [&](std::size_t r) {
      WeightSeq w;
      switch (cfg.conditions.weights) {
        case WeightScheme::empirical:
          w = WeightSeq(std::vector<double>(n, 1.0 / nn));
          break;
        case WeightScheme::constant:
          w = WeightSeq(std::vector<double>(n, 1.0));
          break;
        case WeightScheme::dp_posterior: {
          Rng rng = replication_rng(cfg.master_seed, Stream::weights, g, r);
          w = sample_stick_weights(M + nn, cfg.stick_tol, rng);
          break;
        }
      }
      return Norms{lr_norm(w, 1.0), lr_norm(w, 2.0), lr_norm(w, 4.0), lr_norm(w, kInfinity)};
    });

    std::vector<double> l1, l2, l4, linf, prod;
    for (const Norms& d : draws) {
      l1.push_back(d.l1);
      l2.push_back(d.l2);
      l4.push_back(d.l4);
      linf.push_back(d.linf);
      prod.push_back(d.l1 * std::pow(d.linf, p - 1.0));
    }
    ConditionRow row;
    row.n = n;
    row.l1 = summarize(l1);
    row.l2 = summarize(l2);
    row.l4 = summarize(l4);
    row.linf = summarize(linf);
    row.l1_linf_pow = summarize(prod);
    row.envelope_moment = 1.0 > cfg.conditions.envelope_threshold ? 1.0 : 0.0;
    row.entropy_bound = entropy_integral_bound(baseline, 1.0).value;
    row.root_n_l2_median = std::sqrt(nn) * row.l2.median;
    report.rows.push_back(row);
  }

  const auto& rows = report.rows;
  report.l2_to_zero = rows.size() >= 2 && rows.back().l2.median < 0.5 * rows.front().l2.median;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].l2.median < rows[i - 1].l2.median)) report.l2_to_zero = false;
  }
  report.l1_bounded = !rows.empty() && rows.back().l1.q95 <= 1.5 * rows.front().l1.q95;
  return report;
}

void ConditionReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "n,weights,l1_median,l1_q95,l2_median,l2_q95,l4_median,l4_q95,linf_median,linf_q95,"
         "l1_linf_pow_median,l1_linf_pow_q95,envelope_moment,entropy_bound,root_n_l2_median,"
         "l2_to_zero,l1_bounded\n";
  for (const ConditionRow& r : rows) {
    out << r.n << ',' << to_string(weights) << ',' << r.l1.median << ',' << r.l1.q95 << ','
        << r.l2.median << ',' << r.l2.q95 << ',' << r.l4.median << ',' << r.l4.q95 << ','
        << r.linf.median << ',' << r.linf.q95 << ',' << r.l1_linf_pow.median << ','
        << r.l1_linf_pow.q95 << ',' << r.envelope_moment << ',' << r.entropy_bound << ','
        << r.root_n_l2_median << ',' << (l2_to_zero ? 1 : 0) << ',' << (l1_bounded ? 1 : 0)
        << '\n';
  }
}

GcReport run_gc_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<AtomId> stream = data_stream(cfg.base.family, max_n(cfg), cfg.master_seed);
  const DiscreteMeasure alpha = prior_mean(cfg);
  const double M = cfg.prior.concentration;

  GcReport report;
  for (std::size_t g = 0; g < cfg.n_schedule.size(); ++g) {
    const std::uint64_t n = cfg.n_schedule[g];
    const DiscreteMeasure empirical =
        DiscreteMeasure::empirical(std::span<const AtomId>(stream.data(), n));
    const DpSampler sampler(posterior_for(alpha, M, stream, n), cfg.stick_tol);
    const DiscreteMeasure& alpha_x = sampler.params().base;

    GcRow row;
    row.n = n;
    row.theta = M / (M + static_cast<double>(n));
    row.prior_shift = tv_distance(alpha_x, empirical);

    struct Draw {
      double tv, tv_alpha, remainder;
    };
    const auto draws = parallel_map(cfg.replications, cfg.threads, [&](std::size_t r) {
      Rng rng = replication_rng(cfg.master_seed, Stream::posterior, g, r);
      const DiscreteMeasure d = sampler.draw(rng);
      return Draw{tv_distance(d, empirical), tv_distance(d, alpha_x), 1.0 - d.total_mass()};
    });

    std::vector<double> tvs;
    for (const Draw& d : draws) {
      tvs.push_back(d.tv);
      row.max_remainder = std::max(row.max_remainder, d.remainder);
      if (d.tv > d.tv_alpha + row.prior_shift + 1e-12) ++row.triangle_violations;
    }
    if (row.prior_shift > row.theta + 1e-12) ++row.triangle_violations;
    std::sort(tvs.begin(), tvs.end());
    row.median = quantile_sorted(tvs, 0.5);
    row.q05 = quantile_sorted(tvs, 0.05);
    row.q25 = quantile_sorted(tvs, 0.25);
    row.q75 = quantile_sorted(tvs, 0.75);
    row.q95 = quantile_sorted(tvs, 0.95);
    double sum = 0.0;
    for (double v : tvs) sum += v;
    row.mean = sum / static_cast<double>(tvs.size());
    report.rows.push_back(row);
  }
  return report;
}

void GcReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "n,theta,prior_shift_tv,tv_median,tv_q05,tv_q25,tv_q75,tv_q95,tv_mean,max_remainder,"
         "triangle_violations\n";
  for (const GcRow& r : rows) {
    out << r.n << ',' << r.theta << ',' << r.prior_shift << ',' << r.median << ',' << r.q05 << ','
        << r.q25 << ',' << r.q75 << ',' << r.q95 << ',' << r.mean << ',' << r.max_remainder << ','
        << r.triangle_violations << '\n';
  }
}

BvmReport run_bvm_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  BvmReport report;
  report.data_ddb = check_ddb(cfg.base.family, cfg.ddb_schedule);
  report.prior_ddb = check_ddb(cfg.prior.mean.family, cfg.ddb_schedule);
  if (report.data_ddb.verdict == SeriesVerdict::divergent) {
    throw HypothesisRefused("data law " + cfg.base.family.name() +
                            " fails the DDB summability check (sum of sqrt masses diverges)");
  }
  if (report.prior_ddb.verdict == SeriesVerdict::divergent) {
    throw HypothesisRefused("prior mean " + cfg.prior.mean.family.name() +
                            " fails the DDB summability check (sum of sqrt masses diverges)");
  }

  const std::vector<AtomId> stream = data_stream(cfg.base.family, max_n(cfg), cfg.master_seed);
  const DiscreteMeasure alpha = prior_mean(cfg);
  const double M = cfg.prior.concentration;
  for (std::size_t g = 0; g < cfg.n_schedule.size(); ++g) {
    const std::uint64_t n = cfg.n_schedule[g];
    const double root_n = std::sqrt(static_cast<double>(n));
    const DiscreteMeasure empirical =
        DiscreteMeasure::empirical(std::span<const AtomId>(stream.data(), n));
    const DpSampler sampler(posterior_for(alpha, M, stream, n), cfg.stick_tol);
    const BridgeSampler bridge(empirical);

    struct Pair {
      double posterior, bridge;
    };
    const auto draws = parallel_map(cfg.replications, cfg.threads, [&](std::size_t r) {
      Rng post_rng = replication_rng(cfg.master_seed, Stream::posterior, g, r);
      Rng bridge_rng = replication_rng(cfg.master_seed, Stream::bridge, g, r);
      return Pair{root_n * tv_distance(sampler.draw(post_rng), empirical),
                  bridge.draw_sup_norm(bridge_rng)};
    });
    BvmBlock block;
    block.n = n;
    for (const Pair& p : draws) {
      block.posterior.push_back(p.posterior);
      block.bridge.push_back(p.bridge);
    }
    std::sort(block.posterior.begin(), block.posterior.end());
    std::sort(block.bridge.begin(), block.bridge.end());
    block.ks = ks_distance(block.posterior, block.bridge);
    report.blocks.push_back(std::move(block));
  }
  return report;
}

void BvmReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "n,rank,ecdf,posterior_root_n_tv,bridge_sup_norm\n";
  for (const BvmBlock& b : blocks) {
    const double count = static_cast<double>(b.posterior.size());
    for (std::size_t i = 0; i < b.posterior.size(); ++i) {
      out << b.n << ',' << i + 1 << ',' << static_cast<double>(i + 1) / count << ','
          << b.posterior[i] << ',' << b.bridge[i] << '\n';
    }
  }
}

void BvmReport::write_summary_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "n,replications,ks,posterior_median,bridge_median,data_ddb,prior_ddb\n";
  for (const BvmBlock& b : blocks) {
    out << b.n << ',' << b.posterior.size() << ',' << b.ks << ','
        << quantile_sorted(b.posterior, 0.5) << ',' << quantile_sorted(b.bridge, 0.5) << ','
        << to_string(data_ddb.verdict) << ',' << to_string(prior_ddb.verdict) << '\n';
  }
}

BracketingReport run_bracketing_profile(const ExperimentConfig& cfg) {
  cfg.validate();
  const TruncatedLaw law = truncate_by_tail(cfg.base.family, cfg.base.tol);
  BracketingReport report;
  report.family = cfg.base.family;
  report.remainder = law.remainder;
  report.support = law.masses.size();
  const DyadicEntropyProfile profile = dyadic_profile(law.masses, cfg.k_max, law.remainder);
  const double root_log2 = std::sqrt(std::log(2.0));
  double partial = 0.0;
  for (const DyadicLevel& level : profile.levels) {
    BracketingRow row;
    row.level = level;
    partial += root_log2 * std::sqrt(static_cast<double>(level.m)) *
               std::ldexp(1.0, -static_cast<int>(level.k));
    row.entropy_partial_sum = partial;
    row.entropy_tail_bound =
        entropy_integral_bound(law.masses, std::ldexp(1.0, -static_cast<int>(level.k - 1))).value;
    row.lemma6 = lemma6_rhs(law.masses, level.k, law.remainder);
    report.rows.push_back(row);
  }
  return report;
}

void BracketingReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "k,j_k,m_k,bracket_bound,entropy_partial_sum,lemma6_structural,lemma6_tail_sum,"
         "entropy_tail_bound\n";
  for (const BracketingRow& r : rows) {
    out << r.level.k << ',' << r.level.j << ',' << r.level.m << ',' << r.level.count_bound() << ','
        << r.entropy_partial_sum << ',' << r.lemma6.structural() << ',' << r.lemma6.tail_sum << ','
        << r.entropy_tail_bound << '\n';
  }
}

LocalConfig local_config(const ExperimentConfig& cfg, double bandwidth) {
  LocalConfig lc;
  lc.center = cfg.local.center;
  lc.bandwidth = bandwidth;
  lc.s_lo = cfg.local.s_lo;
  lc.s_hi = cfg.local.s_hi;
  lc.density = cfg.local.density;
  lc.t_grid = LocalConfig::even_grid(lc.s_lo, lc.s_hi, cfg.local.grid_size);
  return lc;
}

std::uint64_t local_sample_size(const ExperimentConfig& cfg, double bandwidth) {
  if (cfg.local.n) return *cfg.local.n;
  return static_cast<std::uint64_t>(std::llround(cfg.local.n_times_h / bandwidth));
}

LocalReport run_local_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.replications < 2) throw std::invalid_argument("local-ep needs at least 2 replications");
  LocalReport report;
  for (std::size_t g = 0; g < cfg.local.h_schedule.size(); ++g) {
    const double h = cfg.local.h_schedule[g];
    report.studies.push_back(local_covariance_study(
        local_config(cfg, h), local_sample_size(cfg, h), cfg.replications,
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(Stream::local), g), cfg.threads));
  }
  return report;
}

void LocalReport::write_csv(std::ostream& out) const {
  CsvPrecision guard(out);
  out << "h,t,mean,variance,target,n,variance_se\n";
  for (const LocalCovarianceStudy& s : studies) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
      out << s.bandwidth << ',' << s.t_grid[i] << ',' << s.mean[i] << ',' << s.cov(i, i) << ','
          << s.tgt(i, i) << ',' << s.n << ',' << s.se(i, i) << '\n';
    }
  }
}

}  // namespace wep
