#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wep/bracketing.hpp"
#include "wep/config.hpp"
#include "wep/local_empirical.hpp"
#include "wep/measures.hpp"

namespace wep {

/// A theorem hypothesis did not hold for the configured measures (the CLI
/// exits with status 2).
class HypothesisRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator for replication r of group g on a named stream.
Rng replication_rng(std::uint64_t master, Stream stream, std::uint64_t group, std::uint64_t r);

/// A fixed i.i.d. data stream x_1, ..., x_n from the family.
std::vector<AtomId> data_stream(const FamilySpec& law, std::size_t n, std::uint64_t master);

/// Prior mean measure, truncated and renormalized.
DiscreteMeasure prior_mean(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- DDB check

enum class SeriesVerdict { convergent, divergent, undecided };
std::string to_string(SeriesVerdict v);

struct DdbRow {
  std::size_t support = 0;
  double remainder = 0.0;
  double partial_sum = 0.0;
  double increment = 0.0;
  /// Dyadic majorant of J_[](1, indicators, truncation).
  double entropy_bound = 0.0;
};

struct DdbReport {
  FamilySpec family;
  std::vector<DdbRow> rows;
  SeriesVerdict verdict = SeriesVerdict::undecided;
  SeriesVerdict entropy_verdict = SeriesVerdict::undecided;

  double limit() const { return rows.empty() ? 0.0 : rows.back().partial_sum; }
  void write_csv(std::ostream& out) const;
};

/// Partial sums of sqrt(p_y) over growing truncations {0..N-1}.
/// Convergent: last increment below 1e-6. Divergent: the last increments do
/// not shrink (each at least 0.9 times the one before) while staying above
/// 1e-6. Otherwise undecided. The entropy majorant gets the same test.
DdbReport check_ddb(const FamilySpec& family, const std::vector<std::size_t>& support_schedule);

// ------------------------------------------------- weight-norm conditions

struct NormSummary {
  double median = 0.0;
  double q95 = 0.0;
};

struct ConditionRow {
  std::uint64_t n = 0;
  NormSummary l1, l2, l4, linf, l1_linf_pow;
  /// P_n(F^p 1{F > M}) with F = 1.
  double envelope_moment = 0.0;
  /// Dyadic majorant of J_[](1, indicators, baseline).
  double entropy_bound = 0.0;
  /// sqrt(n) ||beta||_2 median (expected -> 1 for posterior weights).
  double root_n_l2_median = 0.0;
};

struct ConditionReport {
  WeightScheme weights = WeightScheme::dp_posterior;
  std::vector<ConditionRow> rows;
  /// Medians of ||beta||_2 strictly decrease and the last is below half the first.
  bool l2_to_zero = false;
  /// 95% quantile of ||beta||_1 grows by at most 50% over the schedule.
  bool l1_bounded = false;

  void write_csv(std::ostream& out) const;
};

/// Monte Carlo summary of the weight norms entering the Glivenko-Cantelli
/// hypotheses, R draws per n.
ConditionReport check_theorem1_conditions(const ExperimentConfig& cfg);

// -------------------------------------------------- posterior experiments

struct GcRow {
  std::uint64_t n = 0;
  double theta = 0.0;
  /// ||alpha_x - P_x||_TV (bounded by theta).
  double prior_shift = 0.0;
  double median = 0.0, q05 = 0.0, q25 = 0.0, q75 = 0.0, q95 = 0.0, mean = 0.0;
  double max_remainder = 0.0;
  std::size_t triangle_violations = 0;
};

struct GcReport {
  std::vector<GcRow> rows;
  void write_csv(std::ostream& out) const;
};

/// TV distance between posterior draws and the empirical measure of one
/// fixed data stream, R draws per n.
GcReport run_gc_experiment(const ExperimentConfig& cfg);

struct BvmBlock {
  std::uint64_t n = 0;
  /// sqrt(n) TV(posterior draw, P_x), sorted.
  std::vector<double> posterior;
  /// Bridge sup norms over P_x, sorted.
  std::vector<double> bridge;
  double ks = 0.0;
};

struct BvmReport {
  std::vector<BvmBlock> blocks;
  DdbReport data_ddb;
  DdbReport prior_ddb;

  /// Side-by-side sorted samples: n, rank, ecdf, posterior, bridge.
  void write_csv(std::ostream& out) const;
  /// One line per n with the KS distance and medians.
  void write_summary_csv(std::ostream& out) const;
};

/// Throws HypothesisRefused when either P0 or the prior mean is flagged
/// divergent by check_ddb.
BvmReport run_bvm_experiment(const ExperimentConfig& cfg);

// -------------------------------------------------------------- bracketing

struct BracketingRow {
  DyadicLevel level;
  double entropy_partial_sum = 0.0;
  double entropy_tail_bound = 0.0;
  TailSumBound lemma6;
};

struct BracketingReport {
  FamilySpec family;
  double remainder = 0.0;
  std::size_t support = 0;
  std::vector<BracketingRow> rows;

  void write_csv(std::ostream& out) const;
};

BracketingReport run_bracketing_profile(const ExperimentConfig& cfg);

// -------------------------------------------------------- local empirical

struct LocalReport {
  std::vector<LocalCovarianceStudy> studies;
  void write_csv(std::ostream& out) const;
};

LocalConfig local_config(const ExperimentConfig& cfg, double bandwidth);
std::uint64_t local_sample_size(const ExperimentConfig& cfg, double bandwidth);

LocalReport run_local_experiment(const ExperimentConfig& cfg);

}  // namespace wep
