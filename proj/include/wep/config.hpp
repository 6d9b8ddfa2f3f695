#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wep/dirichlet.hpp"
#include "wep/families.hpp"
#include "wep/local_empirical.hpp"

namespace wep {

enum class Experiment { gc, bvm, bracketing, local_ep, conditions };

std::string to_string(Experiment e);
/// Accepts "gc", "bvm", "bracketing", "local-ep" (or "local_ep"),
/// "conditions". Throws std::invalid_argument otherwise.
Experiment experiment_from_string(const std::string& name);

struct MeasureSpec {
  FamilySpec family = FamilySpec::geometric(0.5);
  /// Tail mass allowed outside the truncated support.
  double tol = 1e-14;
};

struct PriorSpec {
  MeasureSpec mean{FamilySpec::geometric(0.3), 1e-14};
  double concentration = 1.0;
};

struct LocalSpec {
  double center = 0.0;
  double s_lo = -1.0;
  double s_hi = 1.0;
  DensitySpec density = DensitySpec::normal(0.0, 1.0);
  std::vector<double> h_schedule{0.4, 0.2, 0.1, 0.05};
  /// n = round(n_times_h / h) unless `n` is set.
  double n_times_h = 2000.0;
  std::optional<std::uint64_t> n;
  std::size_t grid_size = 5;
};

enum class WeightScheme { empirical, dp_posterior, constant };

std::string to_string(WeightScheme w);
WeightScheme weight_scheme_from_string(const std::string& name);

struct ConditionsSpec {
  WeightScheme weights = WeightScheme::dp_posterior;
  /// Envelope truncation level M in P_n(F^p 1{F > M}).
  double envelope_threshold = 1.0;
  /// Moment order p >= 2.
  double moment_order = 2.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::gc;
  std::uint64_t master_seed = 20240601;
  std::vector<std::uint64_t> n_schedule;
  std::size_t replications = 200;
  /// Data-generating law P0 (also the measure profiled by `bracketing`).
  MeasureSpec base;
  PriorSpec prior;
  double stick_tol = kDefaultStickTolerance;
  /// Worker count; 0 = all cores. Never affects the output.
  unsigned threads = 0;
  std::string output;

  unsigned k_max = 16;
  /// Support sizes for the DDB partial-sum check.
  std::vector<std::size_t> ddb_schedule{16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576};
  LocalSpec local;
  ConditionsSpec conditions;

  /// Throws std::invalid_argument on R < 1, a schedule that is not
  /// strictly increasing, or invalid nested specs.
  void validate() const;
};

/// Defaults for a given experiment (schedules and R chosen per experiment).
ExperimentConfig default_config(Experiment e);

/// Overlays the keys present in `doc` on default_config(experiment). The
/// experiment comes from doc["experiment"] when present, else `fallback`.
ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<Experiment> fallback = {});

nlohmann::json to_json(const ExperimentConfig& cfg);

FamilySpec parse_family(const nlohmann::json& doc);
nlohmann::json to_json(const FamilySpec& f);

}  // namespace wep
