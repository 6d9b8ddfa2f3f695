#include "wep/config.hpp"

#include <stdexcept>

namespace wep {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::gc:
      return "gc";
    case Experiment::bvm:
      return "bvm";
    case Experiment::bracketing:
      return "bracketing";
    case Experiment::local_ep:
      return "local-ep";
    case Experiment::conditions:
      return "conditions";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "gc") return Experiment::gc;
  if (name == "bvm") return Experiment::bvm;
  if (name == "bracketing") return Experiment::bracketing;
  if (name == "local-ep" || name == "local_ep") return Experiment::local_ep;
  if (name == "conditions") return Experiment::conditions;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string to_string(WeightScheme w) {
  switch (w) {
    case WeightScheme::empirical:
      return "empirical";
    case WeightScheme::dp_posterior:
      return "dp_posterior";
    case WeightScheme::constant:
      return "constant";
  }
  return "unknown";
}

WeightScheme weight_scheme_from_string(const std::string& name) {
  if (name == "empirical") return WeightScheme::empirical;
  if (name == "dp_posterior") return WeightScheme::dp_posterior;
  if (name == "constant") return WeightScheme::constant;
  throw std::invalid_argument("unknown weight scheme '" + name + "'");
}

FamilySpec parse_family(const json& doc) {
  const std::string name = doc.at("family").get<std::string>();
  FamilySpec f;
  if (name == "dirac") {
    f = FamilySpec::dirac(doc.value("atom", AtomId{0}));
  } else if (name == "uniform") {
    f = FamilySpec::uniform(doc.at("size").get<std::size_t>());
  } else if (name == "geometric") {
    f = FamilySpec::geometric(doc.value("ratio", 0.5));
  } else if (name == "zeta") {
    f = FamilySpec::zeta(doc.value("exponent", 2.0));
  } else {
    throw std::invalid_argument("unknown measure family '" + name + "'");
  }
  try {
    f.validate();
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
  return f;
}

json to_json(const FamilySpec& f) {
  json j{{"family", f.name()}};
  switch (f.kind) {
    case FamilySpec::Kind::dirac:
      j["atom"] = f.atom;
      break;
    case FamilySpec::Kind::uniform:
      j["size"] = f.size;
      break;
    case FamilySpec::Kind::geometric:
      j["ratio"] = f.ratio;
      break;
    case FamilySpec::Kind::zeta:
      j["exponent"] = f.exponent;
      break;
  }
  return j;
}

namespace {

MeasureSpec parse_measure(const json& doc, MeasureSpec spec) {
  if (doc.contains("family")) spec.family = parse_family(doc);
  spec.tol = doc.value("tol", spec.tol);
  return spec;
}

DensitySpec parse_density(const json& doc) {
  const std::string name = doc.at("family").get<std::string>();
  if (name == "normal") return DensitySpec::normal(doc.value("mean", 0.0), doc.value("sd", 1.0));
  if (name == "uniform") return DensitySpec::uniform(doc.at("lo").get<double>(), doc.at("hi").get<double>());
  throw std::invalid_argument("unknown density family '" + name + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  for (std::size_t i = 1; i < n_schedule.size(); ++i) {
    if (n_schedule[i] <= n_schedule[i - 1]) throw std::invalid_argument("n_schedule must be strictly increasing");
  }
  for (std::size_t i = 1; i < ddb_schedule.size(); ++i) {
    if (ddb_schedule[i] <= ddb_schedule[i - 1]) throw std::invalid_argument("ddb_schedule must be strictly increasing");
  }
  if (!(stick_tol > 0.0 && stick_tol < 1.0)) throw std::invalid_argument("stick_tol must lie in (0, 1)");
  if (!(base.tol > 0.0) || !(prior.mean.tol > 0.0)) throw std::invalid_argument("truncation tol must be positive");
  if (!(prior.concentration > 0.0)) throw std::invalid_argument("prior concentration must be positive");
  if (local.h_schedule.empty()) throw std::invalid_argument("local h_schedule is empty");
  for (double h : local.h_schedule) {
    if (!(h > 0.0)) throw std::invalid_argument("bandwidths must be positive");
  }
  if (!(local.s_lo < local.s_hi)) throw std::invalid_argument("local window needs s_lo < s_hi");
  if (local.grid_size < 1) throw std::invalid_argument("local grid_size must be >= 1");
  if (!(conditions.moment_order >= 2.0)) throw std::invalid_argument("moment_order must be >= 2");
  try {
    base.family.validate();
    prior.mean.family.validate();
    local.density.validate();
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::gc:
      cfg.n_schedule = {50, 200, 800, 3200};
      cfg.replications = 200;
      break;
    case Experiment::bvm:
      cfg.n_schedule = {5000};
      cfg.replications = 2000;
      break;
    case Experiment::bracketing:
      cfg.replications = 1;
      break;
    case Experiment::local_ep:
      cfg.replications = 5000;
      break;
    case Experiment::conditions:
      cfg.n_schedule = {100, 1000, 10000};
      cfg.replications = 200;
      break;
  }
  return cfg;
}

ExperimentConfig parse_config(const json& doc, std::optional<Experiment> fallback) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  Experiment e = fallback.value_or(Experiment::gc);
  if (doc.contains("experiment")) e = experiment_from_string(doc["experiment"].get<std::string>());
  ExperimentConfig cfg = default_config(e);
  try {
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    if (doc.contains("n_schedule")) cfg.n_schedule = doc["n_schedule"].get<std::vector<std::uint64_t>>();
    cfg.replications = doc.value("replications", cfg.replications);
    if (doc.contains("base_measure")) cfg.base = parse_measure(doc["base_measure"], cfg.base);
    if (doc.contains("prior")) {
      const json& p = doc["prior"];
      cfg.prior.mean = parse_measure(p, cfg.prior.mean);
      cfg.prior.concentration = p.value("concentration", cfg.prior.concentration);
    }
    cfg.stick_tol = doc.value("stick_tol", cfg.stick_tol);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.output = doc.value("output", cfg.output);
    cfg.k_max = doc.value("k_max", cfg.k_max);
    if (doc.contains("ddb_schedule")) cfg.ddb_schedule = doc["ddb_schedule"].get<std::vector<std::size_t>>();
    if (doc.contains("local")) {
      const json& l = doc["local"];
      cfg.local.center = l.value("center", cfg.local.center);
      if (l.contains("window")) {
        const auto w = l["window"].get<std::vector<double>>();
        if (w.size() != 2) throw std::invalid_argument("local.window must have two entries");
        cfg.local.s_lo = w[0];
        cfg.local.s_hi = w[1];
      }
      if (l.contains("density")) cfg.local.density = parse_density(l["density"]);
      if (l.contains("h_schedule")) cfg.local.h_schedule = l["h_schedule"].get<std::vector<double>>();
      cfg.local.n_times_h = l.value("n_times_h", cfg.local.n_times_h);
      if (l.contains("n")) cfg.local.n = l["n"].get<std::uint64_t>();
      cfg.local.grid_size = l.value("grid_size", cfg.local.grid_size);
    }
    if (doc.contains("conditions")) {
      const json& c = doc["conditions"];
      if (c.contains("weights")) cfg.conditions.weights = weight_scheme_from_string(c["weights"].get<std::string>());
      cfg.conditions.envelope_threshold = c.value("envelope_threshold", cfg.conditions.envelope_threshold);
      cfg.conditions.moment_order = c.value("moment_order", cfg.conditions.moment_order);
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("config: ") + ex.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json base = to_json(cfg.base.family);
  base["tol"] = cfg.base.tol;
  json prior = to_json(cfg.prior.mean.family);
  prior["tol"] = cfg.prior.mean.tol;
  prior["concentration"] = cfg.prior.concentration;
  json density{{"family", cfg.local.density.name()}};
  if (cfg.local.density.kind == DensitySpec::Kind::normal) {
    density["mean"] = cfg.local.density.first;
    density["sd"] = cfg.local.density.second;
  } else {
    density["lo"] = cfg.local.density.first;
    density["hi"] = cfg.local.density.second;
  }
  json local{{"center", cfg.local.center},
             {"window", {cfg.local.s_lo, cfg.local.s_hi}},
             {"density", density},
             {"h_schedule", cfg.local.h_schedule},
             {"n_times_h", cfg.local.n_times_h},
             {"grid_size", cfg.local.grid_size}};
  if (cfg.local.n) local["n"] = *cfg.local.n;
  return json{{"experiment", to_string(cfg.experiment)},
              {"master_seed", cfg.master_seed},
              {"n_schedule", cfg.n_schedule},
              {"replications", cfg.replications},
              {"base_measure", base},
              {"prior", prior},
              {"stick_tol", cfg.stick_tol},
              {"threads", cfg.threads},
              {"output", cfg.output},
              {"k_max", cfg.k_max},
              {"ddb_schedule", cfg.ddb_schedule},
              {"local", local},
              {"conditions",
               {{"weights", to_string(cfg.conditions.weights)},
                {"envelope_threshold", cfg.conditions.envelope_threshold},
                {"moment_order", cfg.conditions.moment_order}}}};
}

}  // namespace wep
