// Command-line driver: wep {gc|bvm|bracketing|local-ep|conditions} [options]
//
// Exit status: 0 on success, 2 when a theorem hypothesis gate refuses the
// configured measures, 1 on any other error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wep/config.hpp"
#include "wep/experiments.hpp"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<unsigned> threads;
  std::optional<std::size_t> replications;
  // local-ep
  std::optional<std::uint64_t> n;
  std::optional<double> n_times_h;
  std::vector<double> h_schedule;
  std::optional<std::size_t> grid_size;
};

wep::ExperimentConfig load_config(wep::Experiment e, const Options& opt) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw std::runtime_error("cannot open config " + opt.config_path);
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& ex) {
      throw std::invalid_argument("config " + opt.config_path + ": " + ex.what());
    }
  }
  if (doc.contains("experiment") && wep::experiment_from_string(doc["experiment"]) != e) {
    throw std::invalid_argument("config is for experiment '" + doc["experiment"].get<std::string>() +
                                "' but subcommand is '" + wep::to_string(e) + "'");
  }
  doc["experiment"] = wep::to_string(e);
  wep::ExperimentConfig cfg = wep::parse_config(doc, e);
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (!opt.out_path.empty()) cfg.output = opt.out_path;
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.replications) cfg.replications = *opt.replications;
  if (opt.n) cfg.local.n = *opt.n;
  if (opt.n_times_h) {
    cfg.local.n_times_h = *opt.n_times_h;
    cfg.local.n.reset();
  }
  if (!opt.h_schedule.empty()) cfg.local.h_schedule = opt.h_schedule;
  if (opt.grid_size) cfg.local.grid_size = *opt.grid_size;
  cfg.validate();
  return cfg;
}

// Writes `body` to cfg.output, or stdout when no output path is set.
template <class Writer>
void emit(const std::string& path, Writer&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
}

int run(wep::Experiment e, const Options& opt) {
  const wep::ExperimentConfig cfg = load_config(e, opt);
  switch (e) {
    case wep::Experiment::gc: {
      const auto report = wep::run_gc_experiment(cfg);
      emit(cfg.output, [&](std::ostream& o) { report.write_csv(o); });
      break;
    }
    case wep::Experiment::bvm: {
      const auto report = wep::run_bvm_experiment(cfg);
      emit(cfg.output, [&](std::ostream& o) { report.write_csv(o); });
      if (!cfg.output.empty()) {
        emit(cfg.output + ".summary.csv", [&](std::ostream& o) { report.write_summary_csv(o); });
      }
      report.write_summary_csv(std::cerr);
      break;
    }
    case wep::Experiment::bracketing: {
      const auto report = wep::run_bracketing_profile(cfg);
      emit(cfg.output, [&](std::ostream& o) { report.write_csv(o); });
      if (!cfg.output.empty()) {
        const auto ddb = wep::check_ddb(cfg.base.family, cfg.ddb_schedule);
        emit(cfg.output + ".ddb.csv", [&](std::ostream& o) { ddb.write_csv(o); });
      }
      break;
    }
    case wep::Experiment::local_ep: {
      const auto report = wep::run_local_experiment(cfg);
      emit(cfg.output, [&](std::ostream& o) { report.write_csv(o); });
      break;
    }
    case wep::Experiment::conditions: {
      const auto report = wep::check_theorem1_conditions(cfg);
      emit(cfg.output, [&](std::ostream& o) { report.write_csv(o); });
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted empirical processes: posterior and local empirical Monte Carlo experiments"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
    sub->add_option("--out", opt.out_path, "Output CSV path (default: stdout)");
    sub->add_option("--threads", opt.threads, "Worker threads, 0 = all cores; never changes output");
    sub->add_option("-R,--replications", opt.replications, "Monte Carlo replications");
  };

  std::vector<std::pair<CLI::App*, wep::Experiment>> subs;
  subs.emplace_back(app.add_subcommand("gc", "Posterior consistency in total variation"), wep::Experiment::gc);
  subs.emplace_back(app.add_subcommand("bvm", "Bernstein-von Mises: posterior vs bridge sup norms"),
                    wep::Experiment::bvm);
  subs.emplace_back(app.add_subcommand("bracketing", "Dyadic bracketing-entropy profile"),
                    wep::Experiment::bracketing);
  subs.emplace_back(app.add_subcommand("local-ep", "Local empirical process covariance study"),
                    wep::Experiment::local_ep);
  subs.emplace_back(app.add_subcommand("conditions", "Weight-norm hypotheses of the GC theorem"),
                    wep::Experiment::conditions);
  for (auto& [sub, e] : subs) add_common(sub);

  CLI::App* local = subs[3].first;
  local->add_option("--n", opt.n, "Fixed sample size for every bandwidth");
  local->add_option("--nh", opt.n_times_h, "Sample size as n*h (default 2000)");
  local->add_option("--h-schedule", opt.h_schedule, "Bandwidths")->delimiter(',');
  local->add_option("--grid-size", opt.grid_size, "Number of t values in the window");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [sub, e] : subs) {
      if (sub->parsed()) return run(e, opt);
    }
  } catch (const wep::HypothesisRefused& ex) {
    std::cerr << "refused: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
