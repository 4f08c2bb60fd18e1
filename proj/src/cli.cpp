#include "mgfwa/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgfwa/bench.hpp"

namespace mgfwa::bench {

namespace {

namespace fs = std::filesystem;

/// Mirrors the command-line flags; flags given on the command line override
/// values read from the file.
void apply_json_config(const std::string& path, ExperimentConfig& cfg,
                       bool* objective_selected = nullptr) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read config file: " + path);
  }
  nlohmann::json doc = nlohmann::json::parse(in);
  for (const auto& [key, value] : doc.items()) {
    if (key == "net") {
      cfg.net_id = value.get<int>();
      if (objective_selected != nullptr) *objective_selected = true;
    } else if (key == "sphere") {
      cfg.sphere_dim = value.get<std::size_t>();
      cfg.net_id = 0;
      if (objective_selected != nullptr) *objective_selected = true;
    } else if (key == "mode") {
      cfg.mode = mode_from_string(value.get<std::string>());
    } else if (key == "workers") {
      cfg.workers = value.get<int>();
    } else if (key == "batches") {
      cfg.algo.batches = value.get<std::size_t>();
    } else if (key == "mu") {
      cfg.algo.fireworks = value.get<std::size_t>();
    } else if (key == "lambda") {
      cfg.algo.sparks_per_firework = value.get<std::size_t>();
    } else if (key == "guides") {
      cfg.algo.guides_per_firework = value.get<std::size_t>();
    } else if (key == "sigma") {
      cfg.algo.guide_fraction = value.get<double>();
    } else if (key == "beta") {
      cfg.algo.boosts = value.get<std::vector<double>>();
    } else if (key == "ca") {
      cfg.algo.amp_amplify = value.get<double>();
    } else if (key == "cr") {
      cfg.algo.amp_reduce = value.get<double>();
    } else if (key == "a0") {
      cfg.algo.initial_amplitude = value.get<double>();
    } else if (key == "lower") {
      cfg.lower = value.get<double>();
    } else if (key == "upper") {
      cfg.upper = value.get<double>();
    } else if (key == "runs") {
      cfg.runs = value.get<int>();
    } else if (key == "seed") {
      cfg.base_seed = value.get<std::uint64_t>();
    } else if (key == "weight_seed") {
      cfg.weight_seed = value.get<std::uint64_t>();
    } else if (key == "budget_ms") {
      cfg.algo.wall_clock_budget_ms = value.get<double>();
    } else if (key == "budget_evals") {
      cfg.algo.max_evaluations = value.get<std::uint64_t>();
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

struct CommonFlags {
  ExperimentConfig cfg;
  std::string config_file;
  std::string mode_name;
  int net = 0;
  std::size_t sphere = 0;
  double lower = 0.0;
  double upper = 0.0;
};

void add_common_options(CLI::App* cmd, CommonFlags& flags, bool with_mode) {
  cmd->add_option("--config", flags.config_file,
                  "JSON config file mirroring these flags (flags override)");
  cmd->add_option("--net", flags.net, "benchmark network id (1..12)")
      ->check(CLI::Range(1, 12));
  cmd->add_option("--sphere", flags.sphere, "sphere objective of dimension D")
      ->excludes("--net");
  if (with_mode) {
    cmd->add_option("--mode", flags.mode_name, "serial or parallel");
  }
  cmd->add_option("--workers", flags.cfg.workers,
                  "data-parallel worker count (0 = all hardware threads)");
  cmd->add_option("--batches,-B", flags.cfg.algo.batches, "batch count B");
  cmd->add_option("--mu", flags.cfg.algo.fireworks, "fireworks per batch");
  cmd->add_option("--lambda", flags.cfg.algo.sparks_per_firework,
                  "explosion sparks per firework");
  cmd->add_option("--guides,-M", flags.cfg.algo.guides_per_firework,
                  "guiding sparks per firework (0 disables)");
  cmd->add_option("--sigma", flags.cfg.algo.guide_fraction,
                  "elite spark fraction in (0, 0.5]");
  cmd->add_option("--beta", flags.cfg.algo.boosts,
                  "boost coefficients, one per guide (first must be 1)")
      ->delimiter(',');
  cmd->add_option("--ca", flags.cfg.algo.amp_amplify, "amplitude gain on improvement");
  cmd->add_option("--cr", flags.cfg.algo.amp_reduce, "amplitude decay otherwise");
  cmd->add_option("--a0", flags.cfg.algo.initial_amplitude,
                  "initial amplitude (0 = half the largest range)");
  cmd->add_option("--lower", flags.lower, "lower bound applied to every dimension");
  cmd->add_option("--upper", flags.upper, "upper bound applied to every dimension");
  cmd->add_option("--runs", flags.cfg.runs, "independent runs");
  cmd->add_option("--seed", flags.cfg.base_seed, "base seed; run r uses seed + r");
  cmd->add_option("--weight-seed", flags.cfg.weight_seed, "network weight seed");
  cmd->add_option("--budget-ms", flags.cfg.algo.wall_clock_budget_ms,
                  "wall-clock budget per run, milliseconds");
  cmd->add_option("--budget-evals", flags.cfg.algo.max_evaluations,
                  "evaluation budget per run");
  cmd->add_option("--out", flags.cfg.out_dir, "output directory");
}

/// Folds file values and explicit flags into the final config.
ExperimentConfig resolve_config(const CLI::App* cmd, CommonFlags& flags,
                                bool with_mode, bool& objective_selected) {
  ExperimentConfig cfg;  // defaults
  objective_selected = false;
  if (cmd->count("--config") > 0) {
    apply_json_config(flags.config_file, cfg, &objective_selected);
  }

  // Re-apply only the flags that were actually given.
  const CommonFlags& given = flags;
  if (cmd->count("--net") > 0) {
    cfg.net_id = given.net;
    objective_selected = true;
  }
  if (cmd->count("--sphere") > 0) {
    cfg.sphere_dim = given.sphere;
    cfg.net_id = 0;
    objective_selected = true;
  }
  if (with_mode && cmd->count("--mode") > 0) {
    cfg.mode = mode_from_string(given.mode_name);
  }
  if (cmd->count("--workers") > 0) cfg.workers = given.cfg.workers;
  if (cmd->count("--batches") > 0) cfg.algo.batches = given.cfg.algo.batches;
  if (cmd->count("--mu") > 0) cfg.algo.fireworks = given.cfg.algo.fireworks;
  if (cmd->count("--lambda") > 0) {
    cfg.algo.sparks_per_firework = given.cfg.algo.sparks_per_firework;
  }
  if (cmd->count("--guides") > 0) {
    cfg.algo.guides_per_firework = given.cfg.algo.guides_per_firework;
    if (cfg.algo.guides_per_firework == 0) cfg.algo.boosts.clear();
  }
  if (cmd->count("--sigma") > 0) {
    cfg.algo.guide_fraction = given.cfg.algo.guide_fraction;
  }
  if (cmd->count("--beta") > 0) cfg.algo.boosts = given.cfg.algo.boosts;
  if (cmd->count("--ca") > 0) cfg.algo.amp_amplify = given.cfg.algo.amp_amplify;
  if (cmd->count("--cr") > 0) cfg.algo.amp_reduce = given.cfg.algo.amp_reduce;
  if (cmd->count("--a0") > 0) {
    cfg.algo.initial_amplitude = given.cfg.algo.initial_amplitude;
  }
  if (cmd->count("--lower") > 0) cfg.lower = given.lower;
  if (cmd->count("--upper") > 0) cfg.upper = given.upper;
  if (cmd->count("--runs") > 0) cfg.runs = given.cfg.runs;
  if (cmd->count("--seed") > 0) cfg.base_seed = given.cfg.base_seed;
  if (cmd->count("--weight-seed") > 0) cfg.weight_seed = given.cfg.weight_seed;
  if (cmd->count("--budget-ms") > 0) {
    cfg.algo.wall_clock_budget_ms = given.cfg.algo.wall_clock_budget_ms;
  }
  if (cmd->count("--budget-evals") > 0) {
    cfg.algo.max_evaluations = given.cfg.algo.max_evaluations;
  }
  if (cmd->count("--out") > 0) cfg.out_dir = given.cfg.out_dir;

  // Default boost ladder when only the guide count was changed.
  if (cfg.algo.guides_per_firework > 0 &&
      cfg.algo.boosts.size() != cfg.algo.guides_per_firework &&
      cmd->count("--beta") == 0) {
    cfg.algo.boosts.resize(cfg.algo.guides_per_firework);
    double beta = 1.0;
    for (double& value : cfg.algo.boosts) {
      value = beta;
      beta *= 2.0;
    }
  }
  return cfg;
}

void require_objective(bool objective_selected) {
  if (!objective_selected) {
    throw std::invalid_argument("choose an objective: --net <1..12> or --sphere <D>");
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) {
    throw std::ios_base::failure("write failed: " + path.string());
  }
}

int do_run(const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty()) {
    throw std::invalid_argument("run requires --out DIR");
  }
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create " + dir.string());
  }

  const ExperimentResult result = run_experiment(cfg);

  const fs::path trace_path = dir / "trace.csv";
  auto trace = open_output(trace_path);
  write_trace_csv(trace, result);
  finish_output(trace, trace_path);

  const fs::path summary_path = dir / "summary.csv";
  auto summary = open_output(summary_path);
  write_summary_csv(summary, summarize(result, default_checkpoints(result)));
  finish_output(summary, summary_path);

  double best = result.curves.front().waves.back().best;
  for (const RunCurve& curve : result.curves) {
    best = std::min(best, curve.waves.back().best);
  }
  std::cout << objective_name(result.config) << ", " << to_string(result.config.mode)
            << " mode, " << result.records.size() << " runs: best fitness "
            << format_double(best) << ", " << result.total_evaluations
            << " evaluations total\n"
            << "wrote " << trace_path.string() << " and " << summary_path.string()
            << "\n";
  return kExitOk;
}

int do_compare(const ExperimentConfig& shared) {
  if (shared.out_dir.empty()) {
    throw std::invalid_argument("compare requires --out DIR");
  }
  const fs::path dir(shared.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create " + dir.string());
  }

  const CompareReport report = compare(shared);

  auto write_curve = [&](const fs::path& path, const std::vector<SummaryRow>& rows) {
    auto out = open_output(path);
    out << "wall_ms,best_fitness\n";
    for (const SummaryRow& row : rows) {
      out << format_double(row.checkpoint_ms) << ','
          << format_double(row.mean_best) << '\n';
    }
    finish_output(out, path);
  };
  write_curve(dir / "compare_serial.csv", report.serial_curve);
  write_curve(dir / "compare_parallel.csv", report.parallel_curve);

  write_compare_report(std::cout, report);
  std::cout << "wrote " << (dir / "compare_serial.csv").string() << " and "
            << (dir / "compare_parallel.csv").string() << "\n";
  return kExitOk;
}

int do_nets() {
  std::cout << "id,scale,activation,input_dim,hidden_dim,output_dim,"
               "hidden_layers,params,reported_params\n";
  for (const NetSpec& spec : net_registry()) {
    std::cout << spec.net_id << ',' << to_string(spec.scale) << ','
              << to_string(spec.activation) << ',' << spec.input_dim << ','
              << spec.hidden_dim << ',' << spec.output_dim << ','
              << spec.hidden_layers << ',' << param_count(spec) << ','
              << spec.reported_params << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Batched multi-guiding-spark fireworks optimizer benchmark"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "optimize one objective and write trace/summary CSVs");
  add_common_options(run_cmd, run_flags, /*with_mode=*/true);

  CommonFlags cmp_flags;
  std::string serial_config, parallel_config;
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "run serial and parallel modes on shared parameters and seeds");
  add_common_options(cmp_cmd, cmp_flags, /*with_mode=*/false);
  cmp_cmd->add_option("--serial-config", serial_config,
                      "JSON overrides for the serial leg (must agree on algorithm)");
  cmp_cmd->add_option("--parallel-config", parallel_config,
                      "JSON overrides for the parallel leg (must agree on algorithm)");

  CLI::App* nets_cmd = app.add_subcommand("nets", "list the 12 benchmark networks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidArgs;
  }

  try {
    if (nets_cmd->parsed()) {
      return do_nets();
    }
    if (run_cmd->parsed()) {
      bool objective_selected = false;
      ExperimentConfig cfg =
          resolve_config(run_cmd, run_flags, true, objective_selected);
      require_objective(objective_selected);
      cfg.validate();
      return do_run(cfg);
    }
    if (cmp_cmd->parsed()) {
      bool objective_selected = false;
      ExperimentConfig cfg =
          resolve_config(cmp_cmd, cmp_flags, false, objective_selected);
      require_objective(objective_selected);
      if (!serial_config.empty() || !parallel_config.empty()) {
        ExperimentConfig serial_cfg = cfg;
        ExperimentConfig parallel_cfg = cfg;
        if (!serial_config.empty()) apply_json_config(serial_config, serial_cfg);
        if (!parallel_config.empty()) apply_json_config(parallel_config, parallel_cfg);
        if (!algorithm_params_match(serial_cfg, parallel_cfg)) {
          throw std::invalid_argument(
              "serial and parallel configs disagree on algorithm parameters");
        }
        cfg = parallel_cfg;
      }
      cfg.validate();
      return do_compare(cfg);
    }
    return kExitInvalidArgs;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  }
}

}  // namespace mgfwa::bench
