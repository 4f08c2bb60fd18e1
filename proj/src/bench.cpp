#include "mgfwa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mgfwa::bench {

std::string to_string(Mode mode) {
  return mode == Mode::kSerial ? "serial" : "parallel";
}

Mode mode_from_string(const std::string& s) {
  if (s == "serial") return Mode::kSerial;
  if (s == "parallel") return Mode::kParallel;
  throw std::invalid_argument("unknown mode: " + s);
}

void ExperimentConfig::validate() const {
  if (net_id < 0 || net_id > 12) {
    throw std::invalid_argument("net id must be in 1..12");
  }
  if (net_id == 0 && sphere_dim == 0) {
    throw std::invalid_argument("sphere dimension must be positive");
  }
  if (runs < 1) {
    throw std::invalid_argument("runs must be >= 1");
  }
  if (workers < 0) {
    throw std::invalid_argument("workers must be >= 0");
  }
  if (lower.has_value() != upper.has_value()) {
    throw std::invalid_argument("lower and upper bounds must be set together");
  }
  if (lower && !(*lower < *upper)) {
    throw std::invalid_argument("bounds require lower < upper");
  }
  algo.validate();
}

ExperimentConfig normalized(const ExperimentConfig& config) {
  ExperimentConfig out = config;
  if (out.mode == Mode::kSerial) {
    out.workers = 1;
    out.algo.batches = 1;
  } else if (out.workers == 0) {
    out.workers = std::max(1u, std::thread::hardware_concurrency());
  }
  return out;
}

bool algorithm_params_match(const ExperimentConfig& a,
                            const ExperimentConfig& b) {
  return a.net_id == b.net_id && a.sphere_dim == b.sphere_dim &&
         a.algo.fireworks == b.algo.fireworks &&
         a.algo.sparks_per_firework == b.algo.sparks_per_firework &&
         a.algo.guides_per_firework == b.algo.guides_per_firework &&
         a.algo.guide_fraction == b.algo.guide_fraction &&
         a.algo.boosts == b.algo.boosts &&
         a.algo.amp_amplify == b.algo.amp_amplify &&
         a.algo.amp_reduce == b.algo.amp_reduce &&
         a.algo.initial_amplitude == b.algo.initial_amplitude &&
         a.algo.max_evaluations == b.algo.max_evaluations &&
         a.algo.wall_clock_budget_ms == b.algo.wall_clock_budget_ms &&
         a.lower == b.lower && a.upper == b.upper && a.runs == b.runs &&
         a.base_seed == b.base_seed && a.weight_seed == b.weight_seed;
}

SearchSpace search_space_for(const ExperimentConfig& config) {
  const std::size_t dim =
      config.net_id == 0 ? config.sphere_dim : net_spec(config.net_id).input_dim;
  const double lo = config.lower.value_or(config.net_id == 0 ? -10.0 : -5.0);
  const double hi = config.upper.value_or(config.net_id == 0 ? 10.0 : 5.0);
  return SearchSpace::box(dim, lo, hi);
}

EvalBackend backend_for(const ExperimentConfig& config) {
  if (config.mode == Mode::kSerial) return EvalBackend::serial();
  return EvalBackend::data_parallel(config.workers);
}

std::string objective_name(const ExperimentConfig& config) {
  if (config.net_id == 0) {
    return "sphere(d=" + std::to_string(config.sphere_dim) + ")";
  }
  return "net " + std::to_string(config.net_id);
}

RunCurve run_curve(const RunRecord& record) {
  RunCurve curve;
  if (record.trace.empty()) return curve;
  const std::size_t waves = record.trace.front().size();
  curve.waves.reserve(waves);
  for (std::size_t w = 0; w < waves; ++w) {
    WavePoint point{record.trace[0][w].evaluations, record.trace[0][w].wall_ms,
                    record.trace[0][w].best_fitness};
    for (std::size_t b = 1; b < record.trace.size(); ++b) {
      point.best = std::min(point.best, record.trace[b][w].best_fitness);
    }
    curve.waves.push_back(point);
  }
  return curve;
}

double best_at(const RunCurve& curve, double t_ms) {
  double best = curve.waves.front().best;
  for (const WavePoint& point : curve.waves) {
    if (point.wall_ms > t_ms) break;
    best = point.best;
  }
  return best;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const Objective& objective,
                                const SearchSpace& space) {
  config.validate();
  const ExperimentConfig cfg = normalized(config);
  const EvalBackend backend = backend_for(cfg);

  ExperimentResult result;
  result.config = cfg;
  result.records.reserve(cfg.runs);
  for (int r = 0; r < cfg.runs; ++r) {
    RunRecord record = run(cfg.algo, space, objective, backend,
                           cfg.base_seed + static_cast<std::uint64_t>(r));
    result.total_evaluations += record.evaluations_used;
    result.curves.push_back(run_curve(record));
    result.total_wall_ms += result.curves.back().waves.back().wall_ms;
    result.records.push_back(std::move(record));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const SearchSpace space = search_space_for(config);
  if (config.net_id == 0) {
    return run_experiment(config, Objective(sphere), space);
  }
  const MlpBlackBox net(net_spec(config.net_id), config.weight_seed);
  return run_experiment(config, net.objective(), space);
}

std::vector<double> checkpoint_grid(double t_max_ms, std::size_t count) {
  if (!(t_max_ms > 0.0) || count == 0) {
    throw std::invalid_argument("checkpoint_grid: needs positive span and count");
  }
  const double t_min = t_max_ms / 100.0;
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = t_max_ms;
    return grid;
  }
  const double ratio = t_max_ms / t_min;
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = t_min * std::pow(ratio, static_cast<double>(i) /
                                          static_cast<double>(count - 1));
  }
  grid.back() = t_max_ms;
  return grid;
}

std::vector<double> default_checkpoints(const ExperimentResult& result) {
  double t_max = result.config.algo.wall_clock_budget_ms;
  if (!(t_max > 0.0)) {
    t_max = std::numeric_limits<double>::infinity();
    for (const RunCurve& curve : result.curves) {
      t_max = std::min(t_max, curve.waves.back().wall_ms);
    }
    if (!(t_max > 0.0)) t_max = 1.0;
  }
  return checkpoint_grid(t_max);
}

std::vector<SummaryRow> summarize(const ExperimentResult& result,
                                  const std::vector<double>& checkpoints) {
  std::vector<SummaryRow> rows;
  rows.reserve(checkpoints.size());
  const int runs = static_cast<int>(result.curves.size());
  for (double t : checkpoints) {
    double mean = 0.0;
    for (const RunCurve& curve : result.curves) {
      mean += best_at(curve, t);
    }
    mean /= runs;
    double var = 0.0;
    for (const RunCurve& curve : result.curves) {
      const double dev = best_at(curve, t) - mean;
      var += dev * dev;
    }
    const double std_best = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
    rows.push_back({t, mean, std_best, runs});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const ExperimentResult& result) {
  out << "run_id,batch,evals,wall_ms,best_fitness\n";
  for (std::size_t r = 0; r < result.records.size(); ++r) {
    const RunRecord& record = result.records[r];
    for (std::size_t b = 0; b < record.trace.size(); ++b) {
      for (const TracePoint& point : record.trace[b]) {
        out << r << ',' << b << ',' << point.evaluations << ','
            << format_double(point.wall_ms) << ','
            << format_double(point.best_fitness) << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "checkpoint_ms,mean_best,std_best,runs\n";
  for (const SummaryRow& row : rows) {
    out << format_double(row.checkpoint_ms) << ',' << format_double(row.mean_best)
        << ',' << format_double(row.std_best) << ',' << row.runs << '\n';
  }
}

CompareReport compare(const ExperimentConfig& shared, const Objective& objective,
                      const SearchSpace& space) {
  ExperimentConfig serial_cfg = shared;
  serial_cfg.mode = Mode::kSerial;
  ExperimentConfig parallel_cfg = shared;
  parallel_cfg.mode = Mode::kParallel;

  const ExperimentResult serial = run_experiment(serial_cfg, objective, space);
  const ExperimentResult parallel = run_experiment(parallel_cfg, objective, space);

  CompareReport report;
  auto stats = [](const ExperimentResult& result) {
    ModeStats s;
    s.evaluations = result.total_evaluations;
    s.wall_ms = result.total_wall_ms;
    s.evals_per_second =
        s.wall_ms > 0.0 ? static_cast<double>(s.evaluations) / (s.wall_ms / 1e3)
                        : 0.0;
    return s;
  };
  report.serial = stats(serial);
  report.parallel = stats(parallel);
  report.speedup = report.serial.evals_per_second > 0.0
                       ? report.parallel.evals_per_second /
                             report.serial.evals_per_second
                       : 0.0;

  // Mean convergence curves over a shared fine grid; crossings are read off
  // the same grid.
  double t_max = shared.algo.wall_clock_budget_ms;
  if (!(t_max > 0.0)) {
    t_max = std::min(serial.curves.front().waves.back().wall_ms,
                     parallel.curves.front().waves.back().wall_ms);
    for (const auto& curves : {&serial.curves, &parallel.curves}) {
      for (const RunCurve& curve : *curves) {
        t_max = std::min(t_max, curve.waves.back().wall_ms);
      }
    }
    if (!(t_max > 0.0)) t_max = 1.0;
  }
  const std::vector<double> grid = checkpoint_grid(t_max, 64);
  report.serial_curve = summarize(serial, grid);
  report.parallel_curve = summarize(parallel, grid);

  const double start = std::max(report.serial_curve.front().mean_best,
                                report.parallel_curve.front().mean_best);
  const double floor = std::min(report.serial_curve.back().mean_best,
                                report.parallel_curve.back().mean_best);
  for (double q : {0.5, 0.9, 0.99}) {
    Crossing crossing;
    crossing.threshold = start - q * (start - floor);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!crossing.serial_reached &&
          report.serial_curve[i].mean_best <= crossing.threshold) {
        crossing.serial_reached = true;
        crossing.serial_ms = grid[i];
      }
      if (!crossing.parallel_reached &&
          report.parallel_curve[i].mean_best <= crossing.threshold) {
        crossing.parallel_reached = true;
        crossing.parallel_ms = grid[i];
      }
    }
    report.crossings.push_back(crossing);
  }
  return report;
}

CompareReport compare(const ExperimentConfig& shared) {
  const SearchSpace space = search_space_for(shared);
  if (shared.net_id == 0) {
    return compare(shared, Objective(sphere), space);
  }
  const MlpBlackBox net(net_spec(shared.net_id), shared.weight_seed);
  return compare(shared, net.objective(), space);
}

void write_compare_report(std::ostream& out, const CompareReport& report) {
  auto mode_line = [&](const char* name, const ModeStats& stats) {
    out << name << ": " << stats.evaluations << " evaluations in "
        << format_double(stats.wall_ms) << " ms ("
        << format_double(stats.evals_per_second) << " evals/s)\n";
  };
  mode_line("serial  ", report.serial);
  mode_line("parallel", report.parallel);
  out << "throughput ratio (parallel/serial): " << format_double(report.speedup)
      << "\n";
  out << "first crossings:\n";
  for (const Crossing& crossing : report.crossings) {
    out << "  fitness <= " << format_double(crossing.threshold) << ": serial ";
    if (crossing.serial_reached) {
      out << format_double(crossing.serial_ms) << " ms";
    } else {
      out << "not reached";
    }
    out << ", parallel ";
    if (crossing.parallel_reached) {
      out << format_double(crossing.parallel_ms) << " ms";
    } else {
      out << "not reached";
    }
    out << "\n";
  }
}

}  // namespace mgfwa::bench
