#ifndef MGFWA_BENCH_HPP
#define MGFWA_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgfwa/engine.hpp"
#include "mgfwa/nets.hpp"

namespace mgfwa::bench {

/// Serial mode reproduces the single-population baseline: one batch,
/// fireworks evaluated one at a time. Parallel mode fans all B x N
/// candidates out across the data-parallel backend.
enum class Mode { kSerial, kParallel };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct ExperimentConfig {
  int net_id = 0;               // 1..12, or 0 for the sphere objective
  std::size_t sphere_dim = 10;  // used when net_id == 0
  Mode mode = Mode::kParallel;
  int workers = 0;              // 0 = all hardware threads
  MgfwaConfig algo;
  // Uniform box bounds; unset means [-5, 5] for networks and [-10, 10]
  // for the sphere.
  std::optional<double> lower;
  std::optional<double> upper;
  int runs = 8;
  std::uint64_t base_seed = 0;   // run r uses seed base_seed + r
  std::uint64_t weight_seed = 1; // network weights, fixed across runs
  std::string out_dir;

  void validate() const;  // throws std::invalid_argument
};

/// Applies the mode rules: serial forces workers = 1 and batches = 1;
/// parallel resolves workers = 0 to the hardware thread count.
ExperimentConfig normalized(const ExperimentConfig& config);

/// True when everything except mode, workers and batch count matches.
bool algorithm_params_match(const ExperimentConfig& a, const ExperimentConfig& b);

SearchSpace search_space_for(const ExperimentConfig& config);
EvalBackend backend_for(const ExperimentConfig& config);
std::string objective_name(const ExperimentConfig& config);

/// Run-level convergence curve: best-so-far across all batches per wave.
struct WavePoint {
  std::uint64_t evaluations = 0;
  double wall_ms = 0.0;
  double best = 0.0;
};

struct RunCurve {
  std::vector<WavePoint> waves;
};

RunCurve run_curve(const RunRecord& record);

/// Best fitness achieved at or before t_ms; before the first recorded wave
/// this is the initialization value.
double best_at(const RunCurve& curve, double t_ms);

struct ExperimentResult {
  ExperimentConfig config;  // normalized
  std::vector<RunRecord> records;
  std::vector<RunCurve> curves;
  std::uint64_t total_evaluations = 0;
  double total_wall_ms = 0.0;  // sum of each run's final wave timestamp
};

/// Executes config.runs independent runs with seeds base_seed + 0..runs-1.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const Objective& objective,
                                const SearchSpace& space);

/// Builds the objective (registry net or sphere) from the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Logarithmically spaced time checkpoints in (0, t_max_ms].
std::vector<double> checkpoint_grid(double t_max_ms, std::size_t count = 16);

struct SummaryRow {
  double checkpoint_ms = 0.0;
  double mean_best = 0.0;
  double std_best = 0.0;  // sample standard deviation across runs
  int runs = 0;
};

std::vector<SummaryRow> summarize(const ExperimentResult& result,
                                  const std::vector<double>& checkpoints);

/// Default checkpoints: the wall budget when one is set, otherwise the
/// earliest finishing run's span.
std::vector<double> default_checkpoints(const ExperimentResult& result);

void write_trace_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct ModeStats {
  std::uint64_t evaluations = 0;
  double wall_ms = 0.0;
  double evals_per_second = 0.0;
};

struct Crossing {
  double threshold = 0.0;
  bool serial_reached = false;
  bool parallel_reached = false;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
};

struct CompareReport {
  ModeStats serial;
  ModeStats parallel;
  double speedup = 0.0;  // parallel evals/s over serial evals/s
  std::vector<Crossing> crossings;
  std::vector<SummaryRow> serial_curve;
  std::vector<SummaryRow> parallel_curve;
};

/// Runs the shared configuration under both modes with identical seeds and
/// algorithm parameters (mode rules still normalize workers/batches).
CompareReport compare(const ExperimentConfig& shared);
CompareReport compare(const ExperimentConfig& shared, const Objective& objective,
                      const SearchSpace& space);

void write_compare_report(std::ostream& out, const CompareReport& report);

/// Exact float formatting used in every CSV (round-trips doubles).
std::string format_double(double v);

}  // namespace mgfwa::bench

#endif  // MGFWA_BENCH_HPP
