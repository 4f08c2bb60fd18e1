#ifndef MGFWA_ENGINE_HPP
#define MGFWA_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "mgfwa/array.hpp"
#include "mgfwa/backend.hpp"
#include "mgfwa/config.hpp"
#include "mgfwa/rng.hpp"

namespace mgfwa {

/// Per-(batch, firework) population state. Positions stay inside the search
/// space at all times; fitness caches the objective value at each position.
struct FireworkState {
  BatchCube positions;       // B x mu x D
  Array2D fitness;           // B x mu
  Array2D amplitudes;        // B x mu, strictly positive
  Array2D last_improvement;  // B x mu, most recent fitness decrease, >= 0
  std::uint64_t evaluations_used = 0;
};

/// A block of K candidates per firework (explosion sparks or guiding
/// sparks). Positions are stored as a (B, mu*K, D) cube so the whole block
/// evaluates through batched_apply in one wave; (n, k) addresses row n*K+k.
struct CandidateSet {
  std::size_t per_firework;  // K
  BatchCube positions;       // B x (mu*K) x D
  Array2D fitness;           // B x (mu*K), empty until evaluated

  std::size_t fireworks() const { return positions.individuals() / per_firework; }

  std::span<const double> row(std::size_t b, std::size_t n, std::size_t k) const {
    return positions.row(b, n * per_firework + k);
  }
  double pos(std::size_t b, std::size_t n, std::size_t k, std::size_t d) const {
    return positions(b, n * per_firework + k, d);
  }
  double fit(std::size_t b, std::size_t n, std::size_t k) const {
    return fitness(b, n * per_firework + k);
  }
};

using SparkSet = CandidateSet;
using GuideSet = CandidateSet;

struct TracePoint {
  std::uint64_t evaluations = 0;  // total across all batches so far
  double wall_ms = 0.0;           // sampled once per evaluation wave
  double best_fitness = 0.0;      // per-batch best-so-far, non-increasing
};

/// Outcome of one run: per-batch convergence traces plus the final best
/// individual of each batch.
struct RunRecord {
  MgfwaConfig config;
  SearchSpace space;
  std::uint64_t seed = 0;
  std::vector<std::vector<TracePoint>> trace;        // [batch][wave]
  std::vector<std::vector<double>> best_position;    // [batch][dim]
  std::vector<double> best_fitness;                  // [batch]
  std::uint64_t evaluations_used = 0;
  std::uint64_t iterations = 0;
  std::uint64_t losers_reinitialized = 0;
  std::uint64_t nan_evaluations = 0;
};

/// Uniformly samples B x mu fireworks inside the space and evaluates them
/// (consumes B * mu evaluations). Amplitudes start at A_0, improvements at 0.
FireworkState initialize(const MgfwaConfig& config, const SearchSpace& space,
                         std::uint64_t seed, const Objective& objective,
                         const EvalBackend& backend, EvalStats* stats = nullptr);

/// Generates lambda explosion sparks per firework,
/// spark = position + U(-1, 1) * amplitude per coordinate. Out-of-bounds
/// coordinates are permitted here; random_mapping repairs them.
SparkSet explode(const FireworkState& state, const MgfwaConfig& config,
                 std::uint64_t iteration, std::uint64_t seed);

/// Population-based random mapping: every out-of-bounds coordinate is
/// resampled uniformly within [pop_min(b, d), pop_max(b, d)], the per-batch
/// range of the current firework positions. In-bounds coordinates pass
/// through unchanged. `stream` keeps spark and guide repairs on distinct
/// key streams within one iteration.
CandidateSet random_mapping(const CandidateSet& candidates,
                            const FireworkState& state,
                            const SearchSpace& space, std::uint64_t iteration,
                            std::uint64_t seed, RngStream stream);

/// Guiding vector per firework: mean of the top_count best sparks minus
/// mean of the top_count worst sparks, ranking ties broken by spark index.
/// Requires evaluated sparks.
BatchCube guiding_vector(const SparkSet& sparks, const MgfwaConfig& config);

/// Places M guiding sparks per firework at position + beta_m * delta.
GuideSet multi_guiding_sparks(const FireworkState& state,
                              const BatchCube& delta,
                              const MgfwaConfig& config);

struct SelectionResult {
  FireworkState state;
  Array2D improved;  // B x mu, 1.0 where fitness strictly decreased
};

/// Elitist per-firework selection over {firework, its sparks, its guides};
/// ties resolve in order firework, then sparks by index, then guides by
/// index. Pass guides as nullptr when M = 0.
SelectionResult select_best(const FireworkState& state, const SparkSet& sparks,
                            const GuideSet* guides);

/// Dynamic amplitude rule: amplify by C_a on improvement, reduce by C_r
/// otherwise, clamped to [1e-12 * range, range].
Array2D update_amplitudes(const Array2D& amplitudes, const Array2D& improved,
                          const MgfwaConfig& config, double max_range);

/// Loser-out tournament: any firework (never the batch best) whose
/// improvement rate cannot close its fitness gap within the remaining
/// iterations is reinitialized uniformly in the space, given a fresh
/// amplitude, and re-evaluated. Returns the number of evaluations spent.
std::uint64_t loser_out(FireworkState& state, const MgfwaConfig& config,
                        const SearchSpace& space, std::uint64_t iteration,
                        std::uint64_t seed, double iterations_remaining,
                        const Objective& objective, const EvalBackend& backend,
                        EvalStats* stats = nullptr);

/// Full optimization loop; pure given (config, space, objective, seed).
/// Backend kind and worker count change wall-clock only, never the
/// evaluation-indexed trace.
RunRecord run(const MgfwaConfig& config, const SearchSpace& space,
              const Objective& objective, const EvalBackend& backend,
              std::uint64_t seed);

}  // namespace mgfwa

#endif  // MGFWA_ENGINE_HPP
