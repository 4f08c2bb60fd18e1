#include "mgfwa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mgfwa {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Per-batch, per-dimension min/max over the current firework positions.
void population_range(const BatchCube& positions, Array2D& lo, Array2D& hi) {
  const std::size_t batches = positions.batches();
  const std::size_t mu = positions.individuals();
  const std::size_t dims = positions.dims();
  lo = Array2D(batches, dims, 0.0);
  hi = Array2D(batches, dims, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t d = 0; d < dims; ++d) {
      double mn = positions(b, 0, d);
      double mx = mn;
      for (std::size_t n = 1; n < mu; ++n) {
        const double v = positions(b, n, d);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      lo(b, d) = mn;
      hi(b, d) = mx;
    }
  }
}

}  // namespace

FireworkState initialize(const MgfwaConfig& config, const SearchSpace& space,
                         std::uint64_t seed, const Objective& objective,
                         const EvalBackend& backend, EvalStats* stats) {
  config.validate();
  space.validate();

  const std::size_t batches = config.batches;
  const std::size_t mu = config.fireworks;
  const std::size_t dims = space.dim();

  std::vector<double> data(batches * mu * dims);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      for (std::size_t d = 0; d < dims; ++d) {
        const RngKey key{seed, RngStream::kInit, 0, b, n, 0, d};
        data[idx++] = uniform_sample(key, space.lower[d], space.upper[d]);
      }
    }
  }

  FireworkState state{
      BatchCube(batches, mu, dims, std::move(data)),
      Array2D(batches, mu),
      Array2D(batches, mu, config.resolved_initial_amplitude(space.max_range())),
      Array2D(batches, mu, 0.0),
      0,
  };
  state.fitness = batched_apply(objective, state.positions, backend, stats);
  state.evaluations_used = static_cast<std::uint64_t>(batches) * mu;
  return state;
}

SparkSet explode(const FireworkState& state, const MgfwaConfig& config,
                 std::uint64_t iteration, std::uint64_t seed) {
  const std::size_t batches = state.positions.batches();
  const std::size_t mu = state.positions.individuals();
  const std::size_t dims = state.positions.dims();
  const std::size_t lambda = config.sparks_per_firework;

  std::vector<double> data(batches * mu * lambda * dims);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      const double amp = state.amplitudes(b, n);
      for (std::size_t k = 0; k < lambda; ++k) {
        for (std::size_t d = 0; d < dims; ++d) {
          const RngKey key{seed, RngStream::kExplode, iteration, b, n, k, d};
          data[idx++] = state.positions(b, n, d) +
                        uniform_sample(key, -1.0, 1.0) * amp;
        }
      }
    }
  }
  return SparkSet{lambda, BatchCube(batches, mu * lambda, dims, std::move(data)),
                  Array2D{}};
}

CandidateSet random_mapping(const CandidateSet& candidates,
                            const FireworkState& state,
                            const SearchSpace& space, std::uint64_t iteration,
                            std::uint64_t seed, RngStream stream) {
  Array2D pop_lo, pop_hi;
  population_range(state.positions, pop_lo, pop_hi);

  const std::size_t batches = candidates.positions.batches();
  const std::size_t rows = candidates.positions.individuals();
  const std::size_t dims = candidates.positions.dims();
  const std::size_t per = candidates.per_firework;

  std::vector<double> data = candidates.positions.data();
  std::size_t idx = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t n = r / per;
      const std::size_t k = r % per;
      for (std::size_t d = 0; d < dims; ++d, ++idx) {
        if (!space.contains(d, data[idx])) {
          const RngKey key{seed, stream, iteration, b, n, k, d};
          data[idx] = uniform_sample(key, pop_lo(b, d), pop_hi(b, d));
        }
      }
    }
  }
  return CandidateSet{per, BatchCube(batches, rows, dims, std::move(data)),
                      candidates.fitness};
}

BatchCube guiding_vector(const SparkSet& sparks, const MgfwaConfig& config) {
  const std::size_t lambda = config.sparks_per_firework;
  const std::size_t top = config.top_spark_count();
  if (lambda < 2 * top) {
    throw std::invalid_argument("guiding_vector: elite and poor sets overlap");
  }
  if (sparks.fitness.rows() == 0) {
    throw std::invalid_argument("guiding_vector: sparks not evaluated");
  }

  const std::size_t batches = sparks.positions.batches();
  const std::size_t mu = sparks.fireworks();
  const std::size_t dims = sparks.positions.dims();

  std::vector<double> delta(batches * mu * dims, 0.0);
  std::vector<std::size_t> order(lambda);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double fi = sparks.fit(b, n, i);
        const double fj = sparks.fit(b, n, j);
        if (fi != fj) return fi < fj;
        return i < j;
      });
      double* out = delta.data() + (b * mu + n) * dims;
      for (std::size_t t = 0; t < top; ++t) {
        const auto best = sparks.row(b, n, order[t]);
        const auto worst = sparks.row(b, n, order[lambda - top + t]);
        for (std::size_t d = 0; d < dims; ++d) {
          out[d] += best[d] - worst[d];
        }
      }
      for (std::size_t d = 0; d < dims; ++d) {
        out[d] /= static_cast<double>(top);
      }
    }
  }
  return BatchCube(batches, mu, dims, std::move(delta));
}

GuideSet multi_guiding_sparks(const FireworkState& state,
                              const BatchCube& delta,
                              const MgfwaConfig& config) {
  const std::size_t batches = state.positions.batches();
  const std::size_t mu = state.positions.individuals();
  const std::size_t dims = state.positions.dims();
  const std::size_t guides = config.guides_per_firework;

  std::vector<double> data(batches * mu * guides * dims);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      for (std::size_t m = 0; m < guides; ++m) {
        const double beta = config.boosts[m];
        for (std::size_t d = 0; d < dims; ++d) {
          data[idx++] = state.positions(b, n, d) + beta * delta(b, n, d);
        }
      }
    }
  }
  return GuideSet{guides, BatchCube(batches, mu * guides, dims, std::move(data)),
                  Array2D{}};
}

SelectionResult select_best(const FireworkState& state, const SparkSet& sparks,
                            const GuideSet* guides) {
  const std::size_t batches = state.positions.batches();
  const std::size_t mu = state.positions.individuals();
  const std::size_t dims = state.positions.dims();

  std::vector<double> positions(batches * mu * dims);
  FireworkState next{
      BatchCube::zeros(1, 1, 1),  // replaced below
      Array2D(batches, mu),
      state.amplitudes,
      Array2D(batches, mu, 0.0),
      state.evaluations_used,
  };
  Array2D improved(batches, mu, 0.0);

  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      double best_fit = state.fitness(b, n);
      std::span<const double> best_row = state.positions.row(b, n);
      for (std::size_t k = 0; k < sparks.per_firework; ++k) {
        if (sparks.fit(b, n, k) < best_fit) {
          best_fit = sparks.fit(b, n, k);
          best_row = sparks.row(b, n, k);
        }
      }
      if (guides != nullptr) {
        for (std::size_t m = 0; m < guides->per_firework; ++m) {
          if (guides->fit(b, n, m) < best_fit) {
            best_fit = guides->fit(b, n, m);
            best_row = guides->row(b, n, m);
          }
        }
      }
      std::copy(best_row.begin(), best_row.end(),
                positions.begin() + (b * mu + n) * dims);
      const double old_fit = state.fitness(b, n);
      next.fitness(b, n) = best_fit;
      next.last_improvement(b, n) = std::max(0.0, old_fit - best_fit);
      improved(b, n) = best_fit < old_fit ? 1.0 : 0.0;
    }
  }
  next.positions = BatchCube(batches, mu, dims, std::move(positions));
  return SelectionResult{std::move(next), std::move(improved)};
}

Array2D update_amplitudes(const Array2D& amplitudes, const Array2D& improved,
                          const MgfwaConfig& config, double max_range) {
  const double lo = 1e-12 * max_range;
  Array2D next(amplitudes.rows(), amplitudes.cols());
  for (std::size_t b = 0; b < amplitudes.rows(); ++b) {
    for (std::size_t n = 0; n < amplitudes.cols(); ++n) {
      const double factor =
          improved(b, n) != 0.0 ? config.amp_amplify : config.amp_reduce;
      next(b, n) = std::clamp(amplitudes(b, n) * factor, lo, max_range);
    }
  }
  return next;
}

std::uint64_t loser_out(FireworkState& state, const MgfwaConfig& config,
                        const SearchSpace& space, std::uint64_t iteration,
                        std::uint64_t seed, double iterations_remaining,
                        const Objective& objective, const EvalBackend& backend,
                        EvalStats* stats) {
  if (!(iterations_remaining > 0.0)) {
    return 0;  // no horizon left in which a restart could pay off
  }

  const std::size_t batches = state.positions.batches();
  const std::size_t mu = state.positions.individuals();
  const std::size_t dims = state.positions.dims();
  const auto best = argmin_per_population(state.fitness);

  std::vector<std::pair<std::size_t, std::size_t>> losers;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t n = 0; n < mu; ++n) {
      if (n == best[b].index) continue;
      const double projected =
          state.fitness(b, n) -
          state.last_improvement(b, n) * iterations_remaining;
      if (projected > best[b].value) {
        losers.emplace_back(b, n);
      }
    }
  }
  if (losers.empty()) return 0;

  const double fresh_amp = config.resolved_initial_amplitude(space.max_range());
  std::vector<double> fresh(losers.size() * dims);
  for (std::size_t i = 0; i < losers.size(); ++i) {
    const auto [b, n] = losers[i];
    for (std::size_t d = 0; d < dims; ++d) {
      const RngKey key{seed, RngStream::kReinit, iteration, b, n, 0, d};
      fresh[i * dims + d] = uniform_sample(key, space.lower[d], space.upper[d]);
    }
  }
  const BatchCube fresh_cube(1, losers.size(), dims, std::move(fresh));
  const Array2D fresh_fit = batched_apply(objective, fresh_cube, backend, stats);

  std::vector<double> positions = state.positions.data();
  for (std::size_t i = 0; i < losers.size(); ++i) {
    const auto [b, n] = losers[i];
    const auto row = fresh_cube.row(0, i);
    std::copy(row.begin(), row.end(),
              positions.begin() + (b * mu + n) * dims);
    state.fitness(b, n) = fresh_fit(0, i);
    state.amplitudes(b, n) = fresh_amp;
    state.last_improvement(b, n) = 0.0;
  }
  state.positions = BatchCube(batches, mu, dims, std::move(positions));
  state.evaluations_used += losers.size();
  return losers.size();
}

RunRecord run(const MgfwaConfig& config, const SearchSpace& space,
              const Objective& objective, const EvalBackend& backend,
              std::uint64_t seed) {
  config.validate();
  space.validate();

  const std::uint64_t init_cost =
      static_cast<std::uint64_t>(config.batches) * config.fireworks;
  if (config.max_evaluations > 0 && config.max_evaluations < init_cost) {
    throw std::invalid_argument("budget too small: needs at least B * mu evaluations");
  }

  const auto start = Clock::now();
  EvalStats stats;

  FireworkState state =
      initialize(config, space, seed, objective, backend, &stats);

  RunRecord record;
  record.config = config;
  record.space = space;
  record.seed = seed;
  record.trace.resize(config.batches);
  record.best_position.resize(config.batches);
  record.best_fitness.assign(config.batches,
                             std::numeric_limits<double>::infinity());

  auto record_wave = [&](double wall_ms) {
    const auto best = argmin_per_population(state.fitness);
    for (std::size_t b = 0; b < config.batches; ++b) {
      if (best[b].value < record.best_fitness[b]) {
        record.best_fitness[b] = best[b].value;
        const auto row = state.positions.row(b, best[b].index);
        record.best_position[b].assign(row.begin(), row.end());
      }
      record.trace[b].push_back(
          {state.evaluations_used, wall_ms, record.best_fitness[b]});
    }
  };

  record_wave(elapsed_ms(start));

  const std::uint64_t wave = config.evaluations_per_wave();
  const double init_ms = elapsed_ms(start);
  std::uint64_t iteration = 0;

  while (true) {
    if (config.max_evaluations > 0 &&
        state.evaluations_used >= config.max_evaluations) {
      break;
    }
    if (config.wall_clock_budget_ms > 0.0 &&
        elapsed_ms(start) >= config.wall_clock_budget_ms) {
      break;
    }
    ++iteration;

    SparkSet sparks = explode(state, config, iteration, seed);
    sparks = random_mapping(sparks, state, space, iteration, seed,
                            RngStream::kMapping);
    sparks.fitness = batched_apply(objective, sparks.positions, backend, &stats);

    SelectionResult selected = [&] {
      if (config.guides_per_firework == 0) {
        return select_best(state, sparks, nullptr);
      }
      const BatchCube delta = guiding_vector(sparks, config);
      GuideSet guides = multi_guiding_sparks(state, delta, config);
      guides = random_mapping(guides, state, space, iteration, seed,
                              RngStream::kGuide);
      guides.fitness =
          batched_apply(objective, guides.positions, backend, &stats);
      return select_best(state, sparks, &guides);
    }();

    const std::uint64_t evals_before = state.evaluations_used;
    state = std::move(selected.state);
    state.evaluations_used = evals_before + wave;
    state.amplitudes = update_amplitudes(state.amplitudes, selected.improved,
                                         config, space.max_range());

    double iterations_remaining = 0.0;
    if (config.max_evaluations > 0) {
      const std::uint64_t left =
          config.max_evaluations > state.evaluations_used
              ? config.max_evaluations - state.evaluations_used
              : 0;
      iterations_remaining = static_cast<double>(left) /
                             static_cast<double>(wave);
    } else {
      const double now_ms = elapsed_ms(start);
      const double avg_iter_ms =
          (now_ms - init_ms) / static_cast<double>(iteration);
      if (avg_iter_ms > 0.0) {
        iterations_remaining =
            std::max(0.0, config.wall_clock_budget_ms - now_ms) / avg_iter_ms;
      }
    }

    record.losers_reinitialized +=
        loser_out(state, config, space, iteration, seed, iterations_remaining,
                  objective, backend, &stats);

    record_wave(elapsed_ms(start));
  }

  record.evaluations_used = state.evaluations_used;
  record.iterations = iteration;
  record.nan_evaluations = stats.nan_flagged;
  return record;
}

}  // namespace mgfwa
