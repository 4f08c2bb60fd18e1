#include "mgfwa/backend.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mgfwa {

namespace {

inline double guarded_eval(const Objective& objective,
                           std::span<const double> row,
                           std::uint64_t& nan_count) {
  const double v = objective(row);
  if (std::isnan(v)) {
    ++nan_count;
    return std::numeric_limits<double>::infinity();
  }
  return v;
}

}  // namespace

Array2D batched_apply(const Objective& objective, const BatchCube& candidates,
                      const EvalBackend& backend, EvalStats* stats) {
  if (!objective) {
    throw std::invalid_argument("batched_apply: empty objective");
  }
  if (backend.workers < 1) {
    throw std::invalid_argument("batched_apply: workers must be >= 1");
  }

  const std::size_t batches = candidates.batches();
  const std::size_t individuals = candidates.individuals();
  const auto total = static_cast<std::int64_t>(batches * individuals);

  Array2D fitness(batches, individuals);
  double* out = fitness.data().data();
  std::uint64_t nan_count = 0;

  if (backend.kind == EvalBackend::Kind::kDataParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(backend.workers) \
    reduction(+ : nan_count)
#endif
    for (std::int64_t i = 0; i < total; ++i) {
      const auto b = static_cast<std::size_t>(i) / individuals;
      const auto n = static_cast<std::size_t>(i) % individuals;
      out[i] = guarded_eval(objective, candidates.row(b, n), nan_count);
    }
  } else {
    for (std::int64_t i = 0; i < total; ++i) {
      const auto b = static_cast<std::size_t>(i) / individuals;
      const auto n = static_cast<std::size_t>(i) % individuals;
      out[i] = guarded_eval(objective, candidates.row(b, n), nan_count);
    }
  }

  if (stats != nullptr) {
    stats->nan_flagged += nan_count;
  }
  return fitness;
}

std::vector<PopulationBest> argmin_per_population(const Array2D& fitness) {
  std::vector<PopulationBest> best(fitness.rows());
  for (std::size_t b = 0; b < fitness.rows(); ++b) {
    std::size_t arg = 0;
    double val = fitness(b, 0);
    for (std::size_t n = 1; n < fitness.cols(); ++n) {
      if (fitness(b, n) < val) {
        val = fitness(b, n);
        arg = n;
      }
    }
    best[b] = {arg, val};
  }
  return best;
}

}  // namespace mgfwa
