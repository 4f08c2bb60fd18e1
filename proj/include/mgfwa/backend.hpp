#ifndef MGFWA_BACKEND_HPP
#define MGFWA_BACKEND_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mgfwa/array.hpp"

namespace mgfwa {

/// Scalar objective over one candidate row. Must be a pure function of the
/// row; it may be called concurrently from many workers.
using Objective = std::function<double(std::span<const double>)>;

/// Execution backend for candidate evaluation. The serial kind evaluates
/// candidates one at a time in index order; the data-parallel kind fans the
/// same per-candidate computation out across OpenMP workers. Both produce
/// bit-identical fitness tables: parallelism is only across candidates and
/// each candidate's arithmetic runs in a fixed sequential order.
struct EvalBackend {
  enum class Kind { kSerial, kDataParallel };

  Kind kind = Kind::kSerial;
  int workers = 1;

  static EvalBackend serial() { return {Kind::kSerial, 1}; }
  static EvalBackend data_parallel(int workers) {
    return {Kind::kDataParallel, workers};
  }
};

struct EvalStats {
  std::uint64_t nan_flagged = 0;  // candidates whose objective returned NaN
};

/// Evaluates objective(candidates[b][n][:]) for every individual and returns
/// the B x N fitness table. NaN results are flagged with +infinity and
/// counted in stats. The result is independent of backend kind and worker
/// count, bit for bit.
Array2D batched_apply(const Objective& objective, const BatchCube& candidates,
                      const EvalBackend& backend, EvalStats* stats = nullptr);

struct PopulationBest {
  std::size_t index = 0;
  double value = 0.0;
};

/// Per-batch minimum with ties broken by lowest index.
std::vector<PopulationBest> argmin_per_population(const Array2D& fitness);

}  // namespace mgfwa

#endif  // MGFWA_BACKEND_HPP
