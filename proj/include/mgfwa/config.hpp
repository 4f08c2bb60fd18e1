#ifndef MGFWA_CONFIG_HPP
#define MGFWA_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mgfwa {

/// Box-constrained search domain.
struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  static SearchSpace box(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower.size(); }

  /// Largest per-dimension extent, max_d(upper - lower).
  double max_range() const;

  bool contains(std::size_t d, double x) const {
    return x >= lower[d] && x <= upper[d];
  }

  /// Throws std::invalid_argument unless lower[d] < upper[d] for all d.
  void validate() const;
};

/// Algorithm parameters. Defaults follow the conventional values for the
/// guiding-spark mechanism family; every field is overridable and echoed
/// into the run record.
struct MgfwaConfig {
  std::size_t batches = 8;               // B: independent replicas
  std::size_t fireworks = 5;             // mu: fireworks per batch
  std::size_t sparks_per_firework = 30;  // lambda
  std::size_t guides_per_firework = 3;   // M; 0 disables guiding sparks
  double guide_fraction = 0.2;           // sigma in (0, 0.5]
  std::vector<double> boosts = {1.0, 2.0, 4.0};  // beta_1..beta_M, beta_1 = 1
  double amp_amplify = 1.2;              // C_a > 1
  double amp_reduce = 0.9;               // C_r in (0, 1)
  double initial_amplitude = 0.0;        // A_0; <= 0 means 0.5 * max range

  // Termination. Zero means "not limited by this budget"; at least one
  // budget must be positive.
  std::uint64_t max_evaluations = 0;
  double wall_clock_budget_ms = 0.0;

  /// Sparks ranked into the elite set when forming the guiding vector,
  /// ceil(sigma * lambda).
  std::size_t top_spark_count() const;

  /// Evaluations consumed by one full iteration, B * mu * (lambda + M),
  /// not counting loser reinitializations.
  std::uint64_t evaluations_per_wave() const {
    return static_cast<std::uint64_t>(batches) * fireworks *
           (sparks_per_firework + guides_per_firework);
  }

  /// Resolved initial amplitude for a given search range.
  double resolved_initial_amplitude(double max_range) const {
    return initial_amplitude > 0.0 ? initial_amplitude : 0.5 * max_range;
  }

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
};

}  // namespace mgfwa

#endif  // MGFWA_CONFIG_HPP
