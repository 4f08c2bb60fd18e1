#include "mgfwa/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgfwa {

SearchSpace SearchSpace::box(std::size_t dim, double lo, double hi) {
  SearchSpace space;
  space.lower.assign(dim, lo);
  space.upper.assign(dim, hi);
  return space;
}

double SearchSpace::max_range() const {
  double range = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) {
    range = std::max(range, upper[d] - lower[d]);
  }
  return range;
}

void SearchSpace::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("SearchSpace: lower/upper must be non-empty and equal length");
  }
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) ||
        !(lower[d] < upper[d])) {
      throw std::invalid_argument("SearchSpace: requires lower[d] < upper[d] for all d");
    }
  }
}

std::size_t MgfwaConfig::top_spark_count() const {
  return static_cast<std::size_t>(
      std::ceil(guide_fraction * static_cast<double>(sparks_per_firework)));
}

void MgfwaConfig::validate() const {
  if (batches == 0 || fireworks == 0 || sparks_per_firework == 0) {
    throw std::invalid_argument("MgfwaConfig: batches, fireworks and sparks must be positive");
  }
  if (!(amp_amplify > 1.0)) {
    throw std::invalid_argument("MgfwaConfig: amp_amplify must be > 1");
  }
  if (!(amp_reduce > 0.0 && amp_reduce < 1.0)) {
    throw std::invalid_argument("MgfwaConfig: amp_reduce must be in (0, 1)");
  }
  if (max_evaluations == 0 && !(wall_clock_budget_ms > 0.0)) {
    throw std::invalid_argument("MgfwaConfig: at least one budget must be positive");
  }
  if (guides_per_firework > 0) {
    if (!(guide_fraction > 0.0 && guide_fraction <= 0.5)) {
      throw std::invalid_argument("MgfwaConfig: guide_fraction must be in (0, 0.5]");
    }
    if (guide_fraction * static_cast<double>(sparks_per_firework) < 1.0) {
      throw std::invalid_argument("MgfwaConfig: guide_fraction * sparks must be >= 1");
    }
    if (sparks_per_firework < 2 * top_spark_count()) {
      throw std::invalid_argument(
          "MgfwaConfig: sparks must cover disjoint elite and poor sets "
          "(lambda >= 2 * ceil(sigma * lambda))");
    }
    if (boosts.size() != guides_per_firework) {
      throw std::invalid_argument("MgfwaConfig: boosts must list one coefficient per guide");
    }
    if (boosts.front() != 1.0) {
      throw std::invalid_argument("MgfwaConfig: first boost coefficient must be 1");
    }
    for (double beta : boosts) {
      if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("MgfwaConfig: boost coefficients must be positive finite");
      }
    }
  }
}

}  // namespace mgfwa
