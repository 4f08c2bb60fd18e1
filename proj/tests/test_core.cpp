#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "mgfwa/array.hpp"
#include "mgfwa/backend.hpp"
#include "mgfwa/rng.hpp"

using namespace mgfwa;

namespace {

BatchCube random_cube(std::size_t b, std::size_t n, std::size_t d,
                      std::uint64_t seed, double magnitude) {
  std::vector<double> data(b * n * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const RngKey key{seed, RngStream::kInit, i, 0, 0, 0, 0};
    data[i] = uniform_sample(key, -magnitude, magnitude);
  }
  return BatchCube(b, n, d, std::move(data));
}

bool bit_equal(const Array2D& a, const Array2D& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.data()[i]) !=
        std::bit_cast<std::uint64_t>(b.data()[i])) {
      return false;
    }
  }
  return true;
}

double sum_row(std::span<const double> row) {
  double acc = 0.0;
  for (double v : row) acc += v;
  return acc;
}

}  // namespace

TEST_CASE("BatchCube validates shape and finiteness") {
  CHECK_THROWS_AS(BatchCube(2, 2, 2, std::vector<double>(7, 0.0)),
                  std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(BatchCube(2, 2, 2, std::move(bad)), std::invalid_argument);
}

TEST_CASE("constant objective fills the whole table") {
  const auto cube = BatchCube::zeros(2, 3, 4);
  const auto fitness = batched_apply([](std::span<const double>) { return 7.0; },
                                     cube, EvalBackend::serial());
  REQUIRE(fitness.rows() == 2);
  REQUIRE(fitness.cols() == 3);
  for (double v : fitness.data()) CHECK(v == 7.0);
}

TEST_CASE("coordinate sum of a zero cube is zero") {
  const auto cube = BatchCube::zeros(3, 2, 5);
  const auto fitness =
      batched_apply(sum_row, cube, EvalBackend::data_parallel(2));
  for (double v : fitness.data()) CHECK(v == 0.0);
}

TEST_CASE("serial and data-parallel evaluation are bit-identical") {
  // Also exercises extreme magnitudes; sphere of 1e30-sized coordinates
  // stays finite in doubles.
  const Objective objective = [](std::span<const double> row) {
    double acc = 0.0;
    for (double v : row) acc += v * v;
    return acc;
  };
  for (std::uint64_t c = 0; c < 100; ++c) {
    const std::size_t b = 1 + c % 4;
    const std::size_t n = 1 + (c / 4) % 5;
    const std::size_t d = 1 + c % 10;
    const double magnitude = (c % 3 == 0) ? 1e30 : 10.0;
    const auto cube = random_cube(b, n, d, c, magnitude);
    const auto serial = batched_apply(objective, cube, EvalBackend::serial());
    for (int workers : {1, 2, 4, 7}) {
      const auto parallel =
          batched_apply(objective, cube, EvalBackend::data_parallel(workers));
      CHECK(bit_equal(serial, parallel));
    }
    for (double v : serial.data()) CHECK(std::isfinite(v));
  }
}

TEST_CASE("NaN from the objective becomes +inf and is counted") {
  const auto cube = random_cube(2, 4, 3, 99, 5.0);
  const Objective objective = [](std::span<const double> row) {
    return row[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : row[0];
  };
  EvalStats stats;
  const auto fitness =
      batched_apply(objective, cube, EvalBackend::data_parallel(4), &stats);
  std::uint64_t infs = 0;
  for (double v : fitness.data()) {
    CHECK(!std::isnan(v));
    if (std::isinf(v)) ++infs;
  }
  CHECK(infs > 0);
  CHECK(stats.nan_flagged == infs);
}

TEST_CASE("argmin picks the smallest value") {
  Array2D fitness(1, 3);
  fitness(0, 0) = 5.0;
  fitness(0, 1) = 3.0;
  fitness(0, 2) = 9.0;
  const auto best = argmin_per_population(fitness);
  REQUIRE(best.size() == 1);
  CHECK(best[0].index == 1);
  CHECK(best[0].value == 3.0);
}

TEST_CASE("argmin breaks ties by lowest index") {
  Array2D fitness(1, 3, 2.0);
  const auto best = argmin_per_population(fitness);
  CHECK(best[0].index == 0);
  CHECK(best[0].value == 2.0);
}

TEST_CASE("argmin on an all-infinite batch returns index 0") {
  Array2D fitness(1, 4, std::numeric_limits<double>::infinity());
  const auto best = argmin_per_population(fitness);
  CHECK(best[0].index == 0);
  CHECK(std::isinf(best[0].value));
}

TEST_CASE("argmin matches an exhaustive scan") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Array2D fitness(8, 16);
    for (std::size_t b = 0; b < 8; ++b) {
      for (std::size_t n = 0; n < 16; ++n) {
        const RngKey key{seed, RngStream::kInit, 1, b, n, 0, 0};
        fitness(b, n) = uniform_sample(key, -100.0, 100.0);
      }
    }
    const auto best = argmin_per_population(fitness);
    for (std::size_t b = 0; b < 8; ++b) {
      std::size_t arg = 0;
      double val = fitness(b, 0);
      for (std::size_t n = 0; n < 16; ++n) {
        if (fitness(b, n) < val) {
          val = fitness(b, n);
          arg = n;
        }
      }
      CHECK(best[b].index == arg);
      CHECK(best[b].value == val);
    }
  }
}

TEST_CASE("worker count must be positive") {
  const auto cube = BatchCube::zeros(1, 1, 1);
  CHECK_THROWS_AS(
      batched_apply(sum_row, cube, EvalBackend{EvalBackend::Kind::kDataParallel, 0}),
      std::invalid_argument);
}
