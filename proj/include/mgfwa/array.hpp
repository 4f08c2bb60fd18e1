#ifndef MGFWA_ARRAY_HPP
#define MGFWA_ARRAY_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mgfwa {

/// Rank-3 position container: B batches x N individuals x D dims, row-major
/// with the dimension axis contiguous. Shape and data are fixed at
/// construction; instances are safe to share across workers.
class BatchCube {
 public:
  BatchCube(std::size_t batches, std::size_t individuals, std::size_t dims,
            std::vector<double> data)
      : b_(batches), n_(individuals), d_(dims), data_(std::move(data)) {
    if (b_ == 0 || n_ == 0 || d_ == 0) {
      throw std::invalid_argument("BatchCube: all extents must be positive");
    }
    if (data_.size() != b_ * n_ * d_) {
      throw std::invalid_argument("BatchCube: data size does not match shape");
    }
    for (double v : data_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("BatchCube: non-finite entry");
      }
    }
  }

  static BatchCube zeros(std::size_t batches, std::size_t individuals,
                         std::size_t dims) {
    return BatchCube(batches, individuals, dims,
                     std::vector<double>(batches * individuals * dims, 0.0));
  }

  std::size_t batches() const { return b_; }
  std::size_t individuals() const { return n_; }
  std::size_t dims() const { return d_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t b, std::size_t n, std::size_t d) const {
    return data_[(b * n_ + n) * d_ + d];
  }

  /// One individual's coordinates, contiguous.
  std::span<const double> row(std::size_t b, std::size_t n) const {
    return {data_.data() + (b * n_ + n) * d_, d_};
  }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t b_, n_, d_;
  std::vector<double> data_;
};

/// Dense rows x cols scratch matrix used for fitness, amplitudes and
/// improvement tables.
class Array2D {
 public:
  Array2D() : rows_(0), cols_(0) {}
  Array2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

}  // namespace mgfwa

#endif  // MGFWA_ARRAY_HPP
