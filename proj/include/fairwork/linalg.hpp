#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairwork {

/// Square row-major matrix. Only what the Newton systems need.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * n_, n_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

  void set_zero();
  void resize(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// In-place lower Cholesky factor of a symmetric matrix (lower triangle read).
/// Pivots below `pivot_floor` times their own diagonal entry are treated as degenerate directions
/// and replaced by a huge value so the matching solution component vanishes.
/// Returns the number of replaced pivots, or -1 if the matrix is indefinite
/// beyond that floor.
int cholesky_factor(DenseMatrix& a, double pivot_floor = 1e-14);

/// Solves L L^T x = b in place using a factor from cholesky_factor.
void cholesky_solve(const DenseMatrix& l, std::span<double> b);

}  // namespace fairwork
