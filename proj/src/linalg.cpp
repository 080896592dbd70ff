#include "fairwork/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "fairwork/kernels.hpp"

namespace fairwork {

void DenseMatrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void DenseMatrix::resize(std::size_t n) {
  n_ = n;
  data_.assign(n * n, 0.0);
}

int cholesky_factor(DenseMatrix& a, double pivot_floor) {
  const std::size_t n = a.size();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a(i, i)));
  if (max_diag == 0.0) max_diag = 1.0;
  constexpr double kHuge = 1e64;

  int replaced = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto rj = a.row(j);
    // relative to the row's own diagonal
    const double floor = pivot_floor * std::fabs(rj[j]);
    double d = rj[j] - kernels::dot(rj.first(j), rj.first(j));
    if (d <= floor) {
      if (d < -1e-8 * max_diag) return -1;
      d = kHuge;
      ++replaced;
    }
    const double ljj = std::sqrt(d);
    rj[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto ri = a.row(i);
      ri[j] = (ri[j] - kernels::dot(ri.first(j), rj.first(j))) / ljj;
    }
  }
  return replaced;
}

void cholesky_solve(const DenseMatrix& l, std::span<double> b) {
  const std::size_t n = l.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = l.row(i);
    b[i] = (b[i] - kernels::dot(ri.first(i), b.first(i))) / ri[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    auto ri = l.row(i);
    b[i] /= ri[i];
    kernels::axpy(-b[i], ri.first(i), b.first(i));
  }
}

}  // namespace fairwork
