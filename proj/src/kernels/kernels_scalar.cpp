#include <cmath>

#include "kernels_impl.hpp"

namespace pdm::kernels::detail {

void tridiag_shifted_apply_scalar(const double* diag, const double* off, const double* x, double shift, double* y,
                                  std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = (diag[0] - shift) * x[0];
    return;
  }
  y[0] = (diag[0] - shift) * x[0];
  y[0] = y[0] + off[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double v = (diag[i] - shift) * x[i];
    v = v + off[i - 1] * x[i - 1];
    v = v + off[i] * x[i + 1];
    y[i] = v;
  }
  const std::size_t l = n - 1;
  y[l] = (diag[l] - shift) * x[l];
  y[l] = y[l] + off[l - 1] * x[l - 1];
}

void sturm_counts_scalar(const double* diag, const double* off_sq, std::size_t n, const double* shifts,
                         double pivmin, std::int64_t* counts) {
  for (std::size_t j = 0; j < kShiftLanes; ++j) {
    const double s = shifts[j];
    std::int64_t c = 0;
    double q = diag[0] - s;
    if (std::abs(q) < pivmin) q = -pivmin;
    c += q < 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      q = (diag[i] - s) - off_sq[i - 1] / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      c += q < 0.0;
    }
    counts[j] = c;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (std::size_t j = 0; j < 4; ++j) acc[j] = acc[j] + a[i + j] * b[i + j];
  for (std::size_t j = 0; i + j < n; ++j) acc[j] = acc[j] + a[i + j] * b[i + j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace pdm::kernels::detail
