#include <immintrin.h>

#include "kernels_impl.hpp"

namespace pdm::kernels::detail {

void tridiag_shifted_apply_avx2(const double* diag, const double* off, const double* x, double shift, double* y,
                                std::size_t n) {
  if (n < 6) {
    tridiag_shifted_apply_scalar(diag, off, x, shift, y, n);
    return;
  }
  y[0] = (diag[0] - shift) * x[0];
  y[0] = y[0] + off[0] * x[1];
  const __m256d vs = _mm256_set1_pd(shift);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(diag + i), vs), _mm256_loadu_pd(x + i));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(off + i - 1), _mm256_loadu_pd(x + i - 1)));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(off + i), _mm256_loadu_pd(x + i + 1)));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i + 1 < n; ++i) {
    double v = (diag[i] - shift) * x[i];
    v = v + off[i - 1] * x[i - 1];
    v = v + off[i] * x[i + 1];
    y[i] = v;
  }
  const std::size_t l = n - 1;
  y[l] = (diag[l] - shift) * x[l];
  y[l] = y[l] + off[l - 1] * x[l - 1];
}

void sturm_counts_avx2(const double* diag, const double* off_sq, std::size_t n, const double* shifts, double pivmin,
                       std::int64_t* counts) {
  const __m256d s = _mm256_loadu_pd(shifts);
  const __m256d piv = _mm256_set1_pd(pivmin);
  const __m256d neg_piv = _mm256_set1_pd(-pivmin);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

  __m256d q = _mm256_sub_pd(_mm256_set1_pd(diag[0]), s);
  __m256d small = _mm256_cmp_pd(_mm256_and_pd(q, abs_mask), piv, _CMP_LT_OQ);
  q = _mm256_blendv_pd(q, neg_piv, small);
  __m256d cnt = _mm256_and_pd(_mm256_cmp_pd(q, zero, _CMP_LT_OQ), one);
  for (std::size_t i = 1; i < n; ++i) {
    q = _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(diag[i]), s), _mm256_div_pd(_mm256_set1_pd(off_sq[i - 1]), q));
    small = _mm256_cmp_pd(_mm256_and_pd(q, abs_mask), piv, _CMP_LT_OQ);
    q = _mm256_blendv_pd(q, neg_piv, small);
    cnt = _mm256_add_pd(cnt, _mm256_and_pd(_mm256_cmp_pd(q, zero, _CMP_LT_OQ), one));
  }
  alignas(32) double c[4];
  _mm256_store_pd(c, cnt);
  for (int j = 0; j < 4; ++j) counts[j] = static_cast<std::int64_t>(c[j]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t j = 0; i + j < n; ++j) lanes[j] = lanes[j] + a[i + j] * b[i + j];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace pdm::kernels::detail
