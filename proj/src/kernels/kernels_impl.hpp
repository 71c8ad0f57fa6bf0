#pragma once

#include "pdm/kernels.hpp"

namespace pdm::kernels::detail {

void tridiag_shifted_apply_scalar(const double* diag, const double* off, const double* x, double shift, double* y,
                                  std::size_t n);
void sturm_counts_scalar(const double* diag, const double* off_sq, std::size_t n, const double* shifts,
                         double pivmin, std::int64_t* counts);
double dot_scalar(const double* a, const double* b, std::size_t n);

#if defined(PDM_WITH_AVX2)
void tridiag_shifted_apply_avx2(const double* diag, const double* off, const double* x, double shift, double* y,
                                std::size_t n);
void sturm_counts_avx2(const double* diag, const double* off_sq, std::size_t n, const double* shifts, double pivmin,
                       std::int64_t* counts);
double dot_avx2(const double* a, const double* b, std::size_t n);
#endif

}  // namespace pdm::kernels::detail
