#pragma once

// Data-parallel inner loops of the verification layer.
//
// Each kernel has a scalar reference and (on x86-64) an AVX2 variant. The
// variants perform the same floating-point operations in the same order per
// element, so results are bit-identical across ISAs; reductions use four
// interleaved partial sums in both paths for the same reason.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pdm::kernels {

enum class Isa { Scalar, Avx2 };

inline constexpr std::size_t kShiftLanes = 4;

struct KernelTable {
  /// y_i = (d_i - shift) x_i + e_{i-1} x_{i-1} + e_i x_{i+1}, e has n-1 entries.
  void (*tridiag_shifted_apply)(const double* diag, const double* off, const double* x, double shift, double* y,
                                std::size_t n);
  /// Sturm sign-change counts of T - shift_j I for kShiftLanes shifts at once.
  /// off_sq holds the squared off-diagonal (n-1 entries).
  void (*sturm_counts)(const double* diag, const double* off_sq, std::size_t n, const double* shifts, double pivmin,
                       std::int64_t* counts);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the variant was not compiled in.
const KernelTable* avx2_table();

bool isa_available(Isa isa);
/// Best available ISA, unless the PDM_SIMD environment variable says
/// "scalar" (or "avx2"). Decided once per process.
Isa active_isa();
std::string_view to_string(Isa isa);
const KernelTable& table(Isa isa);
const KernelTable& active();

void tridiag_shifted_apply(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                           double shift, std::span<double> y);
void sturm_counts(std::span<const double> diag, std::span<const double> off_sq,
                  std::span<const double, kShiftLanes> shifts, double pivmin,
                  std::span<std::int64_t, kShiftLanes> counts);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace pdm::kernels
