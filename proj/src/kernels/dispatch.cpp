#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "pdm/error.hpp"

namespace pdm::kernels {
namespace {

const KernelTable kScalar{detail::tridiag_shifted_apply_scalar, detail::sturm_counts_scalar, detail::dot_scalar};

#if defined(PDM_WITH_AVX2)
const KernelTable kAvx2{detail::tridiag_shifted_apply_avx2, detail::sturm_counts_avx2, detail::dot_avx2};
#endif

bool cpu_has_avx2() {
#if defined(PDM_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa choose() {
  const char* env = std::getenv("PDM_SIMD");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(PDM_WITH_AVX2)
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = choose();
  return isa;
}

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) fail(ErrorKind::Numerical, "requested kernel ISA is not available");
  return isa == Isa::Avx2 ? *avx2_table() : scalar_table();
}

const KernelTable& active() { return table(active_isa()); }

void tridiag_shifted_apply(std::span<const double> diag, std::span<const double> off, std::span<const double> x,
                           double shift, std::span<double> y) {
  const std::size_t n = diag.size();
  if (x.size() != n || y.size() != n || (n > 0 && off.size() + 1 != n))
    fail(ErrorKind::Parameter, "tridiagonal apply: inconsistent sizes");
  active().tridiag_shifted_apply(diag.data(), off.data(), x.data(), shift, y.data(), n);
}

void sturm_counts(std::span<const double> diag, std::span<const double> off_sq,
                  std::span<const double, kShiftLanes> shifts, double pivmin,
                  std::span<std::int64_t, kShiftLanes> counts) {
  if (diag.empty() || off_sq.size() + 1 != diag.size()) fail(ErrorKind::Parameter, "sturm count: inconsistent sizes");
  active().sturm_counts(diag.data(), off_sq.data(), diag.size(), shifts.data(), pivmin, counts.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::Parameter, "dot: size mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace pdm::kernels
