#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "pdm/kernels.hpp"

using namespace pdm::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& e : v) e = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference is a plain tridiagonal product") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {1u, 2u, 5u, 17u}) {
      auto d = random_vector(n, rng), e = random_vector(n > 0 ? n - 1 : 0, rng), x = random_vector(n, rng);
      std::vector<double> y(n);
      scalar_table().tridiag_shifted_apply(d.data(), e.data(), x.data(), 0.25, y.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        double ref = (d[i] - 0.25) * x[i];
        if (i > 0) ref += e[i - 1] * x[i - 1];
        if (i + 1 < n) ref += e[i] * x[i + 1];
        CHECK(y[i] == doctest::Approx(ref).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("Sturm counts on a diagonal matrix") {
    std::vector<double> d{-2.0, 0.5, 1.0, 3.0, 7.0}, e2(4, 0.0);
    const double shifts[kShiftLanes] = {-3.0, 0.75, 2.0, 10.0};
    std::int64_t counts[kShiftLanes];
    scalar_table().sturm_counts(d.data(), e2.data(), d.size(), shifts, 1e-300, counts);
    CHECK(counts[0] == 0);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 3);
    CHECK(counts[3] == 5);
  }

  TEST_CASE("AVX2 variant is bit-identical to the scalar reference") {
    const KernelTable* simd = avx2_table();
    if (simd == nullptr || !isa_available(Isa::Avx2)) {
      MESSAGE("AVX2 not available; equivalence test skipped");
      return;
    }
    std::mt19937_64 rng(42);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1000u, 4099u}) {
      auto d = random_vector(n, rng), e = random_vector(n - 1, rng), x = random_vector(n, rng);
      std::vector<double> ys(n), yv(n);
      scalar_table().tridiag_shifted_apply(d.data(), e.data(), x.data(), -1.5, ys.data(), n);
      simd->tridiag_shifted_apply(d.data(), e.data(), x.data(), -1.5, yv.data(), n);
      CHECK(same_bits(ys, yv));

      const double a = scalar_table().dot(d.data(), x.data(), n);
      const double b = simd->dot(d.data(), x.data(), n);
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);

      std::vector<double> e2(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) e2[i] = e[i] * e[i];
      const double shifts[kShiftLanes] = {-4.0, -0.3, 0.9, 5.0};
      std::int64_t cs[kShiftLanes], cv[kShiftLanes];
      scalar_table().sturm_counts(d.data(), e2.data(), n, shifts, 1e-290, cs);
      simd->sturm_counts(d.data(), e2.data(), n, shifts, 1e-290, cv);
      for (std::size_t k = 0; k < kShiftLanes; ++k) CHECK(cs[k] == cv[k]);
    }
  }

  TEST_CASE("dispatch exposes a usable table") {
    CHECK(isa_available(Isa::Scalar));
    const auto isa = active_isa();
    CHECK(isa_available(isa));
    std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
    CHECK(dot(a, b) == 35.0);
  }
}
