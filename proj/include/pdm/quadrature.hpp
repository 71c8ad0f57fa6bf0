#pragma once

#include <functional>

namespace pdm {

/// Adaptive Gauss-Kronrod (15-point) on a finite interval; never evaluates
/// the endpoints.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

/// Double-exponential rule on a finite interval; tolerates integrable
/// endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace pdm
