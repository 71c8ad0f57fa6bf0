#include "pdm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pdm {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, tol);
}

double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  auto g = [&f](double x) { return f(x); };
  return rule.integrate(g, a, b, tol);
}

}  // namespace pdm
