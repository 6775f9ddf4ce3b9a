// Parameter sets shared by the unit tests and the acceptance binary.
#ifndef EVODYN_TESTS_FIXTURES_HPP
#define EVODYN_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>

#include "evodyn/model.hpp"

namespace fixtures {

using namespace evodyn;

// b = 2 + x, d = 1, alpha = 1 + 0.5 (x - y) clipped to [0.25, 4], mu = 0.1.
// Here f(y, x) = 0.5 (y - x) (1 - x).
inline EcologyParams default_params() {
  return EcologyParams(TraitSpace::interval(0.0, 1.0), ScalarFunction::linear(2.0, {1.0}),
                       ScalarFunction::constant(1.0),
                       CompetitionKernel::linear_difference(1.0, {0.5}, 0.25, 4.0),
                       ScalarFunction::constant(0.1), MutationKernel::gaussian({0.05}));
}

inline double default_fitness(double y, double x) { return 0.5 * (y - x) * (1.0 - x); }

// Constant rates on [0, 1].
inline EcologyParams constant_params(double b, double d, double alpha, double mu,
                                     double sigma = 0.05) {
  return EcologyParams(TraitSpace::interval(0.0, 1.0), ScalarFunction::constant(b),
                       ScalarFunction::constant(d), CompetitionKernel::constant(alpha),
                       ScalarFunction::constant(mu), MutationKernel::gaussian({sigma}));
}

// b = 2 + x, d = 1, alpha = 1: resident 0 has n-bar 1, mutant 1 has b = 3 and
// f(1, 0) = 1, so the fixation target is 1/3.
inline EcologyParams invasion_params() {
  return EcologyParams(TraitSpace::interval(0.0, 1.0), ScalarFunction::linear(2.0, {1.0}),
                       ScalarFunction::constant(1.0), CompetitionKernel::constant(1.0),
                       ScalarFunction::constant(0.1), MutationKernel::gaussian({0.05}));
}

// Flat equilibrium n-bar = 1 on [0, 2] with f(y, x) = 0.8 (y - x).
inline EcologyParams fdd_params() {
  return EcologyParams(TraitSpace::interval(0.0, 2.0), ScalarFunction::constant(1.2),
                       ScalarFunction::constant(0.2),
                       CompetitionKernel::linear_difference(1.0, {-0.8}, 0.25, 4.0),
                       ScalarFunction::constant(0.3), MutationKernel::gaussian({0.3}));
}

// Acceptance mass of the jump kernel from x, by the trapezoid rule on the
// truncated Gaussian density: int [f(x+h, x)]_+ / b(x+h) m(x, h) dh.
inline double acceptance_quadrature(const EcologyParams& p, double x, std::size_t n = 200000) {
  const double lo = p.space().lo()[0], hi = p.space().hi()[0];
  const double s = p.mutation().sigma()[0];
  const double pi = 3.14159265358979323846;
  auto phi = [&](double h) { return std::exp(-0.5 * h * h / (s * s)) / (s * std::sqrt(2 * pi)); };
  auto g = [&](double y) {
    const double f = p.b(y) - p.d(y) - p.alpha(y, x) * (p.b(x) - p.d(x)) / p.alpha(x, x);
    return std::max(f, 0.0) / p.b(y) * phi(y - x);
  };
  // Normalizing mass of the truncated Gaussian, by the same rule.
  double num = 0.0, z = 0.0;
  const double step = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double y = lo + step * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    num += w * g(y);
    z += w * phi(y - x);
  }
  return num / z;
}

}  // namespace fixtures

#endif  // EVODYN_TESTS_FIXTURES_HPP
