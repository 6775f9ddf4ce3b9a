#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

#include "evodyn/errors.hpp"
#include "evodyn/limits.hpp"

using namespace evodyn;

TEST_SUITE("limits") {

TEST_CASE("logistic RK4 matches the closed form") {
  const double b = 2.0, d = 1.0, a = 1.0;
  // Independent closed form: n(t) = r n0 / (a n0 + (r - a n0) e^{-rt}), r = b - d.
  auto exact = [&](double n0, double t) {
    const double r = b - d;
    return r * n0 / (a * n0 + (r - a * n0) * std::exp(-r * t));
  };
  for (double n0 : {0.01, 0.5, 1.0, 3.0}) {
    const auto path = integrate_logistic(b, d, a, n0, 10.0);
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == 10.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      worst = std::max(worst, std::abs(path.states[k][0] - exact(n0, path.times[k])));
    }
    CHECK(worst < 1e-10);
    CHECK(logistic_closed_form(b, d, a, n0, 3.7) == doctest::Approx(exact(n0, 3.7)));
    CHECK(path.clip_count == 0);
  }
}

TEST_CASE("logistic edge cases") {
  CHECK(integrate_logistic(2, 1, 1, 0.0, 5.0).terminal()[0] == 0.0);
  CHECK(integrate_logistic(2, 1, 1, 1.0, 5.0).terminal()[0] == doctest::Approx(1.0));
  // Last step is shortened to land on T.
  const auto odd = integrate_logistic(2, 1, 1, 0.5, 1.00037, 1e-3);
  CHECK(odd.times.back() == 1.00037);
  const auto hit = integrate_logistic(2, 1, 1, 0.5, 10.0, 1e-3, 0.1);
  REQUIRE(hit.entry_time.has_value());
  // Closed-form entry time into |n - 1| < 0.1 from 0.5: n(t) = 0.9.
  CHECK(*hit.entry_time == doctest::Approx(std::log(9.0)).epsilon(2e-3));
  CHECK_THROWS_AS(integrate_logistic(2, 1, 1, -1.0, 5.0), PreconditionError);
  CHECK_THROWS_AS(integrate_logistic(2, 1, 1, 0.5, 5.0, 0.0), PreconditionError);
}

TEST_CASE("dimorphic system reduces to the logistic when one type is absent") {
  const auto p = fixtures::default_params();
  const auto di = integrate_dimorphic(p, 0.5, 0.55, {0.3, 0.0}, 5.0);
  const auto mono = integrate_logistic(p.b(0.5), p.d(0.5), p.alpha(0.5, 0.5), 0.3, 5.0);
  CHECK(di.terminal()[1] == 0.0);
  CHECK(di.terminal()[0] == doctest::Approx(mono.terminal()[0]).epsilon(1e-12));
}

TEST_CASE("the flow from the resident equilibrium follows the invasion sign") {
  const auto p = fixtures::default_params();
  const double eps = 0.1 * equilibrium_density(p, 0.5);
  const auto up = classify_equilibrium_flow(p, 0.5, 0.55, eps);
  CHECK(up.outcome == FlowOutcome::ConvergesToMutant);
  REQUIRE(up.entry_time.has_value());
  CHECK(up.final_time == doctest::Approx(*up.entry_time + 10.0));
  const auto down = classify_equilibrium_flow(p, 0.55, 0.5, 0.1 * equilibrium_density(p, 0.55));
  CHECK(down.outcome == FlowOutcome::ConvergesToResident);
  CHECK_THROWS_AS(classify_equilibrium_flow(p, 0.5, 0.5, eps), PreconditionError);

  FlowOptions short_run;
  short_run.t_max = 20.0;
  CHECK(classify_equilibrium_flow(p, 0.5, 0.55, eps, short_run).outcome == FlowOutcome::Unresolved);
}

TEST_CASE("competitive exclusion along the dimorphic flow") {
  // Strong directional selection: the mutant density takes over.
  const auto p = fixtures::fdd_params();
  const auto path = integrate_dimorphic(p, 0.3, 0.6, {1.0, 0.05}, 200.0);
  CHECK(path.terminal()[0] < 1e-6);
  CHECK(path.terminal()[1] == doctest::Approx(1.0).epsilon(1e-6));
}

}  // TEST_SUITE
