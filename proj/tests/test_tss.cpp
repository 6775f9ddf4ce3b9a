#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

#include "evodyn/errors.hpp"
#include "evodyn/tss.hpp"

using namespace evodyn;

TEST_SUITE("tss") {

TEST_CASE("jump kernel acceptance probability is [f]_+ / b") {
  const auto p = fixtures::default_params();
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto draw = sample_jump_kernel(p, 0.5, rng);
    const double y = draw.proposal[0];
    const double expected = std::max(fixtures::default_fitness(y, 0.5), 0.0) / (2.0 + y);
    CHECK(draw.acceptance_probability == doctest::Approx(expected).epsilon(1e-12));
    if (draw.accepted) CHECK(invasion_fitness(p, draw.proposal, 0.5) > 0.0);
    CHECK(draw.result(0.5) == (draw.accepted ? draw.proposal : Trait(0.5)));
  }
}

TEST_CASE("acceptance frequency matches quadrature") {
  const auto p = fixtures::fdd_params();
  const double q = fixtures::acceptance_quadrature(p, 0.3);
  Rng rng(5);
  const int n = 50000;
  int acc = 0;
  for (int i = 0; i < n; ++i) acc += sample_jump_kernel(p, 0.3, rng).accepted;
  CHECK(std::abs(acc / double(n) - q) < 4 * std::sqrt(q * (1 - q) / n));
}

TEST_CASE("paths are piecewise constant with increasing jump times") {
  const auto p = fixtures::fdd_params();
  Rng rng(7);
  const auto path = simulate_tss(p, 0.3, 50.0, rng);
  CHECK(path.at(0.0) == Trait(0.3));
  double last = 0.0;
  Trait cur = 0.3;
  for (const auto& [t, x] : path.jumps) {
    CHECK(t > last);
    CHECK(t <= 50.0);
    CHECK(invasion_fitness(p, x, cur) > 0.0);
    CHECK(path.at(t) == x);
    last = t;
    cur = x;
  }
  CHECK(path.terminal() == cur);
  std::size_t accepted = 0;
  for (const auto& pr : path.proposals) accepted += pr.accepted;
  CHECK(accepted == path.jumps.size());
}

TEST_CASE("a flat fitness landscape never moves") {
  const auto p = fixtures::constant_params(2.0, 1.0, 1.0, 0.5);
  Rng rng(11);
  const auto path = simulate_tss(p, 0.4, 100.0, rng);
  CHECK(path.jumps.empty());
  CHECK_FALSE(path.proposals.empty());
}

TEST_CASE("probability of no jump by t is exp(-beta a t)") {
  // While the trait sits at x0, effective jumps arrive at rate beta(x0) a(x0)
  // with a the kernel's acceptance mass.
  const auto p = fixtures::fdd_params();
  const double rate = mutation_rate_beta(p, 0.3) * fixtures::acceptance_quadrature(p, 0.3);
  const double t = 5.0;
  const std::vector<double> times{0.0, t};
  const std::size_t reps = 20000;
  const auto m = tss_marginals(p, 0.3, times, reps, 99);
  std::size_t stay = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    CHECK(m[0][r] == Trait(0.3));
    stay += m[1][r] == Trait(0.3);
  }
  const double q = std::exp(-rate * t);
  CHECK(std::abs(stay / double(reps) - q) < 4 * std::sqrt(q * (1 - q) / reps));
}

TEST_CASE("marginals are reproducible and validate their times") {
  const auto p = fixtures::fdd_params();
  const auto a = tss_marginal(p, 0.3, 10.0, 50, 1);
  const auto b = tss_marginal(p, 0.3, 10.0, 50, 1);
  CHECK(a == b);
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(tss_marginals(p, 0.3, unsorted, 5, 1), PreconditionError);
}

}  // TEST_SUITE
