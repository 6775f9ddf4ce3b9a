#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"

#include "evodyn/errors.hpp"
#include "evodyn/model.hpp"
#include "evodyn/rng.hpp"

using namespace evodyn;

TEST_SUITE("model") {

TEST_CASE("trait space membership and grid") {
  const TraitSpace box({0.0, -1.0}, {1.0, 1.0});
  CHECK(box.contains(Trait{0.5, 0.0}));
  CHECK(box.contains(Trait{1.0, -1.0}));
  CHECK_FALSE(box.contains(Trait{1.0000001, 0.0}));
  CHECK_THROWS_AS(box.require(Trait{2.0, 0.0}), DomainError);
  CHECK(box.vertices().size() == 4);
  const auto g = box.grid(3);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == Trait{0.0, -1.0});
  CHECK(g.back() == Trait{1.0, 1.0});
  CHECK_THROWS(TraitSpace::interval(1.0, 1.0));
}

TEST_CASE("equilibrium, beta and fitness on the default scenario") {
  const auto p = fixtures::default_params();
  CHECK(equilibrium_density(p, 0.5) == doctest::Approx(1.5));
  CHECK(mutation_rate_beta(p, 0.5) == doctest::Approx(0.1 * 2.5 * 1.5));
  for (double x : {0.0, 0.2, 0.5, 0.9}) {
    for (double y : {0.0, 0.3, 0.55, 1.0}) {
      CHECK(invasion_fitness(p, y, x) == doctest::Approx(fixtures::default_fitness(y, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("neutrality identity f(x, x) = 0") {
  const auto p = fixtures::default_params();
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    CHECK(std::abs(invasion_fitness(p, x, x)) <= 1e-12);
  }
}

TEST_CASE("equilibrium guards") {
  const auto zero_alpha = fixtures::constant_params(2.0, 1.0, 0.0, 0.1);
  CHECK_THROWS_AS(equilibrium_density(zero_alpha, 0.5), DegenerateParameterError);
  const auto dying = fixtures::constant_params(1.0, 1.0, 1.0, 0.1);
  CHECK_THROWS_AS(equilibrium_density(dying, 0.5), DegenerateParameterError);
  CHECK_THROWS_AS(equilibrium_density(fixtures::default_params(), 1.5), DomainError);
}

TEST_CASE("pair classification") {
  const auto p = fixtures::default_params();
  const auto up = classify_pair(p, 0.5, 0.55);
  CHECK(up.kind == InvasionClass::MutantInvades);
  CHECK(up.mutant_fitness == doctest::Approx(0.0125));
  CHECK(up.resident_fitness == doctest::Approx(-0.01125));
  CHECK(classify_pair(p, 0.55, 0.5).kind == InvasionClass::ResidentStable);
  CHECK(classify_pair(p, 0.5, 0.5).kind == InvasionClass::Degenerate);
  // Neutral competition: both fitnesses vanish.
  const auto flat = fixtures::constant_params(2.0, 1.0, 1.0, 0.1);
  CHECK(classify_pair(flat, 0.2, 0.8).kind == InvasionClass::Degenerate);
}

TEST_CASE("rate function catalog") {
  const TraitSpace box = TraitSpace::interval(0.0, 1.0);
  const auto lin = ScalarFunction::linear(2.0, {1.0});
  CHECK(lin(0.25) == doctest::Approx(2.25));
  CHECK(lin.range_over(box) == std::pair{2.0, 3.0});
  const auto bump = ScalarFunction::gaussian_bump(1.0, 2.0, {0.5}, 0.1);
  CHECK(bump(0.5) == doctest::Approx(3.0));
  CHECK(bump(0.6) == doctest::Approx(1.0 + 2.0 * std::exp(-0.5)));
  const auto [blo, bhi] = bump.range_over(box);
  CHECK(blo == doctest::Approx(1.0 + 2.0 * std::exp(-12.5)));
  CHECK(bhi == doctest::Approx(3.0));

  const auto a = CompetitionKernel::linear_difference(1.0, {0.5}, 0.25, 4.0);
  CHECK(a(1.0, 0.0) == doctest::Approx(1.5));
  CHECK(a(0.0, 1.0) == doctest::Approx(0.5));
  const auto clipped = CompetitionKernel::linear_difference(1.0, {2.0}, 0.25, 4.0);
  CHECK(clipped(0.0, 1.0) == 0.25);
  CHECK(clipped.range_over(box) == std::pair{0.25, 3.0});
  const auto g = CompetitionKernel::gaussian(0.1, 1.0, 0.2);
  CHECK(g(0.3, 0.3) == doctest::Approx(1.1));
}

TEST_CASE("mutation kernel stays in the box and matches its density") {
  const TraitSpace box = TraitSpace::interval(0.0, 1.0);
  const auto m = MutationKernel::gaussian({0.3});
  Rng rng(3);
  // Truncation mass from the normal cdf.
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  const double x = 0.1;
  const double z_expected = Phi((1.0 - x) / 0.3) - Phi((0.0 - x) / 0.3);
  CHECK(m.truncation_mass(x, box) == doctest::Approx(z_expected).epsilon(1e-12));

  // Empirical P(y < 0.2) against the integral of the density.
  const int n = 100000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const Trait y = m.sample_mutant(x, box, rng);
    REQUIRE(box.contains(y));
    below += y[0] < 0.2;
  }
  const double p_expected = (Phi((0.2 - x) / 0.3) - Phi(-x / 0.3)) / z_expected;
  const double sd = std::sqrt(p_expected * (1 - p_expected) / n);
  CHECK(std::abs(below / double(n) - p_expected) < 4 * sd);

  // Density integrates to one and is dominated by m-bar.
  double total = 0.0;
  const int steps = 20000;
  for (int i = 0; i <= steps; ++i) {
    const double y = static_cast<double>(i) / steps;
    const double h = y - x;
    const double dens = m.density(x, std::span<const double>(&h, 1), box);
    CHECK(dens <= m.dominating_density(std::span<const double>(&h, 1), box) + 1e-12);
    total += (i == 0 || i == steps ? 0.5 : 1.0) * dens / steps;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  const double outside = 1.0;
  CHECK(m.density(0.5, std::span<const double>(&outside, 1), box) == 0.0);
}

TEST_CASE("rejection sampling gives up on an unreachable box") {
  const TraitSpace thin = TraitSpace::interval(0.0, 1e-9);
  const auto m = MutationKernel::gaussian({10.0});
  Rng rng(5);
  CHECK_THROWS_AS(m.sample_mutant(0.0, thin, rng), SamplingError);
}

TEST_CASE("assumption validation") {
  const auto p = fixtures::default_params();
  const auto grid = p.space().grid(21);
  CHECK(validate_assumptions(p, grid).passed);

  // b - d <= 0 at x = 0.
  const EcologyParams bad(TraitSpace::interval(0.0, 1.0), ScalarFunction::linear(1.0, {1.0}),
                          ScalarFunction::constant(1.0), CompetitionKernel::constant(1.0),
                          ScalarFunction::constant(0.1), MutationKernel::gaussian({0.05}));
  const auto r = validate_assumptions(bad, grid);
  CHECK_FALSE(r.passed);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front().trait.has_value());

  const auto zero_mu = fixtures::constant_params(2.0, 1.0, 1.0, 0.0);
  CHECK_FALSE(validate_assumptions(zero_mu, grid).passed);
  const auto zero_alpha = fixtures::constant_params(2.0, 1.0, 0.0, 0.1);
  CHECK_FALSE(validate_assumptions(zero_alpha, grid).passed);

  // Declared bounds that the functions exceed.
  const EcologyParams understated(p.space(), p.birth_fn(), p.death_fn(), p.competition_fn(),
                                  p.mutation_probability_fn(), p.mutation(),
                                  RateBounds{2.5, 1.0, 4.0, 0.25});
  CHECK_FALSE(validate_assumptions(understated, grid).passed);
  CHECK_THROWS_AS(validate_assumptions(p, std::vector<Trait>{}), PreconditionError);
}

}  // TEST_SUITE
