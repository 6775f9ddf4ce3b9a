#include <cmath>

#include "doctest.h"

#include "evodyn/branching.hpp"
#include "evodyn/errors.hpp"

using namespace evodyn;

TEST_SUITE("branching") {

TEST_CASE("extinction probability") {
  CHECK(extinction_probability(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(extinction_probability(1.0, 2.0) == 1.0);
  CHECK(extinction_probability(1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(extinction_probability(0.0, 1.0), DegenerateParameterError);
  CHECK(BranchingParams{2, 1, 1}.criticality() == Criticality::Supercritical);
  CHECK(BranchingParams{1, 1, 1}.criticality() == Criticality::Critical);
}

TEST_CASE("extinction-time cdf limits") {
  CHECK(extinction_time_cdf(2, 1, 3, 0.0) == 0.0);
  CHECK(extinction_time_cdf(2, 1, 3, 200.0) == doctest::Approx(0.125));
  CHECK(extinction_time_cdf(1, 2, 3, 200.0) == doctest::Approx(1.0));
  CHECK(extinction_time_cdf(2, 1, 0, 0.5) == 1.0);
  // Pure death: P(T <= t) = (1 - e^{-dt})^n.
  CHECK(extinction_time_cdf(0, 1.5, 2, 0.7) == doctest::Approx(std::pow(1 - std::exp(-1.05), 2)));
  CHECK_THROWS_AS(extinction_time_cdf(1, 1, 1, 1.0), DegenerateParameterError);
}

TEST_CASE("simulated extinction times match the cdf") {
  Rng rng(7);
  const int n = 20000;
  int by_one = 0;
  for (int i = 0; i < n; ++i) {
    const auto path = simulate_branching({1.0, 2.0, 1}, 1.0, 1000, rng, false);
    by_one += path.extinct;
  }
  const double q = extinction_time_cdf(1.0, 2.0, 1, 1.0);
  CHECK(std::abs(by_one / double(n) - q) < 4 * std::sqrt(q * (1 - q) / n));
}

TEST_CASE("paths record counts and stop at the cap") {
  Rng rng(9);
  const auto path = simulate_branching({3.0, 1.0, 5}, 1e9, 20, rng);
  CHECK(path.counts.front() == 5);
  CHECK(path.times.front() == 0.0);
  CHECK(path.times.size() == path.counts.size());
  for (std::size_t i = 1; i < path.counts.size(); ++i) {
    CHECK(std::abs(path.counts[i] - path.counts[i - 1]) == 1);
  }
  CHECK((path.hit_cap || path.extinct));
  if (path.hit_cap) CHECK(path.final_count == 20);
  if (path.extinct) CHECK(path.extinction_time.has_value());
  CHECK_THROWS_AS(simulate_branching({1, 1, 5}, 1.0, 5, rng), PreconditionError);
}

TEST_CASE("hitting bound edge cases") {
  Rng rng(13);
  const auto none = hitting_bound_check(1, 2, 0, 10, 100, rng);
  CHECK(none.hits == 0);
  const auto all = hitting_bound_check(1, 2, 5, 1, 100, rng);
  CHECK(all.hits == 100);
  const auto r = hitting_bound_check(1, 2, 5, 10, 2000, rng);
  CHECK(r.bound == doctest::Approx(0.1));
  CHECK(r.within_bound);
  CHECK_THROWS_AS(hitting_bound_check(2, 1, 5, 10, 10, rng), PreconditionError);
}

}  // TEST_SUITE
