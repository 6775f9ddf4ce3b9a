#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"

#include "evodyn/errors.hpp"
#include "evodyn/micro.hpp"

using namespace evodyn;

namespace {

// Death rate of one x individual, summed directly from the definition.
double brute_death_rate(const EcologyParams& p, const PopulationState& s, const Trait& x) {
  double r = p.d(x);
  for (const auto& [y, mass] : s.support()) r += p.alpha(x, y) * mass;
  return r;
}

}  // namespace

TEST_SUITE("micro") {

TEST_CASE("default mutation scaling") {
  CHECK(default_mutation_scaling(1000) == doctest::Approx(1.0 / (1000 * std::pow(std::log(1000.0), 2))));
  CHECK_THROWS_AS(default_mutation_scaling(1), PreconditionError);
}

TEST_CASE("population bookkeeping") {
  const auto p = fixtures::default_params();
  auto s = PopulationState::monomorphic(p, 100, 0.5, 150);
  CHECK(s.total_count() == 150);
  CHECK(s.total_mass() == doctest::Approx(1.5));
  s.add(0.7, 3);
  s.add(0.5, 2);
  CHECK(s.support_size() == 2);
  CHECK(s.count_of(0.5) == 152);
  CHECK(s.mass_of(0.7) == doctest::Approx(0.03));
  const auto sup = s.support();
  CHECK(sup.front().first == Trait(0.5));
  CHECK(s.total_birth_rate() == doctest::Approx(152 * 2.5 + 3 * 2.7));
  CHECK(s.death_rate_of(0.7) == doctest::Approx(brute_death_rate(p, s, 0.7)));
}

TEST_CASE("cached death rates agree with a from-scratch sum along a run") {
  const auto p = fixtures::default_params();
  auto s = PopulationState::monomorphic(p, 200, 0.5, 300);
  Rng rng(17);
  for (int i = 0; i < 20000; ++i) {
    step(s, 0.05, rng);
    if (i % 997 == 0) {
      CHECK(s.total_death_rate() == doctest::Approx(s.recomputed_total_death_rate()).epsilon(1e-9));
      for (const auto& [x, m] : s.support()) {
        CHECK(s.death_rate_of(x) == doctest::Approx(brute_death_rate(p, s, x)).epsilon(1e-9));
      }
    }
  }
  CHECK(s.support_size() > 1);
}

TEST_CASE("event kinds occur in proportion to their rates") {
  // From one frozen two-type state, the next event's kind has probabilities
  // clonal : mutant : death = sum b(1 - u mu) n : sum b u mu n : sum d_i n_i.
  const auto p = fixtures::default_params();
  const double u = 0.3;
  auto base = PopulationState::monomorphic(p, 50, 0.2, 40);
  base.add(0.8, 20);
  double clonal = 0, mutant = 0, death = 0;
  for (const auto& [x, m] : base.support()) {
    const double n = m * 50;
    clonal += p.b(x) * (1 - u * p.mu(x)) * n;
    mutant += p.b(x) * u * p.mu(x) * n;
    death += brute_death_rate(p, base, x) * n;
  }
  const double total = clonal + mutant + death;
  std::map<EventKind, int> counts;
  Rng rng(23);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    auto s = base;
    counts[step(s, u, rng).first.kind]++;
  }
  auto check = [&](EventKind k, double rate) {
    const double q = rate / total;
    const double sd = std::sqrt(q * (1 - q) / n);
    CHECK(std::abs(counts[k] / double(n) - q) < 4 * sd);
  };
  check(EventKind::ClonalBirth, clonal);
  check(EventKind::MutantBirth, mutant);
  check(EventKind::Death, death);
}

TEST_CASE("waiting times are exponential with the total rate") {
  const auto p = fixtures::constant_params(2.0, 1.0, 1.0, 0.1);
  const auto base = PopulationState::monomorphic(p, 100, 0.5, 80);
  const double rate = 80 * 2.0 + 80 * (1.0 + 0.8);
  Rng rng(29);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto s = base;
    sum += step(s, 0.0, rng).second;
  }
  CHECK(sum / n == doctest::Approx(1.0 / rate).epsilon(4.0 / std::sqrt(double(n))));
}

TEST_CASE("events change one count by one and mutants are recorded") {
  const auto p = fixtures::default_params();
  SimulationOptions o;
  o.record_events = true;
  auto init = PopulationState::monomorphic(p, 100, 0.5, 150);
  Rng rng(31);
  const auto traj = simulate(p, 100, 0.2, init, 5.0, o, rng);
  REQUIRE(traj.final_state.has_value());
  long net = 0;
  std::uint64_t mutants = 0;
  double last = 0.0;
  for (const auto& e : traj.events) {
    CHECK(e.time >= last);
    last = e.time;
    net += e.kind == EventKind::Death ? -1 : 1;
    if (e.kind == EventKind::MutantBirth) {
      ++mutants;
      CHECK(e.parent.has_value());
      CHECK(p.space().contains(e.trait));
    } else {
      CHECK_FALSE(e.parent.has_value());
    }
  }
  CHECK(traj.final_state->total_count() == 150 + net);
  CHECK(mutants == traj.mutation_count);
  CHECK(traj.events.size() == traj.event_count);
  if (mutants > 0) CHECK(first_mutation_time(traj).has_value());
}

TEST_CASE("no mutant is ever born when u_K = 0") {
  const auto p = fixtures::default_params();
  SimulationOptions o;
  o.record_events = true;
  Rng rng(37);
  const auto traj = simulate(p, 300, 0.0, PopulationState::monomorphic(p, 300, 0.5, 450), 10.0, o, rng);
  CHECK(traj.mutation_count == 0);
  CHECK(traj.final_state->support_size() == 1);
  CHECK_FALSE(first_mutation_time(traj).has_value());
}

TEST_CASE("samples land on the requested times") {
  const auto p = fixtures::default_params();
  SimulationOptions o;
  o.sample_times = {0.0, 0.5, 1.0, 2.0, 7.0};
  o.tracked_traits = {0.5};
  Rng rng(41);
  const auto traj = simulate(p, 100, 0.0, PopulationState::monomorphic(p, 100, 0.5, 150), 2.0, o, rng);
  REQUIRE(traj.samples.size() == 4);
  CHECK(traj.samples[0].time == 0.0);
  CHECK(traj.samples[0].total_mass == doctest::Approx(1.5));
  CHECK(traj.samples[3].time == 2.0);
  CHECK(traj.samples[3].tracked_mass[0] == traj.samples[3].total_mass);
}

TEST_CASE("same seed gives the same trajectory") {
  const auto p = fixtures::default_params();
  SimulationOptions o;
  o.record_events = true;
  auto run = [&] {
    Rng rng(43);
    return simulate(p, 100, 0.1, PopulationState::monomorphic(p, 100, 0.5, 150), 3.0, o, rng);
  };
  const auto a = run(), b = run();
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].trait == b.events[i].trait);
  }
}

TEST_CASE("extinction, stop rule and budget") {
  const auto p = fixtures::constant_params(1.0, 0.5, 1.0, 0.1);
  PopulationState empty(p, 10);
  Rng rng(47);
  CHECK_THROWS_AS(step(empty, 0.0, rng), ExtinctPopulationError);

  // Small K dies out quickly under strong competition.
  const auto crowded = fixtures::constant_params(1.0, 0.9, 5.0, 0.1);
  const auto traj = simulate(crowded, 2, 0.0, PopulationState::monomorphic(crowded, 2, 0.5, 1),
                             std::numeric_limits<double>::infinity(), {}, rng);
  CHECK(traj.extinct);
  CHECK(traj.final_state->extinct());

  SimulationOptions stop;
  stop.stop = [](const PopulationState& s, EventKind) { return s.total_count() >= 40; };
  const auto grown = simulate(p, 100, 0.0, PopulationState::monomorphic(p, 100, 0.5, 10), 1e6, stop, rng);
  CHECK(grown.stopped);
  CHECK(grown.final_state->total_count() == 40);

  SimulationOptions tight;
  tight.event_budget = 100;
  CHECK_THROWS_AS(simulate(p, 100, 0.0, PopulationState::monomorphic(p, 100, 0.5, 50), 1e6, tight, rng),
                  EventBudgetExceeded);
}

}  // TEST_SUITE
