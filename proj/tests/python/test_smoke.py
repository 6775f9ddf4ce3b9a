import math
import os
import pathlib

import pytest

import evodyn

SCENARIOS = pathlib.Path(os.environ.get(
    "EVODYN_SCENARIO_DIR", pathlib.Path(__file__).resolve().parents[2] / "scenarios"))


@pytest.fixture(scope="module")
def default():
    return evodyn.load_scenario(SCENARIOS / "default.json")


def test_rates_and_fitness(default):
    p = default.params
    assert p.b(0.5) == pytest.approx(2.5)
    assert evodyn.equilibrium_density(p, 0.5) == pytest.approx(1.5)
    assert evodyn.invasion_fitness(p, 0.55, 0.5) == pytest.approx(0.5 * 0.05 * 0.5)
    assert abs(evodyn.invasion_fitness(p, 0.3, 0.3)) < 1e-12
    assert evodyn.classify_pair(p, 0.5, 0.55)["kind"] == "MutantInvades"
    assert evodyn.validate_assumptions(p)["passed"]


def test_errors_cross_the_boundary(default):
    with pytest.raises(evodyn.EvodynError):
        evodyn.equilibrium_density(default.params, 2.0)
    with pytest.raises(evodyn.EvodynError):
        evodyn.Params({"trait_space": {"lo": 0, "hi": 1}})


def test_micro_is_seeded(default):
    a = evodyn.simulate_micro(default.params, 200, 0.5, 2.0, sample_times=[0, 1, 2], seed=3)
    b = evodyn.simulate_micro(default.params, 200, 0.5, 2.0, sample_times=[0, 1, 2], seed=3)
    assert a == b
    assert a["times"] == [0, 1, 2]
    assert a["total_mass"][0] == pytest.approx(1.5)
    assert sum(m for _, m in a["final_support"]) == pytest.approx(a["total_mass"][-1])


def test_tss_and_ode(default):
    jumps = evodyn.simulate_tss(default.params, 0.5, 2000.0, seed=1)
    assert all(t1 < t2 for (t1, _), (t2, _) in zip(jumps, jumps[1:]))
    assert evodyn.tss_marginal(default.params, 0.5, 0.0, 5) == [0.5] * 5
    times, n = evodyn.integrate_logistic(2, 1, 1, 0.5, 5.0)
    assert n[-1] == pytest.approx(1 / (1 + math.exp(-5)), rel=1e-9)
    flow = evodyn.classify_equilibrium_flow(default.params, 0.5, 0.55, 0.15)
    assert flow["outcome"] == "ConvergesToMutant"


def test_branching_closed_forms():
    assert evodyn.extinction_probability(2, 1) == pytest.approx(0.5)
    assert evodyn.extinction_time_cdf(2, 1, 1, 1e3) == pytest.approx(0.5)


def test_harness_reports():
    inv = evodyn.load_scenario(SCENARIOS / "invasion.json")
    est = evodyn.estimate_invasion_probability(inv.params, 0.0, 1.0, 100, 40, seed=2)
    assert {"estimate", "ci", "target"} <= est.keys()
    assert est["target"] == pytest.approx(1 / 3)
    assert 0.0 <= est["ci"]["low"] <= est["ci"]["high"] <= 1.0

    mt = evodyn.load_scenario(SCENARIOS / "mutation_time.json")
    rep = evodyn.mutation_time_test(mt.params, 0.5, 100, 50, seed=2)
    assert rep["beta"] == pytest.approx(2.0)
    assert evodyn.mutation_time_test(mt.params, 0.5, 100, 5, u_K=0.0)["degenerate"]

    ex = evodyn.exit_time_scaling(2, 1, 1, 0.5, 0.5, [10, 30], 1e3, 20, seed=1)
    assert len(ex["levels"]) == 2


def test_compare_fdd_smoke():
    fdd = evodyn.load_scenario(SCENARIOS / "fdd.json")
    fdd.spec["K"] = [300]
    fdd.spec["observation_times"] = [0.0, 2.0]
    rep = evodyn.compare_fdd(fdd, 20, seed=1, jobs=1)
    first = rep["levels"][0]["times"][0]
    assert first["tv_distance"] == 0.0
    assert first["monomorphic_frequency"] == 1.0
