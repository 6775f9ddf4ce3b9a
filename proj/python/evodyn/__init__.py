"""Individual-based eco-evolutionary simulation and its trait substitution limit.

Traits are given as a float (one-dimensional trait space) or a sequence of
floats. Reports come back as plain dicts with the same fields as the JSON
files written by the command-line tool.
"""

import json as _json
import os as _os
from collections.abc import Sequence as _Sequence

from . import _core
from ._core import EvodynError, default_mutation_scaling, extinction_probability, extinction_time_cdf

__all__ = [
    "EvodynError",
    "Params",
    "Scenario",
    "classify_equilibrium_flow",
    "classify_pair",
    "compare_fdd",
    "default_mutation_scaling",
    "equilibrium_density",
    "estimate_invasion_probability",
    "exit_time_scaling",
    "extinction_probability",
    "extinction_time_cdf",
    "integrate_dimorphic",
    "integrate_logistic",
    "invasion_fitness",
    "jump_acceptance",
    "load_scenario",
    "mutation_rate_beta",
    "mutation_time_test",
    "simulate_micro",
    "simulate_tss",
    "tss_marginal",
    "validate_assumptions",
]

_JOBS = _os.cpu_count() or 1


def _trait(x):
    if isinstance(x, _Sequence):
        return [float(v) for v in x]
    return [float(x)]


def _untrait(c):
    return c[0] if len(c) == 1 else tuple(c)


class Params:
    """Ecological parameters built from the same JSON fields as a scenario file."""

    def __init__(self, spec):
        text = spec if isinstance(spec, str) else _json.dumps(spec)
        self._p = _core.Params(text)

    def b(self, x):
        return self._p.b(_trait(x))

    def d(self, x):
        return self._p.d(_trait(x))

    def mu(self, x):
        return self._p.mu(_trait(x))

    def alpha(self, x, y):
        return self._p.alpha(_trait(x), _trait(y))

    def to_dict(self):
        return _json.loads(self._p.to_json())


class Scenario:
    def __init__(self, spec):
        self.spec = dict(spec)
        self.params = Params({k: self.spec[k] for k in _PARAM_KEYS if k in self.spec})

    def __getitem__(self, key):
        return self.spec[key]


_PARAM_KEYS = ("trait_space", "birth", "death", "competition", "mutation_probability",
               "mutation_kernel", "bounds")


def load_scenario(path):
    return Scenario(_json.loads(_core.scenario_json(str(path))))


def equilibrium_density(params, x):
    return _core.equilibrium_density(params._p, _trait(x))


def mutation_rate_beta(params, x):
    return _core.mutation_rate_beta(params._p, _trait(x))


def invasion_fitness(params, y, x):
    """f(y, x): growth rate of a rare y in an x population at equilibrium."""
    return _core.invasion_fitness(params._p, _trait(y), _trait(x))


def classify_pair(params, x, y):
    kind, mutant, resident = _core.classify_pair(params._p, _trait(x), _trait(y))
    return {"kind": kind, "mutant_fitness": mutant, "resident_fitness": resident}


def validate_assumptions(params, per_axis=21):
    return _json.loads(_core.validate_assumptions(params._p, per_axis))


def simulate_micro(params, K, x0, t_end, *, u_K=None, count=None, sample_times=(), seed=0):
    if u_K is None:
        u_K = default_mutation_scaling(K)
    if count is None:
        count = int(K * equilibrium_density(params, x0))
    out = _core.simulate_micro(params._p, K, u_K, _trait(x0), count, t_end, list(sample_times), seed)
    out["final_support"] = [(_untrait(x), m) for x, m in out["final_support"]]
    return out


def simulate_tss(params, x0, t_end, seed=0):
    """Effective jumps (time, trait) of one substitution-sequence path."""
    return [(t, _untrait(x)) for t, x in _core.simulate_tss(params._p, _trait(x0), t_end, seed)]


def tss_marginal(params, x0, t, reps, seed=0):
    return [_untrait(x) for x in _core.tss_marginal(params._p, _trait(x0), t, reps, seed)]


def jump_acceptance(params, x, draws, seed=0):
    """Fraction of jump-kernel proposals from x that are accepted."""
    return _core.jump_acceptance(params._p, _trait(x), draws, seed)


def integrate_logistic(b, d, alpha, n0, T, dt=1e-3):
    return _core.integrate_logistic(b, d, alpha, n0, T, dt)


def integrate_dimorphic(params, x, y, n0, T, dt=1e-3):
    return _core.integrate_dimorphic(params._p, _trait(x), _trait(y), n0[0], n0[1], T, dt)


def classify_equilibrium_flow(params, x, y, epsilon):
    return _json.loads(_core.classify_equilibrium_flow(params._p, _trait(x), _trait(y), epsilon))


def estimate_invasion_probability(params, x, y, K, reps, seed=0, jobs=_JOBS):
    return _json.loads(_core.estimate_invasion_probability(params._p, _trait(x), _trait(y), K,
                                                           reps, seed, jobs))


def mutation_time_test(params, x, K, reps, *, u_K=None, seed=0, jobs=_JOBS):
    if u_K is None:
        u_K = default_mutation_scaling(K)
    return _json.loads(_core.mutation_time_test(params._p, _trait(x), K, u_K, reps, seed, jobs))


def compare_fdd(scenario, reps, seed=0, jobs=_JOBS):
    return _json.loads(_core.compare_fdd(_json.dumps(scenario.spec), reps, seed, jobs))


def exit_time_scaling(b, d, alpha, eta1, eta2, Ks, t_max, reps, seed=0, jobs=_JOBS):
    return _json.loads(_core.exit_time_scaling(b, d, alpha, eta1, eta2, list(Ks), t_max, reps,
                                               seed, jobs))
