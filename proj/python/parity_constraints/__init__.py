"""Parity-constraint strengths for Ising problems in the parity (LHZ) layout.

Instances, graphs, reports and configurations are plain dicts in the same
JSON shape the command line tool reads and writes (1-based indices).
"""

import json

from . import _core
from ._core import (
    DEFAULT_DELTA,
    CapacityError,
    ConfigError,
    antiferro_c_minus_1,
    calibrate_delta,
    erfinv,
    expected_a1_independent,
    expected_l0_independent,
    expected_min_independent,
    f1_scaling,
    gumbel_params,
    probit,
)

__all__ = [
    "DEFAULT_DELTA",
    "CapacityError",
    "ConfigError",
    "antiferro_c_minus_1",
    "calibrate_delta",
    "encode_maxcut",
    "encode_minbisection",
    "erfinv",
    "expected_a1_independent",
    "expected_l0_independent",
    "expected_min_independent",
    "f1_scaling",
    "fit_power_law",
    "generate",
    "gumbel_params",
    "layout",
    "probit",
    "random_graph",
    "restricted_minimum",
    "run_ensemble",
    "sdp_bound",
    "solve",
    "solve_lp",
    "spectrum",
    "verify",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def generate(n, distribution=None, seed=1, p_edge=1.0):
    """Sample couplings on K_n (or ER(n, p_edge)); distribution like {"kind": "normal"}."""
    return json.loads(_core.generate(n, _dump(distribution or {"kind": "normal"}), seed, p_edge))


def random_graph(n, p_edge, seed):
    return json.loads(_core.random_graph(n, p_edge, seed))


def encode_maxcut(graph):
    return json.loads(_core.encode_maxcut(_dump(graph)))


def encode_minbisection(graph, u=None):
    return json.loads(_core.encode_minbisection(_dump(graph), u))


def layout(n):
    return json.loads(_core.layout(n))


def spectrum(instance, threads=1):
    return json.loads(_core.spectrum(_dump(instance), threads))


def solve(instance, k_max=2, allow_higher=False, threads=1):
    return json.loads(_core.solve(_dump(instance), k_max, allow_higher, threads))


def restricted_minimum(instance, profile):
    """profile: list of [k, l] plaquette labels."""
    return _core.restricted_minimum(_dump(instance), _dump(profile))


def verify(instance, assignment, family="full"):
    """family: "full", an int k (all profiles with at most k violations) or a list of profiles."""
    return json.loads(_core.verify(_dump(instance), _dump(assignment), json.dumps(family)))


def solve_lp(instance, family="full"):
    return json.loads(_core.solve_lp(_dump(instance), json.dumps(family)))


def sdp_bound(graph):
    return json.loads(_core.sdp_bound(_dump(graph)))


def run_ensemble(config):
    return json.loads(_core.run_ensemble(_dump(config)))


def fit_power_law(points, weights=None):
    return json.loads(_core.fit_power_law([tuple(p) for p in points], list(weights or [])))
