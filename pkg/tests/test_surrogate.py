"""Dataset-scale checks on the synthetic Cora-shaped graph.

These exercise the same code paths as the Cora acceptance criteria when the
real files are absent. Quality numbers on the surrogate say nothing about the
real datasets and are not asserted here; see scripts/run_benchmark.py.
"""

import numpy as np
import pytest

from acmin.core import AcminParams, acmin
from acmin.datasets import cora_like


@pytest.fixture(scope="module")
def surrogate():
    return cora_like(0)


def test_orthogonality_500_iterations(surrogate):
    res = acmin(surrogate.graph, AcminParams(k=7, t_e=500, tol=0.0))
    assert res.iterations_run == 500
    assert max(res.ortho_error) < 1e-9
    assert not res.deficient_steps


def test_same_seed_same_bytes(surrogate):
    a = acmin(surrogate.graph, AcminParams(k=7, seed=3, init="random", t_e=60)).to_json()
    b = acmin(surrogate.graph, AcminParams(k=7, seed=3, init="random", t_e=60)).to_json()
    assert a == b


def test_defaults_run_and_keep_best(surrogate):
    res = acmin(surrogate.graph, AcminParams(k=7))
    trace = np.array(res.aamc_trace)
    assert len(trace) == res.iterations_run + 1 or res.converged_at is not None
    assert res.best_aamc == trace[res.best_iteration]
    assert res.best_nci.n_empty() == 0
    assert res.timings["ortho"] + res.timings["gen_nci"] + res.timings["aamc"] < 60
