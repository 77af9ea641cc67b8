import os
import subprocess
import sys

import numpy as np
import pytest

from pmanet import _pykernels, kernels

ck = pytest.importorskip("pmanet._ckernels")


def _legs(n, seed):
    rng = np.random.default_rng(seed)
    sx, sy, ex, ey = (rng.uniform(0, 1000, n) for _ in range(4))
    tdep = rng.uniform(0, 10, n)
    tarr = tdep + rng.uniform(0, 40, n)
    tarr[:3] = tdep[:3]  # zero-length legs
    return sx, sy, ex, ey, tdep, tarr


@pytest.mark.parametrize("seed", range(5))
def test_positions_are_bit_identical(seed):
    legs = _legs(60, seed)
    for t in (0.0, 3.3, 10.0, 25.0, 60.0):
        px, py = _pykernels.positions_at(t, *legs)
        cx, cy = ck.positions_at(t, *legs)
        assert np.array_equal(px, cx) and np.array_equal(py, cy)


@pytest.mark.parametrize("seed", range(5))
def test_range_queries_agree(seed):
    legs = _legs(60, seed)
    for t in (1.0, 17.5):
        for s in range(60):
            assert _pykernels.in_range_at(t, *legs, s, 250.0) == ck.in_range_at(t, *legs, s, 250.0)


@pytest.mark.parametrize("seed", range(5))
def test_bfs_agrees(seed):
    rng = np.random.default_rng(seed)
    n = 40
    adj = [sorted(set(rng.choice(n, size=rng.integers(0, 5), replace=True).tolist()) - {i}) for i in range(n)]
    for s in range(n):
        assert _pykernels.bfs_first_hops(adj, s) == ck.bfs_first_hops(adj, s)


@pytest.mark.parametrize("seed", range(20))
def test_mpr_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    n = 60
    one = sorted(rng.choice(np.arange(1, n), size=rng.integers(0, 15), replace=False).tolist())
    lists = [sorted(rng.choice(n, size=rng.integers(0, 12), replace=False).tolist()) for _ in one]
    assert _pykernels.mpr_from_lists(0, one, lists, n) == ck.mpr_from_lists(0, one, lists, n)


def test_backend_selected_at_import():
    assert kernels.BACKEND in ("cython", "python")


SCRIPT = (
    "from pmanet import ScenarioConfig, run_network, BACKEND\n"
    "from pmanet.experiment import record_of, records_text\n"
    "cfg = ScenarioConfig(protocol='olsr', nodes=12, sim_time=40.0, seed=4)\n"
    "cfg.traffic.num_flows = 5\n"
    "print(BACKEND)\n"
    "print(records_text([record_of(run_network(cfg))]))\n"
)


def _run(pure):
    env = dict(os.environ)
    env.pop("PMANET_PURE", None)
    if pure:
        env["PMANET_PURE"] = "1"
    return subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, check=True, env=env).stdout


def test_whole_run_is_identical_across_backends():
    fast = _run(False).split("\n", 1)
    slow = _run(True).split("\n", 1)
    assert fast[0] == "cython" and slow[0] == "python"
    assert fast[1] == slow[1]
