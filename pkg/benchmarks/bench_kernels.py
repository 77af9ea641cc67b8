"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--nodes 100] [--repeat 5] [--end-to-end]

Kernel timings call both backends directly on the same inputs. The optional
end-to-end timing runs one short scenario in a subprocess per backend, since
the backend is chosen once at import.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from pmanet import _pykernels

try:
    from pmanet import _ckernels
except ImportError:  # extension not built
    _ckernels = None

SCENARIO = (
    "from pmanet import ScenarioConfig, run_network;"
    "cfg = ScenarioConfig(protocol='olsr', preset='modified', nodes=25, sim_time=120, seed=1);"
    "cfg.traffic.num_flows = 10; cfg.traffic.rate = 8; cfg.traffic.packet_size = 64;"
    "run_network(cfg)"
)


def make_inputs(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    sx, sy, ex, ey = (rng.uniform(0, 1000, n) for _ in range(4))
    tdep = rng.uniform(0, 10, n)
    tarr = tdep + rng.uniform(1, 50, n)
    pos = np.column_stack([sx, sy])
    adj = [[j for j in range(n) if j != i and np.hypot(*(pos[i] - pos[j])) <= 250] for i in range(n)]
    return (sx, sy, ex, ey, tdep, tarr), adj


def bench_backend(mod, legs, adj, n: int, repeat: int):
    calls = {
        "positions_at": lambda: mod.positions_at(12.5, *legs),
        "in_range_at": lambda: [mod.in_range_at(12.5, *legs, s, 250.0) for s in range(n)],
        "bfs_first_hops": lambda: [mod.bfs_first_hops(adj, s) for s in range(n)],
        "mpr_from_lists": lambda: [mod.mpr_from_lists(s, adj[s], [adj[b] for b in adj[s]], n) for s in range(n)],
    }
    out = {}
    for name, fn in calls.items():
        number = max(1, 200 // n)
        best = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
        out[name] = best
    return out


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["PMANET_PURE"] = "1"
    else:
        env.pop("PMANET_PURE", None)
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-c", SCENARIO], check=True, env=env)
    return time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)

    legs, adj = make_inputs(args.nodes)
    py = bench_backend(_pykernels, legs, adj, args.nodes, args.repeat)
    if _ckernels is None:
        print("compiled extension not available; pure-Python timings only")
        cy = None
    else:
        cy = bench_backend(_ckernels, legs, adj, args.nodes, args.repeat)

    print(f"{'kernel':<16}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, t_py in py.items():
        if cy is None:
            print(f"{name:<16}{t_py * 1e3:>14.3f}{'-':>14}{'-':>10}")
        else:
            print(f"{name:<16}{t_py * 1e3:>14.3f}{cy[name] * 1e3:>14.3f}{t_py / cy[name]:>9.1f}x")

    if args.end_to_end:
        t_py = end_to_end(pure=True)
        line = f"{'end-to-end (s)':<16}{t_py:>14.2f}"
        if cy is not None:
            t_cy = end_to_end(pure=False)
            line += f"{t_cy:>14.2f}{t_py / t_cy:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
