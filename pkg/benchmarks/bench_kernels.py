"""Compare the numba kernels with the pure-numpy fallback.

Each backend runs in its own interpreter because ``CHIUN_NUMBA`` is read at
import time.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from chiun import _kernels as K
from chiun.permgroup import parse_group_expr
from chiun.isoclass import ClassRegistry, normal_subgroups

repeat = int(sys.argv[1])
G = parse_group_expr("Z2 wr S4")
H = parse_group_expr("S3 wr S2")
table = G.table
results = {}

def timed(name, fn):
    fn()  # warm-up (and JIT compile)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    results[name] = best

rng = np.random.default_rng(0)
seed_sets = [rng.choice(G.order, size=2, replace=False) for _ in range(200)]
timed("closure x200", lambda: [K.closure(table, 0, s) for s in seed_sets])
gens = np.array(H.generator_indices, dtype=np.int64)
timed("extend_hom (automorphism)", lambda: K.extend_hom(H.table, H.table, 0, 0, gens, gens, True))
acts = np.array([H.element(int(g)) for g in gens], dtype=np.int64)
timed("extend_action", lambda: K.extend_action(H.table, 0, gens, acts))
comm = parse_group_expr("S4").commute_matrix
timed("commuting_tuples m=3", lambda: K.commuting_tuples(comm, 3))
timed("normal_subgroups(Z2 wr S4)", lambda: normal_subgroups(G))
timed("classify(Z3 wr S3)", lambda: ClassRegistry().classify(parse_group_expr("Z3 wr S3")))
print(json.dumps({"numba": K.USE_NUMBA, "results": results}))
"""


def run(flag: str, repeat: int) -> dict:
    env = dict(os.environ, CHIUN_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    slow = run("0", args.repeat)
    fast = run("1", args.repeat)
    if not fast["numba"]:
        print("numba is not installed; only the numpy backend was measured")
    print(f"{'workload':32s} {'numpy (s)':>11s} {'numba (s)':>11s} {'speedup':>8s}")
    for name, t_np in slow["results"].items():
        t_nb = fast["results"][name]
        print(f"{name:32s} {t_np:11.4f} {t_nb:11.4f} {t_np / max(t_nb, 1e-9):7.1f}x")
    print(f"total wall time {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
