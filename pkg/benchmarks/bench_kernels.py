"""Compare the compiled and pure-python kernel paths on identical workloads.

Usage: python3 benchmarks/bench_kernels.py [trials]

Runs each simulator kernel twice: in this process (numba-compiled when
available) and in a subprocess with FLNC_NO_NUMBA=1. The two paths must
produce bit-identical per-trial results; the script prints both timings
and the speedup, and exits nonzero on any mismatch.
"""

import os
import subprocess
import sys
import tempfile
import time

import numpy as np

from flnc import _kernels
from flnc.gf import GfField
from flnc.network import LineNetwork
from flnc.schemes import CodeSpec, Scheme, _schedule_arrays

TRIALS = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
SEED = 9


def run_block(trials):
    fld = GfField(8)
    spec = CodeSpec(scheme=Scheme.RLNC, K=12, N=16, field=fld)
    sys_a, lo_a, hi_a = _schedule_arrays(spec)
    deltas = np.array([0.05, 0.1])
    t0 = time.perf_counter()
    counts = _kernels.mc_block(
        sys_a, lo_a, hi_a, spec.K, 2, deltas, True,
        fld.exp, fld.log, fld.q, SEED, trials,
    )
    return np.asarray(counts), time.perf_counter() - t0


def run_swnc(trials):
    fld = GfField(8)
    spec = CodeSpec(scheme=Scheme.SWNC, K=8, N=12, field=fld)
    deltas = np.array([0.05, 0.1])
    t0 = time.perf_counter()
    counts = _kernels.mc_swnc(
        spec.K_s, spec.n_c, 2, deltas, 8, spec.w_d,
        fld.exp, fld.log, fld.q, SEED, trials,
    )
    return np.asarray(counts), time.perf_counter() - t0


def main():
    if os.environ.get("BENCH_WORKER"):
        # subprocess side: compute and dump, timings included
        out = sys.argv[-1]
        block, t_block = run_block(TRIALS)
        swnc, t_swnc = run_swnc(TRIALS // 4)
        np.savez(out, block=block, swnc=swnc, times=np.array([t_block, t_swnc]))
        return 0

    if not _kernels.USE_NUMBA:
        print("numba path inactive in this process (FLNC_NO_NUMBA set or "
              "numba missing); nothing to compare")
        return 1

    # warm the JIT cache before timing
    run_block(10)
    run_swnc(10)
    block, t_block = run_block(TRIALS)
    swnc, t_swnc = run_swnc(TRIALS // 4)

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "pure.npz")
        env = dict(os.environ, FLNC_NO_NUMBA="1", BENCH_WORKER="1")
        subprocess.run(
            [sys.executable, os.path.abspath(__file__), str(TRIALS), out],
            check=True,
            env=env,
        )
        ref = np.load(out)
        pure_block, pure_swnc = ref["block"], ref["swnc"]
        pt_block, pt_swnc = ref["times"]

    ok = True
    print(f"{'kernel':<10} {'trials':>7} {'numba':>9} {'pure':>9} "
          f"{'speedup':>8} identical")
    for name, trials, mine, theirs, tn, tp in [
        ("mc_block", TRIALS, block, pure_block, t_block, pt_block),
        ("mc_swnc", TRIALS // 4, swnc, pure_swnc, t_swnc, pt_swnc),
    ]:
        same = np.array_equal(mine, theirs)
        ok = ok and same
        print(f"{name:<10} {trials:>7} {tn:>8.3f}s {tp:>8.3f}s "
              f"{tp / tn:>7.1f}x {'yes' if same else 'NO'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
