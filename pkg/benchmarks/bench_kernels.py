"""Compare the numba kernels with their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N] [--order N]

Each kernel runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` timings is reported.  Both backends must return
the same value; a mismatch aborts the run.
"""

import argparse
import time

import numpy as np

from weakmaps import _kernels
from weakmaps.cohomology import make_module
from weakmaps.group import cyclic, dihedral, klein_four
from weakmaps.hom import make_action, make_hom


def cases(order: int):
    D = dihedral(order // 2)
    t = np.ascontiguousarray(D.table)
    # rotations come first, so this is the sign map onto Z2
    sign = make_hom(D, cyclic(2), np.repeat([0, 1], D.order // 2)).image
    z2 = np.ascontiguousarray(cyclic(2).table)
    conj = np.ascontiguousarray(D.conj_table)
    V = klein_four()
    swap = np.array([[0] * 6, [1, 2] * 3, [2, 1] * 3, [3] * 6])
    M = make_module(cyclic(6), V, make_action(cyclic(6), V, swap))
    gt, left = np.ascontiguousarray(M.gamma.table), np.ascontiguousarray(M.left)
    return {
        f"first_nonassociative |G|={D.order}": lambda k: k.first_nonassociative(t),
        f"first_nonhom |G|={D.order}": lambda k: k.first_nonhom(t, z2, sign),
        f"first_action_comp_failure |G|={D.order}": lambda k: k.first_action_comp_failure(t, conj),
        f"first_action_auto_failure |G|={D.order}": lambda k: k.first_action_auto_failure(t, conj),
        "coboundary deg 3, |Γ|=6, V4": lambda k: k.coboundary(gt, left, 3),
    }


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def same(a, b) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--order", type=int, default=256, help="order of the dihedral test group")
    args = ap.parse_args()

    try:
        fast = _kernels.backend("numba")
    except ImportError:
        raise SystemExit("numba is not installed; pip install 'artifact[fast]'")
    slow = _kernels.backend("numpy")

    print(f"{'kernel':<40} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, run in cases(args.order).items():
        a, b = run(slow), run(fast)
        if not same(a, b):
            raise SystemExit(f"{name}: backends disagree ({a!r} vs {b!r})")
        ts = best_of(lambda: run(slow), args.repeat)
        tf = best_of(lambda: run(fast), args.repeat)
        print(f"{name:<40} {ts * 1e3:>10.2f} {tf * 1e3:>10.2f} {ts / tf:>7.1f}x")


if __name__ == "__main__":
    main()
