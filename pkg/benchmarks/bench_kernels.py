"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths are called directly, so EXTKIT_NO_NUMBA does not matter here.
"""

import argparse
import time

import numpy as np

from extkit import _kernels as K
from extkit.fgab import FgGroup
from extkit.oracle import _cayley


def cayley(orders):
    g = FgGroup.from_orders(orders)
    return np.asarray(_cayley(g), dtype=np.int64)


def random_cocycle_table(orders_c, orders_a, rng):
    """A coboundary table c(x,y) = f(x)+f(y)-f(x+y): always a cocycle."""
    addc = cayley(orders_c)
    adda = cayley(orders_a)
    nc, na = addc.shape[0], adda.shape[0]
    neg = np.array([int(np.where(adda[i] == 0)[0][0]) for i in range(na)])
    f = rng.integers(0, na, nc)
    f[0] = 0
    c = np.empty((nc, nc), dtype=np.int64)
    for x in range(nc):
        for y in range(nc):
            c[x, y] = adda[adda[f[x], f[y]], neg[f[addc[x, y]]]]
    return addc, adda, c


def timed(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    if not K.USE_NUMBA:
        print("numba unavailable or disabled: only the numpy path is timed")

    rows = []
    for orders in ([16], [4, 4], [2, 2, 2, 2], [8, 8], [4, 4, 4]):
        add = cayley(orders)
        label = f"table_laws C={orders}"
        t_np = timed(K.table_laws_np, add, repeat=args.repeat)
        t_nb = timed(K.table_laws_nb, add, repeat=args.repeat) if K.USE_NUMBA else None
        rows.append((label, t_np, t_nb))

    for oc, oa in (([4, 4], [4]), ([2, 8], [2, 2]), ([8, 8], [4])):
        addc, adda, c = random_cocycle_table(oc, oa, rng)
        label = f"cocycle_ok C={oc} A={oa}"
        assert K.cocycle_ok_np(addc, adda, c)
        t_np = timed(K.cocycle_ok_np, addc, adda, c, repeat=args.repeat)
        t_nb = timed(K.cocycle_ok_nb, addc, adda, c, repeat=args.repeat) if K.USE_NUMBA else None
        rows.append((label, t_np, t_nb))

    for n, p, e in ((40, 2, 6), (120, 3, 4), (250, 2, 8)):
        mat = rng.integers(0, p**e, (n, n)).astype(np.int64)
        label = f"local_valuations {n}x{n} mod {p}^{e}"
        t_np = timed(K.local_valuations_np, mat, p, e, repeat=args.repeat)
        t_nb = timed(K.local_valuations_nb, mat, p, e, repeat=args.repeat) if K.USE_NUMBA else None
        rows.append((label, t_np, t_nb))

    print(f"{'kernel':42s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{label:42s} {t_np * 1e3:10.3f} {'-':>10s} {'-':>8s}")
        else:
            print(f"{label:42s} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
