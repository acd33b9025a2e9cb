"""Time each compiled kernel against its numpy twin on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba column is empty when numba is missing or GAUSSFS_DISABLE_NUMBA is set.
"""

import argparse
import time

import numpy as np

from gaussfs import _kernels as K


def best_of(fn, repeat):
    fn()  # warm-up, includes compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    n = 64
    g1 = rng.integers(-100, 100, size=(n, n)).astype(np.int64)
    g2 = rng.integers(-100, 100, size=(n, n)).astype(np.int64)
    shifts = rng.integers(-n + 1, n, size=(400, 2)).astype(np.int64)
    yield "shift_sums 64x64, 400 shifts", (g1, g2, shifts), K.shift_sums_numpy, "shift_sums_numba"

    are, aim = 300, 151
    m = are * are + aim * aim
    z = rng.integers(-400, 400, size=(2, 200_000)).astype(np.int64)
    c = rng.integers(0, m, size=(2, 5)).astype(np.int64)
    yield ("root_mask deg 4, 200k points", (c[0], c[1], z[0], z[1], m, are, aim),
           K.root_mask_numpy, "root_mask_numba")

    z = rng.integers(-300, 300, size=(2, 200_000)).astype(np.int64)
    c = rng.integers(-9, 9, size=(2, 3)).astype(np.int64)
    yield "poly_values deg 2, 200k points", (c[0], c[1], z[0], z[1]), K.poly_values_numpy, "poly_values_numba"

    N = 40
    table = np.zeros((2 * N - 1, 2 * N - 1), dtype=bool)
    xs = rng.integers(1, N + 1, size=600).astype(np.int64)
    ys = rng.integers(1, N + 1, size=600).astype(np.int64)
    yield "first_hit 600 points, no hit", (xs, ys, table, N - 1), K.first_hit_numpy, "first_hit_numba"

    adj = [0] * 40
    for a in range(40):
        for b in range(a + 1, 40):
            if rng.random() < 0.2:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    arr = np.asarray(adj, dtype=np.int64)
    yield "max independent set, 40 vertices", (adj,), K.mis_python, ("mis_numba", (arr,))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"backend: {K.backend()}")
    print(f"{'kernel':36} {'numpy/python s':>15} {'numba s':>10} {'speedup':>8}")
    for name, inputs, twin, compiled in cases(rng):
        t_np = best_of(lambda: twin(*inputs), args.repeat)
        if isinstance(compiled, tuple):
            compiled, cinputs = compiled
        else:
            cinputs = inputs
        fn = getattr(K, compiled) if K.HAVE_NUMBA else None
        if fn is None:
            print(f"{name:36} {t_np:15.5f} {'-':>10} {'-':>8}")
            continue
        t_nb = best_of(lambda: fn(*cinputs), args.repeat)
        print(f"{name:36} {t_np:15.5f} {t_nb:10.5f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
