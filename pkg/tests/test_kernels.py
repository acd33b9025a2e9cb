import os
import subprocess
import sys

import numpy as np
import pytest

from gaussfs import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba backend not active")


def rng_for(seed):
    return np.random.default_rng(seed)


def brute_mis_size(adj):
    n = len(adj)
    best = 0
    for mask in range(1 << n):
        if all(not (mask >> v & 1) or not (adj[v] & mask) for v in range(n)):
            best = max(best, bin(mask).count("1"))
    return best


def random_graph(rng, n, p):
    adj = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return adj


# region numpy twins against plain loops


@pytest.mark.parametrize("seed", range(5))
def test_shift_sums_numpy_matches_loop(seed):
    rng = rng_for(seed)
    n = int(rng.integers(1, 9))
    g1 = rng.integers(-50, 50, size=(n, n)).astype(np.int64)
    g2 = rng.integers(-50, 50, size=(n, n)).astype(np.int64)
    shifts = rng.integers(-n - 1, n + 2, size=(20, 2)).astype(np.int64)
    assert np.array_equal(K.shift_sums_numpy(g1, g2, shifts), K._shift_sums_loop(g1, g2, shifts))


@pytest.mark.parametrize("seed", range(5))
def test_root_mask_numpy_matches_loop(seed):
    rng = rng_for(seed)
    are, aim = int(rng.integers(1, 30)), int(rng.integers(0, 30))
    n = are * are + aim * aim
    cre = rng.integers(0, n, size=4).astype(np.int64)
    cim = rng.integers(0, n, size=4).astype(np.int64)
    zre = rng.integers(-100, 100, size=200).astype(np.int64)
    zim = rng.integers(-100, 100, size=200).astype(np.int64)
    a = K.root_mask_numpy(cre, cim, zre, zim, n, are, aim)
    b = K._root_mask_loop(cre, cim, zre, zim, n, are, aim)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("seed", range(5))
def test_poly_values_numpy_matches_loop(seed):
    rng = rng_for(seed)
    cre = rng.integers(-9, 9, size=4).astype(np.int64)
    cim = rng.integers(-9, 9, size=4).astype(np.int64)
    zre = rng.integers(-40, 40, size=100).astype(np.int64)
    zim = rng.integers(-40, 40, size=100).astype(np.int64)
    a = K.poly_values_numpy(cre, cim, zre, zim)
    b = K._poly_values_loop(cre, cim, zre, zim)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("seed", range(5))
def test_first_hit_numpy_matches_loop(seed):
    rng = rng_for(seed)
    N = 6
    table = rng.random((2 * N - 1, 2 * N - 1)) < 0.05
    xs = rng.integers(1, N + 1, size=8).astype(np.int64)
    ys = rng.integers(1, N + 1, size=8).astype(np.int64)
    i, j = K.first_hit_numpy(xs, ys, table, N - 1)
    assert (i, j) == K._first_hit_loop(xs, ys, table, N - 1)


@pytest.mark.parametrize("seed", range(8))
def test_mis_against_brute_force(seed):
    rng = rng_for(seed)
    adj = random_graph(rng, int(rng.integers(1, 13)), 0.3)
    size = brute_mis_size(adj)
    mask = K.mis_python(adj)
    assert bin(mask).count("1") == size
    assert all(not (mask >> v & 1) or not (adj[v] & mask) for v in range(len(adj)))
    loop = int(K._mis_loop(np.asarray(adj, dtype=np.int64)))
    assert loop == mask

# endregion

# region compiled kernels


@needs_numba
@pytest.mark.parametrize("seed", range(3))
def test_numba_matches_numpy(seed):
    rng = rng_for(seed)
    n = 7
    g1 = rng.integers(-50, 50, size=(n, n)).astype(np.int64)
    g2 = rng.integers(-50, 50, size=(n, n)).astype(np.int64)
    shifts = rng.integers(-n, n + 1, size=(30, 2)).astype(np.int64)
    assert np.array_equal(K.shift_sums_numba(g1, g2, shifts), K.shift_sums_numpy(g1, g2, shifts))
    cre = rng.integers(0, 13, size=3).astype(np.int64)
    cim = rng.integers(0, 13, size=3).astype(np.int64)
    zre = rng.integers(-20, 20, size=50).astype(np.int64)
    zim = rng.integers(-20, 20, size=50).astype(np.int64)
    assert np.array_equal(K.root_mask_numba(cre, cim, zre, zim, 13, 3, 2),
                          K.root_mask_numpy(cre, cim, zre, zim, 13, 3, 2))
    for a, b in zip(K.poly_values_numba(cre, cim, zre, zim), K.poly_values_numpy(cre, cim, zre, zim)):
        assert np.array_equal(a, b)
    adj = random_graph(rng, 20, 0.25)
    assert int(K.mis_numba(np.asarray(adj, dtype=np.int64))) == K.mis_python(adj)


def test_backend_name():
    assert K.backend() == ("numba" if K.HAVE_NUMBA else "numpy")


def test_disable_flag_selects_numpy():
    env = dict(os.environ, GAUSSFS_DISABLE_NUMBA="1")
    code = ("from gaussfs import _kernels as K; from gaussfs.boxlab import max_avoiding_density;"
            "from gaussfs.poly import parse_poly;"
            "r = max_avoiding_density(3, parse_poly('x^2'));"
            "print(K.backend(), len(r.subset))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out[0] == "numpy"
    from gaussfs.boxlab import max_avoiding_density
    from gaussfs.poly import parse_poly
    assert int(out[1]) == len(max_avoiding_density(3, parse_poly("x^2")).subset)

# endregion
