"""Integer inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin with the same signature.  Setting
``GAUSSFS_DISABLE_NUMBA=1`` (or running without numba installed) selects the
numpy path; both are exact on int64 inputs, and callers are responsible for
staying inside int64 range (see ``INT64_SAFE``).
"""

from __future__ import annotations

import os

import numpy as np

INT64_SAFE = 2**62

_DISABLED = os.environ.get("GAUSSFS_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return None


# region shifted product sums


def shift_sums_numpy(g1, g2, shifts):
    """out[k] = sum_{n in grid} g1[n] * g2[n + shifts[k]], g2 zero off-grid.

    Grids are indexed ``[im - 1, re - 1]`` over the box [N].
    """
    n = g1.shape[0]
    out = np.zeros(shifts.shape[0], dtype=np.int64)
    for k in range(shifts.shape[0]):
        sx, sy = int(shifts[k, 0]), int(shifts[k, 1])
        if abs(sx) >= n or abs(sy) >= n:
            continue
        # rows are im, columns are re
        a = g1[max(0, -sy):n - max(0, sy), max(0, -sx):n - max(0, sx)]
        b = g2[max(0, sy):n - max(0, -sy), max(0, sx):n - max(0, -sx)]
        out[k] = np.sum(a * b)
    return out


def _shift_sums_loop(g1, g2, shifts):
    n = g1.shape[0]
    out = np.zeros(shifts.shape[0], dtype=np.int64)
    for k in range(shifts.shape[0]):
        sx = shifts[k, 0]
        sy = shifts[k, 1]
        if sx >= n or sx <= -n or sy >= n or sy <= -n:
            continue
        acc = 0
        for r in range(n):
            r2 = r + sy
            if r2 < 0 or r2 >= n:
                continue
            for c in range(n):
                c2 = c + sx
                if c2 < 0 or c2 >= n:
                    continue
                acc += g1[r, c] * g2[r2, c2]
        out[k] = acc
    return out


shift_sums_numba = _njit(_shift_sums_loop)

# endregion

# region root masks


def root_mask_numpy(cre, cim, zre, zim, n, are, aim):
    """mask[k] = alpha | q(z_k), computed with Horner steps reduced mod n = N(alpha).

    Reduction modulo the rational integer n is a ring map Z[i] -> Z[i]/n,
    and alpha | n, so divisibility by alpha survives it.  Requires n^2 < 2^62.
    """
    hr = np.zeros_like(zre)
    hi = np.zeros_like(zre)
    zr = zre % n
    zi = zim % n
    for j in range(cre.shape[0] - 1, -1, -1):
        tr = (hr * zr - hi * zi) % n
        ti = (hr * zi + hi * zr) % n
        hr = (tr + cre[j]) % n
        hi = (ti + cim[j]) % n
    # alpha | h  <=>  h * conj(alpha) == 0 (mod n)
    wr = (hr * are + hi * aim) % n
    wi = (hi * are - hr * aim) % n
    return (wr == 0) & (wi == 0)


def _root_mask_loop(cre, cim, zre, zim, n, are, aim):
    m = zre.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    d = cre.shape[0]
    for k in range(m):
        zr = zre[k] % n
        zi = zim[k] % n
        hr = 0
        hi = 0
        for j in range(d - 1, -1, -1):
            tr = (hr * zr - hi * zi) % n
            ti = (hr * zi + hi * zr) % n
            hr = (tr + cre[j]) % n
            hi = (ti + cim[j]) % n
        wr = (hr * are + hi * aim) % n
        wi = (hi * are - hr * aim) % n
        out[k] = wr == 0 and wi == 0
    return out


root_mask_numba = _njit(_root_mask_loop)

# endregion

# region polynomial values on a grid


def poly_values_numpy(cre, cim, zre, zim):
    """Exact values q(z_k) as two int64 arrays; caller bounds the magnitude."""
    hr = np.zeros_like(zre)
    hi = np.zeros_like(zre)
    for j in range(cre.shape[0] - 1, -1, -1):
        hr, hi = hr * zre - hi * zim + cre[j], hr * zim + hi * zre + cim[j]
    return hr, hi


def _poly_values_loop(cre, cim, zre, zim):
    m = zre.shape[0]
    outr = np.zeros(m, dtype=np.int64)
    outi = np.zeros(m, dtype=np.int64)
    d = cre.shape[0]
    for k in range(m):
        hr = 0
        hi = 0
        for j in range(d - 1, -1, -1):
            tr = hr * zre[k] - hi * zim[k] + cre[j]
            hi = hr * zim[k] + hi * zre[k] + cim[j]
            hr = tr
        outr[k] = hr
        outi[k] = hi
    return outr, outi


poly_values_numba = _njit(_poly_values_loop)

# endregion

# region forbidden pairs


def first_hit_numpy(xs, ys, table, off):
    """First ordered pair (i, j), i != j, whose difference is flagged in ``table``.

    ``table[dx + off, dy + off]`` marks forbidden differences.  Returns
    ``(-1, -1)`` when none exists.  Pairs are scanned i-major.
    """
    dx = xs[:, None] - xs[None, :] + off
    dy = ys[:, None] - ys[None, :] + off
    size = table.shape[0]
    ok = (dx >= 0) & (dx < size) & (dy >= 0) & (dy < size)
    hit = np.zeros(dx.shape, dtype=bool)
    hit[ok] = table[dx[ok], dy[ok]]
    np.fill_diagonal(hit, False)
    idx = np.flatnonzero(hit)
    if idx.size == 0:
        return -1, -1
    k = int(idx[0])
    return k // xs.shape[0], k % xs.shape[0]


def _first_hit_loop(xs, ys, table, off):
    m = xs.shape[0]
    size = table.shape[0]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            dx = xs[i] - xs[j] + off
            dy = ys[i] - ys[j] + off
            if 0 <= dx < size and 0 <= dy < size and table[dx, dy]:
                return i, j
    return -1, -1


first_hit_numba = _njit(_first_hit_loop)

# endregion

# region maximum independent set


def mis_python(adj):
    """Maximum independent set of a graph on <= 63 vertices given as bitmasks.

    Branch and bound on the lowest remaining vertex (include first, then
    exclude); returns the first maximum found, as a bitmask.
    """
    n = len(adj)
    adj = [int(a) for a in adj]
    best = [0, 0]

    def popcount(x):
        return bin(x).count("1")

    def rec(cand, chosen, size):
        if cand == 0:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + popcount(cand) <= best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & ~adj[v] & ~(1 << v), chosen | (1 << v), size + 1)
        rec(cand & ~(1 << v), chosen, size)

    rec((1 << n) - 1 if n else 0, 0, 0)
    return best[1]


def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _mis_loop(adj):
    n = adj.shape[0]
    # explicit stack of (cand, chosen, size, stage)
    cap = 2 * n + 4
    s_cand = np.zeros(cap, dtype=np.int64)
    s_chosen = np.zeros(cap, dtype=np.int64)
    s_size = np.zeros(cap, dtype=np.int64)
    best_size = 0
    best = np.int64(0)
    full = np.int64(0)
    for v in range(n):
        full |= np.int64(1) << np.int64(v)
    top = 0
    s_cand[0] = full
    s_chosen[0] = 0
    s_size[0] = 0
    top = 1
    while top > 0:
        top -= 1
        cand = s_cand[top]
        chosen = s_chosen[top]
        size = s_size[top]
        if cand == 0:
            if size > best_size:
                best_size = size
                best = chosen
            continue
        if size + _popcount(cand) <= best_size:
            continue
        low = cand & -cand
        v = 0
        while (np.int64(1) << np.int64(v)) != low:
            v += 1
        # push exclude first so include is explored first
        s_cand[top] = cand & ~low
        s_chosen[top] = chosen
        s_size[top] = size
        top += 1
        s_cand[top] = cand & ~adj[v] & ~low
        s_chosen[top] = chosen | low
        s_size[top] = size + 1
        top += 1
    return best


if HAVE_NUMBA:
    _popcount = numba.njit(cache=True)(_popcount)
mis_numba = _njit(_mis_loop)

# endregion


def shift_sums(g1, g2, shifts):
    if HAVE_NUMBA:
        return shift_sums_numba(g1, g2, shifts)
    return shift_sums_numpy(g1, g2, shifts)


def root_mask(cre, cim, zre, zim, n, are, aim):
    if HAVE_NUMBA:
        return root_mask_numba(cre, cim, zre, zim, n, are, aim)
    return root_mask_numpy(cre, cim, zre, zim, n, are, aim)


def poly_values(cre, cim, zre, zim):
    if HAVE_NUMBA:
        return poly_values_numba(cre, cim, zre, zim)
    return poly_values_numpy(cre, cim, zre, zim)


def first_hit(xs, ys, table, off):
    if HAVE_NUMBA:
        i, j = first_hit_numba(xs, ys, table, off)
        return int(i), int(j)
    return first_hit_numpy(xs, ys, table, off)


def max_independent_mask(adj_masks) -> int:
    if HAVE_NUMBA and len(adj_masks) <= 62:
        return int(mis_numba(np.asarray(adj_masks, dtype=np.int64)))
    return mis_python(adj_masks)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
