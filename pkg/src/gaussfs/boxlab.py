"""Exact set-level experiments on boxes [N] of Gaussian integers.

Expectations are returned as ``Fraction``.  Sums run over integer grids:
the balanced function f = 1_A - delta 1_[N] is scaled by N^2 so that every
summand is an integer, and the scale is divided out once at the end.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .gaussian import (
    GaussianInt,
    IntLike,
    ShiftedBox,
    enumerate_box,
    padded_box,
    inner_box,
    residue_square_quotient,
    residue_square_reduce,
)
from .poly import GIPolynomial, ceil_sqrt, degree_lower_diff, mp_squared


def integer_root_floor(n: int, k: int) -> int:
    """floor(n^(1/k)) for integers n >= 0, k >= 1, by integer Newton iteration."""
    if k < 1:
        raise ValueError("root index must be positive")
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)  # x^k > n
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


# region subsets


@dataclass(frozen=True)
class BoxSubset:
    """A subset of [N], members kept in row-major order."""

    N: int
    members: tuple = ()

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        ms = sorted({GaussianInt.coerce(z) for z in self.members}, key=lambda z: (z.im, z.re))
        for z in ms:
            if not (1 <= z.re <= self.N and 1 <= z.im <= self.N):
                raise ValueError(f"{z} is outside [{self.N}]")
        object.__setattr__(self, "members", tuple(ms))

    @classmethod
    def from_mask(cls, N: int, mask: int) -> "BoxSubset":
        pts = list(enumerate_box(N))
        return cls(N, tuple(pts[k] for k in range(N * N) if mask >> k & 1))

    @classmethod
    def full(cls, N: int) -> "BoxSubset":
        return cls(N, tuple(enumerate_box(N)))

    def __len__(self):
        return len(self.members)

    def __contains__(self, z) -> bool:
        return GaussianInt.coerce(z) in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cache_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cache_set", s)
        return s

    @property
    def delta(self) -> Fraction:
        return Fraction(len(self.members), self.N * self.N)

    def indicator_grid(self) -> np.ndarray:
        g = np.zeros((self.N, self.N), dtype=np.int64)
        for z in self.members:
            g[z.im - 1, z.re - 1] = 1
        return g

    def scaled_balanced_grid(self) -> np.ndarray:
        """N^2 f on [N]: N^2 1_A - |A|."""
        return self.indicator_grid() * (self.N * self.N) - len(self.members)

    def f(self, z: IntLike) -> Fraction:
        """The balanced function, zero outside [N]."""
        z = GaussianInt.coerce(z)
        if not (1 <= z.re <= self.N and 1 <= z.im <= self.N):
            return Fraction(0)
        return (1 if z in self._set else 0) - self.delta

    def to_json(self) -> dict:
        return {"N": self.N, "members": [z.to_json() for z in self.members],
                "size": len(self.members), "delta": rational_json(self.delta)}


def rational_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def balanced_moments(A: BoxSubset) -> tuple[Fraction, Fraction]:
    """(E f, E f^2) over [N], summed exactly."""
    N2 = A.N * A.N
    vals = [A.f(z) for z in enumerate_box(A.N)]
    return sum(vals, Fraction(0)) / N2, sum((v * v for v in vals), Fraction(0)) / N2


def balanced_laws(A: BoxSubset) -> dict:
    """The 1-bounded, mean-zero and second-moment laws of f, checked exactly."""
    mean, second = balanced_moments(A)
    d = A.delta
    vals = {A.f(z) for z in enumerate_box(A.N)}
    return {
        "bounded": all(abs(v) <= 1 for v in vals),
        "mean_zero": mean == 0,
        "second_moment": second == d - d * d,
        "second_moment_le_delta": second <= d,
    }

# endregion

# region correlations


@dataclass(frozen=True)
class CorrelationSpec:
    """E_x E_h over x in D and h in [hside]^j of shifts p(x + h_1 + ... + h_j)."""

    p: GIPolynomial
    D: tuple
    hside: int
    j: int

    def __post_init__(self):
        if not self.D:
            raise ValueError("D must be nonempty")
        if self.hside < 1:
            raise ValueError("h-range side must be at least 1")
        if self.j < 0:
            raise ValueError("tuple length must be nonnegative")
        object.__setattr__(self, "D", tuple(GaussianInt.coerce(z) for z in self.D))

    @property
    def weight(self) -> int:
        """Number of (x, h) tuples: |D| * hside^(2j)."""
        return len(self.D) * self.hside ** (2 * self.j)

    def h_sums(self) -> Counter:
        """Distribution of h_1 + ... + h_j over [hside]^j (j = 0 gives {0: 1})."""
        dist = Counter({GaussianInt(0, 0): 1})
        box = list(enumerate_box(self.hside))
        for _ in range(self.j):
            nxt = Counter()
            for s, c in dist.items():
                for h in box:
                    nxt[s + h] += c
            dist = nxt
        return dist

    def shift_counts(self) -> Counter:
        """Multiset of p(sigma_j(x, h)) over all (x, h)."""
        out = Counter()
        hs = self.h_sums()
        for x in self.D:
            for s, c in hs.items():
                out[self.p.eval(x + s)] += c
        return out


def _pair_sum(g1: np.ndarray, g2: np.ndarray, counts: Counter) -> int:
    """sum over shifts s (with multiplicity) of sum_n g1[n] g2[n + s]."""
    n = g1.shape[0]
    items = [(s, c) for s, c in counts.items() if abs(s.re) < n and abs(s.im) < n]
    if not items:
        return 0
    shifts = np.array([[s.re, s.im] for s, _ in items], dtype=np.int64)
    sums = _kernels.shift_sums(g1, g2, shifts)
    return sum(int(v) * c for v, (_, c) in zip(sums, items))


def correlation(A: BoxSubset, spec: CorrelationSpec) -> Fraction:
    """E_n E_x E_h f(n) f(n + p(sigma_j(x, h))), n over [N]."""
    F = A.scaled_balanced_grid()
    N2 = A.N * A.N
    total = _pair_sum(F, F, spec.shift_counts())
    return Fraction(total, N2 * N2 * N2 * spec.weight)


def indicator_correlation(A: BoxSubset, spec: CorrelationSpec) -> Fraction:
    """E_n E_x E_h 1_A(n) 1_A(n + p(sigma_j(x, h)))."""
    G = A.indicator_grid()
    total = _pair_sum(G, G, spec.shift_counts())
    return Fraction(total, A.N * A.N * spec.weight)


def expansion_terms(A: BoxSubset, spec: CorrelationSpec) -> dict:
    """The correlation of f and the four expectations of its expansion."""
    G = A.indicator_grid()
    B = np.ones_like(G)
    counts = spec.shift_counts()
    den = A.N * A.N * spec.weight
    return {
        "correlation": correlation(A, spec),
        "AA": Fraction(_pair_sum(G, G, counts), den),
        "AB": Fraction(_pair_sum(G, B, counts), den),
        "BA": Fraction(_pair_sum(B, G, counts), den),
        "BB": Fraction(_pair_sum(B, B, counts), den),
    }


def expansion_identity_check(A: BoxSubset, spec: CorrelationSpec) -> bool:
    """corr(f) == E[1_A 1_A'] - d E[1_A 1_B'] - d E[1_B 1_A'] + d^2 E[1_B 1_B']."""
    t = expansion_terms(A, spec)
    d = A.delta
    return t["correlation"] == t["AA"] - d * t["AB"] - d * t["BA"] + d * d * t["BB"]

# endregion

# region forbidden differences


def _z_order(z: GaussianInt):
    canonical = z.re > 0 and z.im >= 0
    return (z.norm(), 0 if canonical else 1, z.im, z.re)


def value_search_radius(poly: GIPolynomial, max_norm: int) -> int:
    """R with N(poly(z)) > max_norm whenever max(|Re z|, |Im z|) > R.

    For |z| >= 2, |poly(z)| >= |z|^d (|a_d| - B/(|z|-1)) with B the largest
    lower coefficient modulus, so |z| >= 1 + 2B gives |poly(z)| >= |z|^d/2,
    which exceeds sqrt(max_norm) once |z|^(2d) > 4 max_norm.
    """
    if poly.is_zero() or poly.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    d = poly.degree
    lower = max((c.norm() for c in poly.coeffs[:-1]), default=0)
    return max(2, 1 + 2 * ceil_sqrt(lower), integer_root_floor(4 * max_norm, 2 * d) + 1)


def forbidden_values(poly: GIPolynomial, max_norm: int, radius: Optional[int] = None) -> dict:
    """{v: z} for every nonzero value v = poly(z) with N(v) <= max_norm.

    ``z`` is the first preimage in the order (norm, canonical first, im, re).
    """
    R = value_search_radius(poly, max_norm) if radius is None else radius
    side = np.arange(-R, R + 1, dtype=np.int64)
    zim, zre = np.meshgrid(side, side, indexing="ij")
    zre, zim = zre.ravel(), zim.ravel()
    mags = [ceil_sqrt(c.norm()) for c in poly.coeffs]
    bound = sum(m * (2 * R) ** j for j, m in enumerate(mags))
    if bound < 2**61:
        cre = np.array([c.re for c in poly.coeffs], dtype=np.int64)
        cim = np.array([c.im for c in poly.coeffs], dtype=np.int64)
        vr, vi = _kernels.poly_values(cre, cim, zre, zim)
        keep = (vr * vr + vi * vi <= max_norm) & ((vr != 0) | (vi != 0))
        hits = [(GaussianInt(int(a), int(b)), GaussianInt(int(x), int(y)))
                for a, b, x, y in zip(zre[keep], zim[keep], vr[keep], vi[keep])]
    else:
        hits = []
        for a, b in zip(zre.tolist(), zim.tolist()):
            z = GaussianInt(a, b)
            v = poly.eval(z)
            if not v.is_zero() and v.norm() <= max_norm:
                hits.append((z, v))
    out = {}
    for z, v in sorted(hits, key=lambda t: _z_order(t[0])):
        out.setdefault(v, z)
    return out


@dataclass(frozen=True)
class AvoidanceResult:
    avoids: bool
    witness: Optional[tuple] = None  # (a, a', z) with a - a' = q(z)

    def to_json(self) -> dict:
        out = {"avoids": self.avoids}
        if self.witness is not None:
            a, a2, z = self.witness
            out["witness"] = {"a": a.to_json(), "a_prime": a2.to_json(), "z": z.to_json()}
        return out


def find_forbidden_pair(points: Sequence[GaussianInt], poly: GIPolynomial,
                        radius: Optional[int] = None) -> AvoidanceResult:
    """Look for a != a' in ``points`` with a - a' a nonzero value of ``poly``."""
    pts = list(points)
    if len(pts) < 2:
        return AvoidanceResult(True)
    xs = np.array([p.re for p in pts], dtype=np.int64)
    ys = np.array([p.im for p in pts], dtype=np.int64)
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    max_norm = int((dx * dx + dy * dy).max())
    values = forbidden_values(poly, max_norm, radius)
    if not values:
        return AvoidanceResult(True)
    diffs = {}
    for i, j in zip(*np.nonzero((dx != 0) | (dy != 0))):
        key = GaussianInt(int(dx[i, j]), int(dy[i, j]))
        diffs.setdefault(key, (int(i), int(j)))
    for v, z in sorted(values.items(), key=lambda t: _z_order(t[1])):
        if v in diffs:
            i, j = diffs[v]
            return AvoidanceResult(False, (pts[i], pts[j], z))
    return AvoidanceResult(True)


def avoidance_check(A: BoxSubset, q: GIPolynomial) -> AvoidanceResult:
    """Whether (A - A) misses I(q) = q(Z[i]) minus 0, with a witness if not."""
    if q.is_zero() or q.degree < 1:
        raise ValueError("avoidance needs a nonconstant polynomial")
    return find_forbidden_pair(A.members, q)


def difference_table(q: GIPolynomial, N: int) -> np.ndarray:
    """T[dx + N - 1, dy + N - 1] = True iff +-(dx + dy i) lies in I(q)."""
    size = 2 * N - 1
    table = np.zeros((size, size), dtype=bool)
    if N == 1:
        return table
    for v in forbidden_values(q, 2 * (N - 1) ** 2):
        if abs(v.re) < N and abs(v.im) < N:
            table[v.re + N - 1, v.im + N - 1] = True
            table[-v.re + N - 1, -v.im + N - 1] = True
    return table


def is_avoiding(points: Sequence[GaussianInt], table: np.ndarray, N: int) -> bool:
    """Fast test against a precomputed difference table (points inside [N])."""
    if len(points) < 2:
        return True
    xs = np.array([p.re for p in points], dtype=np.int64)
    ys = np.array([p.im for p in points], dtype=np.int64)
    i, _ = _kernels.first_hit(xs, ys, table, N - 1)
    return i < 0

# endregion

# region extremal sets


@dataclass(frozen=True)
class ExtremalResult:
    subset: BoxSubset
    mode: str
    edges: int
    heuristic: bool

    def to_json(self) -> dict:
        return {"mode": self.mode, "heuristic": self.heuristic, "edges": self.edges,
                "set": self.subset.to_json()}


def difference_graph(N: int, q: GIPolynomial) -> list[int]:
    """Adjacency bitmasks on [N] (row-major vertex order)."""
    table = difference_table(q, N)
    pts = list(enumerate_box(N))
    xs = np.array([p.re for p in pts], dtype=np.int64)
    ys = np.array([p.im for p in pts], dtype=np.int64)
    adj_mat = table[xs[:, None] - xs[None, :] + N - 1, ys[:, None] - ys[None, :] + N - 1]
    np.fill_diagonal(adj_mat, False)
    masks = []
    for row in adj_mat:
        m = 0
        for k in np.flatnonzero(row):
            m |= 1 << int(k)
        masks.append(m)
    return masks


def max_avoiding_density(N: int, q: GIPolynomial, mode: str = "exact",
                         exact_limit: int = 4) -> ExtremalResult:
    """Largest q-avoiding subset of [N] (exact) or a maximal one (greedy)."""
    if N < 1:
        raise ValueError("N must be positive")
    adj = difference_graph(N, q)
    edges = sum(bin(m).count("1") for m in adj) // 2
    if mode == "exact":
        if N > exact_limit:
            raise ValueError(f"exact search limited to N <= {exact_limit}")
        mask = _kernels.max_independent_mask(adj)
        return ExtremalResult(BoxSubset.from_mask(N, mask), mode, edges, False)
    if mode == "greedy":
        chosen = 0
        blocked = 0
        for v in range(N * N):
            if not blocked >> v & 1:
                chosen |= 1 << v
                blocked |= adj[v] | (1 << v)
        return ExtremalResult(BoxSubset.from_mask(N, chosen), mode, edges, True)
    raise ValueError(f"unknown mode {mode!r}")

# endregion

# region domains, boxes and lattices


def dp_domain(N: int, p: GIPolynomial) -> ShiftedBox:
    """[floor(N^(1/2d))] + c(1+i) with c = ceil(M_p): p has no zero on it."""
    if N < 1:
        raise ValueError("N must be positive")
    if p.is_zero() or p.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    side = integer_root_floor(N, 2 * p.degree)
    c = ceil_sqrt(mp_squared(p))
    box = ShiftedBox(side, GaussianInt(c, c))
    mp2 = mp_squared(p)
    for z in box:
        if z.norm() <= mp2 or p.eval(z).is_zero():
            raise AssertionError(f"{z} is inside the Cauchy disc or a root")
    return box


_PAD_KINDS = ("T", "U", "V", "W")


def padding_box(kind: str, N: int, p: GIPolynomial, r: int = 4) -> ShiftedBox:
    """The padded boxes T_N, U_N, V_N and the inner box W_N, with integer pads.

    Each pad is the ceiling of K * M_p * floor(N^e) for the constant K and
    exponent e of that box, so the box is symmetric about [N] and contains
    [N] + c for every c with |Re c|, |Im c| <= pad (W_N shrinks instead).
    """
    d = p.degree
    mp2 = mp_squared(p)
    if kind == "T":
        K, s = 2 ** (d + 1) * (d + 1) ** (d + 1), integer_root_floor(N, 2)
    elif kind == "U":
        K, s = 2 ** (d * (2 * d + 1) + 1), integer_root_floor(N, 8 * d ** (r - 2))
    elif kind in ("V", "W"):
        K, s = 2 ** (d * (2 * d + 1) + 3), integer_root_floor(N ** 3, 4)
    else:
        raise ValueError(f"kind must be one of {_PAD_KINDS}")
    pad = ceil_sqrt(K * K * s * s * mp2)
    return inner_box(N, pad) if kind == "W" else padded_box(N, pad)


@dataclass
class LatticePartition:
    M: int
    xi: GaussianInt
    m: int
    cells: list = field(default_factory=list)  # base points u, cell = u + xi [m]
    error: list = field(default_factory=list)

    def cell_points(self, u: GaussianInt) -> list[GaussianInt]:
        return [u + self.xi * x for x in enumerate_box(self.m)]

    def to_json(self) -> dict:
        return {"M": self.M, "xi": self.xi.to_json(), "m": self.m,
                "cells": [u.to_json() for u in self.cells],
                "error": [z.to_json() for z in self.error]}


def lattice_partition(M: int, xi: IntLike, m: int) -> LatticePartition:
    """Split [M] into cells u + xi[m] and an error set.

    Z[i] is tiled by Q_v = S_(m xi) + v m xi.  Each Q_v lying inside [M] is
    cut into the N(xi) cells {u0 - xi(1+i) + v m xi + xi x : x in [m]},
    u0 in S_xi; points of [M] in the remaining Q_v form the error set.
    """
    xi = GaussianInt.coerce(xi)
    if xi.is_zero():
        raise ValueError("xi must be nonzero")
    if M < 1 or m < 1:
        raise ValueError("M and m must be positive")
    big = xi * m
    full = big.norm()
    tiles: dict = {}
    for z in enumerate_box(M):
        tiles.setdefault(residue_square_quotient(z, big), []).append(z)
    base = xi * GaussianInt(1, 1)
    cells, error = [], []
    for v, pts in tiles.items():
        if len(pts) < full:
            error.extend(pts)
            continue
        offset = big * v
        seen = {}
        for z in pts:
            w = z - offset
            u = residue_square_reduce(w, xi) - base + offset
            seen.setdefault(u, None)
        cells.extend(seen)
    cells.sort(key=lambda u: _first_point_key(u, xi))
    error.sort(key=lambda z: (z.im, z.re))
    return LatticePartition(M, xi, m, cells, error)


def _first_point_key(u, xi):
    z = u + xi * GaussianInt(1, 1)
    return (z.im, z.re)


def partition_checks(part: LatticePartition) -> dict:
    """Disjointness, exact cover, cell shape and the squared error bound."""
    counts = Counter()
    inside = True
    for u in part.cells:
        for z in part.cell_points(u):
            counts[z] += 1
            if not (1 <= z.re <= part.M and 1 <= z.im <= part.M):
                inside = False
    for z in part.error:
        counts[z] += 1
    box = Counter(enumerate_box(part.M))
    e = len(part.error)
    return {
        "disjoint": all(c == 1 for c in counts.values()),
        "exact_cover": counts == box,
        "cells_inside": inside,
        "error_bound": e * e <= 256 * part.M ** 2 * part.m ** 2 * part.xi.norm(),
    }


def density_on_lattice(A: BoxSubset, n: IntLike, gamma: IntLike, m: int) -> Fraction:
    """|A cap (n + gamma [m])| / m^2."""
    n, gamma = GaussianInt.coerce(n), GaussianInt.coerce(gamma)
    if gamma.is_zero():
        raise ValueError("gamma must be nonzero")
    if m < 1:
        raise ValueError("m must be positive")
    hits = sum(1 for x in enumerate_box(m) if (n + gamma * x) in A)
    return Fraction(hits, m * m)


def lattices_in_box(N: int, m: int):
    """Every (n, gamma), gamma != 0, with n + gamma[m] inside [N]."""
    corners = [GaussianInt(1, 1), GaussianInt(m, 1), GaussianInt(1, m), GaussianInt(m, m)]
    for gr, gi in product(range(-N, N + 1), repeat=2):
        gamma = GaussianInt(gr, gi)
        if gamma.is_zero():
            continue
        offs = [gamma * c for c in corners]
        lo_re = 1 - min(o.re for o in offs)
        hi_re = N - max(o.re for o in offs)
        lo_im = 1 - min(o.im for o in offs)
        hi_im = N - max(o.im for o in offs)
        for b in range(lo_im, hi_im + 1):
            for a in range(lo_re, hi_re + 1):
                yield GaussianInt(a, b), gamma


def best_lattice(A: BoxSubset, m: int) -> tuple[Fraction, GaussianInt, GaussianInt]:
    """Densest lattice n + gamma[m] inside [N]; first in scan order on ties."""
    best = None
    for n, gamma in lattices_in_box(A.N, m):
        d = density_on_lattice(A, n, gamma, m)
        if best is None or d > best[0]:
            best = (d, n, gamma)
    if best is None:
        raise ValueError("no lattice of this size fits in the box")
    return best

# endregion

# region degree lowering


@dataclass(frozen=True)
class DegreeLoweringResult:
    p_prime: GIPolynomial
    k: GaussianInt
    k_prime: GaussianInt
    value: Fraction
    step: int
    j: int

    def to_json(self) -> dict:
        return {"p_prime": self.p_prime.to_json(), "k": self.k.to_json(),
                "k_prime": self.k_prime.to_json(), "correlation": rational_json(self.value),
                "step": self.step, "tuple_length": self.j}


def degree_lowering_step(A: BoxSubset, p: GIPolynomial, D: Iterable[IntLike],
                         h_side: int, m: int = 1) -> DegreeLoweringResult:
    """Scan k != k' in [h_side] for the p' = p(. + k') - p(. + k) of largest |correlation|.

    The correlation of p' uses tuple length deg p' - 1 (0 once p' is
    constant or linear); ``m`` is the step index and is only recorded.
    Ties go to the first pair in enumeration order.
    """
    if h_side < 1:
        raise ValueError("empty h-box")
    D = tuple(GaussianInt.coerce(z) for z in D)
    box = list(enumerate_box(h_side))
    if len(box) < 2:
        raise ValueError("need at least two shifts in the h-box")
    best = None
    for k in box:
        for k2 in box:
            if k == k2:
                continue
            pp = degree_lower_diff(p, k, k2)
            j = max(pp.degree - 1, 0)
            val = correlation(A, CorrelationSpec(pp, D, h_side, j))
            if best is None or abs(val) > abs(best.value):
                best = DegreeLoweringResult(pp, k, k2, val, m, j)
    return best

# endregion
