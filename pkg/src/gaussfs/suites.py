"""Seeded verification suites driven by ``gaussfs sweep``.

Each suite maps a case index to one JSON-ready record carrying a boolean
``pass``.  Every case draws from its own ``random.Random`` seeded with the
string ``"<seed>:<suite>:<index>"``, so a record depends only on
(seed, suite, index) and never on scheduling or on how many cases run.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Optional

from . import thresholds as th
from .boxlab import (
    BoxSubset,
    CorrelationSpec,
    avoidance_check,
    balanced_laws,
    dp_domain,
    expansion_terms,
    indicator_correlation,
    is_avoiding,
    difference_table,
    lattice_partition,
    max_avoiding_density,
    partition_checks,
    rational_json,
)
from .gaussian import GaussianInt, enumerate_box
from .intersective import (
    INTERSECTIVE,
    NOT_INTERSECTIVE,
    build_q_a,
    decide_intersective,
    has_root_mod,
    lucier_transfer_report,
    root_existence_sweep,
)
from .poly import GIPolynomial, ceil_sqrt, degree_lower_diff, mp_squared, parse_poly

X2 = GIPolynomial([0, 0, 1])

CORPUS = (
    "x^2", "x^2+1", "x^2+x+1", "x", "x-1", "x^3", "x^2-1",
    "(x^2-2)*(x^2-3)*(x^2-6)", "(x^2-13)*(x^2-17)*(x^2-221)", "x^2+2", "x^2-2", "x^2-i",
    "2*x+1", "x*(x-(1+i))", "x^2*(x-3)", "(x-i)*(x+2)", "x^2+x", "x^3-x", "x^4+1",
    "(x^2+1)*(x^2+2)", "x^2-3", "(2+i)*x-1", "x^3+x+1", "x^2-2*i", "(x-1)^2*(x+i)",
    "x^4+4", "3*x^2+3", "x^3-2", "(x^2-5)*(x^2+1)", "(x^2-3)*(x^2-5)*(x^2-15)",
)

AUX_ALPHAS = (GaussianInt(2), GaussianInt(1, 1), GaussianInt(3), GaussianInt(2, 1))

SWEEP_NORM = 1000


def case_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def random_gaussian(rng: random.Random, max_norm: int) -> GaussianInt:
    r = ceil_sqrt(max_norm)
    while True:
        z = GaussianInt(rng.randint(-r, r), rng.randint(-r, r))
        if z.norm() <= max_norm:
            return z


def random_poly(rng: random.Random, degree: int, max_norm: int) -> GIPolynomial:
    coeffs = [random_gaussian(rng, max_norm) for _ in range(degree)]
    lead = GaussianInt(0)
    while lead.is_zero():
        lead = random_gaussian(rng, max_norm)
    return GIPolynomial(coeffs + [lead])


def random_subset(rng: random.Random, N: int) -> BoxSubset:
    p = rng.random()
    return BoxSubset(N, tuple(z for z in enumerate_box(N) if rng.random() < p))


def _gjson(z: GaussianInt) -> list:
    return z.to_json()


# region suites


def balanced_function_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "balanced-function", i)
    A = random_subset(rng, rng.randint(1, 8))
    laws = balanced_laws(A)
    return {"N": A.N, "size": len(A), "delta": rational_json(A.delta), "laws": laws,
            "pass": all(laws.values())}


def expansion_identity_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "expansion-identity", i)
    N = rng.randint(1, 4)
    A = random_subset(rng, N)
    p = random_poly(rng, 2, 4)
    D = tuple(random_gaussian(rng, 8) for _ in range(rng.randint(1, 3)))
    spec = CorrelationSpec(p, D, rng.randint(1, 2), rng.randint(0, 1))
    t = expansion_terms(A, spec)
    d = A.delta
    rhs = t["AA"] - d * t["AB"] - d * t["BA"] + d * d * t["BB"]
    return {"N": N, "set": [_gjson(z) for z in A.members], "p": p.to_json(),
            "D": [_gjson(z) for z in spec.D], "hside": spec.hside, "j": spec.j,
            "correlation": rational_json(t["correlation"]), "expansion": rational_json(rhs),
            "pass": t["correlation"] == rhs}


def _avoiding_subsets() -> list[BoxSubset]:
    out = []
    for N in (2, 3):
        table = difference_table(X2, N)
        pts = list(enumerate_box(N))
        for mask in range(1 << (N * N)):
            chosen = [pts[k] for k in range(N * N) if mask >> k & 1]
            if is_avoiding(chosen, table, N):
                out.append(BoxSubset(N, tuple(chosen)))
    return out


_AVOIDING: Optional[list] = None


def avoidance_zero_case(seed: int, i: int) -> dict:
    global _AVOIDING
    if _AVOIDING is None:
        _AVOIDING = _avoiding_subsets()
    A = _AVOIDING[i % len(_AVOIDING)]
    precondition = avoidance_check(A, X2).avoids
    D = tuple(dp_domain(A.N, X2))
    hside = 1 + i // len(_AVOIDING) % 2
    value = indicator_correlation(A, CorrelationSpec(X2, D, hside, 1))
    return {"N": A.N, "set": [_gjson(z) for z in A.members], "hside": hside,
            "avoids": precondition, "indicator_correlation": rational_json(value),
            "pass": precondition and value == 0}


def _brute_max(N: int, q: GIPolynomial) -> int:
    pts = list(enumerate_box(N))
    table = difference_table(q, N)
    for size in range(len(pts), 0, -1):
        for combo in combinations(pts, size):
            if is_avoiding(list(combo), table, N):
                return size
    return 0


def extremal_case(seed: int, i: int) -> dict:
    if i == 0:
        N, q = 2, X2
    else:
        rng = case_rng(seed, "extremal", i)
        N, q = rng.randint(1, 3), random_poly(rng, rng.randint(1, 2), 4)
    res = max_avoiding_density(N, q, "exact")
    oracle = _brute_max(N, q)
    ok = len(res.subset) == oracle and avoidance_check(res.subset, q).avoids
    return {"N": N, "q": q.to_json(), "size": len(res.subset),
            "density": rational_json(res.subset.delta), "oracle_size": oracle, "pass": ok}


def intersective_corpus_case(seed: int, i: int) -> dict:
    text = CORPUS[i % len(CORPUS)]
    q = parse_poly(text)
    v = decide_intersective(q)
    rec = {"poly": text, "verdict": v.verdict}
    if v.verdict == INTERSECTIVE:
        bad = root_existence_sweep(q, SWEEP_NORM)
        rec["sweep_norm"] = SWEEP_NORM
        rec["rootless_ideal"] = None if bad is None else _gjson(bad)
        rec["pass"] = bad is None
    elif v.verdict == NOT_INTERSECTIVE:
        m = v.counterexample
        rec["modulus"] = _gjson(m)
        rec["modulus_norm"] = m.norm()
        rec["pass"] = not has_root_mod(q, m)
    else:
        rec["pass"] = True
    return rec


def auxiliary_case(seed: int, i: int) -> dict:
    if i < len(AUX_ALPHAS):
        q, alpha = X2, AUX_ALPHAS[i]
    else:
        rng = case_rng(seed, "auxiliary", i)
        pool = [s for s in CORPUS if decide_intersective(parse_poly(s)).verdict == INTERSECTIVE]
        q = parse_poly(rng.choice(pool))
        alpha = GaussianInt(0)
        while alpha.norm() < 2:
            alpha = random_gaussian(rng, 50)
    cons = build_q_a(q, alpha)
    rec = cons.to_json()
    rec["degree_kept"] = cons.q_a.degree == q.degree
    rec["pass"] = all(rec["checks"].values()) and rec["degree_kept"]
    if q == X2 and alpha == GaussianInt(2):
        closed = GIPolynomial([GaussianInt(0, 2), GaussianInt(2, 2), 1])  # (x + 1 + i)^2
        rec["closed_form"] = cons.q_a == closed
        rec["pass"] = rec["pass"] and rec["closed_form"]
    return rec


def _random_avoiding(rng: random.Random, N: int, q: GIPolynomial) -> BoxSubset:
    table = difference_table(q, N)
    pts = list(enumerate_box(N))
    rng.shuffle(pts)
    chosen: list = []
    for z in pts:
        if is_avoiding(chosen + [z], table, N):
            chosen.append(z)
    return BoxSubset(N, tuple(chosen))


def lucier_transfer_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "lucier-transfer", i)
    A = _random_avoiding(rng, 4, X2)
    alpha = rng.choice(AUX_ALPHAS)
    gamma = build_q_a(X2, alpha).gamma
    # anchor n on a member so that A' is nonempty
    n = rng.choice(A.members) - gamma * random_gaussian(rng, 2)
    rep = lucier_transfer_report(A, X2, alpha, gamma, n)
    return {"set": [_gjson(z) for z in A.members], "alpha": _gjson(alpha),
            "gamma": _gjson(gamma), "n": _gjson(n), "q_a": rep["q_a"].to_json(),
            "precondition": rep["precondition"], "transferred_size": rep["transferred_size"],
            "witness": rep["witness"], "pass": rep["precondition"] and rep["holds"]}


def degree_lowering_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "degree-lowering", i)
    p = random_poly(rng, rng.randint(1, 4), 100)
    k = random_gaussian(rng, 100)
    k2 = k
    while k2 == k:
        k2 = random_gaussian(rng, 100)
    sigma = random_gaussian(rng, 10**4)
    pp = degree_lower_diff(p, k, k2)
    ident = p.eval(sigma + k2) - p.eval(sigma + k) == pp.eval(sigma)
    drop = pp.degree == p.degree - 1
    return {"p": p.to_json(), "k": _gjson(k), "k_prime": _gjson(k2), "sigma": _gjson(sigma),
            "p_prime": pp.to_json(), "identity": ident, "degree_drop": drop,
            "pass": ident and drop}


def _partition_grid() -> list[tuple[int, GaussianInt, int]]:
    xis = sorted((GaussianInt(a, b) for a in range(-2, 3) for b in range(-2, 3)
                  if 0 < a * a + b * b <= 8), key=lambda z: (z.norm(), z.im, z.re))
    return [(M, xi, m) for M in range(1, 13) for xi in xis for m in range(1, 4)]


_GRID = _partition_grid()


def partition_case(seed: int, i: int) -> dict:
    M, xi, m = _GRID[i % len(_GRID)]
    part = lattice_partition(M, xi, m)
    checks = partition_checks(part)
    return {"M": M, "xi": _gjson(xi), "m": m, "cells": len(part.cells),
            "error_size": len(part.error), "checks": checks, "pass": all(checks.values())}


def thresholds_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "thresholds", i)
    d = rng.choice((2, 2, 3))
    # t grows like 1/(c delta^(C-1)); keep degree 3 at delta > 1/3 for desk runtimes
    den = rng.randint(3, 40) if d == 2 else rng.randint(4, 12)
    start = 1 if d == 2 else den // 3 + 1
    a, b = sorted(rng.sample(range(start, den), 2))
    lo, hi = Fraction(a, den), Fraction(b, den)
    r = rng.randint(4, 6)
    mp2 = 4 * rng.randint(1, 25)
    c, C, eps = th.increment_constants(d)
    consts = (c == Fraction(1, 2 ** (3 * 2 ** (d - 1) + 3)) and C == 2 ** (d - 1) + 1
              and eps == Fraction(1, C))
    mono = th.n_r(d, r, hi, mp2).le(th.n_r(d, r, lo, mp2))
    steps = th.increment_steps(d, hi)
    cert = steps.upper_before <= 1 < steps.lower_at
    return {"d": d, "r": r, "mp2": mp2, "delta": rational_json(hi), "delta_prime": rational_json(lo),
            "constants": consts, "monotone": mono, "t": steps.t, "t_certified": cert,
            "pass": consts and mono is True and cert}


def cauchy_case(seed: int, i: int) -> dict:
    rng = case_rng(seed, "cauchy", i)
    p = random_poly(rng, rng.randint(1, 4), 25)
    mp2 = mp_squared(p)
    top = (ceil_sqrt(mp2) + 5) ** 2
    r = ceil_sqrt(top)
    zeros = []
    checked = 0
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = GaussianInt(a, b)
            if mp2 < z.norm() <= top:
                checked += 1
                if p.eval(z).is_zero():
                    zeros.append(_gjson(z))
    return {"p": p.to_json(), "mp2": mp2, "max_norm": top, "points": checked,
            "zeros": zeros, "pass": not zeros}

# endregion


SUITES: dict[str, tuple[Callable[[int, int], dict], int]] = {
    "balanced-function": (balanced_function_case, 200),
    "expansion-identity": (expansion_identity_case, 500),
    "avoidance-zero": (avoidance_zero_case, None),
    "extremal": (extremal_case, 20),
    "intersective-corpus": (intersective_corpus_case, len(CORPUS)),
    "auxiliary": (auxiliary_case, 24),
    "lucier-transfer": (lucier_transfer_case, 100),
    "degree-lowering": (degree_lowering_case, 1000),
    "partition": (partition_case, len(_GRID)),
    "thresholds": (thresholds_case, 20),
    "cauchy": (cauchy_case, 100),
}


def default_cases(name: str) -> int:
    fn, n = SUITES[name]
    if n is None:  # exhaustive suites size themselves
        global _AVOIDING
        if _AVOIDING is None:
            _AVOIDING = _avoiding_subsets()
        return len(_AVOIDING)
    return n


def run_suite(name: str, cases: Optional[int] = None, seed: int = 0,
              threads: int = 1) -> Iterator[dict]:
    """Yield one record per case, in case order, regardless of ``threads``."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    fn = SUITES[name][0]
    n = default_cases(name) if cases is None else cases
    if n < 0:
        raise ValueError("cases must be nonnegative")
    if threads <= 1:
        for i in range(n):
            yield {"suite": name, "case": i, **fn(seed, i)}
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i, rec in enumerate(pool.map(lambda k: fn(seed, k), range(n))):
            yield {"suite": name, "case": i, **rec}


def summarize(name: str, records: list[dict], seed: int) -> dict:
    passed = sum(1 for r in records if r["pass"])
    return {"suite": name, "seed": seed, "cases": len(records), "passed": passed,
            "failed": len(records) - passed, "pass": passed == len(records)}
