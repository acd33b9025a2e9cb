"""Acceptance criteria 1-12, one test each.

Every test prints a single ``[criterion k] PASS|FAIL ...`` line (outside
pytest's capture) with its runtime, and asserts the runtime budget.
"""

import contextlib
import io
import time
from fractions import Fraction
from itertools import combinations
from math import isqrt

import pytest
from mpmath import iv

from gaussfs import thresholds as th
from gaussfs.boxlab import (
    BoxSubset,
    CorrelationSpec,
    dp_domain,
    indicator_correlation,
    max_avoiding_density,
)
from gaussfs.cli import dispatch
from gaussfs.gaussian import GaussianInt, enumerate_box
from gaussfs.intersective import build_q_a, decide_intersective
from gaussfs.poly import GIPolynomial, mp_squared, parse_poly, shift_scale
from gaussfs.suites import CORPUS, SUITES, run_suite, summarize

X2 = GIPolynomial([0, 0, 1])


@pytest.fixture
def report(capsys):
    def emit(k, ok, elapsed, detail=""):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {k:2d}] {status} {elapsed:7.2f}s {detail}")
    return emit


def _run(name, cases=None, seed=0):
    recs = list(run_suite(name, cases, seed))
    return recs, summarize(name, recs, seed)


def _squares_up_to(max_norm):
    """{z^2 : z != 0, N(z^2) <= max_norm} by direct enumeration."""
    r = isqrt(isqrt(max_norm)) + 1
    out = set()
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = GaussianInt(a, b)
            if not z.is_zero() and (z * z).norm() <= max_norm:
                out.add(z * z)
    return out


def _avoids_x2(points):
    sq = _squares_up_to(200)
    return not any(a - b in sq for a in points for b in points if a != b)


def test_criterion_01_balanced_function(report):
    t0 = time.perf_counter()
    recs, summary = _run("balanced-function", 200, seed=1)
    ok_n = {r["N"] for r in recs} <= set(range(1, 9))
    ok = summary["passed"] == 200 and ok_n and all(
        r["laws"]["mean_zero"] and r["laws"]["bounded"] and r["laws"]["second_moment"] for r in recs)
    dt = time.perf_counter() - t0
    report(1, ok and dt < 5, dt, f"{summary['passed']}/200 subsets, exact sum f = 0, |f| <= 1, E f^2 = d - d^2")
    assert ok
    assert dt < 5


def test_criterion_02_expansion_identity(report):
    t0 = time.perf_counter()
    recs, summary = _run("expansion-identity", 500, seed=2)
    shape = all(r["N"] <= 4 and len(r["p"]["coeffs"]) == 3 for r in recs)
    dt = time.perf_counter() - t0
    ok = summary["passed"] == 500 and shape
    report(2, ok and dt < 60, dt, f"{summary['passed']}/500 exact four-term identities")
    assert ok
    assert dt < 60


def test_criterion_03_avoidance_zero_correlation(report):
    t0 = time.perf_counter()
    count = 0
    ok = True
    for N in (2, 3):
        pts = list(enumerate_box(N))
        D = tuple(dp_domain(N, X2))
        for mask in range(1 << (N * N)):
            chosen = [pts[k] for k in range(N * N) if mask >> k & 1]
            if not _avoids_x2(chosen):
                continue
            count += 1
            A = BoxSubset(N, tuple(chosen))
            for hside in (1, 2):
                ok &= indicator_correlation(A, CorrelationSpec(X2, D, hside, 1)) == 0
    # the library's own enumeration must find the same sets
    _, summary = _run("avoidance-zero")
    ok &= summary["cases"] == count and summary["pass"]
    dt = time.perf_counter() - t0
    report(3, ok and dt < 60, dt, f"{count} avoiding subsets of [2], [3]; indicator correlation 0")
    assert ok
    assert dt < 60


def test_criterion_04_extremal_micro(report):
    t0 = time.perf_counter()
    res = max_avoiding_density(2, X2, "exact")
    pts = list(enumerate_box(2))
    oracle = max(len(c) for k in range(5) for c in combinations(pts, k) if _avoids_x2(c))
    ok = len(res.subset) == 2 and res.subset.delta == Fraction(1, 2) and oracle == 2
    ok &= _avoids_x2(res.subset.members)
    dt = time.perf_counter() - t0
    report(4, ok and dt < 1, dt, f"exact max {len(res.subset)}, all-subsets oracle {oracle}")
    assert ok
    assert dt < 1


def test_criterion_05_intersectivity_corpus(report):
    t0 = time.perf_counter()
    verdicts = {s: decide_intersective(parse_poly(s)) for s in ("x^2", "x^2+1", "x^2+x+1")}
    ok = verdicts["x^2"].verdict == "intersective"
    ok &= verdicts["x^2+1"].verdict == "intersective"
    v = verdicts["x^2+x+1"]
    ok &= v.verdict == "not-intersective" and v.counterexample.norm() == 2
    recs, summary = _run("intersective-corpus")
    ok &= len(CORPUS) == 30 and summary["cases"] == 30 and summary["pass"]
    n_int = sum(r["verdict"] == "intersective" for r in recs)
    ok &= all(r["sweep_norm"] == 1000 and r["rootless_ideal"] is None
              for r in recs if r["verdict"] == "intersective")
    dt = time.perf_counter() - t0
    report(5, ok and dt < 120, dt, f"30 polynomials, {n_int} intersective swept to norm 1000")
    assert ok
    assert dt < 120


def test_criterion_06_auxiliary_construction(report):
    t0 = time.perf_counter()
    ok = True
    d = 2
    for alpha in (GaussianInt(2), GaussianInt(1, 1), GaussianInt(3), GaussianInt(2, 1)):
        c = build_q_a(X2, alpha)
        ok &= c.q_a.scale(c.gamma) == shift_scale(X2, c.r_a, alpha)
        ok &= c.r_a.norm() <= 4 * alpha.norm()
        ok &= alpha.divides(c.gamma)
        ok &= c.gamma.norm() <= alpha.norm() ** d
        ok &= c.q_a.degree == 2
        ok &= mp_squared(c.q_a) <= 2 ** (4 * d) * alpha.norm() ** (d - 1) * mp_squared(X2)
        if alpha == GaussianInt(2):
            ok &= c.q_a == GIPolynomial([GaussianInt(0, 2), GaussianInt(2, 2), 1])
    ok &= _run("auxiliary")[1]["pass"]
    dt = time.perf_counter() - t0
    report(6, ok and dt < 10, dt, "q_a for alpha in {2, 1+i, 3, 2+i}; q_2 = (x+1+i)^2")
    assert ok
    assert dt < 10


def _is_qa_value(diff, alpha, r_a, gamma):
    """diff = q_a(v) for q = x^2  <=>  gamma diff = w^2 with w = r_a (mod alpha)."""
    target = gamma * diff
    n = target.norm()
    s = isqrt(n)
    if s * s != n:
        return False
    r = isqrt(s)
    for a in range(-r, r + 1):
        b2 = s - a * a
        b = isqrt(b2)
        if b * b != b2:
            continue
        for w in {GaussianInt(a, b), GaussianInt(a, -b)}:
            if w * w == target and alpha.divides(w - r_a):
                return True
    return False


def test_criterion_07_lucier_transfer(report):
    t0 = time.perf_counter()
    recs, summary = _run("lucier-transfer", 100, seed=7)
    ok = summary["passed"] == 100
    nonempty = 0
    for rec in recs:
        A = [GaussianInt(int(a), int(b)) for a, b in rec["set"]]
        alpha = GaussianInt(*map(int, rec["alpha"]))
        gamma = GaussianInt(*map(int, rec["gamma"]))
        n = GaussianInt(*map(int, rec["n"]))
        r_a = build_q_a(X2, alpha).r_a
        ok &= all(1 <= z.re <= 4 and 1 <= z.im <= 4 for z in A) and _avoids_x2(A)
        Ap = [(a - n).exact_div(gamma) for a in A if gamma.divides(a - n)]
        nonempty += bool(Ap)
        ok &= len(Ap) == rec["transferred_size"]
        ok &= not any(_is_qa_value(x - y, alpha, r_a, gamma) for x in Ap for y in Ap if x != y)
    ok &= nonempty == 100
    dt = time.perf_counter() - t0
    report(7, ok and dt < 60, dt, f"{summary['passed']}/100 transfers, independent square-root oracle")
    assert ok
    assert dt < 60


def test_criterion_08_degree_lowering(report):
    t0 = time.perf_counter()
    recs, summary = _run("degree-lowering", 1000, seed=8)
    shape = all(len(r["p"]["coeffs"]) <= 5 for r in recs)
    norms = all(int(a) ** 2 + int(b) ** 2 <= 100 for r in recs for a, b in r["p"]["coeffs"])
    ok = summary["passed"] == 1000 and shape and norms
    dt = time.perf_counter() - t0
    report(8, ok and dt < 10, dt, f"{summary['passed']}/1000 identities with exact degree drop")
    assert ok
    assert dt < 10


def test_criterion_09_partition(report):
    t0 = time.perf_counter()
    recs, summary = _run("partition")
    xis = {(r["xi"][0], r["xi"][1]) for r in recs}
    grid = {(r["M"], r["m"]) for r in recs}
    ok = summary["pass"] and len(xis) == 24 and grid == {(M, m) for M in range(1, 13) for m in (1, 2, 3)}
    dt = time.perf_counter() - t0
    report(9, ok and dt < 120, dt, f"{summary['passed']}/{summary['cases']} partitions (M <= 12, N(xi) <= 8, m <= 3)")
    assert ok
    assert dt < 120


def _iv_steps(d, delta0, prec=160):
    """Independent oracle: interval iteration of delta + c delta^C."""
    c, C, _ = th.increment_constants(d)
    old = iv.prec
    iv.prec = prec
    try:
        x = iv.mpf(delta0.numerator) / delta0.denominator
        cc = iv.mpf(c.numerator) / c.denominator
        i = 0
        while not x.a > 1:
            if x.b > 1:
                raise ArithmeticError("interval straddles 1")
            x = x + cc * x ** C
            i += 1
        return i
    finally:
        iv.prec = old


def test_criterion_10_threshold_arithmetic(report):
    t0 = time.perf_counter()
    c, C, eps = th.increment_constants(2)
    # c = 1/2^(3 * 2^(d-1) + 3) is 1/2^9 at d = 2
    ok = c == Fraction(1, 2 ** 9) and C == 3 and eps == Fraction(1, 3)
    mp2 = 4
    deltas = [Fraction(k, 20) for k in range(1, 20)]
    for r in (4, 5):
        for lo, hi in zip(deltas, deltas[1:]):
            ok &= th.n_r(2, r, hi, mp2).le(th.n_r(2, r, lo, mp2)) is True
    # exact rational iteration; each step triples the denominator's length,
    # so only starting points with a handful of steps are feasible
    for delta0 in (Fraction(99, 100), Fraction(199, 200), Fraction(999, 1000)):
        seq = [delta0]
        while seq[-1] <= 1:
            seq.append(seq[-1] + c * seq[-1] ** C)
        t = len(seq) - 1
        ok &= seq[t - 1] <= 1 < seq[t] and th.increment_steps(2, delta0).t == t
    # certified enclosure against an interval-arithmetic oracle
    s = th.increment_steps(2, Fraction(1, 2))
    ok &= s.upper_before <= 1 < s.lower_at and s.t == _iv_steps(2, Fraction(1, 2))
    dt = time.perf_counter() - t0
    report(10, ok and dt < 5, dt, f"c = 1/512, C = 3, eps = 1/3; t(1/2) = {s.t}; N_r monotone")
    assert ok
    assert dt < 5


def test_criterion_11_cauchy_sweep(report):
    t0 = time.perf_counter()
    recs, summary = _run("cauchy", 100, seed=11)
    ok = summary["passed"] == 100
    ok &= all(int(a) ** 2 + int(b) ** 2 <= 25 for r in recs for a, b in r["p"]["coeffs"])
    ok &= all(len(r["p"]["coeffs"]) >= 2 for r in recs)
    pts = sum(r["points"] for r in recs)
    dt = time.perf_counter() - t0
    report(11, ok and dt < 60, dt, f"100 polynomials, {pts} points outside the Cauchy radius, no zeros")
    assert ok
    assert dt < 60


def _sweep_bytes(name, seed, threads):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = dispatch(["sweep", f"suite:{name}", "--seed", str(seed), "--threads", str(threads)])
    return code, buf.getvalue().encode()


def test_criterion_12_determinism(report, monkeypatch):
    monkeypatch.delenv("GAUSSINT_THREADS", raising=False)
    t0 = time.perf_counter()
    ok = True
    bad = []
    for name in SUITES:
        c1, b1 = _sweep_bytes(name, 12, 1)
        c2, b2 = _sweep_bytes(name, 12, 4)
        if not (c1 == c2 == 0 and b1 == b2 and b1):
            bad.append(name)
    ok = not bad
    dt = time.perf_counter() - t0
    report(12, ok, dt, f"{len(SUITES)} suites re-run (1 and 4 threads), byte-identical"
           + (f"; differing: {bad}" if bad else ""))
    assert ok
