"""Intersective polynomials over Z[i] and Lucier's auxiliary polynomial.

A polynomial q is intersective when every nonzero alpha divides some value
q(z).  Equivalently q has a root in every completion Z[i]_pi.  The decision
procedure here works with the primitive squarefree part f of q:

* primes dividing lead(f) * Res(f, f') are *bad*; at a bad prime a root of f
  modulo pi^K with K = 2 v_pi(Res) + 1 is automatically Hensel-liftable, so the
  search to level K decides the prime exactly;
* at every other prime a root modulo pi is simple and lifts, but a root has
  to exist at all.  That is certified by a root of f in Q(i), whose
  denominator only involves bad primes.  Without such a root the procedure
  scans good primes for a counterexample and otherwise answers
  ``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from math import isqrt
from typing import Optional

import numpy as np

from . import _kernels
from .gaussian import (
    ONE,
    ZERO,
    GaussianInt,
    IntLike,
    canonical_associate,
    gi_xgcd,
    residue_square,
    residue_square_reduce,
)
from .ideals import (
    FactoringEffortExceeded,
    GaussianPrime,
    IdealFactorization,
    crt,
    factor_ideal,
    factor_integer,
    gaussian_prime,
    iter_gaussian_primes,
    primes_over,
)
from .poly import GIPolynomial, mq_bound_check, shift_scale
from .qipoly import (
    irreducible_factors,
    rational_roots,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)

INTERSECTIVE = "intersective"
NOT_INTERSECTIVE = "not-intersective"
INCONCLUSIVE = "inconclusive"


class NotIntersectiveError(ValueError):
    pass


class NoRootError(ValueError):
    pass


@dataclass(frozen=True)
class Effort:
    """Work limits for the decision procedure."""

    good_prime_norm: int = 1000
    max_level: int = 256
    max_nodes: int = 200_000
    factor_iter: int = 10**7


DEFAULT_EFFORT = Effort()


# region valuations and roots modulo prime powers


def capped_valuation(z: GaussianInt, pi: GaussianInt, cap: int) -> int:
    """min(v_pi(z), cap); zero counts as valuation ``cap``."""
    v = 0
    while v < cap:
        if z.is_zero():
            return cap
        if not pi.divides(z):
            return v
        z = z.exact_div(pi)
        v += 1
    return cap


def roots_mod(q: GIPolynomial, modulus: IntLike) -> list[GaussianInt]:
    """Every s in S_modulus with modulus | q(s), in row-major order (exhaustive)."""
    modulus = GaussianInt.coerce(modulus)
    n = modulus.norm()
    if n == 0:
        raise ValueError("zero modulus")
    if q.is_zero():
        return residue_square(modulus)
    if n < 2**30:
        zs = residue_square(modulus)
        zre = np.fromiter((z.re for z in zs), dtype=np.int64, count=len(zs))
        zim = np.fromiter((z.im for z in zs), dtype=np.int64, count=len(zs))
        cre = np.array([c.re % n for c in q.coeffs], dtype=np.int64)
        cim = np.array([c.im % n for c in q.coeffs], dtype=np.int64)
        mask = _kernels.root_mask(cre, cim, zre, zim, n, modulus.re, modulus.im)
        return [z for z, ok in zip(zs, mask) if ok]
    return [s for s in residue_square(modulus) if modulus.divides(q.eval(s))]


def _row_major(z: GaussianInt):
    return (z.im, z.re)


def prime_power_roots(
    f: GIPolynomial, pi: GaussianInt, k: int, max_nodes: int = DEFAULT_EFFORT.max_nodes
) -> Optional[list[GaussianInt]]:
    """Roots of f modulo pi^k by level-by-level extension of roots mod pi^(j).

    Every residue mod pi^(j+1) is s + pi^j t with s mod pi^j and t in S_pi,
    so extending only the roots at level j is still exhaustive.  Returns
    ``None`` if more than ``max_nodes`` candidates would be examined.
    """
    base = residue_square(pi)
    level = [s for s in base if pi.divides(f.eval(s))]
    mod = pi
    nodes = len(base)
    for _ in range(1, k):
        nxt_mod = mod * pi
        nxt = []
        nodes += len(level) * len(base)
        if nodes > max_nodes:
            return None
        for s in level:
            for t in base:
                c = s + mod * t
                if nxt_mod.divides(f.eval(c)):
                    nxt.append(residue_square_reduce(c, nxt_mod))
        level = nxt
        mod = nxt_mod
        if not level:
            break
    return sorted(level, key=_row_major)


def first_rootless_level(
    q: GIPolynomial, pi: GaussianInt, max_level: int, max_nodes: int
) -> Optional[int]:
    """Smallest k <= max_level such that q has no root modulo pi^k, else None."""
    base = residue_square(pi)
    level = [s for s in base if pi.divides(q.eval(s))]
    if not level:
        return 1
    mod = pi
    nodes = len(base)
    for k in range(2, max_level + 1):
        nxt_mod = mod * pi
        nodes += len(level) * len(base)
        if nodes > max_nodes:
            return None
        nxt = []
        for s in level:
            for t in base:
                c = s + mod * t
                if nxt_mod.divides(q.eval(c)):
                    nxt.append(c)
        if not nxt:
            return k
        level = [residue_square_reduce(c, nxt_mod) for c in nxt]
        mod = nxt_mod
    return None

# endregion

# region p-adic roots


@dataclass(frozen=True)
class PAdicRootApprox:
    """A root of ``poly`` modulo pi^level designating one pi-adic root.

    ``t`` is v_pi(poly'(value)) (``None`` for infinity) and the approximation
    is liftable when ``level > 2 t``.  ``value`` is always the reduction of
    the designated pi-adic root, so approximations at different levels are
    compatible.  ``root`` holds the root itself when it lies in Z[i].
    """

    prime: GaussianPrime
    poly: GIPolynomial
    level: int
    value: GaussianInt
    t: Optional[int]
    multiplicity: int = 1
    root: Optional[GaussianInt] = None

    @property
    def exact(self) -> bool:
        return self.root is not None

    @property
    def liftable(self) -> bool:
        return self.exact or (self.t is not None and self.level > 2 * self.t)

    @property
    def modulus(self) -> GaussianInt:
        return self.prime.pi ** self.level

    def truncate(self, level: int) -> "PAdicRootApprox":
        if not 1 <= level <= self.level:
            raise ValueError("truncation level out of range")
        mod = self.prime.pi ** level
        return replace(self, level=level, value=residue_square_reduce(self.value, mod))

    def to_json(self) -> dict:
        return {
            "pi": self.prime.pi.to_json(),
            "level": self.level,
            "value": self.value.to_json(),
            "t": self.t,
            "multiplicity": self.multiplicity,
            "exact": self.exact,
            "root": None if self.root is None else self.root.to_json(),
            "poly": self.poly.to_json(),
        }


def _unit_inverse(u: GaussianInt, modulus: GaussianInt) -> GaussianInt:
    g, x, _ = gi_xgcd(u, modulus)
    if g != ONE:
        raise ArithmeticError(f"{u} is not invertible modulo {modulus}")
    return x


def newton_refine(f: GIPolynomial, pi: GaussianInt, s: GaussianInt, t: int, target: int) -> GaussianInt:
    """Reduction mod pi^target of the pi-adic root of f that s approximates.

    Requires v(f(s)) > 2t with t = v(f'(s)).  Each Newton step keeps t and
    strictly raises v(f(s)); the root is congruent to s mod pi^(v(f(s)) - t).
    """
    cap = target + t
    mod_cap = pi ** cap
    pit = pi ** t
    s = residue_square_reduce(s, mod_cap)
    while True:
        fs = f.eval(s)
        k = capped_valuation(fs, pi, cap)
        if k - t >= target or fs.is_zero():
            return residue_square_reduce(s, pi ** target)
        if k <= 2 * t:
            raise ValueError("Newton refinement needs v(f(s)) > 2 v(f'(s))")
        u = f.derivative().eval(s).exact_div(pit)
        delta = fs.exact_div(pit) * _unit_inverse(u, mod_cap)
        s = residue_square_reduce(s - delta, mod_cap)


def hensel_lift(approx: PAdicRootApprox, target_level: int) -> PAdicRootApprox:
    """Approximation of the same pi-adic root at ``target_level``."""
    if not approx.liftable:
        raise ValueError("approximation is not Hensel-liftable (needs level > 2t)")
    if target_level < 1:
        raise ValueError("target level must be positive")
    if target_level <= approx.level:
        return approx.truncate(target_level)
    pi = approx.prime.pi
    if approx.exact:
        return replace(approx, level=target_level,
                        value=residue_square_reduce(approx.root, pi ** target_level))
    value = newton_refine(approx.poly, pi, approx.value, approx.t, target_level)
    return replace(approx, level=target_level, value=value)

# endregion

# region analysis of q


@dataclass
class Analysis:
    q: GIPolynomial
    sf: GIPolynomial
    yun: list
    global_root: Optional[GaussianInt]
    qi_root: Optional[tuple]
    res: Optional[GaussianInt]
    pair_res: list


@lru_cache(maxsize=256)
def analyze(q: GIPolynomial) -> Analysis:
    if q.is_zero():
        raise ValueError("zero polynomial")
    if q.degree == 0:
        return Analysis(q, q, [], None, None, None, [])
    yun = squarefree_decomposition(q)
    sf = squarefree_part(q)
    global_root = None
    if q.coeff(0).is_zero():
        global_root = ZERO
    qroots = rational_roots(sf)
    integral = [u for u, v in qroots if v == ONE]
    if global_root is None and integral:
        global_root = min(integral, key=lambda z: (z.norm(), z.im, z.re))
    qi_root = qroots[0] if qroots else None
    res = resultant(sf, sf.derivative()) if sf.degree >= 1 else None
    pair_res = []
    for a in range(len(yun)):
        for b in range(a + 1, len(yun)):
            pair_res.append(resultant(yun[a][0], yun[b][0]))
    return Analysis(q, sf, yun, global_root, qi_root, res, pair_res)


def bad_primes(q: GIPolynomial, effort: Effort = DEFAULT_EFFORT) -> list[GaussianPrime]:
    """Primes dividing lead(f) Res(f, f') for f the squarefree part of q."""
    an = analyze(q)
    disc = an.sf.lead * an.res
    out = []
    for p in factor_integer(disc.norm(), effort.factor_iter):
        for gp in primes_over(p):
            if gp.pi.divides(disc):
                out.append(gp)
    return sorted(out, key=lambda g: (g.norm(), g.pi.re, g.pi.im))


def hensel_level(q: GIPolynomial, prime: GaussianPrime) -> int:
    """K = 2 v_pi(Res(f, f')) + 1, the level that decides a bad prime."""
    res = analyze(q).res
    return 2 * capped_valuation(res, prime.pi, 10**6) + 1


def root_multiplicity(q: GIPolynomial, approx: PAdicRootApprox) -> int:
    """Multiplicity in q of the pi-adic root designated by ``approx``.

    The root annihilates exactly one Yun factor g_i of q and its
    multiplicity is i.  Refining past every pairwise resultant valuation
    separates the right factor from the others.
    """
    an = analyze(q)
    if approx.exact:
        z = approx.root
        hits = [i for g, i in an.yun if g.eval(z).is_zero()]
        if len(hits) != 1:
            raise AssertionError("exact root must annihilate exactly one squarefree factor")
        return hits[0]
    pi = approx.prime.pi
    L = 1 + max([capped_valuation(r, pi, 10**6) for r in an.pair_res] + [0])
    L = max(L, approx.level)
    z = hensel_lift(approx, L).value
    hits = [i for g, i in an.yun if capped_valuation(g.eval(z), pi, L) >= L]
    if len(hits) != 1:
        raise AssertionError(f"root branch matched {len(hits)} squarefree factors")
    return hits[0]


def find_liftable_root(f: GIPolynomial, prime: GaussianPrime, K: int, effort: Effort):
    """Breadth-first root tree of f at ``prime``, stopping at the first liftable node.

    Returns ``("root", approx)`` for a node s at level j with j > 2 v(f'(s)),
    ``("none", j)`` when level j has no roots, or ``("effort", None)``.  At
    level K every root is liftable, so the search always stops by then.
    """
    pi = prime.pi
    base = residue_square(pi)
    fp = f.derivative()
    level = [s for s in base if pi.divides(f.eval(s))]
    mod = pi
    nodes = len(base)
    for j in range(1, K + 1):
        if not level:
            return "none", j
        for s in sorted(level, key=_row_major):
            t = capped_valuation(fp.eval(s), pi, j)
            if j > 2 * t:
                value = newton_refine(f, pi, s, t, j)
                return "root", PAdicRootApprox(prime, f, j, value, t)
        if j == K:
            raise AssertionError("roots at the Hensel level must be liftable")
        if j >= effort.max_level:
            return "effort", None
        nodes += len(level) * len(base)
        if nodes > effort.max_nodes:
            return "effort", None
        nxt_mod = mod * pi
        nxt = []
        for s in level:
            for t in base:
                c = s + mod * t
                if nxt_mod.divides(f.eval(c)):
                    nxt.append(residue_square_reduce(c, nxt_mod))
        level, mod = nxt, nxt_mod
    return "effort", None


def choose_canonical_root(q: GIPolynomial, prime, effort: Effort = DEFAULT_EFFORT) -> PAdicRootApprox:
    """The fixed root z_pi of q at ``prime`` with its multiplicity m_pi.

    Priority: the root 0 when q(0) = 0; otherwise the smallest root of q in
    Z[i]; otherwise the first root (row-major in S_pi^K) of the squarefree
    part at the deciding level K (1 at good primes), refined by Newton.
    """
    if not isinstance(prime, GaussianPrime):
        prime = gaussian_prime(prime)
    an = analyze(q)
    if q.is_constant():
        raise NoRootError("constant polynomials have no roots")
    if an.global_root is not None:
        z = an.global_root
        m = root_multiplicity(q, PAdicRootApprox(prime, an.sf, 1, z, None, 1, z))
        return PAdicRootApprox(prime, an.sf, 1, residue_square_reduce(z, prime.pi), None, m, z)
    disc = an.sf.lead * an.res
    level = hensel_level(q, prime) if prime.pi.divides(disc) else 1
    status, approx = find_liftable_root(an.sf, prime, level, effort)
    if status == "effort":
        raise NoRootError(f"root tree at {prime.pi} exhausted the effort bound")
    if status == "none":
        raise NoRootError(f"{q} has no root in the completion at {prime.pi}")
    return replace(approx, multiplicity=root_multiplicity(q, approx))

# endregion

# region decision


@dataclass
class IntersectivityVerdict:
    verdict: str
    poly: GIPolynomial
    witnesses: list = field(default_factory=list)
    counterexample: Optional[GaussianInt] = None
    counterexample_prime: Optional[GaussianPrime] = None
    counterexample_level: Optional[int] = None
    coverage: Optional[dict] = None
    notes: list = field(default_factory=list)

    @property
    def is_intersective(self) -> bool:
        return self.verdict == INTERSECTIVE

    def to_json(self) -> dict:
        out = {"poly": self.poly.to_json(), "verdict": self.verdict,
               "witnesses": [w.to_json() for w in self.witnesses]}
        if self.counterexample is not None:
            out["counterexample"] = {
                "modulus": self.counterexample.to_json(),
                "pi": self.counterexample_prime.pi.to_json(),
                "level": self.counterexample_level,
                "residues_checked": self.counterexample.norm(),
            }
        if self.coverage is not None:
            out["good_primes"] = self.coverage
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _constant_verdict(q: GIPolynomial) -> IntersectivityVerdict:
    c = q.coeffs[0]
    pi = GaussianInt(1, 1)
    k = capped_valuation(c, pi, 10**6) + 1
    return IntersectivityVerdict(NOT_INTERSECTIVE, q, counterexample=pi ** k,
                                 counterexample_prime=gaussian_prime(pi), counterexample_level=k)


def decide_intersective(q: GIPolynomial, effort: Effort = DEFAULT_EFFORT) -> IntersectivityVerdict:
    """Decide whether q has a root modulo every nonzero ideal of Z[i]."""
    v = _decide(q, effort)
    return replace(v, witnesses=list(v.witnesses), notes=list(v.notes))


@lru_cache(maxsize=256)
def _decide(q: GIPolynomial, effort: Effort) -> IntersectivityVerdict:
    if q.is_zero():
        raise ValueError("zero polynomial")
    if q.degree == 0:
        return _constant_verdict(q)
    an = analyze(q)
    if an.global_root is not None:
        z = an.global_root
        return IntersectivityVerdict(
            INTERSECTIVE, q, coverage={"global_root": z.to_json()},
            notes=[f"q({z}) = 0, a root in every completion"])
    notes = []
    try:
        bads = bad_primes(q, effort)
    except FactoringEffortExceeded as exc:
        return IntersectivityVerdict(INCONCLUSIVE, q, notes=[str(exc)])
    witnesses = []
    failures = []
    inconclusive = False
    for gp in bads:
        K = hensel_level(q, gp)
        status, approx = find_liftable_root(an.sf, gp, K, effort)
        if status == "effort":
            inconclusive = True
            notes.append(f"root tree at {gp.pi} exhausted the effort bound before level {K}")
        elif status == "none":
            failures.append(gp)
        else:
            witnesses.append(replace(approx, multiplicity=root_multiplicity(q, approx)))
    cex = _best_counterexample(q, failures, effort)
    if cex is None and failures:
        inconclusive = True
        notes.append("no explicit rootless level found within the effort bound")
    bad_set = {g.pi for g in bads}
    coverage = None
    if an.qi_root is not None:
        u, v = an.qi_root
        coverage = {"qi_root": {"num": u.to_json(), "den": v.to_json()}}
    else:
        cert = quadratic_character_certificate(q)
        if cert is not None:
            two = GaussianInt(1, 1)
            if two in bad_set or any(two.divides(an.sf.eval(s)) for s in residue_square(two)):
                coverage = {"quadratic_character": cert}
    if coverage is None:
        # no certificate for the good primes: scan small ones for a rootless
        # prime, which also yields the smallest counterexamples
        limit = effort.good_prime_norm
        for gp in iter_gaussian_primes(limit):
            if cex is not None and gp.norm() >= cex[0].norm() ** cex[1]:
                break
            if gp.pi in bad_set:
                continue
            if any(gp.pi.divides(an.sf.eval(s)) for s in residue_square(gp.pi)):
                continue
            k = first_rootless_level(q, gp.pi, effort.max_level, effort.max_nodes)
            if k is not None and (cex is None or gp.norm() ** k < cex[0].norm() ** cex[1]):
                cex = (gp, k)
        if cex is None:
            inconclusive = True
            notes.append(f"good primes of norm <= {limit} all have roots; "
                         "no root of q in Q(i) to certify the rest")
    if cex is not None:
        gp, k = cex
        return IntersectivityVerdict(
            NOT_INTERSECTIVE, q, witnesses, counterexample=canonical_associate(gp.pi ** k),
            counterexample_prime=gp, counterexample_level=k, notes=notes)
    verdict = INCONCLUSIVE if inconclusive else INTERSECTIVE
    return IntersectivityVerdict(verdict, q, witnesses, coverage=coverage, notes=notes)


def _square_class(d: GaussianInt) -> frozenset:
    """Class of d in Q(i)*/squares: odd-exponent primes, plus 'i' for units +-i."""
    fac = factor_ideal(d)
    bits = {gp.pi for gp, e in fac.factors if e % 2}
    if fac.unit.im != 0:
        bits.add("i")
    return frozenset(bits)


def quadratic_character_certificate(q: GIPolynomial) -> Optional[dict]:
    """Odd set of quadratic factors of q whose discriminants multiply to a square.

    At a prime pi not dividing 2 or any discriminant the quadratic character
    of the residue field is multiplicative, so it cannot be -1 on all of an
    odd family whose product is a square: one factor has a root modulo pi.
    Those roots are simple at good primes and lift.  The prime 1+i and the
    primes dividing a discriminant are handled separately by the caller
    (discriminants divide the resultant, so those primes are bad).
    """
    an = analyze(q)
    if an.sf.degree < 2:
        return None
    try:
        quads = [g for g in irreducible_factors(an.sf) if g.degree == 2]
        discs = [g.coeff(1) * g.coeff(1) - g.coeff(2) * g.coeff(0) * 4 for g in quads]
        classes = [_square_class(d) for d in discs]
    except FactoringEffortExceeded:
        return None
    if len(quads) > 16:
        return None
    for size in range(1, len(quads) + 1, 2):
        for idx in combinations(range(len(quads)), size):
            acc = frozenset()
            for k in idx:
                acc = acc ^ classes[k]
            if not acc:
                prod_d = ONE
                for k in idx:
                    prod_d = prod_d * discs[k]
                return {
                    "factors": [quads[k].to_json() for k in idx],
                    "discriminants": [discs[k].to_json() for k in idx],
                    "product": prod_d.to_json(),
                    "square_root": _gaussian_sqrt_up_to_sign(prod_d).to_json(),
                }
    return None


def _gaussian_sqrt_up_to_sign(z: GaussianInt) -> GaussianInt:
    """w with z = +-w^2, for z whose square class is trivial."""
    fac = factor_ideal(z)
    w = ONE if fac.unit.re != 0 else None
    if w is None:
        raise ValueError(f"{z} is not a square up to sign")
    for gp, e in fac.factors:
        if e % 2:
            raise ValueError(f"{z} is not a square up to sign")
        w = w * gp.pi ** (e // 2)
    if w * w != z and w * w != -z:
        raise AssertionError("square root reconstruction failed")
    return w


def _best_counterexample(q, primes, effort):
    best = None
    for gp in primes:
        k = first_rootless_level(q, gp.pi, effort.max_level, effort.max_nodes)
        if k is None:
            continue
        if best is None or gp.norm() ** k < best[0].norm() ** best[1]:
            best = (gp, k)
    return best


def verify_counterexample(q: GIPolynomial, modulus: IntLike) -> bool:
    """Independent exhaustive check that q has no root modulo ``modulus``."""
    return not roots_mod(q, modulus)

# endregion

# region exhaustive necessary-condition sweep


def has_root_mod(q: GIPolynomial, alpha: IntLike) -> bool:
    """Exhaustive test over a full residue system, via the integer kernel."""
    alpha = GaussianInt.coerce(alpha)
    n = alpha.norm()
    if n == 1:
        return True
    r = isqrt(2 * n) + 1
    a, b = np.meshgrid(np.arange(-r, r + 1, dtype=np.int64), np.arange(-r, r + 1, dtype=np.int64))
    a, b = a.ravel(), b.ravel()
    x = a * alpha.re + b * alpha.im
    y = b * alpha.re - a * alpha.im
    keep = (x > 0) & (x <= n) & (y > 0) & (y <= n)
    zre, zim = a[keep], b[keep]
    cre = np.array([c.re % n for c in q.coeffs], dtype=np.int64)
    cim = np.array([c.im % n for c in q.coeffs], dtype=np.int64)
    mask = _kernels.root_mask(cre, cim, zre, zim, n, alpha.re, alpha.im)
    return bool(mask.any())


def ideals_up_to(max_norm: int) -> list[GaussianInt]:
    """Canonical generators of all nonzero ideals with norm <= max_norm."""
    out = []
    r = isqrt(max_norm)
    for a in range(1, r + 1):
        for b in range(0, r + 1):
            if a * a + b * b <= max_norm:
                out.append(GaussianInt(a, b))
    return sorted(out, key=lambda z: (z.norm(), z.re, z.im))


def root_existence_sweep(q: GIPolynomial, max_norm: int) -> Optional[GaussianInt]:
    """First ideal (by norm) of norm <= max_norm modulo which q has no root."""
    for alpha in ideals_up_to(max_norm):
        if not has_root_mod(q, alpha):
            return alpha
    return None

# endregion

# region auxiliary construction


def _require_usable(q: GIPolynomial, effort: Effort):
    v = decide_intersective(q, effort)
    if v.verdict == NOT_INTERSECTIVE:
        raise NotIntersectiveError(f"{q} is not intersective (no root mod {v.counterexample})")
    return v


def lambda_q(q: GIPolynomial, factorization: IdealFactorization,
             effort: Effort = DEFAULT_EFFORT) -> GaussianInt:
    """Generator of lambda_q(a) = prod p_i^(m_i e_i), canonical associate."""
    _require_usable(q, effort)
    gamma = ONE
    for gp, e in factorization.factors:
        m = choose_canonical_root(q, gp, effort).multiplicity
        gamma = gamma * gp.pi ** (m * e)
    gamma = canonical_associate(gamma)
    alpha = factorization.generator
    if not alpha.divides(gamma):
        raise AssertionError("alpha must divide gamma")
    if gamma.norm() > alpha.norm() ** q.degree:
        raise AssertionError("N(gamma) exceeds N(alpha)^d")
    return gamma


def build_r_a(q: GIPolynomial, alpha: IntLike, effort: Effort = DEFAULT_EFFORT) -> GaussianInt:
    """The element r_a of S_alpha lifting the fixed roots at every p^e || alpha."""
    alpha = GaussianInt.coerce(alpha)
    if alpha.is_zero() or alpha.is_unit():
        raise ValueError("alpha must be a nonzero nonunit")
    _require_usable(q, effort)
    fac = factor_ideal(alpha)
    congruences = []
    for gp, e in fac.factors:
        branch = hensel_lift(choose_canonical_root(q, gp, effort), e)
        congruences.append((branch.value, gp.pi ** e))
    r = residue_square_reduce(crt(congruences), alpha)
    if not alpha.divides(q.eval(r)):
        raise AssertionError(f"alpha = {alpha} does not divide q(r_a) = {q.eval(r)}")
    if r.norm() > 4 * alpha.norm():
        raise AssertionError("|r_a| > 2|alpha|")
    return r


@dataclass(frozen=True)
class AuxiliaryConstruction:
    q: GIPolynomial
    alpha: GaussianInt
    r_a: GaussianInt
    gamma: GaussianInt
    q_a: GIPolynomial

    def to_json(self) -> dict:
        return {
            "q": self.q.to_json(),
            "alpha": self.alpha.to_json(),
            "r_a": self.r_a.to_json(),
            "gamma": self.gamma.to_json(),
            "q_a": self.q_a.to_json(),
            "checks": {
                "defining_identity": self.q_a.scale(self.gamma) == shift_scale(self.q, self.r_a, self.alpha),
                "r_a_bound": self.r_a.norm() <= 4 * self.alpha.norm(),
                "alpha_divides_gamma": self.alpha.divides(self.gamma),
                "gamma_bound": self.gamma.norm() <= self.alpha.norm() ** self.q.degree,
                "mq_bound": mq_bound_check(self.q_a, self.q, self.alpha),
            },
        }


def build_q_a(q: GIPolynomial, alpha: IntLike, effort: Effort = DEFAULT_EFFORT) -> AuxiliaryConstruction:
    """q_a(x) = q(r_a + alpha x) / gamma with gamma generating lambda_q((alpha))."""
    alpha = GaussianInt.coerce(alpha)
    r = build_r_a(q, alpha, effort)
    gamma = lambda_q(q, factor_ideal(alpha), effort)
    shifted = shift_scale(q, r, alpha)
    try:
        q_a = shifted.exact_div_scalar(gamma)
    except ArithmeticError as exc:
        raise AssertionError(f"gamma = {gamma} does not divide q(r_a + alpha x)") from exc
    if q_a.degree != q.degree:
        raise AssertionError("degree of q_a differs from q")
    if not mq_bound_check(q_a, q, alpha):
        raise AssertionError("M_{q_a} bound violated")
    return AuxiliaryConstruction(q, alpha, r, gamma, q_a)

# endregion

# region transfer


def transferred_set(A, n: IntLike, gamma: IntLike) -> list[GaussianInt]:
    """A' = {z : n + gamma z in A}, in the order of A's members."""
    n, gamma = GaussianInt.coerce(n), GaussianInt.coerce(gamma)
    return [(a - n).exact_div(gamma) for a in A.members if gamma.divides(a - n)]


def lucier_transfer_report(A, q: GIPolynomial, alpha: IntLike, gamma: IntLike, n: IntLike,
                           range_bound: Optional[int] = None,
                           effort: Effort = DEFAULT_EFFORT) -> dict:
    """Check that A avoiding I(q) makes A' = (A - n)/gamma avoid I(q_a).

    A difference a'_1 - a'_2 = q_a(v) would give a_1 - a_2 = gamma q_a(v)
    = q(r_a + alpha v), so a failure with the precondition met is a bug.
    ``range_bound`` caps the preimage search box; by default it is derived
    from the polynomial and the largest difference.
    """
    from .boxlab import avoidance_check, find_forbidden_pair

    cons = build_q_a(q, alpha, effort)
    gamma = GaussianInt.coerce(gamma)
    if gamma != cons.gamma:
        raise ValueError(f"gamma {gamma} does not generate lambda_q(({cons.alpha}))")
    pre = avoidance_check(A, q)
    pts = transferred_set(A, n, gamma)
    res = find_forbidden_pair(pts, cons.q_a, range_bound)
    return {
        "precondition": pre.avoids,
        "transferred_size": len(pts),
        "holds": res.avoids,
        "witness": res.to_json().get("witness"),
        "q_a": cons.q_a,
    }


def lucier_transfer_check(A, q: GIPolynomial, alpha: IntLike, gamma: IntLike, n: IntLike,
                          range_bound: Optional[int] = None) -> bool:
    return lucier_transfer_report(A, q, alpha, gamma, n, range_bound)["holds"]

# endregion
