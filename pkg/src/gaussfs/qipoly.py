"""Polynomial algebra over Q(i) needed by the intersectivity decision.

Elements of Q(i) are pairs of ``Fraction``.  Only what the decision
procedure uses lives here: gcd, Yun's squarefree decomposition, primitive
parts back in Z[i][x], Sylvester resultants (fraction-free Bareiss) and the
rational-root search.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .gaussian import ONE, ZERO, GaussianInt, canonical_associate, gi_gcd
from .ideals import divisors_up_to_units
from .poly import GIPolynomial

QI = tuple  # (Fraction, Fraction)


def _qi(z) -> QI:
    if isinstance(z, GaussianInt):
        return (Fraction(z.re), Fraction(z.im))
    return z


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _inv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("inverse of 0 in Q(i)")
    return (a[0] / n, -a[1] / n)


def _is_zero(a):
    return a[0] == 0 and a[1] == 0


def _trim(p):
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def to_qi(p: GIPolynomial) -> list[QI]:
    return [_qi(c) for c in p.coeffs]


def _monic(p):
    inv = _inv(p[-1])
    return [_mul(c, inv) for c in p]


def qi_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [(Fraction(0), Fraction(0))] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv = _inv(b[-1])
    while len(r) >= len(b) and r:
        c = _mul(r[-1], inv)
        shift = len(r) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            r[shift + j] = _sub(r[shift + j], _mul(c, bj))
        r = _trim(r[:-1]) if _is_zero(r[-1]) else _trim(r)
    return _trim(q), r


def qi_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = qi_divmod(a, b)
        a, b = b, r
    return _monic(a) if a else a


def _deriv(p):
    return [_mul(c, (Fraction(j), Fraction(0))) for j, c in enumerate(p) if j]


def primitive_part(p) -> GIPolynomial:
    """Scale a Q(i)-polynomial into Z[i][x] with coefficient gcd 1.

    The result is normalised so that its leading coefficient is a canonical
    associate.
    """
    p = _trim(p)
    if not p:
        return GIPolynomial()
    den = 1
    for c in p:
        den = lcm(den, c[0].denominator, c[1].denominator)
    zs = [GaussianInt(int(c[0] * den), int(c[1] * den)) for c in p]
    g = ZERO
    for z in zs:
        if not z.is_zero():
            g = z if g.is_zero() else gi_gcd(g, z)
    zs = [z.exact_div(g) for z in zs]
    lead = zs[-1]
    unit = canonical_associate(lead).exact_div(lead)
    return GIPolynomial(z * unit for z in zs)


def squarefree_decomposition(q: GIPolynomial) -> list[tuple[GIPolynomial, int]]:
    """Yun's algorithm: ``q = c * prod g_i^i`` with g_i squarefree, coprime.

    Returns ``[(g_i, i), ...]`` for the nonconstant factors only, each a
    primitive Z[i] polynomial.
    """
    if q.is_zero():
        raise ValueError("zero polynomial")
    if q.degree == 0:
        return []
    f = to_qi(q)
    fp = _deriv(f)
    a = qi_gcd(f, fp)
    b, _ = qi_divmod(f, a)
    c, _ = qi_divmod(fp, a)
    out = []
    i = 1
    while len(_trim(b)) > 1:
        d = [_sub(x, y) for x, y in _zip_pad(c, _deriv(b))]
        g = qi_gcd(b, d)
        if len(g) > 1:
            out.append((primitive_part(g), i))
        b, _ = qi_divmod(b, g)
        c, _ = qi_divmod(d, g)
        i += 1
    return out


def _zip_pad(a, b):
    z = (Fraction(0), Fraction(0))
    n = max(len(a), len(b))
    return [(a[j] if j < len(a) else z, b[j] if j < len(b) else z) for j in range(n)]


def squarefree_part(q: GIPolynomial) -> GIPolynomial:
    """Primitive squarefree kernel of ``q`` (the product of its Yun factors)."""
    out = GIPolynomial([1])
    for g, _ in squarefree_decomposition(q):
        out = out * g
    return primitive_part(to_qi(out))


def bareiss_det(matrix: list[list[GaussianInt]]) -> GaussianInt:
    """Determinant over Z[i] by fraction-free elimination (all divisions exact)."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def resultant(f: GIPolynomial, g: GIPolynomial) -> GaussianInt:
    """Sylvester resultant Res(f, g) in Z[i]."""
    m, n = f.degree, g.degree
    if m == 0:
        return f.lead ** n
    if n == 0:
        return g.lead ** m
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for k in range(n):
        rows.append([ZERO] * k + fc + [ZERO] * (size - k - len(fc)))
    for k in range(m):
        rows.append([ZERO] * k + gc + [ZERO] * (size - k - len(gc)))
    return bareiss_det(rows)


def rational_roots(q: GIPolynomial) -> list[tuple[GaussianInt, GaussianInt]]:
    """Roots of ``q`` in Q(i) as ``(u, v)`` meaning u/v with v canonical.

    Candidates come from the rational root theorem in the UFD Z[i]: after
    removing the root 0, u divides a_0 and v divides a_d.  Sorted by the
    norm of the denominator, then by the numerator.
    """
    if q.is_zero() or q.degree == 0:
        return []
    roots = []
    k = 0
    while q.coeffs[k].is_zero():
        k += 1
    if k:
        roots.append((ZERO, ONE))
    core = GIPolynomial(q.coeffs[k:])
    if core.degree == 0:
        return roots
    seen = set()
    nums = divisors_up_to_units(core.coeffs[0])
    dens = divisors_up_to_units(core.lead)
    units = (ONE, GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))
    for v in dens:
        for u0 in nums:
            for unit in units:
                u = u0 * unit
                if gi_gcd(u, v) != ONE:
                    continue
                if (u, v) in seen:
                    continue
                # core(u/v) * v^d == 0
                acc = ZERO
                vp = ONE
                for c in reversed(core.coeffs):
                    acc = acc * u + c * vp
                    vp = vp * v
                if acc.is_zero():
                    seen.add((u, v))
                    roots.append((u, v))
    roots.sort(key=lambda t: (t[1].norm(), t[0].norm(), t[0].im, t[0].re))
    return roots


def irreducible_factors(q: GIPolynomial) -> list[GIPolynomial]:
    """Distinct irreducible factors of q over Q(i), as primitive Z[i] polynomials.

    Factoring over Q(i) is delegated to sympy; each factor is rescaled into
    Z[i][x] with a canonical leading coefficient and re-checked to divide q.
    """
    import sympy as sp

    if q.is_zero():
        raise ValueError("zero polynomial")
    x = sp.Symbol("x")
    expr = sum((sp.Integer(c.re) + sp.I * sp.Integer(c.im)) * x**j for j, c in enumerate(q.coeffs))
    _, facs = sp.factor_list(sp.expand(expr), x, gaussian=True)
    out = []
    for fac, _ in facs:
        coeffs = sp.Poly(fac, x, gaussian=True).all_coeffs()[::-1]
        qi = []
        for c in coeffs:
            re, im = sp.re(c), sp.im(c)
            qi.append((Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))))
        g = primitive_part(qi)
        if g.degree >= 1:
            _, r = qi_divmod(to_qi(q), to_qi(g))
            if r:
                raise AssertionError(f"factor {g} does not divide {q}")
            out.append(g)
    out.sort(key=lambda g: (g.degree, [(c.re, c.im) for c in g.coeffs]))
    return out
