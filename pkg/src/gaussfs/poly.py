"""Polynomials over Z[i]: evaluation, affine substitution, M_p and degree lowering.

Magnitudes are handled in squared form throughout.  ``mp_squared`` returns
M_p^2 = 4 * max N(a_j), and ``|z| > M_p`` is tested as ``N(z) > M_p^2``.
"""

from __future__ import annotations

import re
from math import comb, isqrt
from typing import Iterable, Sequence

from .gaussian import ONE, ZERO, GaussianInt, IntLike


class GIPolynomial:
    """Immutable polynomial ``a_0 + a_1 x + ... + a_d x^d`` over Z[i].

    Coefficients are stored ascending with trailing zeros stripped, so the
    zero polynomial is the empty tuple; asking for its degree is an error.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[IntLike] = ()) -> None:
        cs = [GaussianInt.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("GIPolynomial is immutable")

    @classmethod
    def x(cls) -> "GIPolynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: IntLike) -> "GIPolynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable[IntLike], lead: IntLike = 1) -> "GIPolynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-GaussianInt.coerce(r), 1])
        return p

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def lead(self) -> GaussianInt:
        if not self.coeffs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, j: int) -> GaussianInt:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __call__(self, z: IntLike) -> GaussianInt:
        return self.eval(z)

    def eval(self, z: IntLike) -> GaussianInt:
        z = GaussianInt.coerce(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_mod(self, z: GaussianInt, modulus: GaussianInt) -> bool:
        """True iff ``modulus`` divides ``self(z)``."""
        return modulus.divides(self.eval(z))

    # region ring operations
    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return GIPolynomial(self.coeff(j) + other.coeff(j) for j in range(n))

    __radd__ = __add__

    def __neg__(self):
        return GIPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return GIPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return GIPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = GIPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: IntLike) -> "GIPolynomial":
        c = GaussianInt.coerce(c)
        return GIPolynomial(a * c for a in self.coeffs)

    def exact_div_scalar(self, c: IntLike) -> "GIPolynomial":
        """Divide every coefficient by ``c``; ``ArithmeticError`` if any is inexact."""
        c = GaussianInt.coerce(c)
        return GIPolynomial(a.exact_div(c) for a in self.coeffs)

    def derivative(self) -> "GIPolynomial":
        return GIPolynomial(c * j for j, c in enumerate(self.coeffs) if j)

    def compose(self, inner: "GIPolynomial") -> "GIPolynomial":
        acc = GIPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + GIPolynomial([c])
        return acc
    # endregion

    def __eq__(self, other):
        if isinstance(other, GIPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"GIPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "GIPolynomial":
        return cls(GaussianInt.from_json(c) for c in data["coeffs"])

    @classmethod
    def parse(cls, text: str) -> "GIPolynomial":
        return parse_poly(text)


def _as_poly(v):
    if isinstance(v, GIPolynomial):
        return v
    if isinstance(v, (int, GaussianInt)):
        return GIPolynomial([v])
    return None


def mp_squared(p: GIPolynomial) -> int:
    """M_p^2 = 4 * max_j N(a_j) for a nonzero polynomial."""
    if p.is_zero():
        raise ValueError("M_p is undefined for the zero polynomial")
    return 4 * max(c.norm() for c in p.coeffs)


def ceil_sqrt(n: int) -> int:
    """Smallest integer ``c >= 0`` with ``c*c >= n``."""
    if n < 0:
        raise ValueError("negative argument")
    r = isqrt(n)
    return r if r * r == n else r + 1


def nonvanishing_check(p: GIPolynomial, z: IntLike) -> bool:
    """True if ``N(z) > M_p^2``, in which case ``p(z) != 0`` is guaranteed.

    A False answer means the point is inside the Cauchy disc and the caller
    has to evaluate.  Raises ``ValueError`` for constant polynomials.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("nonvanishing_check needs a nonconstant polynomial")
    z = GaussianInt.coerce(z)
    if z.norm() > mp_squared(p):
        if p.eval(z).is_zero():
            raise AssertionError(f"{p} vanishes at {z} outside its Cauchy radius")
        return True
    return False


def shift_scale(q: GIPolynomial, r: IntLike, alpha: IntLike) -> GIPolynomial:
    """q(r + alpha x), expanded with exact binomial coefficients."""
    r, alpha = GaussianInt.coerce(r), GaussianInt.coerce(alpha)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    if q.is_zero():
        return q
    d = q.degree
    rpow = [ONE]
    apow = [ONE]
    for _ in range(d):
        rpow.append(rpow[-1] * r)
        apow.append(apow[-1] * alpha)
    out = []
    for j in range(d + 1):
        s = ZERO
        for i in range(j, d + 1):
            s = s + q.coeffs[i] * rpow[i - j] * comb(i, j)
        out.append(s * apow[j])
    return GIPolynomial(out)


def degree_lower_diff(p: GIPolynomial, k: IntLike, k2: IntLike) -> GIPolynomial:
    """The polynomial p'(y) = p(y + k2) - p(y + k), one degree lower.

    Coefficients are b_j = sum_{i > j} a_i C(i, j) (k2^(i-j) - k^(i-j)).  The
    growth bound N(b_j) <= 2^(4d) (M_p^2 / 4) max(N(k), N(k2))^d is asserted.
    """
    k, k2 = GaussianInt.coerce(k), GaussianInt.coerce(k2)
    if k == k2:
        raise ValueError("k and k' must differ")
    if p.is_zero() or p.degree < 1:
        raise ValueError("degree lowering needs deg p >= 1")
    d = p.degree
    a = p.coeffs
    kp = [ONE]
    k2p = [ONE]
    for _ in range(d):
        kp.append(kp[-1] * k)
        k2p.append(k2p[-1] * k2)
    b = []
    for j in range(d):
        s = ZERO
        for i in range(j + 1, d + 1):
            s = s + a[i] * (k2p[i - j] - kp[i - j]) * comb(i, j)
        b.append(s)
    out = GIPolynomial(b)
    if out.is_zero() or out.degree != d - 1:
        raise AssertionError("leading coefficient a_d d (k' - k) vanished")
    big = max(k.norm(), k2.norm())
    bound = 2 ** (4 * d) * mp_squared(p) * big ** d
    if any(4 * c.norm() > bound for c in b):
        raise AssertionError("coefficient growth bound violated")
    return out


def mq_bound_check(q_a: GIPolynomial, q: GIPolynomial, alpha: IntLike) -> bool:
    """M_{q_a}^2 <= 2^(4d) N(alpha)^(d-1) M_q^2, all in integers."""
    alpha = GaussianInt.coerce(alpha)
    d = q.degree
    return mp_squared(q_a) <= 2 ** (4 * d) * alpha.norm() ** (d - 1) * mp_squared(q)


# region surface syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([xXiI])|(\*\*|[-+*^()]))")


class PolyParseError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolyParseError(f"unexpected character at {pos}: {text[pos:]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok.lower())
        pos = m.end()
    return out


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := power (['*'] power)*        -- juxtaposition multiplies
    # power  := atom ['^' int]
    # atom   := int | 'i' | 'x' | '(' expr ')'

    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise PolyParseError(f"expected {expect or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        acc = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                acc = acc * self.power()
            elif tok is not None and (tok.isdigit() or tok in ("x", "i", "(")):
                acc = acc * self.power()
            else:
                return acc

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if not e.isdigit():
                raise PolyParseError(f"exponent must be a nonnegative integer, got {e!r}")
            return base ** int(e)
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return GIPolynomial([int(tok)])
        if tok == "i":
            return GIPolynomial([GaussianInt(0, 1)])
        if tok == "x":
            return GIPolynomial.x()
        if tok == "(":
            v = self.expr()
            self.take(")")
            return v
        raise PolyParseError(f"unexpected token {tok!r}")


def parse_poly(text: str) -> GIPolynomial:
    """Parse surface syntax such as ``"x^2 + (1+1i)"`` or ``"3x^2 - 2i x + 5"``."""
    toks = _tokenize(text)
    if not toks:
        raise PolyParseError("empty polynomial")
    parser = _Parser(toks)
    out = parser.expr()
    if parser.peek() is not None:
        raise PolyParseError(f"trailing input at token {parser.peek()!r}")
    return out


def format_poly(p: GIPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for j in range(p.degree, -1, -1):
        c = p.coeffs[j]
        if c.is_zero():
            continue
        mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
        if j and c == ONE:
            parts.append(mono)
        elif c.im == 0 or c.re == 0:
            parts.append(f"{c}{mono}" if not (j and c == -ONE) else f"-{mono}")
        else:
            parts.append(f"({c}){mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")

# endregion


def poly_from_ints(coeffs: Sequence[int | tuple[int, int]]) -> GIPolynomial:
    return GIPolynomial(GaussianInt.coerce(c) for c in coeffs)
