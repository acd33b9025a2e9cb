"""Exact arithmetic on the Gaussian integers Z[i].

Everything here is integer-only: magnitudes are compared through norms,
and the residue square S_alpha is tested with the rotated inequality
0 < Re(z * conj(alpha)) <= N(alpha), 0 < Im(z * conj(alpha)) <= N(alpha).
"""

from __future__ import annotations

import re
from math import isqrt
from typing import Iterator, Union

IntLike = Union[int, "GaussianInt"]


class GaussianInt:
    """An element ``re + im*i`` of Z[i] with arbitrary-precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0) -> None:
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, value: IntLike) -> "GaussianInt":
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise ValueError(f"{value!r} is not a Gaussian integer")
            return cls(int(value.real), int(value.imag))
        if isinstance(value, str):
            return parse_gaussian(value)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianInt")

    # region arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re + other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re - other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return GaussianInt(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        if isinstance(other, GaussianInt):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianInt(a * c - b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("negative powers are not Gaussian integers")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = GaussianInt.coerce(other)
        q = self.round_div(other)
        return q, self - q * other

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]
    # endregion

    def round_div(self, other: "GaussianInt") -> "GaussianInt":
        """Quotient rounded to the nearest lattice point (Euclidean step).

        The remainder ``self - q*other`` has norm at most N(other)/2.
        """
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * other.conj()
        return GaussianInt(_round_div(num.re, n), _round_div(num.im, n))

    def exact_div(self, other: IntLike) -> "GaussianInt":
        """Quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        other = GaussianInt.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * other.conj()
        qr, rr = divmod(num.re, n)
        qi, ri = divmod(num.im, n)
        if rr or ri:
            raise ArithmeticError(f"{other} does not divide {self}")
        return GaussianInt(qr, qi)

    def divides(self, other: IntLike) -> bool:
        """True iff ``self`` divides ``other`` in Z[i]."""
        other = GaussianInt.coerce(other)
        n = self.norm()
        if n == 0:
            return other.is_zero()
        num = other * self.conj()
        return num.re % n == 0 and num.im % n == 0

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def associates(self) -> tuple["GaussianInt", ...]:
        return tuple(self * u for u in UNITS)

    def canonical(self) -> "GaussianInt":
        """The unique associate with ``re > 0`` and ``im >= 0`` (0 maps to 0)."""
        return canonical_associate(self)

    def __eq__(self, other):
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        return complex(self.re, self.im)

    def __iter__(self):
        yield self.re
        yield self.im

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]

    @classmethod
    def from_json(cls, data) -> "GaussianInt":
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ValueError(f"expected [re, im], got {data!r}")
        return cls(int(data[0]), int(data[1]))


def _round_div(a: int, n: int) -> int:
    # nearest integer to a/n (n > 0), ties toward +infinity
    return (2 * a + n) // (2 * n)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))


def canonical_associate(z: IntLike) -> GaussianInt:
    z = GaussianInt.coerce(z)
    if z.is_zero():
        return z
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable: some associate lies in the first quadrant")


def unit_part(z: GaussianInt) -> GaussianInt:
    """The unit ``u`` with ``z == u * canonical_associate(z)``."""
    c = canonical_associate(z)
    if c.is_zero():
        raise ValueError("0 has no unit part")
    return z.exact_div(c)


def gi_gcd(a: IntLike, b: IntLike) -> GaussianInt:
    """Greatest common divisor normalised to its canonical associate."""
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a - a.round_div(b) * b
    return canonical_associate(a)


def gi_xgcd(a: IntLike, b: IntLike) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g`` and ``g`` canonical."""
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    x0, y0, x1, y1 = ONE, ZERO, ZERO, ONE
    while not b.is_zero():
        q = a.round_div(b)
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    g = canonical_associate(a)
    u = g.exact_div(a)
    return g, x0 * u, y0 * u


def valuation(z: GaussianInt, pi: GaussianInt) -> int:
    """Exponent of the prime ``pi`` in ``z``; ``z`` must be nonzero."""
    if z.is_zero():
        raise ValueError("valuation of 0 is infinite")
    if pi.is_unit() or pi.is_zero():
        raise ValueError("valuation needs a nonzero nonunit")
    v = 0
    while pi.divides(z):
        z = z.exact_div(pi)
        v += 1
    return v


# region residue squares

def in_residue_square(z: GaussianInt, alpha: GaussianInt) -> bool:
    """Membership in S_alpha via the exact rotated inequalities."""
    n = alpha.norm()
    w = z * alpha.conj()
    return 0 < w.re <= n and 0 < w.im <= n


def residue_square_reduce(z: IntLike, alpha: IntLike) -> GaussianInt:
    """The unique element of S_alpha congruent to ``z`` modulo ``alpha``."""
    z, alpha = GaussianInt.coerce(z), GaussianInt.coerce(alpha)
    n = alpha.norm()
    if n == 0:
        raise ValueError("cannot reduce modulo 0")
    w = z * alpha.conj()
    q = GaussianInt((w.re - 1) // n, (w.im - 1) // n)
    return z - alpha * q


def residue_square_quotient(z: GaussianInt, alpha: GaussianInt) -> GaussianInt:
    """The ``v`` with ``z - v*alpha`` in S_alpha (which translate of S_alpha holds z)."""
    n = alpha.norm()
    if n == 0:
        raise ValueError("cannot reduce modulo 0")
    w = z * alpha.conj()
    return GaussianInt((w.re - 1) // n, (w.im - 1) // n)


def residue_square(alpha: IntLike) -> list[GaussianInt]:
    """All N(alpha) elements of S_alpha in row-major order (im outer, re inner)."""
    alpha = GaussianInt.coerce(alpha)
    n = alpha.norm()
    if n == 0:
        raise ValueError("S_0 is undefined")
    # |z| <= sqrt(2) |alpha| on S_alpha
    r = isqrt(2 * n) + 1
    out = []
    ar, ai = alpha.re, alpha.im
    for b in range(-r, r + 1):
        for a in range(-r, r + 1):
            x = a * ar + b * ai
            y = b * ar - a * ai
            if 0 < x <= n and 0 < y <= n:
                out.append(GaussianInt(a, b))
    return out

# endregion

# region boxes


def enumerate_box(N: int) -> Iterator[GaussianInt]:
    """Yield the N^2 points of [N] = {a+bi : 1 <= a, b <= N}, im outer."""
    if N < 1:
        raise ValueError("box side must be positive")
    for b in range(1, N + 1):
        for a in range(1, N + 1):
            yield GaussianInt(a, b)


class ShiftedBox:
    """The translate ``[side] + offset``; empty when ``side <= 0``."""

    __slots__ = ("side", "offset")

    def __init__(self, side: int, offset: IntLike = 0) -> None:
        self.side = int(side)
        self.offset = GaussianInt.coerce(offset)

    def __contains__(self, z) -> bool:
        z = GaussianInt.coerce(z)
        a = z.re - self.offset.re
        b = z.im - self.offset.im
        return 1 <= a <= self.side and 1 <= b <= self.side

    def __iter__(self) -> Iterator[GaussianInt]:
        if self.side <= 0:
            return
        for z in enumerate_box(self.side):
            yield z + self.offset

    def __len__(self) -> int:
        return max(self.side, 0) ** 2

    def is_empty(self) -> bool:
        return self.side <= 0

    def __eq__(self, other):
        if not isinstance(other, ShiftedBox):
            return NotImplemented
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        return self.side == other.side and self.offset == other.offset

    def __hash__(self):
        return hash((self.side, self.offset)) if not self.is_empty() else 0

    def __repr__(self):
        return f"ShiftedBox({self.side}, {self.offset})"


def shifted_box(N: int, offset: IntLike = 0) -> ShiftedBox:
    if N < 1:
        raise ValueError("box side must be positive")
    return ShiftedBox(N, offset)


def padded_box(N: int, pad: int) -> ShiftedBox:
    """[N + 2 pad] - pad(1+i): contains [N] + c whenever |Re c|, |Im c| <= pad."""
    return ShiftedBox(N + 2 * pad, GaussianInt(-pad, -pad))


def inner_box(N: int, pad: int) -> ShiftedBox:
    """[N - 2 pad] + pad(1+i): the points of [N] at distance > pad from its edge."""
    return ShiftedBox(N - 2 * pad, GaussianInt(pad, pad))

# endregion

# region text form

_GAUSS_RE = re.compile(
    r"""^\s*
    (?:
      (?P<re>[+-]?\s*\d+)?\s*
      (?:(?P<isign>[+-])?\s*(?P<imv>\d+)?\s*\*?\s*i)?
    )\s*$""",
    re.VERBOSE,
)


def parse_gaussian(text: str) -> GaussianInt:
    """Parse ``"a+bi"``, ``"a-bi"``, ``"3"``, ``"-2i"``, ``"i"``, ``"1 + 1i"``."""
    m = _GAUSS_RE.match(text)
    if m is None or not text.strip():
        raise ValueError(f"not a Gaussian integer: {text!r}")
    re_part = m.group("re")
    has_i = text.rstrip().endswith("i")
    if re_part is not None and not has_i:
        return GaussianInt(int(re_part.replace(" ", "")), 0)
    if not has_i:
        raise ValueError(f"not a Gaussian integer: {text!r}")
    sign = m.group("isign")
    if re_part is not None and sign is None:
        # "3i" parsed as re="3" with bare i: digits belong to the imaginary part
        return GaussianInt(0, int(re_part.replace(" ", "")))
    mag = int(m.group("imv")) if m.group("imv") else 1
    im = -mag if sign == "-" else mag
    return GaussianInt(int(re_part.replace(" ", "")) if re_part else 0, im)


def format_gaussian(z: GaussianInt) -> str:
    a, b = z.re, z.im
    if b == 0:
        return str(a)
    if b == 1:
        ib = "i"
    elif b == -1:
        ib = "-i"
    else:
        ib = f"{b}i"
    if a == 0:
        return ib
    return f"{a}+{ib}" if b > 0 else f"{a}{ib}"

# endregion
