"""Nonzero ideals of Z[i] (held as generators), prime factorisation and CRT."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt, prod
from typing import Iterable, Iterator, Sequence

from .gaussian import (
    ONE,
    GaussianInt,
    IntLike,
    canonical_associate,
    gi_gcd,
    gi_xgcd,
    residue_square,
    residue_square_reduce,
)

TRIAL_LIMIT = 10**6


class FactoringEffortExceeded(RuntimeError):
    """Raised when Pollard rho gives up under the configured iteration cap."""


# region rational integers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with these bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, c: int, max_iter: int) -> int | None:
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    it = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        it += r
        if it > max_iter:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n: int, max_iter: int) -> int:
    for c in range(1, 64):
        d = _brent_rho(n, c, max_iter)
        if d is not None and 1 < d < n:
            return d
    raise FactoringEffortExceeded(f"Pollard rho failed to split {n}")


def factor_integer(n: int, max_iter: int = 10**7) -> dict[int, int]:
    """Prime factorisation of ``|n|`` as ``{p: e}``: trial division, then Brent rho."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    limit = min(TRIAL_LIMIT, isqrt(n) + 1)
    step = 2
    while p <= limit and n > 1:
        if n % p == 0:
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
            limit = min(TRIAL_LIMIT, isqrt(n) + 1)
        p += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _split(m, max_iter)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r

# endregion

# region Gaussian primes


@dataclass(frozen=True, order=False)
class GaussianPrime:
    pi: GaussianInt
    p: int
    kind: str  # "split" | "inert" | "ramified"

    def norm(self) -> int:
        return self.pi.norm()

    def sort_key(self):
        return (self.p, self.pi.re, self.pi.im)

    def __str__(self):
        return str(self.pi)


def primes_over(p: int) -> list[GaussianPrime]:
    """The Gaussian primes above the rational prime ``p``, canonical and sorted."""
    if p == 2:
        return [GaussianPrime(GaussianInt(1, 1), 2, "ramified")]
    if p % 4 == 3:
        return [GaussianPrime(GaussianInt(p, 0), p, "inert")]
    x = sqrt_mod_prime(p - 1, p)
    pi = gi_gcd(p, GaussianInt(x, -1))
    other = canonical_associate(pi.conj())
    pis = sorted({pi, other}, key=lambda z: (z.re, z.im))
    return [GaussianPrime(z, p, "split") for z in pis]


def gaussian_prime(pi: IntLike) -> GaussianPrime:
    """Wrap an irreducible element; raises ``ValueError`` if it is not prime."""
    z = canonical_associate(GaussianInt.coerce(pi))
    n = z.norm()
    if n < 2:
        raise ValueError(f"{pi} is not a prime")
    if is_probable_prime(n):
        for gp in primes_over(n):
            if gp.pi == z:
                return gp
    r = isqrt(n)
    if r * r == n and r % 4 == 3 and is_probable_prime(r):
        return GaussianPrime(z, r, "inert")
    raise ValueError(f"{pi} is not a Gaussian prime")


def iter_gaussian_primes(max_norm: int) -> Iterator[GaussianPrime]:
    """All Gaussian primes of norm <= ``max_norm``, by increasing norm."""
    out = []
    for p in range(2, max_norm + 1):
        if not is_probable_prime(p):
            continue
        for gp in primes_over(p):
            if gp.norm() <= max_norm:
                out.append(gp)
    out.sort(key=lambda g: (g.norm(), g.pi.re, g.pi.im))
    return iter(out)

# endregion

# region factorisation


@dataclass(frozen=True)
class IdealFactorization:
    """``generator == unit * prod(pi**e)`` with primes sorted by (p, pi)."""

    generator: GaussianInt
    factors: tuple[tuple[GaussianPrime, int], ...]
    unit: GaussianInt = field(default=ONE)

    def expand(self) -> GaussianInt:
        z = self.unit
        for gp, e in self.factors:
            z = z * gp.pi ** e
        return z

    def prime_powers(self) -> list[GaussianInt]:
        return [gp.pi ** e for gp, e in self.factors]

    def to_json(self) -> list[dict]:
        return [{"pi": gp.pi.to_json(), "e": e} for gp, e in self.factors]


def factor_ideal(alpha: IntLike, max_iter: int = 10**7) -> IdealFactorization:
    """Factor the ideal (alpha) into prime powers; units give an empty list."""
    alpha = GaussianInt.coerce(alpha)
    if alpha.is_zero():
        raise ValueError("the zero ideal has no factorisation")
    rest = alpha
    factors = []
    for p, _ in factor_integer(alpha.norm(), max_iter).items():
        for gp in primes_over(p):
            e = 0
            while gp.pi.divides(rest):
                rest = rest.exact_div(gp.pi)
                e += 1
            if e:
                factors.append((gp, e))
    if not rest.is_unit():
        raise AssertionError(f"factorisation of {alpha} left cofactor {rest}")
    factors.sort(key=lambda t: t[0].sort_key())
    return IdealFactorization(alpha, tuple(factors), rest)


def divisors_up_to_units(alpha: IntLike) -> list[GaussianInt]:
    """Canonical representatives of every divisor class of ``alpha``."""
    f = factor_ideal(alpha)
    divs = [ONE]
    for gp, e in f.factors:
        divs = [d * gp.pi ** k for d in divs for k in range(e + 1)]
    return sorted({canonical_associate(d) for d in divs}, key=lambda z: (z.norm(), z.re, z.im))

# endregion

# region CRT


def crt(residues: Sequence[tuple[IntLike, IntLike]]) -> GaussianInt:
    """Solve ``z = s_k (mod m_k)`` for pairwise coprime moduli.

    The answer is reduced into the residue square of the product of moduli.
    """
    if not residues:
        raise ValueError("crt needs at least one congruence")
    z = GaussianInt.coerce(residues[0][0])
    m = GaussianInt.coerce(residues[0][1])
    if m.is_zero():
        raise ValueError("zero modulus")
    z = residue_square_reduce(z, m)
    for s, mk in residues[1:]:
        s, mk = GaussianInt.coerce(s), GaussianInt.coerce(mk)
        if mk.is_zero():
            raise ValueError("zero modulus")
        g, u, _ = gi_xgcd(m, mk)
        if g != ONE:
            raise ValueError(f"moduli {m} and {mk} are not coprime")
        # u*m = 1 (mod mk)
        z = z + m * u * (s - z)
        m = m * mk
        z = residue_square_reduce(z, m)
    return z


def residues_mod(modulus: IntLike) -> list[GaussianInt]:
    """A complete residue system modulo ``modulus``: the square S_modulus."""
    modulus = GaussianInt.coerce(modulus)
    if modulus.is_zero():
        raise ValueError("zero modulus")
    return residue_square(modulus)


def pairwise_coprime(moduli: Iterable[GaussianInt]) -> bool:
    ms = list(moduli)
    return all(gi_gcd(a, b) == ONE for i, a in enumerate(ms) for b in ms[i + 1:])


def ideal_product(fs: Iterable[IdealFactorization]) -> GaussianInt:
    return prod((f.generator for f in fs), start=ONE)

# endregion
