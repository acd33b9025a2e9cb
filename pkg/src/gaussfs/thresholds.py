"""Threshold constants of the density-increment argument, evaluated exactly.

Every threshold is a maximum of terms of the form ceil(X^e) with X rational
(M_p only ever enters through even powers, i.e. through M_p^2).  When X^e
fits in ``exact_bits`` bits it is returned as an exact integer; otherwise
as a bracket [lo, hi] on its base-2 logarithm computed with interval
arithmetic.  The final N_0 is a tower and is always reported through
log2 log2.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from mpmath import iv

EXACT_BITS = 1 << 14
_PREC = 256


@contextmanager
def _precision(bits: int = _PREC):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _raw(t) -> Fraction:
    sign, man, exp, _ = t
    if not man and exp:
        raise ArithmeticError("interval endpoint is not finite")
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _bounds(v) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an mpmath interval (no rounding through mp.prec)."""
    a, b = v._mpi_
    return _raw(a), _raw(b)


def _iv(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _rat(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


@dataclass(frozen=True)
class Magnitude:
    """A positive quantity: exact, or known through a bracket on log2."""

    exact: Optional[Fraction]
    log2_lo: Fraction
    log2_hi: Fraction

    @classmethod
    def of(cls, x: Fraction) -> "Magnitude":
        x = Fraction(x)
        if x <= 0:
            raise ValueError("magnitudes are positive")
        with _precision():
            lo, hi = _bounds(iv.log(_iv(x), 2))
        return cls(x, lo, hi)

    def le(self, other: "Magnitude") -> Optional[bool]:
        """self <= other when decidable, else None."""
        if self.exact is not None and other.exact is not None:
            return self.exact <= other.exact
        if self.log2_hi <= other.log2_lo:
            return True
        if self.log2_lo > other.log2_hi:
            return False
        return None

    def to_json(self) -> dict:
        out = {"log2": [_rat(self.log2_lo), _rat(self.log2_hi)]}
        if self.exact is not None:
            if self.exact.denominator == 1:
                out["exact"] = str(self.exact.numerator)
            else:
                out["exact"] = _rat(self.exact)
        return out


def power(base: Fraction, e: int, ceiling: bool = True, exact_bits: int = EXACT_BITS) -> Magnitude:
    """ceil(base^e) (or base^e), exact when small enough."""
    base = Fraction(base)
    if base <= 0 or e < 0:
        raise ValueError("need a positive base and nonnegative exponent")
    size = e * max(base.numerator.bit_length(), base.denominator.bit_length())
    if size <= exact_bits:
        v = base ** e
        return Magnitude.of(Fraction(ceil(v)) if ceiling else v)
    with _precision():
        lg = iv.log(_iv(base), 2) * e
        lo, hi = _bounds(lg)
    # ceil(y) <= y + 1 <= 2y once y >= 1
    if ceiling and lo >= 0:
        hi += 1
    return Magnitude(None, lo, hi)


def mag_max(*ms: Magnitude) -> Magnitude:
    if all(m.exact is not None for m in ms):
        return Magnitude.of(max(m.exact for m in ms))
    return Magnitude(None, max(m.log2_lo for m in ms), max(m.log2_hi for m in ms))


# region constants


def increment_constants(d: int) -> tuple[Fraction, int, Fraction]:
    """(c, C, epsilon) = (1/2^(3 2^(d-1) + 3), 2^(d-1) + 1, 1/C)."""
    if d < 1:
        raise ValueError("degree must be positive")
    C = 2 ** (d - 1) + 1
    return Fraction(1, 2 ** (3 * 2 ** (d - 1) + 3)), C, Fraction(1, C)


def _check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    return delta


@dataclass(frozen=True)
class StepCount:
    t: int
    upper_before: Fraction  # >= delta_(t-1), and <= 1
    lower_at: Fraction  # <= delta_t, and > 1
    precision: int


def increment_steps(d: int, delta0, precision: int = 64) -> StepCount:
    """Smallest t with delta_t > 1 for delta_(i+1) = delta_i + c delta_i^C.

    Exact rational iteration squares denominators at every step, so the
    sequence is enclosed between two dyadic sequences rounded down and up.
    The map is increasing, so the enclosure is valid; t is certified when
    both sequences cross 1 at the same step, otherwise precision doubles.
    """
    delta0 = _check_delta(delta0)
    c, C, _ = increment_constants(d)
    k = c.denominator.bit_length() - 1  # c = 2^-k
    P = precision
    while True:
        one = 1 << P
        lo = (delta0.numerator << P) // delta0.denominator
        hi = -((-delta0.numerator << P) // delta0.denominator)
        shift = P * (C - 1) + k
        i = 0
        t_lo = t_hi = None
        prev_hi = hi
        while t_lo is None:
            if t_hi is None and hi > one:
                t_hi = i
            if lo > one:
                t_lo = i
                break
            prev_hi = hi
            lo = lo + (lo ** C >> shift)
            hi = hi + -((-(hi ** C)) >> shift)
            i += 1
        if t_lo == t_hi:
            return StepCount(t_lo, Fraction(prev_hi, one), Fraction(lo, one), P)
        P *= 2


def r_from_t(t: int, d: int) -> int:
    """ceil(2t + log_d(2^(2t+1) t) + 4)."""
    if t < 1 or d < 2:
        raise ValueError("need t >= 1 and d >= 2")
    target = 2 ** (2 * t + 1) * t
    # exact case: 2^(2t+1) t a power of d
    kk, acc = 0, 1
    while acc < target:
        acc *= d
        kk += 1
    if acc == target:
        return 2 * t + kk + 4
    with _precision():
        v = iv.mpf(2 * t + 4) + iv.log(iv.mpf(target)) / iv.log(iv.mpf(d))
        lo, hi = _bounds(v)
    if ceil(lo) != ceil(hi):
        raise ArithmeticError("interval too wide to decide the ceiling")
    return ceil(lo)

# endregion

# region thresholds


def _e(d):  # delta exponent 2^(d-1) + 1
    return 2 ** (d - 1) + 1


def n_r(d: int, r: int, delta, mp2: int, exact_bits: int = EXACT_BITS) -> Magnitude:
    """N_r(delta, M_p): the larger of the tower term and the M_p^d term."""
    delta = _check_delta(delta)
    t1 = power(Fraction(2 ** (3 * 2 ** (d - 1) - 1)) / delta ** _e(d), 4 * d ** r,
               exact_bits=exact_bits)
    # (K M_p^d / delta^e)^(8d) with M_p^(8d^2) = (M_p^2)^(4d^2)
    K = 2 ** (3 * 2 ** (d - 1)) * 2 ** (2 * d * d * (2 * d + 1) + 9) * (d + 1) ** (2 * d + 2)
    base = Fraction(K ** (8 * d) * mp2 ** (4 * d * d)) / delta ** (_e(d) * 8 * d)
    t2 = power(base, 1, exact_bits=exact_bits)
    return mag_max(t1, t2)


def degree_lowering_threshold(d: int, r: int, m: int, delta0, mp2: int, n_m: int = 1,
                              exact_bits: int = EXACT_BITS) -> Magnitude:
    """N_(m+1) = max{N_m, ceil((2^(3 2^m - 1)/delta0^(2^m+1))^(4d^r)),
    ceil((2^(3 2^m) (2d+2)^(2d+2) M_p^2 / delta0^(2^m+1))^2)}."""
    delta0 = _check_delta(delta0)
    e = 2 ** m + 1
    t1 = power(Fraction(2 ** (3 * 2 ** m - 1)) / delta0 ** e, 4 * d ** r, exact_bits=exact_bits)
    t2 = power(Fraction(2 ** (3 * 2 ** m) * (2 * d + 2) ** (2 * d + 2) * mp2) / delta0 ** e, 2,
               exact_bits=exact_bits)
    return mag_max(Magnitude.of(Fraction(n_m)), t1, t2)


def linearization_threshold(d: int, r: int, delta0, mp2_m: int, n_m: int = 1,
                            exact_bits: int = EXACT_BITS) -> Magnitude:
    """N_0 of the linearization step: max{N_m, ceil((2^(3 2^(d-1) - 1)/delta0^e)^(4d^r)),
    ceil((2^(3 2^(d-1)) (2d+2)^(2d+2) 2^(2d(2d+1)) M_(p_m)^2 / delta0^e)^4)}."""
    delta0 = _check_delta(delta0)
    e = _e(d)
    t1 = power(Fraction(2 ** (3 * 2 ** (d - 1) - 1)) / delta0 ** e, 4 * d ** r, exact_bits=exact_bits)
    K = 2 ** (3 * 2 ** (d - 1)) * (2 * d + 2) ** (2 * d + 2) * 2 ** (2 * d * (2 * d + 1))
    t2 = power(Fraction(K * mp2_m) / delta0 ** e, 4, exact_bits=exact_bits)
    return mag_max(Magnitude.of(Fraction(n_m)), t1, t2)


def linearization_uncapped_threshold(d: int, r: int, delta0, mp2: int, n_1: int = 1,
                                     exact_bits: int = EXACT_BITS) -> Magnitude:
    """max{N_1, (2^(3 2^(d-1) - 1)/delta0^e)^(4d^r),
    (2^(3 2^(d-1)) (2d+2)^(2d+2) 2^(2d(d+1)) M_p^2 / delta0^e)^4} (no ceilings)."""
    delta0 = _check_delta(delta0)
    e = _e(d)
    t1 = power(Fraction(2 ** (3 * 2 ** (d - 1) - 1)) / delta0 ** e, 4 * d ** r, ceiling=False,
               exact_bits=exact_bits)
    K = 2 ** (3 * 2 ** (d - 1)) * (2 * d + 2) ** (2 * d + 2) * 2 ** (2 * d * (d + 1))
    t2 = power(Fraction(K * mp2) / delta0 ** e, 4, ceiling=False, exact_bits=exact_bits)
    return mag_max(Magnitude.of(Fraction(n_1)), t1, t2)


def density_increment_threshold(d: int, r: int, delta0, mp2: int,
                                exact_bits: int = EXACT_BITS) -> Magnitude:
    """N_delta0: the size from which one density increment step applies (no ceilings)."""
    delta0 = _check_delta(delta0)
    e = _e(d)
    a = 2 ** (3 * 2 ** (d - 1))
    terms = [
        Magnitude.of(Fraction(mp2 ** d)),  # M_p^(2d)
        power(Fraction(a * (2 * d + 2) ** (2 * d + 2) * 2 ** (2 * d * (d + 1)) * mp2) / delta0 ** e,
              4, ceiling=False, exact_bits=exact_bits),
        power(Fraction(a * 2 ** (2 * d * (2 * d + 1) + 9) * mp2) / delta0 ** e, 4, ceiling=False,
              exact_bits=exact_bits),
        # (4 (2d+2)^(d+1) M_p / delta0^2)^2
        power(Fraction(16 * (2 * d + 2) ** (2 * d + 2) * mp2) / delta0 ** 4, 1, ceiling=False,
              exact_bits=exact_bits),
        power(Fraction(2 ** (3 * 2 ** (d - 1) - 1)) / delta0 ** e, 4 * d ** r, ceiling=False,
              exact_bits=exact_bits),
        # (a 2^(d^2(2d+1)+9) M_p^d / delta0^e)^(8d)
        power(Fraction((a * 2 ** (d * d * (2 * d + 1) + 9)) ** (8 * d) * mp2 ** (4 * d * d))
              / delta0 ** (e * 8 * d), 1, ceiling=False, exact_bits=exact_bits),
    ]
    return mag_max(*terms)


def final_threshold_loglog(d: int, t: int, r: int, delta, mp2: int) -> tuple[Fraction, Fraction]:
    """Bracket on log2 log2 N_0 for the final threshold

    N_0 = max{ceil(X)^((4d)^(t+r)), ceil(Y)^((4d)^(t+2))} with
    X = 2^(3 2^(d-1) - 1)/delta^e and
    Y = 2^(3 2^(d-1)) 2^(2d^2(2d+1)+10) (d+1)^(2d+2) 2^(2t d^(t+2)) M_q^(d^t)/delta^e.
    """
    delta = _check_delta(delta)
    e = _e(d)
    X = Fraction(2 ** (3 * 2 ** (d - 1) - 1)) / delta ** e
    cx = ceil(X)
    with _precision():
        l4d = iv.log(iv.mpf(4 * d), 2)
        a = (t + r) * l4d + iv.log(iv.log(iv.mpf(cx), 2), 2)
        log2_y = (iv.mpf(3 * 2 ** (d - 1) + 2 * d * d * (2 * d + 1) + 10)
                  + (2 * d + 2) * iv.log(iv.mpf(d + 1), 2)
                  + iv.mpf(2 * t) * iv.mpf(d) ** (t + 2)
                  + iv.mpf(d) ** t / 2 * iv.log(iv.mpf(mp2), 2)
                  - e * iv.log(_iv(delta), 2))
        log2_cy = log2_y + iv.mpf([0, 1])
        b = (t + 2) * l4d + iv.log(log2_cy, 2)
        (a_lo, a_hi), (b_lo, b_hi) = _bounds(a), _bounds(b)
        lo, hi = max(a_lo, b_lo), max(a_hi, b_hi)
    return lo, hi


def c_q_bracket(d: int, mp2: int) -> tuple[Fraction, Fraction]:
    """C_q = ((21 log(4d) + log log M_q)/c)^epsilon, natural logarithms."""
    c, _, eps = increment_constants(d)
    with _precision():
        lmq = iv.log(iv.mpf(mp2)) / 2
        inner = (21 * iv.log(iv.mpf(4 * d)) + iv.log(lmq)) / _iv(c)
        v = iv.exp(iv.log(inner) * _iv(eps))
        return _bounds(v)


def final_bound(d: int, mp2: int, N: int) -> tuple[Fraction, Fraction]:
    """Bracket on C_q / (log log N)^epsilon, for display."""
    if N < 16:
        raise ValueError("need N >= 16")
    _, _, eps = increment_constants(d)
    lo_c, hi_c = c_q_bracket(d, mp2)
    with _precision():
        ll = iv.log(iv.log(iv.mpf(N)))
        den = iv.exp(iv.log(ll) * _iv(eps))
        v = (_iv(lo_c) + (_iv(hi_c) - _iv(lo_c)) * iv.mpf([0, 1])) / den
        return _bounds(v)

# endregion


def threshold_report(d: int, r: int, delta0, mp2: int, exact_bits: int = EXACT_BITS) -> dict:
    """All constants and thresholds for degree d, parameter r and density delta0."""
    delta0 = _check_delta(delta0)
    if d < 2:
        raise ValueError("need d >= 2")
    if r < 4:
        raise ValueError("need r >= 4")
    if mp2 < 4:
        raise ValueError("M_p^2 = 4 max N(a_j) is at least 4")
    c, C, eps = increment_constants(d)
    steps = increment_steps(d, delta0)
    r_final = r_from_t(steps.t, d)
    lowering = []
    n_prev = 1
    for m in range(1, d):
        nm = degree_lowering_threshold(d, r, m, delta0, mp2, n_prev, exact_bits)
        lowering.append({"m": m, "N_next": nm.to_json()})
        n_prev = nm.exact.numerator if nm.exact is not None else n_prev
    ll_lo, ll_hi = final_threshold_loglog(d, steps.t, r_final, delta0, mp2)
    cq = c_q_bracket(d, mp2)
    return {
        "inputs": {"d": d, "r": r, "delta0": _rat(delta0), "mp2": str(mp2)},
        "c": _rat(c),
        "C": C,
        "epsilon": _rat(eps),
        "t": steps.t,
        "t_certificate": {"delta_before_upper": _rat(steps.upper_before),
                          "delta_at_lower": _rat(steps.lower_at),
                          "precision_bits": steps.precision},
        "r_from_t": r_final,
        "N_r": n_r(d, r, delta0, mp2, exact_bits).to_json(),
        "density_increment": density_increment_threshold(d, r, delta0, mp2, exact_bits).to_json(),
        "degree_lowering": lowering,
        "linearization": linearization_threshold(d, r, delta0, mp2, n_prev, exact_bits).to_json(),
        "linearization_uncapped": linearization_uncapped_threshold(d, r, delta0, mp2, 1,
                                                                   exact_bits).to_json(),
        "final_N0_log2log2": [_rat(ll_lo), _rat(ll_hi)],
        "C_q": [_rat(cq[0]), _rat(cq[1])],
        "notes": ["M_p enters every threshold through M_p^2; the final N_0 is a tower and "
                  "is reported through log2 log2"],
    }
