"""Shared number handling: exact rationals plus a private high-precision context."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Union

import mpmath

# A private context so that importing the package never touches mpmath's global precision.
mp = mpmath.MPContext()
mp.dps = 50

Exact = Union[int, Fraction]
Real = Union[int, Fraction, float, "mpmath.mpf"]


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def to_mp(x):
    """Convert any supported scalar into an mpf of the private context."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite int, Fraction, float or mpf."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    man, exp = mp.mpf(x).man_exp
    return Fraction(man) * (Fraction(2) ** exp)


def rational_floor(x, digits: int = 30) -> Fraction:
    """Largest multiple of 10**-digits not exceeding x (directed rounding down)."""
    if is_exact(x):
        return Fraction(x)
    scale = 10**digits
    v = to_mp(x) * scale
    return Fraction(int(mp.floor(v)), scale)


def as_float(x) -> float:
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)


def recognize_rational(x, max_den: int = 10**12) -> Fraction | None:
    """Best rational guess for a high-precision value (caller must confirm it exactly)."""
    if is_exact(x):
        return Fraction(x)
    f = to_fraction(x).limit_denominator(max_den)
    if abs(to_mp(f) - to_mp(x)) < mp.mpf(10) ** (-(mp.dps - 10)):
        return f
    return None


def bisect_root(func: Callable, lo, hi, tol=None, max_iter: int = 400):
    """Root of func on [lo, hi] by bisection, assuming a sign change.

    Works in the private mp context. Returns (lo, hi) with the root enclosed.
    """
    lo, hi = to_mp(lo), to_mp(hi)
    flo = func(lo)
    if flo == 0:
        return lo, lo
    fhi = func(hi)
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise ArithmeticError("no sign change on bracketing interval")
    tol = mp.mpf(10) ** (-(mp.dps - 5)) if tol is None else to_mp(tol)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = (lo + hi) / 2
        fm = func(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def real_roots_in(coeffs, lo, hi, tol=None) -> list:
    """Real roots in [lo, hi] of the polynomial with ascending coefficients.

    Candidates come from mp.polyroots and are then polished by bisection
    on a sign-change bracket, so each returned value is a certified enclosure midpoint.
    """
    coeffs = [to_mp(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg <= 0:
        return []

    def ev(t):
        return mp.polyval(coeffs[::-1], t)

    lo, hi = to_mp(lo), to_mp(hi)
    if deg == 1:
        cands = [-coeffs[0] / coeffs[1]]
    else:
        cands = mp.polyroots(coeffs[::-1], maxsteps=400, extraprec=4 * mp.prec)
    slack = mp.mpf(10) ** (-(mp.dps // 2))
    out = []
    for c in cands:
        if abs(mp.im(c)) > slack:
            continue
        r = mp.re(c)
        if r < lo - slack or r > hi + slack:
            continue
        r = min(max(r, lo), hi)
        # polish inside a small bracket when a sign change is visible
        width = mp.mpf(10) ** (-(mp.dps // 3))
        a, b = max(lo, r - width), min(hi, r + width)
        if ev(a) * ev(b) < 0:
            a, b = bisect_root(ev, a, b, tol)
            r = (a + b) / 2
        out.append(r)
    out.sort()
    return out


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a nonnegative rational when it is rational, else None."""
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def sign_witness(coeffs, lo, hi, want: str):
    """Exact check that a rational polynomial is <= 0 ("nonpos") or >= 0 ("nonneg") on [lo, hi].

    Real roots are isolated exactly; the sign is then constant between consecutive
    roots, so one rational sample per gap plus the endpoints decides the question.
    Returns None when the condition holds, else a rational point where it fails.
    """
    import sympy

    if want not in ("nonpos", "nonneg"):
        raise ValueError("want must be 'nonpos' or 'nonneg'")
    coeffs = [to_fraction(c) for c in coeffs]
    lo, hi = to_fraction(lo), to_fraction(hi)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()

    def ev(t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    samples = {lo, hi}
    if len(coeffs) > 1:
        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x)
        boxes = sorted((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
                       for (a, b), _ in poly.sqf_part().intervals())
        for (_, b1), (a2, _) in zip(boxes, boxes[1:]):
            mid = (b1 + a2) / 2
            if lo < mid < hi:
                samples.add(mid)
    sign = 1 if want == "nonpos" else -1
    worst = max(samples, key=lambda t: sign * ev(t))
    return worst if sign * ev(worst) > 0 else None
