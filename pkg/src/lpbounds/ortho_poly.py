"""Krawtchouk polynomials (exact) and normalized Jacobi/Gegenbauer polynomials.

Krawtchouk arithmetic follows the input type: ints and Fractions give exact
results, mpf inputs are evaluated in the package's high-precision context.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .numeric import as_float, is_exact, mp, to_fraction, to_mp


@dataclass(frozen=True)
class HammingSpace:
    n: int
    q: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"length n must be a positive integer, got {self.n!r}")
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"alphabet size q must be an integer >= 2, got {self.q!r}")

    @property
    def size(self) -> int:
        return self.q**self.n

    def weight(self, j: int) -> int:
        """(q-1)^j * C(n, j), the orthogonality weight of degree j."""
        return (self.q - 1) ** j * comb(self.n, j)


# ---------------------------------------------------------------------------
# evaluation


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _kraw_product(m: int, q: int, z):
    """K_{m+1}^{(m,q)}(z) via its product form."""
    val = Fraction(q ** (m + 1), factorial(m + 1))
    if not is_exact(z):
        val = to_mp(val)
    for u in range(m + 1):
        val = val * (u - z)
    return val


def kraw_values_at(m: int, q: int, z, upto: int) -> list:
    """[K_0(z), ..., K_upto(z)] for length m (m >= 0, upto <= m + 1)."""
    if upto < 0 or upto > m + 1:
        raise ValueError(f"degree {upto} out of range 0..{m + 1}")
    if isinstance(z, float):
        z = to_fraction(z)
    vals = [Fraction(1) if is_exact(z) else mp.mpf(1)]
    if upto == 0:
        return vals
    if m == 0:
        return vals + [_kraw_product(0, q, z)]
    vals.append(m * (q - 1) - q * z)
    for j in range(1, min(upto, m)):
        nxt = _div((j + (q - 1) * (m - j) - q * z) * vals[j] - (q - 1) * (m - j + 1) * vals[j - 1], j + 1)
        vals.append(nxt)
    if upto == m + 1:
        vals.append(_kraw_product(m, q, z))
    if is_exact(z):
        vals = [Fraction(v) for v in vals]
    return vals


def _kraw(m: int, q: int, i: int, z):
    return kraw_values_at(m, q, z, i)[i]


@lru_cache(maxsize=256)
def kraw_table(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    """table[i][u] = K_i^{(n,q)}(u) for 0 <= i, u <= n (integers)."""
    cols = [kraw_values_at(n, q, u, n) for u in range(n + 1)]
    return tuple(tuple(int(cols[u][i]) for u in range(n + 1)) for i in range(n + 1))


def kraw_eval(space: HammingSpace, i: int, z):
    """K_i(z) for 0 <= i <= n+1; i = n+1 uses the product form."""
    if not 0 <= i <= space.n + 1:
        raise ValueError(f"degree {i} out of range 0..{space.n + 1}")
    return _kraw(space.n, space.q, i, z)


@lru_cache(maxsize=1024)
def kraw_coeffs(m: int, q: int, i: int) -> tuple[Fraction, ...]:
    """Ascending monomial coefficients of K_i^{(m,q)}(z)."""
    if i == 0:
        return (Fraction(1),)
    if i == m + 1:
        poly = [Fraction(q ** (m + 1), factorial(m + 1))]
        for u in range(m + 1):
            poly = _poly_mul(poly, [Fraction(u), Fraction(-1)])
        return tuple(poly)
    prev, cur = [Fraction(1)], [Fraction(m * (q - 1)), Fraction(-q)]
    for j in range(1, i):
        a = _poly_scale(cur, j + (q - 1) * (m - j))
        a = _poly_add(a, [Fraction(0)] + _poly_scale(cur, -q))
        a = _poly_add(a, _poly_scale(prev, -(q - 1) * (m - j + 1)))
        prev, cur = cur, _poly_scale(a, Fraction(1, j + 1))
    return tuple(cur)


def _poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_scale(a, s):
    return [c * s for c in a]


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# polynomials in the Krawtchouk basis


@dataclass(frozen=True)
class KrawPoly:
    """Polynomial over (n, q) given by coefficients in the basis K_0..K_n."""

    space: HammingSpace
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.space.n + 1:
            raise ValueError(f"expected {self.space.n + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def basis(cls, space: HammingSpace, i: int) -> "KrawPoly":
        c = [0] * (space.n + 1)
        c[i] = 1
        return cls(space, tuple(c))

    @classmethod
    def from_values(cls, space: HammingSpace, values: Sequence) -> "KrawPoly":
        return kraw_expand(space, values)

    @classmethod
    def from_function(cls, space: HammingSpace, func) -> "KrawPoly":
        """Interpolate func at 0..n; the result agrees with func on every integer point."""
        return kraw_expand(space, [func(u) for u in range(space.n + 1)])

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1

    def __call__(self, z):
        deg = max(self.degree, 0)
        ks = kraw_values_at(self.space.n, self.space.q, z, deg)
        if is_exact(z) or isinstance(z, float):
            return sum((c * k for c, k in zip(self.coeffs, ks)), Fraction(0))
        return mp.fsum(to_mp(c) * k for c, k in zip(self.coeffs, ks))

    def values(self) -> tuple[Fraction, ...]:
        """f(0), ..., f(n)."""
        table = kraw_table(self.space.n, self.space.q)
        n = self.space.n
        return tuple(sum((self.coeffs[i] * table[i][u] for i in range(n + 1)), Fraction(0)) for u in range(n + 1))

    def _check(self, other: "KrawPoly"):
        if other.space != self.space:
            raise ValueError("polynomials live over different spaces")

    def __add__(self, other):
        if isinstance(other, KrawPoly):
            self._check(other)
            return KrawPoly(self.space, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        return self + KrawPoly.basis(self.space, 0) * other

    def __neg__(self):
        return KrawPoly(self.space, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, KrawPoly):
            # product modulo K_{n+1}: multiply point values on 0..n
            self._check(other)
            return kraw_expand(self.space, [a * b for a, b in zip(self.values(), other.values())])
        s = Fraction(other)
        return KrawPoly(self.space, tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__


def kraw_expand(space: HammingSpace, values: Sequence) -> KrawPoly:
    """KrawPoly whose values at 0..n are `values`."""
    n, q = space.n, space.q
    if len(values) != n + 1:
        raise ValueError(f"need exactly {n + 1} point values, got {len(values)}")
    vals = [Fraction(v) for v in values]
    table = kraw_table(n, q)
    scale = Fraction(1, q**n)
    coeffs = [scale * sum((vals[u] * table[u][i] for u in range(n + 1)), Fraction(0)) for i in range(n + 1)]
    return KrawPoly(space, tuple(coeffs))


@dataclass(frozen=True)
class DualPoly:
    """The dual of a polynomial, stored as sqrt(q)**sqrt_q_power * poly.

    sqrt_q_power is 0 or 1, so the irrational part of q^{n/2} stays symbolic.
    """

    poly: KrawPoly
    sqrt_q_power: int = 0

    @property
    def space(self) -> HammingSpace:
        return self.poly.space

    @property
    def scale(self):
        if self.sqrt_q_power == 0:
            return Fraction(1)
        return mp.sqrt(self.space.q)

    def to_krawpoly(self) -> KrawPoly:
        if self.sqrt_q_power:
            raise ValueError("scale is irrational; use .poly and .scale separately")
        return self.poly

    def value_ratio(self) -> Fraction:
        """g(0)/g_0, where the common positive scale cancels."""
        return self.poly.values()[0] / self.poly.coeffs[0]


def dual_poly(f) -> DualPoly:
    """q^{-n/2} * sum_j f(j) K_j, kept exact up to one symbolic sqrt(q)."""
    if isinstance(f, DualPoly):
        base, half_powers = f.poly, f.sqrt_q_power
    else:
        base, half_powers = f, 0
    space = base.space
    poly = KrawPoly(space, base.values())
    half_powers -= space.n
    whole, rest = divmod(half_powers, 2)
    return DualPoly(poly * Fraction(space.q) ** whole, rest)


def kernel_T(space: HammingSpace, i: int, z, w):
    """sum_{j<=i} K_j(z) K_j(w) / ((q-1)^j C(n,j))."""
    if not 0 <= i <= space.n:
        raise ValueError(f"kernel index {i} out of range 0..{space.n}")
    return _kernel(space.n, space.q, i, z, w)


def _kernel(m: int, q: int, i: int, z, w):
    kz = kraw_values_at(m, q, z, i)
    kw = kraw_values_at(m, q, w, i)
    if is_exact(z) and is_exact(w):
        return sum((kz[j] * kw[j] / Fraction((q - 1) ** j * comb(m, j)) for j in range(i + 1)), Fraction(0))
    return mp.fsum(to_mp(kz[j]) * to_mp(kw[j]) / ((q - 1) ** j * comb(m, j)) for j in range(i + 1))


def kernel_coeffs(m: int, q: int, i: int, w) -> list:
    """Ascending monomial coefficients in z of the kernel sum with second argument w."""
    kw = kraw_values_at(m, q, w, i)
    out = [Fraction(0)] * (i + 1) if is_exact(w) else [mp.mpf(0)] * (i + 1)
    for j in range(i + 1):
        weight = Fraction(1, (q - 1) ** j * comb(m, j))
        for t, c in enumerate(kraw_coeffs(m, q, j)):
            if is_exact(w):
                out[t] += c * weight * kw[j]
            else:
                out[t] += to_mp(c * weight) * kw[j]
    return out


def krein_coeffs(space: HammingSpace, i: int, j: int) -> tuple[Fraction, ...]:
    """Coefficients of K_i * K_j (mod K_{n+1}) in the Krawtchouk basis."""
    n = space.n
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError("indices must lie in 0..n")
    table = kraw_table(n, space.q)
    return kraw_expand(space, [table[i][u] * table[j][u] for u in range(n + 1)]).coeffs


# ---------------------------------------------------------------------------
# smallest roots


@dataclass(frozen=True)
class XiRoot:
    """Smallest root of a Krawtchouk polynomial with a rational enclosure."""

    value: float
    lower: Fraction
    upper: Fraction
    exact: Fraction | None = None


@lru_cache(maxsize=4096)
def _xi_bracket(m: int, q: int, i: int) -> int:
    """Least integer j with K_i^{(m)}(j) <= 0; the smallest root lies in (j-1, j]."""
    for j in range(1, m + 1):
        if _kraw(m, q, i, j) <= 0:
            return j
    raise ArithmeticError(f"no sign change for K_{i}^({m},{q}) on the integer grid")


def _xi_exact(m: int, q: int, i: int) -> Fraction | None:
    if i == 0:
        return Fraction(m + 1)
    if i == m + 1:
        return Fraction(0)
    j = _xi_bracket(m, q, i)
    if _kraw(m, q, i, j) == 0:
        return Fraction(j)
    return None


def compare_xi(m: int, q: int, i: int, x) -> int:
    """Exact sign of x - xi_i^{(m,q)}."""
    if not 0 <= i <= m + 1:
        raise ValueError(f"degree {i} out of range 0..{m + 1}")
    x = to_fraction(x)
    ex = _xi_exact(m, q, i)
    if ex is not None:
        return (x > ex) - (x < ex)
    j = _xi_bracket(m, q, i)
    if x <= j - 1:
        return -1
    if x >= j:
        return 1
    v = _kraw(m, q, i, x)
    return 0 if v == 0 else (-1 if v > 0 else 1)


@lru_cache(maxsize=4096)
def xi_mp(m: int, q: int, i: int):
    """High-precision value of the smallest root (length m may be 0)."""
    ex = _xi_exact(m, q, i)
    if ex is not None:
        return to_mp(ex)
    j = _xi_bracket(m, q, i)
    lo, hi = _bisect_kraw(m, q, i, j)
    return (lo + hi) / 2


def _bisect_kraw(m, q, i, j):
    from .numeric import bisect_root

    return bisect_root(lambda t: _kraw(m, q, i, t), mp.mpf(j - 1), mp.mpf(j))


def smallest_root_xi(space: HammingSpace, i: int, tol: float = 1e-12) -> XiRoot:
    """Smallest root of K_i (i = 0 gives n+1 by convention) with a rational bracket."""
    n, q = space.n, space.q
    if not 0 <= i <= n + 1:
        raise ValueError(f"degree {i} out of range 0..{n + 1}")
    return _xi_root(n, q, i, Fraction(tol))


def _xi_root(m: int, q: int, i: int, tol: Fraction) -> XiRoot:
    ex = _xi_exact(m, q, i)
    if ex is not None:
        return XiRoot(as_float(ex), ex, ex, ex)
    j = _xi_bracket(m, q, i)
    lo, hi = Fraction(j - 1), Fraction(j)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = _kraw(m, q, i, mid)
        if v == 0:
            return XiRoot(as_float(mid), mid, mid, mid)
        if v > 0:
            lo = mid
        else:
            hi = mid
    return XiRoot(as_float((lo + hi) / 2), lo, hi, None)


def locate_interval(space: HammingSpace, d) -> tuple[int, int]:
    """The (k, eps) whose Levenshtein interval contains d.

    Intervals are xi_k^{n-1-eps}+1 < d <= xi_{k-1+eps}^{n-2+eps}+1; all comparisons
    are exact. d = 1 is the closed left end of the last interval.
    """
    n, q = space.n, space.q
    x = to_fraction(d)
    if x < 1 or x > n:
        raise ValueError(f"d must lie in [1, {n}], got {d}")
    if n == 1:
        return (1, 0)
    if x == 1:
        return (n - 1, 1)
    y = x - 1
    k = 1
    while True:
        if compare_xi(n - 1, q, k, y) > 0:
            return (k, 0)
        if compare_xi(n - 2, q, k, y) > 0:
            return (k, 1)
        k += 1
        if k > n - 1:
            raise ArithmeticError("interval chain exhausted")


# ---------------------------------------------------------------------------
# Jacobi / Gegenbauer side


@dataclass(frozen=True)
class JacobiFamily:
    """P_i^{a,b} with exponents alpha = a + (n-3)/2, beta = b + (n-3)/2, normalized at t = 1."""

    n: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if self.a not in (0, 1) or self.b not in (0, 1):
            raise ValueError("a and b must be 0 or 1")

    @property
    def alpha(self) -> Fraction:
        return Fraction(2 * self.a + self.n - 3, 2)

    @property
    def beta(self) -> Fraction:
        return Fraction(2 * self.b + self.n - 3, 2)


def _poch(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


def _jacobi_step(fam: JacobiFamily, i: int):
    """Coefficients (A, B, C) with P_{i+1} = (A t + B) P_i - C P_{i-1}, normalized family, i >= 1."""
    al, be = fam.alpha, fam.beta
    if fam.a == 0 and fam.b == 0:
        # Gegenbauer form
        den = Fraction(i + fam.n - 2)
        return Fraction(2 * i + fam.n - 2) / den, Fraction(0), Fraction(i) / den
    s = 2 * i + al + be
    lead = 2 * (i + 1) * (i + al + be + 1) * s
    A = (s + 1) * (s + 2) * s / lead
    B = (s + 1) * (al * al - be * be) / lead
    C = 2 * (i + al) * (i + be) * (s + 2) / lead
    # rescale from the classical normalization to value 1 at t = 1
    r_next = _poch(al + 1, i + 1) / factorial(i + 1)
    r_cur = _poch(al + 1, i) / factorial(i)
    r_prev = _poch(al + 1, i - 1) / factorial(i - 1)
    return A * r_cur / r_next, B * r_cur / r_next, C * r_prev / r_next


@lru_cache(maxsize=512)
def _jacobi_steps(fam: JacobiFamily, upto: int) -> tuple:
    return tuple(_jacobi_step(fam, i) for i in range(1, upto))


def _jacobi_first(fam: JacobiFamily) -> tuple[Fraction, Fraction]:
    """P_1 = A t + B in the normalized family."""
    if fam.a == 0 and fam.b == 0:
        return Fraction(1), Fraction(0)
    al, be = fam.alpha, fam.beta
    # classical P_1 = (al+1) + (al+be+2)(t-1)/2, divided by al+1
    A = (al + be + 2) / 2
    B = (al + 1) - A
    return A / (al + 1), B / (al + 1)


def jacobi_values(fam: JacobiFamily, t, upto: int) -> list:
    """[P_0(t), ..., P_upto(t)]; exact for rational t, mpf otherwise."""
    exact = is_exact(t)
    conv = (lambda v: v) if exact else to_mp
    if not exact:
        t = to_mp(t)
    vals = [conv(Fraction(1))]
    if upto == 0:
        return vals
    A, B = _jacobi_first(fam)
    vals.append(conv(A) * t + conv(B))
    for i, (A, B, C) in enumerate(_jacobi_steps(fam, upto), start=1):
        vals.append((conv(A) * t + conv(B)) * vals[i] - conv(C) * vals[i - 1])
    return vals


def jacobi_eval(fam: JacobiFamily, i: int, t):
    """P_i^{a,b}(t) with P_i(1) = 1. Float input gives a float."""
    if i < 0:
        raise ValueError("degree must be nonnegative")
    v = jacobi_values(fam, t, i)[i]
    return float(v) if isinstance(t, float) else v


@lru_cache(maxsize=1024)
def jacobi_coeffs(fam: JacobiFamily, i: int) -> tuple[Fraction, ...]:
    """Ascending monomial coefficients of the normalized P_i^{a,b}."""
    prev = [Fraction(1)]
    if i == 0:
        return tuple(prev)
    A, B = _jacobi_first(fam)
    cur = [B, A]
    for A, B, C in _jacobi_steps(fam, i):
        nxt = _poly_add([Fraction(0)] + _poly_scale(cur, A), _poly_scale(cur, B))
        nxt = _poly_add(nxt, _poly_scale(prev, -C))
        prev, cur = cur, nxt
    return tuple(cur)


@lru_cache(maxsize=2048)
def greatest_zero_mp(fam: JacobiFamily, i: int):
    from .numeric import bisect_root

    if i == 0:
        if fam.a == 1 and fam.b == 1:
            return mp.mpf(-1)
        raise ValueError("P_0 has no zeros")
    left = mp.mpf(-1) if i == 1 else greatest_zero_mp(fam, i - 1)
    lo, hi = bisect_root(lambda t: jacobi_values(fam, t, i)[i], left, mp.mpf(1))
    return (lo + hi) / 2


def greatest_zero(fam: JacobiFamily, i: int) -> float:
    """Largest zero of P_i^{a,b}; i = 0 with (a,b) = (1,1) gives -1 by convention."""
    return float(greatest_zero_mp(fam, i))


def jacobi_r(fam: JacobiFamily, i: int) -> Fraction:
    """Weight r_i^{a,b} = 1 / (mean of P_i^2 under the normalized measure)."""
    if i == 0:
        return Fraction(1)
    al, be = fam.alpha, fam.beta
    return _poch(al + 1, i) * (2 * i + al + be + 1) * _poch(al + be + 2, i - 1) / (factorial(i) * _poch(be + 1, i))


def gegenbauer_r(n: int, i: int) -> Fraction:
    return jacobi_r(JacobiFamily(n, 0, 0), i)


def jacobi_kernel(fam: JacobiFamily, i: int, x, y):
    """sum_{j<=i} r_j P_j(x) P_j(y)."""
    px = jacobi_values(fam, x, i)
    py = jacobi_values(fam, y, i)
    terms = [jacobi_r(fam, j) * px[j] * py[j] if is_exact(x) and is_exact(y)
             else to_mp(jacobi_r(fam, j)) * to_mp(px[j]) * to_mp(py[j]) for j in range(i + 1)]
    return sum(terms) if is_exact(x) and is_exact(y) else mp.fsum(terms)


def jacobi_kernel_coeffs(fam: JacobiFamily, i: int, y) -> list:
    """Ascending monomial coefficients in x of the kernel sum with second argument y."""
    py = jacobi_values(fam, y, i)
    exact = is_exact(y)
    out = [Fraction(0) if exact else mp.mpf(0) for _ in range(i + 1)]
    for j in range(i + 1):
        r = jacobi_r(fam, j)
        for t, c in enumerate(jacobi_coeffs(fam, j)):
            out[t] += (r * c * py[j]) if exact else to_mp(r * c) * py[j]
    return out


MAX_EXPAND_DEGREE = 60


def gegenbauer_expand(mono_coeffs: Sequence, n: int, max_degree: int = MAX_EXPAND_DEGREE) -> list:
    """Coefficients f_i with f(t) = sum f_i P_i^{(n)}(t).

    Rational input is converted exactly and returned as Fractions; float input is
    converted exactly and the result rounded to floats; mpf input stays in mpf.
    """
    coeffs = list(mono_coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) - 1 > max_degree:
        raise ValueError(f"degree {len(coeffs) - 1} exceeds maximum {max_degree}")
    if not coeffs:
        return [Fraction(0)]
    mode = "exact"
    if any(not is_exact(c) and not isinstance(c, float) for c in coeffs):
        mode = "mp"
    elif any(isinstance(c, float) for c in coeffs):
        mode = "float"
    if mode == "mp":
        coeffs = [to_mp(c) for c in coeffs]
    else:
        coeffs = [to_fraction(c) for c in coeffs]
    # Horner in the Gegenbauer basis: v <- t*v + c
    vec = [coeffs[-1]]
    for c in reversed(coeffs[:-1]):
        vec = _times_t(vec, n)
        vec[0] += c
    if mode == "float":
        return [as_float(v) for v in vec]
    return vec


def _times_t(vec: list, n: int) -> list:
    """Multiply sum v_i P_i by t using t P_i = ((i+n-2) P_{i+1} + i P_{i-1}) / (2i+n-2)."""
    out = [0 * vec[0] for _ in range(len(vec) + 1)]
    for i, v in enumerate(vec):
        if v == 0:
            continue
        if i == 0:
            out[1] += v
            continue
        den = 2 * i + n - 2
        out[i + 1] += v * Fraction(i + n - 2, den) if not _is_mp(v) else v * (i + n - 2) / den
        out[i - 1] += v * Fraction(i, den) if not _is_mp(v) else v * i / den
    return out


def _is_mp(v) -> bool:
    return not isinstance(v, (int, Fraction))


def mono_eval(coeffs: Sequence, t):
    """Evaluate ascending monomial coefficients at t (exact when everything is rational)."""
    acc = 0
    for c in reversed(list(coeffs)):
        acc = acc * t + c
    return acc
