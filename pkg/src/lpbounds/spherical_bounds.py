"""Bounds for spherical codes and designs, universal energy bounds, explicit point sets."""
from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, lcm
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CodeFormatError, InvariantError, check_work
from .numeric import (
    bisect_root, exact_sqrt, is_exact, mp, real_roots_in, recognize_rational, sign_witness,
    to_fraction, to_mp,
)
from .ortho_poly import (
    JacobiFamily, gegenbauer_expand, gegenbauer_r, greatest_zero_mp, jacobi_coeffs,
    jacobi_kernel, jacobi_kernel_coeffs, jacobi_values, mono_eval,
)
from .potentials import PotentialFunction
from .reports import BoundReport, CertificateReport

NORM_TOLERANCE = 1e-8
NORM_WARN = 1e-10


def split_tau(tau: int) -> tuple[int, int]:
    """tau = 2k - 1 + eps with eps in {0, 1}."""
    if tau < 1:
        raise ValueError("tau must be at least 1")
    k = (tau + 1) // 2
    return k, tau - 2 * k + 1


# ---------------------------------------------------------------------------
# point sets


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class SphericalConfig:
    """A finite set of unit vectors in R^n.

    Points are stored as rational direction vectors together with their squared
    norms, so inner products u.v / sqrt(|u|^2 |v|^2) stay exact whenever the
    square root is rational (for instance for integer root systems or +-1 vectors).
    """

    def __init__(self, n: int, points: Sequence[Sequence], *, check_norm: bool = True):
        if n < 2:
            raise ValueError("dimension must be at least 2")
        raw = []
        for idx, p in enumerate(points):
            vec = tuple(to_fraction(c) for c in p)
            if len(vec) != n:
                raise ValueError(f"point {idx} has {len(vec)} coordinates, expected {n}")
            nsq = _dot(vec, vec)
            if nsq == 0:
                raise ValueError(f"point {idx} is the zero vector")
            if check_norm:
                dev = abs(float(mp.sqrt(to_mp(nsq))) - 1.0)
                if dev > NORM_TOLERANCE:
                    raise ValueError(f"point {idx} has norm off by {dev:.3g}")
                if dev > NORM_WARN:
                    warnings.warn(f"point {idx} re-normalized (norm off by {dev:.3g})", stacklevel=2)
            raw.append(vec)
        if len(raw) < 1:
            raise ValueError("a configuration needs at least one point")
        self.n = n
        self.directions: tuple[tuple[Fraction, ...], ...] = tuple(raw)
        self.norms_sq: tuple[Fraction, ...] = tuple(_dot(v, v) for v in raw)

    @classmethod
    def from_directions(cls, n: int, vectors: Sequence[Sequence]) -> "SphericalConfig":
        """Normalize arbitrary nonzero rational vectors onto the sphere."""
        return cls(n, vectors, check_norm=False)

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def size(self) -> int:
        return len(self.directions)

    def inner(self, i: int, j: int):
        return self._normalize(_dot(self.directions[i], self.directions[j]), self.norms_sq[i] * self.norms_sq[j])

    @staticmethod
    def _normalize(dot: Fraction, nsq_product: Fraction):
        root = exact_sqrt(nsq_product)
        if root is not None:
            return dot / root
        return to_mp(dot) / mp.sqrt(to_mp(nsq_product))

    def point(self, i: int) -> tuple:
        """Normalized coordinates (exact when the norm is rational)."""
        root = exact_sqrt(self.norms_sq[i])
        if root is not None:
            return tuple(c / root for c in self.directions[i])
        scale = mp.sqrt(to_mp(self.norms_sq[i]))
        return tuple(to_mp(c) / scale for c in self.directions[i])

    @cached_property
    def _integer_form(self):
        """Integer direction matrix (rows scaled by their denominators) and squared norms."""
        rows, nsq = [], []
        for v in self.directions:
            den = lcm(*(c.denominator for c in v))
            row = [int(c * den) for c in v]
            rows.append(row)
            nsq.append(sum(x * x for x in row))
        big = max(abs(x) for r in rows for x in r)
        dtype = np.int64 if big * big * self.n < 2**62 else object
        return np.array(rows, dtype=dtype), np.array(nsq, dtype=object)

    @cached_property
    def inner_product_counts(self) -> dict:
        """Distribution of inner products over ordered pairs of distinct points."""
        M = self.size
        check_work(M * M * self.n, 10**9, "inner products of a point set")
        U, nsq = self._integer_form
        keys: Counter = Counter()
        block = max(1, 2_000_000 // max(M, 1))
        same_norm = len(set(nsq.tolist())) == 1 and U.dtype != object
        for start in range(0, M, block):
            G = U[start:start + block] @ U.T
            if same_norm:
                # one norm for every point: histogram the dot products, then drop the diagonal
                vals, cnts = np.unique(G, return_counts=True)
                prod = int(nsq[0]) ** 2
                for v, c in zip(vals.tolist(), cnts.tolist()):
                    keys[(v, prod)] += c
                keys[(int(nsq[0]), prod)] -= G.shape[0]
                continue
            for r in range(G.shape[0]):
                i = start + r
                row = G[r]
                for j in range(M):
                    if j != i:
                        keys[(int(row[j]), int(nsq[i]) * int(nsq[j]))] += 1
        keys = Counter({k: v for k, v in keys.items() if v})
        out: Counter = Counter()
        for (dot, prod), cnt in keys.items():
            out[self._normalize(Fraction(dot), Fraction(prod))] += cnt
        return dict(out)

    @cached_property
    def max_inner(self):
        """s = largest inner product between distinct points."""
        if self.size < 2:
            raise ValueError("s needs at least two points")
        return max(self.inner_product_counts, key=to_mp)

    @property
    def s(self):
        return self.max_inner

    @property
    def min_distance(self):
        """d = sqrt(2 - 2s)."""
        v = 2 - 2 * self.s
        if is_exact(v):
            root = exact_sqrt(v)
            if root is not None:
                return root
        return mp.sqrt(to_mp(v))

    def gram(self) -> list[list]:
        return [[self.inner(i, j) for j in range(self.size)] for i in range(self.size)]


def parse_points(text: str) -> SphericalConfig:
    """Parse `#dim=<n>` followed by one whitespace-separated point per line."""
    n = None
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].replace(" ", "")
            if body.startswith("dim="):
                try:
                    n = int(body[4:])
                except ValueError:
                    raise CodeFormatError("bad dimension header", lineno) from None
            continue
        if n is None:
            raise CodeFormatError("missing '#dim=<n>' header before the first point", lineno)
        try:
            vec = [Fraction(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            raise CodeFormatError(f"cannot parse coordinates {line!r}", lineno) from None
        if len(vec) != n:
            raise CodeFormatError(f"expected {n} coordinates, got {len(vec)}", lineno)
        nsq = _dot(vec, vec)
        dev = abs(float(mp.sqrt(to_mp(nsq))) - 1.0) if nsq else 1.0
        if dev > NORM_TOLERANCE:
            raise CodeFormatError(f"point is not on the unit sphere (norm off by {dev:.3g})", lineno)
        if dev > NORM_WARN:
            warnings.warn(f"line {lineno}: point re-normalized (norm off by {dev:.3g})", stacklevel=2)
        pts.append(vec)
    if n is None:
        raise CodeFormatError("missing '#dim=<n>' header")
    if not pts:
        raise CodeFormatError("no points")
    return SphericalConfig(n, pts, check_norm=False)


def read_points(path) -> SphericalConfig:
    return parse_points(Path(path).read_text())


def _coord_str(c) -> str:
    """Terminating decimals are written exactly, everything else to 30 digits."""
    if is_exact(c):
        c = Fraction(c)
        den = c.denominator
        for p in (2, 5):
            while den % p == 0:
                den //= p
        if den == 1:
            digits = 0
            while (c * 10**digits).denominator != 1:
                digits += 1
            return _fixed(c, digits)
    return mp.nstr(to_mp(c), 30)


def _fixed(c: Fraction, digits: int) -> str:
    scaled = c * 10**digits
    sign = "-" if scaled < 0 else ""
    v = abs(int(scaled))
    if digits == 0:
        return f"{sign}{v}"
    s = str(v).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def format_points(config: SphericalConfig) -> str:
    lines = [f"#dim={config.n}"]
    for i in range(config.size):
        lines.append(" ".join(_coord_str(c) for c in config.point(i)))
    return "\n".join(lines) + "\n"


def write_points(config: SphericalConfig, path) -> None:
    Path(path).write_text(format_points(config))


# ---------------------------------------------------------------------------
# DGS bound and the interval chain


def dgs_bound(n: int, tau: int) -> int:
    """Lower bound on the size of a spherical tau-design on S^{n-1}."""
    if n < 2:
        raise ValueError("n must be at least 2")
    k, eps = split_tau(tau)
    return comb(n + k - 2 + eps, n - 1) + comb(n + k - 2, n - 1)


@lru_cache(maxsize=1024)
def interval_ends(n: int, tau: int) -> tuple:
    """Ends of the interval of s served by the degree-tau branch (mp values)."""
    k, eps = split_tau(tau)
    left = greatest_zero_mp(JacobiFamily(n, 1, 1 - eps), k - 1 + eps)
    right = greatest_zero_mp(JacobiFamily(n, 1, eps), k)
    return left, right


def locate_tau(n: int, s) -> int:
    """Smallest tau whose interval contains s (neighbouring branches agree at shared ends)."""
    if not -1 <= s < 1:
        raise ValueError("s must lie in [-1, 1)")
    sv = to_mp(s)
    tau = 1
    while True:
        if sv <= interval_ends(n, tau)[1]:
            return tau
        tau += 1
        if tau > 400:
            raise ArithmeticError("interval chain exhausted")


@lru_cache(maxsize=256)
def _r_sum(n: int, upto: int) -> Fraction:
    return sum((gegenbauer_r(n, i) for i in range(upto + 1)), Fraction(0))


def levenshtein_branch(n: int, tau: int, s):
    """(1 - P^{1,0}_{k-1+eps}(s) / P^{0,eps}_k(s)) * sum_{i<k+eps} r_i; exact for rational s."""
    k, eps = split_tau(tau)
    num = jacobi_values(JacobiFamily(n, 1, 0), s, k - 1 + eps)[-1]
    den = jacobi_values(JacobiFamily(n, 0, eps), s, k)[-1]
    total = _r_sum(n, k - 1 + eps)
    if is_exact(s):
        return (1 - num / den) * total
    return (1 - num / den) * to_mp(total)


def levenshtein_sphere(n: int, s) -> BoundReport:
    """Upper bound on the size of a spherical code on S^{n-1} with maximal inner product s."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not -1 <= s < 1:
        raise ValueError("s must lie in [-1, 1)")
    tau = locate_tau(n, s)
    k, eps = split_tau(tau)
    value = levenshtein_branch(n, tau, s if is_exact(s) else to_mp(s))
    return BoundReport("levenshtein", "upper", value, extra={"tau": tau, "k": k, "eps": eps})


def endpoint_values(n: int, tau: int) -> tuple:
    """Values of the degree tau-1 and tau branches where their intervals meet, and D(n, tau)."""
    if tau < 2:
        raise ValueError("tau must be at least 2")
    t = interval_ends(n, tau)[0]
    return levenshtein_branch(n, tau - 1, t), levenshtein_branch(n, tau, t), dgs_bound(n, tau)


# ---------------------------------------------------------------------------
# certificate checks


def _poly_tolerance(coeffs) -> Fraction:
    if all(is_exact(c) for c in coeffs):
        return Fraction(0)
    scale = max([1.0] + [abs(float(c)) for c in coeffs])
    if any(not isinstance(c, (int, Fraction, float)) for c in coeffs):
        return to_fraction(mp.mpf(10) ** (-(mp.dps // 2)) * scale)
    return Fraction(1e-12) * Fraction(scale)


def _expansion(coeffs, n: int, tol: Fraction):
    """Gegenbauer coefficients and the tolerance in a comparable number type."""
    if all(is_exact(c) for c in coeffs):
        return gegenbauer_expand([Fraction(c) for c in coeffs], n), tol
    return gegenbauer_expand([to_mp(c) for c in coeffs], n), to_mp(tol)


def lp_check_sphere(f: Sequence, n: int, s) -> CertificateReport:
    """Check f <= 0 on [-1, s] and f_0 > 0, f_i >= 0; bound f(1)/f_0 on the code size."""
    coeffs = list(f)
    tol = _poly_tolerance(coeffs)
    shifted = [to_fraction(c) for c in coeffs]
    shifted[0] -= tol
    bad = sign_witness(shifted, -1, s, "nonpos")
    if bad is not None:
        return CertificateReport(False, None, "A1", bad, f"f({bad}) is positive")
    ex, tol = _expansion(coeffs, n, tol)
    if ex[0] <= tol:
        return CertificateReport(False, None, "A2", 0, "f_0 must be positive")
    for i, c in enumerate(ex[1:], start=1):
        if c < -tol:
            return CertificateReport(False, None, "A2", i, f"coefficient f_{i} is negative")
    return CertificateReport(True, mono_eval(coeffs, 1) / ex[0])


def design_lp_check_sphere(f: Sequence, n: int, tau: int) -> CertificateReport:
    """Check f >= 0 on [-1, 1] and f_0 > 0, f_i <= 0 for i > tau; bound f(1)/f_0 on design size."""
    coeffs = list(f)
    tol = _poly_tolerance(coeffs)
    shifted = [to_fraction(c) for c in coeffs]
    shifted[0] += tol
    bad = sign_witness(shifted, -1, 1, "nonneg")
    if bad is not None:
        return CertificateReport(False, None, "B1", bad, f"f({bad}) is negative")
    ex, tol = _expansion(coeffs, n, tol)
    if ex[0] <= tol:
        return CertificateReport(False, None, "B2", 0, "f_0 must be positive")
    for i in range(tau + 1, len(ex)):
        if ex[i] > tol:
            return CertificateReport(False, None, "B2", i, f"coefficient f_{i} is positive")
    return CertificateReport(True, mono_eval(coeffs, 1) / ex[0])


def _h_finite(h: PotentialFunction, t):
    try:
        v = h(t)
    except (ZeroDivisionError, ValueError):
        return None
    v = to_mp(v)
    return v if mp.isfinite(v) else None


def min_gap(f: Sequence, h: PotentialFunction, grid: int = 2000):
    """Approximate minimum of h - f on [-1, 1] with its location.

    A Chebyshev-spaced grid brackets local minima; each is refined by bisection on
    h' - f' when a sign change is visible, otherwise by golden-section search.
    """
    coeffs = [to_mp(c) for c in f]
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:] or [mp.mpf(0)]

    def g(t):
        hv = _h_finite(h, t)
        return None if hv is None else hv - mp.polyval(coeffs[::-1], t)

    def dg(t):
        return to_mp(h.deriv(t)) - mp.polyval(dcoeffs[::-1], t)

    ts = [-mp.cos(mp.pi * j / grid) for j in range(grid + 1)]
    ts[0], ts[-1] = mp.mpf(-1), mp.mpf(1)
    vals = [g(t) for t in ts]
    best_t, best_v = None, None
    for j, (t, v) in enumerate(zip(ts, vals)):
        if v is None:
            continue
        if best_v is None or v < best_v:
            best_t, best_v = t, v
        left = vals[j - 1] if j > 0 else None
        right = vals[j + 1] if j < grid else None
        if j == 0 or j == grid or left is None or right is None or not (v <= left and v <= right):
            continue
        a, b = ts[j - 1], ts[j + 1]
        t_star = None
        if h.derivative is not None:
            da, db = dg(a), dg(b)
            if da < 0 < db:
                lo, hi = bisect_root(dg, a, b)
                t_star = (lo + hi) / 2
        if t_star is None:
            phi = (mp.sqrt(5) - 1) / 2
            x1, x2 = b - phi * (b - a), a + phi * (b - a)
            for _ in range(160):
                if g(x1) < g(x2):
                    b = x2
                else:
                    a = x1
                x1, x2 = b - phi * (b - a), a + phi * (b - a)
            t_star = (a + b) / 2
        gv = g(t_star)
        if gv is not None and gv < best_v:
            best_t, best_v = t_star, gv
    return best_t, best_v


def energy_lp_check_sphere(f: Sequence, n: int, M, h: PotentialFunction) -> CertificateReport:
    """Check f <= h on [-1, 1] and f_0 > 0, f_i >= 0; bound M (f_0 M - f(1)) on the energy."""
    coeffs = list(f)
    tol = _poly_tolerance(coeffs)
    t_min, gap = min_gap(coeffs, h)
    scale = max([mp.mpf(1)] + [abs(to_mp(c)) for c in coeffs])
    if gap is not None and gap < -max(to_mp(tol), mp.mpf(10) ** (-(mp.dps // 2))) * scale:
        return CertificateReport(False, None, "C1", t_min, f"f exceeds h near t = {mp.nstr(t_min, 12)}")
    ex, tol = _expansion(coeffs, n, tol)
    if ex[0] <= tol:
        return CertificateReport(False, None, "C2", 0, "f_0 must be positive")
    for i, c in enumerate(ex[1:], start=1):
        if c < -tol:
            return CertificateReport(False, None, "C2", i, f"coefficient f_{i} is negative")
    M = Fraction(M)
    f1 = mono_eval(coeffs, 1)
    if is_exact(ex[0]) and is_exact(f1):
        return CertificateReport(True, M * (ex[0] * M - f1))
    return CertificateReport(True, to_mp(M) * (to_mp(ex[0]) * to_mp(M) - to_mp(f1)))


# ---------------------------------------------------------------------------
# quadrature and the universal lower bound


@dataclass(frozen=True)
class SphericalQuadrature:
    """Nodes alpha_1 < ... < alpha_{k+eps} = s and weights; the point t = 1 carries 1/L."""

    n: int
    tau: int
    eps: int
    s: object
    nodes: tuple
    weights: tuple
    L: object
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def k(self) -> int:
        return split_tau(self.tau)[0]

    def apply(self, func):
        """func(1)/L + sum rho_i func(alpha_i)."""
        return to_mp(func(mp.mpf(1))) / to_mp(self.L) + mp.fsum(
            to_mp(w) * to_mp(func(a)) for w, a in zip(self.weights, self.nodes))

    def residuals(self, upto: int | None = None) -> list:
        """Quadrature defect on the Gegenbauer basis P_0..P_upto (zero for upto <= tau)."""
        upto = self.tau if upto is None else upto
        fam = JacobiFamily(self.n, 0, 0)
        per_node = [jacobi_values(fam, a, upto) for a in self.nodes]
        out = []
        for j in range(upto + 1):
            mean = mp.mpf(1) if j == 0 else mp.mpf(0)
            est = 1 / to_mp(self.L) + mp.fsum(to_mp(w) * vals[j] for w, vals in zip(self.weights, per_node))
            out.append(est - mean)
        return out


def _route_two_roots(n: int, tau: int, M) -> list:
    """Roots of (R - M) P^{0,eps}_k(x) - R P^{1,0}_{k-1+eps}(x): the other solutions of M = L(n, x)."""
    k, eps = split_tau(tau)
    R = _r_sum(n, k - 1 + eps)
    a = jacobi_coeffs(JacobiFamily(n, 0, eps), k)
    b = jacobi_coeffs(JacobiFamily(n, 1, 0), k - 1 + eps)
    size = max(len(a), len(b))
    coeffs = [(R - M) * (a[i] if i < len(a) else 0) - R * (b[i] if i < len(b) else 0) for i in range(size)]
    return real_roots_in([to_mp(c) for c in coeffs], -1, 1)


def sphere_quadrature(n: int, tau: int, s, validate: bool = True) -> SphericalQuadrature:
    """Quadrature data for the degree-tau branch at s (nodes from the kernel zeros)."""
    k, eps = split_tau(tau)
    sv = s if is_exact(s) else to_mp(s)
    fam = JacobiFamily(n, 1, eps)
    inner = []
    if k >= 2:
        kc = jacobi_kernel_coeffs(fam, k - 1, sv)
        inner = [r for r in real_roots_in([to_mp(c) for c in kc], -1, to_mp(sv)) if r < to_mp(sv)]
        if len(inner) != k - 1:
            raise InvariantError(f"expected {k - 1} kernel zeros, found {len(inner)}")
    nodes = ([mp.mpf(-1)] if eps else []) + inner + [to_mp(sv)]
    c = mp.mpf(1) if eps == 0 else mp.mpf(n) / (n - 1)
    weights = []
    for a in nodes[eps:]:
        weights.append(1 / (c * (1 + a) ** eps * (1 - a) * jacobi_kernel(fam, k - 1, a, a)))
    L = levenshtein_branch(n, tau, sv)
    if eps:
        base = JacobiFamily(n, 0, 0)

        def T(u, v):
            return jacobi_kernel(base, k, to_mp(u), to_mp(v))

        w1 = T(sv, 1) / (T(-1, -1) * T(sv, 1) - T(-1, 1) * T(sv, -1))
        weights.insert(0, w1)
    quad = SphericalQuadrature(n, tau, eps, s, tuple(nodes), tuple(weights), L)
    if validate:
        worst = max(abs(r) for r in quad.residuals())
        if worst > mp.mpf(10) ** -9:
            raise InvariantError(f"quadrature residual {mp.nstr(worst, 5)} at n={n}, tau={tau}")
        # a weight may vanish at the ends of a window, never go negative
        if any(w < -mp.mpf(10) ** -20 for w in weights):
            raise InvariantError("negative quadrature weight")
    return quad


def ulb_window(n: int, M) -> int:
    """tau with D(n, tau) < M <= D(n, tau + 1)."""
    if M <= dgs_bound(n, 1):
        raise ValueError(f"M must exceed {dgs_bound(n, 1)}")
    tau = 1
    while not (dgs_bound(n, tau) < M <= dgs_bound(n, tau + 1)):
        tau += 1
    return tau


def solve_s(n: int, tau: int, M):
    """Largest s in the tau-th interval with L_tau(n, s) = M."""
    left, right = interval_ends(n, tau)
    Mv = to_mp(Fraction(M))
    # the branch runs from D(n, tau) to D(n, tau + 1) over its interval
    if M == dgs_bound(n, tau + 1):
        s = right
    elif M == dgs_bound(n, tau):
        s = left
    else:
        lo, hi = bisect_root(lambda x: levenshtein_branch(n, tau, x) - Mv, left, right)
        s = (lo + hi) / 2
    guess = recognize_rational(s)
    if guess is not None and levenshtein_branch(n, tau, guess) == Fraction(M):
        return guess
    return s


def _maybe_exact(x, max_den: int = 10**6):
    """Rational value of x when one with a small denominator matches to 30 digits."""
    if is_exact(x):
        return x
    guess = to_fraction(x).limit_denominator(max_den)
    if abs(to_mp(guess) - to_mp(x)) < mp.mpf(10) ** -30 * max(1, abs(to_mp(x))):
        return guess
    return None


def ulb_sphere(n: int, M, h: PotentialFunction, tau: int | None = None) -> BoundReport:
    """Universal lower bound M^2 sum rho_i h(alpha_i) on the h-energy of M points on S^{n-1}.

    `tau` forces a branch (used for continuity checks at window ends); by default the
    window D(n, tau) < M <= D(n, tau + 1) decides it.
    """
    if h.domain != "sphere":
        raise ValueError("h must be a sphere potential")
    if tau is None:
        tau = ulb_window(n, M)
    elif not dgs_bound(n, tau) <= M <= dgs_bound(n, tau + 1):
        raise ValueError(f"M = {M} is outside the closed window of tau = {tau}")
    s = solve_s(n, tau, M)
    quad = sphere_quadrature(n, tau, s)
    others = _route_two_roots(n, tau, Fraction(M))
    kernel_nodes = list(quad.nodes[quad.eps:])
    gap = mp.mpf(0)
    if len(others) == len(kernel_nodes):
        gap = max(abs(a - b) for a, b in zip(others, kernel_nodes))
    else:
        gap = mp.inf
    quad.extra["route_gap"] = gap
    Mv = to_mp(Fraction(M))
    numeric = Mv * Mv * mp.fsum(w * to_mp(h(a)) for w, a in zip(quad.weights, quad.nodes))
    exact = _maybe_exact(numeric)
    return BoundReport(
        "ulb", "lower", exact if exact is not None else numeric,
        quadrature=quad,
        extra={"tau": tau, "s": s, "numeric": numeric, "route_gap": gap,
               "potential": h.label, "monotone": h.monotone},
        notes="" if h.monotone else "potential not declared absolutely monotone; bound may not apply",
    )


def test_quantity_Q(quad: SphericalQuadrature, j: int):
    """1/L + sum rho_i P_j(alpha_i); negative values mean the bound can be improved."""
    if j <= quad.tau:
        raise ValueError(f"j must exceed tau = {quad.tau}")
    fam = JacobiFamily(quad.n, 0, 0)
    return 1 / to_mp(quad.L) + mp.fsum(w * jacobi_values(fam, a, j)[j] for w, a in zip(quad.weights, quad.nodes))


def test_quantities(quad: SphericalQuadrature, upto: int) -> dict:
    return {j: test_quantity_Q(quad, j) for j in range(quad.tau + 1, upto + 1)}


def hermite_certificate(quad: SphericalQuadrature, h: PotentialFunction) -> list:
    """Degree-tau polynomial matching h at the nodes and h' at the nodes other than -1."""
    rows, rhs = [], []
    deg = quad.tau
    for idx, a in enumerate(quad.nodes):
        a = to_mp(a)
        rows.append([a ** p for p in range(deg + 1)])
        rhs.append(to_mp(h(a)))
        if quad.eps and idx == 0:
            continue
        rows.append([p * a ** (p - 1) if p else mp.mpf(0) for p in range(deg + 1)])
        rhs.append(to_mp(h.deriv(a)))
    if len(rows) != deg + 1:
        raise InvariantError("Hermite system is not square")
    sol = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
    return [sol[i] for i in range(deg + 1)]


# ---------------------------------------------------------------------------
# energies


def energy_from_inner_products(counts: dict, h: PotentialFunction):
    """sum over ordered pairs of h(inner product), given a histogram of inner products."""
    total = Fraction(0)
    exact = True
    parts = []
    for t, cnt in counts.items():
        hv = _h_finite(h, t)
        if hv is None:
            raise ValueError(f"potential is singular at inner product {t}")
        v = h(t)
        if is_exact(v):
            total += cnt * v
        else:
            exact = False
            parts.append(cnt * to_mp(v))
    if exact:
        return total
    return to_mp(total) + mp.fsum(parts)


def energy_sphere(config: SphericalConfig, h: PotentialFunction):
    """h-energy of a point set: sum over ordered pairs of distinct points."""
    return energy_from_inner_products(config.inner_product_counts, h)


def binary_image_energy(n: int, size: int, distribution: dict, h: PotentialFunction):
    """Energy of the sphere image of a binary code from its distance distribution.

    Distance i maps to inner product 1 - 2i/n; distribution[i] is the average number
    of codewords at distance i from a codeword.
    """
    counts = {}
    for i, b in distribution.items():
        if i == 0 or b == 0:
            continue
        counts[1 - Fraction(2 * i, n)] = Fraction(b) * size
    return energy_from_inner_products(counts, h)


def design_strength(config: SphericalConfig, upto: int = 20) -> int:
    """Largest t <= upto with sum_{x,y} P_j((x,y)) = 0 for j = 1..t (diagonal included)."""
    fam = JacobiFamily(config.n, 0, 0)
    counts = dict(config.inner_product_counts)
    counts[Fraction(1)] = counts.get(Fraction(1), 0) + config.size
    totals = [0] * (upto + 1)
    exact = all(is_exact(t) for t in counts)
    for t, cnt in counts.items():
        vals = jacobi_values(fam, t, upto)
        for j in range(upto + 1):
            totals[j] += cnt * vals[j]
    tol = 0 if exact else mp.mpf(10) ** -20 * config.size ** 2
    strength = 0
    for j in range(1, upto + 1):
        if abs(totals[j]) > tol:
            break
        strength = j
    return strength


def sphere_attainment(config: SphericalConfig, upto: int = 20) -> dict:
    """Design strength, number of inner products, Levenshtein attainment and universality."""
    s = config.s
    distinct = len(config.inner_product_counts)
    strength = design_strength(config, upto)
    lev = levenshtein_sphere(config.n, s)
    gap = to_mp(lev.value) - config.size
    return {
        "size": config.size,
        "s": s,
        "inner_products": distinct,
        "strength": strength,
        "levenshtein": lev.value,
        "attains_levenshtein": abs(gap) < mp.mpf(10) ** -20,
        "universally_optimal": strength >= 2 * distinct - 1,
    }
