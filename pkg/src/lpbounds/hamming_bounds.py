"""Universal bounds in Hamming space.

Covers Singleton, sphere-packing/Rao, the piecewise Levenshtein bound with its
quadrature rule and extremal polynomial, test functions, and the universal
lower bound on potential energy.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import CertificateViolation, InvariantError
from .lp_engine import verify_certificate
from .numeric import as_float, is_exact, mp, recognize_rational, to_fraction, to_mp
from .ortho_poly import (
    DualPoly,
    HammingSpace,
    KrawPoly,
    _kernel,
    _kraw,
    compare_xi,
    dual_poly,
    kernel_coeffs,
    kraw_table,
    kraw_values_at,
    locate_interval,
    xi_mp,
    _xi_exact,
)
from .numeric import real_roots_in
from .potentials import PotentialFunction
from .reports import BoundReport

IDENTITY_TOL = 1e-9


def sphere_volume(space: HammingSpace, k: int) -> int:
    """Number of words within distance k of a fixed word."""
    if not 0 <= k <= space.n:
        raise ValueError(f"radius must lie in 0..{space.n}")
    return _volume(space.n, space.q, k)


def _volume(m: int, q: int, k: int) -> int:
    return sum((q - 1) ** i * comb(m, i) for i in range(min(k, m) + 1))


def H_value(space: HammingSpace, d: int) -> int:
    """q^eps * V_k(n - eps, q) where d = 2k + 1 + eps; defined for every d >= 1."""
    if d < 1:
        raise ValueError("d must be at least 1")
    k, eps = divmod(d - 1, 2)
    return space.q**eps * _volume(space.n - eps, space.q, k)


def hamming_upper(space: HammingSpace, d: int) -> Fraction:
    return Fraction(space.q**space.n, H_value(space, d))


def rao_lower(space: HammingSpace, dual_d: int) -> Fraction:
    return Fraction(H_value(space, dual_d))


def singleton_pair(space: HammingSpace, d: int | None = None, dual_d: int | None = None):
    """(q^{d'-1}, q^{n-d+1}); a side is None when its distance is not given."""
    n, q = space.n, space.q
    lower = upper = None
    if d is not None:
        if not 1 <= d <= n:
            raise ValueError(f"d must lie in 1..{n}")
        upper = q ** (n - d + 1)
    if dual_d is not None:
        if not 1 <= dual_d <= n + 1:
            raise ValueError(f"d' must lie in 1..{n + 1}")
        lower = q ** (dual_d - 1)
    return lower, upper


def mds_condition(space: HammingSpace, d: int, dual_d: int) -> bool:
    """Both Singleton bounds can only be tight together when d + d' = n + 2."""
    return d + dual_d == space.n + 2


def rao_hamming_pair(space: HammingSpace, d: int | None = None, dual_d: int | None = None):
    lower = rao_lower(space, dual_d) if dual_d is not None else None
    upper = hamming_upper(space, d) if d is not None else None
    return lower, upper


# ---------------------------------------------------------------------------
# Levenshtein bound


def _lev_branch(m: int, q: int, k: int, z):
    """V_{k-1}(m) - (q-1)^k C(m,k) K_{k-1}^{(m-1)}(z-1) / K_k^{(m)}(z)."""
    num = _kraw(m - 1, q, k - 1, z - 1)
    den = _kraw(m, q, k, z)
    c = (q - 1) ** k * comb(m, k)
    if is_exact(z):
        return _volume(m, q, k - 1) - Fraction(c) * num / den
    return _volume(m, q, k - 1) - c * to_mp(num) / to_mp(den)


def levenshtein_branch(space: HammingSpace, k: int, eps: int, d):
    """q^eps * L_k^{n-eps}(d) for an explicitly chosen branch (k, eps)."""
    n, q = space.n, space.q
    if n == 1 or (to_fraction(d) == 1 and (k, eps) == (n - 1, 1)):
        return Fraction(q**n)
    return q**eps * _lev_branch(n - eps, q, k, d)


def levenshtein_value(space: HammingSpace, d, k_eps: tuple[int, int] | None = None):
    """L^{n,q}(d); exact for rational d."""
    k, eps = k_eps or locate_interval(space, d)
    if isinstance(d, float):
        d = to_fraction(d)
    return levenshtein_branch(space, k, eps, d)


def interval_ends(space: HammingSpace, k: int, eps: int):
    """(left, right) = (xi_k^{n-1-eps} + 1, xi_{k-1+eps}^{n-2+eps} + 1) as mp values."""
    n, q = space.n, space.q
    return xi_mp(n - 1 - eps, q, k) + 1, xi_mp(n - 2 + eps, q, k - 1 + eps) + 1


@dataclass(frozen=True)
class QuadratureData:
    """Nodes alpha_1 = d < ... < alpha_{k+eps} and weights rho_i; alpha_0 = 0 carries 1/L."""

    space: HammingSpace
    d: Fraction
    k: int
    eps: int
    L: object
    nodes: tuple
    weights: tuple
    exact: bool

    @property
    def degree(self) -> int:
        return 2 * self.k - 1 + self.eps

    @property
    def all_nodes(self) -> tuple:
        return (Fraction(0),) + tuple(self.nodes)

    def apply(self, f):
        """f(0)/L + sum rho_i f(alpha_i) for a callable f."""
        if self.exact:
            return f(Fraction(0)) / self.L + sum((w * f(a) for w, a in zip(self.weights, self.nodes)), Fraction(0))
        return to_mp(f(Fraction(0))) / to_mp(self.L) + mp.fsum(to_mp(w) * to_mp(f(a)) for w, a in zip(self.weights, self.nodes))


def _kernel_zeros(m: int, q: int, i: int, y, expected: int) -> list:
    """Zeros x of sum_{j<=i} K_j(x)K_j(y)/w_j; rational zeros are returned exactly."""
    if i == 0:
        return []
    coeffs = kernel_coeffs(m, q, i, y)
    roots = real_roots_in(coeffs, -1, m + 2)
    if len(roots) != expected:
        raise InvariantError(f"expected {expected} kernel zeros, found {len(roots)}")
    out = []
    for r in roots:
        guess = recognize_rational(r)
        if guess is not None and is_exact(y) and _kernel(m, q, i, guess, y) == 0:
            out.append(guess)
        else:
            out.append(r)
    return out


def levenshtein_quadrature(space: HammingSpace, d, validate: bool = True) -> QuadratureData:
    """Quadrature rule exact for polynomials of degree <= 2k - 1 + eps."""
    n, q = space.n, space.q
    x = to_fraction(d)
    if x < 1 or x > n:
        raise ValueError(f"d must lie in [1, {n}]")
    k, eps = locate_interval(space, x)
    return _quadrature(space, x, k, eps, validate)


def _quadrature(space: HammingSpace, x: Fraction, k: int, eps: int, validate: bool = True) -> QuadratureData:
    n, q = space.n, space.q
    L = levenshtein_branch(space, k, eps, x)
    m = n - 1 - eps
    inner = [z + 1 for z in _kernel_zeros(m, q, k - 1, x - 1, k - 1)] if k > 1 else []
    nodes = [x] + inner
    exact = all(is_exact(a) for a in nodes)
    cst = Fraction((q - 1) * n * (n - 1) ** eps, q ** (1 + eps))
    weights = []
    for a in nodes:
        t = _kernel(m, q, k - 1, a - 1, a - 1)
        den = a * (n - a) ** eps * t
        weights.append(cst / den if exact else to_mp(cst) / to_mp(den))
    if eps:
        nodes.append(Fraction(n))
        t_dn = _kernel(n, q, k, x, 0)
        den = _kernel(n, q, k, n, n) * t_dn - _kernel(n, q, k, n, 0) * _kernel(n, q, k, x, n)
        weights.append(t_dn / den)
    qd = QuadratureData(space, x, k, eps, L, tuple(nodes), tuple(weights), exact)
    if validate:
        res = quadrature_basis_residuals(qd)
        worst = max(abs(as_float(r)) for r in res)
        if worst > IDENTITY_TOL:
            raise InvariantError(f"quadrature identity fails (residual {worst:.3g}) at d={x}")
    return qd


def quadrature_basis_residuals(qd: QuadratureData) -> list:
    """[delta_{j0} - (K_j(0)/L + sum rho_i K_j(alpha_i)) for j <= min(n, 2k-1+eps)]."""
    n, q = qd.space.n, qd.space.q
    top = min(n, qd.degree)
    at_nodes = [kraw_values_at(n, q, a, top) for a in qd.nodes]
    k0 = kraw_table(n, q)
    out = []
    for j in range(top + 1):
        if qd.exact:
            s = Fraction(k0[j][0]) / qd.L + sum((w * v[j] for w, v in zip(qd.weights, at_nodes)), Fraction(0))
        else:
            s = to_mp(k0[j][0]) / to_mp(qd.L) + mp.fsum(to_mp(w) * to_mp(v[j]) for w, v in zip(qd.weights, at_nodes))
        out.append((1 if j == 0 else 0) - s)
    return out


def levenshtein_bound(space: HammingSpace, d) -> BoundReport:
    qd = levenshtein_quadrature(space, d)
    return BoundReport("levenshtein", "upper", qd.L, quadrature=qd,
                       notes=f"interval (k, eps) = ({qd.k}, {qd.eps})")


def levenshtein_polynomial(space: HammingSpace, d) -> KrawPoly:
    """(d - z)(n - z)^eps prod (z - alpha_i)^2 over the interior nodes, in the Krawtchouk basis.

    Irrational nodes are replaced by their high-precision dyadic values; the
    squared factors keep the sign conditions intact, so the certificate is exact
    and its bound agrees with the Levenshtein value to working precision.
    """
    qd = levenshtein_quadrature(space, d)
    n = space.n
    dd = qd.d
    inner = [to_fraction(a) for a in qd.nodes[1: qd.k]]

    def f(z):
        v = (dd - z) * (n - z) ** qd.eps
        for a in inner:
            v *= (z - a) ** 2
        return v

    return KrawPoly.from_function(space, f)


def test_function(space: HammingSpace, d, j: int):
    """K_j(0)/L + sum rho_i K_j(alpha_i); vanishes for j <= 2k - 1 + eps."""
    if not 1 <= j <= space.n:
        raise ValueError(f"j must lie in 1..{space.n}")
    qd = levenshtein_quadrature(space, d)
    return _test_value(qd, j)


def _test_value(qd: QuadratureData, j: int):
    n, q = qd.space.n, qd.space.q
    k0 = kraw_table(n, q)[j][0]
    if qd.exact:
        return Fraction(k0) / qd.L + sum((w * _kraw(n, q, j, a) for w, a in zip(qd.weights, qd.nodes)), Fraction(0))
    return to_mp(k0) / to_mp(qd.L) + mp.fsum(to_mp(w) * to_mp(_kraw(n, q, j, a)) for w, a in zip(qd.weights, qd.nodes))


def test_functions(space: HammingSpace, d) -> list:
    qd = levenshtein_quadrature(space, d)
    return [_test_value(qd, j) for j in range(1, space.n + 1)]


# ---------------------------------------------------------------------------
# universal lower bound on energy


def ulb_window(space: HammingSpace, M) -> tuple[int, int]:
    """(k, eps) with H(2k+eps) < M <= H(2k+1+eps); M <= q maps to (1, 0)."""
    M = Fraction(M)
    k, eps = 1, 0
    while M > H_value(space, 2 * k + 1 + eps):
        k, eps = (k, 1) if eps == 0 else (k + 1, 0)
        if k > space.n:
            raise ValueError("M exceeds the size of the space")
    return k, eps


def solve_distance(space: HammingSpace, M, k: int, eps: int):
    """The d in the (k, eps) interval with L(d) = M (exact when it is rational)."""
    n = space.n
    M = Fraction(M)
    left, right = interval_ends(space, k, eps)
    right = min(right, mp.mpf(n))

    def g(t):
        return to_mp(levenshtein_branch(space, k, eps, to_fraction(t))) - to_mp(M)

    if levenshtein_branch(space, k, eps, to_fraction(right)) == M:
        return to_fraction(right) if recognize_rational(right) is None else recognize_rational(right)
    lo, hi = left, right
    # g(lo) >= 0 >= g(hi); never evaluate at the left end, where the branch may be 0/0
    for _ in range(mp.prec + 20):
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    root = (lo + hi) / 2
    guess = recognize_rational(root)
    if guess is not None and 1 <= guess <= n and levenshtein_branch(space, k, eps, guess) == M:
        return guess
    return to_fraction(root)


def ulb_energy(space: HammingSpace, M, h: PotentialFunction) -> BoundReport:
    """Universal lower bound M^2 sum rho_i h(alpha_i) on the energy of M-point codes."""
    n, q = space.n, space.q
    M = Fraction(M)
    if M.denominator != 1 or not 2 <= M <= q**n:
        raise ValueError(f"M must be an integer in 2..{q**n}")
    if M <= q:
        val = M * (M - 1) * h(n)
        return BoundReport("ulb", "lower", val, notes="all distances at most n")
    k, eps = ulb_window(space, M)
    if M == q**n:
        d = Fraction(1)
        k, eps = (n - 1, 1)
    else:
        d = solve_distance(space, M, k, eps)
    qd = _quadrature(space, d, k, eps)
    hv = [h(a) for a in qd.nodes]
    if qd.exact and all(is_exact(v) for v in hv):
        val = M * M * sum((w * v for w, v in zip(qd.weights, hv)), Fraction(0))
    else:
        val = to_mp(M) ** 2 * mp.fsum(to_mp(w) * to_mp(v) for w, v in zip(qd.weights, hv))
    return BoundReport("ulb", "lower", val, quadrature=qd,
                       notes=f"window (k, eps) = ({k}, {eps}), d = {as_float(d):.12g}")


# ---------------------------------------------------------------------------
# point removal and duality


@dataclass(frozen=True)
class RemovalEntry:
    index: int
    energy: object
    ulb: object
    matches_ulb: bool


def point_removal_energy_check(code, h: PotentialFunction, tol: float = 1e-9) -> list[RemovalEntry]:
    """Energy of the code with each word removed, against the universal bound for M - 1 words."""
    from .code_analysis import energy_hamming

    M = code.size
    out = []
    bound = None
    if M - 1 >= 2:
        bound = ulb_energy(code.space, M - 1, h).value
    for i in range(M):
        e = energy_hamming(code.without(i), h) if M > 1 else Fraction(0)
        if bound is None:
            out.append(RemovalEntry(i, e, None, e == 0))
            continue
        ok = abs(as_float(e) - as_float(bound)) <= tol * max(1.0, abs(as_float(e)))
        out.append(RemovalEntry(i, e, bound, ok))
    return out


@dataclass(frozen=True)
class DualityReport:
    dual: DualPoly
    code_bound: Fraction
    design_bound: Fraction
    product: Fraction


def duality_map_check(f: KrawPoly, d: int, tau: int | None = None) -> DualityReport:
    """Confirm that the dual of a code certificate at distance d is a design certificate at d - 1."""
    tau = d - 1 if tau is None else tau
    if tau != d - 1:
        raise ValueError("the dual certificate is checked at strength d - 1")
    rep = verify_certificate(f, "codes", d=d)
    if not rep.valid:
        raise CertificateViolation(rep.condition, rep.index, rep.message)
    g = dual_poly(f)
    rep2 = verify_certificate(g, "designs", tau=tau)
    if not rep2.valid:
        raise CertificateViolation(rep2.condition, rep2.index, rep2.message)
    product = rep.bound * g.value_ratio()
    if product != f.space.q**f.space.n:
        raise InvariantError("duality product differs from q^n")
    return DualityReport(g, rep.bound, rep2.bound, product)
