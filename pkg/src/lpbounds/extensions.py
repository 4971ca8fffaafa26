"""Binomial-moment lower bounds for binary codes and the LP upper bound for quantum codes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .code_analysis import Code, distance_distribution
from .errors import CertificateViolation, InvariantError
from .lp_engine import LinearProgram, simplex_solve
from .ortho_poly import HammingSpace, KrawPoly, kraw_table
from .reports import BoundReport


def _moment_weight(n: int, w: int, i: int) -> int:
    return comb(n - i, n - w)


def binomial_moment(code: Code, w: int) -> Fraction:
    """sum_{i=1}^{w} C(n-i, n-w) B_i for a binary code."""
    if code.space.q != 2:
        raise ValueError("binomial moments are defined here for binary codes only")
    n = code.space.n
    if not 1 <= w <= n:
        raise ValueError(f"w must lie in 1..{n}")
    B = distance_distribution(code).B
    return sum((_moment_weight(n, w, i) * B[i] for i in range(1, w + 1)), Fraction(0))


@dataclass(frozen=True)
class BinomialMomentReport:
    w: int
    moment: Fraction | None
    bound: Fraction | None
    certificate: KrawPoly | None
    notes: str = ""


def check_moment_certificate(f: KrawPoly, w: int) -> None:
    """Raise CertificateViolation unless f_i >= 0 (i >= 1) and f(j) <= C(n-j, n-w) (j >= 1)."""
    n = f.space.n
    for i in range(1, n + 1):
        if f.coeffs[i] < 0:
            raise CertificateViolation("i", i, f"coefficient f_{i} is negative")
    vals = f.values()
    for j in range(1, n + 1):
        if vals[j] > _moment_weight(n, w, j):
            raise CertificateViolation("ii", j, f"f({j}) exceeds C({n - j}, {n - w})")


def binomial_moment_lp(n: int, M, w: int, f: KrawPoly | None = None) -> BoundReport:
    """Lower bound f_0 M - f(0) on the binomial moment of any binary code of size M.

    With f given its conditions are checked exactly; without f the best certificate
    is found by an exact LP over the coefficients f_0..f_n.
    """
    space = HammingSpace(n, 2)
    if not 1 <= w <= n:
        raise ValueError(f"w must lie in 1..{n}")
    M = Fraction(M)
    if f is not None:
        if f.space != space:
            raise ValueError("certificate must be a polynomial over (n, 2)")
        check_moment_certificate(f, w)
        vals = f.values()
        return BoundReport("binomial-moment", "lower", f.coeffs[0] * M - vals[0], certificate=f,
                           extra={"w": w})
    table = kraw_table(n, 2)
    # variables f_0 (free), f_1..f_n >= 0; f(j) = sum_i f_i K_i(j)
    c = [M - 1] + [-table[i][0] for i in range(1, n + 1)]
    A = [[table[i][j] for i in range(n + 1)] for j in range(1, n + 1)]
    b = [_moment_weight(n, w, j) for j in range(1, n + 1)]
    res = simplex_solve(LinearProgram("max", c, A, ["<="] * n, b, free=frozenset({0})))
    if res.status != "optimal":
        return BoundReport("binomial-moment", "lower", None, notes=res.status, extra={"w": w})
    cert = KrawPoly(space, res.x)
    check_moment_certificate(cert, w)
    value = cert.coeffs[0] * M - cert.values()[0]
    if value != res.value:
        raise InvariantError("binomial moment LP value disagrees with its certificate")
    return BoundReport("binomial-moment", "lower", value, certificate=cert,
                       extra={"w": w, "pivots": res.pivots})


def moment_report(code: Code, w: int) -> BinomialMomentReport:
    """Exact moment of a code next to the LP bound for its size."""
    bound = binomial_moment_lp(code.space.n, code.size, w)
    return BinomialMomentReport(w, binomial_moment(code, w), bound.value, bound.certificate, bound.notes)


# quantum codes ------------------------------------------------------------


def quantum_lp_bound(f: KrawPoly, d: int) -> BoundReport:
    """Upper bound (1/2^n) max_{j<d} f(j)/f_j on K for ((n, K)) quantum codes of distance d.

    f is a polynomial over (n, 4). A ratio with f_j = 0 and f(j) > 0 makes the bound
    infinite; with f(j) <= 0 the term is skipped (it cannot occur once the sign
    conditions hold).
    """
    space = f.space
    n = space.n
    if space.q != 4:
        raise ValueError("quantum certificates are polynomials over (n, 4)")
    if not 1 <= d <= n:
        raise ValueError(f"d must lie in 1..{n}")
    for i in range(n + 1):
        if f.coeffs[i] < 0:
            raise CertificateViolation("i", i, f"coefficient f_{i} is negative")
    vals = f.values()
    for z in range(d):
        if vals[z] <= 0:
            raise CertificateViolation("ii", z, f"f({z}) must be positive")
    for z in range(d, n + 1):
        if vals[z] > 0:
            raise CertificateViolation("iii", z, f"f({z}) must not be positive")
    best, arg, infinite = None, None, False
    for j in range(d):
        if f.coeffs[j] == 0:
            if vals[j] > 0:
                infinite, arg = True, j
                break
            continue
        ratio = vals[j] / f.coeffs[j]
        if best is None or ratio > best:
            best, arg = ratio, j
    if infinite:
        return BoundReport("quantum-lp", "upper", float("inf"), certificate=f,
                           notes=f"f_{arg} = 0 while f({arg}) > 0", extra={"argmax": arg})
    return BoundReport("quantum-lp", "upper", best / 2**n, certificate=f, extra={"argmax": arg})


def _quantum_feasible(n: int, d: int, R: Fraction) -> KrawPoly | None:
    """A certificate with bound at most R, or None when none exists."""
    space = HammingSpace(n, 4)
    table = kraw_table(n, 4)
    A, rel, b = [], [], []
    for z in range(d, n + 1):
        A.append([table[i][z] for i in range(n + 1)])
        rel.append("<=")
        b.append(0)
    scale = R * 2**n
    for j in range(d):
        # f is scale invariant, so f(j) > 0 may be normalized to f(j) >= 1
        A.append([table[i][j] for i in range(n + 1)])
        rel.append(">=")
        b.append(1)
        A.append([table[i][j] - (scale if i == j else 0) for i in range(n + 1)])
        rel.append("<=")
        b.append(0)
    res = simplex_solve(LinearProgram("min", [1] * (n + 1), A, rel, b))
    if res.status != "optimal":
        return None
    return KrawPoly(space, res.x)


def quantum_lp_search(n: int, d: int, tol=Fraction(1, 10**9), max_bound=None) -> BoundReport:
    """Smallest certificate bound, by bisection on the bound with an exact feasibility LP."""
    if not 1 <= d <= n:
        raise ValueError(f"d must lie in 1..{n}")
    cap = Fraction(max_bound) if max_bound is not None else Fraction(4**n)
    hi = Fraction(1)
    cert = _quantum_feasible(n, d, hi)
    lo = Fraction(0)
    while cert is None:
        lo = hi
        hi *= 2
        if hi > cap:
            return BoundReport("quantum-lp", "upper", float("inf"), notes=f"no certificate with bound <= {cap}")
        cert = _quantum_feasible(n, d, hi)
    hi = quantum_lp_bound(cert, d).value
    steps = 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        trial = _quantum_feasible(n, d, mid)
        if trial is None:
            lo = mid
        else:
            cert = trial
            hi = quantum_lp_bound(trial, d).value
        steps += 1
    # the optimum is usually a simple rational: try the nearest one inside [lo, hi]
    guess = hi.limit_denominator(1000)
    if lo < guess < hi:
        trial = _quantum_feasible(n, d, guess)
        if trial is not None:
            cert = trial
    report = quantum_lp_bound(cert, d)
    return BoundReport("quantum-lp", "upper", report.value, certificate=cert,
                       extra={"argmax": report.extra.get("argmax"), "infeasible_below": lo, "steps": steps})
