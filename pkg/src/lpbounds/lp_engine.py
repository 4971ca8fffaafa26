"""Exact rational simplex solver and the Delsarte linear programs.

Dual sign convention for LPResult.y (one entry per constraint row):
  maximize: y >= 0 on '<=' rows, y <= 0 on '>=' rows, free on '=' rows, A^T y >= c
  minimize: y >= 0 on '>=' rows, y <= 0 on '<=' rows, free on '=' rows, A^T y <= c
with equality in the column condition for free variables, and b.y == c.x at an optimum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvariantError
from .numeric import is_exact, rational_floor
from .ortho_poly import DualPoly, HammingSpace, KrawPoly, kraw_table
from .potentials import PotentialFunction
from .reports import BoundReport, CertificateReport

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class LinearProgram:
    sense: str
    c: tuple
    A: tuple
    relations: tuple
    b: tuple
    free: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        c = tuple(Fraction(v) for v in self.c)
        A = tuple(tuple(Fraction(v) for v in row) for row in self.A)
        b = tuple(Fraction(v) for v in self.b)
        rel = tuple(self.relations)
        if len(A) != len(b) or len(rel) != len(b):
            raise ValueError("A, relations and b must have the same number of rows")
        if any(len(row) != len(c) for row in A):
            raise ValueError("every row of A needs one entry per variable")
        if any(r not in RELATIONS for r in rel):
            raise ValueError(f"relations must be among {RELATIONS}")
        free = frozenset(int(j) for j in self.free)
        if any(j < 0 or j >= len(c) for j in free):
            raise ValueError("free variable index out of range")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "free", free)


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    value: Fraction | None = None
    x: tuple | None = None
    y: tuple | None = None
    pivots: int = 0


def _pivot(T: list, basis: list, r: int, col: int) -> None:
    row = T[r]
    p = row[col]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[col]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = col


def _run_simplex(T, basis, cost, allowed, counter) -> str:
    """Minimize cost over the tableau with Bland's rule. Returns 'optimal' or 'unbounded'."""
    rhs = len(T[0]) - 1
    while True:
        cb = [cost[j] for j in basis]
        enter = None
        for j in allowed:
            if j in basis:
                continue
            red = cost[j] - sum((cb[i] * T[i][j] for i in range(len(T)) if T[i][j]), Fraction(0))
            if red < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave, best = None, None
        for i in range(len(T)):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][rhs] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, enter)
        counter[0] += 1


def _solve_square(M: list, rhs: list) -> list:
    """Exact Gaussian elimination for a nonsingular square system."""
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise InvariantError("singular basis matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def simplex_solve(lp: LinearProgram) -> LPResult:
    """Two-phase simplex in exact arithmetic, Bland's rule, verified primal/dual pair."""
    m, nvar = len(lp.b), len(lp.c)
    # structural columns: each free variable becomes x+ - x-
    col_of = []  # (original var, sign)
    for j in range(nvar):
        col_of.append((j, 1))
        if j in lp.free:
            col_of.append((j, -1))
    ns = len(col_of)
    rows, rels, rhs, flip = [], [], [], []
    for i in range(m):
        row = [lp.A[i][j] * s for j, s in col_of]
        rel, bi, sgn = lp.relations[i], lp.b[i], 1
        if bi < 0:
            row, bi, sgn = [-v for v in row], -bi, -1
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append(row)
        rels.append(rel)
        rhs.append(bi)
        flip.append(sgn)
    # slack / surplus columns
    extra = []
    for i in range(m):
        if rels[i] != "=":
            extra.append((i, Fraction(1) if rels[i] == "<=" else Fraction(-1)))
    n_slack = len(extra)
    art_rows = [i for i in range(m) if rels[i] != "<="]
    total = ns + n_slack + len(art_rows)
    T = []
    basis = [None] * m
    for i in range(m):
        r = rows[i] + [Fraction(0)] * (n_slack + len(art_rows)) + [rhs[i]]
        T.append(r)
    for k, (i, v) in enumerate(extra):
        T[i][ns + k] = v
        if v == 1:
            basis[i] = ns + k
    for k, i in enumerate(art_rows):
        T[i][ns + n_slack + k] = Fraction(1)
        basis[i] = ns + n_slack + k
    art_cols = set(range(ns + n_slack, total))
    counter = [0]

    if art_rows:
        cost1 = [Fraction(0)] * total
        for j in art_cols:
            cost1[j] = Fraction(1)
        _run_simplex(T, basis, cost1, list(range(total)), counter)
        infeas = sum((T[i][-1] for i in range(len(T)) if basis[i] in art_cols), Fraction(0))
        if infeas > 0:
            return LPResult("infeasible", pivots=counter[0])
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        keep_rows = list(range(m))
        while i < len(T):
            if basis[i] in art_cols:
                col = next((j for j in range(ns + n_slack) if T[i][j] != 0), None)
                if col is None:
                    del T[i]
                    del basis[i]
                    del keep_rows[i]
                    continue
                _pivot(T, basis, i, col)
            i += 1
    else:
        keep_rows = list(range(m))

    sgn_obj = 1 if lp.sense == "min" else -1
    cost = [sgn_obj * lp.c[j] * s for j, s in col_of] + [Fraction(0)] * (total - ns)
    status = _run_simplex(T, basis, cost, list(range(ns + n_slack)), counter)
    if status == "unbounded":
        return LPResult("unbounded", pivots=counter[0])

    xs = [Fraction(0)] * total
    for i, j in enumerate(basis):
        xs[j] = T[i][-1]
    x = [Fraction(0)] * nvar
    for k, (j, s) in enumerate(col_of):
        x[j] += s * xs[k]

    # duals from the final basis: B^T y = c_B over the kept rows
    std_cols = []
    for k in range(total):
        if k < ns:
            std_cols.append([rows[i][k] for i in keep_rows])
        elif k < ns + n_slack:
            i0, v = extra[k - ns]
            std_cols.append([v if i == i0 else Fraction(0) for i in keep_rows])
        else:
            i0 = art_rows[k - ns - n_slack]
            std_cols.append([Fraction(1) if i == i0 else Fraction(0) for i in keep_rows])
    BT = [std_cols[j] for j in basis]
    y_std_kept = _solve_square(BT, [cost[j] for j in basis])
    y = [Fraction(0)] * m
    for pos, i in enumerate(keep_rows):
        y[i] = sgn_obj * flip[i] * y_std_kept[pos]
    value = sum((lp.c[j] * x[j] for j in range(nvar)), Fraction(0))
    result = LPResult("optimal", value, tuple(x), tuple(y), counter[0])
    _verify_lp(lp, result)
    return result


def _verify_lp(lp: LinearProgram, res: LPResult) -> None:
    x, y = res.x, res.y
    m, nvar = len(lp.b), len(lp.c)
    for j in range(nvar):
        if j not in lp.free and x[j] < 0:
            raise InvariantError(f"primal variable {j} negative")
    for i in range(m):
        lhs = sum((lp.A[i][j] * x[j] for j in range(nvar)), Fraction(0))
        rel = lp.relations[i]
        if (rel == "<=" and lhs > lp.b[i]) or (rel == ">=" and lhs < lp.b[i]) or (rel == "=" and lhs != lp.b[i]):
            raise InvariantError(f"primal row {i} violated")
        want_pos = (rel == "<=") == (lp.sense == "max")
        if rel != "=" and ((want_pos and y[i] < 0) or (not want_pos and y[i] > 0)):
            raise InvariantError(f"dual sign wrong on row {i}")
        if y[i] * (lhs - lp.b[i]) != 0:
            raise InvariantError(f"complementary slackness fails on row {i}")
    for j in range(nvar):
        aty = sum((lp.A[i][j] * y[i] for i in range(m)), Fraction(0))
        gap = aty - lp.c[j] if lp.sense == "max" else lp.c[j] - aty
        if gap < 0 or (j in lp.free and gap != 0):
            raise InvariantError(f"dual constraint {j} violated")
        if x[j] * gap != 0:
            raise InvariantError(f"complementary slackness fails on column {j}")
    dual_value = sum((lp.b[i] * y[i] for i in range(m)), Fraction(0))
    if dual_value != res.value:
        raise InvariantError("strong duality residual is nonzero")


# ---------------------------------------------------------------------------
# certificates


def _split(f):
    if isinstance(f, DualPoly):
        return f.poly  # the positive scale does not affect any sign condition or ratio
    return f


def verify_certificate(f, mode: str, *, d=None, tau=None, h: PotentialFunction | None = None,
                       M=None, strict: bool = True) -> CertificateReport:
    """Check the LP conditions for codes, designs or energy exactly.

    codes:   f_0 > 0, f_i >= 0 (i >= 1); f(i) <= 0 for d <= i <= n.  Bound f(0)/f_0.
    designs: f_0 > 0, f_i <= 0 (i > tau); f(0) > 0, f(i) >= 0 (i >= 1).  Bound f(0)/f_0.
    energy:  f_i >= 0 (i >= 1), f(i) <= h(i) (i >= 1); with strict=True also f_0 > 0 and
             f(0) > 0.  Bound M (f_0 M - f(0)).
    """
    p = _split(f)
    n = p.space.n
    coeffs = p.coeffs
    vals = p.values()

    def fail(cond, idx, msg):
        return CertificateReport(False, None, cond, idx, msg)

    if mode == "codes":
        if d is None:
            raise ValueError("codes mode needs d")
        if coeffs[0] <= 0:
            return fail("A1", 0, "f_0 must be positive")
        for i in range(1, n + 1):
            if coeffs[i] < 0:
                return fail("A1", i, f"coefficient f_{i} is negative")
        for i in range(max(int(d), 1), n + 1):
            if vals[i] > 0:
                return fail("A2", i, f"f({i}) is positive")
        return CertificateReport(True, vals[0] / coeffs[0])
    if mode == "designs":
        if tau is None:
            raise ValueError("designs mode needs tau")
        if coeffs[0] <= 0:
            return fail("B1", 0, "f_0 must be positive")
        for i in range(int(tau) + 1, n + 1):
            if coeffs[i] > 0:
                return fail("B1", i, f"coefficient f_{i} is positive")
        if vals[0] <= 0:
            return fail("B2", 0, "f(0) must be positive")
        for i in range(1, n + 1):
            if vals[i] < 0:
                return fail("B2", i, f"f({i}) is negative")
        return CertificateReport(True, vals[0] / coeffs[0])
    if mode == "energy":
        if h is None or M is None:
            raise ValueError("energy mode needs h and M")
        if strict and coeffs[0] <= 0:
            return fail("D1", 0, "f_0 must be positive")
        for i in range(1, n + 1):
            if coeffs[i] < 0:
                return fail("D1", i, f"coefficient f_{i} is negative")
        if strict and vals[0] <= 0:
            return fail("D2", 0, "f(0) must be positive")
        for i in range(1, n + 1):
            hv = h(i)
            if vals[i] > (hv if is_exact(hv) else _upper_rational(hv)):
                return fail("D2", i, f"f({i}) exceeds h({i})")
        M = Fraction(M)
        return CertificateReport(True, M * (coeffs[0] * M - vals[0]))
    raise ValueError(f"unknown mode {mode!r}")


def _upper_rational(x) -> Fraction:
    return -rational_floor(-x)


# ---------------------------------------------------------------------------
# Delsarte programs


def _rows(space: HammingSpace, upto: int):
    return kraw_table(space.n, space.q)[: upto + 1]


def code_lp(space: HammingSpace, d, degree_cap: int | None = None) -> BoundReport:
    """Delsarte bound for codes of minimum distance d, with its dual certificate."""
    n = space.n
    d = int(d)
    if not 1 <= d <= n:
        raise ValueError(f"d must lie in 1..{n}")
    J = n if degree_cap is None else max(0, min(int(degree_cap), n))
    table = _rows(space, n)
    idx = list(range(d, n + 1))
    if J == 0:
        # no constraints: the LP is unbounded
        return BoundReport("lp", "upper", None, notes="unbounded: no constraints")
    A = [[table[j][i] for i in idx] for j in range(1, J + 1)]
    b = [-table[j][0] for j in range(1, J + 1)]
    lp = LinearProgram("max", [1] * len(idx), A, [">="] * J, b)
    res = simplex_solve(lp)
    if res.status != "optimal":
        return BoundReport("lp", "upper", None, notes=res.status)
    value = 1 + res.value
    coeffs = [Fraction(1)] + [-res.y[j - 1] for j in range(1, J + 1)] + [Fraction(0)] * (n - J)
    cert = KrawPoly(space, coeffs)
    check = verify_certificate(cert, "codes", d=d)
    if not check.valid or check.bound != value:
        raise InvariantError(f"code LP certificate does not verify: {check}")
    dist = [Fraction(1)] + [Fraction(0)] * (d - 1) + list(res.x)
    return BoundReport("lp", "upper", value, certificate=cert,
                       notes=f"degree cap {J}" if degree_cap is not None else "",
                       extra={"distribution": tuple(dist), "pivots": res.pivots})


def design_lp(space: HammingSpace, tau: int) -> BoundReport:
    """Lower bound on the size of a tau-design from the exact LP."""
    n = space.n
    tau = int(tau)
    if not 1 <= tau <= n:
        raise ValueError(f"tau must lie in 1..{n}")
    table = _rows(space, n)
    A = [[table[i][u] for u in range(1, n + 1)] for i in range(1, n + 1)]
    b = [-table[i][0] for i in range(1, n + 1)]
    rel = ["="] * tau + [">="] * (n - tau)
    lp = LinearProgram("min", [1] * n, A, rel, b)
    res = simplex_solve(lp)
    if res.status != "optimal":
        raise InvariantError(f"design LP returned {res.status}")
    value = 1 + res.value
    cert = KrawPoly(space, [Fraction(1)] + [-v for v in res.y])
    check = verify_certificate(cert, "designs", tau=tau)
    if not check.valid or check.bound != value:
        raise InvariantError(f"design LP certificate does not verify: {check}")
    return BoundReport("lp", "lower", value, certificate=cert,
                       extra={"distribution": (Fraction(1),) + tuple(res.x), "pivots": res.pivots})


def energy_lp(space: HammingSpace, M, h: PotentialFunction, degree_cap: int | None = None,
              digits: int = 30) -> BoundReport:
    """Lower bound on the h-energy of M-point codes. Irrational h is rounded down first."""
    n, q = space.n, space.q
    M = Fraction(M)
    if M.denominator != 1 or not 2 <= M <= q**n:
        raise ValueError(f"M must be an integer in 2..{q**n}")
    hv, rounded = [], False
    for i in range(1, n + 1):
        v = h(i)
        if not is_exact(v):
            v, rounded = rational_floor(v, digits), True
        hv.append(Fraction(v))
    J = n if degree_cap is None else max(0, min(int(degree_cap), n))
    table = _rows(space, n)
    A = [[Fraction(1)] * n] + [[table[j][i] for i in range(1, n + 1)] for j in range(1, J + 1)]
    b = [M - 1] + [-table[j][0] for j in range(1, J + 1)]
    rel = ["="] + [">="] * J
    lp = LinearProgram("min", [M * v for v in hv], A, rel, b)
    res = simplex_solve(lp)
    if res.status != "optimal":
        raise InvariantError(f"energy LP returned {res.status}")
    coeffs = [res.y[0] / M] + [res.y[j] / M for j in range(1, J + 1)] + [Fraction(0)] * (n - J)
    cert = KrawPoly(space, coeffs)
    table_h = {i + 1: hv[i] for i in range(n)}
    check = verify_certificate(cert, "energy", h=lambda i: table_h[i], M=M, strict=False)
    if not check.valid or check.bound != res.value:
        raise InvariantError(f"energy LP certificate does not verify: {check}")
    notes = f"h rounded down to {digits} digits" if rounded else ""
    return BoundReport("lp", "lower", res.value, certificate=cert, notes=notes,
                       extra={"distribution": (Fraction(1),) + tuple(res.x), "pivots": res.pivots,
                              "strict_conditions": verify_certificate(
                                  cert, "energy", h=lambda i: table_h[i], M=M, strict=True).valid})
