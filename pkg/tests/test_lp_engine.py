from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpbounds.hamming_bounds import levenshtein_value, rao_hamming_pair, singleton_pair, ulb_energy
from lpbounds.lp_engine import (
    LinearProgram,
    code_lp,
    design_lp,
    energy_lp,
    simplex_solve,
    verify_certificate,
)
from lpbounds.numeric import to_mp
from lpbounds.ortho_poly import HammingSpace, KrawPoly
from lpbounds.potentials import hamming_newton, hamming_riesz, hamming_table

# simplex ------------------------------------------------------------------------


def test_single_bound():
    res = simplex_solve(LinearProgram("max", [1], [[1]], ["<="], [3]))
    assert res.status == "optimal" and res.value == 3 and res.x == (3,) and res.y == (1,)


def test_infeasible_and_unbounded():
    assert simplex_solve(LinearProgram("max", [1], [[1], [1]], ["<=", ">="], [1, 2])).status == "infeasible"
    assert simplex_solve(LinearProgram("max", [1, 1], [[1, -1]], ["<="], [1])).status == "unbounded"


def test_free_variable_and_equalities():
    lp = LinearProgram("min", [1, 0], [[1, 1], [0, 1]], ["=", "<="], [2, 5], free={0})
    res = simplex_solve(lp)
    assert res.value == -3 and res.x == (-3, 5)


def test_bad_input():
    with pytest.raises(ValueError):
        LinearProgram("maximize", [1], [[1]], ["<="], [1])
    with pytest.raises(ValueError):
        LinearProgram("max", [1, 2], [[1]], ["<="], [1])
    with pytest.raises(ValueError):
        LinearProgram("max", [1], [[1]], ["<"], [1])


def test_beale_cycling_example():
    # cycles under the textbook largest-coefficient rule; Bland's rule terminates
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    A = [
        [Fraction(1, 4), -60, Fraction(-1, 25), 9],
        [Fraction(1, 2), -90, Fraction(-1, 50), 3],
        [0, 0, 1, 0],
    ]
    res = simplex_solve(LinearProgram("max", c, A, ["<="] * 3, [0, 0, 1]))
    assert res.status == "optimal"
    assert res.value == Fraction(1, 20)


def _brute_force_max(c, A, b):
    """Largest objective over the vertices of {x >= 0, Ax <= b} in two or three variables."""
    n = len(c)
    rows = [list(r) + [bi] for r, bi in zip(A, b)] + [[-int(i == j) for j in range(n)] + [0] for i in range(n)]
    best = None
    for pick in combinations(rows, n):
        M = [list(map(Fraction, r)) for r in pick]
        # Gauss-Jordan on the n x (n+1) system
        ok = True
        for col in range(n):
            piv = next((r for r in range(col, n) if M[r][col] != 0), None)
            if piv is None:
                ok = False
                break
            M[col], M[piv] = M[piv], M[col]
            M[col] = [v / M[col][col] for v in M[col]]
            for r in range(n):
                if r != col and M[r][col] != 0:
                    M[r] = [a - M[r][col] * p for a, p in zip(M[r], M[col])]
        if not ok:
            continue
        x = [M[i][n] for i in range(n)]
        if all(sum(r[j] * x[j] for j in range(n)) <= r[n] for r in rows):
            v = sum(ci * xi for ci, xi in zip(c, x))
            best = v if best is None else max(best, v)
    return best


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.data())
def test_random_bounded_lps(nvar, m, data):
    small = st.integers(-5, 5)
    c = data.draw(st.lists(small, min_size=nvar, max_size=nvar))
    A = [data.draw(st.lists(small, min_size=nvar, max_size=nvar)) for _ in range(m)]
    b = data.draw(st.lists(st.integers(0, 9), min_size=m, max_size=m))
    # a box keeps the region bounded and nonempty (x = 0 is feasible)
    A += [[int(i == j) for j in range(nvar)] for i in range(nvar)]
    b += [7] * nvar
    res = simplex_solve(LinearProgram("max", c, A, ["<="] * len(b), b))
    assert res.status == "optimal"
    assert res.value == _brute_force_max(c, A, b)
    assert res.value == sum(bi * yi for bi, yi in zip(b, res.y))
    assert all(y >= 0 for y in res.y)


# Delsarte programs ------------------------------------------------------------------


def test_code_lp_examples():
    assert code_lp(HammingSpace(7, 2), 3).value == 16
    assert code_lp(HammingSpace(8, 2), 4).value == 16
    assert code_lp(HammingSpace(23, 2), 7).value == 4096
    assert code_lp(HammingSpace(6, 2), 1).value == 64
    rep = code_lp(HammingSpace(7, 2), 3)
    assert verify_certificate(rep.certificate, "codes", d=3).bound == 16
    dist = rep.extra["distribution"]
    assert dist[0] == 1 and sum(dist) == 16
    with pytest.raises(ValueError):
        code_lp(HammingSpace(7, 2), 8)


def test_code_lp_degree_zero_is_unbounded():
    rep = code_lp(HammingSpace(5, 2), 3, degree_cap=0)
    assert rep.value is None and "unbounded" in rep.notes


def test_code_lp_never_beats_classical_bounds():
    for q in (2, 3):
        for n in range(2, 13 if q == 2 else 9):
            space = HammingSpace(n, q)
            for d in range(1, n + 1):
                lp = code_lp(space, d).value
                assert lp <= singleton_pair(space, d=d)[1]
                assert lp <= rao_hamming_pair(space, d=d)[1]
                assert to_mp(lp) <= to_mp(levenshtein_value(space, d)) + 1e-20


def test_code_lp_complementary_slackness():
    rep = code_lp(HammingSpace(7, 2), 3)
    vals = rep.certificate.values()
    dist = rep.extra["distribution"]
    for i in range(3, 8):
        assert dist[i] * vals[i] == 0


def test_design_lp_examples():
    # the even-weight code of length 3 is a 2-design of size 4
    assert design_lp(HammingSpace(3, 2), 2).value == 4
    assert design_lp(HammingSpace(7, 2), 7).value == 128
    assert design_lp(HammingSpace(7, 2), 1).value == 2
    with pytest.raises(ValueError):
        design_lp(HammingSpace(3, 2), 0)


def test_design_lp_dominates_rao():
    for q in (2, 3):
        for n in range(2, 11 if q == 2 else 8):
            space = HammingSpace(n, q)
            for tau in range(1, n + 1):
                rep = design_lp(space, tau)
                assert rep.value >= rao_hamming_pair(space, dual_d=tau + 1)[0]
                assert verify_certificate(rep.certificate, "designs", tau=tau).valid


def test_energy_lp_full_space():
    h = hamming_newton()
    for n in (1, 2, 3):
        space = HammingSpace(n, 2)
        M = 2**n
        exact = M * sum(Fraction(space.weight(i), i) for i in range(1, n + 1))
        assert energy_lp(space, M, h).value == exact


def test_energy_lp_antipodal_pair():
    assert energy_lp(HammingSpace(3, 2), 2, hamming_newton()).value == Fraction(2, 3)


def test_energy_lp_rounds_irrational_potentials():
    rep = energy_lp(HammingSpace(4, 2), 5, hamming_riesz(Fraction(1, 2)))
    assert "rounded" in rep.notes
    table = energy_lp(HammingSpace(4, 2), 5, hamming_table({1: 4, 2: 2, 3: 1, 4: 1}))
    assert table.notes == ""


def test_energy_lp_at_least_ulb():
    h = hamming_newton()
    for n in (4, 6, 9):
        space = HammingSpace(n, 2)
        for M in range(2, min(2**n, 40), 3):
            lp = to_mp(energy_lp(space, M, h).value)
            assert lp >= to_mp(ulb_energy(space, M, h).value) - 1e-20


# certificate checks ------------------------------------------------------------------


def test_verify_certificate_failures():
    space = HammingSpace(5, 2)
    neg = KrawPoly(space, [1, -1, 0, 0, 0, 0])
    rep = verify_certificate(neg, "codes", d=3)
    assert not rep and rep.condition == "A1" and rep.index == 1
    const = KrawPoly.basis(space, 0)
    rep = verify_certificate(const, "codes", d=3)
    assert rep.condition == "A2" and rep.index == 3
    rep = verify_certificate(KrawPoly(space, [1, 0, 0, 0, 0, 1]), "designs", tau=2)
    assert rep.condition == "B1" and rep.index == 5
    rep = verify_certificate(KrawPoly(space, [1, 1, 0, 0, 0, 0]), "designs", tau=2)
    assert rep.condition == "B2"
    rep = verify_certificate(KrawPoly(space, [0, 1, 0, 0, 0, 0]), "energy", h=hamming_newton(), M=3)
    assert rep.condition == "D1" and rep.index == 0
    with pytest.raises(ValueError):
        verify_certificate(const, "codes")
    with pytest.raises(ValueError):
        verify_certificate(const, "packing", d=1)


def test_verify_certificate_accepts_constant_design_polynomial():
    space = HammingSpace(4, 3)
    rep = verify_certificate(KrawPoly.basis(space, 0), "designs", tau=1)
    assert rep.valid and rep.bound == 1
