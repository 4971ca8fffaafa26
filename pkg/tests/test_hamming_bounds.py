from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpbounds.code_analysis import Code, energy_hamming
from lpbounds.errors import CertificateViolation
from lpbounds.hamming_bounds import (
    H_value,
    duality_map_check,
    interval_ends,
    levenshtein_bound,
    levenshtein_branch,
    levenshtein_polynomial,
    levenshtein_quadrature,
    levenshtein_value,
    mds_condition,
    point_removal_energy_check,
    quadrature_basis_residuals,
    rao_hamming_pair,
    singleton_pair,
    sphere_volume,
    test_function as p_value,
    test_functions as p_values,
    ulb_energy,
    ulb_window,
)
from lpbounds.lp_engine import code_lp, energy_lp, verify_certificate
from lpbounds.numeric import mp, to_mp
from lpbounds.ortho_poly import HammingSpace, KrawPoly, xi_mp
from lpbounds.potentials import hamming_gauss, hamming_newton, hamming_table
from lpbounds.reference import even_weight_code, repetition_code


def test_singleton_pair():
    assert singleton_pair(HammingSpace(7, 2), d=3) == (None, 32)
    assert singleton_pair(HammingSpace(6, 4), dual_d=3) == (16, None)
    assert mds_condition(HammingSpace(6, 4), 4, 4)
    assert not mds_condition(HammingSpace(7, 2), 3, 4)
    with pytest.raises(ValueError):
        singleton_pair(HammingSpace(7, 2), d=0)


def test_sphere_volume():
    assert sphere_volume(HammingSpace(7, 2), 1) == 8
    for n, q in [(5, 2), (4, 3), (6, 5)]:
        assert sphere_volume(HammingSpace(n, q), 0) == 1
        assert sphere_volume(HammingSpace(n, q), n) == q**n
    with pytest.raises(ValueError):
        sphere_volume(HammingSpace(3, 2), 4)


def test_rao_hamming_pair():
    assert rao_hamming_pair(HammingSpace(7, 2), d=3)[1] == 16
    assert rao_hamming_pair(HammingSpace(23, 2), d=7)[1] == 4096
    for n, q in [(5, 2), (6, 3), (4, 4)]:
        assert rao_hamming_pair(HammingSpace(n, q), dual_d=2)[0] == q


# Levenshtein bound ---------------------------------------------------------


def _third_form(n, q, d):
    """Closed form of the (k, eps) = (2, 0) branch, derived from the definition."""
    num = q * d * (q * d * (n * (q - 1) + 1) - n * n * (q - 1) ** 2 - 3 * n * (q - 1) + q - 2)
    den = q * q * d * d - 2 * d * n * q * (q - 1) + d * q * (q - 2) + n * (n - 1) * (q - 1) ** 2
    return Fraction(num, den) if isinstance(d, int) else num / den


def test_levenshtein_examples():
    for n in range(1, 12):
        for q in (2, 3, 5):
            assert levenshtein_value(HammingSpace(n, q), n) == q
    assert levenshtein_value(HammingSpace(4, 2), 3) == 3
    assert levenshtein_value(HammingSpace(23, 2), 8) == 2048
    rep = levenshtein_bound(HammingSpace(7, 2), 3)
    assert rep.direction == "upper" and rep.quadrature.k == 2


def test_corrected_third_closed_form():
    for q in (2, 3, 4):
        for n in range(4, 15):
            space = HammingSpace(n, q)
            lo, hi = interval_ends(space, 2, 0)
            for j in range(1, 40):
                d = Fraction(mp.nstr(lo + (hi - lo) * j / 40, 30))
                assert levenshtein_branch(space, 2, 0, d) == _third_form(n, q, d)


def test_levenshtein_real_argument():
    space = HammingSpace(9, 2)
    assert float(levenshtein_value(space, 5.5)) == pytest.approx(float(levenshtein_value(space, Fraction(11, 2))))


def test_levenshtein_continuity_at_interval_ends():
    h = Fraction(1, 10**9)
    for q in (2, 3):
        for n in range(2, 15):
            space = HammingSpace(n, q)
            for k in range(1, n):
                for eps in (0, 1):
                    left, _ = interval_ends(space, k, eps)
                    if not 1 < left < n:
                        continue
                    x = Fraction(mp.nstr(left, 40))
                    a = to_mp(levenshtein_value(space, x - h))
                    b = to_mp(levenshtein_value(space, x + h))
                    assert abs(a - b) <= 1e-6 * max(1, abs(a))


def test_right_end_matches_sphere_packing_value():
    """At the right end of the (k, eps) interval the bound equals H(2k + eps)."""
    for q in (2, 3, 4):
        for n in range(3, 13):
            space = HammingSpace(n, q)
            for k in range(1, n):
                for eps in (0, 1):
                    lo, hi = interval_ends(space, k, eps)
                    if hi > n or lo >= hi:
                        continue
                    v = levenshtein_branch(space, k, eps, int(hi) if hi == int(hi) else hi)
                    assert abs(to_mp(v) - H_value(space, 2 * k + eps)) < 1e-20


# quadrature -----------------------------------------------------------------------


def test_quadrature_plotkin_case():
    qd = levenshtein_quadrature(HammingSpace(7, 2), 7)
    assert (qd.k, qd.eps) == (1, 0)
    assert qd.nodes == (7,)
    assert qd.L == 2
    assert all(r == 0 for r in quadrature_basis_residuals(qd))


def test_last_weight_vanishes_at_right_end():
    # xi_1^{7,2} = 7/2, so d = 9/2 closes the (1, 1) interval of length 8
    qd = levenshtein_quadrature(HammingSpace(8, 2), Fraction(9, 2))
    assert (qd.k, qd.eps) == (1, 1)
    assert qd.weights[-1] == 0
    inner = levenshtein_quadrature(HammingSpace(8, 2), Fraction(17, 4))
    assert inner.weights[-1] > 0


def test_weights_positive_sweep():
    for q in (2, 3):
        for n in range(2, 15):
            for d in range(1, n + 1):
                qd = levenshtein_quadrature(HammingSpace(n, q), d)
                assert all(to_mp(w) > 0 for w in qd.weights[: qd.k])
                if qd.eps:
                    assert to_mp(qd.weights[-1]) >= 0
                nodes = [0] + [to_mp(a) for a in qd.nodes]
                assert all(a < b for a, b in zip(nodes, nodes[1:]))
                assert nodes[-1] <= n


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.sampled_from([2, 3, 4]), st.data())
def test_quadrature_identity_random(n, q, data):
    space = HammingSpace(n, q)
    d = data.draw(st.integers(1, n))
    qd = levenshtein_quadrature(space, d)
    deg = min(qd.degree, n)
    coeffs = data.draw(st.lists(st.fractions(-9, 9, max_denominator=7), min_size=deg + 1, max_size=deg + 1))
    f = KrawPoly(space, coeffs + [0] * (n - deg))
    got = qd.apply(f)
    if qd.exact:
        assert got == f.coeffs[0]
    else:
        assert abs(got - to_mp(f.coeffs[0])) <= 1e-9


def test_rational_d_between_integers():
    qd = levenshtein_quadrature(HammingSpace(10, 3), Fraction(37, 7))
    assert max(abs(to_mp(r)) for r in quadrature_basis_residuals(qd)) < 1e-30


# certificates ---------------------------------------------------------------------


def test_levenshtein_polynomial_examples():
    f = levenshtein_polynomial(HammingSpace(7, 2), 7)
    assert f.degree == 1
    assert verify_certificate(f, "codes", d=7).bound == 2
    g = levenshtein_polynomial(HammingSpace(4, 2), 3)
    assert verify_certificate(g, "codes", d=3).bound == 3


def test_levenshtein_polynomial_sweep():
    for q in (2, 3):
        for n in range(2, 13):
            space = HammingSpace(n, q)
            for d in range(2, n + 1):
                f = levenshtein_polynomial(space, d)
                rep = verify_certificate(f, "codes", d=d)
                assert rep.valid, (n, q, d, rep)
                L = to_mp(levenshtein_value(space, d))
                assert abs(to_mp(rep.bound) - L) <= 1e-9 * max(1, L)


def test_test_functions():
    space = HammingSpace(12, 2)
    for d in range(1, 13):
        qd = levenshtein_quadrature(space, d)
        vals = p_values(space, d)
        for j in range(1, min(qd.degree, 12) + 1):
            v = vals[j - 1]
            assert v == 0 if qd.exact else abs(v) < 1e-30
    assert p_value(space, 5, 1) == 0
    with pytest.raises(ValueError):
        p_value(space, 5, 13)


def test_negative_test_function_means_lp_improves():
    space = HammingSpace(10, 2)
    for d in range(2, 11):
        qd = levenshtein_quadrature(space, d)
        tail = [to_mp(v) for j, v in enumerate(p_values(space, d), start=1) if j > qd.degree]
        lp = to_mp(code_lp(space, d).value)
        if tail and min(tail) < -1e-30:
            assert lp < to_mp(qd.L)
        else:
            assert lp == pytest.approx(to_mp(qd.L), abs=1e-9)


# energy ----------------------------------------------------------------------------


def test_ulb_small_codes():
    h = hamming_newton()
    for n, q in [(3, 2), (5, 3), (4, 4)]:
        for M in range(2, q + 1):
            assert ulb_energy(HammingSpace(n, q), M, h).value == M * (M - 1) * h(n)


def test_ulb_windows():
    space = HammingSpace(7, 2)
    assert ulb_window(space, 2) == (1, 0)
    assert H_value(space, 2) == 2 and H_value(space, 3) == 8
    assert ulb_window(space, 8) == (1, 0)
    assert ulb_window(space, 9) == (1, 1)
    for M in range(3, 120):
        k, eps = ulb_window(space, M)
        assert H_value(space, 2 * k + eps) < M <= H_value(space, 2 * k + 1 + eps)
    with pytest.raises(ValueError):
        ulb_energy(space, 200, hamming_newton())


def test_ulb_monotone_in_size():
    space = HammingSpace(10, 2)
    h = hamming_newton()
    prev = 0
    for M in range(2, 200, 3):
        v = to_mp(ulb_energy(space, M, h).value)
        assert v >= prev - 1e-12
        prev = v


def test_ulb_attained_by_even_weight_code():
    for h in (hamming_newton(), hamming_gauss(Fraction(1, 2))):
        code = even_weight_code(6)
        e = to_mp(energy_hamming(code, h))
        assert abs(e - to_mp(ulb_energy(code.space, code.size, h).value)) < 1e-30


def test_energy_lp_dominates_ulb():
    h = hamming_newton()
    for n in (5, 8):
        space = HammingSpace(n, 2)
        for M in (3, 7, 12, 20):
            lp = energy_lp(space, M, h).value
            assert to_mp(lp) >= to_mp(ulb_energy(space, M, h).value) - 1e-12


def test_point_removal():
    code = Code.from_words(3, 2, ["000", "011", "101", "110"])
    inv = hamming_newton()
    entries = point_removal_energy_check(code, inv)
    assert {e.energy for e in entries} == {3}
    assert all(e.ulb == ulb_energy(code.space, 3, inv).value for e in entries)
    pair = point_removal_energy_check(repetition_code(3, 2), inv)
    assert [e.energy for e in pair] == [0, 0]
    # the even-weight code of length 6 is symmetric: every removal costs the same
    energies = {e.energy for e in point_removal_energy_check(even_weight_code(6), hamming_newton())}
    assert len(energies) == 1


# duality ------------------------------------------------------------------------------


def test_duality_levenshtein_certificate():
    space = HammingSpace(7, 2)
    f = levenshtein_polynomial(space, 3)
    rep = duality_map_check(f, 3)
    assert rep.product == 2**7
    assert rep.design_bound == Fraction(2**7) / rep.code_bound
    assert verify_certificate(rep.dual, "designs", tau=2).valid


def test_duality_rejects_invalid():
    f = KrawPoly.basis(HammingSpace(5, 2), 0)
    with pytest.raises(CertificateViolation) as err:
        duality_map_check(f, 3)
    assert err.value.condition == "A2"
    with pytest.raises(ValueError):
        duality_map_check(levenshtein_polynomial(HammingSpace(5, 2), 3), 3, tau=1)


def test_duality_odd_length_scale():
    f = code_lp(HammingSpace(5, 3), 3).certificate
    rep = duality_map_check(f, 3)
    assert rep.dual.sqrt_q_power == 1
    assert rep.product == 3**5
