"""Acceptance criteria, each run at its stated tolerance.

Every check returns (passed, detail). Under pytest each criterion is one test and
a PASS/FAIL line per criterion is printed in the terminal summary; running this
file directly prints the same lines.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from lpbounds.code_analysis import (
    Code,
    covering_radius_exact,
    distance_distribution,
    macwilliams_transform,
    strength_direct,
)
from lpbounds.extensions import binomial_moment, quantum_lp_bound
from lpbounds.hamming_bounds import (
    _test_value,
    duality_map_check,
    levenshtein_polynomial,
    levenshtein_quadrature,
    levenshtein_value,
)
from lpbounds.lp_engine import code_lp, design_lp, verify_certificate
from lpbounds.numeric import is_exact, mp, to_mp
from lpbounds.ortho_poly import HammingSpace, KrawPoly, kernel_T, kraw_eval, kraw_expand, kraw_table, xi_mp
from lpbounds.potentials import sphere_newton
from lpbounds.reference import FIXTURES, d4_roots, hamming_code, linear_code
from lpbounds.spherical_bounds import (
    SphericalConfig,
    dgs_bound,
    endpoint_values,
    energy_sphere,
    levenshtein_sphere,
    test_quantities as q_values,
    ulb_sphere,
)


def _rand_fraction(rng: random.Random, num: int = 20, den: int = 9) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


# 1 ---------------------------------------------------------------------------


def check_orthogonality():
    start = time.perf_counter()
    bad = []
    for q in (2, 3, 4):
        for n in range(1, 13):
            K = kraw_table(n, q)
            w = [(q - 1) ** u * comb(n, u) for u in range(n + 1)]
            for i in range(n + 1):
                for j in range(n + 1):
                    first = sum(K[i][u] * K[j][u] * w[u] for u in range(n + 1))
                    want = q**n * w[i] if i == j else 0
                    if first != want:
                        bad.append(("first", n, q, i, j))
                    second = sum(K[i][u] * K[u][j] for u in range(n + 1))
                    if second != (q**n if i == j else 0):
                        bad.append(("second", n, q, i, j))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    return ok, f"{len(bad)} nonzero residuals, {elapsed:.2f} s (limit 5 s)"


# 2 ---------------------------------------------------------------------------


def _random_code(rng: random.Random, n: int, q: int) -> Code:
    total = q**n
    size = rng.randint(1, min(total, 40))
    idx = rng.sample(range(total), size)
    words = []
    for x in idx:
        w = []
        for _ in range(n):
            x, r = divmod(x, q)
            w.append(r)
        words.append(tuple(w))
    return Code.from_words(n, q, words)


def check_identities():
    rng = random.Random(20240)
    cd_bad = 0
    for trial in range(100):
        n = rng.randint(1, 10)
        q = rng.choice((2, 3, 4))
        space = HammingSpace(n, q)
        z, w = _rand_fraction(rng), _rand_fraction(rng)
        for i in range(n + 1):
            lhs = (w - z) * kernel_T(space, i, z, w)
            scale = Fraction(i + 1, q * (q - 1) ** i * comb(n, i))
            rhs = scale * (kraw_eval(space, i + 1, z) * kraw_eval(space, i, w)
                           - kraw_eval(space, i + 1, w) * kraw_eval(space, i, z))
            if lhs != rhs:
                cd_bad += 1
    id_bad = 0
    for trial in range(100):
        n = rng.randint(1, 10)
        q = rng.choice((2, 3)) if n > 6 else rng.choice((2, 3, 4))
        code = _random_code(rng, n, q)
        dist = distance_distribution(code)
        f = KrawPoly(code.space, [_rand_fraction(rng) for _ in range(n + 1)])
        vals = f.values()
        left = vals[0] + sum(dist.B[i] * vals[i] for i in range(1, n + 1))
        right = code.size * (f.coeffs[0] + sum(f.coeffs[i] * dist.Bdual[i] for i in range(1, n + 1)))
        if left != right:
            id_bad += 1
    return cd_bad == 0 and id_bad == 0, (
        f"Christoffel-Darboux: {cd_bad} nonzero residuals; code identity: {id_bad} nonzero residuals")


# 3 ---------------------------------------------------------------------------


def check_quadrature():
    """f_0 = f(0)/L + sum rho_i f(alpha_i) for random polynomials of degree <= 2k-1+eps.

    f_0 is the mean of f under the binomial measure on 0..n, which is the zeroth
    Krawtchouk coefficient for every polynomial (of any degree) restricted to 0..n.
    """
    start = time.perf_counter()
    rng = random.Random(7)
    worst = mp.mpf(0)
    exact_cases = inexact_cases = exact_bad = 0
    for q in (2, 3, 4):
        for n in range(1, 17):
            space = HammingSpace(n, q)
            for d in range(1, n + 1):
                qd = levenshtein_quadrature(space, d, validate=False)
                deg = qd.degree
                # moments of the measure and of the quadrature rule, per monomial degree
                mean = [Fraction(sum(space.weight(u) * u**p for u in range(n + 1)), q**n) for p in range(deg + 1)]
                if qd.exact:
                    rule = [Fraction(1 if p == 0 else 0) / qd.L
                            + sum((w * a**p for w, a in zip(qd.weights, qd.nodes)), Fraction(0))
                            for p in range(deg + 1)]
                else:
                    rule = [(mp.mpf(1) if p == 0 else mp.mpf(0)) / to_mp(qd.L)
                            + mp.fsum(to_mp(w) * to_mp(a) ** p for w, a in zip(qd.weights, qd.nodes))
                            for p in range(deg + 1)]
                for _ in range(200):
                    c = [_rand_fraction(rng) for _ in range(deg + 1)]
                    f0 = sum((ci * m for ci, m in zip(c, mean)), Fraction(0))
                    if qd.exact:
                        exact_cases += 1
                        if f0 != sum((ci * r for ci, r in zip(c, rule)), Fraction(0)):
                            exact_bad += 1
                    else:
                        inexact_cases += 1
                        res = abs(to_mp(f0) - mp.fsum(to_mp(ci) * r for ci, r in zip(c, rule)))
                        worst = max(worst, res)
    elapsed = time.perf_counter() - start
    ok = exact_bad == 0 and worst <= 1e-9 and elapsed < 60
    return ok, (f"{exact_cases} exact checks ({exact_bad} failures), {inexact_cases} numeric checks "
                f"(worst residual {mp.nstr(worst, 3)}), {elapsed:.1f} s (limit 60 s)")


# 4 ---------------------------------------------------------------------------


def check_lp_values():
    start = time.perf_counter()
    got = {
        "code_lp(7,2,3)": (code_lp(HammingSpace(7, 2), 3).value, 16),
        "code_lp(23,2,7)": (code_lp(HammingSpace(23, 2), 7).value, 4096),
        "design_lp(4,2,3)": (design_lp(HammingSpace(4, 2), 3).value, 8),
    }
    for n in range(1, 21):
        got[f"code_lp({n},2,{n})"] = (code_lp(HammingSpace(n, 2), n).value, 2)
    elapsed = time.perf_counter() - start
    wrong = {k: v for k, v in got.items() if v[0] != v[1]}
    ok = not wrong and elapsed < 120
    return ok, f"{len(got) - len(wrong)}/{len(got)} exact matches {sorted(wrong)}, {elapsed:.1f} s (limit 120 s)"


# 5 ---------------------------------------------------------------------------


def _plotkin(n, q, d):
    return q * d / (q * d - (q - 1) * n)


def _second(n, q, d):
    return q * q * d / (q * d - (q - 1) * (n - 1))


def _third(n, q, d):
    num = q * d * (n * (q - 1) + 1) * (n * (q - 1) - q * d + 2 - q)
    den = q * d * (2 * n * (q - 1) - q + 2 - q * d) - (n - 1) * (q - 1) ** 2
    return num / den


def _grid(lo, hi, points: int):
    """Rational points spread over [lo, hi] (mp ends), staying inside [1, n]."""
    out = []
    for j in range(points + 1):
        x = to_mp(lo) + (to_mp(hi) - to_mp(lo)) * j / points
        out.append(Fraction(mp.nstr(x, 40)).limit_denominator(10**30))
    return out


def check_levenshtein_regression():
    bad = []
    for q in range(2, 6):
        for n in range(1, 21):
            if levenshtein_value(HammingSpace(n, q), n) != q:
                bad.append(("L(n)=q", n, q))
    fixed = [((4, 2, 3), 3), ((23, 2, 8), 2048), ((12, 3, 6), 729)]
    for (n, q, d), want in fixed:
        if levenshtein_value(HammingSpace(n, q), d) != want:
            bad.append(("value", n, q, d))
    worst = {"first": mp.mpf(0), "second": mp.mpf(0), "third": mp.mpf(0)}
    checked = 0
    for q in (2, 3, 4):
        for n in range(4, 15):
            space = HammingSpace(n, q)
            spans = [
                ("first", _plotkin, xi_mp(n - 1, q, 1) + 1, mp.mpf(n)),
                ("second", _second, xi_mp(n - 2, q, 1) + 1, xi_mp(n - 1, q, 1) + 1),
                ("third", _third, xi_mp(n - 1, q, 2) + 1, xi_mp(n - 2, q, 1) + 1),
            ]
            for name, form, lo, hi in spans:
                for d in _grid(lo, hi, 60):
                    if not lo <= to_mp(d) <= hi or d < 1:
                        continue
                    diff = abs(to_mp(form(n, q, d)) - to_mp(levenshtein_value(space, d)))
                    worst[name] = max(worst[name], diff)
                    checked += 1
    ok = not bad and all(w <= 1e-9 for w in worst.values())
    forms = ", ".join(f"{k} {mp.nstr(v, 3)}" for k, v in worst.items())
    return ok, (f"{len(bad)} regression mismatches {bad[:5]}; closed forms at {checked} points, "
                f"worst difference per form: {forms}")


# 6 ---------------------------------------------------------------------------


def check_degree_cap():
    capped_below, uncapped_above = [], []
    for n in range(1, 13):
        space = HammingSpace(n, 2)
        for d in range(1, n + 1):
            qd = levenshtein_quadrature(space, d)
            L = to_mp(qd.L)
            capped = code_lp(space, d, degree_cap=qd.degree).value
            if to_mp(capped) < L - 1e-9:
                capped_below.append(f"(n={n},d={d}): {float(capped):.4f} < {float(L):.4f}")
            full = code_lp(space, d).value
            if to_mp(full) > L + 1e-9:
                uncapped_above.append((n, d))
    ok = not capped_below and not uncapped_above
    detail = (f"capped LP below L at {len(capped_below)} points {capped_below}; "
              f"uncapped LP above L at {len(uncapped_above)} points")
    return ok, detail


# 7 ---------------------------------------------------------------------------


def check_test_functions():
    nonzero, wrong = [], []
    improvable = 0
    for n in range(1, 13):
        space = HammingSpace(n, 2)
        for d in range(1, n + 1):
            qd = levenshtein_quadrature(space, d)
            P = {j: _test_value(qd, j) for j in range(1, n + 1)}
            for j, v in P.items():
                if j <= qd.degree:
                    # exact zero with rational nodes; irrational nodes carry 50-digit values
                    if (qd.exact and v != 0) or (not qd.exact and abs(to_mp(v)) > mp.mpf(10) ** -30):
                        nonzero.append((n, d, j))
            tail = [to_mp(v) for j, v in P.items() if j > qd.degree]
            negative = bool(tail) and min(tail) < -mp.mpf(10) ** -30
            lp = to_mp(code_lp(space, d).value)
            strictly_better = lp < to_mp(qd.L) - mp.mpf(10) ** -30
            improvable += negative
            if negative != strictly_better:
                wrong.append((n, d, negative, strictly_better))
    ok = not nonzero and not wrong
    return ok, (f"{len(nonzero)} nonvanishing low-degree values; {improvable} improvable points, "
                f"{len(wrong)} disagreements with the LP")


# 8 ---------------------------------------------------------------------------


def check_duality():
    certs = []
    for q in (2, 3, 4):
        for n in range(2, 10):
            for d in range(2, n + 1):
                certs.append((code_lp(HammingSpace(n, q), d).certificate, d))
                if len(certs) >= 35:
                    break
            if len(certs) >= 35:
                break
    for n, q, d in [(7, 2, 3), (8, 2, 4), (6, 3, 3), (10, 2, 5), (5, 4, 3), (9, 3, 4), (12, 2, 6),
                    (7, 2, 7), (11, 2, 5), (6, 2, 2), (8, 3, 5), (10, 3, 7), (4, 2, 3), (13, 2, 5), (9, 2, 4)]:
        f = levenshtein_polynomial(HammingSpace(n, q), d)
        certs.append((f, d))
    bad = 0
    for f, d in certs[:50]:
        if not verify_certificate(f, "codes", d=d).valid:
            bad += 1
            continue
        rep = duality_map_check(f, d)
        q, n = f.space.q, f.space.n
        if rep.product != q**n or rep.code_bound * rep.dual.value_ratio() != q**n:
            bad += 1
    return bad == 0 and len(certs) >= 50, f"{min(len(certs), 50)} certificates, {bad} failures"


# 9 ---------------------------------------------------------------------------


def check_sphere_numbers():
    start = time.perf_counter()
    h = sphere_newton(4)
    rep = ulb_sphere(4, 24, h)
    d4 = SphericalConfig.from_directions(4, d4_roots())
    energy = energy_sphere(d4, h)
    Q = q_values(rep.quadrature, 12)
    negative = sorted(j for j, v in Q.items() if v < 0)
    elapsed = time.perf_counter() - start
    ok = rep.value == 333 and energy == 334 and bool(negative) and elapsed < 10
    return ok, (f"ULB = {rep.value}, D4 energy = {energy}, negative Q_j at j = {negative}, "
                f"{elapsed:.2f} s (limit 10 s)")


# 10 --------------------------------------------------------------------------


def check_dgs():
    fixtures = {(3, 5): 12, (6, 4): 27, (4, 11): 112, (8, 7): 240}
    bad = [k for k, v in fixtures.items() if dgs_bound(*k) != v]
    branch_bad = []
    for n in range(2, 11):
        for s, want in ((Fraction(-1), 2), (Fraction(-1, n), n + 1), (Fraction(0), 2 * n)):
            if levenshtein_sphere(n, s).value != want:
                branch_bad.append((n, s))
    worst = mp.mpf(0)
    for n in range(2, 9):
        for tau in range(2, 10):
            left, right, D = endpoint_values(n, tau)
            worst = max(worst, abs(left - D), abs(right - D))
    ok = not bad and not branch_bad and worst <= 1e-6
    return ok, f"DGS mismatches {bad}; branch mismatches {branch_bad}; endpoint relation worst {mp.nstr(worst, 3)}"


# 11 --------------------------------------------------------------------------


def _random_small_code(rng: random.Random) -> Code:
    q = rng.choice((2, 3))
    n = rng.randint(2, 7 if q == 2 else 5)
    if rng.random() < 0.5:
        rows = rng.randint(1, n)
        gen = [[rng.randrange(q) for _ in range(n)] for _ in range(rows)]
        gen[0][rng.randrange(n)] = 1
        return linear_code(gen, q)
    return _random_code(rng, n, q)


def check_code_analysis():
    ham = distance_distribution(hamming_code())
    mw_ok = macwilliams_transform(ham.B, ham.space) == (1, 0, 0, 0, 7, 0, 0, 0)
    rng = random.Random(11)
    strength_bad, cover_bad = [], []
    codes = [_random_small_code(rng) for _ in range(50)]
    for code in codes:
        dist = distance_distribution(code)
        if strength_direct(code).tau != dist.dual_distance - 1:
            strength_bad.append(code)
        if covering_radius_exact(code) > dist.s_dual:
            cover_bad.append(code)
    for fx in FIXTURES:
        code = fx.build()
        if code.space.q ** code.space.n <= 10**7:
            if covering_radius_exact(code) > distance_distribution(code).s_dual:
                cover_bad.append(fx.name)
    ok = mw_ok and not strength_bad and not cover_bad
    return ok, (f"MacWilliams of [7,4]: {'exact' if mw_ok else 'wrong'}; strength mismatches "
                f"{len(strength_bad)}/50; covering radius above s' in {len(cover_bad)} codes")


# 12 --------------------------------------------------------------------------


def check_extensions():
    bad = []
    rng = random.Random(12)
    codes = [(fx.name, fx.build()) for fx in FIXTURES]
    codes += [(f"random-{i}", _random_code(rng, rng.randint(2, 8), 2)) for i in range(10)]
    checked = 0
    for name, code in codes:
        if code.space.q != 2:
            continue
        checked += 1
        if binomial_moment(code, code.space.n) != code.size - 1:
            bad.append(name)
    f = kraw_expand(HammingSpace(2, 4), [2 - z for z in range(3)])
    quantum = quantum_lp_bound(f, 2).value
    ok = not bad and quantum == 1
    return ok, f"moment identity on {checked} binary codes ({len(bad)} failures); quantum example = {quantum}"


# -----------------------------------------------------------------------------

CRITERIA = [
    (1, "exact Krawtchouk orthogonality", check_orthogonality),
    (2, "Christoffel-Darboux and code identities", check_identities),
    (3, "Hamming quadrature formula", check_quadrature),
    (4, "LP values of perfect codes and designs", check_lp_values),
    (5, "Levenshtein regression values", check_levenshtein_regression),
    (6, "degree-capped LP never beats Levenshtein", check_degree_cap),
    (7, "test functions and LP improvability", check_test_functions),
    (8, "duality product on certificates", check_duality),
    (9, "sphere worked numbers", check_sphere_numbers),
    (10, "DGS fixtures and spherical Levenshtein branches", check_dgs),
    (11, "code analysis invariants", check_code_analysis),
    (12, "binomial moments and quantum bound", check_extensions),
]


def _line(number: int, title: str, ok: bool, detail: str) -> str:
    return f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} -- {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_acceptance(number, title, check, acceptance_log):
    ok, detail = check()
    line = _line(number, title, ok, detail)
    acceptance_log.append(line)
    print(line)
    assert ok, line


def main() -> int:
    failures = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(_line(number, title, ok, detail), flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
