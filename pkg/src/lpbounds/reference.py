"""Embedded fixtures: classical codes, the table of codes attaining the Levenshtein bound, D4, Kerdock data."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable

import numpy as np

from .code_analysis import Code, DistanceDistribution, distance_distribution

# generator polynomials, ascending coefficients
GOLAY23_POLY = (1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1)  # 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
GOLAY11_POLY = (2, 0, 1, 2, 1, 1)  # 2 + x^2 + 2x^3 + x^4 + x^5 over GF(3)
HAMMING7_POLY = (1, 1, 0, 1)  # 1 + x + x^3


# ---------------------------------------------------------------------------
# linear codes over prime fields


def cyclic_generator(poly, n: int) -> list[list[int]]:
    """Rows x^i g(x), i < n - deg g."""
    deg = len(poly) - 1
    return [[0] * i + list(poly) + [0] * (n - deg - 1 - i) for i in range(n - deg)]


def span(generator, q: int) -> np.ndarray:
    """All q^k codewords of the code spanned by the rows (q prime)."""
    G = np.array(generator, dtype=np.int64) % q
    k = G.shape[0]
    coeffs = np.array(list(product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)
    words = (coeffs @ G) % q
    return np.unique(words, axis=0)


def linear_code(generator, q: int) -> Code:
    words = span(generator, q)
    return Code.from_words(words.shape[1], q, (tuple(int(s) for s in w) for w in words))


def null_space(generator, q: int) -> list[list[int]]:
    """Basis of the dual code (q prime), by row reduction mod q."""
    rows = [[int(x) % q for x in r] for r in generator]
    n = len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], q - 2, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][fc]) % q
        basis.append(v)
    return basis


def dual_code(generator, q: int) -> Code:
    return linear_code(null_space(generator, q), q)


def extend_parity(code: Code) -> Code:
    """Append a check symbol making every coordinate sum 0 mod q."""
    q = code.space.q
    return Code.from_words(code.space.n + 1, q, (w + ((-sum(w)) % q,) for w in code.words))


def shorten(code: Code, positions=(0,)) -> Code:
    """Keep the words that vanish on `positions` and delete those coordinates."""
    pos = set(positions)
    keep = [i for i in range(code.space.n) if i not in pos]
    words = [tuple(w[i] for i in keep) for w in code.words if all(w[p] == 0 for p in pos)]
    return Code.from_words(len(keep), code.space.q, words)


# ---------------------------------------------------------------------------
# named codes


def repetition_code(n: int, q: int = 2) -> Code:
    return Code.from_words(n, q, [(a,) * n for a in range(q)])


def even_weight_code(n: int) -> Code:
    return Code.from_words(n, 2, (w for w in product((0, 1), repeat=n) if sum(w) % 2 == 0))


def hamming_code() -> Code:
    """[7, 4, 3] binary Hamming code (cyclic, g = 1 + x + x^3)."""
    return linear_code(cyclic_generator(HAMMING7_POLY, 7), 2)


def simplex_code() -> Code:
    """[7, 3, 4] binary simplex code, dual of the Hamming code."""
    return dual_code(cyclic_generator(HAMMING7_POLY, 7), 2)


def reed_muller_1(m: int) -> Code:
    """First-order Reed-Muller code RM(1, m): length 2^m, 2^(m+1) words."""
    n = 2**m
    rows = [[1] * n] + [[(x >> b) & 1 for x in range(n)] for b in range(m)]
    return linear_code(rows, 2)


@lru_cache(maxsize=None)
def golay23() -> Code:
    return linear_code(cyclic_generator(GOLAY23_POLY, 23), 2)


@lru_cache(maxsize=None)
def golay24() -> Code:
    return extend_parity(golay23())


@lru_cache(maxsize=None)
def ternary_golay11() -> Code:
    return linear_code(cyclic_generator(GOLAY11_POLY, 11), 3)


@lru_cache(maxsize=None)
def ternary_golay12() -> Code:
    return extend_parity(ternary_golay11())


def nordstrom_robinson() -> Code:
    """(16, 256, 6) code cut out of the extended Golay code along an octad."""
    g24 = golay24()
    octad = next(w for w in g24.words if sum(w) == 8)
    first = [i for i in range(24) if octad[i]]
    rest = [i for i in range(24) if not octad[i]]
    last = first[-1]
    allowed = {tuple(0 for _ in first)}
    for i in first[:-1]:
        allowed.add(tuple(1 if j in (i, last) else 0 for j in first))
    words = [tuple(w[i] for i in rest) for w in g24.words if tuple(w[i] for i in first) in allowed]
    return Code.from_words(16, 2, words)


def kerdock_distribution(ell: int) -> dict[int, int]:
    """Distance distribution of the Kerdock code of length 4^ell (ell >= 2)."""
    if ell < 2:
        raise ValueError("Kerdock codes need ell >= 2")
    n = 4**ell
    half, off = n // 2, 2 ** (ell - 1)
    return {0: 1, half - off: n * (half - 1), half: 2 * n - 2, half + off: n * (half - 1), n: 1}


def d4_roots() -> list[tuple[int, ...]]:
    """The 24 roots +-e_i +- e_j of D4 (norm sqrt 2; normalize before use)."""
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            for a, b in product((1, -1), repeat=2):
                v = [0] * 4
                v[i], v[j] = a, b
                out.append(tuple(v))
    return out


# ---------------------------------------------------------------------------
# table of codes attaining the Levenshtein bound


@dataclass(frozen=True)
class ReferenceTableRow:
    """One table row, with its printed entries kept as text."""

    n: str
    q: str
    s_dual: str
    d_dual: str
    distances: str
    size: str
    comment: str
    expected: Callable = None  # (n, q, code data) -> dict of field -> expected value (None = unconstrained)
    flag: str = ""


def _row(*cells, expected=None, flag=""):
    return ReferenceTableRow(*cells, expected=expected, flag=flag)


def _params(dist: DistanceDistribution) -> dict:
    return {"s_dual": dist.s_dual, "d_dual": dist.dual_distance,
            "distances": set(dist.distances), "size": dist.size}


REFERENCE_TABLE: tuple[ReferenceTableRow, ...] = (
    _row("n", "q", "n", "2", "{n}", "n", "repetition code, s'=floor(n/2) for q=2",
         expected=lambda n, q, c: {"s_dual": n // 2 if q == 2 else n, "d_dual": 2, "distances": {n}, "size": n},
         flag="a repetition code has q words, not n; its external distance is n-1 for q > 2"),
    _row("n", "q", "n-1", "2", "{d}", "qd/(qd-n(q-1))",
         "n>d>((q-1)n+1)/q, coexistence with resolvable block designs 2-(|C|, |C|/q, n-d)",
         expected=lambda n, q, c: {"s_dual": n - 1, "d_dual": 2,
                                   "size": Fraction(q * min(c.distances), q * min(c.distances) - n * (q - 1))},
         flag="the s' entry differs from the external distance of generated examples ([6,2] code: 4)"),
    _row("n", "q", "n-2", "3", "{((q-1)n+1)/q}", "(q-1)n+1",
         "coexistence with affine resolvable block designs 2-(|C|, |C|/q, (n-1)/q)",
         expected=lambda n, q, c: {"s_dual": n - 2, "d_dual": 3, "distances": {Fraction((q - 1) * n + 1, q)},
                                   "size": (q - 1) * n + 1},
         flag="the s' entry differs from the external distance of generated examples (simplex [7,3]: 3)"),
    _row("p^l q", "q=p^m", "n-2", "3", "{n-p^l, n}", "nq", "l, m = 1, 2, ..."),
    _row("qh+h-q", "q", "n-2", "3", "{n-h, n}", "q^3", "2|q, h|q, 2<h<q"),
    _row("q^2+1", "q", "n-3", "4", "{q^2-q, q^2}", "q^4", "ovoid in PG(3,q)"),
    _row("56", "3", "53", "4", "{36, 45}", "3^6", "projective cap"),
    _row("78", "4", "75", "4", "{56, 64}", "4^6", "projective cap"),
    _row("4l", "2", "2l-2", "4", "{2l, 4l}", "8l", "Hadamard codes",
         expected=lambda n, q, c: {"s_dual": n // 2 - 2, "d_dual": 4, "distances": {n // 2, n}, "size": 2 * n}),
    _row("q+2", "q", "q-1", "4", "{q, q+2}", "q^3", "2|q, s'=2 for q=4; hyperoval in PG(2,q)"),
    _row("11", "3", "5", "5", "{6, 9}", "243", "projection of Golay code",
         expected=lambda n, q, c: {"s_dual": 5, "d_dual": 5, "distances": {6, 9}, "size": 243}),
    _row("12", "3", "3", "6", "{6, 9, 12}", "729", "Golay code",
         expected=lambda n, q, c: {"s_dual": 3, "d_dual": 6, "distances": {6, 9, 12}, "size": 729}),
    _row("22", "2", "10", "6", "{8, 12, 16}", "1024", "projection of Golay code",
         expected=lambda n, q, c: {"s_dual": 10, "d_dual": 6, "distances": {8, 12, 16}, "size": 1024}),
    _row("23", "2", "7", "7", "{8, 12, 16}", "2048", "projection of Golay code",
         expected=lambda n, q, c: {"s_dual": 7, "d_dual": 7, "distances": {8, 12, 16}, "size": 2048}),
    _row("24", "2", "4", "8", "{8, 12, 16, 24}", "4096", "Golay code",
         expected=lambda n, q, c: {"s_dual": 4, "d_dual": 8, "distances": {8, 12, 16, 24}, "size": 4096}),
    _row("n", "2", "1", "n", "all even", "2^(n-1)", "even weight code",
         expected=lambda n, q, c: {"s_dual": 1, "d_dual": n, "distances": set(range(2, n + 1, 2)),
                                   "size": 2 ** (n - 1)}),
)


def compare_row(row_index: int, code: Code, dist: DistanceDistribution | None = None) -> dict:
    """Field-by-field comparison of a code with a table row: field -> (expected, actual, equal)."""
    row = REFERENCE_TABLE[row_index]
    if row.expected is None:
        raise ValueError(f"row {row_index} has no generatable fixture")
    dist = dist or distance_distribution(code)
    actual = _params(dist)
    expected = row.expected(code.space.n, code.space.q, dist)
    return {k: (v, actual[k], v == actual[k]) for k, v in expected.items() if v is not None}


@dataclass(frozen=True)
class Fixture:
    name: str
    build: Callable[[], Code]
    row: int | None  # index into REFERENCE_TABLE


FIXTURES: tuple[Fixture, ...] = (
    Fixture("repetition-5-2", lambda: repetition_code(5, 2), 0),
    Fixture("repetition-4-3", lambda: repetition_code(4, 3), 0),
    Fixture("equidistant-6-2", lambda: linear_code([[1, 1, 1, 1, 0, 0], [1, 1, 0, 0, 1, 1]], 2), 1),
    Fixture("simplex-7-3", simplex_code, 2),
    Fixture("reed-muller-1-3", lambda: reed_muller_1(3), 8),
    Fixture("reed-muller-1-4", lambda: reed_muller_1(4), 8),
    Fixture("ternary-golay-shortened-11", lambda: shorten(ternary_golay12()), 10),
    Fixture("ternary-golay-12", ternary_golay12, 11),
    Fixture("golay-shortened-22", lambda: shorten(golay24(), (0, 1)), 12),
    Fixture("golay-shortened-23", lambda: shorten(golay24()), 13),
    Fixture("golay-24", golay24, 14),
    Fixture("even-weight-6", lambda: even_weight_code(6), 15),
    Fixture("hamming-7-4", hamming_code, None),
    Fixture("golay-23", golay23, None),
    Fixture("ternary-golay-11", ternary_golay11, None),
    Fixture("nordstrom-robinson", nordstrom_robinson, None),
)


def fixture(name: str) -> Code:
    for f in FIXTURES:
        if f.name == name:
            return f.build()
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(f.name for f in FIXTURES)}")
