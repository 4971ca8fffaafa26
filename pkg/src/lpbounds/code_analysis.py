"""Explicit codes: ingestion, distance distributions, strength, energy, covering radius."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CodeFormatError, check_work
from .ortho_poly import HammingSpace, kraw_table, smallest_root_xi
from .potentials import PotentialFunction, hamming_newton
from .reports import BoundReport


@dataclass(frozen=True)
class Code:
    space: HammingSpace
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        if not words:
            raise ValueError("a code needs at least one word")
        n, q = self.space.n, self.space.q
        seen = set()
        for idx, w in enumerate(words):
            if len(w) != n:
                raise ValueError(f"word {idx} has length {len(w)}, expected {n}")
            if any(s < 0 or s >= q for s in w):
                raise ValueError(f"word {idx} has a symbol outside 0..{q - 1}")
            if w in seen:
                raise ValueError(f"duplicate word {idx}: {w}")
            seen.add(w)
        object.__setattr__(self, "words", words)

    @classmethod
    def from_words(cls, n: int, q: int, words: Iterable[Sequence[int]]) -> "Code":
        return cls(HammingSpace(n, q), tuple(tuple(w) for w in words))

    @property
    def size(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.words, dtype=np.int64).reshape(len(self.words), self.space.n)

    def without(self, index: int) -> "Code":
        return Code(self.space, self.words[:index] + self.words[index + 1:])


# file format -------------------------------------------------------------


def format_code(code: Code) -> str:
    n, q = code.space.n, code.space.q
    lines = [f"#n={n} q={q}"]
    for w in code.words:
        lines.append("".join(str(s) for s in w) if q <= 10 else ",".join(str(s) for s in w))
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> Code:
    n = q = None
    words = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if n is None and body.startswith("n="):
                try:
                    fields = dict(part.split("=", 1) for part in body.split())
                    n, q = int(fields["n"]), int(fields["q"])
                except (ValueError, KeyError):
                    raise CodeFormatError("malformed header, expected '#n=<n> q=<q>'", lineno) from None
            continue
        if n is None:
            raise CodeFormatError("codeword before the '#n=<n> q=<q>' header", lineno)
        try:
            if q <= 10 and "," not in line:
                word = tuple(int(ch) for ch in line if not ch.isspace())
            else:
                word = tuple(int(tok) for tok in line.replace(" ", "").split(","))
        except ValueError:
            raise CodeFormatError(f"bad symbol in {line!r}", lineno) from None
        if len(word) != n:
            raise CodeFormatError(f"word has length {len(word)}, expected {n}", lineno)
        if any(s < 0 or s >= q for s in word):
            raise CodeFormatError(f"symbol outside 0..{q - 1}", lineno)
        words.append((word, lineno))
    if n is None:
        raise CodeFormatError("missing '#n=<n> q=<q>' header")
    if not words:
        raise CodeFormatError("no codewords")
    seen = {}
    for w, lineno in words:
        if w in seen:
            raise CodeFormatError(f"duplicate codeword (first seen on line {seen[w]})", lineno)
        seen[w] = lineno
    return Code(HammingSpace(n, q), tuple(w for w, _ in words))


def code_from_json(obj: dict) -> Code:
    """Code from a mapping with keys n, q and words (strings or symbol lists)."""
    try:
        n, q, raw = int(obj["n"]), int(obj["q"]), obj["words"]
    except (KeyError, TypeError, ValueError):
        raise CodeFormatError("JSON code needs integer 'n', 'q' and a 'words' list") from None
    words = []
    for idx, w in enumerate(raw):
        if isinstance(w, str):
            w = [int(ch) for ch in w] if q <= 10 and "," not in w else [int(t) for t in w.split(",")]
        words.append(tuple(w))
    try:
        return Code(HammingSpace(n, q), tuple(words))
    except ValueError as exc:
        raise CodeFormatError(str(exc)) from None


def read_code(path) -> Code:
    """Read the text format, or a JSON document holding n, q and words."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        import json

        try:
            return code_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CodeFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return parse_code(text)


def write_code(code: Code, path) -> None:
    Path(path).write_text(format_code(code))


# distributions -------------------------------------------------------------


def macwilliams_transform(B: Sequence, space: HammingSpace) -> tuple[Fraction, ...]:
    """B'_i = (sum_j B_j K_i(j)) / sum_j B_j."""
    n = space.n
    if len(B) != n + 1:
        raise ValueError(f"expected {n + 1} entries")
    B = [Fraction(b) for b in B]
    if B[0] != 1:
        raise ValueError("B_0 must be 1")
    total = sum(B)
    table = kraw_table(n, space.q)
    return tuple(sum((B[j] * table[i][j] for j in range(n + 1)), Fraction(0)) / total for i in range(n + 1))


@dataclass(frozen=True)
class DistanceDistribution:
    space: HammingSpace
    B: tuple[Fraction, ...]
    Bdual: tuple[Fraction, ...]

    @classmethod
    def from_B(cls, space: HammingSpace, B: Sequence) -> "DistanceDistribution":
        B = tuple(Fraction(b) for b in B)
        return cls(space, B, macwilliams_transform(B, space))

    @property
    def size(self) -> Fraction:
        return sum(self.B)

    def _first(self, seq) -> int:
        for i in range(1, len(seq)):
            if seq[i] != 0:
                return i
        return self.space.n + 1

    @property
    def min_distance(self) -> int:
        """d; n+1 for a single word."""
        return self._first(self.B)

    @property
    def dual_distance(self) -> int:
        """d'; n+1 when every B'_i (i > 0) vanishes."""
        return self._first(self.Bdual)

    @property
    def s(self) -> int:
        return sum(1 for b in self.B[1:] if b != 0)

    @property
    def s_dual(self) -> int:
        """External distance."""
        return sum(1 for b in self.Bdual[1:] if b != 0)

    @property
    def delta(self) -> int:
        return int(self.B[-1] != 0)

    @property
    def delta_dual(self) -> int:
        return int(self.Bdual[-1] != 0)

    @property
    def strength(self) -> int:
        return self.dual_distance - 1

    @property
    def distances(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, len(self.B)) if self.B[i] != 0)


def _pair_distance_counts(code: Code, block: int = 64) -> list[int]:
    arr = code.array
    m, n = arr.shape
    counts = np.zeros(n + 1, dtype=np.int64)
    for start in range(0, m, block):
        chunk = arr[start:start + block]
        dist = (chunk[:, None, :] != arr[None, :, :]).sum(axis=2)
        counts += np.bincount(dist.ravel(), minlength=n + 1)
    return [int(c) for c in counts]


def distance_distribution(code: Code) -> DistanceDistribution:
    counts = _pair_distance_counts(code)
    M = code.size
    return DistanceDistribution.from_B(code.space, [Fraction(c, M) for c in counts])


# strength ---------------------------------------------------------------------


class Strength(NamedTuple):
    tau: int
    index: Fraction  # |C| / q^tau


def strength_direct(code: Code, max_work: int = 10**8) -> Strength:
    """Largest tau such that every tau columns carry each tuple equally often."""
    n, q = code.space.n, code.space.q
    M = code.size
    arr = code.array
    tau = 0
    for t in range(1, n + 1):
        if M % q**t:
            break
        check_work(comb(n, t) * q**t * M, max_work, f"strength check at t={t}")
        weights = q ** np.arange(t, dtype=np.int64)
        target = M // q**t
        ok = True
        for cols in combinations(range(n), t):
            keys = arr[:, list(cols)] @ weights
            counts = np.bincount(keys, minlength=q**t)
            if counts.min() != target or counts.max() != target:
                ok = False
                break
        if not ok:
            break
        tau = t
    return Strength(tau, Fraction(M, q**tau))


# energy -------------------------------------------------------------------


def energy_from_distribution(B: Sequence, M, h: PotentialFunction):
    """M * sum_{i>=1} B_i h(i); h is evaluated only where B_i != 0."""
    total = 0
    for i, b in enumerate(B):
        if i == 0 or b == 0:
            continue
        total = total + Fraction(b) * h(i)
    return M * total


def energy_hamming(code: Code, h: PotentialFunction):
    """Sum of h(d(x, y)) over ordered pairs of distinct codewords."""
    dist = distance_distribution(code)
    return energy_from_distribution(dist.B, code.size, h)


# covering radius ---------------------------------------------------------------


def covering_radius_exact(code: Code, max_points: int = 10**7) -> int:
    """Multi-source breadth-first search over the whole space."""
    n, q = code.space.n, code.space.q
    check_work(q**n, max_points, "covering radius scan")
    powers = q ** np.arange(n, dtype=np.int64)
    dist = np.full(q**n, -1, dtype=np.int16)
    frontier = np.unique(code.array @ powers)
    dist[frontier] = 0
    level = 0
    while frontier.size:
        nxt = []
        for pos in range(n):
            digit = (frontier // powers[pos]) % q
            for shift in range(1, q):
                nb = frontier + (((digit + shift) % q) - digit) * powers[pos]
                nxt.append(nb)
        cand = np.unique(np.concatenate(nxt))
        cand = cand[dist[cand] < 0]
        if cand.size == 0:
            break
        level += 1
        dist[cand] = level
        frontier = cand
    return level


class CoveringBounds(NamedTuple):
    delsarte: int
    tietavainen: float


def covering_radius_bounds(dist: DistanceDistribution) -> CoveringBounds:
    """(s', xi_k^{(n-1+eps, q)}) with d' = 2k - 1 + eps."""
    dprime = dist.dual_distance
    if dprime < 1:
        raise ValueError("dual distance must be positive")
    n, q = dist.space.n, dist.space.q
    eps = 1 - dprime % 2
    k = (dprime + 1 - eps) // 2
    m = n - 1 + eps
    if k > m + 1:
        return CoveringBounds(dist.s_dual, 0.0)
    xi = smallest_root_xi(HammingSpace(m, q), k).value if m >= 1 else 0.0
    return CoveringBounds(dist.s_dual, xi)


# attainment --------------------------------------------------------------------


def attainment_report(code: Code, h: PotentialFunction | None = None) -> list[BoundReport]:
    """Compare the code with the classical bounds and the Levenshtein bounds."""
    from . import hamming_bounds as hb

    space = code.space
    n, q = space.n, space.q
    dist = distance_distribution(code)
    M = code.size
    if M < 2:
        return []
    d, dp = dist.min_distance, dist.dual_distance
    s, sp, delta, deltap = dist.s, dist.s_dual, dist.delta, dist.delta_dual
    reports = []

    sing = q ** (n - d + 1)
    reports.append(BoundReport("singleton", "upper", Fraction(sing), attained=M == sing))
    if dp <= n:
        sl = q ** (dp - 1)
        reports.append(BoundReport("singleton", "lower", Fraction(sl), attained=M == sl))

    ham = hb.hamming_upper(space, d)
    cond = d == 2 * sp - deltap + 1
    reports.append(BoundReport("hamming", "upper", ham, attained=M == ham,
                               notes=f"perfect={M == ham}; d == 2s'-delta'+1: {cond}",
                               extra={"perfect": M == ham, "condition": cond}))
    if dp <= n:
        rao = hb.rao_lower(space, dp)
        cond = dp == 2 * s - delta + 1
        reports.append(BoundReport("rao", "lower", rao, attained=M == rao,
                                   notes=f"tight design={M == rao}; d' == 2s-delta+1: {cond}",
                                   extra={"tight_design": M == rao, "condition": cond}))

    lev = hb.levenshtein_value(space, d)
    cond = dp >= max(2 * s - delta, 2)
    lev_upper = M == lev
    reports.append(BoundReport("levenshtein", "upper", lev, attained=lev_upper,
                               notes=f"d' >= max(2s-delta,2): {cond}",
                               extra={"condition": cond}))
    if dp <= n:
        low = Fraction(q**n) / hb.levenshtein_value(space, dp)
        cond = d >= max(2 * sp - deltap, 2)
        reports.append(BoundReport("levenshtein", "lower", low, attained=M == low,
                                   notes=f"d >= max(2s'-delta',2): {cond}", extra={"condition": cond}))

    h = h or hamming_newton()
    energy = energy_from_distribution(dist.B, M, h)
    if M <= q**n:
        ulb = hb.ulb_energy(space, M, h)
        close = abs(_to_float(energy) - _to_float(ulb.value)) <= 1e-9 * max(1.0, abs(_to_float(energy)))
        reports.append(BoundReport("ulb", "lower", ulb.value, attained=close,
                                   notes=f"energy {_fmt(energy)} with h={h.label}",
                                   extra={"energy": energy}))
    reports.append(BoundReport("universal", "upper", lev, attained=lev_upper,
                               notes="universally optimal" if lev_upper else "no conclusion"))
    return reports


def _to_float(x) -> float:
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)


def _fmt(x) -> str:
    return str(x) if isinstance(x, (int, Fraction)) else f"{float(x):.12g}"


# embedding -----------------------------------------------------------------------


def binary_to_sphere(code: Code):
    """Map symbol 0 to +1/sqrt(n) and 1 to -1/sqrt(n); inner products become 1 - 2 d / n."""
    from .spherical_bounds import SphericalConfig

    if code.space.q != 2:
        raise ValueError("only binary codes embed into the sphere")
    pts = [tuple(1 if s == 0 else -1 for s in w) for w in code.words]
    return SphericalConfig.from_directions(code.space.n, pts)
