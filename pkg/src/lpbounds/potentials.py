"""Potential functions for energy computations in Hamming space and on the sphere.

Hamming potentials are functions of the distance d in (0, n]; sphere potentials
are functions of the inner product t in [-1, 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from .numeric import is_exact, mp, to_fraction, to_mp


@dataclass(frozen=True)
class PotentialFunction:
    kind: str
    domain: str
    func: Callable = field(repr=False)
    derivative: Callable | None = field(default=None, repr=False)
    monotone: bool = False  # caller asserted: completely (Hamming) / absolutely (sphere) monotone
    params: tuple = ()

    def __post_init__(self):
        if self.domain not in ("hamming", "sphere"):
            raise ValueError(f"unknown domain {self.domain!r}")

    def __call__(self, x):
        return self.func(x)

    def deriv(self, x):
        if self.derivative is not None:
            return self.derivative(x)
        return mp.diff(lambda t: to_mp(self.func(t)), to_mp(x))

    @property
    def label(self) -> str:
        if self.params:
            return f"{self.kind}:" + ",".join(str(p) for p in self.params)
        return self.kind


def _int_power(base, exponent: Fraction):
    """base**(-exponent) exactly when possible, otherwise in mp."""
    if is_exact(base) and exponent.denominator == 1:
        return Fraction(1) / Fraction(base) ** int(exponent)
    return mp.power(to_mp(base), -to_mp(exponent))


# Hamming-space potentials -------------------------------------------------


def hamming_table(values: Mapping[int, object]) -> PotentialFunction:
    """Potential given only at integer distances; exact when the values are rational."""
    table = {int(k): (Fraction(v) if isinstance(v, (int, str, Fraction)) else v) for k, v in values.items()}

    def func(x):
        fx = to_fraction(x)
        if fx.denominator != 1 or int(fx) not in table:
            raise ValueError(f"table potential undefined at distance {x}")
        return table[int(fx)]

    return PotentialFunction("table", "hamming", func, params=(), monotone=False)


def hamming_riesz(s=1) -> PotentialFunction:
    """h(d) = d^(-s)."""
    s = Fraction(s)

    def func(x):
        return _int_power(x, s)

    def deriv(x):
        return -to_mp(s) * mp.power(to_mp(x), -to_mp(s) - 1)

    return PotentialFunction("riesz", "hamming", func, deriv, monotone=s > 0, params=(s,))


def hamming_newton() -> PotentialFunction:
    """h(d) = 1/d, the exact rational default."""
    p = hamming_riesz(1)
    return PotentialFunction("newton", "hamming", p.func, p.derivative, monotone=True)


def hamming_gauss(c=1) -> PotentialFunction:
    """h(d) = exp(-c d)."""
    c = to_mp(Fraction(c))
    return PotentialFunction(
        "gauss", "hamming",
        lambda x: mp.exp(-c * to_mp(x)),
        lambda x: -c * mp.exp(-c * to_mp(x)),
        monotone=True, params=(),
    )


# sphere potentials --------------------------------------------------------


def sphere_riesz(s) -> PotentialFunction:
    """h(t) = |x - y|^(-s) = (2 - 2t)^(-s/2)."""
    half = Fraction(s) / 2

    def func(t):
        return _int_power(2 - 2 * (Fraction(t) if is_exact(t) else to_mp(t)), half)

    def deriv(t):
        return 2 * to_mp(half) * mp.power(2 - 2 * to_mp(t), -to_mp(half) - 1)

    return PotentialFunction("riesz", "sphere", func, deriv, monotone=s > 0, params=(Fraction(s),))


def sphere_newton(n: int) -> PotentialFunction:
    """Newton potential |x - y|^(2-n) on S^{n-1}; for n = 4 this is 1/(2(1-t))."""
    if n < 3:
        raise ValueError("the Newton potential needs dimension at least 3")
    p = sphere_riesz(n - 2)
    return PotentialFunction("newton", "sphere", p.func, p.derivative, monotone=True, params=())


def sphere_gauss(c=1) -> PotentialFunction:
    """h(t) = exp(-c |x - y|^2) = exp(2ct - 2c)."""
    c = to_mp(Fraction(c))
    return PotentialFunction(
        "gauss", "sphere",
        lambda t: mp.exp(2 * c * to_mp(t) - 2 * c),
        lambda t: 2 * c * mp.exp(2 * c * to_mp(t) - 2 * c),
        monotone=True, params=(),
    )


def from_callable(func: Callable, domain: str, derivative: Callable | None = None,
                  monotone: bool = False, name: str = "expr") -> PotentialFunction:
    return PotentialFunction(name, domain, func, derivative, monotone=monotone)


# parsing ------------------------------------------------------------------


def read_table(path) -> dict[int, Fraction]:
    """Read `distance value` pairs, one per line; values may be fractions like 1/3."""
    table: dict[int, Fraction] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'distance value'")
        try:
            table[int(parts[0])] = Fraction(parts[1])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return table


def parse_potential(spec: str, domain: str, n: int | None = None) -> PotentialFunction:
    """Parse `newton | riesz:<s> | gauss | table:<file>`."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "newton":
        if domain == "sphere":
            if n is None:
                raise ValueError("newton on the sphere needs the dimension")
            return sphere_newton(n)
        return hamming_newton()
    if name == "riesz":
        if not arg:
            raise ValueError("riesz needs an exponent, e.g. riesz:2")
        s = Fraction(arg)
        return sphere_riesz(s) if domain == "sphere" else hamming_riesz(s)
    if name == "gauss":
        c = Fraction(arg) if arg else 1
        return sphere_gauss(c) if domain == "sphere" else hamming_gauss(c)
    if name == "table":
        if domain != "hamming":
            raise ValueError("table potentials are only defined on Hamming distances")
        if not arg:
            raise ValueError("table needs a file, e.g. table:h.txt")
        return hamming_table(read_table(arg))
    raise ValueError(f"unknown potential {spec!r}")
