"""Both sides of the Landau-Gonek formula for Dirichlet L-functions.

For primitive ``chi`` and ``T2 > T1``::

    sum_{T1 < gamma < T2} x^rho  =  -(T2 - T1)/(2 pi) Lambda(x) chi(x) 1_Z(x)  +  O(E)

with ``E = x log x loglog 2x + x log x min(T2/x, 1/<x>) + x loglog 2x log 2qT2``
and ``<x>`` the distance from ``x`` to the nearest other prime power.  The
implied constant is not known; reports carry the measured ratio ``|S - M|/E``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import __version__
from .arith import mangoldt_table, next_prime_power, prev_prime_power, prime_power_base
from .cache import get_zeros
from .characters import DirichletCharacter, eval_char
from .zeros import DEFAULT_ZERO_SETTINGS, ZeroList, ZeroSettings

__all__ = [
    "ExactX",
    "LandauSum",
    "LandauReport",
    "GonekSides",
    "von_mangoldt",
    "prime_power_gap",
    "main_term",
    "error_budget",
    "landau_sum",
    "gonek_lemma_sides",
    "verify_thm2",
    "thm2_grid",
]

# Rosser-Schoenfeld: psi(u) < 1.03883 u
PSI_CONST = 1.03883


@dataclass(frozen=True)
class ExactX:
    """A real ``x >= 2`` held as an exact rational."""

    value: Fraction

    def __post_init__(self):
        v = self.value
        if isinstance(v, float) or not isinstance(v, (Rational, str, Decimal)):
            raise TypeError(f"x must be an exact rational, not {type(v).__name__}")
        try:
            v = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot read {self.value!r} as a rational") from exc
        if v < 2:
            raise ValueError(f"x must be at least 2, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x) -> ExactX:
        return x if isinstance(x, ExactX) else cls(x)

    @property
    def is_integer(self) -> bool:
        return self.value.denominator == 1

    @property
    def prime_power(self) -> tuple[int, int] | None:
        """``(p, k)`` when ``x = p^k``."""
        if not self.is_integer:
            return None
        n = self.value.numerator
        p = prime_power_base(n)
        if p is None:
            return None
        return p, round(math.log(n) / math.log(p))

    @property
    def log(self) -> float:
        return math.log(self.value.numerator) - math.log(self.value.denominator)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return str(self.value)


def von_mangoldt(x) -> float:
    pp = ExactX.of(x).prime_power
    return math.log(pp[0]) if pp else 0.0


def prime_power_gap(x) -> Fraction:
    """``<x>``: distance to the nearest prime power other than ``x``."""
    v = ExactX.of(x).value
    lo_int = math.floor(v)
    hi_int = math.ceil(v)
    if v.denominator == 1:
        below = prev_prime_power(lo_int)
        above = next_prime_power(hi_int)
    else:
        below = lo_int if prime_power_base(lo_int) else prev_prime_power(lo_int)
        above = hi_int if prime_power_base(hi_int) else next_prime_power(hi_int)
    gaps = [abs(v - p) for p in (below, above) if p is not None]
    return min(gaps)


def main_term(chi: DirichletCharacter, x, t1: float, t2: float) -> complex:
    """``-(T2 - T1)/(2 pi) Lambda(x) chi(x) 1_Z(x)``."""
    if t2 < t1:
        raise ValueError("need T2 >= T1")
    ex = ExactX.of(x)
    pp = ex.prime_power
    if pp is None:
        return 0j
    val = eval_char(chi, ex.value.numerator)
    if val == 0:
        return 0j
    return -(t2 - t1) / (2 * math.pi) * math.log(pp[0]) * complex(val)


def error_budget(x, q: int, t2: float) -> float:
    ex = ExactX.of(x)
    if t2 <= 1:
        raise ValueError("error budget needs T2 > 1")
    xf = float(ex.value)
    lx = ex.log
    llx = math.log(math.log(2 * xf))
    gap = prime_power_gap(ex)
    # min{T2/x, 1/<x>} exactly, then to float
    m = min(Fraction(t2) / ex.value, 1 / gap)
    return (xf * lx * llx + xf * lx * float(m)
            + xf * llx * math.log(2 * q * t2))


@dataclass(frozen=True)
class LandauSum:
    value: complex
    zeros_used: int
    certified: bool


def landau_sum(zl: ZeroList, x) -> LandauSum:
    """``sum m * x^(beta + i gamma)`` over the list, compensated summation."""
    ex = ExactX.of(x)
    lx = ex.log
    re, im = [], []
    for z in zl.zeros:
        mag = z.multiplicity * math.exp(z.beta * lx)
        ang = z.gamma * lx
        re.append(mag * math.cos(ang))
        im.append(mag * math.sin(ang))
    return LandauSum(complex(math.fsum(re), math.fsum(im)), zl.count, zl.certified)


@dataclass(frozen=True)
class GonekSides:
    lhs: float
    rhs: float
    ratio: float
    partial: float
    tail_bound: float
    cutoff: int


def gonek_lemma_sides(x, T: float, cutoff: int = 10**6) -> GonekSides:
    """Truncated left side (with tail bound added) and the constant-free right
    side of Gonek's bound at ``c = 1 + 1/log x``."""
    ex = ExactX.of(x)
    if T <= 1:
        raise ValueError("need T > 1")
    xf = float(ex.value)
    if cutoff <= 2 * xf:
        raise ValueError("cutoff must exceed 2x")
    lx = ex.log
    c = 1 + 1 / lx
    lam = mangoldt_table(cutoff)
    n = np.flatnonzero(lam)
    if ex.is_integer:
        n = n[n != ex.value.numerator]
    nf = n.astype(float)
    dist = np.abs(lx - np.log(nf))
    with np.errstate(divide="ignore"):
        weight = np.minimum(T, 1 / dist)
    terms = lam[n] * np.exp(-c * np.log(nf)) * weight
    partial = math.fsum(terms)
    tail = PSI_CONST * c * cutoff ** (1 - c) / ((c - 1) * math.log(cutoff / xf))
    lhs = partial + tail
    gap = prime_power_gap(ex)
    rhs = lx * math.log(math.log(2 * xf)) + lx * float(min(Fraction(T) / ex.value, 1 / gap))
    return GonekSides(lhs=lhs, rhs=rhs, ratio=lhs / rhs, partial=partial,
                      tail_bound=tail, cutoff=cutoff)


@dataclass(frozen=True)
class LandauReport:
    label: str
    x: str
    t1: float
    t2: float
    zero_sum: complex
    main_term: complex
    error_budget: float
    observed_error: float
    ratio: float
    zeros_used: int
    certified: bool
    settings_fingerprint: str
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "label": self.label, "x": self.x, "t1": self.t1, "t2": self.t2,
            "zero_sum_re": self.zero_sum.real, "zero_sum_im": self.zero_sum.imag,
            "main_term_re": self.main_term.real, "main_term_im": self.main_term.imag,
            "error_budget": self.error_budget, "observed_error": self.observed_error,
            "ratio": self.ratio, "zeros_used": self.zeros_used,
            "certified": self.certified,
            "settings_fingerprint": self.settings_fingerprint, "version": self.version,
        }


CSV_COLUMNS = ("label", "x", "t1", "t2", "zero_sum_re", "zero_sum_im", "main_term_re",
               "main_term_im", "error_budget", "observed_error", "ratio", "zeros_used",
               "certified", "settings_fingerprint", "version")


def report_from_zeros(chi: DirichletCharacter, x, zl: ZeroList, t1: float, t2: float,
                      fingerprint: str) -> LandauReport:
    ex = ExactX.of(x)
    s = landau_sum(zl, ex)
    m = main_term(chi, ex, t1, t2)
    e = error_budget(ex, chi.modulus, t2)
    obs = abs(s.value - m)
    return LandauReport(label=str(chi.label), x=str(ex), t1=t1, t2=t2, zero_sum=s.value,
                        main_term=m, error_budget=e, observed_error=obs, ratio=obs / e,
                        zeros_used=s.zeros_used, certified=s.certified,
                        settings_fingerprint=fingerprint)


def _check_landau_inputs(chi: DirichletCharacter, t1: float, t2: float) -> None:
    if not chi.primitive:
        raise ValueError(f"{chi.label} is not primitive")
    if not t2 > t1 >= 1:
        raise ValueError(f"need T2 > T1 >= 1, got ({t1}, {t2})")


def verify_thm2(chi: DirichletCharacter, x, t1: float, t2: float, cache=None,
                settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> LandauReport:
    """Zero sum, main term, error budget and their ratio for one cell."""
    _check_landau_inputs(chi, t1, t2)
    zl = get_zeros(chi, t1, t2, settings, cache)
    return report_from_zeros(chi, x, zl, t1, t2, settings.fingerprint())


def thm2_grid(chars, xs, t2s, t1: float = 1.0, cache=None,
              settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> list[LandauReport]:
    """Reports for every (character, x, T2); zeros are located once per
    character up to ``max(t2s)`` and restricted."""
    out = []
    top = max(t2s)
    for chi in chars:
        _check_landau_inputs(chi, t1, top)
        full = get_zeros(chi, t1, top, settings, cache)
        for t2 in sorted(t2s):
            zl = full if t2 == top else full.restrict(t1, t2)
            for x in xs:
                out.append(report_from_zeros(chi, x, zl, t1, t2, settings.fingerprint()))
    return out
