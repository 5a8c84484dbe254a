"""Do two primitive characters mod q have different zeros in a window?

Two routes: a direct tolerance-matched comparison of zero multisets, and the
quantitative argument that a witness prime p0 (where the two characters
disagree) separates the two Landau sums over ``(T, T + Delta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import __version__
from .arith import is_cubefree
from .cache import get_zeros
from .characters import DirichletCharacter, mul_conj
from .charsums import DEFAULT_C3, DEFAULT_C4, find_witness_prime
from .landau import error_budget, landau_sum
from .zeros import DEFAULT_ZERO_SETTINGS, Zero, ZeroList, ZeroSettings

__all__ = [
    "DistinctnessParams",
    "Region",
    "MultisetDiff",
    "region",
    "delta",
    "diff_multisets",
    "compare_zero_multisets",
    "verify_thm1",
]

DISTINCT = "distinct"
SAME = "indistinguishable-at-tolerance"
WITHHELD = "withheld"


@dataclass(frozen=True)
class DistinctnessParams:
    theta: float = 0.4
    c1: float = 1.0
    c2: float = 1.0
    c3: float = DEFAULT_C3
    c4: float = DEFAULT_C4
    cubefree: bool = False

    def __post_init__(self):
        floor = 0.25 if self.cubefree else 1 / 3
        if self.theta <= floor:
            raise ValueError(f"theta must exceed {floor:.4g} on this path, got {self.theta}")
        if min(self.c1, self.c2, self.c3, self.c4) <= 0:
            raise ValueError("constants must be positive")

    @property
    def theta_prime(self) -> float:
        return (self.theta + (0.25 if self.cubefree else 1 / 3)) / 2

    def as_dict(self) -> dict:
        return {"theta": self.theta, "theta_prime": self.theta_prime, "c1": self.c1,
                "c2": self.c2, "c3": self.c3, "c4": self.c4, "cubefree": self.cubefree}


@dataclass(frozen=True)
class Region:
    q: int
    T: float
    width: float
    in_hypothesis: bool  # T >= c1 q^theta

    @property
    def t_lo(self) -> float:
        return self.T

    @property
    def t_hi(self) -> float:
        return self.T + self.width


def _check_qT(q: int, T: float) -> None:
    if q < 3:
        raise ValueError("need q >= 3")
    if T <= 1:
        raise ValueError("need T > 1")


def region(q: int, T: float, params: DistinctnessParams = DistinctnessParams()) -> Region:
    """``0 < sigma < 1, T < t < T + c2 q^theta log T``."""
    _check_qT(q, T)
    width = params.c2 * q**params.theta * math.log(T)
    return Region(q, T, width, T >= params.c1 * q**params.theta)


@dataclass(frozen=True)
class Delta:
    value: float
    below_T: bool


def delta(q: int, T: float, params: DistinctnessParams = DistinctnessParams()) -> Delta:
    """``c2 q^theta log T / log q`` and whether it is below ``T``."""
    _check_qT(q, T)
    d = params.c2 * q**params.theta * math.log(T) / math.log(q)
    return Delta(d, d < T)


@dataclass(frozen=True)
class MultisetDiff:
    only_in_first: tuple[Zero, ...]
    only_in_second: tuple[Zero, ...]
    matched: tuple[tuple[Zero, Zero, float], ...]
    verdict: str
    tol: float

    def mirrored(self) -> MultisetDiff:
        return MultisetDiff(self.only_in_second, self.only_in_first,
                            tuple((b, a, d) for a, b, d in self.matched), self.verdict, self.tol)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict, "tol": self.tol,
            "only_in_first": [z.gamma for z in self.only_in_first],
            "only_in_second": [z.gamma for z in self.only_in_second],
            "matched": len(self.matched),
            "max_matched_distance": max((d for *_, d in self.matched), default=0.0),
        }


def _expand(zl: ZeroList) -> list[Zero]:
    return [z for z in zl.zeros for _ in range(z.multiplicity)]


def diff_multisets(zl1: ZeroList, zl2: ZeroList, tol: float = 1e-6) -> MultisetDiff:
    """Greedy nearest-neighbour matching of zeros within ``tol``.

    Candidate pairs are taken in order of increasing ``|rho1 - rho2|`` with
    index tie-breaks, so swapping the inputs mirrors the result.
    """
    if not (zl1.certified and zl2.certified):
        return MultisetDiff(tuple(_expand(zl1)), tuple(_expand(zl2)), (), WITHHELD, tol)
    a, b = _expand(zl1), _expand(zl2)
    pairs = []
    j0 = 0
    gb = [z.gamma for z in b]
    for i, za in enumerate(a):
        while j0 < len(b) and gb[j0] < za.gamma - tol:
            j0 += 1
        j = j0
        while j < len(b) and gb[j] <= za.gamma + tol:
            d = abs(za.rho - b[j].rho)
            if d <= tol:
                pairs.append((d, za.gamma, b[j].gamma, i, j))
            j += 1
    pairs.sort()
    used_a, used_b, matched = set(), set(), []
    for d, _, _, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        matched.append((a[i], b[j], d))
    only1 = tuple(z for i, z in enumerate(a) if i not in used_a)
    only2 = tuple(z for j, z in enumerate(b) if j not in used_b)
    verdict = DISTINCT if only1 or only2 else SAME
    matched.sort(key=lambda m: m[0].gamma)
    return MultisetDiff(only1, only2, tuple(matched), verdict, tol)


def _same_modulus_pair(chi1: DirichletCharacter, chi2: DirichletCharacter) -> None:
    if chi1.modulus != chi2.modulus:
        raise ValueError("characters must share a modulus")
    for chi in (chi1, chi2):
        if not chi.primitive:
            raise ValueError(f"{chi.label} is not primitive")


def compare_zero_multisets(chi1: DirichletCharacter, chi2: DirichletCharacter,
                           t1: float, t2: float, tol: float = 1e-6, cache=None,
                           settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> MultisetDiff:
    _same_modulus_pair(chi1, chi2)
    zl1 = get_zeros(chi1, t1, t2, settings, cache)
    zl2 = get_zeros(chi2, t1, t2, settings, cache)
    return diff_multisets(zl1, zl2, tol)


@dataclass
class DistinctnessReport:
    labels: tuple[str, str]
    T: float
    params: dict
    flags: list[str] = field(default_factory=list)
    witness: dict | None = None
    window: tuple[float, float] | None = None
    delta_below_T: bool | None = None
    sums: dict | None = None
    diff: dict | None = None
    certified: bool = False
    status: str = "ok"
    settings_fingerprint: str = ""
    version: str = __version__

    @property
    def verdict(self) -> str | None:
        return None if self.diff is None else self.diff["verdict"]

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels), "T": self.T, "params": self.params,
            "flags": list(self.flags), "witness": self.witness,
            "window": list(self.window) if self.window else None,
            "delta_below_T": self.delta_below_T, "sums": self.sums, "diff": self.diff,
            "certified": self.certified, "status": self.status,
            "settings_fingerprint": self.settings_fingerprint, "version": self.version,
        }


def verify_thm1(chi1: DirichletCharacter, chi2: DirichletCharacter, T: float,
                params: DistinctnessParams = DistinctnessParams(), cache=None,
                settings: ZeroSettings = DEFAULT_ZERO_SETTINGS,
                tol: float = 1e-6) -> DistinctnessReport:
    """Witness prime, two Landau sums over ``(T, T + Delta)`` and the direct diff.

    Hypotheses that only hold asymptotically (``T >= c1 q^theta``, ``Delta < T``,
    a cubefree modulus on the cubefree path) are reported as flags.
    """
    _same_modulus_pair(chi1, chi2)
    if chi1 == chi2:
        raise ValueError("the two characters must be distinct")
    q = chi1.modulus
    _check_qT(q, T)
    rep = DistinctnessReport(labels=(str(chi1.label), str(chi2.label)), T=T,
                             params=params.as_dict(), settings_fingerprint=settings.fingerprint())
    reg = region(q, T, params)
    if not reg.in_hypothesis:
        rep.flags.append("T below c1*q^theta: outside the asymptotic range")
    if params.cubefree and not is_cubefree(q):
        rep.flags.append(f"q = {q} is not cubefree: cubefree path does not apply")
    chi = mul_conj(chi1, chi2)
    w = find_witness_prime(chi, params.theta_prime, params.c3, params.c4, coprime=True)
    rep.witness = {"character": str(chi.label), "found": w.found, "p0": w.p0,
                   "distance": w.distance, "bound": w.bound, "threshold": w.threshold}
    if not w.found:
        rep.status = "halted: no witness prime prime to q below c3*q^theta'"
        return rep
    d = delta(q, T, params)
    rep.delta_below_T = d.below_T
    if not d.below_T:
        rep.flags.append("Delta >= T")
    t_lo, t_hi = T, T + d.value
    rep.window = (t_lo, t_hi)
    zl1 = get_zeros(chi1, t_lo, t_hi, settings, cache)
    zl2 = get_zeros(chi2, t_lo, t_hi, settings, cache)
    p0 = w.p0
    s1 = landau_sum(zl1, p0).value
    s2 = landau_sum(zl2, p0).value
    v1, v2 = chi1(p0), chi2(p0)
    separation = d.value * math.log(p0) / (2 * math.pi) * abs(v1 - v2)
    error_scale = p0 * math.log(T) * math.log(math.log(2 * p0))
    # both characters share q, hence the same budget
    budget = error_budget(p0, q, t_hi)
    rep.sums = {
        "p0": p0, "delta": d.value,
        "S1_re": s1.real, "S1_im": s1.imag, "S2_re": s2.real, "S2_im": s2.imag,
        "abs_difference": abs(s1 - s2),
        "separation": separation,
        "error_scale": error_scale,
        "combined_error_budget": 2 * budget,
        "zeros_first": zl1.count, "zeros_second": zl2.count,
    }
    diff = diff_multisets(zl1, zl2, tol)
    rep.diff = diff.to_dict()
    rep.certified = zl1.certified and zl2.certified
    return rep
