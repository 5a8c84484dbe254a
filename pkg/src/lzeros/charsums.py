"""Incomplete character sums, Burgess right-hand sides, witness primes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .arith import is_cubefree, primes_up_to
from .characters import DirichletCharacter, enumerate_characters, eval_char

__all__ = [
    "BurgessParams",
    "CharSumReport",
    "Witness",
    "char_sum",
    "char_sum_report",
    "burgess_rhs",
    "general_eps",
    "cubefree_eps",
    "min_cubefree_r",
    "find_witness_prime",
    "scan_lemma3",
    "burgess_scan",
]

DEFAULT_THETA = 0.4
DEFAULT_THETA_CUBEFREE = 0.3
DEFAULT_C3 = 2.0
DEFAULT_C4 = 1.0


def general_eps(theta: float) -> float:
    """``eps = (theta - 1/3)/4`` used with ``r = 3``."""
    return (theta - 1 / 3) / 4


def cubefree_eps(theta: float, r: int) -> float:
    return (theta - 0.25) / (8 * r) - 1 / (4 * r * r)


def min_cubefree_r(theta: float) -> int:
    """Smallest integer ``r`` with ``cubefree_eps(theta, r) > 0``, i.e. ``r > 2/(theta - 1/4)``."""
    if theta <= 0.25:
        raise ValueError("cubefree path needs theta > 1/4")
    return math.floor(2 / (theta - 0.25)) + 1


@dataclass(frozen=True)
class BurgessParams:
    r: int = 3
    eps: float = field(default_factory=lambda: general_eps(DEFAULT_THETA))
    theta: float = DEFAULT_THETA
    c3: float = DEFAULT_C3
    c4: float = DEFAULT_C4
    cubefree: bool = False

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("Burgess needs r >= 2")
        if self.r > 3 and not self.cubefree:
            raise ValueError("r > 3 is only available for cubefree moduli")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        if self.c3 <= 0 or self.c4 <= 0:
            raise ValueError("c3 and c4 must be positive")

    @classmethod
    def general(cls, theta: float = DEFAULT_THETA, **kw) -> BurgessParams:
        return cls(r=3, eps=general_eps(theta), theta=theta, cubefree=False, **kw)

    @classmethod
    def for_cubefree(cls, theta: float = DEFAULT_THETA_CUBEFREE, **kw) -> BurgessParams:
        r = min_cubefree_r(theta)
        return cls(r=r, eps=cubefree_eps(theta, r), theta=theta, cubefree=True, **kw)

    def check_theta(self) -> None:
        floor = 0.25 if self.cubefree else 1 / 3
        if self.theta <= floor:
            raise ValueError(f"theta must exceed {floor:.4g} on this path, got {self.theta}")

    @property
    def q_exponent(self) -> float:
        return (self.r + 1) / (4 * self.r**2) + self.eps


def _residue_counts(q: int, N: float, H: float) -> list[int]:
    lo = math.floor(N) + 1
    hi = math.floor(N + H)
    full, extra = divmod(max(hi - lo + 1, 0), q)
    counts = [full] * q
    for n in range(lo, lo + extra):
        counts[n % q] += 1
    return counts


def char_sum(chi: DirichletCharacter, N: float, H: float) -> complex:
    """``sum_{N < n <= N + H} chi(n)``.

    Residue-class counts are exact integers; whole periods cancel exactly for
    nonprincipal characters, and only the remainder is embedded in C.
    """
    if H < 1:
        raise ValueError("need H >= 1")
    q = chi.modulus
    counts = _residue_counts(q, N, H)
    units = [a for a in range(q) if chi.numerators[a] is not None]
    if not chi.is_principal:
        base = min(counts[a] for a in units)
        counts = [c - base for c in counts]
    by_angle: Counter = Counter()
    for a in units:
        if counts[a]:
            by_angle[chi.numerators[a]] += counts[a]
    re, im = [], []
    for k, c in sorted(by_angle.items()):
        v = complex(eval_char(chi, _rep(chi, k)))
        re.append(c * v.real)
        im.append(c * v.imag)
    return complex(math.fsum(re), math.fsum(im))


def _rep(chi: DirichletCharacter, k: int) -> int:
    return chi.numerators.index(k)


def burgess_rhs(q: int, H: float, params: BurgessParams) -> float:
    """``H^(1 - 1/r) q^((r+1)/(4 r^2) + eps)`` without the implied constant."""
    if params.cubefree and not is_cubefree(q):
        raise ValueError(f"{q} is not cubefree; r = {params.r} is not available")
    return H ** (1 - 1 / params.r) * q ** params.q_exponent


@dataclass(frozen=True)
class CharSumReport:
    label: str
    N: float
    H: float
    value: complex
    magnitude: float
    burgess_rhs: float
    ratio: float


def char_sum_report(chi: DirichletCharacter, N: float, H: float,
                    params: BurgessParams) -> CharSumReport:
    s = char_sum(chi, N, H)
    rhs = burgess_rhs(chi.modulus, H, params)
    return CharSumReport(str(chi.label), N, H, s, abs(s), rhs, abs(s) / rhs)


@dataclass(frozen=True)
class Witness:
    label: str
    found: bool
    p0: int | None
    distance: float | None  # |chi(p0) - 1|
    bound: float  # c3 q^theta
    threshold: float  # c4 / (log q)^2

    @property
    def scaled(self) -> float | None:
        """``|chi(p0) - 1| (log q)^2``, comparable with ``c4``."""
        if self.distance is None:
            return None
        q = int(self.label.split(".")[0])
        return self.distance * math.log(q) ** 2


def _distance_from_one(chi: DirichletCharacter, p: int) -> float:
    t = chi.angle(p)
    if t is None:
        return 1.0
    return 2 * abs(math.sin(math.pi * t))


def find_witness_prime(chi: DirichletCharacter, theta: float, c3: float = DEFAULT_C3,
                       c4: float = DEFAULT_C4, coprime: bool = False) -> Witness:
    """Smallest prime ``p0 <= c3 q^theta`` with ``|chi(p0) - 1| >= c4/(log q)^2``.

    A prime dividing ``q`` has ``chi(p0) = 0`` and qualifies as stated.  With
    ``coprime`` such primes are skipped, which is what separating two
    characters at ``p0`` needs: for ``chi = chi1 * conj(chi2)`` and ``p0`` prime
    to ``q`` one has ``|chi1(p0) - chi2(p0)| = |chi(p0) - 1|``.
    """
    if chi.is_principal:
        raise ValueError("the principal character has no witness prime")
    if theta <= 0 or c3 <= 0 or c4 <= 0:
        raise ValueError("theta, c3, c4 must be positive")
    q = chi.modulus
    bound = c3 * q**theta
    threshold = c4 / math.log(q) ** 2
    for p in primes_up_to(math.floor(bound)):
        if coprime and q % p == 0:
            continue
        d = _distance_from_one(chi, p)
        if d >= threshold:
            return Witness(str(chi.label), True, p, d, bound, threshold)
    return Witness(str(chi.label), False, None, None, bound, threshold)


@dataclass(frozen=True)
class WitnessScan:
    rows: list[Witness]
    theta: float
    c3: float
    c4: float

    @property
    def all_found(self) -> bool:
        return all(w.found for w in self.rows)

    @property
    def worst(self) -> Witness | None:
        """Found witness with the smallest scaled distance, else the first miss."""
        misses = [w for w in self.rows if not w.found]
        if misses:
            return misses[0]
        return min(self.rows, key=lambda w: w.scaled, default=None)


def scan_lemma3(q_range, theta: float = DEFAULT_THETA, c3: float = DEFAULT_C3,
                c4: float = DEFAULT_C4, cubefree_only: bool = False,
                coprime: bool = False) -> WitnessScan:
    """Witness search for every nonprincipal character mod ``q``, ``q >= 3``."""
    rows = []
    for q in q_range:
        if q < 3 or (cubefree_only and not is_cubefree(q)):
            continue
        for chi in enumerate_characters(q):
            if not chi.is_principal:
                rows.append(find_witness_prime(chi, theta, c3, c4, coprime))
    return WitnessScan(rows, theta, c3, c4)


def burgess_scan(q_range, theta: float = DEFAULT_THETA,
                 cubefree_only: bool = False) -> list[CharSumReport]:
    """``|S(0, ceil(q^theta))| / burgess_rhs`` for every primitive ``chi`` mod ``q``.

    Uses ``r = 3`` unless ``cubefree_only``, in which case the larger cubefree
    ``r`` for ``theta`` is used.
    """
    params = BurgessParams.for_cubefree(theta) if cubefree_only else BurgessParams.general(theta)
    params.check_theta()
    rows = []
    for q in q_range:
        if q < 3 or (cubefree_only and not is_cubefree(q)):
            continue
        H = math.ceil(q**theta)
        for chi in enumerate_characters(q):
            if chi.primitive:
                rows.append(char_sum_report(chi, 0, H, params))
    return rows
