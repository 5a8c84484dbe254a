"""Exact Dirichlet characters with Conrey labels.

Values are stored as exact angles: ``chi(m) = exp(2*pi*i * k/order)`` with the
integer numerator ``k`` kept per residue class.  Floating point only appears
when a value is embedded into the complex numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import euler_phi, factorize, primitive_root

__all__ = [
    "CharacterLabel",
    "DirichletCharacter",
    "RootOfUnity",
    "character_from_label",
    "enumerate_characters",
    "enumerate_primitive",
    "eval_char",
    "conductor",
    "mul_conj",
]


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """``exp(2 pi i * turn)`` with ``turn`` an exact fraction in ``[0, 1)``."""

    turn: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            return RootOfUnity(self.turn + other.turn)
        if other == 0:
            return 0
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity(self.turn * k)

    def conjugate(self) -> RootOfUnity:
        return RootOfUnity(-self.turn)

    @property
    def order(self) -> int:
        return self.turn.denominator

    def __complex__(self) -> complex:
        # exact embedding on the quarter turns
        quarter = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j,
                   Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
        if self.turn in quarter:
            return quarter[self.turn]
        return cmath.exp(2j * math.pi * float(self.turn))

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return self.turn == other.turn
        if isinstance(other, (int, float, complex)):
            if self.turn in (Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)):
                return complex(self) == other
            return False
        return NotImplemented

    def __hash__(self):
        return hash(("rou", self.turn))

    def __repr__(self):
        return f"RootOfUnity({self.turn})"


@dataclass(frozen=True, order=True)
class CharacterLabel:
    """Conrey label ``q.n``."""

    q: int
    n: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not isinstance(self.n, int):
            raise TypeError("Conrey label components must be integers")
        if self.q < 1:
            raise ValueError(f"modulus must be positive, got {self.q}")
        if not 1 <= self.n <= self.q or math.gcd(self.n, self.q) != 1:
            raise ValueError(f"invalid Conrey index {self.n} for modulus {self.q}")

    @classmethod
    def parse(cls, text: str) -> CharacterLabel:
        try:
            q, n = text.strip().split(".")
            return cls(int(q), int(n))
        except (ValueError, TypeError) as exc:
            raise ValueError(f"bad character label {text!r}; expected q.n") from exc

    def __str__(self):
        return f"{self.q}.{self.n}"


@dataclass(frozen=True)
class DirichletCharacter:
    label: CharacterLabel
    conductor: int
    order: int
    parity: int
    # numerators[a] = k with chi(a) = e(k/order); None where gcd(a, q) > 1
    numerators: tuple = field(repr=False)

    @property
    def modulus(self) -> int:
        return self.label.q

    @property
    def primitive(self) -> bool:
        return self.conductor == self.label.q

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    def angle(self, m: int) -> Fraction | None:
        k = self.numerators[m % self.modulus]
        if k is None:
            return None
        return Fraction(k, self.order)

    def __call__(self, m: int) -> complex:
        return complex(eval_char(self, m))

    def conj(self) -> DirichletCharacter:
        q, n = self.label.q, self.label.n
        return character_from_label(CharacterLabel(q, pow(n, -1, q) if q > 1 else 1))

    def complex_values(self) -> np.ndarray:
        """``chi(a)`` for ``a = 0..q-1`` as a read-only complex array."""
        return _complex_table(self)

    def __repr__(self):
        return (f"DirichletCharacter({self.label}, conductor={self.conductor}, "
                f"order={self.order}, parity={self.parity})")


@lru_cache(maxsize=None)
def _complex_table(chi: DirichletCharacter) -> np.ndarray:
    vals = np.array([0j if k is None else complex(RootOfUnity(Fraction(k, chi.order)))
                     for k in chi.numerators])
    vals.setflags(write=False)
    return vals


def _local_logs(p: int, e: int) -> tuple[int, dict[int, tuple[int, ...]]]:
    """Discrete-log coordinates on ``(Z/p^e)^*``.

    Odd ``p``: one coordinate, the log to the smallest primitive root mod p^2.
    ``p = 2``: coordinates ``(b, a)`` with ``m = (-1)^b 5^a``.
    """
    pe = p**e
    logs: dict[int, tuple[int, ...]] = {}
    if p == 2:
        if e == 1:
            return pe, {1: ()}
        half = 2 ** (e - 2)
        x = 1
        for a in range(half):
            logs[x % pe] = (0, a)
            logs[(-x) % pe] = (1, a)
            x = x * 5 % pe
        return pe, logs
    g = primitive_root(p * p) if p * p > 1 else 1
    phi = euler_phi(pe)
    x = 1
    for a in range(phi):
        logs[x] = (a,)
        x = x * g % pe
    return pe, logs


def _local_turn(p: int, e: int, ln: tuple[int, ...], lm: tuple[int, ...]) -> Fraction:
    if p == 2:
        if e == 1:
            return Fraction(0)
        return Fraction(ln[0] * lm[0], 2) + Fraction(ln[1] * lm[1], 2 ** (e - 2))
    return Fraction(ln[0] * lm[0], euler_phi(p**e))


@lru_cache(maxsize=None)
def character_from_label(label: CharacterLabel) -> DirichletCharacter:
    """Build the character with Conrey label ``label``."""
    if not isinstance(label, CharacterLabel):
        raise TypeError("expected a CharacterLabel")
    q, n = label.q, label.n
    parts = [(p, e, *_local_logs(p, e)) for p, e in factorize(q).items()] if q > 1 else []
    turns: list[Fraction | None] = []
    for a in range(q):
        if math.gcd(a, q) != 1:
            turns.append(None)
            continue
        t = Fraction(0)
        for p, e, pe, logs in parts:
            t += _local_turn(p, e, logs[n % pe], logs[a % pe])
        turns.append(t % 1)
    if q == 1:
        turns = [Fraction(0)]
    order = 1
    for t in turns:
        if t is not None:
            order = math.lcm(order, t.denominator)
    numerators = tuple(None if t is None else int(t * order) for t in turns)
    minus_one = turns[(q - 1) % q]
    parity = 0 if minus_one == 0 else 1
    chi = DirichletCharacter(label=label, conductor=0, order=order,
                             parity=parity, numerators=numerators)
    object.__setattr__(chi, "conductor", _conductor_of(chi))
    return chi


def _conductor_of(chi: DirichletCharacter) -> int:
    q = chi.modulus
    for f in sorted(d for d in range(1, q + 1) if q % d == 0):
        if all(chi.numerators[a] == 0 for a in range(1, q, f)
               if chi.numerators[a] is not None):
            return f
    return q


def eval_char(chi: DirichletCharacter, m: int) -> RootOfUnity | int:
    """Exact ``chi(m)``: a :class:`RootOfUnity`, or the integer 0."""
    t = chi.angle(m)
    if t is None:
        return 0
    return RootOfUnity(t)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    if q < 1:
        raise ValueError("modulus must be positive")
    return [character_from_label(CharacterLabel(q, n))
            for n in range(1, q + 1) if math.gcd(n, q) == 1]


def enumerate_primitive(q: int) -> list[DirichletCharacter]:
    """Primitive characters mod ``q`` ordered by Conrey index."""
    return [chi for chi in enumerate_characters(q) if chi.primitive]


def mul_conj(chi1: DirichletCharacter, chi2: DirichletCharacter) -> DirichletCharacter:
    """The character ``n -> chi1(n) * conj(chi2(n))``."""
    if chi1.modulus != chi2.modulus:
        raise ValueError(f"moduli differ: {chi1.modulus} vs {chi2.modulus}")
    q = chi1.modulus
    if q == 1:
        return chi1
    n = chi1.label.n * pow(chi2.label.n, -1, q) % q
    return character_from_label(CharacterLabel(q, n))
