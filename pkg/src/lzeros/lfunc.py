"""Evaluation of Dirichlet L-functions through Hurwitz zeta.

``L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)`` where each Hurwitz zeta is
computed by Euler-Maclaurin summation with shift ``N`` and ``M`` Bernoulli
corrections.  The direct part of all residue classes is merged into one
Dirichlet polynomial of length ``N*q`` and evaluated for a whole batch of
``s`` at once.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import loggamma

from .arith import mangoldt_table
from .characters import DirichletCharacter, eval_char
from .errors import AccuracyError, PoleError

__all__ = [
    "EvalSettings",
    "LValue",
    "RootNumber",
    "LogDerivative",
    "hurwitz_zeta",
    "eval_L",
    "eval_L_many",
    "gauss_sum",
    "root_number",
    "completed_L",
    "log_deriv_L",
    "hardy_Z",
    "hardy_Z_many",
]

EPS = np.finfo(float).eps
Z_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class EvalSettings:
    """Knobs for L-function evaluation.

    ``shift=None`` picks ``N = ceil(|s|) + 10`` per call.  ``precision`` is
    ``"standard"`` (complex128) or ``"extended"`` (mpmath at ``dps`` digits).
    """

    rel_tol: float = 1e-12
    shift: int | None = None
    bernoulli_terms: int = 20
    precision: str = "standard"
    dps: int = 30

    def __post_init__(self):
        if self.precision not in ("standard", "extended"):
            raise ValueError(f"unknown precision mode {self.precision!r}")
        if self.bernoulli_terms < 1:
            raise ValueError("need at least one Bernoulli correction")

    def shift_for(self, smax: float) -> int:
        auto = math.ceil(smax) + 10
        return auto if self.shift is None else max(self.shift, 1)

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


DEFAULT_SETTINGS = EvalSettings()


@dataclass(frozen=True)
class LValue:
    value: complex
    err: float

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class RootNumber:
    epsilon: complex
    gauss_sum: complex
    parity: int


@dataclass(frozen=True)
class LogDerivative:
    value: complex
    tail_bound: float
    cutoff: int


@lru_cache(maxsize=None)
def _bernoulli_ratios(m: int) -> tuple[Fraction, ...]:
    """``B_{2k} / (2k)!`` for ``k = 1..m``."""
    # Akiyama-Tanigawa for B_n with B_1 = +1/2; even indices are standard.
    nmax = 2 * m + 2
    a = [Fraction(0)] * (nmax + 1)
    bern = []
    for i in range(nmax + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])
    return tuple(bern[2 * k] / math.factorial(2 * k) for k in range(1, m + 2))


def _as_unit_interval(a) -> Fraction:
    fa = Fraction(a)
    if not 0 < fa <= 1:
        raise ValueError(f"Hurwitz parameter must lie in (0, 1], got {a}")
    return fa


def _em_tail(s: np.ndarray, w: np.ndarray, m: int, drop_pole: bool):
    """Euler-Maclaurin remainder past the direct sum, shape ``(len(s), len(w))``.

    With ``drop_pole`` the constant ``1/(s-1)`` part of ``w^(1-s)/(s-1)`` is
    omitted; callers use it only when the weights over ``w`` sum to zero.
    """
    s2 = s[:, None]
    lw = np.log(w)[None, :]
    w_neg_s = np.exp(-s2 * lw)
    sm1 = s2 - 1.0
    if drop_pole:
        with np.errstate(divide="ignore", invalid="ignore"):
            pole = np.where(sm1 == 0, -lw, np.expm1(-sm1 * lw) / np.where(sm1 == 0, 1.0, sm1))
    else:
        pole = w_neg_s * w[None, :] / sm1
    total = pole + 0.5 * w_neg_s
    ratios = _bernoulli_ratios(m)
    poch = s2 * np.ones_like(lw)
    term_pow = w_neg_s / w[None, :]
    inv_w2 = 1.0 / (w * w)[None, :]
    for k in range(1, m + 1):
        total = total + float(ratios[k - 1]) * poch * term_pow
        poch = poch * (s2 + 2 * k - 1) * (s2 + 2 * k)
        term_pow = term_pow * inv_w2
    # first omitted term times |s + 2m + 1| / (sigma + 2m + 1)
    nxt = np.abs(float(ratios[m]) * poch * term_pow)
    denom = np.maximum(s2.real + 2 * m + 1, 1e-3)
    err = nxt * np.abs(s2 + 2 * m + 1) / denom
    return total, err


def hurwitz_zeta(s, a=1, settings: EvalSettings = DEFAULT_SETTINGS) -> LValue:
    """Hurwitz zeta ``zeta(s, a)`` for rational ``a`` in ``(0, 1]``."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    fa = _as_unit_interval(a)
    n = settings.shift_for(abs(s))
    if settings.precision == "extended":
        with mpmath.workdps(settings.dps):
            am = mpmath.mpf(fa.numerator) / fa.denominator
            direct = mpmath.fsum((k + am) ** (-mpmath.mpc(s)) for k in range(n))
            tail, err = _em_tail_mp(mpmath.mpc(s), n + am, settings.bernoulli_terms, False)
            return LValue(complex(direct + tail), float(err) + 10.0 ** (3 - settings.dps))
    af = float(fa)
    s_arr = np.array([s])
    k = np.arange(n) + af
    terms = np.exp(-s * np.log(k))
    tail, err = _em_tail(s_arr, np.array([n + af]), settings.bernoulli_terms, False)
    value = terms.sum() + tail[0, 0]
    # exp(-s log k) carries a relative error of about |s log k| ulps
    rounding = 4 * EPS * ((np.abs(terms) * (1 + abs(s) * np.abs(np.log(k)))).sum() + abs(tail[0, 0]))
    return LValue(complex(value), float(err[0, 0] + rounding))


def _em_tail_mp(s, w, m: int, drop_pole: bool):
    """mpmath twin of :func:`_em_tail` for a single ``(s, w)``."""
    lw = mpmath.log(w)
    w_neg_s = mpmath.exp(-s * lw)
    if drop_pole:
        total = -lw if s == 1 else mpmath.expm1(-(s - 1) * lw) / (s - 1)
    else:
        total = w_neg_s * w / (s - 1)
    total += w_neg_s / 2
    ratios = _bernoulli_ratios(m)
    poch = s
    term_pow = w_neg_s / w
    for k in range(1, m + 1):
        r = ratios[k - 1]
        total += mpmath.mpf(r.numerator) / r.denominator * poch * term_pow
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        term_pow /= w * w
    r = ratios[m]
    nxt = abs(mpmath.mpf(r.numerator) / r.denominator * poch * term_pow)
    err = nxt * abs(s + 2 * m + 1) / max(s.real + 2 * m + 1, mpmath.mpf("1e-3"))
    return total, err


def _check_pole(chi: DirichletCharacter, s: np.ndarray) -> None:
    if chi.is_principal and np.any(s == 1):
        raise PoleError(f"L(s, {chi.label}) has a pole at s = 1")


def eval_L_many(chi: DirichletCharacter, s, settings: EvalSettings = DEFAULT_SETTINGS):
    """Vectorized ``L(s, chi)``; returns ``(values, error_estimates)`` arrays."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_pole(chi, s)
    if settings.precision == "extended":
        out = [_eval_L_mp(chi, complex(z), settings) for z in s]
        return (np.array([o.value for o in out]), np.array([o.err for o in out]))
    q = chi.modulus
    vals = chi.complex_values()
    res = np.array([a for a in range(1, q + 1) if vals[a % q] != 0])
    coef = vals[res % q]
    n_shift = settings.shift_for(float(np.abs(s).max()))
    ns = (np.arange(n_shift)[:, None] * q + res[None, :]).ravel()
    cs = np.tile(coef, n_shift)
    logn = np.log(ns.astype(float))
    values = np.empty(len(s), dtype=complex)
    errs = np.empty(len(s))
    # chunked to bound memory for long batches
    chunk = max(1, 2_000_000 // len(ns))
    w = n_shift + res / q
    for i in range(0, len(s), chunk):
        sc = s[i : i + chunk]
        powers = np.exp(-sc[:, None] * logn[None, :])
        direct = powers @ cs
        tail, err = _em_tail(sc, w, settings.bernoulli_terms, not chi.is_principal)
        scale = np.exp(-sc * math.log(q))
        values[i : i + chunk] = direct + scale * (tail @ coef)
        mag = np.abs(powers) @ (1 + logn) * (1 + np.abs(sc))
        errs[i : i + chunk] = (np.abs(scale) * (err.sum(axis=1) + 4 * EPS * np.abs(tail).sum(axis=1))
                               + 4 * EPS * mag)
    return values, errs


def _eval_L_mp(chi: DirichletCharacter, s: complex, settings: EvalSettings) -> LValue:
    q = chi.modulus
    n_shift = settings.shift_for(abs(s))
    with mpmath.workdps(settings.dps):
        sm = mpmath.mpc(s)
        direct = mpmath.mpc(0)
        tails = mpmath.mpc(0)
        err = mpmath.mpf(0)
        for a in range(1, q + 1):
            v = eval_char(chi, a)
            if v == 0:
                continue
            c = mpmath.expjpi(2 * mpmath.mpf(v.turn.numerator) / v.turn.denominator)
            direct += c * mpmath.fsum(mpmath.mpf(a + k * q) ** (-sm) for k in range(n_shift))
            tail, e = _em_tail_mp(sm, n_shift + mpmath.mpf(a) / q, settings.bernoulli_terms,
                                  not chi.is_principal)
            tails += c * tail
            err += e
        scale = mpmath.mpf(q) ** (-sm)
        value = direct + scale * tails
        return LValue(complex(value), float(abs(scale) * err) + 10.0 ** (3 - settings.dps))


def eval_L(chi: DirichletCharacter, s, settings: EvalSettings = DEFAULT_SETTINGS) -> LValue:
    """``L(s, chi)`` with an error estimate."""
    s = complex(s)
    if settings.precision == "extended":
        _check_pole(chi, np.array([s]))
        return _eval_L_mp(chi, s, settings)
    v, e = eval_L_many(chi, [s], settings)
    return LValue(complex(v[0]), float(e[0]))


def gauss_sum(chi: DirichletCharacter) -> complex:
    q = chi.modulus
    re, im = [], []
    for a in range(1, q + 1):
        v = eval_char(chi, a)
        if v == 0:
            continue
        z = complex(v) * cmath.exp(2j * math.pi * a / q)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def root_number(chi: DirichletCharacter) -> RootNumber:
    """``epsilon = tau(chi) / (i^kappa sqrt(q))`` for primitive ``chi``."""
    _require_primitive(chi)
    tau = gauss_sum(chi)
    eps = tau / ((1j ** chi.parity) * math.sqrt(chi.modulus))
    if abs(abs(eps) - 1) > 1e-10:
        raise AccuracyError(f"|epsilon| = {abs(eps)} for {chi.label}")
    return RootNumber(epsilon=eps, gauss_sum=tau, parity=chi.parity)


def _require_primitive(chi: DirichletCharacter) -> None:
    if not chi.primitive:
        raise ValueError(f"{chi.label} is not primitive (conductor {chi.conductor})")


def _gamma_factor_log(chi: DirichletCharacter, s: np.ndarray) -> np.ndarray:
    half = (s + chi.parity) / 2
    return half * math.log(chi.modulus / math.pi) + loggamma(half)


def completed_L(chi: DirichletCharacter, s, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    """``(q/pi)^((s+kappa)/2) Gamma((s+kappa)/2) L(s, chi)``."""
    _require_primitive(chi)
    s = complex(s)
    if settings.precision == "extended":
        with mpmath.workdps(settings.dps):
            half = (mpmath.mpc(s) + chi.parity) / 2
            fac = mpmath.exp(half * mpmath.log(mpmath.mpf(chi.modulus) / mpmath.pi)
                             + mpmath.loggamma(half))
            return complex(fac * eval_L(chi, s, settings).value)
    v, _ = eval_L_many(chi, [s], settings)
    return complex(np.exp(_gamma_factor_log(chi, np.array([s])))[0] * v[0])


def log_deriv_L(chi: DirichletCharacter, s, cutoff: int = 100_000) -> LogDerivative:
    """Truncated ``-sum Lambda(n) chi(n) n^-s`` on ``Re s > 1``.

    The tail bound uses ``psi(u) <= 1.03883 u``.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1:
        raise ValueError("the Dirichlet series for L'/L needs Re s > 1")
    lam = mangoldt_table(cutoff)
    n = np.flatnonzero(lam)
    coef = chi.complex_values()[n % chi.modulus]
    keep = coef != 0
    n, coef = n[keep], coef[keep]
    terms = -lam[n] * coef * np.exp(-s * np.log(n.astype(float)))
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    tail = 1.03883 * sigma * cutoff ** (1 - sigma) / (sigma - 1)
    return LogDerivative(value=value, tail_bound=tail, cutoff=cutoff)


@lru_cache(maxsize=None)
def _half_root_phase(chi: DirichletCharacter) -> float:
    return cmath.phase(root_number(chi).epsilon) / 2


def hardy_Z_many(chi: DirichletCharacter, t, settings: EvalSettings = DEFAULT_SETTINGS,
                 check: bool = True, return_err: bool = False):
    """Real rotation of ``L(1/2 + it, chi)`` with ``|Z(t)| = |L|``.

    With ``return_err`` the L error estimates come back as a second array.
    """
    _require_primitive(chi)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    vals, errs = eval_L_many(chi, s, settings)
    phase = (t / 2) * math.log(chi.modulus / math.pi) \
        + loggamma((s + chi.parity) / 2).imag - _half_root_phase(chi)
    rotated = np.exp(1j * phase) * vals
    if check:
        resid = np.abs(rotated.imag) / np.maximum(np.abs(vals), 1.0)
        worst = float(resid.max()) if len(resid) else 0.0
        if worst > Z_IMAG_TOL:
            raise AccuracyError(f"Z rotation residue {worst:.3g} for {chi.label}")
    if return_err:
        return rotated.real, errs
    return rotated.real


def hardy_Z(chi: DirichletCharacter, t: float, settings: EvalSettings = DEFAULT_SETTINGS) -> float:
    if settings.precision == "extended":
        _require_primitive(chi)
        with mpmath.workdps(settings.dps):
            s = mpmath.mpc(0.5, t)
            lv = mpmath.mpc(eval_L(chi, complex(s), settings).value)
            phase = (mpmath.mpf(t) / 2) * mpmath.log(mpmath.mpf(chi.modulus) / mpmath.pi) \
                + mpmath.im(mpmath.loggamma((s + chi.parity) / 2)) - _half_root_phase(chi)
            rot = mpmath.expj(phase) * lv
            if abs(rot.imag) > Z_IMAG_TOL * max(abs(lv), 1):
                raise AccuracyError(f"Z rotation residue {float(abs(rot.imag)):.3g}")
            return float(rot.real)
    return float(hardy_Z_many(chi, [t], settings)[0])
