"""Locating and counting nontrivial zeros of L(s, chi) in height windows.

Zeros on the critical line are found as sign changes of the rotated
function Z(t) and refined by bisection.  Completeness is certified by
comparing with the winding number of L(s, chi) around the rectangle
``[-1/2, 3/2] x [T1, T2]``; the Gamma factor has no zeros and its poles sit on
the real axis, so for a window that avoids ``t = 0`` the winding number of L
itself counts exactly the nontrivial zeros in the window.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .characters import DirichletCharacter
from .errors import AccuracyError
from .lfunc import EvalSettings, eval_L_many, hardy_Z_many

__all__ = [
    "Zero",
    "ZeroList",
    "ZeroSettings",
    "winding_number",
    "locate_zeros_2d",
    "count_zeros_argument",
    "sign_change_zeros",
    "find_zeros",
]

log = logging.getLogger(__name__)

SIGMA_LEFT = -0.5
SIGMA_RIGHT = 1.5
# lower edge used in place of t = 0, clear of the real-axis trivial zero
T_FLOOR = 1e-4
ON_LINE = "located-on-line"
OFF_LINE = "located-off-line"


@dataclass(frozen=True, order=True)
class Zero:
    gamma: float
    beta: float = 0.5
    multiplicity: int = 1
    accuracy: float = 0.0
    source: str = ON_LINE

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError(f"nontrivial zero needs 0 < beta < 1, got {self.beta}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def rho(self) -> complex:
        return complex(self.beta, self.gamma)


@dataclass(frozen=True)
class ZeroList:
    label: str
    t1: float
    t2: float
    zeros: tuple[Zero, ...] = ()
    certified: bool = False

    def __post_init__(self):
        gammas = [z.gamma for z in self.zeros]
        if any(b <= a for a, b in zip(gammas, gammas[1:])):
            raise ValueError("zero ordinates must be strictly increasing")

    @property
    def count(self) -> int:
        """Number of zeros counted with multiplicity."""
        return sum(z.multiplicity for z in self.zeros)

    @property
    def gammas(self) -> np.ndarray:
        return np.array([z.gamma for z in self.zeros])

    def restrict(self, t1: float, t2: float) -> ZeroList:
        """Zeros with ``t1 < gamma < t2``; certification survives only if no
        zero sits within its accuracy of a new edge."""
        if t1 < self.t1 or t2 > self.t2:
            raise ValueError("restriction must lie inside the stored window")
        keep = tuple(z for z in self.zeros if t1 < z.gamma < t2)
        edgy = any(abs(z.gamma - t) <= max(z.accuracy, 1e-12)
                   for z in self.zeros for t in (t1, t2))
        return ZeroList(self.label, t1, t2, keep, self.certified and not edgy)


@dataclass(frozen=True)
class ZeroSettings:
    """Zero-search knobs; ``step_scale`` multiplies the default scan step."""

    eval: EvalSettings = field(default_factory=EvalSettings)
    step_scale: float = 1.0
    accuracy: float = 1e-9
    max_depth: int = 20
    nudge: float = 1e-6

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


DEFAULT_ZERO_SETTINGS = ZeroSettings()


# -- argument principle -------------------------------------------------------

def winding_number(f, vertices, initial_step: float = 0.25, rel_jump: float = 0.5,
                   max_refine: int = 48, max_points: int = 400_000) -> int:
    """Winding number of ``f`` around the closed polygon ``vertices``.

    ``f`` maps a complex array to a complex array.  Each edge is sampled and
    segments are bisected until consecutive values satisfy
    ``|f1 - f0| <= rel_jump * min(|f0|, |f1|)``, which keeps the image chord
    away from the origin and the phase increment below ~0.52 rad.
    """
    verts = [complex(v) for v in vertices]
    total = 0.0
    for z0, z1 in zip(verts, verts[1:] + verts[:1]):
        length = abs(z1 - z0)
        if length == 0:
            continue
        n = max(4, math.ceil(length / initial_step))
        pts = z0 + (z1 - z0) * np.linspace(0.0, 1.0, n + 1)
        vals = np.asarray(f(pts), dtype=complex)
        for _ in range(max_refine):
            mag = np.abs(vals)
            if np.any(mag == 0) or not np.all(np.isfinite(vals)):
                raise AccuracyError("function vanishes or overflows on the contour")
            bad = np.abs(np.diff(vals)) > rel_jump * np.minimum(mag[1:], mag[:-1])
            if not bad.any():
                break
            idx = np.flatnonzero(bad)
            mids = 0.5 * (pts[idx] + pts[idx + 1])
            pts = np.insert(pts, idx + 1, mids)
            vals = np.insert(vals, idx + 1, np.asarray(f(mids), dtype=complex))
            if len(pts) > max_points:
                raise AccuracyError("contour refinement exceeded its point budget")
        else:
            raise AccuracyError("contour refinement did not converge (zero on contour?)")
        total += float(np.angle(vals[1:] / vals[:-1]).sum())
    turns = total / (2 * math.pi)
    k = round(turns)
    if abs(turns - k) > 0.1:
        raise AccuracyError(f"winding increment {turns:.4f} is not near an integer")
    return int(k)


def _rectangle(s0: float, s1: float, t0: float, t1: float) -> list[complex]:
    return [complex(s0, t0), complex(s1, t0), complex(s1, t1), complex(s0, t1)]


_SPLITS = ((0.4142135623730951, 0.4812118250596034),
           (0.5772156649015329, 0.5358983848622454),
           (0.3819660112501051, 0.4426950408889634))


def locate_zeros_2d(f, sigma0: float, sigma1: float, t0: float, t1: float,
                    max_depth: int = 20, tol: float = 1e-9):
    """Isolate zeros of ``f`` in a rectangle by recursive winding-number bisection.

    Returns ``(boxes, resolved)`` where each box is
    ``(sigma0, sigma1, t0, t1, count)`` and ``resolved`` is true when every box
    shrank below ``tol``.
    """
    def count(box):
        a, b, c, d = box
        return winding_number(f, _rectangle(a, b, c, d),
                              initial_step=max(min(b - a, d - c) / 4, 1e-12))

    def split(box, fs, ft):
        a, b, c, d = box
        ms, mt = a + (b - a) * fs, c + (d - c) * ft
        if b - a > 2 * (d - c):
            return [(a, ms, c, d), (ms, b, c, d)]
        if d - c > 2 * (b - a):
            return [(a, b, c, mt), (a, b, mt, d)]
        return [(a, ms, c, mt), (ms, b, c, mt), (a, ms, mt, d), (ms, b, mt, d)]

    out = []
    resolved = True
    stack = [((sigma0, sigma1, t0, t1), count((sigma0, sigma1, t0, t1)), 0)]
    while stack:
        box, n, depth = stack.pop()
        if n == 0:
            continue
        a, b, c, d = box
        if max(b - a, d - c) <= tol or depth >= max_depth:
            resolved &= max(b - a, d - c) <= tol
            out.append((a, b, c, d, n))
            continue
        # irrational split fractions keep cuts off lines such as sigma = 1/2;
        # a zero landing on a cut anyway shows up as a count mismatch
        for fs, ft in _SPLITS:
            kids = split(box, fs, ft)
            try:
                counts = [count(k) for k in kids]
            except AccuracyError:
                continue
            if sum(counts) == n:
                stack.extend((k, m, depth + 1) for k, m in zip(kids, counts))
                break
        else:
            resolved = False
            out.append((a, b, c, d, n))
    out.sort(key=lambda bx: (bx[2], bx[0]))
    return out, resolved


def _count_raw(chi: DirichletCharacter, t0: float, t1: float, settings: ZeroSettings) -> int:
    if t1 <= t0:
        return 0
    if t0 < 0 < t1:
        raise ValueError("window must not straddle t = 0")

    def f(s):
        return eval_L_many(chi, s, settings.eval)[0]

    return winding_number(f, _rectangle(SIGMA_LEFT, SIGMA_RIGHT, t0, t1))


# -- sign-change scan ------------------------------------------------------------

def default_step(q: int, t1: float, t2: float, scale: float = 1.0) -> float:
    height = max(abs(t1), abs(t2))
    return scale / (2 * math.log(q * (height + 3)))


def _z_with_err(chi, t, settings: EvalSettings):
    return hardy_Z_many(chi, t, settings, return_err=True)


def _scan(chi: DirichletCharacter, lo: float, hi: float, h: float,
          settings: ZeroSettings) -> list[Zero]:
    """Critical-line zeros in ``[lo, hi]`` from sign changes of Z."""
    if hi <= lo:
        return []
    n = max(2, math.ceil((hi - lo) / h))
    grid = np.linspace(lo, hi, n + 1)
    z = hardy_Z_many(chi, grid, settings.eval)
    exact = grid[z == 0.0]
    sgn = np.sign(z)
    idx = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
    a, b = grid[idx].copy(), grid[idx + 1].copy()
    za = z[idx].copy()
    slope = np.abs(z[idx + 1] - z[idx]) / (b - a)
    target = settings.accuracy / 10
    err = np.zeros(len(a))
    while len(a) and np.max(b - a) > target:
        mid = 0.5 * (a + b)
        zm, em = _z_with_err(chi, mid, settings.eval)
        err = em
        left = np.sign(zm) == np.sign(za)
        a = np.where(left, mid, a)
        za = np.where(left, zm, za)
        b = np.where(left, b, mid)
        done = zm == 0
        a = np.where(done, mid, a)
        b = np.where(done, mid, b)
    gammas = 0.5 * (a + b)
    acc = 0.5 * (b - a) + err / np.maximum(slope, 1e-300)
    zeros = [Zero(gamma=float(g), accuracy=float(e)) for g, e in zip(gammas, acc)]
    zeros += [Zero(gamma=float(g), accuracy=0.0) for g in exact]
    zeros.sort()
    return zeros


# -- public operations ---------------------------------------------------------

def _effective_window(t1: float, t2: float) -> tuple[float, float]:
    if t2 < t1:
        raise ValueError(f"empty window ({t1}, {t2})")
    if t1 < 0 < t2:
        raise ValueError("window must not straddle t = 0")
    if t1 == 0:
        t1 = T_FLOOR
    if t2 == 0:
        t2 = -T_FLOOR
    return t1, t2


def _on_edge(z: Zero, edge: float, tol: float) -> bool:
    return abs(z.gamma - edge) <= max(z.accuracy, tol)


def _nudged_edge(edge: float, zeros: list[Zero], nudge: float, lower: bool,
                 tol: float) -> float:
    """Move a contour edge ``nudge`` away from a zero ordinate it collides with.

    A zero within its accuracy of the edge sits on the edge and is pushed out
    of the open window; one merely closer than ``nudge`` stays on its side.
    """
    near = [z for z in zeros if abs(z.gamma - edge) < nudge]
    if not near:
        return edge
    z = near[0]
    if _on_edge(z, edge, tol):
        inside = False
    else:
        inside = (z.gamma > edge) if lower else (z.gamma < edge)
    moved = edge - nudge if inside == lower else edge + nudge
    if any(abs(w.gamma - moved) < nudge / 2 for w in zeros):
        raise ValueError(f"cannot nudge window edge {edge} clear of zero ordinates")
    return moved


def _inside(z: Zero, a: float, b: float, tol: float) -> bool:
    return a < z.gamma < b and not (_on_edge(z, a, tol) or _on_edge(z, b, tol))


def count_zeros_argument(chi: DirichletCharacter, t1: float, t2: float,
                         settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> int:
    """Zeros (with multiplicity) of L(s, chi) with ``t1 < gamma < t2``."""
    if t1 == t2:
        return 0
    a, b = _effective_window(t1, t2)
    delta = 1e-3
    near = _scan(chi, a - delta, a + delta, delta / 16, settings) \
        + _scan(chi, b - delta, b + delta, delta / 16, settings)
    if a == T_FLOOR:
        near = [z for z in near if z.gamma > 0]
    lo = _nudged_edge(a, near, settings.nudge, lower=True, tol=settings.accuracy)
    hi = _nudged_edge(b, near, settings.nudge, lower=False, tol=settings.accuracy)
    return _count_raw(chi, lo, hi, settings)


def sign_change_zeros(chi: DirichletCharacter, t1: float, t2: float,
                      settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> list[Zero]:
    """Bisected sign changes of Z with ``t1 < gamma < t2`` at the default step,
    with no completeness check."""
    a, b = _effective_window(t1, t2)
    h = default_step(chi.modulus, a, b, settings.step_scale)
    return [z for z in _scan(chi, a, b, h, settings) if _inside(z, a, b, settings.accuracy)]


def find_zeros(chi: DirichletCharacter, t1: float, t2: float,
               settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> ZeroList:
    """All zeros with ``t1 < gamma < t2`` plus a completeness certificate."""
    if not chi.primitive:
        raise ValueError(f"{chi.label} is not primitive")
    label = str(chi.label)
    if t1 == t2:
        return ZeroList(label, t1, t2, (), True)
    a, b = _effective_window(t1, t2)
    h = default_step(chi.modulus, a, b, settings.step_scale)
    margin = min(h, 0.05)
    lo = a - margin if a != T_FLOOR else a
    hi = b + margin if b != -T_FLOOR else b
    found = _scan(chi, lo, hi, h, settings)
    tol = settings.accuracy
    lo_edge = _nudged_edge(a, found, settings.nudge, lower=True, tol=tol)
    hi_edge = _nudged_edge(b, found, settings.nudge, lower=False, tol=tol)
    inside = [z for z in found if _inside(z, a, b, tol)]
    zeros, ok = _resolve(chi, lo_edge, hi_edge, inside, h, settings, 0)
    zeros = [z for z in zeros if _inside(z, a, b, tol)]
    ok = ok and all(z.accuracy <= settings.accuracy for z in zeros)
    if not ok:
        log.warning("zero list for %s on (%g, %g) is not certified complete", label, t1, t2)
    return ZeroList(label, t1, t2, tuple(_merge_ties(zeros)), ok)


def _merge_ties(zeros: list[Zero]) -> list[Zero]:
    out: list[Zero] = []
    for z in sorted(zeros):
        if out and z.gamma <= out[-1].gamma:
            prev = out.pop()
            z = replace(prev, multiplicity=prev.multiplicity + z.multiplicity,
                        accuracy=max(prev.accuracy, z.accuracy))
        out.append(z)
    return out


def _split_point(a: float, b: float, zeros: list[Zero]) -> float:
    mid = 0.5 * (a + b)
    gs = sorted([a] + [z.gamma for z in zeros] + [b])
    # centre of the gap containing the midpoint keeps the cut off any ordinate
    for lo, hi in zip(gs, gs[1:]):
        if lo <= mid <= hi:
            return 0.5 * (lo + hi) if hi - lo < (b - a) / 4 else mid
    return mid


def _resolve(chi, a: float, b: float, zeros: list[Zero], h: float,
             settings: ZeroSettings, depth: int) -> tuple[list[Zero], bool]:
    n = _count_raw(chi, a, b, settings)
    have = sum(z.multiplicity for z in zeros)
    if n == have:
        return zeros, True
    log.info("%s: %d sign changes vs %d by argument on (%g, %g)", chi.label, have, n, a, b)
    if depth >= settings.max_depth:
        return zeros, False
    if b - a > 16 * h:
        m = _split_point(a, b, zeros)
        left, ok1 = _resolve(chi, a, m, [z for z in zeros if z.gamma < m], h, settings, depth + 1)
        right, ok2 = _resolve(chi, m, b, [z for z in zeros if z.gamma > m], h, settings, depth + 1)
        return left + right, ok1 and ok2
    finer = [z for z in _scan(chi, a, b, h / 16, settings) if a < z.gamma < b]
    if sum(z.multiplicity for z in finer) == n:
        return finer, True
    return _search_2d(chi, a, b, finer, settings)


def _search_2d(chi, a: float, b: float, online: list[Zero],
               settings: ZeroSettings) -> tuple[list[Zero], bool]:
    """Winding-number bisection for zeros the sign-change scan cannot see."""
    def f(s):
        return eval_L_many(chi, s, settings.eval)[0]

    boxes, resolved = locate_zeros_2d(f, SIGMA_LEFT, SIGMA_RIGHT, a, b,
                                      max_depth=settings.max_depth, tol=settings.accuracy)
    zeros: list[Zero] = []
    for s0, s1, t0, t1, m in boxes:
        hits = [z for z in online if t0 <= z.gamma <= t1 and s0 <= 0.5 <= s1]
        if m == 1 and len(hits) == 1:
            zeros.append(hits[0])
            continue
        if s0 <= 0.5 <= s1:
            beta, source = 0.5, ON_LINE
        else:
            beta, source = min(max(0.5 * (s0 + s1), 1e-12), 1 - 1e-12), OFF_LINE
        zeros.append(Zero(gamma=0.5 * (t0 + t1), beta=beta, multiplicity=m,
                          accuracy=0.5 * math.hypot(s1 - s0, t1 - t0), source=source))
    return _merge_ties(zeros), resolved
