"""JSON Lines store for zero lists.

One record per zero::

    {"q": 4, "conrey": 3, "t1": 0.1, "t2": 10.0, "beta": 0.5,
     "gamma": "6.020948904697133", "mult": 1, "acc": 3e-11,
     "certified": true, "ver": "0.1.0", "fp": "…", "count": 1}

``fp`` is the zero-search settings fingerprint and ``count`` the number of
records of the list, so a truncated write is detectable.  An empty list is
stored as one record with ``mult`` 0 and null ``beta``/``gamma``.  Appends are
a single write under an exclusive ``flock``.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
from collections import defaultdict
from pathlib import Path

from . import __version__
from .characters import DirichletCharacter
from .zeros import DEFAULT_ZERO_SETTINGS, Zero, ZeroList, ZeroSettings, find_zeros

log = logging.getLogger(__name__)

CACHE_ENV = "LZEROS_CACHE"
SEAM_CLEARANCE = 1e-6


def default_cache_path() -> Path | None:
    p = os.environ.get(CACHE_ENV)
    return Path(p) if p else None


def _records(zl: ZeroList, fp: str) -> list[dict]:
    q, n = (int(x) for x in zl.label.split("."))
    base = {"q": q, "conrey": n, "t1": zl.t1, "t2": zl.t2, "certified": zl.certified,
            "ver": __version__, "fp": fp, "count": max(len(zl.zeros), 1)}
    if not zl.zeros:
        return [dict(base, beta=None, gamma=None, mult=0, acc=0.0)]
    return [dict(base, beta=z.beta, gamma=repr(z.gamma), mult=z.multiplicity,
                 acc=z.accuracy, src=z.source) for z in zl.zeros]


class ZeroCache:
    def __init__(self, path):
        self.path = Path(path)

    def store(self, zl: ZeroList, fingerprint: str) -> None:
        lines = "".join(json.dumps(r, sort_keys=True) + "\n" for r in _records(zl, fingerprint))
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(lines)
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _scan(self, label: str, fingerprint: str) -> dict[tuple[float, float], ZeroList]:
        if not self.path.exists():
            return {}
        groups: dict[tuple, list[dict]] = defaultdict(list)
        stale = 0
        with open(self.path, encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                lines = fh.readlines()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        for lineno, line in enumerate(lines, 1):
            try:
                rec = json.loads(line)
                key = (f"{rec['q']}.{rec['conrey']}", float(rec["t1"]), float(rec["t2"]),
                       rec["fp"], rec["ver"])
            except (ValueError, KeyError, TypeError):
                log.warning("skipping corrupt cache line %d in %s", lineno, self.path)
                continue
            if key[0] != label or key[3] != fingerprint:
                continue
            if key[4] != __version__:
                stale += 1
                continue
            groups[key[1:3]].append(rec)
        if stale:
            log.info("ignoring %d cache records from other versions; recomputing", stale)
        out = {}
        for window, recs in groups.items():
            zl = _assemble(label, window, recs)
            if zl is not None:
                out[window] = zl
        return out

    def load(self, label: str, window: tuple[float, float],
             fingerprint: str) -> ZeroList | None:
        """Cached list for ``window``, merged from overlapping windows when
        needed; ``None`` when the cache cannot answer."""
        t1, t2 = window
        stored = self._scan(label, fingerprint)
        if (t1, t2) in stored:
            return stored[(t1, t2)]
        return _cover(label, t1, t2, list(stored.values()))


def _assemble(label: str, window, recs: list[dict]) -> ZeroList | None:
    # the last complete batch for a window wins
    try:
        expected = recs[-1]["count"]
        batch = recs[-expected:]
        if len(batch) != expected or any(r["count"] != expected for r in batch):
            raise ValueError("incomplete batch")
        certified = all(bool(r["certified"]) for r in batch)
        zeros = tuple(Zero(gamma=float(r["gamma"]), beta=float(r["beta"]),
                           multiplicity=int(r["mult"]), accuracy=float(r["acc"]),
                           source=r.get("src", "located-on-line"))
                      for r in batch if r["mult"] > 0)
        return ZeroList(label, window[0], window[1], zeros, certified)
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("skipping unusable cached list %s %s: %s", label, window, exc)
        return None


def _cover(label: str, t1: float, t2: float, lists: list[ZeroList]) -> ZeroList | None:
    """Merge stored windows whose union covers ``[t1, t2]``."""
    lists = sorted(lists, key=lambda z: (z.t1, -z.t2))
    chain: list[ZeroList] = []
    reach = t1
    for zl in lists:
        if zl.t1 > reach:
            break
        if zl.t1 <= reach and zl.t2 > reach:
            if chain and zl.t1 == reach:
                # touching windows: the seam must be clear of every ordinate
                near = [z for z in chain[-1].zeros + zl.zeros
                        if abs(z.gamma - reach) < SEAM_CLEARANCE]
                if near:
                    continue
            chain.append(zl)
            reach = zl.t2
            if reach >= t2:
                break
    if not chain or chain[0].t1 > t1 or reach < t2:
        return None
    merged: list[Zero] = []
    for z in sorted(z for zl in chain for z in zl.zeros):
        if merged and abs(z.gamma - merged[-1].gamma) <= max(z.accuracy + merged[-1].accuracy, 1e-9):
            continue
        merged.append(z)
    full = ZeroList(label, chain[0].t1, chain[-1].t2, tuple(merged),
                    all(zl.certified for zl in chain))
    return full.restrict(t1, t2)


def get_zeros(chi: DirichletCharacter, t1: float, t2: float,
              settings: ZeroSettings = DEFAULT_ZERO_SETTINGS,
              cache: ZeroCache | str | Path | None = None) -> ZeroList:
    """:func:`find_zeros` backed by an optional cache."""
    if cache is not None and not isinstance(cache, ZeroCache):
        cache = ZeroCache(cache)
    fp = settings.fingerprint()
    label = str(chi.label)
    if cache is not None:
        hit = cache.load(label, (t1, t2), fp)
        if hit is not None:
            return hit
    zl = find_zeros(chi, t1, t2, settings)
    if cache is not None:
        cache.store(zl, fp)
    return zl


def store_zeros(zl: ZeroList, cache: ZeroCache, settings: ZeroSettings = DEFAULT_ZERO_SETTINGS):
    cache.store(zl, settings.fingerprint())


def load_zeros(label, window, cache: ZeroCache,
               settings: ZeroSettings = DEFAULT_ZERO_SETTINGS) -> ZeroList | None:
    return cache.load(str(label), tuple(window), settings.fingerprint())
