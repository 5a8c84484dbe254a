"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (with the measured quantity and
runtime); the lines are printed in the pytest terminal summary and also when
this file is run as a script.
"""

import json
import math
import time
from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from lzeros.characters import enumerate_characters, enumerate_primitive
from lzeros.charsums import scan_lemma3
from lzeros.distinct import DistinctnessParams, compare_zero_multisets, verify_thm1
from lzeros.landau import gonek_lemma_sides, thm2_grid
from lzeros.lfunc import completed_L, eval_L, gauss_sum, root_number
from lzeros.zeros import ZeroSettings, count_zeros_argument, find_zeros, sign_change_zeros

# pinned tolerances and limits
GAUSS_TOL = 1e-10
GAUSS_EXACT_TOL = 1e-12
L1_TOL = 1e-10
FE_TOL = 1e-8
ZERO_TOL = 1e-9
LANDAU_MAX = 5.0
GONEK_MAX = 5.0
DISTINCT_TOL = 1e-6

RESULTS: list[str] = []


def record(n, title, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}: {detail} "
                   f"[{elapsed:.1f}s, limit {limit:.0f}s]")
    return ok


# -- 1 ------------------------------------------------------------------------

def _conductor_oracle(chi):
    q = chi.modulus
    units = [a for a in range(1, q) if math.gcd(a, q) == 1]
    for d in sorted(d for d in range(1, q + 1) if q % d == 0):
        seen = {}
        if all(seen.setdefault(a % d, chi.numerators[a]) == chi.numerators[a] for a in units):
            return d
    return q


def test_criterion_1_characters_exact():
    t0 = time.perf_counter()
    bad = []
    for q in range(1, 51):
        chars = enumerate_characters(q)
        units = [a for a in range(q) if math.gcd(a, q) == 1]
        for c in chars:
            num, k = c.numerators, c.order
            for a in range(q):
                for b in range(q):
                    x, y, z = num[a], num[b], num[a * b % q]
                    want = None if x is None or y is None else (x + y) % k
                    if z != want:
                        bad.append((str(c.label), "mult", a, b))
            # a surjection onto the order-k roots of unity has equal fibres,
            # so the value sum is exactly 0 unless k = 1
            fib = Counter(num[a] for a in units)
            if not (len(fib) == k and len(set(fib.values())) == 1):
                bad.append((str(c.label), "orth"))
            if (num[(q - 1) % q] == 0) != (c.parity == 0):
                bad.append((str(c.label), "parity"))
            if c.conductor != _conductor_oracle(c):
                bad.append((str(c.label), "conductor"))
        for a in units:
            if a == 1 % q:
                continue
            vals = Counter(Fraction(c.numerators[a], c.order) for c in chars)
            if len(set(vals.values())) != 1 or Fraction(0) not in vals or len(vals) == 1:
                bad.append((q, a, "orth2"))
        if len(chars) != len(units) or len({c.numerators for c in chars}) != len(units):
            bad.append((q, "count"))
        if sum(c.primitive for c in chars) != sum(_conductor_oracle(c) == q for c in chars):
            bad.append((q, "primitive count"))
    dt = time.perf_counter() - t0
    ok = record(1, "character exactness q<=50", not bad, f"{len(bad)} violations", dt, 10)
    assert ok, bad[:10]


# -- 2 ------------------------------------------------------------------------

def test_criterion_2_gauss_sums(chi):
    t0 = time.perf_counter()
    worst = 0.0
    for q in range(3, 51):
        for c in enumerate_primitive(q):
            worst = max(worst, abs(abs(gauss_sum(c)) - math.sqrt(q)))
    e43 = abs(gauss_sum(chi("4.3")) - 2j)
    e32 = abs(gauss_sum(chi("3.2")) - 1j * math.sqrt(3))
    dt = time.perf_counter() - t0
    ok = worst < GAUSS_TOL and e43 < GAUSS_EXACT_TOL and e32 < GAUSS_EXACT_TOL
    ok = record(2, "Gauss sums", ok,
                f"max ||tau|-sqrt q| = {worst:.2e}, tau(4.3) err {e43:.1e}, tau(3.2) err {e32:.1e}",
                dt, 5)
    assert ok


# -- 3 ------------------------------------------------------------------------

def test_criterion_3_l_values_and_functional_equation(chi):
    t0 = time.perf_counter()
    e1 = abs(eval_L(chi("4.3"), 1).value - math.pi / 4)
    e2 = abs(eval_L(chi("3.2"), 1).value - math.pi / (3 * math.sqrt(3)))
    rng = np.random.default_rng(20240601)
    worst, n_chars = 0.0, 0
    for q in range(3, 21):
        for c in enumerate_primitive(q):
            n_chars += 1
            eps = root_number(c).epsilon
            for _ in range(100):
                s = complex(rng.uniform(-1, 2), rng.uniform(-30, 30))
                lhs = completed_L(c, s)
                rhs = eps * completed_L(c.conj(), 1 - s)
                worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    dt = time.perf_counter() - t0
    ok = e1 < L1_TOL and e2 < L1_TOL and worst < FE_TOL
    ok = record(3, "L-evaluation", ok,
                f"L(1) errors {e1:.1e}, {e2:.1e}; max relative FE residual {worst:.2e} "
                f"over {n_chars} characters x 100 points", dt, 60)
    assert ok


# -- 4 ------------------------------------------------------------------------

def test_criterion_4_zero_completeness():
    t0 = time.perf_counter()
    half = ZeroSettings(step_scale=0.5)
    problems, total, drift = [], 0, 0.0
    for q in (3, 4, 5, 7, 8, 11):
        for c in enumerate_primitive(q):
            n_arg = count_zeros_argument(c, 0, 100)
            n_sign = len(sign_change_zeros(c, 0, 100))
            full = find_zeros(c, 0, 100)
            again = find_zeros(c, 0, 100, half)
            total += n_arg
            if not (n_arg == n_sign == full.count == again.count and full.certified):
                problems.append((str(c.label), n_arg, n_sign, full.count, again.count))
                continue
            d = float(np.max(np.abs(full.gammas - again.gammas))) if full.count else 0.0
            drift = max(drift, d)
            if d > ZERO_TOL or any(z.accuracy > ZERO_TOL for z in full.zeros):
                problems.append((str(c.label), "drift", d))
    dt = time.perf_counter() - t0
    ok = record(4, "zero completeness on (0,100]", not problems,
                f"{total} zeros, sign changes = argument count for all; "
                f"max half-step drift {drift:.1e}", dt, 600)
    assert ok, problems


# -- 5 ------------------------------------------------------------------------

GRID_XS = [2, 3, 4, 5, 7, 8, 9, "5/2", 6]
GRID_T2S = [50.0, 100.0, 200.0]


def test_criterion_5_landau_gonek_grid(tmp_path):
    cache = tmp_path / "grid.jsonl"
    chars = [c for q in (1, 3, 4, 5) for c in enumerate_primitive(q)]
    thm2_grid(chars, GRID_XS, GRID_T2S, cache=cache)  # warm the cache
    t0 = time.perf_counter()
    rows = thm2_grid(chars, GRID_XS, GRID_T2S, cache=cache)
    dt = time.perf_counter() - t0
    worst = max(rows, key=lambda r: r.ratio)
    by_t2 = {t2: max(r.ratio for r in rows if r.t2 == t2) for t2 in GRID_T2S}
    ok = all(r.ratio <= LANDAU_MAX and r.certified for r in rows) and len(rows) == 18 * 9
    ok = record(5, "Landau-Gonek grid", ok,
                f"{len(rows)} cells, max ratio {worst.ratio:.3f} at ({worst.label}, x={worst.x}, "
                f"T2={worst.t2:g}); per T2 " +
                ", ".join(f"{t:g}: {v:.3f}" for t, v in by_t2.items()), dt, 900)
    assert ok


# -- 6 ------------------------------------------------------------------------

def test_criterion_6_gonek_bound():
    t0 = time.perf_counter()
    ratios = {(x, T): gonek_lemma_sides(x, T).ratio for x in range(2, 51) for T in (10, 100)}
    dt = time.perf_counter() - t0
    (xw, Tw), worst = max(ratios.items(), key=lambda kv: kv[1])
    ok = record(6, "Gonek bound ratio", worst <= GONEK_MAX,
                f"max lhs/rhs {worst:.3f} at x={xw}, T={Tw} (constant pinned at {GONEK_MAX:g})",
                dt, 120)
    assert ok


# -- 7 ------------------------------------------------------------------------

def test_criterion_7_witness_scan():
    t0 = time.perf_counter()
    scan = scan_lemma3(range(3, 51), theta=0.4, c3=2, c4=1)
    dt = time.perf_counter() - t0
    table: dict[int, Counter] = {}
    for w in scan.rows:
        table.setdefault(int(w.label.split(".")[0]), Counter())[w.p0] += 1
    RESULTS.append("  smallest p0 per modulus (p0: number of characters):")
    for q, cnt in table.items():
        RESULTS.append(f"    q={q:2d}  " + "  ".join(f"{p}:{n}" for p, n in sorted(cnt.items(),
                                                                          key=lambda kv: (kv[0] is None, kv[0] or 0))))
    ok = record(7, "witness prime scan", scan.all_found,
                f"{len(scan.rows)} nonprincipal characters, all witnessed; worst scaled "
                f"|chi(p0)-1|(log q)^2 = {scan.worst.scaled:.3f} ({scan.worst.label})", dt, 30)
    assert ok


# -- 8 ------------------------------------------------------------------------

def test_criterion_8_distinct_zeros():
    from lzeros.characters import CharacterLabel, character_from_label
    chi = lambda s: character_from_label(CharacterLabel.parse(s))  # noqa: E731
    t0 = time.perf_counter()
    failures, pairs = [], 0
    for q in range(3, 13):
        for a, b in combinations(enumerate_primitive(q), 2):
            pairs += 1
            d = compare_zero_multisets(a, b, 0, 30, tol=DISTINCT_TOL)
            if d.verdict != "distinct":
                failures.append((str(a.label), str(b.label), d.verdict))
    general = verify_thm1(chi("5.2"), chi("5.3"), 30)
    mod8 = verify_thm1(chi("8.3"), chi("8.5"), 30, DistinctnessParams(theta=0.3, cubefree=True))
    mod7 = verify_thm1(chi("7.2"), chi("7.3"), 30, DistinctnessParams(theta=0.3, cubefree=True))
    dt = time.perf_counter() - t0
    runs = {"(5.2,5.3)": general, "(8.3,8.5) cubefree path": mod8, "(7.2,7.3) cubefree": mod7}
    pipeline_ok = all(r.status == "ok" and r.certified and r.verdict == "distinct"
                      for r in runs.values())
    detail = (f"{pairs} pairs distinct over (0,30); verify_thm1 " +
              ", ".join(f"{k}: {r.verdict}, p0={r.witness['p0']}"
                        + (f", flagged '{r.flags[0]}'" if r.flags else "")
                        for k, r in runs.items()))
    ok = record(8, "distinct zero multisets", not failures and pipeline_ok, detail, dt, 1200)
    assert ok, failures


# -- 9 ------------------------------------------------------------------------

def test_criterion_9_determinism(tmp_path, capsys, monkeypatch):
    from lzeros.cli import main
    monkeypatch.delenv("LZEROS_CACHE", raising=False)
    cache = str(tmp_path / "det.jsonl")
    suites = [
        ["verify-thm2", "--grid", "--t2s", "50,100"],
        ["zeros", "--label", "11.2", "--t1", "0", "--t2", "60"],
        ["landau", "--label", "5.2", "--x", "5/2", "--t1", "1", "--t2", "80"],
        ["distinct", "--label1", "7.2", "--label2", "7.4", "--T", "25"],
        ["verify-thm1", "--label1", "5.2", "--label2", "5.3", "--T", "30"],
        ["burgess", "--q-range", "3:50", "--theta", "0.4"],
        ["chars", "--modulus", "24"],
        ["eval", "--label", "7.3", "--s", "0.5+20i"],
    ]
    t0 = time.perf_counter()
    mismatched = []
    for argv in suites:
        outs = []
        for _ in range(3):  # cold, warm, warm
            main(argv + (["--cache", cache] if argv[0] in
                         ("verify-thm2", "zeros", "landau", "distinct", "verify-thm1") else []))
            outs.append(capsys.readouterr().out)
        json.loads(outs[0])
        if not outs[0] == outs[1] == outs[2]:
            mismatched.append(argv[0])
    dt = time.perf_counter() - t0
    ok = record(9, "deterministic JSON", not mismatched,
                f"{len(suites)} suites byte-identical across cold and warm runs", dt, 600)
    assert ok, mismatched


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
