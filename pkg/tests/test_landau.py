import cmath
import math
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lzeros.arith import prime_power_base
from lzeros.landau import (ExactX, error_budget, gonek_lemma_sides, landau_sum, main_term,
                           prime_power_gap, report_from_zeros, thm2_grid, verify_thm2,
                           von_mangoldt)
from lzeros.zeros import Zero, ZeroList, find_zeros


def brute_gap(x):
    lo, hi = math.floor(x) - 200, math.ceil(x) + 200
    return min(abs(x - n) for n in range(max(lo, 2), hi) if prime_power_base(n) and n != x)


def test_exact_x_rejects_floats():
    with pytest.raises(TypeError):
        ExactX(2.5)
    with pytest.raises(ValueError):
        ExactX(Fraction(3, 2))
    assert ExactX("2.5").value == Fraction(5, 2)
    assert ExactX(Decimal("2.5")).value == Fraction(5, 2)
    assert ExactX(7).is_integer and not ExactX("7/2").is_integer


def test_von_mangoldt_values():
    assert von_mangoldt(8) == pytest.approx(math.log(2))
    assert von_mangoldt(10) == 0
    assert von_mangoldt(7) == pytest.approx(math.log(7))
    assert von_mangoldt("9/2") == 0


def test_gap_examples():
    assert prime_power_gap(3) == 1
    assert prime_power_gap("13/2") == Fraction(1, 2)
    assert prime_power_gap(100) == 1
    assert prime_power_gap(2) == 1


@given(st.fractions(min_value=2, max_value=500, max_denominator=50))
def test_gap_brute_force(x):
    assert prime_power_gap(x) == brute_gap(x)


def test_main_term_examples(chi):
    c = chi("4.3")
    assert main_term(c, 3, 0, 2 * math.pi) == pytest.approx(math.log(3))
    assert main_term(c, 6, 1, 100) == 0
    assert main_term(c, 2, 1, 100) == 0
    assert main_term(c, "5/2", 1, 100) == 0
    assert main_term(chi("1.1"), 2, 1, 100) == pytest.approx(-99 / (2 * math.pi) * math.log(2))
    with pytest.raises(ValueError):
        main_term(c, 3, 5, 1)


def test_error_budget_formula():
    want = (3 * math.log(3) * math.log(math.log(6)) + 3 * math.log(3) * 1
            + 3 * math.log(math.log(6)) * math.log(800))
    assert error_budget(3, 4, 100) == pytest.approx(want, rel=1e-14)
    assert error_budget(3, 4, 100) == pytest.approx(16.91, abs=0.01)
    # min branch: T2/x small picks T2/x
    e = error_budget(97, 1, 2)
    want = 97 * math.log(97) * (math.log(math.log(194)) + 2 / 97) + 97 * math.log(math.log(194)) * math.log(4)
    assert e == pytest.approx(want, rel=1e-14)
    with pytest.raises(ValueError):
        error_budget(3, 4, 1)


def test_landau_sum_examples():
    assert landau_sum(ZeroList("4.3", 1, 2, (), True), 3).value == 0
    one = ZeroList("4.3", 9, 11, (Zero(10.0),), True)
    want = 2 * cmath.exp(1j * 10 * math.log(4))
    assert abs(landau_sum(one, 4).value - want) < 1e-14
    double = ZeroList("4.3", 9, 11, (Zero(10.0, multiplicity=2),), True)
    assert abs(landau_sum(double, 4).value - 2 * want) < 1e-14
    off = ZeroList("4.3", 9, 11, (Zero(10.0, beta=0.25),), False)
    s = landau_sum(off, 4)
    assert abs(abs(s.value) - 4**0.25) < 1e-14 and not s.certified


def test_conjugation_symmetry(chi):
    c = chi("5.2")
    a = landau_sum(find_zeros(c, 1, 60), 3).value
    b = landau_sum(find_zeros(c.conj(), -60, -1), 3).value
    assert abs(a - b.conjugate()) < 1e-8


def test_window_additivity(chi):
    c = chi("7.3")
    whole = landau_sum(find_zeros(c, 1, 60), "5/2").value
    parts = landau_sum(find_zeros(c, 1, 31), "5/2").value + landau_sum(find_zeros(c, 31, 60), "5/2").value
    assert abs(whole - parts) < 1e-9


def test_pipeline_examples(chi):
    c = chi("4.3")
    zl = find_zeros(c, 0, 50)
    rep = report_from_zeros(c, 3, zl, 0, 50, "fp")
    assert rep.ratio <= 5
    r = verify_thm2(c, 3, 1, 100)
    assert r.ratio <= 5 and r.certified and r.zeros_used == 50
    r = verify_thm2(c, "5/2", 1, 100)
    assert r.main_term == 0 and abs(r.zero_sum) <= 5 * r.error_budget
    r = verify_thm2(chi("1.1"), 2, 1, 100)
    assert r.main_term.real == pytest.approx(-99 / (2 * math.pi) * math.log(2))
    assert r.ratio <= 5


def test_verify_rejects_bad_input(chi):
    with pytest.raises(ValueError):
        verify_thm2(chi("6.5"), 3, 1, 10)
    with pytest.raises(ValueError):
        verify_thm2(chi("4.3"), 3, 10, 5)
    with pytest.raises(ValueError):
        verify_thm2(chi("4.3"), 3, 0.5, 5)


def test_grid_restrict_matches_direct(chi):
    rows = thm2_grid([chi("3.2")], [2, "5/2"], [30.0, 60.0])
    assert len(rows) == 4
    direct = verify_thm2(chi("3.2"), "5/2", 1, 30)
    (cell,) = [r for r in rows if r.t2 == 30.0 and r.x == "5/2"]
    assert abs(cell.zero_sum - direct.zero_sum) < 1e-9


def test_report_dict_fields(chi):
    d = verify_thm2(chi("4.3"), 3, 1, 20).to_dict()
    for key in ("ratio", "certified", "settings_fingerprint", "version", "x"):
        assert key in d
    assert d["x"] == "3"


def test_gonek_sides():
    g = gonek_lemma_sides(3, 10)
    assert math.isfinite(g.lhs) and g.lhs > g.partial > 0 and g.tail_bound > 0
    h = gonek_lemma_sides("5/2", 10)
    assert math.isfinite(h.lhs)
    with pytest.raises(ValueError):
        gonek_lemma_sides(3, 1)
    with pytest.raises(ValueError):
        gonek_lemma_sides(3, 10, cutoff=5)


def test_gonek_partial_against_loop():
    x, T, N = Fraction(5, 2), 10.0, 2000
    c = 1 + 1 / math.log(2.5)
    want = 0.0
    for n in range(2, N + 1):
        p = prime_power_base(n)
        if p:
            want += math.log(p) / n**c * min(T, 1 / abs(math.log(2.5 / n)))
    assert gonek_lemma_sides(x, T, cutoff=N).partial == pytest.approx(want, rel=1e-12)


def test_gonek_tail_bound_covers_truncation():
    a = gonek_lemma_sides(7, 10, cutoff=10_000)
    b = gonek_lemma_sides(7, 10, cutoff=10**6)
    assert a.partial <= b.partial <= a.partial + a.tail_bound
