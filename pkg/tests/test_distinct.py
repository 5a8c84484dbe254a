import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from lzeros.distinct import (DistinctnessParams, compare_zero_multisets, delta, diff_multisets,
                             region, verify_thm1)
from lzeros.zeros import Zero, ZeroList


def zl(gammas, certified=True, label="5.2"):
    zs = tuple(Zero(g) for g in sorted(set(gammas)))
    return ZeroList(label, 0, 100, zs, certified)


def optimal_matches(a, b, tol):
    if not a or not b:
        return 0
    cost = np.array([[0.0 if abs(x - y) <= tol else 1.0 for y in b] for x in a])
    r, c = linear_sum_assignment(cost)
    return int(sum(cost[i, j] == 0 for i, j in zip(r, c)))


def test_region_and_delta_examples():
    reg = region(5, 100)
    assert reg.width == pytest.approx(5**0.4 * math.log(100))
    assert reg.width == pytest.approx(8.767, abs=1e-3)
    assert reg.in_hypothesis
    d = delta(5, 100)
    assert d.value == pytest.approx(5.447, abs=1e-3) and d.below_T
    p2 = DistinctnessParams(c2=2.0)
    assert delta(5, 100, p2).value == pytest.approx(2 * d.value)
    assert not region(50, 2).in_hypothesis
    with pytest.raises(ValueError):
        region(2, 100)
    with pytest.raises(ValueError):
        delta(5, 1)


def test_params_validation():
    with pytest.raises(ValueError):
        DistinctnessParams(theta=0.3)
    assert DistinctnessParams(theta=0.3, cubefree=True).theta_prime == pytest.approx(0.275)
    assert DistinctnessParams().theta_prime == pytest.approx((0.4 + 1 / 3) / 2)
    with pytest.raises(ValueError):
        DistinctnessParams(c2=0)


gamma_lists = st.lists(st.integers(1, 400).map(lambda k: k / 4), max_size=25)


@given(gamma_lists, gamma_lists, st.floats(0, 1e-6))
def test_diff_is_maximal_matching(a, b, jitter):
    a = sorted(set(a))
    b = sorted({g + jitter for g in set(b)})
    d = diff_multisets(zl(a), zl(b), tol=1e-6)
    assert len(d.matched) == optimal_matches(a, b, 1e-6)
    assert len(d.matched) + len(d.only_in_first) == len(a)
    assert len(d.matched) + len(d.only_in_second) == len(b)
    assert (d.verdict == "distinct") == bool(d.only_in_first or d.only_in_second)


@given(gamma_lists, gamma_lists)
def test_diff_mirrors(a, b):
    d1 = diff_multisets(zl(a), zl(b))
    d2 = diff_multisets(zl(b), zl(a))
    assert d2 == d1.mirrored()


def test_diff_multiplicity():
    a = ZeroList("5.2", 0, 10, (Zero(3.0, multiplicity=2),), True)
    b = ZeroList("5.2", 0, 10, (Zero(3.0),), True)
    d = diff_multisets(a, b)
    assert d.verdict == "distinct" and len(d.only_in_first) == 1
    assert diff_multisets(a, a).verdict == "indistinguishable-at-tolerance"


def test_uncertified_withholds():
    assert diff_multisets(zl([1.0], False), zl([2.0])).verdict == "withheld"


def test_compare_examples(chi):
    d = compare_zero_multisets(chi("5.2"), chi("5.3"), 0, 12)
    assert d.verdict == "distinct"
    assert compare_zero_multisets(chi("5.2"), chi("5.2"), 0, 12).verdict == \
        "indistinguishable-at-tolerance"
    a = compare_zero_multisets(chi("7.2"), chi("7.4"), 0, 30)
    b = compare_zero_multisets(chi("7.4"), chi("7.2"), 0, 30)
    assert b == a.mirrored()
    with pytest.raises(ValueError):
        compare_zero_multisets(chi("5.2"), chi("7.3"), 0, 12)
    with pytest.raises(ValueError):
        compare_zero_multisets(chi("5.2"), chi("5.1"), 0, 12)


def test_verify_thm1_general(chi):
    rep = verify_thm1(chi("5.2"), chi("5.3"), 30)
    assert rep.status == "ok" and rep.certified and not rep.flags
    assert rep.verdict == "distinct"
    assert rep.witness["p0"] == 2 and rep.witness["character"] == "5.4"
    s = rep.sums
    assert s["separation"] > 0
    # both sums differ by at most separation + 2E
    assert s["abs_difference"] <= s["separation"] + s["combined_error_budget"]
    assert rep.window[1] - rep.window[0] == pytest.approx(delta(5, 30).value)


def test_verify_thm1_cubefree_path_mod_8(chi):
    rep = verify_thm1(chi("8.3"), chi("8.5"), 30, DistinctnessParams(theta=0.3, cubefree=True))
    assert rep.verdict == "distinct" and rep.status == "ok"
    assert any("not cubefree" in f for f in rep.flags)
    assert rep.witness["p0"] == 3 and rep.sums["separation"] > 0


def test_verify_thm1_cubefree_mod_7(chi):
    rep = verify_thm1(chi("7.2"), chi("7.3"), 30, DistinctnessParams(theta=0.3, cubefree=True))
    assert rep.verdict == "distinct" and not rep.flags


def test_verify_thm1_flags_and_halts(chi):
    rep = verify_thm1(chi("11.2"), chi("11.7"), 2.0)
    assert any("below c1" in f for f in rep.flags)
    halted = verify_thm1(chi("5.2"), chi("5.3"), 30, DistinctnessParams(c3=0.5))
    assert halted.status.startswith("halted") and halted.diff is None
    with pytest.raises(ValueError):
        verify_thm1(chi("3.2"), chi("3.2"), 30)


def test_report_dict_is_json_ready(chi):
    import json
    rep = verify_thm1(chi("5.2"), chi("5.3"), 30)
    text = json.dumps(rep.to_dict(), sort_keys=True, allow_nan=False)
    assert '"verdict": "distinct"' in text
