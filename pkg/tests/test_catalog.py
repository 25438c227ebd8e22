import math

import pytest

from cosetsum.analysis import accuracy_number, is_biorthogonal, is_interpolatory, vanishing_moments
from cosetsum.catalog import (
    by_name,
    cos2_half,
    daubechies2,
    dd_dual,
    deslauriers_dubuc,
    haar,
    linear_spline,
    sin2_half,
)
from cosetsum.dyadic import Dyadic
from cosetsum.mask import FLOAT, Mask, evaluate, mask_const, nonzero_count, support_width

ORDERS = [1, 2, 3, 4]


def test_haar_and_spline():
    assert haar().filter == {(0,): 1, (1,): 1}
    assert linear_spline().filter == {(-1,): Dyadic(1, 1), (0,): 1, (1,): Dyadic(1, 1)}
    assert haar().filter_sum() == 2 == linear_spline().filter_sum()


@pytest.mark.parametrize("w", [0.0, 0.3, 1.7, -2.5])
def test_trig_building_blocks(w):
    assert abs(evaluate(cos2_half(), (w,)) - math.cos(w / 2) ** 2) < 1e-14
    assert abs(evaluate(sin2_half(), (w,)) - math.sin(w / 2) ** 2) < 1e-14


def test_dd_order_two_is_spline():
    assert deslauriers_dubuc(1) == linear_spline()


def test_dd_order_four_table():
    taps = [Dyadic(-1, 4), 0, Dyadic(9, 4), 1, Dyadic(9, 4), 0, Dyadic(-1, 4)]
    assert deslauriers_dubuc(2) == Mask.from_taps(taps, start=-3)


def test_p2_polynomial():
    # P_2(x) = 1 + 2x, so U_4 = cos^4 (1 + 2 sin^2)
    c, s = cos2_half(), sin2_half()
    assert deslauriers_dubuc(2) == c * c * (1 + 2 * s)


@pytest.mark.parametrize("w", [0.1, 1.0, 2.9])
@pytest.mark.parametrize("k", ORDERS)
def test_dd_matches_closed_form(k, w):
    x = math.sin(w / 2) ** 2
    p = sum(math.comb(k - 1 + j, j) * x**j for j in range(k))
    expect = math.cos(w / 2) ** (2 * k) * p
    assert abs(evaluate(deslauriers_dubuc(k), (w,)) - expect) < 1e-12


def test_dd_dual_table():
    taps = [-2, 0, 36, -32, -126, 288, 696, 288, -126, -32, 36, 0, -2]
    assert dd_dual(2) == Mask.from_taps([Dyadic(t, 9) for t in taps], start=-6)


@pytest.mark.parametrize("k", ORDERS)
def test_dd_family_properties(k):
    u, s = deslauriers_dubuc(k), dd_dual(k)
    assert is_interpolatory(u)
    assert accuracy_number(u).accuracy == 2 * k
    assert is_biorthogonal(s, u) and is_biorthogonal(u, s)
    assert s.filter_sum() == 2
    assert nonzero_count(u) == 2 * k + 1
    # 8k - 3 is the span of S_2k; two of the taps inside it vanish for k >= 2
    assert support_width(s) == 8 * k - 3
    assert nonzero_count(s) == 6 * k - 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_one_minus_dual_zero_order(k):
    assert vanishing_moments(mask_const(1, 1) - dd_dual(k)) == 2 * k


def test_daubechies_taps():
    d = daubechies2()
    r3 = math.sqrt(3)
    expect = [(1 + r3) / 4, (3 + r3) / 4, (3 - r3) / 4, (1 - r3) / 4]
    assert d.mode == FLOAT
    assert [k for (k,) in d.filter] == [0, 1, 2, 3]
    for i, v in enumerate(expect):
        assert abs(d[i] - v) < 1e-15
    assert abs(d.filter_sum() - 2) < 1e-12
    assert is_biorthogonal(d, d, tol=1e-12)
    assert not is_interpolatory(d)
    assert abs(d[2] - 0.317) < 1e-3


def test_by_name():
    assert by_name("dd", 4) == deslauriers_dubuc(2)
    assert by_name("dd-dual", 4) == dd_dual(2)
    assert by_name("spline1", mode=FLOAT) == linear_spline().to_float()
    with pytest.raises(ValueError):
        by_name("dd", 3)
    with pytest.raises(ValueError):
        by_name("daub2")
    with pytest.raises(ValueError):
        by_name("meyer")


def test_order_validation():
    with pytest.raises(ValueError):
        deslauriers_dubuc(0)
