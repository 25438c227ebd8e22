"""Univariate refinement masks used throughout the package."""

from __future__ import annotations

import math

from .dyadic import Dyadic
from .mask import EXACT, FLOAT, Mask, mask_add, mask_const, mask_multiply, mask_scale

FAMILIES = ("haar", "spline1", "dd", "dd-dual", "daub2")


def haar() -> Mask:
    return Mask(1, {0: 1, 1: 1})


def linear_spline() -> Mask:
    half = Dyadic(1, 1)
    return Mask(1, {-1: half, 0: 1, 1: half})


def cos2_half() -> Mask:
    """``cos^2(omega/2) = (2 + e^{i omega} + e^{-i omega}) / 4``."""
    return linear_spline()


def sin2_half() -> Mask:
    """``sin^2(omega/2) = (2 - e^{i omega} - e^{-i omega}) / 4``."""
    half = Dyadic(-1, 1)
    return Mask(1, {-1: half, 0: 1, 1: half})


def _check_order(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"Deslauriers-Dubuc order parameter must be a positive int, got {k!r}")
    return k


def deslauriers_dubuc(k: int) -> Mask:
    """Interpolatory mask ``U_2k = cos^2k(w/2) * P_k(sin^2(w/2))``.

    ``P_k(x) = sum_{j<k} C(k-1+j, j) x**j``.  The result has accuracy
    number 2k and ``2k + 1`` nonzero taps.
    """
    k = _check_order(k)
    c, s = cos2_half(), sin2_half()
    poly = mask_const(0, 1)
    s_pow = mask_const(1, 1)
    for j in range(k):
        poly = mask_add(poly, mask_scale(math.comb(k - 1 + j, j), s_pow))
        s_pow = mask_multiply(s_pow, s)
    c_pow = mask_const(1, 1)
    for _ in range(k):
        c_pow = mask_multiply(c_pow, c)
    return mask_multiply(c_pow, poly)


def dd_dual(k: int) -> Mask:
    """``S_2k = U_2k (3 - 2 U_2k)``, biorthogonal to :func:`deslauriers_dubuc`."""
    u = deslauriers_dubuc(k)
    return mask_multiply(u, 3 - 2 * u)


def daubechies2() -> Mask:
    """Daubechies order-2 refinement mask in float mode.

    Expands ``cos^2(w/2) * ((1+sqrt3)/2 + (1-sqrt3)/2 e^{-iw})`` and shifts
    the result by one sample so the taps sit at indices 0..3.
    """
    r3 = math.sqrt(3.0)
    factor = Mask(1, {0: 1.0 + r3, 1: 1.0 - r3}, FLOAT)
    product = mask_multiply(cos2_half().to_float(), factor)
    return Mask(1, {(k[0] + 1,): v for k, v in product.filter.items()}, FLOAT)


def by_name(family: str, order: int | None = None, mode: str = EXACT) -> Mask:
    """Look up a catalog mask; ``order`` is the DD order ``2k`` (even)."""
    if family in ("dd", "dd-dual"):
        if order is None or order < 2 or order % 2:
            raise ValueError("dd families need an even --order 2k >= 2")
        mask = deslauriers_dubuc(order // 2) if family == "dd" else dd_dual(order // 2)
    elif family == "haar":
        mask = haar()
    elif family == "spline1":
        mask = linear_spline()
    elif family == "daub2":
        if mode == EXACT:
            raise ValueError("daub2 has irrational taps; use --mode float")
        mask = daubechies2()
    else:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return mask.to_float() if mode == FLOAT else mask
