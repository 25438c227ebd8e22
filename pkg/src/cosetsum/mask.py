"""Sparse Laurent trigonometric polynomials on Z^n ("masks").

A mask is stored through its associated filter ``h``: a finitely supported
map ``Z^n -> R`` with

    tau(omega) = 2**-n * sum_k h(k) * exp(-i k . omega).

All algebra below respects that normalization, so e.g. the constant mask 1
in dimension n has filter ``{0: 2**n}`` and the filter of a product is the
convolution of the filters times ``2**-n``.

Coefficients are either all :class:`~cosetsum.dyadic.Dyadic` ("exact"
mode) or all ``float`` ("float" mode).  Python ints are accepted in both.
"""

from __future__ import annotations

import cmath
import itertools
import json
import os
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from numbers import Integral, Rational
from types import MappingProxyType
from typing import Union

import numpy as np

from .dyadic import Dyadic, as_dyadic
from .errors import DimensionError, ScalarKindError, SupportLimitError

Scalar = Union[Dyadic, float]
Index = tuple[int, ...]

EXACT = "exact"
FLOAT = "float"

DEFAULT_MAX_SUPPORT = 10**6


def max_support() -> int:
    """Nonzero-coefficient cap for products; ``COSETSUM_MAX_SUPPORT`` overrides."""
    raw = os.environ.get("COSETSUM_MAX_SUPPORT")
    return int(raw) if raw else DEFAULT_MAX_SUPPORT


def coerce_scalar(value, mode: str) -> Scalar:
    """Convert ``value`` into the scalar kind used by ``mode``.

    Ints are neutral.  Floats are refused in exact mode and exact rationals
    are refused in float mode.
    """
    if mode == EXACT:
        return as_dyadic(value)
    if mode == FLOAT:
        if isinstance(value, (Dyadic, Fraction)) or (
            isinstance(value, Rational) and not isinstance(value, Integral)
        ):
            raise ScalarKindError("cannot use an exact value in a float-mode mask")
        return float(value)
    raise ValueError(f"unknown mode {mode!r}")


def _infer_mode(values: Iterable) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, bool) or isinstance(v, Integral):
            continue
        kinds.add(FLOAT if isinstance(v, float) else EXACT)
    if len(kinds) > 1:
        raise ScalarKindError("a filter cannot mix exact and float coefficients")
    return kinds.pop() if kinds else EXACT


def parity_points(dim: int) -> list[Index]:
    """All of ``{0,1}^dim`` in lexicographic order (0 first)."""
    return list(itertools.product((0, 1), repeat=dim))


def nonzero_parity_points(dim: int) -> list[Index]:
    """``{0,1}^dim`` without the origin, lexicographic."""
    return parity_points(dim)[1:]


class Mask:
    """Immutable finitely supported filter on ``Z^dim`` read as a mask.

    ``Mask(2, {(0, 0): 1, (1, 0): 1})`` builds an exact 2-D mask; passing
    floats gives a float-mode mask.  Zero coefficients are dropped.
    """

    __slots__ = ("dim", "mode", "_entries", "_hash")

    def __init__(self, dim: int, entries: Mapping | None = None, mode: str | None = None):
        if not isinstance(dim, Integral) or dim < 1:
            raise DimensionError(f"dimension must be a positive integer, got {dim!r}")
        entries = dict(entries or {})
        if mode is None:
            mode = _infer_mode(entries.values())
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        clean = {}
        for key, value in entries.items():
            idx = (int(key),) if isinstance(key, Integral) else tuple(int(c) for c in key)
            if len(idx) != dim:
                raise DimensionError(f"index {idx} does not have length {dim}")
            v = coerce_scalar(value, mode)
            if v:
                clean[idx] = v
        self.dim = int(dim)
        self.mode = mode
        self._entries = clean
        self._hash = None

    @classmethod
    def _trusted(cls, dim: int, mode: str, entries: dict) -> "Mask":
        # entries already validated, coerced and zero-free
        self = object.__new__(cls)
        self.dim = dim
        self.mode = mode
        self._entries = entries
        self._hash = None
        return self

    @classmethod
    def from_taps(cls, taps: Iterable, start: int = 0, mode: str | None = None) -> "Mask":
        """1-D mask from consecutive filter values beginning at index ``start``."""
        return cls(1, {(start + i,): t for i, t in enumerate(taps)}, mode)

    # -- read access ----------------------------------------------------------

    @property
    def filter(self) -> Mapping[Index, Scalar]:
        return MappingProxyType(self._entries)

    def __getitem__(self, index) -> Scalar:
        idx = (index,) if isinstance(index, Integral) else tuple(index)
        return self._entries.get(idx, self._zero())

    def _zero(self) -> Scalar:
        return Dyadic(0) if self.mode == EXACT else 0.0

    def items(self) -> list[tuple[Index, Scalar]]:
        """Entries sorted lexicographically by index."""
        return sorted(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Index]:
        return iter(sorted(self._entries))

    def is_zero(self) -> bool:
        return not self._entries

    def filter_sum(self) -> Scalar:
        return sum(self._entries.values(), self._zero())

    def bounding_box(self) -> list[tuple[int, int]]:
        if not self._entries:
            return [(0, 0)] * self.dim
        return [
            (min(k[a] for k in self._entries), max(k[a] for k in self._entries))
            for a in range(self.dim)
        ]

    def to_float(self) -> "Mask":
        if self.mode == FLOAT:
            return self
        return Mask._trusted(
            self.dim, FLOAT, {k: float(v) for k, v in self._entries.items()}
        )

    def to_exact(self) -> "Mask":
        """Exact copy of a float mask (every finite double is dyadic)."""
        if self.mode == EXACT:
            return self
        return Mask._trusted(
            self.dim, EXACT, {k: Dyadic.from_float(v) for k, v in self._entries.items()}
        )

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Mask):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.mode == other.mode
            and self._entries == other._entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.mode, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"Mask(dim={self.dim}, mode={self.mode!r}, {{{body}}})"

    # -- operator sugar (scalars act as constant masks) -----------------------

    def _lift_operand(self, other) -> "Mask":
        if isinstance(other, Mask):
            return other
        return mask_const(other, self.dim, self.mode)

    def __add__(self, other):
        return mask_add(self, self._lift_operand(other))

    __radd__ = __add__

    def __neg__(self):
        return mask_scale(-1, self)

    def __sub__(self, other):
        return mask_add(self, mask_scale(-1, self._lift_operand(other)))

    def __rsub__(self, other):
        return mask_add(self._lift_operand(other), mask_scale(-1, self))

    def __mul__(self, other):
        if isinstance(other, Mask):
            return mask_multiply(self, other)
        return mask_scale(other, self)

    def __rmul__(self, other):
        return mask_scale(other, self)


# ---------------------------------------------------------------------------
# affine algebra


def _check_pair(a: Mask, b: Mask) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.mode != b.mode:
        raise ScalarKindError(f"mode mismatch: {a.mode} vs {b.mode}")


def mask_const(c, dim: int, mode: str = EXACT) -> Mask:
    """The constant mask ``c``; its filter is ``2**dim * c`` at the origin."""
    value = coerce_scalar(c, mode)
    scaled = value.scale2(dim) if mode == EXACT else value * 2.0**dim
    return Mask(dim, {(0,) * dim: scaled}, mode)


def mask_add(a: Mask, b: Mask) -> Mask:
    _check_pair(a, b)
    out = dict(a._entries)
    for k, v in b._entries.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return Mask._trusted(a.dim, a.mode, out)


def mask_scale(c, a: Mask) -> Mask:
    value = coerce_scalar(c, a.mode)
    if not value:
        return Mask._trusted(a.dim, a.mode, {})
    return Mask._trusted(a.dim, a.mode, {k: value * v for k, v in a._entries.items()})


def mask_sum(masks: Iterable[Mask], dim: int, mode: str = EXACT) -> Mask:
    total = Mask(dim, {}, mode)
    for m in masks:
        total = mask_add(total, m)
    return total


_DENSE_MIN_PAIRS = 4096
_DENSE_MAX_VOLUME = 1 << 22


def _dense_convolve(ia, ib, box_a, box_b, dtype) -> dict:
    """Sparse-by-dense convolution: scatter the larger operand into an array
    and add one shifted, scaled copy per entry of the smaller one."""
    if len(ia) < len(ib):
        ia, ib, box_a, box_b = ib, ia, box_b, box_a
    lo_a = [lo for lo, _ in box_a]
    lo_b = [lo for lo, _ in box_b]
    shape_a = tuple(hi - lo + 1 for lo, hi in box_a)
    shape = tuple(sa + hi - lo for sa, (lo, hi) in zip(shape_a, box_b))
    src = np.zeros(shape_a, dtype=dtype)
    for k, v in ia:
        src[tuple(c - lo for c, lo in zip(k, lo_a))] = v
    out = np.zeros(shape, dtype=dtype)
    for k, v in ib:
        off = tuple(c - lo for c, lo in zip(k, lo_b))
        out[tuple(slice(o, o + s) for o, s in zip(off, shape_a))] += v * src
    origin = [x + y for x, y in zip(lo_a, lo_b)]
    return {
        tuple(int(i) + o for i, o in zip(idx, origin)): out[idx]
        for idx in zip(*np.nonzero(out))
    }


def mask_multiply(a: Mask, b: Mask) -> Mask:
    """Laurent-polynomial product of two masks.

    The filters convolve and pick up one factor ``2**-dim``.  Raises
    :class:`SupportLimitError` when the result could exceed the support cap.
    """
    _check_pair(a, b)
    n = a.dim
    if not a._entries or not b._entries:
        return Mask._trusted(n, a.mode, {})
    box_a, box_b = a.bounding_box(), b.bounding_box()
    volume = 1
    for (lo1, hi1), (lo2, hi2) in zip(box_a, box_b):
        volume *= hi1 + hi2 - lo1 - lo2 + 1
    bound = min(volume, len(a) * len(b))
    cap = max_support()
    if bound > cap:
        raise SupportLimitError(
            f"product may have up to {bound} nonzeros, above the cap of {cap}"
        )

    dense = len(a) * len(b) >= _DENSE_MIN_PAIRS and volume <= _DENSE_MAX_VOLUME
    if a.mode == FLOAT:
        norm = 2.0**-n
        if dense:
            pairs = _dense_convolve(
                list(a._entries.items()), list(b._entries.items()), box_a, box_b, np.float64
            )
            return Mask._trusted(n, FLOAT, {k: float(v) * norm for k, v in pairs.items()})
        acc: dict[Index, float] = {}
        for ka, va in a._entries.items():
            for kb, vb in b._entries.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                acc[k] = acc.get(k, 0.0) + va * vb
        return Mask._trusted(n, FLOAT, {k: v * norm for k, v in acc.items() if v})

    # exact: bring both operands to a common denominator and convolve integers
    ea = max(v.exponent for v in a._entries.values())
    eb = max(v.exponent for v in b._entries.values())
    ia = [(k, v.numerator << (ea - v.exponent)) for k, v in a._entries.items()]
    ib = [(k, v.numerator << (eb - v.exponent)) for k, v in b._entries.items()]
    e = ea + eb + n
    bound_i = max(abs(v) for _, v in ia) * max(abs(v) for _, v in ib) * min(len(ia), len(ib))
    if dense and bound_i < 2**62:
        acc_i = _dense_convolve(ia, ib, box_a, box_b, np.int64)
        return Mask._trusted(n, EXACT, {k: Dyadic(int(v), e) for k, v in acc_i.items()})
    acc_i: dict[Index, int] = {}
    for ka, va in ia:
        for kb, vb in ib:
            k = tuple(x + y for x, y in zip(ka, kb))
            acc_i[k] = acc_i.get(k, 0) + va * vb
    return Mask._trusted(n, EXACT, {k: Dyadic(v, e) for k, v in acc_i.items() if v})


def mask_power(a: Mask, k: int) -> Mask:
    result = mask_const(1, a.dim, a.mode)
    for _ in range(k):
        result = mask_multiply(result, a)
    return result


# ---------------------------------------------------------------------------
# index transformations


def mask_conjugate(a: Mask) -> Mask:
    """Complex conjugate of a real-filter mask: ``h(k) -> h(-k)``."""
    return Mask._trusted(
        a.dim, a.mode, {tuple(-c for c in k): v for k, v in a._entries.items()}
    )


def mask_shift(a: Mask, nu) -> Mask:
    """Multiply by ``exp(-i omega . nu)``, i.e. ``h(k) -> h(k - nu)``."""
    nu = tuple(nu)
    if len(nu) != a.dim:
        raise DimensionError(f"shift {nu} does not match dimension {a.dim}")
    return Mask._trusted(
        a.dim, a.mode, {tuple(x + y for x, y in zip(k, nu)): v for k, v in a._entries.items()}
    )


def _parity(k: Index, gamma: Index) -> int:
    return sum(x * g for x, g in zip(k, gamma)) & 1


def mask_modulate(a: Mask, gamma) -> Mask:
    """``tau(. + pi*gamma)``: flip the sign of taps with odd ``k . gamma``."""
    gamma = tuple(gamma)
    if len(gamma) != a.dim:
        raise DimensionError(f"parity point {gamma} does not match dimension {a.dim}")
    return Mask._trusted(
        a.dim,
        a.mode,
        {k: (-v if _parity(k, gamma) else v) for k, v in a._entries.items()},
    )


def lift_along_direction(r: Mask, nu, dim: int) -> Mask:
    """The n-D mask ``omega -> R(omega . nu)`` for a 1-D mask ``R``.

    Filter value ``H(K)`` lands at ``K*nu`` scaled by ``2**(dim-1)`` so the
    result is the same Laurent polynomial in the n-D normalization.
    """
    if r.dim != 1:
        raise DimensionError("lift_along_direction expects a 1-D mask")
    nu = tuple(int(c) for c in nu)
    if len(nu) != dim:
        raise DimensionError(f"direction {nu} does not match dimension {dim}")
    if not any(nu):
        raise ValueError("direction must be nonzero")
    factor = dim - 1
    out = {}
    for (K,), v in r._entries.items():
        scaled = v.scale2(factor) if r.mode == EXACT else v * 2.0**factor
        out[tuple(K * c for c in nu)] = scaled
    return Mask._trusted(dim, r.mode, out)


def embed(a: Mask, dim: int, axes) -> Mask:
    """Read ``a`` as a mask in the variables ``omega[axes]`` of ``Z^dim``."""
    axes = tuple(axes)
    if len(axes) != a.dim or len(set(axes)) != len(axes):
        raise DimensionError("axes must list distinct target coordinates, one per input axis")
    if any(not 0 <= ax < dim for ax in axes):
        raise DimensionError("axis out of range")
    factor = dim - a.dim
    out = {}
    for k, v in a._entries.items():
        idx = [0] * dim
        for c, ax in zip(k, axes):
            idx[ax] = c
        out[tuple(idx)] = v.scale2(factor) if a.mode == EXACT else v * 2.0**factor
    return Mask._trusted(dim, a.mode, out)


# ---------------------------------------------------------------------------
# point evaluations


def _normalize(value: Scalar, dim: int, mode: str) -> Scalar:
    return value.scale2(-dim) if mode == EXACT else value * 2.0**-dim


def eval_at_parity_point(a: Mask, gamma) -> Scalar:
    """Exact value of the mask at ``pi*gamma``."""
    return derivative_moment(a, (0,) * a.dim, gamma)


def derivative_moment(a: Mask, mu, gamma) -> Scalar:
    """``2**-n * sum_k h(k) k**mu (-1)**(k . gamma)``.

    The mixed partial ``D**mu`` of the mask at ``pi*gamma`` equals
    ``(-i)**|mu|`` times this real number, so it vanishes exactly when
    the derivative does.
    """
    mu, gamma = tuple(mu), tuple(gamma)
    if len(mu) != a.dim or len(gamma) != a.dim:
        raise DimensionError("multi-order and parity point must match the mask dimension")
    if any(m < 0 for m in mu):
        raise ValueError("derivative orders must be non-negative")
    if a.mode == EXACT:
        total = 0
        common = max((v.exponent for v in a._entries.values()), default=0)
        for k, v in a._entries.items():
            w = v.numerator << (common - v.exponent)
            for c, m in zip(k, mu):
                if m:
                    w *= c**m
            total += -w if _parity(k, gamma) else w
        return Dyadic(total, common + a.dim)
    acc = 0.0
    for k, v in a._entries.items():
        w = v
        for c, m in zip(k, mu):
            if m:
                w *= float(c) ** m
        acc += -w if _parity(k, gamma) else w
    return acc * 2.0**-a.dim


def evaluate(a: Mask, omega) -> complex:
    """Float evaluation at an arbitrary frequency (diagnostics only)."""
    omega = tuple(float(w) for w in omega)
    if len(omega) != a.dim:
        raise DimensionError("frequency vector does not match the mask dimension")
    acc = 0j
    for k, v in a._entries.items():
        acc += float(v) * cmath.exp(-1j * sum(c * w for c, w in zip(k, omega)))
    return acc * 2.0**-a.dim


def parity_parts(r: Mask) -> tuple[Mask, Mask]:
    """Split a 1-D mask into its even part ``(R + R(.+pi))/2`` and odd part."""
    if r.dim != 1:
        raise DimensionError("parity_parts is defined for 1-D masks only")
    even = {k: v for k, v in r._entries.items() if k[0] % 2 == 0}
    odd = {k: v for k, v in r._entries.items() if k[0] % 2}
    return Mask._trusted(1, r.mode, even), Mask._trusted(1, r.mode, odd)


def is_refinement(a: Mask) -> bool:
    """``tau(0) == 1``; float masks use a 1e-10 tolerance."""
    value = eval_at_parity_point(a, (0,) * a.dim)
    if a.mode == EXACT:
        return value == 1
    return abs(value - 1.0) <= 1e-10


def is_symmetric(a: Mask) -> bool:
    return mask_conjugate(a) == a


def nonzero_count(a: Mask) -> int:
    return len(a)


def support_width(r: Mask) -> int:
    """Number of integer positions spanned by a 1-D filter's support."""
    if r.dim != 1:
        raise DimensionError("support_width is defined for 1-D masks only")
    if r.is_zero():
        return 0
    (lo, hi), = r.bounding_box()
    return hi - lo + 1


# ---------------------------------------------------------------------------
# filter JSON


def mask_to_json(a: Mask) -> dict:
    entries = []
    for k, v in a.items():
        if a.mode == EXACT:
            entries.append({"index": list(k), "num": str(v.numerator), "exp2": v.exponent})
        else:
            entries.append({"index": list(k), "value": v})
    return {"dim": a.dim, "mode": a.mode, "entries": entries}


def mask_from_json(data: Mapping) -> Mask:
    try:
        dim = int(data["dim"])
        mode = data.get("mode", EXACT)
        raw = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed filter JSON: {exc}") from exc
    entries = {}
    for item in raw:
        idx = tuple(int(c) for c in item["index"])
        if idx in entries:
            raise ValueError(f"duplicate index {idx} in filter JSON")
        if mode == EXACT:
            entries[idx] = Dyadic(int(item["num"]), int(item["exp2"]))
        elif mode == FLOAT:
            entries[idx] = float(item["value"])
        else:
            raise ValueError(f"unknown mode {mode!r} in filter JSON")
    return Mask(dim, entries, mode)


def dumps(a: Mask, **kwargs) -> str:
    return json.dumps(mask_to_json(a), **kwargs)


def loads(text: str) -> Mask:
    return mask_from_json(json.loads(text))
