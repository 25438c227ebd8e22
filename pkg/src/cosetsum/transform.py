"""Fast periodic pyramid transforms: the coset sum algorithm and the separable
tensor product reference, with multiplicative-operation counting.

Grids are numpy arrays.  ``float64`` arrays run in float mode; ``object``
arrays holding :class:`~cosetsum.dyadic.Dyadic` values run in exact mode.

Counting convention: multiplications by ``+-1`` are free, every other
constant factor costs one op per entry, ``1/2`` and ``2`` cost one op and
the ``2**-n`` normalization costs ``n`` ops (``n`` halvings).  Zero taps
are skipped.  Counts are tallied per loop as ``entries * taps``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .analysis import is_interpolatory
from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError
from .mask import (
    Index,
    Mask,
    is_symmetric,
    mask_to_json,
    nonzero_parity_points,
    parity_points,
)
from .system import quadrature_mirror

COSET = "coset"
TENSOR = "tensor"
METHODS = (COSET, TENSOR)


@dataclass
class OpCounter:
    """Running tally of multiplicative operations and input samples."""

    ops: int = 0
    samples: int = 0

    def add(self, ops: int) -> None:
        if ops < 0:
            raise ValueError("op counts are non-negative")
        self.ops += int(ops)

    def add_samples(self, count: int) -> None:
        self.samples += int(count)

    def reset(self) -> None:
        self.ops = 0
        self.samples = 0


def measured_complexity(counter: OpCounter) -> Fraction:
    """Multiplicative ops per input sample."""
    if counter.samples == 0:
        raise ValueError("the counter has not seen any input samples")
    return Fraction(counter.ops, counter.samples)


@dataclass
class Pyramid:
    """Multi-level decomposition.

    ``detail[(j, nu)]`` and ``aux[j]`` hold the bands of level ``j`` in
    ``0..levels-1`` (``levels - 1`` is the finest); ``coarse`` is ``y_0``.
    Tensor pyramids carry no aux bands.
    """

    levels: int
    coarse: np.ndarray
    detail: dict[tuple[int, Index], np.ndarray] = field(default_factory=dict)
    aux: dict[int, np.ndarray] = field(default_factory=dict)
    system_id: str = ""
    method: str = COSET

    @property
    def dim(self) -> int:
        return self.coarse.ndim

    @property
    def exact(self) -> bool:
        return self.coarse.dtype == object

    def shape_at(self, j: int) -> tuple[int, ...]:
        """Per-axis size of the band grids at level ``j``."""
        return tuple(s << j for s in self.coarse.shape)

    @property
    def input_shape(self) -> tuple[int, ...]:
        return self.shape_at(self.levels)

    def shapes(self) -> dict[str, list[int]]:
        return {"coarse": list(self.coarse.shape), "input": list(self.input_shape)}

    def validate(self) -> None:
        expected_aux = set(range(self.levels)) if self.method == COSET else set()
        if set(self.aux) != expected_aux:
            raise DimensionError("aux bands do not match the pyramid levels")
        dirs = nonzero_parity_points(self.dim)
        want = {(j, nu) for j in range(self.levels) for nu in dirs}
        if set(self.detail) != want:
            raise DimensionError("detail bands do not match the pyramid levels")
        for (j, _), band in self.detail.items():
            if band.shape != self.shape_at(j):
                raise DimensionError(f"detail band at level {j} has shape {band.shape}")
        for j, band in self.aux.items():
            if band.shape != self.shape_at(j):
                raise DimensionError(f"aux band at level {j} has shape {band.shape}")


def system_id(method: str, dim: int, first: Mask, second: Mask) -> str:
    """Stable identifier of the filters driving a transform, independent of scalar mode."""
    payload = json.dumps(
        {
            "method": method,
            "dim": dim,
            "a": mask_to_json(first.to_exact()),
            "b": mask_to_json(second.to_exact()),
        },
        sort_keys=True,
    )
    digest = hashlib.sha256(payload.encode()).hexdigest()[:16]
    return f"{method}-n{dim}-{digest}"


# -- helpers ---------------------------------------------------------------


def _is_exact(y: np.ndarray) -> bool:
    return y.dtype == object


def _taps(mask: Mask, exact: bool) -> dict[int, object]:
    if mask.dim != 1:
        raise DimensionError("transform filters must be 1-D")
    src = mask if exact else mask.to_float()
    if exact and mask.mode != "exact":
        raise PreconditionError("exact grids need exact filters")
    return {k[0]: v for k, v in src.items()}


def _cost(c) -> int:
    return 0 if c == 1 or c == -1 else 1


def _scalar(value, exact: bool):
    if exact:
        return value if isinstance(value, Dyadic) else Dyadic(value)
    return float(value)


def _check_shape(shape: tuple[int, ...], levels: int) -> None:
    if levels < 0:
        raise ValueError("levels must be non-negative")
    step = 1 << levels
    for s in shape:
        if s < 1 or s % step:
            raise DimensionError(f"axis size {s} is not divisible by 2**{levels}")


def _components(y: np.ndarray) -> dict[Index, np.ndarray]:
    n = y.ndim
    return {g: y[tuple(slice(c, None, 2) for c in g)] for g in parity_points(n)}


def _sample(comps: dict[Index, np.ndarray], d: Index) -> np.ndarray:
    """``y(2k + d)`` on the coarse grid, periodically."""
    parity = tuple(c % 2 for c in d)
    shift = tuple(-(c // 2) for c in d)
    base = comps[parity]
    if not any(shift):
        return base
    return np.roll(base, shift, axis=tuple(range(base.ndim)))


def _scaled(arr: np.ndarray, c) -> np.ndarray:
    if c == 1:
        return arr
    if c == -1:
        return -arr
    return arr * c


def _require_coset_filters(g: Mask | None, h: Mask) -> None:
    for name, m in (("G", g), ("H", h)):
        if m is None:
            continue
        if m.dim != 1:
            raise DimensionError(f"{name} must be 1-D")
        if not is_symmetric(m):
            raise PreconditionError(f"{name} must be symmetric")
    if not is_interpolatory(h):
        raise PreconditionError("H must be interpolatory")


def _require_standard(reps) -> None:
    if reps is None:
        return
    from .constructors import CosetReps

    if not isinstance(reps, CosetReps):
        reps = CosetReps(len(reps[0]), tuple(reps))
    if not reps.is_standard():
        raise PreconditionError("the fast transform supports only the standard representatives {0,1}^n")


# -- coset sum algorithm ---------------------------------------------------


def coset_decompose(
    y: np.ndarray,
    g: Mask,
    h: Mask,
    levels: int,
    counter: OpCounter | None = None,
    reps=None,
) -> Pyramid:
    """Pyramid decomposition with the coset sum filters built from ``G`` and ``H``."""
    _require_coset_filters(g, h)
    _require_standard(reps)
    y = np.asarray(y)
    exact = _is_exact(y)
    _check_shape(y.shape, levels)
    counter = counter if counter is not None else OpCounter()
    counter.add_samples(y.size)
    n = y.ndim
    gt = _taps(g, exact)
    ht = _taps(h, exact)
    g0 = gt.get(0, _scalar(0, exact))
    a_g = _scalar(2 - 2**n, exact) + (2**n - 1) * g0
    off = {L: c for L, c in gt.items() if L != 0}
    odd = {m: c for m, c in ht.items() if m % 2}
    norm = _scalar(Dyadic(1, n), exact) if exact else 2.0**-n
    half = _scalar(Dyadic(1, 1), exact) if exact else 0.5
    dirs = nonzero_parity_points(n)

    detail: dict[tuple[int, Index], np.ndarray] = {}
    aux: dict[int, np.ndarray] = {}
    for j in range(levels, 0, -1):
        comps = _components(y)
        even = comps[(0,) * n]
        m = even.size
        acc = _scaled(even, a_g)
        for nu in dirs:
            for L, c in off.items():
                acc = acc + _scaled(_sample(comps, tuple(L * v for v in nu)), c)
        coarse = acc * norm
        counter.add(m * (_cost(a_g) + sum(_cost(c) for c in off.values()) * len(dirs) + n))
        for nu in dirs:
            acc = _sample(comps, nu)
            for mm, c in odd.items():
                acc = acc - _scaled(_sample(comps, tuple((1 - mm) * v for v in nu)), c)
            detail[(j - 1, nu)] = acc * half
            counter.add(m * (1 + sum(_cost(c) for c in odd.values())))
        aux[j - 1] = even - coarse
        y = coarse
    return Pyramid(levels, y, detail, aux, system_id(COSET, n, g, h), COSET)


def coset_reconstruct(p: Pyramid, h: Mask, counter: OpCounter | None = None) -> np.ndarray:
    """Invert :func:`coset_decompose` using only ``H`` and the stored aux bands."""
    _require_coset_filters(None, h)
    if p.method != COSET:
        raise PreconditionError(f"pyramid was produced by the {p.method} method")
    p.validate()
    exact = p.exact
    counter = counter if counter is not None else OpCounter()
    n = p.dim
    odd = {m: c for m, c in _taps(h, exact).items() if m % 2}
    two = _scalar(2, exact)
    y = p.coarse
    for j in range(p.levels):
        even = p.aux[j] + y
        out = np.empty(tuple(2 * s for s in even.shape), dtype=even.dtype)
        out[tuple(slice(0, None, 2) for _ in range(n))] = even
        comps = {(0,) * n: even}
        for nu in nonzero_parity_points(n):
            acc = p.detail[(j, nu)] * two
            for mm, c in odd.items():
                acc = acc + _scaled(_sample(comps, tuple((1 - mm) * v for v in nu)), c)
            out[tuple(slice(c, None, 2) for c in nu)] = acc
            counter.add(even.size * (1 + sum(_cost(c) for c in odd.values())))
        y = out
    return y


# -- separable tensor product algorithm -----------------------------------


def _analysis_axis(x, axis, lo: dict, hi: dict, exact: bool, counter: OpCounter):
    half = _scalar(Dyadic(1, 1), exact) if exact else 0.5
    x = np.moveaxis(x, axis, 0)
    comps = (x[0::2], x[1::2])

    def run(taps):
        acc = None
        for m, c in taps.items():
            term = _scaled(np.roll(comps[m % 2], -(m // 2), axis=0), c)
            acc = term if acc is None else acc + term
        return acc * half

    low, high = run(lo), run(hi)
    half_size = comps[0].size
    counter.add(half_size * (1 + sum(_cost(c) for c in lo.values())))
    counter.add(half_size * (1 + sum(_cost(c) for c in hi.values())))
    return np.moveaxis(low, 0, axis), np.moveaxis(high, 0, axis)


def _synthesis_axis(low, high, axis, lo: dict, hi: dict, counter: OpCounter):
    low = np.moveaxis(low, axis, 0)
    high = np.moveaxis(high, axis, 0)
    out = np.empty((2 * low.shape[0],) + low.shape[1:], dtype=low.dtype)
    for r in (0, 1):
        acc = None
        for band, taps in ((low, lo), (high, hi)):
            for m, c in taps.items():
                if (m - r) % 2:
                    continue
                term = _scaled(np.roll(band, (m - r) // 2, axis=0), c)
                acc = term if acc is None else acc + term
        out[r::2] = acc
    counter.add(low.size * (sum(_cost(c) for c in lo.values()) + sum(_cost(c) for c in hi.values())))
    return np.moveaxis(out, 0, axis)


def _tensor_filters(s0: Mask, u0: Mask, exact: bool):
    for name, m in (("S0", s0), ("U0", u0)):
        if m.dim != 1:
            raise DimensionError(f"{name} must be 1-D")
    from .analysis import is_biorthogonal

    if not is_biorthogonal(s0, u0):
        raise PreconditionError("S0 and U0 are not biorthogonal")
    s1 = quadrature_mirror(u0)
    u1 = quadrature_mirror(s0)
    return tuple(_taps(m, exact) for m in (s0, s1, u0, u1))


def tensor_decompose(
    y: np.ndarray, s0: Mask, u0: Mask, levels: int, counter: OpCounter | None = None
) -> Pyramid:
    """Separable decomposition: analysis with ``(S0, S1)`` along every axis."""
    y = np.asarray(y)
    exact = _is_exact(y)
    _check_shape(y.shape, levels)
    a0, a1, _, _ = _tensor_filters(s0, u0, exact)
    counter = counter if counter is not None else OpCounter()
    counter.add_samples(y.size)
    n = y.ndim
    detail = {}
    for j in range(levels, 0, -1):
        bands = {(): y}
        for axis in range(n):
            nxt = {}
            for key, arr in bands.items():
                low, high = _analysis_axis(arr, axis, a0, a1, exact, counter)
                nxt[key + (0,)] = low
                nxt[key + (1,)] = high
            bands = nxt
        y = bands.pop((0,) * n)
        for nu, arr in bands.items():
            detail[(j - 1, nu)] = arr
    return Pyramid(levels, y, detail, {}, system_id(TENSOR, n, s0, u0), TENSOR)


def tensor_reconstruct(
    p: Pyramid, s0: Mask, u0: Mask, counter: OpCounter | None = None
) -> np.ndarray:
    """Separable synthesis with ``(U0, U1)``."""
    if p.method != TENSOR:
        raise PreconditionError(f"pyramid was produced by the {p.method} method")
    p.validate()
    _, _, b0, b1 = _tensor_filters(s0, u0, p.exact)
    counter = counter if counter is not None else OpCounter()
    n = p.dim
    y = p.coarse
    for j in range(p.levels):
        bands = {(0,) * n: y}
        for nu in nonzero_parity_points(n):
            bands[nu] = p.detail[(j, nu)]
        for axis in range(n - 1, -1, -1):
            merged = {}
            for key in {k[:axis] for k in bands}:
                merged[key] = _synthesis_axis(
                    bands[key + (0,)], bands[key + (1,)], axis, b0, b1, counter
                )
            bands = merged
        y = bands[()]
    return y
