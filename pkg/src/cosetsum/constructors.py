"""Liftable operators: coset sum, tensor product and their hybrids."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError
from .mask import (
    EXACT,
    Index,
    Mask,
    embed,
    is_refinement,
    lift_along_direction,
    mask_add,
    mask_const,
    mask_multiply,
    mask_scale,
    parity_points,
)


@dataclass(frozen=True)
class CosetReps:
    """A complete set of representatives of ``Z^n / 2Z^n`` with 0 first."""

    dim: int
    reps: tuple[Index, ...]

    def __post_init__(self):
        reps = tuple(tuple(int(c) for c in r) for r in self.reps)
        object.__setattr__(self, "reps", reps)
        n = self.dim
        if len(reps) != 2**n:
            raise ValueError(f"need {2**n} representatives, got {len(reps)}")
        if any(len(r) != n for r in reps):
            raise DimensionError("every representative must have length dim")
        if any(reps[0]):
            raise ValueError("the first representative must be the origin")
        classes = {tuple(c % 2 for c in r) for r in reps}
        if len(classes) != len(reps):
            raise ValueError("representatives are not pairwise distinct modulo 2")

    @classmethod
    def standard(cls, dim: int) -> "CosetReps":
        return cls(dim, tuple(parity_points(dim)))

    @property
    def nonzero(self) -> tuple[Index, ...]:
        return self.reps[1:]

    def is_standard(self) -> bool:
        return self.reps == tuple(parity_points(self.dim))


def _require_refinement(r: Mask, what: str = "R") -> None:
    if r.dim != 1:
        raise DimensionError(f"{what} must be a 1-D mask")
    if not is_refinement(r):
        raise PreconditionError(f"{what} is not a refinement mask (R(0) != 1)")


def _resolve_reps(dim: int, reps: CosetReps | Sequence | None) -> CosetReps:
    if reps is None:
        return CosetReps.standard(dim)
    if not isinstance(reps, CosetReps):
        reps = CosetReps(dim, tuple(reps))
    if reps.dim != dim:
        raise DimensionError("coset representatives do not match the dimension")
    return reps


def coset_sum_general(
    assignment: Mapping[Index, Mask], dim: int, reps: CosetReps | Sequence | None = None
) -> Mask:
    """Coset sum with a possibly different 1-D refinement mask per direction.

    ``2**(1-n) * (1 - 2**(n-1) + sum_nu R_nu(omega . nu))`` over the
    nonzero representatives ``nu``.
    """
    reps = _resolve_reps(dim, reps)
    keys = {tuple(k) for k in assignment}
    if keys != set(reps.nonzero):
        raise ValueError("assignment must provide exactly one mask per nonzero representative")
    masks = {tuple(k): v for k, v in assignment.items()}
    modes = {m.mode for m in masks.values()}
    if len(modes) != 1:
        raise PreconditionError("all direction masks must share one scalar mode")
    mode = modes.pop()
    for nu, r in masks.items():
        _require_refinement(r, f"R_{nu}")

    return _scaled_sum(masks, reps, dim, mode)


def _scaled_sum(masks, reps: CosetReps, n: int, mode: str) -> Mask:
    weight = _pow2(1 - n, mode)
    total = mask_const(weight * (1 - 2 ** (n - 1)), n, mode)
    for nu in reps.nonzero:
        total = mask_add(total, mask_scale(weight, lift_along_direction(masks[nu], nu, n)))
    return total


def _pow2(e: int, mode: str):
    return Dyadic(1, -e) if mode == EXACT else 2.0**e


def coset_sum(r: Mask, dim: int, reps: CosetReps | Sequence | None = None) -> Mask:
    """The coset sum ``C_n[R]`` of a 1-D refinement mask."""
    reps = _resolve_reps(dim, reps)
    _require_refinement(r)
    return coset_sum_general({nu: r for nu in reps.nonzero}, dim, reps)


def coset_sum_interpolatory_form(r: Mask, dim: int) -> Mask:
    """``2**(1-n) * (1/2 + sum_nu (R(omega . nu) - 1/2))``.

    Agrees with :func:`coset_sum` when ``R`` is interpolatory; kept as an
    independent construction for cross-checking.
    """
    _require_refinement(r)
    n, mode = dim, r.mode
    half = _pow2(-1, mode)
    weight = _pow2(1 - n, mode)
    inner = mask_const(half, n, mode)
    for nu in parity_points(n)[1:]:
        inner = mask_add(inner, mask_add(lift_along_direction(r, nu, n), mask_const(-half, n, mode)))
    return mask_scale(weight, inner)


def placement_collisions(r: Mask, dim: int, reps: CosetReps | Sequence | None = None) -> set[Index]:
    """Off-origin indices where two directional placements of ``R`` overlap.

    Distinct nonzero representatives are never parallel (parallel nonzero
    vectors fall in the same class mod 2 or in the zero class), so the
    lines ``K * nu`` meet only at the origin and this set is always empty.
    It is kept as a diagnostic; :func:`coset_sum` would sum any overlap.
    """
    reps = _resolve_reps(dim, reps)
    seen: set[Index] = set()
    clash: set[Index] = set()
    for nu in reps.nonzero:
        for (K,) in r.filter:
            if K == 0:
                continue
            idx = tuple(K * c for c in nu)
            if idx in seen:
                clash.add(idx)
            seen.add(idx)
    return clash


def tensor_product(masks: Sequence[Mask]) -> Mask:
    """Separable mask ``R_1(omega_1) ... R_n(omega_n)``; ``h(k) = prod H_j(k_j)``."""
    masks = list(masks)
    if not masks:
        raise ValueError("tensor_product needs at least one factor")
    modes = {m.mode for m in masks}
    if len(modes) != 1:
        raise PreconditionError("all factors must share one scalar mode")
    for i, m in enumerate(masks):
        _require_refinement(m, f"R_{i + 1}")
    mode = modes.pop()
    entries: dict[Index, object] = {(): None}
    for m in masks:
        nxt = {}
        for k, v in entries.items():
            for (K,), c in m.filter.items():
                nxt[k + (K,)] = c if v is None else v * c
        entries = nxt
    return Mask(len(masks), entries, mode)


def hybrid(blocks: Sequence[tuple[str, Mask, int]]) -> Mask:
    """Product of per-block coset sums / tensor products on disjoint coordinates.

    Each block is ``(tag, R, block_dim)`` with ``tag`` in ``{"coset",
    "tensor"}``; blocks take consecutive coordinate groups.
    """
    blocks = list(blocks)
    if not blocks:
        raise ValueError("hybrid needs at least one block")
    dim = sum(int(b[2]) for b in blocks)
    result = None
    start = 0
    for tag, r, n_j in blocks:
        n_j = int(n_j)
        if n_j < 1:
            raise DimensionError("block dimensions must be positive")
        if tag == "coset":
            part = coset_sum(r, n_j)
        elif tag == "tensor":
            part = tensor_product([r] * n_j)
        else:
            raise ValueError(f"unknown block operator {tag!r}")
        placed = embed(part, dim, range(start, start + n_j))
        result = placed if result is None else mask_multiply(result, placed)
        start += n_j
    return result
