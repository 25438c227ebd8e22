"""Exact predicates on masks: interpolation, biorthogonality, accuracy,
vanishing moments and the mixed unitary extension principle (MUEP)."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError, ScalarKindError
from .mask import (
    EXACT,
    Index,
    Mask,
    Scalar,
    derivative_moment,
    is_refinement,
    mask_add,
    mask_conjugate,
    mask_const,
    mask_modulate,
    mask_multiply,
    nonzero_parity_points,
    parity_points,
)

FLOAT_TOL = 1e-10
DEFAULT_CAP = 64


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a predicate.  In exact mode ``passed`` iff ``residual == 0``."""

    passed: bool
    residual: Scalar
    detail: Any = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self, check: str) -> dict:
        return {
            "check": check,
            "pass": self.passed,
            "residual": _scalar_json(self.residual),
            "witness": _jsonable(self.detail),
        }


@dataclass(frozen=True)
class AccuracyReport:
    """Order of the common zero at the points ``pi*gamma``, gamma != 0.

    ``witness`` is the ``(gamma, mu)`` pair of the first nonvanishing
    derivative moment; it is ``None`` and ``capped`` is set when the search
    stopped at the cap.
    """

    accuracy: int
    witness: tuple[Index, Index] | None = None
    capped: bool = False
    moment: Scalar | None = field(default=None, compare=False)


class MomentCapError(RuntimeError):
    """No nonvanishing moment was found below the requested cap."""


def _scalar_json(value):
    if isinstance(value, Dyadic):
        return str(value)
    return value


def _jsonable(obj):
    if isinstance(obj, tuple):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, Dyadic):
        return str(obj)
    return obj


def _abs_dev(value: Scalar, target: int) -> Scalar:
    return abs(value - target)


def _fails(dev: Scalar, mode: str, tol: float) -> bool:
    return bool(dev) if mode == EXACT else dev > tol


def _max(values: list[Scalar], mode: str) -> Scalar:
    return max(values, default=Dyadic(0) if mode == EXACT else 0.0)


def _even_index(k: Index) -> bool:
    return all(c % 2 == 0 for c in k)


def is_interpolatory(tau: Mask, tol: float = FLOAT_TOL) -> CheckResult:
    """Filter condition ``h(0) = 1`` and ``h = 0`` on ``2Z^n \\ 0``.

    ``residual`` is the largest deviation; ``detail`` is the first
    offending index in lexicographic order.
    """
    origin = (0,) * tau.dim
    points = sorted({k for k in tau.filter if _even_index(k)} | {origin})
    devs = []
    witness = None
    for k in points:
        dev = _abs_dev(tau[k], 1 if k == origin else 0)
        devs.append(dev)
        if witness is None and _fails(dev, tau.mode, tol):
            witness = k
    return CheckResult(witness is None, _max(devs, tau.mode), witness)


def is_biorthogonal(tau: Mask, taud: Mask, tol: float = FLOAT_TOL) -> CheckResult:
    """``tau`` and ``taud`` are biorthogonal iff ``conj(tau) * taud`` is interpolatory."""
    if tau.dim != taud.dim:
        raise DimensionError("masks must share a dimension")
    if tau.mode != taud.mode:
        raise ScalarKindError("masks must share a scalar mode")
    return is_interpolatory(mask_multiply(mask_conjugate(tau), taud), tol)


def multi_orders(dim: int, order: int) -> Iterator[Index]:
    """All ``mu`` in ``N_0^dim`` with ``|mu| == order``, lexicographic."""
    for cut in itertools.combinations(range(order + dim - 1), dim - 1):
        bounds = (-1,) + cut + (order + dim - 1,)
        yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(dim))


def _moment_nonzero(a: Mask, mu: Index, gamma: Index, tol: float) -> tuple[bool, Scalar]:
    value = derivative_moment(a, mu, gamma)
    if a.mode == EXACT:
        return bool(value), value
    # float: compare against the size of the terms that were summed
    scale = 0.0
    for k, v in a.filter.items():
        w = abs(v)
        for c, m in zip(k, mu):
            w *= abs(c) ** m
        scale += w
    return abs(value) > tol * max(scale * 2.0**-a.dim, 1.0), value


def _first_nonvanishing(a: Mask, gammas: Sequence[Index], cap: int, tol: float):
    for order in range(cap):
        for gamma in gammas:
            for mu in multi_orders(a.dim, order):
                nonzero, value = _moment_nonzero(a, mu, gamma, tol)
                if nonzero:
                    return order, gamma, mu, value
    return None


def accuracy_number(tau: Mask, cap: int = DEFAULT_CAP, tol: float = FLOAT_TOL) -> AccuracyReport:
    """Smallest total derivative order that fails to vanish at some ``pi*gamma``, gamma != 0."""
    if not is_refinement(tau):
        raise PreconditionError("accuracy_number expects a refinement mask")
    hit = _first_nonvanishing(tau, nonzero_parity_points(tau.dim), cap, tol)
    if hit is None:
        return AccuracyReport(cap, None, capped=True)
    order, gamma, mu, value = hit
    return AccuracyReport(order, (gamma, mu), moment=value)


def vanishing_moments(t: Mask, cap: int = DEFAULT_CAP, tol: float = FLOAT_TOL) -> int:
    """Order of the zero of ``t`` at the origin."""
    hit = _first_nonvanishing(t, [(0,) * t.dim], cap, tol)
    if hit is None:
        raise MomentCapError(f"all derivative moments of order < {cap} vanish at the origin")
    return hit[0]


def muep_residuals(
    primal: tuple[Mask, Sequence[Mask]], dual: tuple[Mask, Sequence[Mask]]
) -> dict[Index, Mask]:
    """Per-gamma MUEP left-hand sides minus their targets (1 at gamma=0, else 0)."""
    tau, wavelets = primal
    taud, duals = dual
    wavelets, duals = list(wavelets), list(duals)
    if len(wavelets) != len(duals):
        raise DimensionError("primal and dual wavelet lists differ in length")
    masks = [tau, taud, *wavelets, *duals]
    if len({m.dim for m in masks}) != 1:
        raise DimensionError("all masks must share a dimension")
    if len({m.mode for m in masks}) != 1:
        raise ScalarKindError("all masks must share a scalar mode")
    n, mode = tau.dim, tau.mode
    out = {}
    for gamma in parity_points(n):
        lhs = mask_multiply(mask_conjugate(mask_modulate(tau, gamma)), taud)
        for t, td in zip(wavelets, duals):
            lhs = mask_add(lhs, mask_multiply(mask_conjugate(mask_modulate(t, gamma)), td))
        target = mask_const(1 if not any(gamma) else 0, n, mode)
        out[gamma] = mask_add(lhs, -1 * target)
    return out


def muep_verify(
    primal: tuple[Mask, Sequence[Mask]],
    dual: tuple[Mask, Sequence[Mask]],
    tol: float = FLOAT_TOL,
) -> CheckResult:
    """Check the MUEP identities coefficient by coefficient.

    ``residual`` is the largest Laurent coefficient (filter value times
    ``2**-n``) of any left-hand side minus its target.
    """
    residuals = muep_residuals(primal, dual)
    mode = primal[0].mode
    n = primal[0].dim
    worst = []
    witness = None
    for gamma, diff in residuals.items():
        for k, v in diff.items():
            dev = abs(v.scale2(-n) if mode == EXACT else v * 2.0**-n)
            worst.append(dev)
            if witness is None and _fails(dev, mode, tol):
                witness = {"gamma": gamma, "index": k}
    return CheckResult(witness is None, _max(worst, mode), witness)
