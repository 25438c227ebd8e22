"""Combined biorthogonal masks: univariate, tensor product and coset sum systems."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field

from .analysis import accuracy_number, is_biorthogonal, is_interpolatory, muep_verify
from .constructors import coset_sum, tensor_product
from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError
from .mask import (
    EXACT,
    Index,
    Mask,
    is_refinement,
    lift_along_direction,
    mask_add,
    mask_conjugate,
    mask_const,
    mask_from_json,
    mask_modulate,
    mask_multiply,
    mask_scale,
    mask_shift,
    mask_sum,
    mask_to_json,
    nonzero_parity_points,
    parity_points,
)

KINDS = ("univariate", "tensor", "coset")


def nu_key(nu: Index) -> str:
    return ",".join(str(c) for c in nu)


def parse_nu_key(key: str) -> Index:
    return tuple(int(c) for c in key.split(","))


@dataclass(frozen=True)
class WaveletSystem:
    """Refinement masks ``tau``/``taud`` and wavelet masks indexed by nonzero parity vectors."""

    dim: int
    kind: str
    tau: Mask
    taud: Mask
    wavelets: Mapping[Index, Mask] = field(default_factory=dict)
    duals: Mapping[Index, Mask] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        expected = set(nonzero_parity_points(self.dim))
        if set(self.wavelets) != expected or set(self.duals) != expected:
            raise ValueError("wavelets and duals must be indexed by {0,1}^n \\ 0")

    @property
    def directions(self) -> list[Index]:
        return nonzero_parity_points(self.dim)

    def primal(self) -> tuple[Mask, list[Mask]]:
        return self.tau, [self.wavelets[nu] for nu in self.directions]

    def dual(self) -> tuple[Mask, list[Mask]]:
        return self.taud, [self.duals[nu] for nu in self.directions]

    def verify(self):
        return muep_verify(self.primal(), self.dual())

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "kind": self.kind,
            "tau": mask_to_json(self.tau),
            "taud": mask_to_json(self.taud),
            "wavelets": {nu_key(nu): mask_to_json(self.wavelets[nu]) for nu in self.directions},
            "duals": {nu_key(nu): mask_to_json(self.duals[nu]) for nu in self.directions},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WaveletSystem":
        return cls(
            dim=int(data["dim"]),
            kind=data["kind"],
            tau=mask_from_json(data["tau"]),
            taud=mask_from_json(data["taud"]),
            wavelets={parse_nu_key(k): mask_from_json(v) for k, v in data["wavelets"].items()},
            duals={parse_nu_key(k): mask_from_json(v) for k, v in data["duals"].items()},
        )

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json(), **kwargs)


def _pow2(e: int, mode: str):
    return Dyadic(1, -e) if mode == EXACT else 2.0**e


def _require_biorthogonal_pair(s0: Mask, u0: Mask) -> None:
    if s0.dim != 1 or u0.dim != 1:
        raise DimensionError("expected 1-D refinement masks")
    if not (is_refinement(s0) and is_refinement(u0)):
        raise PreconditionError("both masks must be refinement masks")
    if not is_biorthogonal(s0, u0):
        raise PreconditionError("the refinement masks are not biorthogonal")


def quadrature_mirror(r: Mask) -> Mask:
    """``e^{-i omega} * conj(R(omega + pi))`` for a 1-D mask."""
    return mask_shift(mask_conjugate(mask_modulate(r, (1,))), (1,))


def build_1d_system(s0: Mask, u0: Mask) -> WaveletSystem:
    """Univariate system with ``S1 = e^{-iw} conj(U0(w+pi))`` and ``U1`` likewise from ``S0``."""
    _require_biorthogonal_pair(s0, u0)
    return WaveletSystem(
        dim=1,
        kind="univariate",
        tau=s0,
        taud=u0,
        wavelets={(1,): quadrature_mirror(u0)},
        duals={(1,): quadrature_mirror(s0)},
    )


def build_tensor_system(s0: Mask, u0: Mask, dim: int) -> WaveletSystem:
    """Separable system: ``t_nu`` tensors ``S_{nu_1} ... S_{nu_n}``, duals likewise with ``U``."""
    base = build_1d_system(s0, u0)
    if dim == 1:
        return base
    primal = (s0, base.wavelets[(1,)])
    dual = (u0, base.duals[(1,)])
    return WaveletSystem(
        dim=dim,
        kind="tensor",
        tau=tensor_product([s0] * dim),
        taud=tensor_product([u0] * dim),
        wavelets={nu: _tensor_pattern(primal, nu) for nu in nonzero_parity_points(dim)},
        duals={nu: _tensor_pattern(dual, nu) for nu in nonzero_parity_points(dim)},
    )


def _tensor_pattern(pair: tuple[Mask, Mask], nu: Index) -> Mask:
    # the highpass factor is not a refinement mask, so assemble the filter directly
    entries: dict[Index, object] = {(): None}
    for bit in nu:
        nxt = {}
        for k, v in entries.items():
            for (K,), c in pair[bit].filter.items():
                nxt[k + (K,)] = c if v is None else v * c
        entries = nxt
    return Mask(len(nu), entries, pair[0].mode)


def coset_wavelet_mask(u: Mask, nu: Index) -> Mask:
    """``t_nu(omega) = e^{-i omega . nu} conj(U(omega . nu + pi))``."""
    lifted = lift_along_direction(mask_modulate(u, (1,)), nu, len(nu))
    return mask_shift(mask_conjugate(lifted), nu)


def build_coset_system(s: Mask, u: Mask, dim: int) -> WaveletSystem:
    """Coset sum wavelet system: ``tau = C_n[S]``, ``taud = C_n[U]``.

    Primal wavelets are the directional masks of :func:`coset_wavelet_mask`;
    duals come from :func:`compute_dual_wavelet_masks`.
    """
    if not is_interpolatory(u):
        raise PreconditionError("U must be interpolatory")
    _require_biorthogonal_pair(s, u)
    for name, r in (("S", s), ("U", u)):
        # with cap=1 only order 0 is probed; a finite answer means accuracy 0
        if not accuracy_number(r, cap=1).capped:
            raise PreconditionError(f"{name} must have accuracy at least 1")
    tau = coset_sum(s, dim)
    taud = coset_sum(u, dim)
    wavelets = {nu: coset_wavelet_mask(u, nu) for nu in nonzero_parity_points(dim)}
    duals = compute_dual_wavelet_masks(tau, taud, wavelets)
    return WaveletSystem(dim, "coset", tau, taud, wavelets, duals)


@dataclass(frozen=True)
class DualScaffold:
    """Intermediate masks behind the closed-form duals.

    ``t0 = (1 - tau)/2``; ``f[nu]`` and ``g[nu]`` are the parity-filtered
    conjugates of ``taud`` and ``tau``; ``tau_d[nu]`` (nu in {0,1}^n) are
    the trivial-reconstruction duals ``2**(1-n) e^{-i nu . omega}``.
    """

    t0: Mask
    f: dict[Index, Mask]
    g: dict[Index, Mask]
    tau_d: dict[Index, Mask]


def _parity_filtered_conjugate(a: Mask, nu: Index) -> Mask:
    # e^{-i nu.w} * sum_gamma e^{-i nu.gamma} conj(a(w + gamma))
    n = a.dim
    terms = []
    conj = mask_conjugate(a)
    for gamma in parity_points(n):
        sign = -1 if sum(x * y for x, y in zip(nu, gamma)) % 2 else 1
        terms.append(mask_scale(sign, mask_modulate(conj, gamma)))
    return mask_shift(mask_sum(terms, n, a.mode), nu)


def dual_scaffold(tau: Mask, taud: Mask) -> DualScaffold:
    n, mode = tau.dim, tau.mode
    half = _pow2(-1, mode)
    t0 = mask_scale(half, mask_add(mask_const(1, n, mode), mask_scale(-1, tau)))
    dirs = nonzero_parity_points(n)
    f = {nu: _parity_filtered_conjugate(taud, nu) for nu in dirs}
    g = {nu: _parity_filtered_conjugate(tau, nu) for nu in dirs}
    weight = _pow2(1 - n, mode)
    tau_d = {nu: mask_shift(mask_const(weight, n, mode), nu) for nu in parity_points(n)}
    return DualScaffold(t0, f, g, tau_d)


def compute_dual_wavelet_masks(
    tau: Mask, taud: Mask, wavelets: Mapping[Index, Mask]
) -> dict[Index, Mask]:
    """Closed-form duals ``t_nu^d = -2**(1-n) g_nu taud + tau_nu^d``."""
    if tau.dim != taud.dim:
        raise DimensionError("tau and taud must share a dimension")
    if not is_refinement(tau) or not is_refinement(taud):
        raise PreconditionError("tau and taud must be refinement masks")
    if not is_interpolatory(taud):
        raise PreconditionError("taud must be interpolatory")
    if not is_biorthogonal(tau, taud):
        raise PreconditionError("tau and taud are not biorthogonal")
    if set(wavelets) != set(nonzero_parity_points(tau.dim)):
        raise ValueError("wavelets must be indexed by {0,1}^n \\ 0")
    scaffold = dual_scaffold(tau, taud)
    n, mode = tau.dim, tau.mode
    weight = _pow2(1 - n, mode)
    return {
        nu: mask_add(
            mask_scale(-weight, mask_multiply(scaffold.g[nu], taud)),
            scaffold.tau_d[nu],
        )
        for nu in nonzero_parity_points(n)
    }
