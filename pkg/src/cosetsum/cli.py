"""``cosetsum`` command line: gen, verify, transform, benchmark."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import catalog
from .analysis import (
    DEFAULT_CAP,
    MomentCapError,
    accuracy_number,
    is_biorthogonal,
    is_interpolatory,
    vanishing_moments,
)
from .constructors import CosetReps, coset_sum, hybrid, tensor_product
from .dyadic import Dyadic
from .errors import DimensionError, PreconditionError, ScalarKindError, SupportLimitError
from .formats import FormatError, read_grid, read_manifest, read_pyramid, write_grid, write_pyramid
from .mask import EXACT, FLOAT, Mask, mask_from_json, mask_to_json
from .system import WaveletSystem, build_coset_system, build_tensor_system
from .transform import (
    COSET,
    METHODS,
    TENSOR,
    OpCounter,
    coset_decompose,
    coset_reconstruct,
    measured_complexity,
    system_id,
    tensor_decompose,
    tensor_reconstruct,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECKS = ("interpolatory", "biorthogonal", "accuracy", "moments", "muep")
OPS = ("cosetsum", "tensor", "hybrid", "none")
DEFAULT_SIZES = {1: 4096, 2: 64, 3: 32, 4: 16}
MAX_SAMPLES = 1 << 24


class UsageError(Exception):
    """Invalid combination of arguments or inputs."""


# -- shared helpers --------------------------------------------------------


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from None


def _load_mask(path: str) -> Mask:
    data = _load_json(path)
    try:
        return mask_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed filter JSON ({exc})") from None


def _load_gamma(path: str, dim: int) -> CosetReps:
    data = _load_json(path)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise UsageError(f"{path}: expected a JSON list of integer vectors")
    reps = [tuple(int(c) for c in r) for r in data]
    if len(reps) == 2**dim - 1 and (0,) * dim not in reps:
        reps = [(0,) * dim] + reps
    try:
        return CosetReps(dim, tuple(reps))
    except (ValueError, DimensionError) as exc:
        raise UsageError(f"{path}: invalid coset representatives ({exc})") from None


def _base_mask(args) -> Mask:
    order = args.order
    if args.family in ("dd", "dd-dual") and order is None:
        raise UsageError("--order is required for dd families")
    try:
        return catalog.by_name(args.family, order, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _system_pair(args, method: str) -> tuple[Mask, Mask]:
    """``(S, U)`` for the transform and bundle commands."""
    family, mode = args.family, args.mode
    if family in ("dd", "spline1"):
        order = 2 if family == "spline1" else args.order
        if order is None or order < 2 or order % 2:
            raise UsageError("dd systems need an even --order 2k >= 2")
        u = catalog.deslauriers_dubuc(order // 2)
        s = catalog.dd_dual(order // 2)
    elif family in ("haar", "daub2"):
        if method == COSET:
            raise UsageError(f"{family} does not give an interpolatory pair; use --method tensor")
        s = u = _base_mask(args)
    else:
        raise UsageError(f"family {family!r} cannot drive a transform")
    if mode == FLOAT:
        s, u = s.to_float(), u.to_float()
    return s, u


# -- gen -------------------------------------------------------------------


def _parse_blocks(text: str) -> list[tuple[str, int]]:
    blocks = []
    for part in text.split(","):
        try:
            tag, n = part.split(":")
            blocks.append((tag.strip(), int(n)))
        except ValueError:
            raise UsageError(f"bad block {part!r}; expected coset:<n> or tensor:<n>") from None
    return blocks


def cmd_gen(args) -> int:
    if args.bundle:
        s, u = _system_pair(args, args.bundle)
        build = build_coset_system if args.bundle == COSET else build_tensor_system
        system = build(s, u, args.dim or 2)
        _emit(_dump(system.to_json()), args.output)
        return EXIT_PASS
    base = _base_mask(args)
    op = args.op
    if op == "none":
        result = base
    elif op == "cosetsum":
        dim = args.dim or 2
        reps = _load_gamma(args.gamma, dim) if args.gamma else None
        result = coset_sum(base, dim, reps)
    elif op == "tensor":
        result = tensor_product([base] * (args.dim or 2))
    else:
        if not args.blocks:
            raise UsageError("--op hybrid needs --blocks, e.g. coset:2,tensor:1")
        blocks = [(tag, base, n) for tag, n in _parse_blocks(args.blocks)]
        if args.dim and args.dim != sum(n for _, _, n in blocks):
            raise UsageError("--dim does not match the block dimensions")
        result = hybrid(blocks)
    _emit(_dump(mask_to_json(result)), args.output)
    return EXIT_PASS


# -- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    check = args.check
    if check == "muep":
        if not args.system:
            raise UsageError("--check muep needs --system <bundle.json>")
        try:
            system = WaveletSystem.from_json(_load_json(args.system))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.system}: malformed system bundle ({exc})") from None
        result = system.verify()
        cert = result.to_json(check)
    else:
        if not args.mask:
            raise UsageError(f"--check {check} needs --mask <filter.json>")
        mask = _load_mask(args.mask)
        if check == "interpolatory":
            cert = is_interpolatory(mask).to_json(check)
        elif check == "biorthogonal":
            if not args.dual:
                raise UsageError("--check biorthogonal needs --dual <filter.json>")
            cert = is_biorthogonal(mask, _load_mask(args.dual)).to_json(check)
        elif check == "accuracy":
            report = accuracy_number(mask, args.cap)
            cert = {
                "check": check,
                "accuracy": report.accuracy,
                "capped": report.capped,
                "witness": _witness(report.witness),
            }
            cert["pass"] = args.expect is None or report.accuracy == args.expect
        else:
            try:
                m = vanishing_moments(mask, args.cap)
            except MomentCapError as exc:
                cert = {"check": check, "pass": False, "moments": None, "detail": str(exc)}
            else:
                cert = {"check": check, "moments": m, "pass": args.expect is None or m == args.expect}
    _emit(_dump(cert), args.output)
    return EXIT_PASS if cert["pass"] else EXIT_FAIL


def _witness(w):
    if w is None:
        return None
    gamma, mu = w
    return {"gamma": list(gamma), "mu": list(mu)}


# -- transform -------------------------------------------------------------


def _to_exact(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    flat = out.reshape(-1)
    for i, v in enumerate(arr.reshape(-1)):
        flat[i] = Dyadic.from_float(float(v))
    return out


def cmd_transform(args) -> int:
    method = args.method
    s, u = _system_pair(args, method)
    if not args.input or not args.output:
        raise UsageError("transform needs -i/--input and -o/--output")
    counter = OpCounter()
    if args.direction == "decompose":
        grid = read_grid(args.input)
        if args.mode == EXACT:
            grid = _to_exact(grid)
        levels = args.levels if args.levels is not None else 1
        if method == COSET:
            p = coset_decompose(grid, s, u, levels, counter)
        else:
            p = tensor_decompose(grid, s, u, levels, counter)
        write_pyramid(args.output, p)
        samples = grid.size
    else:
        manifest = read_manifest(args.input)
        expected = system_id(method, len(manifest.get("shapes", {}).get("input", [])), s, u)
        if manifest.get("system-id") != expected or manifest.get("method") != method:
            sys.stderr.write(
                f"system-id mismatch: pyramid has {manifest.get('system-id')!r}, "
                f"flags give {expected!r}\n"
            )
            return EXIT_USAGE
        p = read_pyramid(args.input)
        if args.mode == EXACT:
            p.coarse = _to_exact(p.coarse)
            p.detail = {k: _to_exact(v) for k, v in p.detail.items()}
            p.aux = {k: _to_exact(v) for k, v in p.aux.items()}
        grid = coset_reconstruct(p, u, counter) if method == COSET else tensor_reconstruct(p, s, u, counter)
        write_grid(args.output, grid)
        samples = grid.size
    summary = {
        "direction": args.direction,
        "method": method,
        "ops": counter.ops,
        "samples": samples,
        "ops_per_sample": counter.ops / samples,
    }
    sys.stdout.write(json.dumps(summary) + "\n")
    return EXIT_PASS


# -- benchmark -------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def benchmark_rows(methods, dims, orders, size=None, levels=None, seed=0, max_samples=MAX_SAMPLES):
    """One ``(method, n, k, ops_per_sample, seconds)`` row per combination.

    Each row times one full decompose/reconstruct cycle of a float grid
    drawn from ``numpy.random.default_rng(seed)``.
    """
    rows = []
    for order in orders:
        if order < 2 or order % 2:
            raise UsageError("benchmark orders must be even (2k)")
        k = order // 2
        u = catalog.deslauriers_dubuc(k).to_float()
        s = catalog.dd_dual(k).to_float()
        for n in dims:
            side = size or DEFAULT_SIZES.get(n)
            if side is None:
                raise UsageError(f"no default size for n={n}; pass --size")
            if side**n > max_samples:
                raise UsageError(f"{side}^{n} samples exceeds the limit of {max_samples}")
            depth = levels if levels is not None else side.bit_length() - 1
            y = np.random.default_rng(seed).standard_normal((side,) * n)
            for method in methods:
                counter = OpCounter()
                start = time.perf_counter()
                if method == COSET:
                    coset_reconstruct(coset_decompose(y, s, u, depth, counter), u, counter)
                else:
                    tensor_reconstruct(tensor_decompose(y, s, u, depth, counter), s, u, counter)
                elapsed = time.perf_counter() - start
                rows.append((method, n, k, measured_complexity(counter), elapsed))
    return rows


def cmd_benchmark(args) -> int:
    methods = [args.method] if args.method else list(METHODS)
    dims = args.dims or [2, 3, 4]
    orders = args.orders or [4]
    rows = benchmark_rows(methods, dims, orders, args.size, args.levels, args.seed, args.max_samples)
    out = open(args.output, "w", newline="") if args.output and args.output != "-" else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["method", "n", "k", "ops_per_sample", "seconds"])
        for method, n, k, ops, secs in rows:
            writer.writerow([method, n, k, f"{float(ops):.6f}", f"{secs:.4f}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_PASS


# -- parser ----------------------------------------------------------------


def _add_family(p, required=True):
    p.add_argument("--family", choices=catalog.FAMILIES, required=required)
    p.add_argument("--order", type=int, help="Deslauriers-Dubuc order 2k")
    p.add_argument("--mode", choices=(EXACT, FLOAT), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosetsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a filter (or a wavelet system bundle) as JSON")
    _add_family(gen)
    gen.add_argument("--op", choices=OPS, default="none")
    gen.add_argument("--dim", type=int)
    gen.add_argument("--gamma", help="JSON list of coset representatives")
    gen.add_argument("--blocks", help="hybrid blocks, e.g. coset:2,tensor:1")
    gen.add_argument("--bundle", choices=METHODS, help="emit the full wavelet system instead")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen, default_mode=EXACT)

    ver = sub.add_parser("verify", help="check a property and print a JSON certificate")
    ver.add_argument("--check", choices=CHECKS, required=True)
    ver.add_argument("--mask", help="filter JSON (or - for stdin)")
    ver.add_argument("--dual", help="dual filter JSON")
    ver.add_argument("--system", help="system bundle JSON for --check muep")
    ver.add_argument("--cap", type=int, default=DEFAULT_CAP)
    ver.add_argument("--expect", type=int, help="expected accuracy / moment count")
    ver.add_argument("-o", "--output")
    ver.set_defaults(func=cmd_verify, mode=None, default_mode=None)

    tr = sub.add_parser("transform", help="pyramid decomposition / reconstruction of a grid file")
    tr.add_argument("direction", choices=("decompose", "reconstruct"))
    tr.add_argument("--method", choices=METHODS, default=COSET)
    _add_family(tr)
    tr.add_argument("--levels", type=int)
    tr.add_argument("-i", "--input")
    tr.add_argument("-o", "--output")
    tr.set_defaults(func=cmd_transform, default_mode=FLOAT)

    bench = sub.add_parser("benchmark", help="ops-per-sample table as CSV")
    bench.add_argument("--method", choices=METHODS)
    bench.add_argument("--dim", dest="dims", type=_int_list)
    bench.add_argument("--order", dest="orders", type=_int_list)
    bench.add_argument("--size", type=int)
    bench.add_argument("--levels", type=int)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--max-samples", type=int, default=MAX_SAMPLES)
    bench.add_argument("-o", "--output")
    bench.set_defaults(func=cmd_benchmark, mode=None, default_mode=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "mode", None) is None and args.default_mode:
        args.mode = args.default_mode
    try:
        return args.func(args)
    except (
        UsageError,
        FormatError,
        DimensionError,
        PreconditionError,
        ScalarKindError,
        SupportLimitError,
        MomentCapError,
        ValueError,
        OSError,
    ) as exc:
        sys.stderr.write(f"cosetsum: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
