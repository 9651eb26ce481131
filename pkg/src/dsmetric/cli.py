"""Command-line interface: ``dsmetric {synth,metric,oracle,classify}``.

Exit codes: 0 success, 1 input or configuration error, 2 results emitted
but some estimate did not converge.
"""

from __future__ import annotations

import argparse
import ast
import json
import logging
import math
import operator
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import numpy as np

from .angles import GOLDEN, Angle
from .errors import ConvergenceError, DSMetricError
from .evaluation import cross_validate, distance_matrix
from .io import fmt, read_trajectories, write_trajectories
from .kernels import KINDS, KernelSpec
from .linear import LinearSystem, ar_closed_form_Aq, poly_roots, subspace_angle_distance
from .metric import PAIRINGS, geometric_schedule
from .rotation import analytic_A1, analytic_A2_exact_branches, mu
from .trajectories import (
    ARModel,
    RotationSpec,
    ar_simulate,
    linear_simulate,
    load_ucr,
    rotation_orbit,
    time_delay_embed,
)

log = logging.getLogger("dsmetric")

EXIT_OK, EXIT_INPUT, EXIT_NONCONV = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers


def dump_json(obj, indent: int = 0) -> str:
    """JSON with floats written to 17 significant digits; non-finite floats become strings."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dump_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else json.dumps(str(x))
    if isinstance(obj, complex):
        return dump_json({"re": obj.real, "im": obj.imag}, indent)
    return json.dumps(str(obj))


def _emit(payload: dict, out_dir: Optional[str], filename: str) -> None:
    text = dump_json(payload) + "\n"
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / filename).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing helpers

_CONSTANTS = {"golden": GOLDEN, "pi": math.pi, "e": math.e, "sqrt2": math.sqrt(2.0)}
_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_angle(text: str) -> Angle:
    """Angle in turns from an expression like ``1/3``, ``golden``, ``pi/3`` or ``golden - 1/3``.

    Integers and decimals are exact rationals; the names ``golden``, ``pi``,
    ``e`` and ``sqrt2`` are irrational constants.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise UsageError(f"cannot parse angle {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Fraction(str(node.value))
        if isinstance(node, ast.Name) and node.id in _CONSTANTS:
            return Angle.irrational(node.id, _CONSTANTS[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, (ast.Add, ast.Sub)):
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    return _OPS[type(node.op)](a, b)
                a = a if isinstance(a, Angle) else Angle(a)
                b = b if isinstance(b, Angle) else Angle(b)
                return a + b if isinstance(node.op, ast.Add) else a - b
            if isinstance(node.op, ast.Mult):
                if isinstance(a, Angle) and isinstance(b, Angle):
                    raise UsageError("product of two irrational constants is not supported")
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    return a * b
                return a * b if isinstance(b, Fraction) else b * a
            if isinstance(b, Angle):
                raise UsageError("division by an irrational constant is not supported")
            if b == 0:
                raise UsageError("division by zero in angle")
            return a / b if isinstance(a, Fraction) else a * (1 / b)
        raise UsageError(f"unsupported element in angle {text!r}")

    v = ev(tree)
    return v if isinstance(v, Angle) else Angle(v)


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"expected a complex number, got {text!r}") from None


def _matrix(text: str) -> np.ndarray:
    try:
        val = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise UsageError(f"expected a matrix literal like [[1, 0], [0, 1]], got {text!r}") from None
    arr = np.array(val, dtype=complex)
    return np.atleast_2d(arr)


def _kernel(args) -> KernelSpec:
    bw = getattr(args, "bandwidth", "auto")
    if args.kernel != "gaussian":
        if bw not in (None, "auto"):
            raise UsageError("--bandwidth only applies to the gaussian kernel")
        return KernelSpec(args.kernel)
    if bw in (None, "auto"):
        return KernelSpec("gaussian")
    try:
        return KernelSpec("gaussian", float(bw))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_metric_flags(p, default_kernel="linear", default_m=1):
    p.add_argument("--kernel", choices=KINDS, default=default_kernel)
    p.add_argument("--bandwidth", default="auto", help="gaussian bandwidth, or 'auto' for the median heuristic")
    p.add_argument("--m", type=int, default=default_m, choices=(1, 2, 3))
    p.add_argument("--tmax", type=int, default=None, help="largest horizon (default: all available data)")
    p.add_argument("--t0", type=int, default=16, help="first horizon of the doubling schedule")
    p.add_argument("--mode", choices=("direct", "cesaro"), default="direct")
    p.add_argument("--rel-tol", type=float, default=1e-4)
    p.add_argument("--zero-tol", type=float, default=1e-12)
    p.add_argument("--pairing", choices=PAIRINGS, default="cross-time")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="output directory")


def _schedule(args, available: int):
    T = available if args.tmax is None else args.tmax
    if T < 1:
        raise UsageError("--tmax must be positive")
    if T > available:
        raise UsageError(f"--tmax {T} exceeds the {available} time steps available")
    try:
        return geometric_schedule(T, args.t0, args.mode, rel_tol=args.rel_tol, zero_tol=args.zero_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    T = args.T
    if T < 1:
        raise UsageError("--T must be positive")
    if args.kind == "rotation":
        spec = RotationSpec(args.modulus, parse_angle(args.theta), _complex(args.z0), tuple(_ints(args.shifts)))
        ds = rotation_orbit(spec, T)
    elif args.kind == "ar":
        model = ARModel(tuple(_floats(args.coeffs)))
        init = _floats(args.init) if args.init else [1.0] + [0.0] * (model.order - 1)
        ds = ar_simulate(model, init, T)
    else:
        A = _matrix(args.A)
        C = _matrix(args.C) if args.C else np.eye(A.shape[0])
        X0 = _matrix(args.x0) if args.x0 else np.eye(A.shape[0])
        ds = linear_simulate(A, C, X0, T)
    write_trajectories(args.out, ds)
    log.info("wrote %d x %d trajectories to %s", ds.n_seq, ds.length, args.out)
    return EXIT_OK


def cmd_metric(args) -> int:
    if len(args.inputs) < 2:
        raise UsageError("metric needs at least two trajectory files")
    datasets = [read_trajectories(p, name=p) for p in args.inputs]
    sched = _schedule(args, min(d.length for d in datasets))
    rep = distance_matrix(datasets, args.m, sched, _kernel(args), args.pairing, args.jobs)
    n = len(datasets)
    A = np.eye(n)
    for p in rep.pairs:
        A[p.i, p.j] = A[p.j, p.i] = p.A
    config = _config(args, rep.spec, sched)
    payload = {
        "config": config,
        "names": rep.matrix.names,
        "A": A.tolist(),
        "distance": rep.matrix.values.tolist(),
        "pairs": [p.to_dict() for p in rep.pairs],
        "all_converged": rep.all_converged,
    }
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "distances.csv").write_text(rep.matrix.to_csv(), encoding="utf-8")
    _emit(payload, args.out, "metric.json")
    return EXIT_OK if rep.all_converged else EXIT_NONCONV


def cmd_oracle(args) -> int:
    if args.kind == "rotation":
        z, w = _complex(args.z), _complex(args.w)
        if args.order == 1:
            rel = parse_angle(args.relative_angle)
            value = analytic_A1(args.alpha_mod, args.beta_mod, rel, z, w)
            result = {"A1": value}
        else:
            a, b = parse_angle(args.alpha_angle), parse_angle(args.beta_angle)
            br = analytic_A2_exact_branches(args.alpha_mod, a, args.beta_mod, b, z, w)
            result = {"A2": br.to_dict()}
            if args.alpha_mod == 1.0 and args.beta_mod == 1.0:
                m_ = mu(a, b)
                result["mu"] = "inf" if math.isinf(m_) else m_
    elif args.kind == "ar":
        c1, c2 = ARModel(tuple(_floats(args.coeffs1))), ARModel(tuple(_floats(args.coeffs2)))
        r1 = poly_roots(np.concatenate([[1.0], -np.array(c1.coeffs)]))
        r2 = poly_roots(np.concatenate([[1.0], -np.array(c2.coeffs)]))
        result = {
            "Aq": ar_closed_form_Aq(r1, r2, args.unit_tol),
            "roots1": [complex(r) for r in r1],
            "roots2": [complex(r) for r in r2],
        }
    else:
        S1 = LinearSystem(_matrix(args.A1), _matrix(args.C1))
        S2 = LinearSystem(_matrix(args.A2), _matrix(args.C2))
        d, cos2 = subspace_angle_distance(S1, S2)
        result = {"distance": d, "cos2": cos2.tolist(), "prod_cos2": float(np.prod(cos2))}
    payload = {"config": _config(args), "result": result}
    _emit(payload, args.out, "oracle.json")
    return EXIT_OK


def cmd_classify(args) -> int:
    records = load_ucr(args.ucr_path)
    shifts = _ints(args.shifts) if args.shifts else list(range(args.m))
    datasets = []
    for i, (label, series) in enumerate(records):
        try:
            datasets.append(time_delay_embed(series, args.dim, args.lag, shifts, label, f"row{i + 1}"))
        except ValueError as exc:
            raise UsageError(f"record {i + 1}: {exc}") from None
    lengths = {d.length for d in datasets}
    sched = _schedule(args, min(lengths))
    rep = distance_matrix(datasets, args.m, sched, _kernel(args), args.pairing, args.jobs)
    cv = cross_validate(rep.matrix, folds=args.folds, trials=args.trials, seed=args.seed, k=args.k)
    payload = {
        "config": _config(args, rep.spec, sched, shifts=shifts),
        "n_series": len(datasets),
        "classes": sorted(set(rep.matrix.labels)),
        "cv": cv.to_dict(),
        "all_converged": rep.all_converged,
        "pairs_not_converged": [[p.i, p.j] for p in rep.pairs if not p.converged],
    }
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "distances.csv").write_text(rep.matrix.to_csv(), encoding="utf-8")
    _emit(payload, args.out, "classify.json")
    return EXIT_OK


def _config(args, spec: Optional[KernelSpec] = None, sched=None, **extra) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "bandwidth")}
    if spec is not None:
        cfg["kernel"] = spec.to_dict()
    if sched is not None:
        cfg["schedule"] = sched.to_dict()
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dsmetric", description="Kernel angles between dynamical systems from trajectory data.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write a synthetic trajectory file")
    s.add_argument("kind", choices=("rotation", "ar", "linear"))
    s.add_argument("--T", type=int, required=True)
    s.add_argument("--out", required=True, help="output trajectory CSV")
    s.add_argument("--modulus", type=float, default=1.0)
    s.add_argument("--theta", default="0", help="rotation angle in turns, e.g. 1/3, golden, pi/3")
    s.add_argument("--z0", default="0.9")
    s.add_argument("--shifts", default="0")
    s.add_argument("--coeffs", default="0.5")
    s.add_argument("--init", default=None, help="AR seed values y_0,...,y_{q-1}")
    s.add_argument("--A", default="[[1]]")
    s.add_argument("--C", default=None)
    s.add_argument("--x0", default=None, help="initial states as rows, e.g. [[1, 0], [0, 1]]")
    s.set_defaults(func=cmd_synth)

    m = sub.add_parser("metric", help="angles and distances between trajectory files")
    m.add_argument("inputs", nargs="+")
    _add_metric_flags(m)
    m.set_defaults(func=cmd_metric)

    o = sub.add_parser("oracle", help="closed-form reference values")
    o.add_argument("kind", choices=("rotation", "ar", "subspace"))
    o.add_argument("--order", type=int, choices=(1, 2), default=1)
    o.add_argument("--alpha-mod", type=float, default=1.0)
    o.add_argument("--beta-mod", type=float, default=1.0)
    o.add_argument("--relative-angle", default="0")
    o.add_argument("--alpha-angle", default="0")
    o.add_argument("--beta-angle", default="0")
    o.add_argument("--z", default="0.9")
    o.add_argument("--w", default="0.9")
    o.add_argument("--coeffs1", default="0.5")
    o.add_argument("--coeffs2", default="0.5")
    o.add_argument("--unit-tol", type=float, default=1e-9)
    o.add_argument("--A1", default="[[0.5]]")
    o.add_argument("--C1", default="[[1]]")
    o.add_argument("--A2", default="[[0.5]]")
    o.add_argument("--C2", default="[[1]]")
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("classify", help="k-NN cross-validation on a UCR-format file")
    c.add_argument("ucr_path")
    _add_metric_flags(c, default_kernel="gaussian", default_m=2)
    c.add_argument("--dim", type=int, default=2)
    c.add_argument("--lag", type=int, default=1)
    c.add_argument("--shifts", default=None, help="delay-embedding start offsets (default 0..m-1)")
    c.add_argument("--k", type=int, default=3)
    c.add_argument("--folds", type=int, default=10)
    c.add_argument("--trials", type=int, default=10)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_classify)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("DSMETRIC_LOG", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"dsmetric: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (UsageError, DSMetricError, ValueError, OSError, OverflowError, ArithmeticError) as exc:
        print(f"dsmetric: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
