"""Command-line front end.

Problem specs are JSON objects, given inline (leading ``{``) or as a file path::

    {"dim": 2, "cov": [[4, 0], [0, 1]], "norm": "rv"}

Optional keys: ``mean`` (zeros), ``norm`` (rv|tv), ``mode`` (first-order|exact,
TV only), ``units`` (nats|bits). Output is JSON on stdout, except ``sweep``,
which writes CSV. Errors go to stderr as one JSON line; exit status is 1 for
invalid input and 2 for numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .dimension import DimMethod, Norm, capacity_dimension, entropy_sweep, geometric_grid
from .errors import (
    EntropyError,
    NonpositiveEps,
    NumericalError,
    SpecParseError,
    SweepRowFailed,
    UnknownSubcommand,
    UnsupportedDimension,
    ValidationError,
)
from .gaussian_core import GaussianChannel, GaussianMeasure, make_channel, make_measure, mutual_entropy
from .kolmogorov import optimal_test_channel, s_k_rv_detail, s_k_tv
from .metrics import tv_branch, tv_exact, tv_first_order
from .ohya import JMode, ohya_tv, s_o_rv
from .oracle import brute_force_j, brute_force_sk, oracle_tv

CSV_COLUMNS = ("eps", "entropy_nats", "norm", "extra1_name", "extra1_value")
LN2 = math.log(2.0)


@dataclass(frozen=True)
class ProblemSpec:
    dim: int
    cov: list
    mean: list
    norm: Norm
    mode: JMode
    units: str

    def measure(self) -> GaussianMeasure:
        return make_measure(self.mean, self.cov)


def _load_json(text: str, what: str):
    text = text.strip()
    if not text.startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise SpecParseError(f"{what}: cannot read file {text!r}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{what}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise SpecParseError(f"{what}: expected a JSON object")
    return obj


def _matrix(value, dim: int, field: str) -> list:
    try:
        flat = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"field '{field}' must be a numeric {dim}x{dim} matrix") from exc
    shape = flat.shape
    if flat.ndim == 1 and flat.size == dim * dim:
        flat = flat.reshape(dim, dim)
    elif flat.ndim == 0 and dim == 1:
        flat = flat.reshape(1, 1)
    if flat.shape != (dim, dim):
        raise SpecParseError(f"field '{field}' must be a {dim}x{dim} matrix, got shape {shape}")
    return flat.tolist()


def parse_spec(text: str) -> ProblemSpec:
    obj = _load_json(text, "spec")
    if "dim" not in obj:
        raise SpecParseError("field 'dim' is required")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecParseError("field 'dim' must be a positive integer")
    if "cov" not in obj:
        raise SpecParseError("field 'cov' is required")
    cov = _matrix(obj["cov"], dim, "cov")
    mean = obj.get("mean", [0.0] * dim)
    try:
        mean = [float(m) for m in np.atleast_1d(np.asarray(mean, dtype=float))]
    except (TypeError, ValueError) as exc:
        raise SpecParseError("field 'mean' must be a numeric vector") from exc
    if len(mean) != dim:
        raise SpecParseError(f"field 'mean' must have length {dim}")
    try:
        norm = Norm(obj.get("norm", "rv"))
    except ValueError as exc:
        raise SpecParseError("field 'norm' must be 'rv' or 'tv'") from exc
    try:
        mode = JMode(obj.get("mode", "first-order"))
    except ValueError as exc:
        raise SpecParseError("field 'mode' must be 'first-order' or 'exact'") from exc
    units = obj.get("units", "nats")
    if units not in ("nats", "bits"):
        raise SpecParseError("field 'units' must be 'nats' or 'bits'")
    if norm is Norm.TV and dim != 1:
        raise SpecParseError("field 'norm': 'tv' requires dim = 1")
    return ProblemSpec(dim, cov, mean, norm, mode, units)


def parse_channel(text: str, dim: int) -> GaussianChannel:
    obj = _load_json(text, "channel")
    if "beta" in obj or "noise_var" in obj:
        if dim != 1:
            raise SpecParseError("channel fields 'beta'/'noise_var' need dim = 1")
        try:
            return make_channel([[float(obj["beta"])]], [[float(obj["noise_var"])]])
        except KeyError as exc:
            raise SpecParseError(f"channel field '{exc.args[0]}' is required") from exc
    for key in ("a", "r0"):
        if key not in obj:
            raise SpecParseError(f"channel field '{key}' is required")
    return make_channel(_matrix(obj["a"], dim, "a"), _matrix(obj["r0"], dim, "r0"))


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _units(spec_units: str, flag: Optional[str]) -> str:
    return flag or spec_units


def _conv(x, units: str):
    if x is None:
        return None
    return _num(x / LN2 if units == "bits" else x)


def _channel_json(ch: GaussianChannel) -> dict:
    return {"a": ch.a.tolist(), "r0": ch.r0.tolist()}


def cmd_kolmogorov(args) -> dict:
    spec = parse_spec(args.spec)
    mu = spec.measure()
    units = _units(spec.units, args.units)
    if args.eps == 0.0 and args.allow_zero:
        return {"eps": 0.0, "entropy": "+inf", "theta2": 0.0, "allocations": None,
                "witness": None, "norm": spec.norm.value, "units": units}
    if spec.norm is Norm.TV:
        value, witness = s_k_tv(float(mu.cov[0, 0]), args.eps)
        return {"eps": args.eps, "entropy": _conv(value, units), "theta2": None,
                "allocations": None, "witness": _channel_json(witness),
                "norm": spec.norm.value, "units": units}
    wf = s_k_rv_detail(mu, args.eps)
    return {
        "eps": args.eps,
        "entropy": _conv(wf.entropy_nats, units),
        "theta2": wf.theta2,
        "allocations": list(wf.allocations),
        "witness": _channel_json(optimal_test_channel(mu, args.eps)),
        "norm": spec.norm.value,
        "units": units,
    }


def cmd_ohya(args) -> dict:
    spec = parse_spec(args.spec)
    mu = spec.measure()
    units = _units(spec.units, args.units)
    mode = JMode(args.mode) if args.mode else spec.mode
    if spec.norm is Norm.TV:
        res = ohya_tv(float(mu.cov[0, 0]), args.eps, mode)
        entropy, branch_var, clamped = res.entropy_nats, res.branch_variance, res.clamped
    else:
        entropy, branch_var, clamped = s_o_rv(mu, args.eps), None, False
    return {"eps": args.eps, "entropy": _conv(entropy, units), "branch_variance": _num(branch_var),
            "clamped": clamped, "norm": spec.norm.value, "mode": mode.value, "units": units}


def cmd_mutual(args) -> dict:
    spec = parse_spec(args.spec)
    units = _units(spec.units, args.units)
    ch = parse_channel(args.channel, spec.dim)
    return {"mutual_entropy": _conv(mutual_entropy(spec.measure(), ch), units), "units": units}


def cmd_tv(args) -> dict:
    if args.method == "exact":
        value = tv_exact(args.sigma2, args.out_var)
    elif args.method == "first-order":
        value = tv_first_order(args.sigma2, args.out_var)
    else:
        value = oracle_tv(args.sigma2, args.out_var, args.n_points).oracle_value
    return {"tv": value, "method": args.method,
            "branch": tv_branch(args.sigma2, args.out_var).value}


def _sweep_rows(args):
    spec = parse_spec(args.spec)
    mode = JMode(args.mode) if args.mode else spec.mode
    grid = geometric_grid(args.eps_max, args.eps_min, args.points)
    return spec, entropy_sweep(spec.measure(), grid, spec.norm, mode, workers=args.workers)


def cmd_dimension(args) -> dict:
    spec, rows = _sweep_rows(args)
    units = _units(spec.units, args.units)
    est = capacity_dimension(rows, DimMethod(args.method))
    return {
        "dimension": est.slope,
        "stderr": est.stderr,
        "points_used": est.points_used,
        "method": est.method.value,
        "norm": spec.norm.value,
        "units": units,
        "rows": [{"eps": r.eps, "entropy": _conv(r.entropy_nats, units)} for r in rows],
    }


def write_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        extra = "" if r.extra_value is None else "%.17g" % r.extra_value
        writer.writerow(["%.17g" % r.eps, "%.17g" % r.entropy_nats, r.norm.value, r.extra_name, extra])


def cmd_sweep(args) -> Optional[dict]:
    _, rows = _sweep_rows(args)
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    return None


def cmd_oracle(args) -> dict:
    if args.which == "sk":
        spec = parse_spec(args.spec)
        if spec.norm is not Norm.RV:
            raise UnsupportedDimension("the S_K oracle applies to the rv norm")
        report = brute_force_sk(spec.measure(), args.eps, args.resolution)
    elif args.which == "j":
        report = brute_force_j(args.sigma2, args.c_delta, args.delta, args.resolution)
    else:
        report = oracle_tv(args.sigma2, args.out_var, args.n_points)
    return report.as_dict()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownSubcommand(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="epsentropy", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def units(sp):
        sp.add_argument("--units", choices=["nats", "bits"], default=None,
                        help="output units (default: spec 'units', else nats)")

    k = sub.add_parser("kolmogorov", help="Kolmogorov epsilon-entropy")
    k.add_argument("--spec", required=True)
    k.add_argument("--eps", type=float, required=True)
    k.add_argument("--allow-zero", action="store_true", help="report +inf at eps = 0 instead of failing")
    units(k)
    k.set_defaults(func=cmd_kolmogorov)

    o = sub.add_parser("ohya", help="Ohya epsilon-entropy")
    o.add_argument("--spec", required=True)
    o.add_argument("--eps", type=float, required=True)
    o.add_argument("--mode", choices=[m.value for m in JMode], default=None)
    units(o)
    o.set_defaults(func=cmd_ohya)

    m = sub.add_parser("mutual", help="mutual entropy of a state and a channel")
    m.add_argument("--spec", required=True)
    m.add_argument("--channel", required=True)
    units(m)
    m.set_defaults(func=cmd_mutual)

    t = sub.add_parser("tv", help="TV (L1) distance between N(0, sigma2) and N(0, out_var)")
    t.add_argument("--sigma2", type=float, required=True)
    t.add_argument("--out-var", type=float, required=True)
    t.add_argument("--method", choices=["exact", "first-order", "quadrature"], default="exact")
    t.add_argument("--n-points", type=int, default=1000)
    t.set_defaults(func=cmd_tv)

    sweeps = (
        ("dimension", cmd_dimension, "capacity dimension from an entropy sweep"),
        ("sweep", cmd_sweep, "entropy over a geometric eps grid, as CSV"),
    )
    for name, func, text in sweeps:
        d = sub.add_parser(name, help=text)
        d.add_argument("--spec", required=True)
        d.add_argument("--eps-min", type=float, default=1e-4)
        d.add_argument("--eps-max", type=float, default=1e-1)
        d.add_argument("--points", type=int, default=8)
        d.add_argument("--mode", choices=[m.value for m in JMode], default=None)
        d.add_argument("--workers", type=int, default=None)
        if name == "dimension":
            d.add_argument("--method", choices=[x.value for x in DimMethod], default="regression")
            units(d)
        else:
            d.add_argument("--out", required=True, help="CSV path, or - for stdout")
        d.set_defaults(func=func)

    orc = sub.add_parser("oracle", help="brute-force checks")
    osub = orc.add_subparsers(dest="which", parser_class=_Parser, required=True)
    sk = osub.add_parser("sk", help="grid search for S_K (n <= 2)")
    sk.add_argument("--spec", required=True)
    sk.add_argument("--eps", type=float, required=True)
    sk.add_argument("--resolution", type=int, default=400)
    j = osub.add_parser("j", help="scan for the TV-norm J")
    j.add_argument("--sigma2", type=float, required=True)
    j.add_argument("--c-delta", type=float, required=True)
    j.add_argument("--delta", type=float, required=True)
    j.add_argument("--resolution", type=int, default=400)
    tv = osub.add_parser("tv", help="Simpson quadrature of the TV distance")
    tv.add_argument("--sigma2", type=float, required=True)
    tv.add_argument("--out-var", type=float, required=True)
    tv.add_argument("--n-points", type=int, default=1000)
    orc.set_defaults(func=cmd_oracle)
    return p


def _fail(exc: BaseException, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SweepRowFailed):
        payload["eps"] = exc.eps
        payload["cause"] = type(exc.cause).__name__
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "eps", None) is not None and args.eps == 0.0 and not getattr(args, "allow_zero", False):
            raise NonpositiveEps("eps must be positive (entropy diverges at eps = 0)")
        out = args.func(args)
    except SweepRowFailed as exc:
        return _fail(exc, 2 if isinstance(exc.cause, NumericalError) else 1)
    except ValidationError as exc:
        return _fail(exc, 1)
    except (NumericalError, EntropyError) as exc:
        return _fail(exc, 2)
    if out is not None:
        sys.stdout.write(json.dumps(out, allow_nan=False) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
