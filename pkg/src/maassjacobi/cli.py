"""Command-line front end: ``maassjacobi verify|apply-op|bessel|curvature|fourier``."""

from __future__ import annotations

import argparse
import ast
import json
import math
import sys

import numpy as np

from . import __version__
from . import fourier as fo
from . import group as grp
from . import jets
from . import metrics as mt
from . import operators as ops
from . import special as sp
from .verify import SUITES, ConfigError, RunConfig, run_suite, suite_rng

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_EXPR_FUNCS = {
    "exp": jets.exp,
    "log": jets.log,
    "sqrt": jets.sqrt,
    "sin": jets.sin,
    "cos": jets.cos,
    "sinh": jets.sinh,
    "cosh": jets.cosh,
}
_EXPR_CONSTS = {"pi": math.pi, "e": math.e, "i": 1j, "j": 1j}
_EXPR_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
)


def parse_complex(text: str) -> complex:
    """``"RE"`` or ``"RE,IM"``."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise ConfigError(f"expected RE or RE,IM, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad number in {text!r}") from exc
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_point(text: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad point {text!r}") from exc


def parse_expression(text: str, names: tuple):
    """Compile an arithmetic expression in the chart coordinates into a jet-aware function."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}") from exc
    allowed = set(_EXPR_FUNCS) | set(_EXPR_CONSTS) | set(names)
    for node in ast.walk(tree):
        if not isinstance(node, _EXPR_NODES):
            raise ConfigError(f"unsupported syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Name) and node.id not in allowed:
            raise ConfigError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _EXPR_FUNCS):
            raise ConfigError(f"only {sorted(_EXPR_FUNCS)} may be called")
    code = compile(tree, "<expr>", "eval")

    def f(*coords):
        env = dict(_EXPR_FUNCS, **_EXPR_CONSTS, **dict(zip(names, coords)))
        return eval(code, {"__builtins__": {}}, env)

    return f


CHART_NAMES = {"HC": ("x", "y", "u", "v"), "PV": ("x", "y", "v1", "v2"), "G1": ("x", "y", "theta"), "G": ("x", "y", "theta", "a1", "a2")}


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"tolerance override must be key=value, got {item!r}")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"tolerance override {item!r} is not a number") from exc
    return out


def build_config(args) -> RunConfig:
    base: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(base) - {"suite", "samples", "seed", "tol_overrides", "jet_order_cap", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
    merged = dict(base)
    for key in ("suite", "samples", "seed", "jet_order_cap", "out"):
        val = getattr(args, key)
        if val is not None:
            merged[key] = val
    tol = dict(merged.get("tol_overrides", {}))
    tol.update(_parse_overrides(args.tol_override))
    merged["tol_overrides"] = tol
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_verify(args) -> int:
    cfg = build_config(args)
    report = run_suite(cfg)
    text = report.dumps()
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write report to {cfg.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    for c in report.failures():
        print(f"FAIL {c.id}: residual {c.max_residual:.3e} > tolerance {c.tolerance:.3e}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _emit(obj) -> None:
    def enc(v):
        if isinstance(v, complex):
            return [v.real, v.imag]
        if isinstance(v, (np.floating, np.integer)):
            return v.item()
        raise TypeError(type(v))

    sys.stdout.write(json.dumps(obj, default=enc, indent=2) + "\n")


def cmd_apply_op(args) -> int:
    try:
        op = ops.operator(args.op)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    point = parse_point(args.point)
    if len(point) != ops.CHART_DIM[op.chart]:
        raise ConfigError(f"operator {op.name} lives on chart {op.chart} and needs {ops.CHART_DIM[op.chart]} coordinates")
    if args.fn in sp.CATALOG_IDS:
        if op.chart != "HC":
            raise ConfigError("catalog functions live on H x C")
        entry = sp.catalog(args.fn, s=parse_complex(args.s), a=args.a, n=args.n)
        f, lam = entry.function, entry.eigenvalue
    else:
        f, lam = parse_expression(args.fn, CHART_NAMES[op.chart]), None
    try:
        val = complex(ops.apply(op, f, point))
        fval = complex(jets.value(f(*point)))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    out = {"op": op.name, "anchor": op.anchor, "point": point, "value": val, "f": fval}
    if lam is not None:
        out["eigenvalue"] = complex(lam)
        out["eigen_residual"] = abs(val - lam * fval) / (1 + abs(lam * fval))
    _emit(out)
    return EXIT_PASS


def cmd_bessel(args) -> int:
    s, z = parse_complex(args.s), parse_complex(args.z)
    try:
        res = sp.bessel_K_quad(s, z, args.deriv, args.rtol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    ok = bool(res.rel_error.max() <= args.rtol)
    _emit({
        "s": s,
        "z": z,
        "values": [complex(v) for v in res.values],
        "rel_error": [float(e) for e in res.rel_error],
        "eta": res.eta,
        "nodes": res.nodes,
        "converged": ok,
    })
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_curvature(args) -> int:
    if args.points < 1:
        raise ConfigError("--points must be >= 1")
    try:
        m = mt.metric_by_name(args.metric)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    rng = suite_rng(args.seed, "curvature-cli")
    rows = []
    for _ in range(args.points):
        if m.chart == "H2":
            p = (rng.uniform(-5, 5), rng.uniform(0.2, 5))
        elif m.chart == "G1":
            p = (rng.uniform(-5, 5), rng.uniform(0.2, 5), rng.uniform(0, grp.TWO_PI))
        else:
            p = tuple(grp.random_point_hc(rng).as_tuple())
        r = mt.scalar_curvature(m, p)
        rows.append({"point": list(r.point), "scalar_curvature": r.scalar_curvature})
    vals = [r["scalar_curvature"] for r in rows]
    _emit({"metric": m.name, "points": rows, "min": min(vals), "max": max(vals)})
    return EXIT_PASS


def cmd_fourier(args) -> int:
    s = parse_complex(args.s)
    if args.n == 0:
        raise ConfigError("--n must be nonzero for the Whittaker coefficient")
    lam = s * (s - 1)
    F = fo.whittaker_coefficient(s, args.n)
    entry = sp.catalog("whittaker_fourier", s=s, n=args.n)
    rows = []
    for y in np.linspace(args.y_min, args.y_max, args.points):
        res = abs(fo.pde_residual_6_4(F, args.n, args.r, lam, y, 0.0))
        scale = fo.pde_scale(F, args.n, args.r, lam, y, 0.0)
        table = fo.fourier_coefficients(entry.function, abs(args.n), abs(args.r), y, 0.0)
        rows.append({"y": float(y), "pde_residual": res / scale, "coefficient": table.coefficient(args.n, args.r), "parseval": table.parseval_residual})
    _emit({"n": args.n, "r": args.r, "s": s, "lambda": lam, "rows": rows, "max_pde_residual": max(r["pde_residual"] for r in rows)})
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maassjacobi", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and emit a JSON report")
    v.add_argument("--suite", choices=["all", *SUITES], default=None)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--tol-override", action="append", metavar="KEY=VAL")
    v.add_argument("--jet-order-cap", type=int, default=None)
    v.add_argument("--out", default=None)
    v.add_argument("--config", default=None, help="JSON file with the same keys; flags win")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("apply-op", help="apply an operator to a catalog entry or an expression")
    a.add_argument("--op", required=True, help="D, Psi, D1, D2, Delta, DeltaTilde, Delta0, L1..R5, ScriptL1..5")
    a.add_argument("--fn", required=True, help="catalog id or expression in the chart coordinates")
    a.add_argument("--point", required=True)
    a.add_argument("--s", default="0.5", help="catalog parameter s as RE[,IM]")
    a.add_argument("--a", type=float, default=1.0)
    a.add_argument("--n", type=int, default=1)
    a.set_defaults(func=cmd_apply_op)

    b = sub.add_parser("bessel", help="evaluate K_s(z) and its z-derivatives")
    b.add_argument("--s", required=True)
    b.add_argument("--z", required=True)
    b.add_argument("--deriv", type=int, default=0)
    b.add_argument("--rtol", type=float, default=sp.DEFAULT_RTOL)
    b.set_defaults(func=cmd_bessel)

    c = sub.add_parser("curvature", help="scalar curvature at random points")
    c.add_argument("--points", type=int, default=20)
    c.add_argument("--metric", default="ds2")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_curvature)

    f = sub.add_parser("fourier", help="Whittaker coefficient: PDE residual and extracted coefficients")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--r", type=int, default=0)
    f.add_argument("--s", required=True)
    f.add_argument("--points", type=int, default=8)
    f.add_argument("--y-min", type=float, default=0.3)
    f.add_argument("--y-max", type=float, default=4.0)
    f.set_defaults(func=cmd_fourier)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
