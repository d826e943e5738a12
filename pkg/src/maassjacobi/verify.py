"""Verification suites, report records and the Maass-Jacobi condition runner."""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import __version__
from . import fourier as fo
from . import group as grp
from . import jets
from . import metrics as mt
from . import operators as ops
from . import special as sp

JET_ORDER_MAX = 4


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    suite: str = "all"
    samples: int = 20
    seed: int = 0
    tol_overrides: dict = field(default_factory=dict)
    jet_order_cap: int = JET_ORDER_MAX
    out: str | None = None

    def __post_init__(self):
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError(f"samples must be an integer >= 1, got {self.samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.jet_order_cap not in (1, 2, 3, 4):
            raise ConfigError(f"jet order cap must be in 1..4, got {self.jet_order_cap!r}")
        for k, v in self.tol_overrides.items():
            if not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"tolerance override {k}={v!r} must be a positive number")
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")

    def echo(self) -> dict:
        d = asdict(self)
        d["tol_overrides"] = dict(sorted(self.tol_overrides.items()))
        return d


@dataclass(frozen=True)
class CheckRecord:
    id: str
    anchor: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "samples": self.samples,
            "max_residual": _finite(self.max_residual),
            "tolerance": _finite(self.tolerance),
            "pass": bool(self.passed),
        }


def _finite(x: float):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.id)
        return {
            "version": self.version,
            "config": self.config,
            "checks": [c.to_json() for c in checks],
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    """Counter-based Philox stream for one suite, independent of run order."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(suite.encode()),))
    return np.random.Generator(np.random.Philox(ss))


class _Checks:
    def __init__(self, suite: str, cfg: RunConfig):
        self.suite = suite
        self.cfg = cfg
        self.records: list[CheckRecord] = []

    def tol(self, key: str, default: float) -> float:
        for k in (f"{self.suite}.{key}", key, self.suite):
            if k in self.cfg.tol_overrides:
                return float(self.cfg.tol_overrides[k])
        return default

    def add(self, key: str, anchor: str, samples: int, residual: float, tolerance: float):
        residual = float(residual)
        ok = residual <= tolerance
        self.records.append(CheckRecord(f"{self.suite}.{key}", anchor, int(samples), residual, tolerance, bool(ok)))


def _rand_point_pv(rng) -> grp.PointPV:
    return grp.PointPV(rng.uniform(-5, 5), rng.uniform(0.2, 5), rng.uniform(-5, 5), rng.uniform(-5, 5))


def _rand_g1(rng) -> tuple:
    return (rng.uniform(-5, 5), rng.uniform(0.2, 5), rng.uniform(0, grp.TWO_PI))


def _rand_gcoord(rng) -> grp.GCoord:
    return grp.GCoord(rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(0, grp.TWO_PI), rng.uniform(-3, 3), rng.uniform(-3, 3))


# the relations of the standard bracket table, as printed for W_1..W_5
BRACKET_TABLE = (
    ((1, 2), {3: 1}),
    ((3, 1), {1: 2}),
    ((3, 2), {2: -2}),
    ((1, 4), {}),
    ((1, 5), {4: -1}),
    ((2, 4), {5: 1}),
    ((2, 5), {}),
    ((3, 4), {4: 1}),
    ((3, 5), {5: -1}),
    ((4, 5), {}),
)


def bracket_table_mismatches() -> list:
    """``(i, j, expected, computed)`` for every table entry, in table order."""
    out = []
    for (i, j), coeffs in BRACKET_TABLE:
        expected = np.zeros(5)
        for k, c in coeffs.items():
            expected[k - 1] = c
        computed = grp.lie_bracket(grp.W[i], grp.W[j]).to_vector()
        out.append((i, j, expected, computed))
    return out


def _fmt_relation(i, j, coeffs) -> str:
    rhs = " + ".join({1: "", -1: "-"}.get(c, f"{c:g}") + f"W_{k}" for k, c in coeffs.items()) or "0"
    return f"[W_{i}, W_{j}] = {rhs}"


# suites -------------------------------------------------------------------


def suite_group(c: _Checks, rng):
    n = c.cfg.samples
    assoc = ident = inv = act = actpv = equiv = adh = adk = 0.0
    for _ in range(n):
        a, b, d = (grp.random_group_element(rng) for _ in range(3))
        lhs = (a * b) * d
        rhs = a * (b * d)
        assoc = max(assoc, np.abs(lhs.g - rhs.g).max(), np.abs(lhs.alpha - rhs.alpha).max())
        e = grp.GroupElement.identity()
        ident = max(ident, np.abs((e * a).g - a.g).max(), np.abs((a * e).alpha - a.alpha).max())
        ai = a * grp.inverse(a)
        inv = max(inv, np.abs(ai.g - np.eye(2)).max(), np.abs(ai.alpha).max())
        p = grp.random_point_hc(rng)
        act = max(act, np.abs(np.subtract(grp.act_hc(a * b, p).as_tuple(), grp.act_hc(a, grp.act_hc(b, p)).as_tuple())).max())
        q = _rand_point_pv(rng)
        actpv = max(actpv, np.abs(np.subtract(grp.act_pv(a * b, q).as_tuple(), grp.act_pv(a, grp.act_pv(b, q)).as_tuple())).max())
        equiv = max(equiv, np.abs(np.subtract(grp.map_T(grp.act_pv(a, q)).as_tuple(), grp.act_hc(a, grp.map_T(q)).as_tuple())).max())
        u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
        adh = max(adh, (grp.adjoint(a, grp.lie_bracket(u, w)) - grp.lie_bracket(grp.adjoint(a, u), grp.adjoint(a, w))).norm())
        adk = max(adk, abs(grp.killing_form(grp.adjoint(a, u), grp.adjoint(a, w)) - grp.killing_form(u, w)))
    c.add("associativity", "(g, a) * (h, b) = (gh, a h^{-T} + b)", n, assoc, c.tol("associativity", 1e-12))
    c.add("identity", "(E, 0) * b = b", n, ident, c.tol("identity", 1e-12))
    c.add("inverse", "(g, a)^{-1} = (g^{-1}, -a g^T)", n, inv, c.tol("inverse", 1e-12))
    c.add("action-law-hc", "(g, a) o (tau, z) = ((d tau - c)/(-b tau + a), (z + a1 tau + a2)/(-b tau + a))", n, act, c.tol("action-law-hc", 1e-10))
    c.add("action-law-pv", "(g, a) . (Y, V) = (g Y g^T, (V + a) g^T)", n, actpv, c.tol("action-law-pv", 1e-10))
    c.add("T-equivariance", "T(Y, V) = (x + iy, v1 (x + iy) + v2)", n, equiv, c.tol("T-equivariance", 1e-10))
    c.add("adjoint-homomorphism", "Ad((g, a))(X, Z) = (g X g^{-1}, (Z - a X^T) g^T)", n, adh, c.tol("adjoint-homomorphism", 1e-10))
    c.add("adjoint-killing", "B(Ad u, Ad w) = B(u, w)", n, adk, c.tol("adjoint-killing", 1e-10))
    # section and Iwasawa round trips
    sec = iw = 0.0
    for _ in range(n):
        q = _rand_point_pv(rng)
        s = grp.section_gY(q)
        sec = max(sec, np.abs(s.g @ s.g.T - q.Y).max(), np.abs(np.subtract(grp.act_hc(s, grp.ORIGIN_HC).as_tuple(), grp.map_T(q).as_tuple())).max())
        a = grp.random_group_element(rng)
        iw = max(iw, np.abs(grp.from_gcoord(grp.iwasawa(a)).g - a.g).max())
    c.add("section", "T(Y, V) = (g_Y, V g_Y^{-T}) o (i, 0)", n, sec, c.tol("section", 1e-12))
    c.add("iwasawa", "g = n(x) a(y) k(theta)", n, iw, c.tol("iwasawa", 1e-12))


def suite_bracket_table(c: _Checks, rng):
    for (i, j, expected, computed), (_, coeffs) in zip(bracket_table_mismatches(), BRACKET_TABLE):
        c.add(f"[W{i},W{j}]", _fmt_relation(i, j, coeffs), 1, float(np.abs(expected - computed).max()), c.tol(f"[W{i},W{j}]", 0.0))
    jac = 0.0
    for i in range(1, 6):
        for j in range(1, 6):
            for k in range(1, 6):
                a, b, d = grp.W[i], grp.W[j], grp.W[k]
                t = grp.lie_bracket(a, grp.lie_bracket(b, d)) + grp.lie_bracket(b, grp.lie_bracket(d, a)) + grp.lie_bracket(d, grp.lie_bracket(a, b))
                jac = max(jac, t.norm())
    c.add("jacobi-identity", "[u, [v, w]] + [v, [w, u]] + [w, [u, v]] = 0", 125, jac, c.tol("jacobi-identity", 1e-12))


def suite_killing(c: _Checks, rng):
    n = c.cfg.samples
    worst_trace = worst_formula = 0.0
    for _ in range(n):
        u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
        b = grp.killing_form(u, w)
        worst_trace = max(worst_trace, abs(b - grp.trace_form(u, w)))
        worst_formula = max(worst_formula, abs(b - 5 * np.trace(u.X @ w.X)))
    c.add("trace-form", "B(u, w) = tr(ad u ad w)", n, worst_trace, c.tol("trace-form", 1e-12))
    c.add("formula", "B((X1, Z1), (X2, Z2)) = 5 tr(X1 X2)", n, worst_formula, c.tol("formula", 1e-12))
    ev = np.sort(np.linalg.eigvals(grp.ad_matrix(grp.W[3])).real)
    c.add("root-decomposition", "roots -2e, -e, 0, e, 2e on R W_3", 1, float(np.abs(ev - [-2, -1, 0, 1, 2]).max()), c.tol("root-decomposition", 1e-12))


def suite_exp(c: _Checks, rng):
    n = c.cfg.samples
    closed = oneparam = 0.0
    for _ in range(n):
        t = rng.uniform(-2, 2)
        for k in range(1, 6):
            e1 = grp.exp_lie(t * grp.W[k])
            e2 = grp.exp_basis(k, t)
            closed = max(closed, np.abs(e1.g - e2.g).max(), np.abs(e1.alpha - e2.alpha).max())
        u = grp.random_lie_element(rng)
        s_, t_ = rng.uniform(-1, 1, 2)
        lhs = grp.exp_lie((s_ + t_) * u)
        rhs = grp.exp_lie(s_ * u) * grp.exp_lie(t_ * u)
        oneparam = max(oneparam, np.abs(lhs.g - rhs.g).max(), np.abs(lhs.alpha - rhs.alpha).max())
    c.add("closed-forms", "exp tW_3 = (diag(e^t, e^-t), (0, 0))", n, closed, c.tol("closed-forms", 1e-12))
    c.add("one-parameter", "exp((s + t) u) = exp(su) * exp(tu)", n, oneparam, c.tol("one-parameter", 1e-10))


def suite_operators(c: _Checks, rng):
    n = c.cfg.samples
    corpus = list(ops.corpus_hc().values())
    samples = [(grp.random_group_element(rng), grp.random_point_hc(rng), corpus[i % len(corpus)]) for i in range(n)]
    worst_inv = 0.0
    for tag in ("D", "Psi", "D1", "D2", "Delta"):
        r = max(ops.verify_invariance(tag, f, [(a, p)]) for a, p, f in samples)
        worst_inv = max(worst_inv, r)
        c.add(f"invariance-{tag}", ops.ANCHORS[tag], n, r, c.tol(f"invariance-{tag}", 1e-8))
    for al, be in ((0.5, 2.0), (2.0, 0.5)):
        op = ops.operator("DeltaAlphaBeta", alpha=al, beta=be)
        r = max(ops.verify_invariance(op, f, [(a, p)]) for a, p, f in samples)
        c.add(f"invariance-{op.name}", ops.ANCHORS["DeltaAlphaBeta"], n, r, c.tol("invariance-DeltaAlphaBeta", 1e-8))
    control = max(ops.verify_invariance("dv", f, [(a, p)]) for a, p, f in samples)
    # pass when the invariant operators beat the control by five orders of magnitude
    c.add("control-separation", "control d_v: invariant residual / control residual", n, worst_inv / control if control > 0 else math.inf, c.tol("control-separation", 1e-5))
    comm = 0.0
    for a, p, f in samples:
        comm = max(comm, ops.commutator_check(f, p).residual)
    c.add("commutator", ops.ANCHORS["CommutatorRHS"], n, comm, c.tol("commutator", 1e-9))
    w = ops.commutator_check(lambda x, y, u, v: v * v, (0.3, 1.7, 0.2, -0.4))
    c.add("commutator-witness-v2", "[D, Psi] v^2 = -4y", 1, abs(w.lhs + 4 * 1.7) + abs(w.rhs + 4 * 1.7), c.tol("commutator-witness-v2", 1e-12))
    split = 0.0
    for a, p, f in samples:
        F = jets.jet_of(f, p.as_tuple(), 2)
        Dl, Dd, Ps = ops.operator("Delta")(F).value, ops.operator("D")(F).value, ops.operator("Psi")(F).value
        split = max(split, abs(Dl - Dd - Ps) / (1 + abs(Dl)))
    c.add("Delta=D+Psi", ops.ANCHORS["Delta"], n, split, c.tol("Delta=D+Psi", 1e-13))
    g1 = list(ops.corpus_g1().values())
    bi = 0.0
    for i in range(n):
        f = g1[i % len(g1)]
        p = _rand_g1(rng)
        for gam in (grp.GAMMA_GENERATORS["S"], grp.GAMMA_GENERATORS["T"]):
            bi = max(bi, ops.verify_invariance("Delta0", f, [(gam, p)]))
        bi = max(bi, ops.verify_invariance("Delta0", f, [(ops.right_k_action(rng.uniform(0, grp.TWO_PI)), p)]))
    c.add("Delta0-bi-invariance", ops.ANCHORS["Delta0"], n, bi, c.tol("Delta0-bi-invariance", 1e-8))
    corr = 0.0
    for i in range(n):
        corr = max(corr, ops.correspondence_residual(corpus[i % len(corpus)], _rand_point_pv(rng)))
    c.add("DeltaTilde-correspondence", ops.ANCHORS["DeltaTilde"], n, corr, c.tol("DeltaTilde-correspondence", 1e-8))


def suite_lie_derivatives(c: _Checks, rng):
    n = c.cfg.samples
    fg = list(ops.corpus_g().values())[0]
    fh = ops.corpus_hc()["gauss_cos"]
    for side in ("L", "R"):
        for k in range(1, 6):
            worst = 0.0
            op = ops.operator(side, k=k)
            for _ in range(n):
                p = _rand_gcoord(rng)
                worst = max(worst, abs(ops.lie_derivative(op, fg, p) - ops.lie_derivative_curve(side, k, fg, p)))
            c.add(f"{side}{k}", ops.ANCHORS[side], n, worst, c.tol(f"{side}{k}", 1e-8))
    for j in range(1, 6):
        worst = 0.0
        for _ in range(n):
            p = grp.random_point_hc(rng)
            worst = max(worst, abs(ops.script_L(j, fh, p) - ops.script_L_curve(j, fh, p)))
        c.add(f"ScriptL{j}", ops.ANCHORS["ScriptL"], n, worst, c.tol(f"ScriptL{j}", 1e-8))


def _catalog_points(rng, n):
    return [grp.PointHC(rng.uniform(-3, 3), rng.uniform(0.3, 4), rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(n)]


CATALOG_S = (0.5, 1.7, 2 + 3j)


def suite_catalog(c: _Checks, rng):
    n = c.cfg.samples
    pts = _catalog_points(rng, n)
    for s in CATALOG_S:
        for ident in sp.POLYNOMIAL_IDS + sp.HARMONIC_IDS + ("whittaker",):
            e = sp.catalog(ident, s=s, a=1.0)
            rep = ops.eigen_check("Delta", e.function, e.eigenvalue, pts)
            c.add(f"{ident}@s={s}", f"Delta f = lambda f, lambda = {e.eigenvalue}", rep.samples, rep.max_residual, c.tol(ident, e.tolerance))


def suite_metrics(c: _Checks, rng):
    n = c.cfg.samples
    det = 0.0
    for _ in range(n):
        p = grp.random_point_hc(rng)
        det = max(det, abs(np.linalg.det(mt.metric_eval(mt.DS2, p)) * p.y**6 - 1))
    c.add("det-ds2", "det (g_ij) = y^-6", n, det, c.tol("det-ds2", 1e-12))
    c.add("origin-identity", "ds2 at (i, 0) = identity", 1, float(np.abs(mt.metric_eval(mt.DS2, (0, 1, 0, 0)) - np.eye(4)).max()), c.tol("origin-identity", 1e-14))
    families = [mt.DS2, mt.DS2_TILDE, mt.DS0] + [mt.ds2_alpha_beta(a, b) for a in (0.5, 1.0, 2.0) for b in (0.5, 1.0, 2.0)]
    for m in families:
        worst = 0.0
        for _ in range(n):
            a = grp.random_group_element(rng)
            p = {"HC": lambda: grp.random_point_hc(rng).as_tuple(), "PV": lambda: _rand_point_pv(rng).as_tuple(), "G1": lambda: _rand_g1(rng)}[m.chart]()
            worst = max(worst, mt.pullback_residual(m, a, p))
        c.add(f"pullback-{m.name}", "J^T g(a.p) J = g(p)", n, worst, c.tol("pullback", 1e-9))
    ctrl = max(mt.pullback_residual(mt.DS2_PLUS_DV2, grp.random_group_element(rng), grp.random_point_hc(rng)) for _ in range(n))
    c.add("pullback-control-inverted", "control ds2 + dv2: 1 / residual", n, 1.0 / ctrl, c.tol("pullback-control-inverted", 1e3))
    iso = 0.0
    for _ in range(n):
        iso = max(iso, mt.isometry_check_T(_rand_point_pv(rng)))
    c.add("T-isometry", "T^* ds2 = ds2_tilde", n, iso, c.tol("T-isometry", 1e-10))
    form = 0.0
    for _ in range(n):
        q = _rand_point_pv(rng)
        dq = rng.uniform(-1, 1, 4)
        a = mt.matrix_metric_form(q, dq)
        b = mt.coordinate_form(mt.DS2_TILDE, q, dq)
        form = max(form, abs(a - b) / (1 + abs(b)))
    c.add("trace-form", "ds2_tilde = 1/2 tr(Y^-1 dY Y^-1 dY) + dV Y^-1 dV^T", n, form, c.tol("trace-form", 1e-10))


def suite_curvature(c: _Checks, rng):
    n = c.cfg.samples
    worst = 0.0
    for _ in range(n):
        worst = max(worst, abs(mt.scalar_curvature(mt.DS2, grp.random_point_hc(rng)).scalar_curvature + 3))
    c.add("ds2", "scalar curvature of (H x C, ds2) = -3", n, worst, c.tol("ds2", 1e-6))
    h2 = max(abs(mt.scalar_curvature(mt.HYPERBOLIC_PLANE, (rng.uniform(-5, 5), rng.uniform(0.2, 5))).scalar_curvature + 2) for _ in range(n))
    c.add("H2-control", "scalar curvature of (dx^2 + dy^2)/y^2 = -2", n, h2, c.tol("H2-control", 1e-8))


def suite_laplacian(c: _Checks, rng):
    n = c.cfg.samples
    corpus = list(ops.corpus_hc().values())
    g1 = list(ops.corpus_g1().values())
    pairs = [
        ("ds2", mt.DS2, ops.operator("Delta"), lambda: grp.random_point_hc(rng).as_tuple(), corpus),
        ("ds2_tilde", mt.DS2_TILDE, ops.operator("DeltaTilde"), lambda: _rand_point_pv(rng).as_tuple(), corpus),
        ("ds0", mt.DS0, ops.operator("Delta0"), lambda: _rand_g1(rng), g1),
    ]
    for a, b in ((0.5, 2.0), (2.0, 1.0), (1.0, 0.5)):
        pairs.append((f"ds2_ab({a:g},{b:g})", mt.ds2_alpha_beta(a, b), ops.operator("DeltaAlphaBeta", alpha=a, beta=b), lambda: grp.random_point_hc(rng).as_tuple(), corpus))
    for name, m, op, draw, fs in pairs:
        worst = 0.0
        for i in range(n):
            p = draw()
            f = fs[i % len(fs)]
            lb = mt.laplace_from_metric(m, f, p)
            cf = ops.apply(op, f, p)
            worst = max(worst, abs(lb - cf) / (1 + abs(cf)))
        c.add(f"laplace-{name}", op.anchor, n, worst, c.tol("laplace", 1e-8))


def half_integer_K(n: int, z) -> complex:
    """``K_{n+1/2}(z)`` from its terminating expansion; an oracle independent of quadrature."""
    z = complex(z)
    tot = sum(math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) * (2 * z) ** (-k) for k in range(n + 1))
    return complex(np.sqrt(np.pi / (2 * z)) * np.exp(-z) * tot)


def suite_bessel(c: _Checks, rng):
    ref = math.sqrt(math.pi / 2) * math.exp(-1)
    c.add("closed-form-K1/2(1)", "K_{1/2}(z) = sqrt(pi/(2z)) e^-z", 1, abs(sp.bessel_K(0.5, 1.0) - ref) / ref, c.tol("closed-form", 1e-10))
    n = c.cfg.samples
    sym = 0.0
    for _ in range(n):
        s = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        z = rng.uniform(0.1, 20)
        a, b = sp.bessel_K(s, z), sp.bessel_K(-s, z)
        sym = max(sym, abs(a - b) / abs(a))
    c.add("symmetry", "K_s = K_{-s}", n, sym, c.tol("symmetry", 1e-12))
    worst = 0.0
    for _ in range(n):
        m = int(rng.integers(0, 8))
        z = complex(rng.uniform(0.1, 20), rng.uniform(-5, 5))
        exact = half_integer_K(m, z)
        worst = max(worst, abs(sp.bessel_K(m + 0.5, z) - exact) / abs(exact))
    c.add("half-integer-orders", "K_{n+1/2}(z) = sqrt(pi/(2z)) e^-z sum_k (n+k)!/(k!(n-k)!) (2z)^-k", n, worst, c.tol("half-integer-orders", 1e-10))
    d = abs(sp.bessel_K_dz(0.5, 1.0) + 1.5 * ref) / (1.5 * ref)
    c.add("derivative-K1/2'(1)", "d/dz K_{1/2}(z) at 1 = -(3/2) sqrt(pi/2) e^-1", 1, d, c.tol("derivative", 1e-10))


def suite_fourier(c: _Checks, rng):
    worst = 0.0
    ys = np.linspace(0.3, 4.0, max(c.cfg.samples, 2))
    for n in (1, 2):
        for s in (0.8, 1.5):
            F = fo.whittaker_coefficient(s, n)
            lam = s * (s - 1)
            for y in ys:
                v = 0.0
                worst = max(worst, abs(fo.pde_residual_6_4(F, n, 0, lam, y, v)) / fo.pde_scale(F, n, 0, lam, y, v))
    c.add("whittaker-pde", "y^2 F_yy + (y + v^2) F_vv + 2yv F_yv - ((ay + bv)^2 + b^2 y + lambda) F = 0", 4 * len(ys), worst, c.tol("whittaker-pde", 1e-6))
    rt = 0.0
    for _ in range(max(1, c.cfg.samples // 4)):
        nm, rm = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        coeffs = {(a, b): complex(*rng.normal(size=2)) for a in range(-nm, nm + 1) for b in range(-rm, rm + 1)}
        rt = max(rt, fo.roundtrip_residual(coeffs, nm, rm))
    c.add("fourier-roundtrip", "f = sum c_{n,r}(y, v) e^{2 pi i (nx + ru)}", max(1, c.cfg.samples // 4), rt, c.tol("fourier-roundtrip", 1e-12))
    e = sp.catalog("whittaker", s=0.8, a=1.0)
    rep = fo.consistency_check(e.function, e.eigenvalue, (1, 0), y_sizes=(16, 32))
    c.add("grid-consistency", "c_{1,0} of the Whittaker witness solves the coefficient PDE", 32, rep.final_residual, c.tol("grid-consistency", 1e-5))


def suite_lifts(c: _Checks, rng):
    n = c.cfg.samples
    f = ops.corpus_hc()["power_phase"]
    rep = lift_roundtrip_check(f, n, rng)
    for r in rep:
        c.records.append(CheckRecord(f"lifts.{r.id}", r.anchor, r.samples, r.max_residual, c.tol(r.id, r.tolerance), r.max_residual <= c.tol(r.id, r.tolerance)))


SUITES: dict[str, Callable] = {
    "group": suite_group,
    "bracket-table": suite_bracket_table,
    "killing": suite_killing,
    "exp": suite_exp,
    "operators": suite_operators,
    "lie-derivatives": suite_lie_derivatives,
    "catalog": suite_catalog,
    "metrics": suite_metrics,
    "curvature": suite_curvature,
    "laplacian": suite_laplacian,
    "bessel": suite_bessel,
    "fourier": suite_fourier,
    "lifts": suite_lifts,
}


def run_suite(cfg: RunConfig) -> Report:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    report = Report(cfg.echo())
    for name in names:
        ch = _Checks(name, cfg)
        SUITES[name](ch, suite_rng(cfg.seed, name))
        report.checks.extend(ch.records)
    return report


# lifts and Maass-Jacobi predicates ----------------------------------------


def _f_at(f, p: grp.PointHC) -> complex:
    return complex(jets.value(f(*p.as_tuple())))


def lift_roundtrip_check(f: Callable, samples: int, rng: np.random.Generator) -> list:
    """Residuals of the correspondences between functions on H x C, G and (Y, V).

    ``phi_f(g, a) = f((g, a) o (i, 0))`` and ``h_f(Y, V) = f((g, V g^{-T}) o (i, 0))``
    with ``Y = g g^T``.  Returns one record per identity.
    """

    def phi(a):
        return _f_at(f, grp.act_hc(a, grp.ORIGIN_HC))

    def h(Y, V, k=None):
        q = grp.PointPV.from_matrices(Y, V)
        g = grp.section_gY(q).g
        if k is not None:
            g = g @ k.g
        return _f_at(f, grp.act_hc(grp.GroupElement(g, np.asarray(V) @ np.linalg.inv(g).T), grp.ORIGIN_HC))

    rk = fphi = hchoice = fh = 0.0
    for _ in range(samples):
        a = grp.random_group_element(rng)
        k = grp.rotation(rng.uniform(0, grp.TWO_PI))
        rk = max(rk, abs(phi(a * k) - phi(a)))
        p = grp.random_point_hc(rng)
        s = grp.section_gY(grp.map_T_inv(p))
        fphi = max(fphi, abs(phi(s) - _f_at(f, p)), abs(phi(s * k) - _f_at(f, p)))
        q = _rand_point_pv(rng)
        hchoice = max(hchoice, abs(h(q.Y, q.V) - h(q.Y, q.V, k)))
        b = s * k
        fh = max(fh, abs(h(b.g @ b.g.T, b.alpha @ b.g.T) - _f_at(f, p)))
    tol = 1e-10
    return [
        CheckRecord("phi-right-K-invariant", "phi_f(g, a) = f((g, a) o (i, 0))", samples, rk, tol, rk <= tol),
        CheckRecord("f_phi=f", "f_phi(tau, z) = phi(g, a) with (g, a) o (i, 0) = (tau, z)", samples, fphi, tol, fphi <= tol),
        CheckRecord("h-choice-independent", "h_f(Y, V) = f((g, V g^{-T}) o (i, 0)), Y = g g^T", samples, hchoice, tol, hchoice <= tol),
        CheckRecord("f_h=f", "f_h(tau, z) = h(g g^T, a g^T)", samples, fh, tol, fh <= tol),
    ]


def mj_sample_points(rng, samples: int) -> list:
    return [grp.PointHC(rng.uniform(-1, 1), rng.uniform(0.3, 3), rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(samples)]


def check_mj_conditions(candidate: Callable, lam: complex, cfg: RunConfig | None = None, bound: float = math.inf) -> Report:
    """MJ1 (lattice-group invariance on generators), MJ2 (eigenfunction), MJ3 (growth diagnostic).

    MJ3 reports ``max |f|`` over a fan of points with ``y`` in [0.1, 100]
    against ``bound``; it always passes because growth is not a sharp
    predicate.
    """
    cfg = cfg or RunConfig(samples=20)
    rng = suite_rng(cfg.seed, "mj")
    pts = mj_sample_points(rng, cfg.samples)
    mj1 = 0.0
    for p in pts:
        base = _f_at(candidate, p)
        for gam in grp.GAMMA_GENERATORS.values():
            mj1 = max(mj1, abs(_f_at(candidate, grp.act_hc(gam, p)) - base) / (1 + abs(base)))
    rep2 = ops.eigen_check("Delta", candidate, lam, pts)
    fan = [grp.PointHC(x, y, u, v) for y in np.geomspace(0.1, 100, 16) for x, u, v in rng.uniform(-1, 1, (max(1, cfg.samples // 4), 3))]
    growth = max(abs(_f_at(candidate, p)) for p in fan)
    tol1 = cfg.tol_overrides.get("MJ1", 1e-10)
    tol2 = cfg.tol_overrides.get("MJ2", 1e-8)
    report = Report(cfg.echo())
    report.checks = [
        CheckRecord("MJ1", "f(gamma o (tau, z)) = f(tau, z) for gamma in Gamma", len(pts), mj1, tol1, mj1 <= tol1),
        CheckRecord("MJ2", "f is an eigenfunction of Delta", rep2.samples, rep2.max_residual, tol2, rep2.max_residual <= tol2),
        CheckRecord("MJ3", "growth diagnostic: max |f| over y in [0.1, 100] vs bound", len(fan), growth, bound, True),
    ]
    return report
