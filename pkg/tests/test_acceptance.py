"""Acceptance criteria.  Each test prints one PASS/FAIL line, then asserts."""

import math
import os
import subprocess
import sys

import mpmath
import numpy as np
import pytest

from maassjacobi import fourier as fo
from maassjacobi import group as grp
from maassjacobi import jets
from maassjacobi import metrics as mt
from maassjacobi import operators as ops
from maassjacobi import special as sp
from maassjacobi import verify as V


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}: {detail}")
        assert ok, detail

    return emit


def hc_points(rng, n, ylo=0.2, yhi=5.0):
    return [grp.PointHC(rng.uniform(-3, 3), rng.uniform(ylo, yhi), rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(n)]


def test_01_bracket_table(report):
    rows = V.bracket_table_mismatches()
    bad = [f"[W{i},W{j}] expected {e.tolist()} computed {c.tolist()}" for i, j, e, c in rows if not np.array_equal(e, c)]
    report(1, "bracket table exact", not bad, f"{len(rows) - len(bad)}/{len(rows)} relations match; " + "; ".join(bad))


def test_02_killing_form(report):
    rng = np.random.default_rng(2)
    worst_trace = worst_formula = 0.0
    for _ in range(1000):
        u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
        b = grp.killing_form(u, w)
        worst_trace = max(worst_trace, abs(b - grp.trace_form(u, w)))
        worst_formula = max(worst_formula, abs(b - 5 * np.trace(u.X @ w.X)))
    ok = worst_trace <= 1e-12 and worst_formula <= 1e-12
    report(2, "Killing form", ok, f"max |B - tr(ad ad)| = {worst_trace:.2e}, max |B - 5 tr(X1 X2)| = {worst_formula:.2e} over 1000 pairs (tol 1e-12)")


def test_03_operator_invariance(report):
    rng = np.random.default_rng(3)
    corpus = list(ops.corpus_hc().values())
    triples = [(grp.random_group_element(rng), grp.random_point_hc(rng), corpus[i % len(corpus)]) for i in range(100)]
    worst = {}
    for tag in ("D", "Psi", "D1", "D2"):
        worst[tag] = max(ops.verify_invariance(tag, f, [(a, p)]) for a, p, f in triples)
    control = max(ops.verify_invariance("dv", f, [(a, p)]) for a, p, f in triples)
    inv_max = max(worst.values())
    ok = inv_max <= 1e-8 and control >= 1e5 * max(inv_max, 1e-8)
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f"; control d_v {control:.2e} (tol 1e-8, separation >= 1e5)"
    report(3, "operator invariance", ok, detail)


def test_04_commutator(report):
    rng = np.random.default_rng(4)
    corpus = list(ops.corpus_hc().values())
    worst = 0.0
    for i in range(100):
        p = grp.random_point_hc(rng)
        # random order-4 jet: corpus function times a random quartic polynomial
        c = rng.normal(size=5)
        f0 = corpus[i % len(corpus)]
        f = lambda x, y, u, v, c=c, f0=f0: f0(x, y, u, v) * (1 + c[0] * x + c[1] * u * v + c[2] * y * y + c[3] * v**3 + c[4] * x * u * v * y)  # noqa: E731
        worst = max(worst, ops.commutator_check(f, p).residual)
    w = ops.commutator_check(lambda x, y, u, v: v * v, (0.3, 1.7, 0.2, -0.4))
    wit = abs(w.lhs + 4 * 1.7) + abs(w.rhs + 4 * 1.7)
    ok = worst <= 1e-9 and wit <= 1e-12 and abs(w.lhs) > 0
    report(4, "commutator [D, Psi]", ok, f"max residual {worst:.2e} over 100 jets (tol 1e-9); witness v^2: lhs {w.lhs:.12g}, rhs {w.rhs:.12g}, -4y = {-4 * 1.7:.12g}")


def test_05_eigenfunction_catalog(report):
    rng = np.random.default_rng(5)
    pts = [grp.PointHC(rng.uniform(-3, 3), rng.uniform(0.3, 4), rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(50)]
    fails = []
    worst_poly = worst_bes = 0.0
    for s in (0.5, 1.7, 2 + 3j):
        for ident in sp.POLYNOMIAL_IDS + sp.HARMONIC_IDS + ("whittaker", "whittaker_fourier"):
            e = sp.catalog(ident, s=s, a=1.0, n=2)
            r = ops.eigen_check("Delta", e.function, e.eigenvalue, pts).max_residual
            tol = 1e-6 if ident.startswith("whittaker") else 1e-10
            if ident.startswith("whittaker"):
                worst_bes = max(worst_bes, r)
            else:
                worst_poly = max(worst_poly, r)
            if r > tol:
                fails.append(f"{ident}@{s}: {r:.2e}")
    report(5, "eigenfunction catalog", not fails, f"polynomial max {worst_poly:.2e} (tol 1e-10), Bessel max {worst_bes:.2e} (tol 1e-6) at 50 points x 3 s values" + ("; " + ", ".join(fails) if fails else ""))


def test_06_metrics(report):
    rng = np.random.default_rng(6)
    det = max(abs(np.linalg.det(mt.metric_eval(mt.DS2, p)) * p.y**6 - 1) for p in hc_points(rng, 100))
    origin = float(np.abs(mt.metric_eval(mt.DS2, (0, 1, 0, 0)) - np.eye(4)).max())
    fams = [mt.DS2, mt.DS2_TILDE, mt.DS0] + [mt.ds2_alpha_beta(a, b) for a in (0.5, 1, 2) for b in (0.5, 1, 2)]
    worst = {}
    for m in fams:
        r = 0.0
        for _ in range(30):
            a = grp.random_group_element(rng)
            if m.chart == "G1":
                p = (rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(0, 2 * math.pi))
            else:
                p = (rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(-3, 3), rng.uniform(-3, 3))
            r = max(r, mt.pullback_residual(m, a, p))
        worst[m.name] = r
    pb = max(worst.values())
    ok = det <= 1e-12 and origin <= 1e-14 and pb <= 1e-9
    report(6, "metric suite", ok, f"det rel {det:.2e} (1e-12), origin {origin:.1e} (1e-14), pullback max {pb:.2e} over {len(fams)} metrics (1e-9)")


def test_07_curvature(report):
    rng = np.random.default_rng(7)
    vals = [mt.scalar_curvature(mt.DS2, p).scalar_curvature for p in hc_points(rng, 20)]
    dev = max(abs(v + 3) for v in vals)
    h2 = max(abs(mt.scalar_curvature(mt.HYPERBOLIC_PLANE, (rng.uniform(-3, 3), rng.uniform(0.2, 5))).scalar_curvature + 2) for _ in range(20))
    report(7, "scalar curvature", dev <= 1e-6 and h2 <= 1e-8, f"max |R + 3| = {dev:.2e} at 20 points (1e-6); H2 max |R + 2| = {h2:.2e} (1e-8)")


def test_08_laplacian(report):
    rng = np.random.default_rng(8)
    corpus = list(ops.corpus_hc().values())
    g1 = list(ops.corpus_g1().values())
    cases = [(mt.DS2, "Delta", corpus), (mt.DS2_TILDE, "DeltaTilde", corpus), (mt.DS0, "Delta0", g1)]
    cases += [(mt.ds2_alpha_beta(a, b), f"DeltaAlphaBeta({a},{b})", corpus) for a in (0.5, 1, 2) for b in (0.5, 2)]
    worst = 0.0
    for m, tag, fs in cases:
        op = ops.operator(tag)
        for i in range(10):
            f = fs[i % len(fs)]
            if m.chart == "G1":
                p = (rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(0, 2 * math.pi))
            else:
                p = (rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(-3, 3), rng.uniform(-3, 3))
            cf = ops.apply(op, f, p)
            worst = max(worst, abs(mt.laplace_from_metric(m, f, p) - cf) / (1 + abs(cf)))
    split = 0.0
    for i, p in enumerate(hc_points(rng, 50)):
        f = corpus[i % len(corpus)]
        F = ops.jet_at(f, p.as_tuple(), 2)
        a = ops.operator("Delta")(F).value
        split = max(split, abs(a - ops.operator("D")(F).value - ops.operator("Psi")(F).value) / (1 + abs(a)))
    report(8, "Laplacian assembly", worst <= 1e-8 and split <= 1e-13, f"metric vs closed form max {worst:.2e} (1e-8); Delta - D - Psi max {split:.2e} (1e-13)")


def test_09_T_isometry_equivariance(report):
    rng = np.random.default_rng(9)
    iso = equiv = corr = 0.0
    corpus = list(ops.corpus_hc().values())
    for i in range(100):
        q = grp.PointPV(rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(-3, 3), rng.uniform(-3, 3))
        a = grp.random_group_element(rng)
        iso = max(iso, mt.isometry_check_T(q))
        lhs = np.array(grp.map_T(grp.act_pv(a, q)).as_tuple())
        rhs = np.array(grp.act_hc(a, grp.map_T(q)).as_tuple())
        equiv = max(equiv, float(np.abs(lhs - rhs).max()))
        corr = max(corr, ops.correspondence_residual(corpus[i % len(corpus)], q))
    ok = iso <= 1e-10 and equiv <= 1e-10 and corr <= 1e-8
    report(9, "T isometry and equivariance", ok, f"isometry {iso:.2e} (1e-10), equivariance {equiv:.2e} (1e-10), DeltaTilde(f o T) - (Delta f) o T {corr:.2e} (1e-8) over 100 samples")


def _quad_oracle(s, z):
    # independent route: the integral in the original t variable, by mpmath
    with mpmath.workdps(30):
        s, z = mpmath.mpc(s), mpmath.mpc(z)
        f = lambda t: mpmath.exp(-z / 2 * (t + 1 / t)) * t ** (s - 1)  # noqa: E731
        return complex(mpmath.quad(f, [0, 0.01, 0.1, 1, 10, 100, mpmath.inf], maxdegree=10) / 2)


ORACLE_PAIRS = [
    (0.5, 1.0), (0.0, 2.0), (1.3, 0.7), (-2.5, 3.0), (10.0, 5.0), (0.3 + 2j, 1.5), (1 + 10j, 4.0),
    (-3 + 1j, 0.2), (25.0, 10.0), (0.7j, 0.05), (4 - 3j, 8.0), (0.2, 30.0), (45 + 5j, 20.0),
    (2.0, 1 + 0.5j), (0.5 + 0.5j, 2 - 1j), (-1.2, 0.5 + 0.3j), (3.3 + 0.1j, 12.0), (30j, 2.0),
    (7.5, 0.01), (-0.9 - 4j, 6 + 1j),
]


def test_10_bessel(report):
    ref = math.sqrt(math.pi / 2) * math.exp(-1)
    closed = abs(sp.bessel_K(0.5, 1.0) - ref) / ref
    rng = np.random.default_rng(10)
    sym = 0.0
    for _ in range(50):
        s = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        z = rng.uniform(0.1, 20)
        k = sp.bessel_K(s, z)
        sym = max(sym, abs(k - sp.bessel_K(-s, z)) / abs(k))
    worst = 0.0
    worst_pair = None
    for s, z in ORACLE_PAIRS:
        o = _quad_oracle(s, z)
        r = abs(sp.bessel_K(s, z) - o) / abs(o)
        if r >= worst:
            worst, worst_pair = r, (s, z)
    ok = closed <= 1e-10 and sym <= 1e-12 and worst <= 1e-10
    report(10, "K-Bessel", ok, f"K_1/2(1) rel {closed:.2e} (1e-10), K_s - K_-s rel {sym:.2e} (1e-12), quadrature oracle max rel {worst:.2e} at {worst_pair} over 20 pairs (1e-10)")


def test_11_fourier_pde(report):
    worst = 0.0
    ys = np.linspace(0.3, 4.0, 50)
    for n in (1, 2):
        for s in (0.8, 1.5):
            F = fo.whittaker_coefficient(s, n)
            lam = s * (s - 1)
            for y in ys:
                worst = max(worst, abs(fo.pde_residual_6_4(F, n, 0, lam, y, 0.0)) / fo.pde_scale(F, n, 0, lam, y, 0.0))
    rng = np.random.default_rng(11)
    rt = 0.0
    for _ in range(20):
        nm, rm = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        coeffs = {(a, b): complex(*rng.normal(size=2)) for a in range(-nm, nm + 1) for b in range(-rm, rm + 1)}
        rt = max(rt, fo.roundtrip_residual(coeffs, nm, rm))
    report(11, "Fourier and coefficient PDE", worst <= 1e-6 and rt <= 1e-12, f"PDE residual / scale max {worst:.2e} at 50 y-points x n in {{1,2}} x s in {{0.8,1.5}} (1e-6); round trip {rt:.2e} (1e-12)")


def test_12_lifts_and_fields(report):
    rng = np.random.default_rng(12)
    lift = 0.0
    for f in ops.corpus_hc().values():
        lift = max(lift, max(r.max_residual for r in V.lift_roundtrip_check(f, 100, rng)))
    fg = list(ops.corpus_g().values())[0]
    fh = ops.corpus_hc()["gauss_cos"]
    fields = 0.0
    for side in ("L", "R"):
        for k in range(1, 6):
            op = ops.operator(side, k=k)
            for _ in range(10):
                p = grp.GCoord(rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3), rng.uniform(-3, 3))
                fields = max(fields, abs(ops.lie_derivative(op, fg, p) - ops.lie_derivative_curve(side, k, fg, p)))
    for j in range(1, 6):
        for p in hc_points(rng, 10):
            fields = max(fields, abs(ops.script_L(j, fh, p) - ops.script_L_curve(j, fh, p)))
    report(12, "lifts and Lie derivative fields", lift <= 1e-10 and fields <= 1e-8, f"lift identities max {lift:.2e} (1e-10); 15 fields vs curve oracle max {fields:.2e} (1e-8)")


def test_13_determinism(report, tmp_path):
    outs = []
    env = dict(os.environ)
    # the config echo records the output path, so both runs use the same one
    path = tmp_path / "report.json"
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "maassjacobi.cli", "verify", "--suite", "all", "--seed", "42", "--out", str(path)],
            capture_output=True, env=env,
        )
        assert proc.returncode in (0, 1), proc.stderr.decode()
        outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    report(13, "determinism", same, f"two runs of verify --suite all --seed 42: {'byte-identical' if same else 'differ'} ({len(outs[0])} bytes)")
