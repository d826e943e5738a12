"""Invariant Riemannian metrics as coefficient fields, and the geometry built on them.

A :class:`MetricField` maps chart coordinates to the symmetric coefficient
matrix ``g_ij``.  The evaluator is written with ring operations only, so
calling it on coordinate jets gives the Taylor expansion of every coefficient.
Christoffel symbols, curvature and the Laplace-Beltrami operator are then
assembled from exact derivatives rather than finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import group as grp
from . import jets
from .jets import Jet
from .operators import _chart_point, chart_action

PD_TOL = 1e-12
SYM_TOL = 1e-14


@dataclass(frozen=True)
class MetricField:
    name: str
    chart: str
    dim: int
    coefficients: Callable = field(repr=False, compare=False)
    params: tuple = ()

    def __call__(self, *coords):
        return self.coefficients(*coords)


def _ds2(x, y, u, v):
    a = (y + v * v) / (y * y * y)
    b = -v / (y * y)
    c = 1 / y
    return [[a, 0.0, b, 0.0], [0.0, a, 0.0, b], [b, 0.0, c, 0.0], [0.0, b, 0.0, c]]


def _ds2_ab(alpha, beta):
    def coeffs(x, y, u, v):
        h = alpha / (y * y) + beta * v * v / (y * y * y)
        b = -beta * v / (y * y)
        c = beta / y
        return [[h, 0.0, b, 0.0], [0.0, h, 0.0, b], [b, 0.0, c, 0.0], [0.0, b, 0.0, c]]

    return coeffs


def _ds2_tilde(x, y, v1, v2):
    h = 1 / (y * y)
    return [[h, 0.0, 0.0, 0.0], [0.0, h, 0.0, 0.0], [0.0, 0.0, (x * x + y * y) / y, x / y], [0.0, 0.0, x / y, 1 / y]]


def _ds0(x, y, th):
    return [[1.25 / (y * y), 0.0, 0.5 / y], [0.0, 1 / (y * y), 0.0], [0.5 / y, 0.0, 1.0 + 0.0 * y]]


def _ds2_plus_dv2(x, y, u, v):
    g = _ds2(x, y, u, v)
    g[3][3] = g[3][3] + 1.0
    return g


def _hyperbolic_plane(x, y):
    h = 1 / (y * y)
    return [[h, 0.0], [0.0, h]]


DS2 = MetricField("ds2", "HC", 4, _ds2)
DS2_TILDE = MetricField("ds2_tilde", "PV", 4, _ds2_tilde)
DS0 = MetricField("ds0", "G1", 3, _ds0)
DS2_PLUS_DV2 = MetricField("ds2+dv2", "HC", 4, _ds2_plus_dv2)
HYPERBOLIC_PLANE = MetricField("H2", "H2", 2, _hyperbolic_plane)


def ds2_alpha_beta(alpha: float, beta: float) -> MetricField:
    if not alpha > 0 or not beta > 0:
        raise ValueError(f"alpha and beta must be positive, got {alpha}, {beta}")
    return MetricField(f"ds2_ab({alpha:g},{beta:g})", "HC", 4, _ds2_ab(alpha, beta), (alpha, beta))


def metric_by_name(name: str) -> MetricField:
    table = {m.name: m for m in (DS2, DS2_TILDE, DS0, DS2_PLUS_DV2, HYPERBOLIC_PLANE)}
    if name in table:
        return table[name]
    if name.startswith("ds2_ab(") and name.endswith(")"):
        a, b = name[7:-1].split(",")
        return ds2_alpha_beta(float(a), float(b))
    raise ValueError(f"unknown metric {name!r}")


def _point(m: MetricField, p) -> tuple:
    if m.chart == "H2":
        t = tuple(float(c) for c in p)
        if len(t) != 2 or not t[1] > 0:
            raise ValueError(f"H2 point must be (x, y) with y > 0, got {p}")
        return t
    return _chart_point(m.chart, p)


# linear algebra -----------------------------------------------------------


def pivoted_ldl(A: np.ndarray, tol: float = PD_TOL):
    """Symmetric ``P A P^T = L D L^T`` with diagonal pivoting.

    Returns ``(perm, L, d)``.  Raises ``ValueError`` if a pivot falls below
    ``tol`` times the largest diagonal entry (not positive definite).
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    perm = np.arange(n)
    L = np.eye(n)
    d = np.zeros(n)
    scale = max(np.abs(np.diag(A)).max(), np.finfo(float).tiny)
    S = A.copy()
    for k in range(n):
        j = k + int(np.argmax(np.diag(S)[k:]))
        if j != k:
            S[[k, j]] = S[[j, k]]
            S[:, [k, j]] = S[:, [j, k]]
            L[[k, j], :k] = L[[j, k], :k]
            perm[[k, j]] = perm[[j, k]]
        piv = S[k, k]
        if piv <= tol * scale:
            raise ValueError(f"matrix is not positive definite (pivot {piv:.3e})")
        d[k] = piv
        L[k + 1 :, k] = S[k + 1 :, k] / piv
        S[k + 1 :, k + 1 :] -= np.outer(S[k + 1 :, k], S[k + 1 :, k]) / piv
        S[k + 1 :, k] = 0.0
        S[k, k + 1 :] = 0.0
    return perm, L, d


def check_spd(A: np.ndarray) -> None:
    A = np.asarray(A, dtype=float)
    asym = np.abs(A - A.T).max()
    if asym > SYM_TOL * max(1.0, np.abs(A).max()):
        raise ValueError(f"metric matrix is not symmetric (asymmetry {asym:.3e})")
    pivoted_ldl(A)


def jet_matrix_inverse(M):
    """Gauss-Jordan inverse and determinant of a matrix of jets (or numbers)."""
    n = len(M)
    A = [list(row) for row in M]
    inv = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    det = 1.0
    for k in range(n):
        piv_row = max(range(k, n), key=lambda r: abs(jets.value(A[r][k])))
        if abs(jets.value(A[piv_row][k])) == 0:
            raise ZeroDivisionError("singular metric matrix")
        if piv_row != k:
            A[k], A[piv_row] = A[piv_row], A[k]
            inv[k], inv[piv_row] = inv[piv_row], inv[k]
            det = -det
        piv = A[k][k]
        det = det * piv
        rp = 1 / piv
        A[k] = [a * rp for a in A[k]]
        inv[k] = [a * rp for a in inv[k]]
        for r in range(n):
            if r == k:
                continue
            fct = A[r][k]
            if isinstance(fct, (int, float)) and fct == 0:
                continue
            A[r] = [a - fct * b for a, b in zip(A[r], A[k])]
            inv[r] = [a - fct * b for a, b in zip(inv[r], inv[k])]
    return inv, det


# evaluation ---------------------------------------------------------------


def metric_eval(m: MetricField, p) -> np.ndarray:
    """Coefficient matrix at ``p``, checked symmetric positive definite."""
    pt = _point(m, p)
    G = np.array(m(*pt), dtype=float)
    check_spd(G)
    return G


def metric_inverse(m: MetricField, p) -> np.ndarray:
    return np.linalg.inv(metric_eval(m, p))


def coefficient_jets(m: MetricField, p, order: int):
    pt = _point(m, p)
    X = jets.variables(pt, order)
    return [[c if isinstance(c, Jet) else Jet.constant(c, len(pt), order, pt) for c in row] for row in m(*X)]


def action_jacobian(action: Callable, p) -> tuple[np.ndarray, tuple]:
    """Jacobian of a chart map at ``p`` from order-1 jets, plus the image point."""
    X = jets.variables(p, 1)
    out = action(*X)
    n = len(p)
    J = np.array([[o.partial(tuple(int(i == j) for i in range(n))) for j in range(n)] for o in out], dtype=float)
    return J, tuple(float(o.value) for o in out)


def _metric_action(m: MetricField, a):
    if callable(a) and not isinstance(a, grp.GroupElement):
        return a
    if m.chart == "H2":
        g = (a.g[0, 0], a.g[0, 1], a.g[1, 0], a.g[1, 1])
        return lambda x, y: grp.act_hc_coords(g, (0.0, 0.0), x, y, 0.0 * x, 0.0 * x)[:2]
    return chart_action(m.chart, a)


def pullback_residual(m: MetricField, a, p, relative: bool = False) -> float:
    """Max entry of ``J^T m(a.p) J - m(p)``.

    With ``relative`` the entry is divided by ``max(1, max |m(p)|)``, which
    keeps the bound meaningful where ``y`` is small and entries are large.
    """
    pt = _point(m, p)
    J, image = action_jacobian(_metric_action(m, a), pt)
    G0 = metric_eval(m, pt)
    G1 = metric_eval(m, image)
    R = J.T @ G1 @ J - G0
    res = float(np.abs(R).max())
    if relative:
        res /= max(1.0, float(np.abs(G0).max()))
    return res


def laplace_from_metric(m: MetricField, f: Callable, p) -> complex | float:
    """``(1/sqrt g) d_i (sqrt g g^{ij} d_j f)`` assembled from jets."""
    pt = _point(m, p)
    n = len(pt)
    G = coefficient_jets(m, pt, 1)
    Ginv, det = jet_matrix_inverse(G)
    sq = jets.sqrt(det)
    F = jets.jet_of(f, pt, 2)
    grad = [F.diff(j) for j in range(n)]
    div = 0.0
    for i in range(n):
        Vi = None
        for j in range(n):
            term = Ginv[i][j] * grad[j]
            Vi = term if Vi is None else Vi + term
        div = div + (sq * Vi).diff(i).value
    return div / sq.value


@dataclass(frozen=True)
class CurvatureReport:
    point: tuple
    scalar_curvature: float
    christoffel_max: float


def _metric_derivatives(m: MetricField, pt):
    n = len(pt)
    G = coefficient_jets(m, pt, 2)
    g = np.empty((n, n))
    dg = np.empty((n, n, n))  # dg[k, i, j] = d_k g_ij
    ddg = np.empty((n, n, n, n))  # ddg[k, l, i, j] = d_k d_l g_ij
    for i in range(n):
        for j in range(n):
            c = G[i][j]
            g[i, j] = c.value
            for k in range(n):
                ek = [0] * n
                ek[k] = 1
                dg[k, i, j] = c.partial(ek)
                for l in range(n):
                    e = list(ek)
                    e[l] += 1
                    ddg[k, l, i, j] = c.partial(e)
    return g, dg, ddg


def christoffel(m: MetricField, p) -> np.ndarray:
    """``Gamma[k, i, j] = Gamma^k_{ij}`` at ``p``."""
    g, dg, _ = _metric_derivatives(m, _point(m, p))
    gi = np.linalg.inv(g)
    # lower[l, i, j] = d_i g_lj + d_j g_li - d_l g_ij
    lower = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    return 0.5 * np.einsum("kl,lij->kij", gi, lower)


def scalar_curvature(m: MetricField, p) -> CurvatureReport:
    """Scalar curvature from exact second derivatives of the coefficients."""
    pt = _point(m, p)
    g, dg, ddg = _metric_derivatives(m, pt)
    gi = np.linalg.inv(g)
    dgi = -np.einsum("ka,mab,bl->mkl", gi, dg, gi)  # d_m g^{kl}
    lower = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    # d_m of lower[l, i, j]
    dlower = np.einsum("milj->mlij", ddg) + np.einsum("mjli->mlij", ddg) - ddg
    Gam = 0.5 * np.einsum("kl,lij->kij", gi, lower)
    dGam = 0.5 * (np.einsum("mkl,lij->mkij", dgi, lower) + np.einsum("kl,mlij->mkij", gi, dlower))
    # R^r_{s m n} = d_m Gam^r_{ns} - d_n Gam^r_{ms} + Gam^r_{ml} Gam^l_{ns} - Gam^r_{nl} Gam^l_{ms}
    Rie = (
        np.einsum("mrns->rsmn", dGam)
        - np.einsum("nrms->rsmn", dGam)
        + np.einsum("rml,lns->rsmn", Gam, Gam)
        - np.einsum("rnl,lms->rsmn", Gam, Gam)
    )
    Ric = np.einsum("rsrn->sn", Rie)
    S = float(np.einsum("sn,sn->", gi, Ric))
    return CurvatureReport(pt, S, float(np.abs(Gam).max()))


def isometry_check_T(q) -> float:
    """Max entry of ``J^T ds2(T q) J - ds2_tilde(q)``, J the Jacobian of T."""
    pt = _chart_point("PV", q)
    J, image = action_jacobian(grp.map_T_coords, pt)
    R = J.T @ metric_eval(DS2, image) @ J - metric_eval(DS2_TILDE, pt)
    return float(np.abs(R).max())


def pulled_back_ds2(q) -> np.ndarray:
    """Coefficients of ``T^* ds2`` at ``q`` in the (x, y, v1, v2) chart."""
    pt = _chart_point("PV", q)
    J, image = action_jacobian(grp.map_T_coords, pt)
    return J.T @ metric_eval(DS2, image) @ J


def y_matrix_coords(x, y):
    """Entries of the unimodular matrix attached to ``(x, y)``."""
    return (1 / y, -x / y, -x / y, x * x / y + y)


def trace_form(Y, dY, dV) -> float:
    """``1/2 tr(Y^{-1} dY Y^{-1} dY) + dV Y^{-1} dV^T``."""
    Y = np.asarray(Y, dtype=float)
    dY = np.asarray(dY, dtype=float)
    dV = np.asarray(dV, dtype=float)
    Yi = np.linalg.inv(Y)
    A = Yi @ dY
    return float(0.5 * np.trace(A @ A) + dV @ Yi @ dV)


def matrix_metric_form(q, dq) -> float:
    """Trace form of the displacement ``dq = (dx, dy, dv1, dv2)`` at ``q``.

    ``dY`` comes from the exact differential of the (x, y) parametrization.
    """
    pt = _chart_point("PV", q)
    dq = np.asarray(dq, dtype=float)
    J, _ = action_jacobian(lambda x, y, v1, v2: y_matrix_coords(x, y), pt)
    dY = (J @ dq).reshape(2, 2)
    x, y = pt[0], pt[1]
    Y = np.array(y_matrix_coords(x, y)).reshape(2, 2)
    return trace_form(Y, dY, dq[2:])


def coordinate_form(m: MetricField, p, dq) -> float:
    dq = np.asarray(dq, dtype=float)
    return float(dq @ metric_eval(m, p) @ dq)
