"""Invariant differential operators as transformers of Taylor jets.

Every operator maps a jet of a function at a point to the jet of the image
function at the same point, with the order lowered by the operator's order.
That makes composition (``D Psi f``) a matter of chaining transformers on a
sufficiently high-order jet.

Charts and coordinate order:

* ``HC``: (x, y, u, v) on H x C
* ``PV``: (x, y, v1, v2) on pairs (Y, V)
* ``G1``: (x, y, theta) on SL(2, R)
* ``G``: (x, y, theta, alpha1, alpha2) on the full group
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import group as grp
from . import jets
from .jets import Jet

CHART_DIM = {"HC": 4, "PV": 4, "G1": 3, "G": 5}


def _chart_point(chart: str, p) -> tuple:
    if isinstance(p, (grp.PointHC, grp.PointPV, grp.GCoord)):
        kind = {grp.PointHC: "HC", grp.PointPV: "PV", grp.GCoord: "G"}[type(p)]
        if kind == chart or (kind == "G" and chart == "G1"):
            t = p.as_tuple()
            return t[:3] if chart == "G1" else t
        raise ValueError(f"point of chart {kind} given to an operator on chart {chart}")
    t = tuple(float(c) for c in p)
    if len(t) != CHART_DIM[chart]:
        raise ValueError(f"chart {chart} needs {CHART_DIM[chart]} coordinates, got {len(t)}")
    if not t[1] > 0:
        raise ValueError(f"point outside chart: y = {t[1]} must be positive")
    return t


class _Partials:
    """Partial derivatives of a jet, all truncated to a common target order."""

    def __init__(self, F: Jet, drop: int):
        if F.order < drop:
            raise ValueError(f"insufficient jet order {F.order}; operator needs {drop}")
        self.F = F
        self.target = F.order - drop
        self._cache = {(): F}

    def __call__(self, *vars_) -> Jet:
        return self._raw(tuple(sorted(vars_))).truncate(self.target)

    def _raw(self, key):
        if key not in self._cache:
            self._cache[key] = self._raw(key[:-1]).diff(key[-1])
        return self._cache[key]

    def coords(self):
        return jets.coordinates_like(self.F, self.target)


@dataclass(frozen=True)
class Operator:
    """A differential operator on one chart, acting on jets."""

    name: str
    chart: str
    order: int
    transform: Callable[[Jet], Jet] = field(repr=False, compare=False)
    anchor: str = ""

    def __call__(self, F: Jet) -> Jet:
        if F.nvars != CHART_DIM[self.chart]:
            raise ValueError(f"{self.name} acts on {CHART_DIM[self.chart]} variables, jet has {F.nvars}")
        return self.transform(F)

    def then(self, other: "Operator") -> "Operator":
        """Composition ``self o other`` (apply ``other`` first)."""
        if self.chart != other.chart:
            raise ValueError("cannot compose operators on different charts")
        return Operator(f"{self.name}*{other.name}", self.chart, self.order + other.order, lambda F: self(other(F)))

    def __sub__(self, other: "Operator") -> "Operator":
        if self.chart != other.chart:
            raise ValueError("cannot subtract operators on different charts")
        order = max(self.order, other.order)

        def t(F):
            return self(F).truncate(F.order - order) - other(F).truncate(F.order - order)

        return Operator(f"({self.name}-{other.name})", self.chart, order, t)


# HC-chart operators -------------------------------------------------------


def _D(F):
    d = _Partials(F, 2)
    x, y, u, v = d.coords()
    return y * y * (d(0, 0) + d(1, 1)) + v * v * (d(2, 2) + d(3, 3)) + 2 * y * v * (d(0, 2) + d(1, 3))


def _Psi(F):
    d = _Partials(F, 2)
    x, y, u, v = d.coords()
    return y * (d(2, 2) + d(3, 3))


def _Delta(F):
    d = _Partials(F, 2)
    x, y, u, v = d.coords()
    return y * y * (d(0, 0) + d(1, 1)) + (y + v * v) * (d(2, 2) + d(3, 3)) + 2 * y * v * (d(0, 2) + d(1, 3))


def _D1(F):
    # (v d/dv + 1) Psi, with d/dv acting on Psi F = y (F_uu + F_vv)
    d = _Partials(F, 3)
    x, y, u, v = d.coords()
    psi = y * (d(2, 2) + d(3, 3))
    dv_psi = y * (d(2, 2, 3) + d(3, 3, 3))
    return 2 * y * y * d(0, 2, 3) - y * y * (d(1, 2, 2) - d(1, 3, 3)) + v * dv_psi + psi


def _D2(F):
    d = _Partials(F, 3)
    x, y, u, v = d.coords()
    du_psi = y * (d(2, 2, 2) + d(2, 3, 3))
    return y * y * (d(0, 3, 3) - d(0, 2, 2)) - 2 * y * y * d(1, 2, 3) - v * du_psi


def _commutator_rhs(F):
    d = _Partials(F, 3)
    x, y, u, v = d.coords()
    psi = y * (d(2, 2) + d(3, 3))
    dv_psi = y * (d(2, 2, 3) + d(3, 3, 3))
    return 2 * y * y * (d(1, 2, 2) - d(1, 3, 3)) - 4 * y * y * d(0, 2, 3) - 2 * (v * dv_psi + psi)


def _delta_alpha_beta(alpha: float, beta: float):
    def t(F):
        d = _Partials(F, 2)
        x, y, u, v = d.coords()
        Dpart = y * y * (d(0, 0) + d(1, 1)) + v * v * (d(2, 2) + d(3, 3)) + 2 * y * v * (d(0, 2) + d(1, 3))
        return Dpart / alpha + y * (d(2, 2) + d(3, 3)) / beta

    return t


def _dv(F):
    d = _Partials(F, 1)
    return d(3)


# other charts -------------------------------------------------------------


def _DeltaTilde(F):
    d = _Partials(F, 2)
    x, y, v1, v2 = d.coords()
    return y * y * (d(0, 0) + d(1, 1)) + (d(2, 2) - 2 * x * d(2, 3) + (x * x + y * y) * d(3, 3)) / y


def _Delta0(F):
    d = _Partials(F, 2)
    x, y, th = d.coords()
    return y * y * (d(0, 0) + d(1, 1)) - y * d(0, 2) + 1.25 * d(2, 2)


def _vector_field(coeffs: Callable) -> Callable[[Jet], Jet]:
    def t(F):
        d = _Partials(F, 1)
        cs = coeffs(*d.coords())
        out = None
        for i, c in enumerate(cs):
            if isinstance(c, (int, float)) and c == 0:
                continue
            term = c * d(i)
            out = term if out is None else out + term
        return out if out is not None else 0.0 * d(0)

    return t


# closed-form Lie derivative fields, coefficient order (x, y, theta, alpha1, alpha2)
L_FIELDS: dict[int, Callable] = {
    1: lambda x, y, th, a1, a2: (y * jets.cos(2 * th), y * jets.sin(2 * th), jets.sin(th) * jets.sin(th), -a2, 0),
    2: lambda x, y, th, a1, a2: (y * jets.cos(2 * th), y * jets.sin(2 * th), -jets.cos(th) * jets.cos(th), 0, -a1),
    3: lambda x, y, th, a1, a2: (-2 * y * jets.sin(2 * th), 2 * y * jets.cos(2 * th), jets.sin(2 * th), -a1, a2),
    4: lambda x, y, th, a1, a2: (0, 0, 0, 1.0, 0),
    5: lambda x, y, th, a1, a2: (0, 0, 0, 0, 1.0),
}

R_FIELDS: dict[int, Callable] = {
    1: lambda x, y, th, a1, a2: (1.0, 0, 0, 0, 0),
    2: lambda x, y, th, a1, a2: (y * y - x * x, -2 * x * y, -y, 0, 0),
    3: lambda x, y, th, a1, a2: (2 * x, 2 * y, 0, 0, 0),
    4: lambda x, y, th, a1, a2: (0, 0, 0, jets.cos(th) / jets.sqrt(y), jets.sin(th) / jets.sqrt(y)),
    5: lambda x, y, th, a1, a2: (
        0,
        0,
        0,
        -(x * jets.cos(th) + y * jets.sin(th)) / jets.sqrt(y),
        (y * jets.cos(th) - x * jets.sin(th)) / jets.sqrt(y),
    ),
}

# fields of the action on H x C, coefficient order (x, y, u, v)
SCRIPT_L_FIELDS: dict[int, Callable] = {
    1: lambda x, y, u, v: (x * x - y * y, 2 * x * y, x * u - y * v, y * u + x * v),
    2: lambda x, y, u, v: (-1.0, 0, 0, 0),
    3: lambda x, y, u, v: (-2 * x, -2 * y, -u, -v),
    4: lambda x, y, u, v: (0, 0, x, y),
    5: lambda x, y, u, v: (0, 0, 1.0, 0),
}


ANCHORS = {
    "D": "D = y^2(d_xx + d_yy) + v^2(d_uu + d_vv) + 2yv(d_xu + d_yv)",
    "Psi": "Psi = y(d_uu + d_vv)",
    "D1": "D1 = 2y^2 d_xuv - y^2 d_y(d_uu - d_vv) + (v d_v + 1) Psi",
    "D2": "D2 = y^2 d_x(d_vv - d_uu) - 2y^2 d_yuv - v d_u Psi",
    "Delta": "Delta = D + Psi",
    "DeltaAlphaBeta": "Delta_{alpha,beta} = (1/alpha) D + (1/beta) Psi",
    "DeltaTilde": "DeltaTilde = y^2(d_xx + d_yy) + (1/y)(d_v1v1 - 2x d_v1v2 + (x^2 + y^2) d_v2v2)",
    "Delta0": "Delta0 = y^2(d_xx + d_yy) - y d_x d_theta + (5/4) d_theta^2",
    "CommutatorRHS": "[D, Psi] = 2y^2 d_y(d_uu - d_vv) - 4y^2 d_xuv - 2(v d_v Psi + Psi)",
    "L": "L_k f(g) = d/dt f(g * exp tW_k) at t = 0",
    "R": "R_k f(g) = d/dt f(exp tW_k * g) at t = 0",
    "ScriptL": "LL_j f(tau, z) = d/dt f(exp tW_j o (tau, z)) at t = 0",
    "dv": "control: d_v (not invariant)",
}


_SIMPLE = {
    "D": ("HC", 2, _D),
    "Psi": ("HC", 2, _Psi),
    "D1": ("HC", 3, _D1),
    "D2": ("HC", 3, _D2),
    "Delta": ("HC", 2, _Delta),
    "DeltaTilde": ("PV", 2, _DeltaTilde),
    "Delta0": ("G1", 2, _Delta0),
    "CommutatorRHS": ("HC", 3, _commutator_rhs),
    "dv": ("HC", 1, _dv),
}


def _check_index(k) -> int:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= 5:
        raise ValueError(f"index must be an integer in 1..5, got {k!r}")
    return int(k)


def operator(tag: str, *, alpha: float | None = None, beta: float | None = None, k: int | None = None) -> Operator:
    """Build an operator from its tag.

    Tags: ``D, Psi, D1, D2, Delta, DeltaAlphaBeta, DeltaTilde, Delta0,
    CommutatorRHS, dv, L, R, ScriptL``.  String forms ``"L3"``, ``"R1"``,
    ``"ScriptL5"`` and ``"DeltaAlphaBeta(0.5,2)"`` are also accepted.
    """
    m = re.fullmatch(r"(L|R|ScriptL)([1-5])", tag)
    if m:
        tag, k = m.group(1), int(m.group(2))
    m = re.fullmatch(r"DeltaAlphaBeta\(\s*([^,]+),\s*([^)]+)\)", tag)
    if m:
        tag, alpha, beta = "DeltaAlphaBeta", float(m.group(1)), float(m.group(2))
    if tag in _SIMPLE:
        chart, order, t = _SIMPLE[tag]
        return Operator(tag, chart, order, t, ANCHORS[tag])
    if tag == "DeltaAlphaBeta":
        if alpha is None or beta is None or not alpha > 0 or not beta > 0:
            raise ValueError(f"DeltaAlphaBeta needs alpha > 0 and beta > 0, got {alpha}, {beta}")
        return Operator(f"DeltaAlphaBeta({alpha:g},{beta:g})", "HC", 2, _delta_alpha_beta(alpha, beta), ANCHORS[tag])
    if tag in ("L", "R", "ScriptL"):
        k = _check_index(k)
        fields = {"L": L_FIELDS, "R": R_FIELDS, "ScriptL": SCRIPT_L_FIELDS}[tag]
        chart = "HC" if tag == "ScriptL" else "G"
        return Operator(f"{tag}{k}", chart, 1, _vector_field(fields[k]), ANCHORS[tag])
    raise ValueError(f"unknown operator tag {tag!r}")


ALL_TAGS = ("D", "Psi", "D1", "D2", "Delta", "DeltaTilde", "Delta0", "CommutatorRHS", "dv")


# evaluation ---------------------------------------------------------------


def jet_at(f: Callable, point: Sequence[float], order: int) -> Jet:
    return jets.jet_of(f, point, order)


def apply(op: Operator, f: Callable, p) -> complex | float:
    """Value of ``(op f)(p)``; ``f`` takes the chart coordinates as arguments."""
    if isinstance(op, str):
        op = operator(op)
    pt = _chart_point(op.chart, p)
    return op(jet_at(f, pt, op.order)).value


def apply_composed(ops: Sequence[Operator], f: Callable, p) -> complex | float:
    """Value of ``(ops[0] o ops[1] o ... ) f`` at ``p`` by nested jet transport."""
    ops = [operator(o) if isinstance(o, str) else o for o in ops]
    total = sum(o.order for o in ops)
    if total > jets.MAX_ORDER:
        raise ValueError(f"composition needs order {total} > {jets.MAX_ORDER}")
    pt = _chart_point(ops[0].chart, p)
    F = jet_at(f, pt, total)
    for o in reversed(ops):
        F = o(F)
    return F.value


@dataclass(frozen=True)
class CommutatorResult:
    lhs: complex | float
    rhs: complex | float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs) / (1.0 + abs(self.lhs))


def commutator_check(f: Callable, p) -> CommutatorResult:
    """``(D Psi - Psi D) f`` on an order-4 jet against the closed-form right side."""
    pt = _chart_point("HC", p)
    F = jet_at(f, pt, 4)
    return commutator_check_jet(F)


def commutator_check_jet(F: Jet) -> CommutatorResult:
    D, Psi, rhs = operator("D"), operator("Psi"), operator("CommutatorRHS")
    if F.order < 4:
        raise ValueError(f"commutator check needs an order-4 jet, got order {F.order}")
    lhs = D(Psi(F)).value - Psi(D(F)).value
    return CommutatorResult(lhs, rhs(F.truncate(3)).value)


def _as_gcoord(p) -> tuple:
    if isinstance(p, grp.GCoord):
        return p.as_tuple()
    return _chart_point("G", p)


def _unwrap_angle(theta: Jet, ref: float) -> Jet:
    shift = round((ref - theta.value) / grp.TWO_PI) * grp.TWO_PI
    return theta + shift


def lie_derivative(op: Operator, f: Callable, p) -> float:
    """Closed-form ``L_k`` or ``R_k`` applied to ``f(x, y, theta, alpha1, alpha2)``."""
    if isinstance(op, str):
        op = operator(op)
    if op.chart != "G" or not op.name[0] in "LR":
        raise ValueError(f"{op.name} is not an L_k or R_k field")
    return apply(op, f, _as_gcoord(p))


def lie_derivative_curve(side: str, k: int, f: Callable, p) -> float:
    """``d/dt f(g * exp tW_k)`` (side ``"L"``) or ``d/dt f(exp tW_k * g)`` (side ``"R"``).

    The group product, the exponential and the Iwasawa coordinates are all
    evaluated on order-1 jets in ``t``; no closed-form field is used.
    """
    k = _check_index(k)
    x, y, th, a1, a2 = _as_gcoord(p)
    t = jets.seed((0.0,), 0, 1)
    zero = 0.0 * t
    w = grp.W[k]
    X = tuple(t * float(c) + zero for c in w.X.ravel())
    Z = tuple(t * float(c) + zero for c in w.Z)
    e_g, e_a = grp.exp_lie_coords(X, Z)
    g = tuple(zero + c for c in grp.nak_coords(x, y, th))
    alpha = (zero + a1, zero + a2)
    if side == "L":
        prod_g, prod_a = grp.multiply_coords(g, alpha, e_g, e_a)
    elif side == "R":
        prod_g, prod_a = grp.multiply_coords(e_g, e_a, g, alpha)
    else:
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    nx, ny, nth = grp.iwasawa_coords(prod_g)
    nth = _unwrap_angle(nth, th)
    return f(nx, ny, nth, prod_a[0], prod_a[1]).partial((1,))


def script_L(j: int, f: Callable, p) -> float:
    """Closed-form ``LL_j f`` at a point of H x C."""
    return apply(operator("ScriptL", k=j), f, p)


def script_L_curve(j: int, f: Callable, p) -> float:
    """``d/dt f(exp tW_j o (tau, z))`` through the action on order-1 jets."""
    j = _check_index(j)
    x, y, u, v = _chart_point("HC", p)
    t = jets.seed((0.0,), 0, 1)
    zero = 0.0 * t
    w = grp.W[j]
    X = tuple(t * float(c) + zero for c in w.X.ravel())
    Z = tuple(t * float(c) + zero for c in w.Z)
    e_g, e_a = grp.exp_lie_coords(X, Z)
    return f(*grp.act_hc_coords(e_g, e_a, x, y, u, v)).partial((1,))


# invariance ---------------------------------------------------------------


def chart_action(chart: str, a: grp.GroupElement) -> Callable:
    """Coordinate map ``p -> a . p`` on the chart (jet friendly)."""
    g = (a.g[0, 0], a.g[0, 1], a.g[1, 0], a.g[1, 1])
    alpha = tuple(a.alpha)
    if chart == "HC":
        return lambda *c: grp.act_hc_coords(g, alpha, *c)
    if chart == "PV":
        return lambda *c: grp.act_pv_coords(g, alpha, *c)
    if chart == "G1":
        return lambda x, y, th: grp.left_sl2_coords(g, x, y, th)
    raise ValueError(f"no action on chart {chart}")


def right_k_action(phi: float) -> Callable:
    return lambda x, y, th: grp.right_k_coords(phi, x, y, th)


def invariance_residual(op: Operator, f: Callable, action: Callable, p) -> float:
    """``|op(f o phi)(p) - (op f)(phi(p))|`` scaled by ``1 + max`` magnitude."""
    pt = _chart_point(op.chart, p)
    lhs = apply(op, lambda *c: f(*action(*c)), pt)
    image = tuple(float(jets.value(c)) for c in action(*pt))
    rhs = apply(op, f, image)
    return abs(lhs - rhs) / (1.0 + max(abs(lhs), abs(rhs)))


def verify_invariance(op: Operator, f: Callable, samples: Iterable) -> float:
    """Max invariance residual over ``(group element or action, point)`` samples."""
    if isinstance(op, str):
        op = operator(op)
    worst = 0.0
    for a, p in samples:
        action = chart_action(op.chart, a) if isinstance(a, grp.GroupElement) else a
        worst = max(worst, invariance_residual(op, f, action, p))
    return worst


def correspondence_residual(f: Callable, q) -> float:
    """``|DeltaTilde(f o T)(q) - (Delta f)(T(q))|`` scaled by ``1 + max`` magnitude."""
    q = _chart_point("PV", q)
    lhs = apply(operator("DeltaTilde"), lambda *c: f(*grp.map_T_coords(*c)), q)
    rhs = apply(operator("Delta"), f, grp.map_T_coords(*q))
    return abs(lhs - rhs) / (1.0 + max(abs(lhs), abs(rhs)))


# eigenfunctions -----------------------------------------------------------


@dataclass(frozen=True)
class EigenReport:
    eigenvalue: complex
    max_residual: float
    samples: int

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol


def eigen_check(op: Operator, f: Callable, lam: complex, points: Iterable) -> EigenReport:
    """Max over points of ``|op f - lam f| / (1 + |lam f|)``."""
    if isinstance(op, str):
        op = operator(op)
    worst = 0.0
    n = 0
    for p in points:
        pt = _chart_point(op.chart, p)
        F = jet_at(f, pt, op.order)
        lf = lam * F.value
        worst = max(worst, abs(op(F).value - lf) / (1.0 + abs(lf)))
        n += 1
    return EigenReport(complex(lam), float(worst), n)


# test-function corpus -----------------------------------------------------


def corpus_hc() -> dict[str, Callable]:
    """Smooth test functions on H x C, well scaled on y in [0.2, 5]."""
    return {
        "gauss_cos": lambda x, y, u, v: jets.exp(-y - v * v) * jets.cos(x + u),
        "power_phase": lambda x, y, u, v: jets.power(y, 0.7) * jets.exp(1j * (0.6 * x - 0.4 * u)) * (1 + 0.3 * v - 0.2 * v * v),
        "poly_gauss": lambda x, y, u, v: (v * v * v - 2 * v) * jets.exp(-0.5 * y - 0.1 * v * v) * jets.sin(0.8 * x + 0.3 * u),
        "mixed": lambda x, y, u, v: jets.power(y, -0.4) * jets.exp(1j * (x + 0.5 * u)) * jets.exp(-0.2 * v * v),
    }


def corpus_g1() -> dict[str, Callable]:
    return {
        "y_theta": lambda x, y, th: jets.power(y, 0.6) * jets.cos(th + 0.3 * x),
        "gauss_theta": lambda x, y, th: jets.exp(-y) * jets.sin(2 * th) * jets.cos(x),
    }


def corpus_g() -> dict[str, Callable]:
    return {
        "g_mixed": lambda x, y, th, a1, a2: jets.power(y, 0.5) * jets.cos(th + x) * jets.exp(-0.1 * (a1 * a1 + a2 * a2)) + a1 * a2 * jets.sin(th),
    }
