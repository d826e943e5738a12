"""The group SL(2,R) x R^2 with twisted product, its Lie algebra and actions.

An element is a pair ``(g, alpha)`` with ``det g = 1`` and ``alpha`` a row
vector.  The product is ``(g, a) * (h, b) = (g h, a h^{-T} + b)``.  The group
acts on H x C by::

    (g, a) o (tau, z) = ((d tau - c) / (-b tau + a), (z + a1 tau + a2) / (-b tau + a))

and on pairs (Y, V) of unimodular positive matrices and row vectors by
``(g Y g^T, (V + alpha) g^T)``.

Functions whose names end in ``_coords`` take and return plain coordinate
tuples.  They only use ring operations and the helpers in :mod:`jets`, so the
entries may be floats or :class:`~maassjacobi.jets.Jet` objects.  This is how
Jacobians of the actions and curve derivatives are computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets

DET_TOL = 1e-12
TRACE_TOL = 1e-12
TWO_PI = 2.0 * math.pi


def _readonly(a, shape) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Mat2:
    a11: float
    a12: float
    a21: float
    a22: float

    @classmethod
    def from_array(cls, m) -> "Mat2":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> float:
        return self.a11 + self.a22


def _as_matrix(g) -> np.ndarray:
    if isinstance(g, Mat2):
        g = g.to_array()
    return _readonly(g, (2, 2))


class GroupElement:
    """Element ``(g, alpha)``; ``det g`` must be 1 within :data:`DET_TOL`."""

    __slots__ = ("g", "alpha")

    def __init__(self, g, alpha=(0.0, 0.0)):
        g = _as_matrix(g)
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"det g = {det!r} differs from 1 by more than {DET_TOL}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "alpha", _readonly(alpha, (2,)))

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(np.eye(2))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return np.array_equal(self.g, other.g) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self):
        return hash((self.g.tobytes(), self.alpha.tobytes()))

    def allclose(self, other: "GroupElement", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.g, other.g, rtol=0, atol=atol) and np.allclose(self.alpha, other.alpha, rtol=0, atol=atol))

    def embed(self) -> np.ndarray:
        """Faithful 3x3 matrix ``[[g^{-T}, 0], [alpha, 1]]``."""
        M = np.zeros((3, 3))
        M[:2, :2] = np.linalg.inv(self.g).T
        M[2, :2] = self.alpha
        M[2, 2] = 1.0
        return M

    @classmethod
    def from_embedding(cls, M) -> "GroupElement":
        M = np.asarray(M, dtype=float)
        return cls(np.linalg.inv(M[:2, :2]).T, M[2, :2])

    def __repr__(self):
        return f"GroupElement(g={self.g.tolist()}, alpha={self.alpha.tolist()})"


class LieElement:
    """Element ``(X, Z)`` of the Lie algebra; ``tr X`` must vanish."""

    __slots__ = ("X", "Z")

    def __init__(self, X, Z=(0.0, 0.0)):
        X = _as_matrix(X)
        if abs(X[0, 0] + X[1, 1]) > TRACE_TOL:
            raise ValueError(f"tr X = {X[0, 0] + X[1, 1]!r} is not zero")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Z", _readonly(Z, (2,)))

    def __setattr__(self, name, value):
        raise AttributeError("LieElement is immutable")

    @classmethod
    def zero(cls) -> "LieElement":
        return cls(np.zeros((2, 2)))

    @classmethod
    def from_vector(cls, c) -> "LieElement":
        """Combination ``sum c_k W_k`` of the standard basis."""
        c = np.asarray(c, dtype=float)
        return cls([[c[2], c[0]], [c[1], -c[2]]], c[3:5])

    def to_vector(self) -> np.ndarray:
        """Coordinates in the basis ``W_1, ..., W_5``."""
        return np.array([self.X[0, 1], self.X[1, 0], self.X[0, 0], self.Z[0], self.Z[1]])

    def __add__(self, other):
        return LieElement(self.X + other.X, self.Z + other.Z)

    def __sub__(self, other):
        return LieElement(self.X - other.X, self.Z - other.Z)

    def __neg__(self):
        return LieElement(-self.X, -self.Z)

    def __mul__(self, t):
        return LieElement(self.X * t, self.Z * t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return np.array_equal(self.X, other.X) and np.array_equal(self.Z, other.Z)

    def __hash__(self):
        return hash((self.X.tobytes(), self.Z.tobytes()))

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_vector()))

    def __repr__(self):
        return f"LieElement(X={self.X.tolist()}, Z={self.Z.tolist()})"


def basis(k: int) -> LieElement:
    """Basis vector ``W_k`` for k in 1..5."""
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= 5:
        raise ValueError(f"basis index must be an integer in 1..5, got {k!r}")
    c = np.zeros(5)
    c[k - 1] = 1.0
    return LieElement.from_vector(c)


W = {k: basis(k) for k in range(1, 6)}


def _floatify(obj) -> None:
    for name in obj.__dataclass_fields__:
        object.__setattr__(obj, name, float(getattr(obj, name)))


@dataclass(frozen=True)
class GCoord:
    """Coordinates ``g = n(x) a(y) k(theta)`` and ``alpha = (alpha1, alpha2)``."""

    x: float
    y: float
    theta: float
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        _floatify(self)
        if not self.y > 0:
            raise ValueError(f"y must be positive, got {self.y}")
        th = math.fmod(self.theta, TWO_PI) + 0.0
        if th < 0:
            th += TWO_PI
        if th >= TWO_PI:
            th = 0.0
        object.__setattr__(self, "theta", th)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.theta, self.alpha1, self.alpha2)


@dataclass(frozen=True)
class PointHC:
    """Point ``(tau, z) = (x + iy, u + iv)`` of H x C."""

    x: float
    y: float
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        _floatify(self)
        if not self.y > 0:
            raise ValueError(f"y must be positive, got {self.y}")

    @classmethod
    def from_complex(cls, tau: complex, z: complex) -> "PointHC":
        return cls(tau.real, tau.imag, z.real, z.imag)

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.u, self.v)


@dataclass(frozen=True)
class PointPV:
    """Point ``(Y, V)`` with ``Y = [[1/y, -x/y], [-x/y, x^2/y + y]]`` and ``V = (v1, v2)``."""

    x: float
    y: float
    v1: float = 0.0
    v2: float = 0.0

    def __post_init__(self):
        _floatify(self)
        if not self.y > 0:
            raise ValueError(f"y must be positive, got {self.y}")

    @property
    def Y(self) -> np.ndarray:
        x, y = self.x, self.y
        return np.array([[1 / y, -x / y], [-x / y, x * x / y + y]])

    @property
    def V(self) -> np.ndarray:
        return np.array([self.v1, self.v2])

    @classmethod
    def from_matrices(cls, Y, V) -> "PointPV":
        Y = np.asarray(Y, dtype=float)
        det = np.linalg.det(Y)
        if abs(det - 1.0) > 1e-10 or Y[0, 0] <= 0 or abs(Y[0, 1] - Y[1, 0]) > 1e-12 * max(1.0, abs(Y[0, 1])):
            raise ValueError(f"Y must be symmetric positive with det 1, got det {det}")
        y = 1.0 / Y[0, 0]
        return cls(-Y[0, 1] * y, y, float(V[0]), float(V[1]))

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.v1, self.v2)


ORIGIN_HC = PointHC(0.0, 1.0, 0.0, 0.0)


# generic coordinate kernels ----------------------------------------------


def multiply_coords(g, alpha, h, beta):
    """Product on entry tuples ``g = (a, b, c, d)``; works for jet entries."""
    a, b, c, d = g
    p, q, r, s = h
    gh = (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)
    # h^{-T} = [[s, -r], [-q, p]] since det h = 1
    al = (alpha[0] * s - alpha[1] * q + beta[0], -alpha[0] * r + alpha[1] * p + beta[1])
    return gh, al


def act_hc_coords(g, alpha, x, y, u, v):
    """Action on H x C in real coordinates (jet friendly)."""
    a, b, c, d = g
    ar = a - b * x  # real part of -b tau + a
    ai = -(b * y)
    den = ar * ar + ai * ai
    nr = d * x - c
    ni = d * y
    xr = (nr * ar + ni * ai) / den
    yr = (ni * ar - nr * ai) / den
    wr = u + alpha[0] * x + alpha[1]
    wi = v + alpha[0] * y
    ur = (wr * ar + wi * ai) / den
    vr = (wi * ar - wr * ai) / den
    return xr, yr, ur, vr


def act_pv_coords(g, alpha, x, y, v1, v2):
    """Action on (Y, V) in the coordinates (x, y, v1, v2) (jet friendly)."""
    a, b, c, d = g
    Y11 = 1 / y
    Y12 = -x / y
    Y22 = x * x / y + y
    # g Y g^T
    n11 = a * (a * Y11 + b * Y12) + b * (a * Y12 + b * Y22)
    n12 = a * (c * Y11 + d * Y12) + b * (c * Y12 + d * Y22)
    yn = 1 / n11
    xn = -n12 * yn
    w1 = v1 + alpha[0]
    w2 = v2 + alpha[1]
    return xn, yn, w1 * a + w2 * b, w1 * c + w2 * d


def map_T_coords(x, y, v1, v2):
    return x, y, v1 * x + v2, v1 * y


def map_T_inv_coords(x, y, u, v):
    return x, y, v / y, u - x * v / y


def nak_coords(x, y, theta):
    """Entries of ``n(x) a(y) k(theta)``."""
    r = jets.sqrt(y)
    ct, st = jets.cos(theta), jets.sin(theta)
    a11 = r * ct - x * st / r
    a12 = r * st + x * ct / r
    return (a11, a12, -st / r, ct / r)


def iwasawa_coords(g):
    """(x, y, theta) with ``g = n(x) a(y) k(theta)``; theta not reduced."""
    a, b, c, d = g
    den = c * c + d * d
    return (a * c + b * d) / den, 1 / den, jets.atan2(-c, d)


def left_sl2_coords(gamma, x, y, theta):
    """Left multiplication by ``gamma`` on SL(2,R) in Iwasawa coordinates."""
    p, q, r, s = gamma
    a, b, c, d = nak_coords(x, y, theta)
    return iwasawa_coords((p * a + q * c, p * b + q * d, r * a + s * c, r * b + s * d))


def right_k_coords(phi, x, y, theta):
    """Right multiplication by the rotation ``k(phi)``: theta shifts by phi."""
    return x, y, theta + phi


# group operations --------------------------------------------------------


def _entries(a: GroupElement):
    g = a.g
    return (g[0, 0], g[0, 1], g[1, 0], g[1, 1])


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    gh = a.g @ b.g
    # b.g^{-T} via the adjugate, exact for det 1
    p, q, r, s = _entries(b)
    hinvT = np.array([[s, -r], [-q, p]])
    return GroupElement(gh, a.alpha @ hinvT + b.alpha)


def inverse(a: GroupElement) -> GroupElement:
    p, q, r, s = _entries(a)
    ginv = np.array([[s, -q], [-r, p]])
    return GroupElement(ginv, -a.alpha @ a.g.T)


def act_hc(a: GroupElement, p: PointHC) -> PointHC:
    b = a.g[0, 1]
    den = abs(-b * p.tau + a.g[0, 0])
    assert den > 1e-14, "degenerate denominator in action on H x C"
    return PointHC(*act_hc_coords(_entries(a), a.alpha, *p.as_tuple()))


def act_pv(a: GroupElement, q: PointPV) -> PointPV:
    return PointPV(*act_pv_coords(_entries(a), a.alpha, *q.as_tuple()))


def act_pv_matrices(a: GroupElement, Y, V):
    """Matrix form ``(g Y g^T, (V + alpha) g^T)``."""
    Y = np.asarray(Y, dtype=float)
    V = np.asarray(V, dtype=float)
    return a.g @ Y @ a.g.T, (V + a.alpha) @ a.g.T


def map_T(q: PointPV) -> PointHC:
    return PointHC(*map_T_coords(*q.as_tuple()))


def map_T_inv(p: PointHC) -> PointPV:
    return PointPV(*map_T_inv_coords(*p.as_tuple()))


def section_gY(q: PointPV) -> GroupElement:
    """Element ``(g_Y, V g_Y^{-T})`` with ``g_Y g_Y^T = Y`` moving (i, 0) to T(Y, V)."""
    r = math.sqrt(q.y)
    gY = np.array([[1 / r, 0.0], [-q.x / r, r]])
    return GroupElement(gY, q.V @ np.linalg.inv(gY).T)


def lie_bracket(u: LieElement, w: LieElement) -> LieElement:
    X = u.X @ w.X - w.X @ u.X
    return LieElement(X, w.Z @ u.X.T - u.Z @ w.X.T)


def lie_embed(u: LieElement) -> np.ndarray:
    """Image ``[[-X^T, 0], [Z, 0]]`` in 3x3 matrices."""
    M = np.zeros((3, 3))
    M[:2, :2] = -u.X.T
    M[2, :2] = u.Z
    return M


def _is_jet_array(M) -> bool:
    return M.dtype == object


def matrix_exp(M, terms: int = 20):
    """Scaling and squaring with a Taylor polynomial.

    Also works on object arrays of jets, where the norm used for scaling is
    that of the base-point values.
    """
    M = np.asarray(M)
    n = M.shape[0]
    vals = np.vectorize(jets.value, otypes=[complex])(M) if _is_jet_array(M) else M
    norm = float(np.abs(vals).sum(axis=1).max())
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    A = M / (2.0 ** s)
    eye = np.eye(n) if not _is_jet_array(M) else np.eye(n).astype(object)
    out = eye.copy()
    term = eye.copy()
    for k in range(1, terms + 1):
        term = term.dot(A) / k
        out = out + term
    for _ in range(s):
        out = out.dot(out)
    return out


def exp_lie(u: LieElement) -> GroupElement:
    E = matrix_exp(lie_embed(u))
    return GroupElement.from_embedding(E)


def exp_lie_coords(X, Z):
    """Exponential of ``(X, Z)`` given as entry tuples; jet friendly."""
    M = np.zeros((3, 3), dtype=object)
    M[:] = 0.0
    M[0, 0], M[0, 1], M[1, 0], M[1, 1] = -X[0], -X[2], -X[1], -X[3]
    M[2, 0], M[2, 1] = Z[0], Z[1]
    E = matrix_exp(M)
    # E[:2,:2] = g^{-T} with det 1, so g = [[E11, -E10], [-E01, E00]]
    g = (E[1, 1], -E[1, 0], -E[0, 1], E[0, 0])
    return g, (E[2, 0], E[2, 1])


def exp_basis(k: int, t: float) -> GroupElement:
    """Closed form of ``exp(t W_k)``."""
    if k == 1:
        return GroupElement([[1, t], [0, 1]])
    if k == 2:
        return GroupElement([[1, 0], [t, 1]])
    if k == 3:
        return GroupElement([[math.exp(t), 0], [0, math.exp(-t)]])
    if k == 4:
        return GroupElement(np.eye(2), (t, 0))
    if k == 5:
        return GroupElement(np.eye(2), (0, t))
    raise ValueError(f"basis index must be in 1..5, got {k}")


def killing_form(u: LieElement, w: LieElement) -> float:
    return float(5.0 * np.trace(u.X @ w.X))


def ad_matrix(u: LieElement) -> np.ndarray:
    """Matrix of ``ad u`` in the basis ``W_1..W_5`` (columns are images)."""
    return np.column_stack([lie_bracket(u, W[k]).to_vector() for k in range(1, 6)])


def trace_form(u: LieElement, w: LieElement) -> float:
    """``tr(ad u o ad w)`` from structure constants."""
    return float(np.trace(ad_matrix(u) @ ad_matrix(w)))


def structure_constants() -> np.ndarray:
    """``C[i, j, k]`` with ``[W_i, W_j] = sum_k C[i, j, k] W_k`` (0-based)."""
    C = np.zeros((5, 5, 5))
    for i in range(5):
        for j in range(5):
            C[i, j] = lie_bracket(W[i + 1], W[j + 1]).to_vector()
    return C


def adjoint(a: GroupElement, u: LieElement) -> LieElement:
    g = a.g
    p, q, r, s = _entries(a)
    ginv = np.array([[s, -q], [-r, p]])
    return LieElement(g @ u.X @ ginv, (u.Z - a.alpha @ u.X.T) @ g.T)


def iwasawa(a: GroupElement) -> GCoord:
    x, y, th = iwasawa_coords(_entries(a))
    return GCoord(float(x), float(y), float(th), float(a.alpha[0]), float(a.alpha[1]))


def from_gcoord(c: GCoord) -> GroupElement:
    a, b, cc, d = nak_coords(c.x, c.y, c.theta)
    return GroupElement([[a, b], [cc, d]], (c.alpha1, c.alpha2))


def rotation(theta: float) -> GroupElement:
    ct, st = math.cos(theta), math.sin(theta)
    return GroupElement([[ct, st], [-st, ct]])


@dataclass(frozen=True)
class RootSpaceResult:
    eigenvalue: float
    residual: float
    is_eigenvector: bool


def root_space_check(H: LieElement, u: LieElement, tol: float = 1e-12) -> RootSpaceResult:
    """Eigenvalue of ``ad H`` on ``u`` for ``H`` in ``R W_3``."""
    h = H.to_vector()
    if np.abs(h[[0, 1, 3, 4]]).max() > 0:
        raise ValueError("H must be a multiple of W_3")
    uv = u.to_vector()
    nrm = float(uv @ uv)
    if nrm == 0:
        raise ValueError("u must be nonzero")
    image = lie_bracket(H, u).to_vector()
    lam = float(image @ uv) / nrm
    res = float(np.linalg.norm(image - lam * uv))
    return RootSpaceResult(lam, res, res <= tol * (1.0 + abs(lam)) * math.sqrt(nrm))


def invariant_polynomials(u: LieElement, tol: float = 1e-12) -> tuple[float, float, float, float]:
    """K-invariants ``(P, xi, P1, P2)`` of ``u = (X, Z)`` with X symmetric."""
    X = u.X
    if abs(X[0, 1] - X[1, 0]) > tol:
        raise ValueError("u is not in p: X must be symmetric")
    x, y = X[0, 0], X[0, 1]
    z1, z2 = u.Z
    P = 0.25 * (x * x + y * y)
    xi = z1 * z1 + z2 * z2
    P1 = 0.5 * (z2 * z2 - z1 * z1) * x - z1 * z2 * y
    P2 = 0.5 * (z2 * z2 - z1 * z1) * y + z1 * z2 * x
    return float(P), float(xi), float(P1), float(P2)


# discrete subgroup generators used for invariance checks
GAMMA_GENERATORS = {
    "S": GroupElement([[0, -1], [1, 0]]),
    "T": GroupElement([[1, 1], [0, 1]]),
    "e1": GroupElement(np.eye(2), (1, 0)),
    "e2": GroupElement(np.eye(2), (0, 1)),
}


def random_sl2(rng: np.random.Generator, bound: float = 2.0, min_det: float = 0.1) -> np.ndarray:
    """Uniform entries in [-bound, bound], rescaled to det 1 (rejecting small det)."""
    while True:
        m = rng.uniform(-bound, bound, (2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det > min_det:
            m = m / math.sqrt(det)
            # fix the rounding so the det invariant holds tightly
            m[1, 1] = (1.0 + m[0, 1] * m[1, 0]) / m[0, 0] if abs(m[0, 0]) > 0.25 else m[1, 1]
            return m


def random_group_element(rng: np.random.Generator, bound: float = 2.0) -> GroupElement:
    return GroupElement(random_sl2(rng, bound), rng.uniform(-bound, bound, 2))


def random_lie_element(rng: np.random.Generator, bound: float = 1.0) -> LieElement:
    return LieElement.from_vector(rng.uniform(-bound, bound, 5))


def random_point_hc(rng: np.random.Generator, ybounds=(0.2, 5.0), bound: float = 5.0) -> PointHC:
    return PointHC(rng.uniform(-bound, bound), rng.uniform(*ybounds), rng.uniform(-bound, bound), rng.uniform(-bound, bound))
