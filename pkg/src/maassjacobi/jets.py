"""Truncated multivariate Taylor jets.

A :class:`Jet` stores the Taylor coefficients of a smooth function at a base
point, up to a fixed total degree, in a dense graded table.  Arithmetic on
jets is exact up to truncation, so evaluating an ordinary Python expression on
seeded coordinate jets yields every mixed partial derivative of the
expression at the base point.

The module-level functions (:func:`exp`, :func:`log`, :func:`sin`, ...) accept
jets, Python scalars and numpy arrays alike, so the same test function can be
evaluated on a grid or differentiated.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from numbers import Number

import numpy as np

MAX_ORDER = 4


@functools.lru_cache(maxsize=None)
def multi_indices(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices of total degree <= order, graded then lexicographic.

    The table for ``order - 1`` is a prefix of the table for ``order``, which
    makes truncation a slice.
    """
    out = []
    for deg in range(order + 1):
        level = [a for a in itertools.product(range(deg + 1), repeat=nvars) if sum(a) == deg]
        out.extend(sorted(level, reverse=True))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _position(nvars: int, order: int) -> dict:
    return {a: i for i, a in enumerate(multi_indices(nvars, order))}


@functools.lru_cache(maxsize=None)
def _product_table(nvars: int, order: int):
    idx = multi_indices(nvars, order)
    pos = _position(nvars, order)
    rows = []
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            if sum(a) + sum(b) <= order:
                k = pos[tuple(p + q for p, q in zip(a, b))]
                rows.append((k, i, j))
    rows.sort()
    K, I, J = (np.array(col, dtype=np.intp) for col in zip(*rows))
    starts = np.flatnonzero(np.r_[True, K[1:] != K[:-1]])
    return I, J, starts


@functools.lru_cache(maxsize=None)
def _derivative_table(nvars: int, order: int, var: int):
    # maps coefficients of an order-`order` jet to those of d/dx_var (order - 1)
    src = _position(nvars, order)
    target = multi_indices(nvars, order - 1)
    take = np.empty(len(target), dtype=np.intp)
    scale = np.empty(len(target))
    for t, b in enumerate(target):
        a = list(b)
        a[var] += 1
        take[t] = src[tuple(a)]
        scale[t] = a[var]
    return take, scale


def ncoeffs(nvars: int, order: int) -> int:
    return math.comb(nvars + order, order)


class Jet:
    """Truncated Taylor expansion ``sum c_a dx^a`` around ``base``.

    ``coeffs[k]`` is the coefficient of the k-th multi-index of
    :func:`multi_indices`; the mixed partial derivative is the coefficient
    times the multi-index factorial.
    """

    __slots__ = ("nvars", "order", "coeffs", "base")
    __array_priority__ = 1000

    def __init__(self, coeffs, nvars: int, order: int, base=None):
        if not 1 <= nvars <= 6:
            raise ValueError(f"nvars must be in 1..6, got {nvars}")
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"order must be in 0..{MAX_ORDER}, got {order}")
        coeffs = np.asarray(coeffs)
        if coeffs.dtype.kind not in "fc":
            coeffs = coeffs.astype(float)
        if coeffs.shape != (ncoeffs(nvars, order),):
            raise ValueError(
                f"expected {ncoeffs(nvars, order)} coefficients for nvars={nvars}, "
                f"order={order}, got shape {coeffs.shape}"
            )
        self.nvars = nvars
        self.order = order
        self.coeffs = coeffs
        self.base = None if base is None else tuple(float(b) for b in base)

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, value, nvars: int, order: int, base=None) -> "Jet":
        dtype = complex if isinstance(value, complex) or np.iscomplexobj(value) else float
        c = np.zeros(ncoeffs(nvars, order), dtype=dtype)
        c[0] = value
        return cls(c, nvars, order, base)

    def _like(self, coeffs) -> "Jet":
        return Jet(coeffs, self.nvars, self.order, self.base)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            self._check(other)
            return other
        return Jet.constant(other, self.nvars, self.order, self.base)

    def _check(self, other: "Jet") -> None:
        if (self.nvars, self.order) != (other.nvars, other.order):
            raise ValueError(
                f"jet shape mismatch: (nvars={self.nvars}, order={self.order}) vs "
                f"(nvars={other.nvars}, order={other.order})"
            )
        if self.base is not None and other.base is not None and self.base != other.base:
            raise ValueError(f"jet base point mismatch: {self.base} vs {other.base}")

    # inspection -----------------------------------------------------------

    @property
    def value(self):
        v = self.coeffs[0]
        return complex(v) if np.iscomplexobj(self.coeffs) else float(v)

    def coefficient(self, multi_index) -> complex | float:
        multi_index = tuple(multi_index)
        if len(multi_index) != self.nvars:
            raise ValueError(f"multi-index {multi_index} has wrong length for {self.nvars} variables")
        if sum(multi_index) > self.order:
            raise ValueError(f"degree {sum(multi_index)} exceeds jet order {self.order}")
        return self.coeffs[_position(self.nvars, self.order)[multi_index]]

    def partial(self, multi_index):
        """Mixed partial derivative d^|a| f / dx^a at the base point."""
        c = self.coefficient(multi_index)
        scale = math.prod(math.factorial(k) for k in multi_index)
        return c * scale

    def gradient(self) -> np.ndarray:
        return np.array([self.partial(tuple(int(i == k) for i in range(self.nvars))) for k in range(self.nvars)])

    def hessian(self) -> np.ndarray:
        n = self.nvars
        H = np.empty((n, n), dtype=self.coeffs.dtype)
        for i in range(n):
            for j in range(n):
                a = [0] * n
                a[i] += 1
                a[j] += 1
                H[i, j] = self.partial(a)
        return H

    def diff(self, var: int) -> "Jet":
        """Jet of the partial derivative in ``var``; the order drops by one."""
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range for {self.nvars} variables")
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        take, scale = _derivative_table(self.nvars, self.order, var)
        return Jet(self.coeffs[take] * scale, self.nvars, self.order - 1, self.base)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order from {self.order} to {order}")
        return Jet(self.coeffs[: ncoeffs(self.nvars, order)], self.nvars, order, self.base)

    @property
    def real(self) -> "Jet":
        return self._like(self.coeffs.real.copy())

    @property
    def imag(self) -> "Jet":
        return self._like(self.coeffs.imag.copy())

    def conjugate(self) -> "Jet":
        return self._like(self.coeffs.conj())

    def __repr__(self) -> str:
        terms = {a: c for a, c in zip(multi_indices(self.nvars, self.order), self.coeffs) if c != 0}
        return f"Jet(nvars={self.nvars}, order={self.order}, {terms})"

    # arithmetic -----------------------------------------------------------

    def __neg__(self):
        return self._like(-self.coeffs)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return self._like(self.coeffs + other.coeffs)
        if isinstance(other, (Number, np.number)):
            c = self.coeffs.astype(np.result_type(self.coeffs, other), copy=True)
            c[0] += other
            return self._like(c)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Jet, Number, np.number)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            I, J, starts = _product_table(self.nvars, self.order)
            return self._like(np.add.reduceat(self.coeffs[I] * other.coeffs[J], starts))
        if isinstance(other, (Number, np.number)):
            return self._like(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        derivs = [(-1) ** k * math.factorial(k) / a0 ** (k + 1) for k in range(self.order + 1)]
        return compose(self, derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if isinstance(other, (Number, np.number)):
            return self._like(self.coeffs / other)
        return NotImplemented

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        if isinstance(p, (int, np.integer)) and p >= 0:
            out = Jet.constant(1.0, self.nvars, self.order, self.base)
            base = self
            k = int(p)
            while k:
                if k & 1:
                    out = out * base
                k >>= 1
                if k:
                    base = base * base
            return out
        return power(self, p)

    def __rpow__(self, b):
        return exp(self * np.log(b + 0j if np.real(b) < 0 else b))


def compose(a: Jet, derivs) -> Jet:
    """Compose a univariate function with a jet.

    ``derivs[k]`` is the k-th derivative of the function at ``a.value``.  Uses
    Horner evaluation in the nilpotent part of ``a``.
    """
    derivs = list(derivs)
    if len(derivs) < a.order + 1:
        raise ValueError(f"need {a.order + 1} derivatives, got {len(derivs)}")
    dtype = np.result_type(a.coeffs, *[np.asarray(d) for d in derivs])
    nil = Jet(a.coeffs.astype(dtype, copy=True), a.nvars, a.order, a.base)
    nil.coeffs[0] = 0
    out = Jet.constant(derivs[a.order] / math.factorial(a.order), a.nvars, a.order, a.base)
    out = Jet(out.coeffs.astype(dtype), a.nvars, a.order, a.base)
    for k in range(a.order - 1, -1, -1):
        out = out * nil + derivs[k] / math.factorial(k)
    return out


def seed(base, var: int, order: int) -> Jet:
    """Coordinate jet ``x_var + dx_var`` at ``base``."""
    base = tuple(float(b) for b in base)
    n = len(base)
    if not 0 <= var < n:
        raise IndexError(f"variable index {var} out of range for {n} variables")
    if order < 1:
        raise ValueError("seed requires order >= 1")
    c = np.zeros(ncoeffs(n, order))
    c[0] = base[var]
    unit = tuple(int(i == var) for i in range(n))
    c[_position(n, order)[unit]] = 1.0
    return Jet(c, n, order, base)


def variables(base, order: int) -> tuple[Jet, ...]:
    return tuple(seed(base, i, order) for i in range(len(base)))


def coordinates_like(F: Jet, order: int | None = None) -> tuple[Jet, ...]:
    """Coordinate jets sharing the base point of ``F`` (at ``order``)."""
    if F.base is None:
        raise ValueError("jet has no base point")
    order = F.order if order is None else order
    if order == 0:
        return tuple(Jet.constant(b, F.nvars, 0, F.base) for b in F.base)
    return variables(F.base, order)


def jet_of(f, point, order: int) -> Jet:
    """Evaluate the smooth map ``f`` on coordinate jets at ``point``."""
    point = tuple(float(p) for p in point)
    if order == 0:
        args = tuple(Jet.constant(p, len(point), 0, point) for p in point)
    else:
        args = variables(point, order)
    out = f(*args)
    if not isinstance(out, Jet):
        out = Jet.constant(out, len(point), order, point)
    return out


def extract_partial(a: Jet, multi_index):
    return a.partial(multi_index)


# elementary functions -----------------------------------------------------


def _is_real_jet(a: Jet) -> bool:
    return not np.iscomplexobj(a.coeffs)


def exp(a):
    if isinstance(a, Jet):
        e = np.exp(a.coeffs[0])
        return compose(a, [e] * (a.order + 1))
    return np.exp(a)


def log(a):
    if isinstance(a, Jet):
        a0 = a.coeffs[0]
        if _is_real_jet(a):
            if a0 <= 0:
                raise ValueError(f"log of non-positive jet value {a0}")
            l0 = math.log(a0)
        else:
            if a0 == 0:
                raise ValueError("log of zero jet value")
            l0 = cmath.log(a0)
        derivs = [l0] + [(-1) ** (k - 1) * math.factorial(k - 1) / a0 ** k for k in range(1, a.order + 1)]
        return compose(a, derivs)
    return np.log(a)


def power(a, p):
    """``a ** p`` for real or complex exponent ``p`` (principal branch)."""
    if isinstance(a, Jet):
        a0 = a.coeffs[0]
        integral = isinstance(p, (int, np.integer)) or (isinstance(p, float) and p.is_integer() and p >= 0)
        if integral and p >= 0:
            return a ** int(p)
        if _is_real_jet(a) and a0 <= 0 and not integral:
            raise ValueError(f"non-integer power {p} of non-positive jet value {a0}")
        if a0 == 0:
            raise ValueError("negative power of zero jet value")
        derivs = []
        coef = 1.0
        for k in range(a.order + 1):
            if _is_real_jet(a) and not isinstance(p, complex):
                derivs.append(coef * a0 ** (p - k))
            else:
                derivs.append(coef * cmath.exp((p - k) * cmath.log(a0)))
            coef *= p - k
        return compose(a, derivs)
    return np.power(a, p)


def sqrt(a):
    if isinstance(a, Jet):
        if _is_real_jet(a) and a.coeffs[0] <= 0:
            raise ValueError(f"sqrt of non-positive jet value {a.coeffs[0]}")
        return power(a, 0.5)
    return np.sqrt(a)


def sin(a):
    if isinstance(a, Jet):
        s, c = np.sin(a.coeffs[0]), np.cos(a.coeffs[0])
        return compose(a, [s, c, -s, -c, s][: a.order + 1])
    return np.sin(a)


def cos(a):
    if isinstance(a, Jet):
        s, c = np.sin(a.coeffs[0]), np.cos(a.coeffs[0])
        return compose(a, [c, -s, -c, s, c][: a.order + 1])
    return np.cos(a)


def cosh(a):
    return (exp(a) + exp(-a)) / 2


def sinh(a):
    return (exp(a) - exp(-a)) / 2


def atan2(b, a):
    """Angle of ``(a, b)`` for real jets, continuous at the base point."""
    if isinstance(a, Jet) or isinstance(b, Jet):
        ref = a if isinstance(a, Jet) else b
        a = ref._lift(a)
        b = ref._lift(b)
        a0, b0 = float(a.coeffs[0].real), float(b.coeffs[0].real)
        theta0 = math.atan2(b0, a0)
        # atan2(b, a) - theta0 = atan(q) with q nilpotent
        q = (a0 * b - b0 * a) / (a0 * a + b0 * b)
        q.coeffs[0] = 0.0
        atan_derivs = [0.0, 1.0, 0.0, -2.0, 0.0]
        return compose(q, atan_derivs[: q.order + 1]) + theta0
    return np.arctan2(b, a)


def value(a):
    """Plain value of a jet (or the number itself)."""
    return a.value if isinstance(a, Jet) else a


def real(a):
    return a.real if isinstance(a, Jet) else np.real(a)


def imag(a):
    return a.imag if isinstance(a, Jet) else np.imag(a)
