"""Modified Bessel function K_s(z) of complex order, and a catalog of eigenfunctions.

``K_s(z) = 1/2 int_0^inf exp(-(z/2)(t + 1/t)) t^(s-1) dt`` becomes, after
``t = e^w``, the integral ``1/2 int exp(-z cosh w + s w) dw`` over the real
line.  The integrand decays double exponentially, so the trapezoid rule on a
truncated interval converges geometrically.  For complex arguments the line is
moved to ``Im w = eta`` (allowed while ``|eta| < pi/2 - |arg z|``), with
``eta`` chosen to minimise the peak of the integrand and hence cancellation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets
from .jets import Jet

EPS = np.finfo(float).eps
LOG_CUT = math.log(1e18)
ORDER_WINDOW = 50.0
DEFAULT_RTOL = 1e-10


class QuadratureError(ArithmeticError):
    """Raised when the quadrature cannot reach the requested accuracy."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved relative error estimate {estimate:.3e})")
        self.estimate = estimate


@dataclass(frozen=True)
class BesselResult:
    values: np.ndarray  # z-derivatives of order 0..k
    rel_error: np.ndarray  # estimated relative error per entry
    eta: float
    nodes: int


def _log_magnitude(t, eta, s, z, k):
    w = t + 1j * eta
    return (-z * np.cosh(w) + s * w).real + k * np.log(np.abs(np.cosh(w)))


def _choose_height(s: complex, z: complex, kmax: int, grid: np.ndarray) -> float:
    if s.imag == 0 and z.imag == 0:
        return 0.0
    lim = math.pi / 2 - abs(cmath.phase(z))
    saddle = cmath.asinh(s / z).imag
    cands = list(np.linspace(-lim, lim, 43)[1:-1]) + [max(min(saddle, 0.95 * lim), -0.95 * lim)]
    return float(min(cands, key=lambda e: _log_magnitude(grid, e, s, z, kmax).max()))


def bessel_K_quad(s, z, kmax: int = 0, rtol: float = DEFAULT_RTOL, max_halvings: int = 12) -> BesselResult:
    """``d^k/dz^k K_s(z)`` for ``k = 0..kmax`` with error estimates.

    Derivatives come from differentiating under the integral, which adds the
    factor ``(-cosh w)^k`` to the integrand.
    """
    s = complex(s)
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"K_s(z) requires Re z > 0, got z = {z}")
    if abs(s.real) > ORDER_WINDOW or abs(s.imag) > ORDER_WINDOW:
        raise ValueError(f"order s = {s} outside the supported window |Re s|, |Im s| <= {ORDER_WINDOW}")
    if kmax < 0 or kmax > 4:
        raise ValueError(f"derivative order must be in 0..4, got {kmax}")
    # centre the search window on the real part of the saddle point
    centre = cmath.asinh(s / z).real
    grid = np.linspace(centre - 30, centre + 30, 1201)
    eta = _choose_height(s, z, kmax, grid)
    lm = _log_magnitude(grid, eta, s, z, kmax)
    peak = float(lm.max())
    keep = np.flatnonzero(lm > peak - LOG_CUT)
    lo = grid[max(keep[0] - 1, 0)]
    hi = grid[min(keep[-1] + 1, len(grid) - 1)]
    while _log_magnitude(hi, eta, s, z, kmax) > peak - LOG_CUT:
        hi += 0.5
    while _log_magnitude(lo, eta, s, z, kmax) > peak - LOG_CUT:
        lo -= 0.5
    ks = np.arange(kmax + 1)

    def trapezoid(h):
        n = int(math.ceil((hi - lo) / h))
        w = lo + h * np.arange(n + 1) + 1j * eta
        base = np.exp(-z * np.cosh(w) + s * w)
        f = base[None, :] * (-np.cosh(w))[None, :] ** ks[:, None]
        # endpoint weights are irrelevant: the integrand is below 1e-18 of its peak there
        return 0.5 * h * f.sum(axis=1), 0.5 * h * np.abs(f).sum(axis=1), n + 1

    h = 0.25
    prev, _, _ = trapezoid(h)
    for _ in range(max_halvings):
        h /= 2
        cur, absint, n = trapezoid(h)
        diff = np.abs(cur - prev)
        rounding = 8 * EPS * absint
        mag = np.maximum(np.abs(cur), np.finfo(float).tiny)
        if np.all(diff <= np.maximum(0.1 * rtol * mag, rounding)):
            break
        prev = cur
    rel = (diff + rounding) / mag
    return BesselResult(cur, rel, eta, n)


def _checked(res: BesselResult, rtol: float, what: str):
    worst = float(res.rel_error.max())
    if not worst <= rtol:
        raise QuadratureError(f"{what} did not converge", worst)
    return res.values


def bessel_K(s, z, rtol: float = DEFAULT_RTOL) -> complex:
    """``K_s(z)`` for ``Re z > 0`` and ``|Re s|, |Im s| <= 50``."""
    return complex(_checked(bessel_K_quad(s, z, 0, rtol), rtol, f"K_{s}({z})")[0])


def bessel_K_dz(s, z, order: int = 1, rtol: float = DEFAULT_RTOL) -> complex:
    """``d^order/dz^order K_s(z)`` by differentiation under the integral sign."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order}")
    return complex(_checked(bessel_K_quad(s, z, order, rtol), rtol, f"d^{order} K_{s}({z})")[order])


def bessel_K_jet(s, z: Jet, rtol: float = DEFAULT_RTOL) -> Jet:
    """``K_s`` composed with a jet argument (real base value)."""
    vals = _checked(bessel_K_quad(s, z.value, z.order, rtol), rtol, f"K_{s} jet")
    return jets.compose(z, list(vals))


def bessel_K_any(s, z, rtol: float = DEFAULT_RTOL):
    """Dispatch on jets, scalars and arrays."""
    if isinstance(z, Jet):
        return bessel_K_jet(s, z, rtol)
    if np.ndim(z):
        return np.vectorize(lambda t: bessel_K(s, t, rtol), otypes=[complex])(z)
    return bessel_K(s, z, rtol)


# eigenfunction catalog ---------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    identifier: str
    function: Callable = None  # f(x, y, u, v)
    eigenvalue: complex = 0.0
    tolerance: float = 1e-10
    description: str = ""


def _whittaker(s, a: float):
    """``y^{1/2} K_{s-1/2}(2 pi |a| y) e^{2 pi i a x}``."""
    if a == 0:
        raise ValueError("the Whittaker entry needs a != 0")
    c = 2 * math.pi * abs(a)

    def f(x, y, u, v):
        return jets.sqrt(y) * bessel_K_any(s - 0.5, c * y) * jets.exp(2j * math.pi * a * x)

    return f


def catalog(identifier: str, s: complex = 0.5, a: float = 1.0, n: int = 1) -> CatalogEntry:
    """Known eigenfunctions of Delta on H x C.

    Identifiers: ``whittaker`` (parameter ``a`` in ``e^{2 pi i a x}``),
    ``whittaker_fourier`` (integer ``n`` with ``a = n``, i.e. Bessel argument
    ``2 pi |n| y``), ``y^s``, ``y^s x``, ``y^s u``, ``y^s v``, ``y^s uv``,
    ``y^s xv``, and the harmonic entries ``x, y, u, v, xv, uv``.  ``maass``
    stands for the whole class of Maass wave forms and returns the Whittaker
    witness.
    """
    s = complex(s) if isinstance(s, complex) else float(s)
    lam_minus = s * (s - 1)
    lam_plus = s * (s + 1)
    ys = lambda y: jets.power(y, s)  # noqa: E731
    table = {
        "y^s": (lambda x, y, u, v: ys(y), lam_minus),
        "y^s x": (lambda x, y, u, v: ys(y) * x, lam_minus),
        "y^s u": (lambda x, y, u, v: ys(y) * u, lam_minus),
        "y^s v": (lambda x, y, u, v: ys(y) * v, lam_plus),
        "y^s uv": (lambda x, y, u, v: ys(y) * u * v, lam_plus),
        "y^s xv": (lambda x, y, u, v: ys(y) * x * v, lam_plus),
        "x": (lambda x, y, u, v: x, 0.0),
        "y": (lambda x, y, u, v: y, 0.0),
        "u": (lambda x, y, u, v: u, 0.0),
        "v": (lambda x, y, u, v: v, 0.0),
        "xv": (lambda x, y, u, v: x * v, 0.0),
        "uv": (lambda x, y, u, v: u * v, 0.0),
    }
    if identifier in table:
        f, lam = table[identifier]
        return CatalogEntry(identifier, f, lam, 1e-10)
    if identifier in ("whittaker", "maass"):
        return CatalogEntry(identifier, _whittaker(s, a), lam_minus, 1e-6, "classical Maass witness")
    if identifier == "whittaker_fourier":
        if int(n) != n or n == 0:
            raise ValueError(f"whittaker_fourier needs a nonzero integer n, got {n}")
        return CatalogEntry(identifier, _whittaker(s, float(n)), lam_minus, 1e-6)
    raise ValueError(f"unknown catalog id {identifier!r}")


POLYNOMIAL_IDS = ("y^s", "y^s x", "y^s u", "y^s v", "y^s uv", "y^s xv")
HARMONIC_IDS = ("x", "y", "u", "v", "xv", "uv")
CATALOG_IDS = POLYNOMIAL_IDS + HARMONIC_IDS + ("whittaker", "whittaker_fourier", "maass")
