"""Periodicity, Fourier coefficients in (x, u), and the coefficient PDE.

A function on H x C that is invariant under ``x -> x + 1`` and ``u -> u + 1``
expands as ``sum_{n,r} c_{n,r}(y, v) exp(2 pi i (n x + r u))``.  If it is an
eigenfunction of Delta with eigenvalue lambda, every coefficient
``F = c_{n,r}`` satisfies::

    y^2 F_yy + (y + v^2) F_vv + 2 y v F_yv - ((a y + b v)^2 + b^2 y + lambda) F = 0

with ``a = 2 pi n`` and ``b = 2 pi r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from . import jets
from .special import bessel_K_any

SHIFTS = (-1, 1)


def _eval(f, x, y, u, v):
    return complex(jets.value(f(x, y, u, v)))


def periodicity_residual(f: Callable, p, kind: str = "all") -> float:
    """Max change of ``f`` under the lattice shifts.

    ``kind``: ``"tau"`` for ``tau -> tau + n``, ``"z"`` for
    ``z -> z + n1 tau + n2``, ``"xu"`` for unit shifts of x and u alone, or
    ``"all"`` for the first two together.  All shift integers range over
    {-1, 1}.
    """
    x, y, u, v = (float(c) for c in (p.as_tuple() if hasattr(p, "as_tuple") else p))
    base = _eval(f, x, y, u, v)
    images = []
    if kind in ("tau", "all"):
        images += [(x + n, y, u, v) for n in SHIFTS]
    if kind in ("z", "all"):
        images += [(x, y, u + n1 * x + n2, v + n1 * y) for n1 in SHIFTS for n2 in SHIFTS]
    if kind == "xu":
        images += [(x + n, y, u, v) for n in SHIFTS] + [(x, y, u + n, v) for n in SHIFTS]
    if not images:
        raise ValueError(f"unknown periodicity kind {kind!r}")
    return max(abs(_eval(f, *q) - base) for q in images)


def grid_size(n_max: int, r_max: int) -> int:
    return 4 * max(n_max, r_max) + 8


@dataclass(frozen=True)
class FourierTable:
    n_max: int
    r_max: int
    y: float
    v: float
    grid: int
    spectrum: np.ndarray  # full N x N DFT coefficients, index [n mod N, r mod N]
    grid_power: float

    def coefficient(self, n: int, r: int) -> complex:
        if abs(n) > self.n_max or abs(r) > self.r_max:
            raise KeyError(f"index ({n}, {r}) outside the table")
        N = self.grid
        return complex(self.spectrum[n % N, r % N])

    def table(self) -> np.ndarray:
        """Array ``T[n + n_max, r + r_max] = c_{n,r}``."""
        ns = np.arange(-self.n_max, self.n_max + 1) % self.grid
        rs = np.arange(-self.r_max, self.r_max + 1) % self.grid
        return self.spectrum[np.ix_(ns, rs)]

    @property
    def parseval_residual(self) -> float:
        """``|sum |c|^2 - mean |f|^2|`` relative to the grid power."""
        total = float(np.sum(np.abs(self.spectrum) ** 2))
        return abs(total - self.grid_power) / max(self.grid_power, np.finfo(float).tiny)


def sample_grid(f: Callable, y: float, v: float, N: int) -> np.ndarray:
    t = np.arange(N) / N
    X, U = np.meshgrid(t, t, indexing="ij")
    vals = f(X, y, U, v)
    return np.broadcast_to(np.asarray(vals, dtype=complex), (N, N))


def fourier_coefficients(
    f: Callable, n_max: int, r_max: int, y: float, v: float, N: int | None = None, check: bool = True
) -> FourierTable:
    """Trapezoid-rule coefficients ``c_{n,r}(y, v)`` for ``|n| <= n_max, |r| <= r_max``.

    ``f(x, y, u, v)`` must accept numpy arrays for ``x`` and ``u``.
    """
    if not y > 0:
        raise ValueError(f"y must be positive, got {y}")
    if check:
        # off-grid probe point so the check is not satisfied by the grid itself
        res = periodicity_residual(f, (0.3183, y, 0.5772, v), kind="xu")
        if res > 1e-9:
            raise ValueError(f"f is not 1-periodic in x and u (residual {res:.3e})")
    N = grid_size(n_max, r_max) if N is None else int(N)
    if N <= 2 * max(n_max, r_max):
        raise ValueError(f"grid of {N} points cannot resolve index {max(n_max, r_max)}")
    vals = sample_grid(f, y, v, N)
    spectrum = np.fft.fft2(vals) / (N * N)
    power = float(np.mean(np.abs(vals) ** 2))
    return FourierTable(n_max, r_max, float(y), float(v), N, spectrum, power)


def synthesize(coeffs: dict, x, u):
    """``sum c_{n,r} exp(2 pi i (n x + r u))`` for a dict ``{(n, r): c}``."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    out = np.zeros(np.broadcast(x, u).shape, dtype=complex)
    for (n, r), c in coeffs.items():
        out = out + c * np.exp(2j * np.pi * (n * x + r * u))
    return out


def roundtrip_residual(coeffs: dict, n_max: int, r_max: int) -> float:
    """Max error of extracting band-limited coefficients from their synthesis."""
    f = lambda x, y, u, v: synthesize(coeffs, x, u)  # noqa: E731
    table = fourier_coefficients(f, n_max, r_max, 1.0, 0.0, check=False)
    worst = 0.0
    for n in range(-n_max, n_max + 1):
        for r in range(-r_max, r_max + 1):
            worst = max(worst, abs(table.coefficient(n, r) - coeffs.get((n, r), 0.0)))
    return worst


# coefficient PDE ---------------------------------------------------------


def _pde_terms(F: Callable, n: int, r: int, lam: complex, y: float, v: float):
    if not y > 0:
        raise ValueError(f"y must be positive, got {y}")
    a = 2 * math.pi * n
    b = 2 * math.pi * r
    J = jets.jet_of(F, (y, v), 2)
    Fyy, Fvv, Fyv = J.partial((2, 0)), J.partial((0, 2)), J.partial((1, 1))
    F0 = J.value
    potential = (a * y + b * v) ** 2 + b * b * y + lam
    return (y * y * Fyy, (y + v * v) * Fvv, 2 * y * v * Fyv, -potential * F0)


def pde_residual_6_4(F: Callable, n: int, r: int, lam: complex, y: float, v: float) -> complex:
    """Left side of the coefficient PDE for ``F(y, v)`` at ``(y, v)``."""
    return complex(sum(_pde_terms(F, n, r, lam, y, v)))


def pde_scale(F: Callable, n: int, r: int, lam: complex, y: float, v: float) -> float:
    """Largest magnitude among the four PDE terms, for relative tolerances."""
    return float(max(abs(t) for t in _pde_terms(F, n, r, lam, y, v)))


def whittaker_coefficient(s: complex, n: int) -> Callable:
    """``F(y, v) = y^{1/2} K_{s-1/2}(2 pi |n| y)``."""
    if n == 0:
        raise ValueError("the Whittaker coefficient needs n != 0")
    c = 2 * math.pi * abs(n)
    return lambda y, v: jets.sqrt(y) * bessel_K_any(s - 0.5, c * y)


# grid consistency ---------------------------------------------------------


@dataclass(frozen=True)
class ConsistencyReport:
    grid_sizes: tuple
    residuals: tuple  # max relative PDE residual per grid size
    ratios: tuple
    floor: float

    @property
    def final_residual(self) -> float:
        return self.residuals[-1]

    @property
    def converged(self) -> bool:
        """Every refinement gains a factor 3, or the residual already sits below the floor."""
        return all(rat >= 3 or res <= self.floor for rat, res in zip(self.ratios, self.residuals[1:]))


def _cheb_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    k = np.arange(n)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * (2 * k + 1) / (2 * n))


def _to_unit(t, lo, hi):
    return (2 * np.asarray(t) - lo - hi) / (hi - lo)


def _fit_2d(vals: np.ndarray, ny: int, nv: int) -> np.ndarray:
    # interpolation on Chebyshev points of the first kind: invert the Vandermonde per axis
    Vy = C.chebvander(np.cos(np.pi * (2 * np.arange(ny) + 1) / (2 * ny)), ny - 1)
    Vv = C.chebvander(np.cos(np.pi * (2 * np.arange(nv) + 1) / (2 * nv)), nv - 1)
    return np.linalg.solve(Vy, np.linalg.solve(Vv, vals.T).T)


def consistency_check(
    f: Callable,
    lam: complex,
    idx: tuple[int, int],
    y_range: tuple[float, float] = (0.5, 2.0),
    v_range: tuple[float, float] = (-0.5, 0.5),
    y_sizes: Sequence[int] = (8, 16, 32, 64),
    nv: int = 6,
    check_points: int = 50,
    floor: float = 1e-9,
) -> ConsistencyReport:
    """Extract ``c_{n,r}`` on Chebyshev grids and evaluate the PDE spectrally.

    The coefficient is sampled on an ``ny x nv`` tensor grid of Chebyshev
    points, interpolated, differentiated, and the PDE residual is measured at
    ``check_points`` interior points relative to the largest PDE term (or
    the RMS size of ``f`` if that is larger).
    """
    n, r = idx
    a = 2 * math.pi * n
    b = 2 * math.pi * r
    ylo, yhi = y_range
    vlo, vhi = v_range
    n_max = max(abs(n), 1)
    r_max = max(abs(r), 1)
    yc = np.linspace(ylo, yhi, check_points + 2)[1:-1]
    vc = np.linspace(vlo, vhi, check_points + 2)[1:-1][::-1]
    residuals = []
    for ny in y_sizes:
        ys = _cheb_nodes(ylo, yhi, ny)
        vs = _cheb_nodes(vlo, vhi, nv)
        tables = [[fourier_coefficients(f, n_max, r_max, yy, vv) for vv in vs] for yy in ys]
        vals = np.array([[t.coefficient(n, r) for t in row] for row in tables])
        # magnitude of f itself keeps the residual meaningful when c_{n,r} vanishes
        fmag = max(math.sqrt(t.grid_power) for row in tables for t in row)
        coef = _fit_2d(vals, ny, nv)
        sy = 2 / (yhi - ylo)
        sv = 2 / (vhi - vlo)
        ty, tv = _to_unit(yc, ylo, yhi), _to_unit(vc, vlo, vhi)
        F0 = C.chebval2d(ty, tv, coef)
        Fyy = C.chebval2d(ty, tv, C.chebder(coef, 2, scl=sy, axis=0))
        Fvv = C.chebval2d(ty, tv, C.chebder(coef, 2, scl=sv, axis=1))
        Fyv = C.chebval2d(ty, tv, C.chebder(C.chebder(coef, 1, scl=sy, axis=0), 1, scl=sv, axis=1))
        terms = np.array([yc**2 * Fyy, (yc + vc**2) * Fvv, 2 * yc * vc * Fyv, -((a * yc + b * vc) ** 2 + b * b * yc + lam) * F0])
        scale = max(float(np.abs(terms).max()), fmag, np.finfo(float).tiny)
        residuals.append(float(np.abs(terms.sum(axis=0)).max()) / scale)
    ratios = tuple(residuals[i] / residuals[i + 1] if residuals[i + 1] > 0 else math.inf for i in range(len(residuals) - 1))
    return ConsistencyReport(tuple(y_sizes), tuple(residuals), ratios, floor)
