"""Numerical toolkit for the Jacobi-type group SL(2, R) x R^2 acting on H x C.

Modules: :mod:`jets` (truncated Taylor arithmetic), :mod:`group` (group law,
Lie algebra, actions), :mod:`operators` (invariant differential operators),
:mod:`metrics` (invariant metrics, curvature, Laplacians), :mod:`special`
(K-Bessel function and eigenfunction catalog), :mod:`fourier` (periodicity
and the coefficient PDE), :mod:`verify` and :mod:`cli`.
"""

__version__ = "0.1.0"
