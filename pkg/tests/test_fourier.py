import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maassjacobi import fourier as fo
from maassjacobi import jets
from maassjacobi import special as sp


def test_periodicity_kinds():
    f = lambda x, y, u, v: jets.cos(2 * math.pi * x) * jets.exp(-v * v)  # noqa: E731
    assert fo.periodicity_residual(f, (0.3, 1.2, 0.1, 0.4), "tau") < 1e-14
    assert fo.periodicity_residual(f, (0.3, 1.2, 0.1, 0.4), "xu") < 1e-14
    # v picks up a multiple of y under the z-shift
    assert fo.periodicity_residual(f, (0.3, 1.2, 0.1, 0.4), "z") > 1e-2
    with pytest.raises(ValueError):
        fo.periodicity_residual(f, (0.3, 1.2, 0.1, 0.4), "nope")


def test_coefficients_of_cosine():
    f = lambda x, y, u, v: 2 * np.cos(2 * np.pi * x) + 0 * u  # noqa: E731
    t = fo.fourier_coefficients(f, 2, 2, 1.0, 0.0)
    assert t.coefficient(1, 0) == pytest.approx(1.0)
    assert t.coefficient(-1, 0) == pytest.approx(1.0)
    assert abs(t.coefficient(0, 0)) < 1e-15
    assert t.table().shape == (5, 5)
    assert t.parseval_residual < 1e-13
    with pytest.raises(KeyError):
        t.coefficient(3, 0)


def test_rejects_non_periodic():
    with pytest.raises(ValueError):
        fo.fourier_coefficients(lambda x, y, u, v: x + 0 * u, 1, 1, 1.0, 0.0)
    with pytest.raises(ValueError):
        fo.fourier_coefficients(lambda x, y, u, v: 1 + 0 * x, 1, 1, -1.0, 0.0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_roundtrip(seed, n_max, r_max):
    rng = np.random.default_rng(seed)
    coeffs = {(a, b): complex(*rng.normal(size=2)) for a in range(-n_max, n_max + 1) for b in range(-r_max, r_max + 1)}
    assert fo.roundtrip_residual(coeffs, n_max, r_max) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("s", [0.8, 1.5])
def test_whittaker_solves_pde(n, s):
    F = fo.whittaker_coefficient(s, n)
    for y in np.linspace(0.3, 4, 12):
        for v in (0.0, 0.7):
            r = abs(fo.pde_residual_6_4(F, n, 0, s * (s - 1), y, v))
            assert r <= 1e-6 * fo.pde_scale(F, n, 0, s * (s - 1), y, v)


def test_wrong_eigenvalue_detected():
    F = fo.whittaker_coefficient(0.8, 1)
    y = 1.0
    r = abs(fo.pde_residual_6_4(F, 1, 0, 0.8 * 0.8 - 0.8 + 0.5, y, 0.0))
    assert r > 1e-3 * fo.pde_scale(F, 1, 0, 0.0, y, 0.0)


def test_coefficient_of_catalog_entry():
    e = sp.catalog("whittaker_fourier", s=1.5, n=1)
    t = fo.fourier_coefficients(e.function, 1, 1, 0.7, 0.2)
    assert t.coefficient(1, 0) == pytest.approx(complex(fo.whittaker_coefficient(1.5, 1)(0.7, 0.2)), rel=1e-12)


def test_consistency_converges():
    e = sp.catalog("whittaker", s=0.8, a=1.0)
    rep = fo.consistency_check(e.function, e.eigenvalue, (1, 0), y_sizes=(8, 16, 32))
    assert rep.converged
    assert rep.final_residual < 1e-6
    assert rep.ratios[0] >= 3


def test_whittaker_needs_nonzero_index():
    with pytest.raises(ValueError):
        fo.whittaker_coefficient(0.8, 0)
