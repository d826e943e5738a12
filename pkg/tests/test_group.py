import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maassjacobi import group as grp
from maassjacobi.group import GroupElement, LieElement, PointHC, PointPV

coef = st.floats(-1, 1, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)


def elem(seed):
    return grp.random_group_element(np.random.default_rng(seed))


def test_multiply_example():
    a = GroupElement([[1, 1], [0, 1]], (1, 0))
    b = GroupElement([[1, 0], [1, 1]], (0, 1))
    c = a * b
    np.testing.assert_allclose(c.g, [[2, 1], [1, 1]])
    np.testing.assert_allclose(c.alpha, [1, 0])


def test_inverse_follows_group_law():
    a = GroupElement([[1, 1], [0, 1]], (1, 0))
    ai = grp.inverse(a)
    np.testing.assert_allclose(ai.g, [[1, -1], [0, 1]])
    # -alpha g^T = -(1, 0)(1 0; 1 1) = (-1, 0)
    np.testing.assert_allclose(ai.alpha, [-1, 0])
    assert (a * ai).allclose(GroupElement.identity())
    assert (ai * a).allclose(GroupElement.identity())


def test_det_invariant():
    with pytest.raises(ValueError):
        GroupElement([[2, 0], [0, 1]])


def test_trace_invariant():
    with pytest.raises(ValueError):
        LieElement([[1, 0], [0, 0]])


@given(seeds)
def test_associativity(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (grp.random_group_element(rng) for _ in range(3))
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-10)


@given(seeds)
def test_embedding_is_homomorphism(seed):
    rng = np.random.default_rng(seed)
    a, b = grp.random_group_element(rng), grp.random_group_element(rng)
    np.testing.assert_allclose((a * b).embed(), a.embed() @ b.embed(), atol=1e-10)
    assert GroupElement.from_embedding(a.embed()).allclose(a)


def test_action_example():
    S = GroupElement([[0, 1], [-1, 0]])
    p = PointHC.from_complex(2j, 0.3 + 0.5j)
    q = grp.act_hc(S, p)
    assert q.tau == pytest.approx(0.5j)
    assert q.z == pytest.approx(1j * (0.3 + 0.5j) / 2)


@given(seeds)
def test_action_law(seed):
    rng = np.random.default_rng(seed)
    a, b = grp.random_group_element(rng), grp.random_group_element(rng)
    p = grp.random_point_hc(rng)
    lhs = grp.act_hc(a * b, p).as_tuple()
    rhs = grp.act_hc(a, grp.act_hc(b, p)).as_tuple()
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_act_pv_example():
    q = grp.act_pv(GroupElement(np.diag([2, 0.5])), PointPV.from_matrices(np.eye(2), (1, 1)))
    np.testing.assert_allclose(q.Y, np.diag([4, 0.25]), atol=1e-15)
    np.testing.assert_allclose(q.V, [2, 0.5], atol=1e-15)


def test_act_pv_and_T():
    q = PointPV(1.0, 2.0, 3.0, 4.0)
    p = grp.map_T(q)
    assert p.tau == pytest.approx(1 + 2j)
    assert p.z == pytest.approx(7 + 6j)
    back = grp.map_T_inv(p)
    np.testing.assert_allclose(back.as_tuple(), q.as_tuple())
    np.testing.assert_allclose(q.Y, [[0.5, -0.5], [-0.5, 2.5]])


@given(seeds)
def test_T_equivariance(seed):
    rng = np.random.default_rng(seed)
    a = grp.random_group_element(rng)
    q = PointPV(*rng.uniform(-2, 2, 1), rng.uniform(0.3, 3), *rng.uniform(-2, 2, 2))
    lhs = grp.map_T(grp.act_pv(a, q)).as_tuple()
    rhs = grp.act_hc(a, grp.map_T(q)).as_tuple()
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


@given(seeds)
def test_section(seed):
    rng = np.random.default_rng(seed)
    q = PointPV(rng.uniform(-2, 2), rng.uniform(0.3, 3), *rng.uniform(-2, 2, 2))
    s = grp.section_gY(q)
    np.testing.assert_allclose(s.g @ s.g.T, q.Y, atol=1e-12)
    np.testing.assert_allclose(grp.act_hc(s, grp.ORIGIN_HC).as_tuple(), grp.map_T(q).as_tuple(), atol=1e-12)


def test_iwasawa_example():
    c = grp.iwasawa(GroupElement([[2, 1], [0, 0.5]]))
    assert (c.x, c.y, c.theta) == pytest.approx((2.0, 4.0, 0.0))


@given(seeds)
def test_iwasawa_roundtrip(seed):
    a = elem(seed)
    assert grp.from_gcoord(grp.iwasawa(a)).allclose(a, atol=1e-10)


def test_bracket_matches_embedding_commutator():
    rng = np.random.default_rng(3)
    for _ in range(20):
        u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
        E = grp.lie_embed(u) @ grp.lie_embed(w) - grp.lie_embed(w) @ grp.lie_embed(u)
        np.testing.assert_allclose(grp.lie_embed(grp.lie_bracket(u, w)), E, atol=1e-13)


def test_bracket_basis_entries():
    assert grp.lie_bracket(grp.W[1], grp.W[2]) == grp.W[3]
    assert grp.lie_bracket(grp.W[2], grp.W[4]) == grp.W[5]
    assert grp.lie_bracket(grp.W[3], grp.W[5]) == grp.W[5] * -1
    # the bracket of W_1 and W_5 is +W_4; see the notes on the printed table
    assert grp.lie_bracket(grp.W[1], grp.W[5]) == grp.W[4]


def test_jacobi_identity():
    C = grp.structure_constants()
    # sum over cyclic permutations of c_{ij}^m c_{mk}^l
    J = np.einsum("ijm,mkl->ijkl", C, C)
    cyc = J + J.transpose(1, 2, 0, 3) + J.transpose(2, 0, 1, 3)
    assert np.abs(cyc).max() == 0


@given(seeds)
def test_killing_vs_trace_form(seed):
    rng = np.random.default_rng(seed)
    u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
    assert grp.killing_form(u, w) == pytest.approx(grp.trace_form(u, w), abs=1e-12)
    assert grp.killing_form(u, w) == pytest.approx(grp.killing_form(w, u), abs=1e-14)


def test_killing_values():
    assert grp.killing_form(grp.W[3], grp.W[3]) == pytest.approx(10)
    assert grp.killing_form(grp.W[1], grp.W[2]) == pytest.approx(5)
    assert grp.killing_form(grp.W[4], grp.W[5]) == 0
    # degenerate on the abelian ideal
    assert grp.killing_form(grp.W[4], grp.W[4]) == 0


def test_exp_closed_forms():
    t = 0.7
    np.testing.assert_allclose(grp.exp_lie(t * grp.W[3]).g, np.diag([math.exp(t), math.exp(-t)]))
    e4 = grp.exp_lie(t * grp.W[4])
    np.testing.assert_allclose(e4.g, np.eye(2))
    np.testing.assert_allclose(e4.alpha, [t, 0])
    for k in range(1, 6):
        a, b = grp.exp_lie(t * grp.W[k]), grp.exp_basis(k, t)
        assert a.allclose(b, atol=1e-13)


def _series_oracle(t1, t2, s1, s2, degree=40):
    """Power series of exp(t1 e1 + t2 e2 + s1 f1 + s2 f2), summed term by term."""
    r2 = t1 * t1 + t2 * t2
    a1 = a2 = a3 = b1 = b2 = 0.0
    for k in range(degree):
        m = k // 2
        if k % 2 == 0:
            a1 += r2**m / math.factorial(k)
            a2 += r2**m / math.factorial(k)
            b1 += s1 * r2**m / math.factorial(k + 1)
            b2 += s2 * r2**m / math.factorial(k + 1)
        else:
            a1 += t1 * r2**m / math.factorial(k)
            a2 -= t1 * r2**m / math.factorial(k)
            a3 += t2 * r2**m / math.factorial(k)
            b1 -= (s1 * t1 + s2 * t2) * r2**m / math.factorial(k + 1)
            b2 -= (s1 * t2 - s2 * t1) * r2**m / math.factorial(k + 1)
    return np.array([[a1, a3], [a3, a2]]), np.array([b1, b2])


@given(*(st.floats(-0.1, 0.1) for _ in range(4)))
def test_exp_series_small(t1, t2, s1, s2):
    u = LieElement([[t1, t2], [t2, -t1]], (s1, s2))
    e = grp.exp_lie(u)
    g, b = _series_oracle(t1, t2, s1, s2)
    np.testing.assert_allclose(e.g, g, atol=1e-8)
    np.testing.assert_allclose(e.alpha, b, atol=1e-8)


def test_exp_series_low_order_terms():
    # the displayed terms through degree 4 agree up to the fifth-order remainder
    t1, t2, s1, s2 = 0.05, -0.03, 0.02, 0.04
    r2 = t1 * t1 + t2 * t2
    a1 = 1 + t1 + r2 / 2 + t1 * r2 / 6 + r2 * r2 / 24
    b1 = s1 - (s1 * t1 + s2 * t2) / 2 + s1 * r2 / 6 - (s1 * t1 + s2 * t2) * r2 / 24
    e = grp.exp_lie(LieElement([[t1, t2], [t2, -t1]], (s1, s2)))
    assert e.g[0, 0] == pytest.approx(a1, abs=r2**2.5)
    assert e.alpha[0] == pytest.approx(b1, abs=r2**2.5)


@given(seeds, st.floats(-1, 1), st.floats(-1, 1))
def test_one_parameter(seed, s, t):
    u = grp.random_lie_element(np.random.default_rng(seed))
    assert grp.exp_lie((s + t) * u).allclose(grp.exp_lie(s * u) * grp.exp_lie(t * u), atol=1e-10)


@given(seeds)
def test_adjoint_homomorphism(seed):
    rng = np.random.default_rng(seed)
    a = grp.random_group_element(rng)
    u, w = grp.random_lie_element(rng), grp.random_lie_element(rng)
    lhs = grp.adjoint(a, grp.lie_bracket(u, w))
    rhs = grp.lie_bracket(grp.adjoint(a, u), grp.adjoint(a, w))
    assert (lhs - rhs).norm() < 1e-9
    # Ad is conjugation in the embedding
    M = a.embed() @ grp.lie_embed(u) @ np.linalg.inv(a.embed())
    np.testing.assert_allclose(grp.lie_embed(grp.adjoint(a, u)), M, atol=1e-9)


def test_root_spaces():
    H = grp.W[3]
    for k, root in ((1, 2), (2, -2), (4, 1), (5, -1)):
        r = grp.root_space_check(H, grp.W[k])
        assert r.eigenvalue == pytest.approx(root)
    with pytest.raises(ValueError):
        grp.root_space_check(grp.W[1], grp.W[2])


def test_invariant_polynomials_K_invariant():
    rng = np.random.default_rng(5)
    X = LieElement([[0.3, 0.7], [0.7, -0.3]], (0.4, -1.1))
    base = grp.invariant_polynomials(X)
    for _ in range(5):
        k = grp.rotation(rng.uniform(0, 2 * math.pi))
        np.testing.assert_allclose(grp.invariant_polynomials(grp.adjoint(k, X)), base, atol=1e-12)
    with pytest.raises(ValueError):
        grp.invariant_polynomials(grp.W[1])


def test_gamma_generators_integral():
    for g in grp.GAMMA_GENERATORS.values():
        assert np.all(g.g == np.round(g.g))
        assert np.all(g.alpha == np.round(g.alpha))
