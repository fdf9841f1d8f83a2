import numpy as np
import pytest

from quasipos import cayley
from quasipos.algebra import SO8, bracket, inner0, unitary_chain
from quasipos.metrics import DeformedMetric, flat_residual, orthonormalize, plane_vector, raw_residual

from curvature_oracle import sectional


def _rand(chain, rng):
    return chain.from_coords(rng.standard_normal(chain.dim))


def test_curvature_oracle_reproduces_bi_invariant_case():
    m = DeformedMetric(SO8, 0.999999)
    rng = np.random.default_rng(0)
    X, Y = _rand(SO8, rng), _rand(SO8, rng)
    B = bracket(X, Y)
    assert sectional(m, X, Y) == pytest.approx(0.25 * inner0(B, B), rel=1e-4)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.8])
def test_one_step_metric_is_nonnegatively_curved(lam):
    m = DeformedMetric.one_step(SO8, lam)
    rng = np.random.default_rng(1)
    for _ in range(5):
        X, Y = _rand(SO8, rng), _rand(SO8, rng)
        assert sectional(m, m.phi1_inv(X), m.phi1_inv(Y)) > -1e-10


def test_one_step_flat_plane_agrees_with_curvature_oracle():
    m = DeformedMetric.one_step(SO8, 0.5)
    # X in p and Y in m with [X, Y] = 0
    v = np.array([1.0, -2.0, 0.5, 0.3, 1.1, -0.7, 0.2])
    _, _, Vt = np.linalg.svd(cayley.m_block(v))
    X = cayley.p_vector(Vt[-1])
    Y = cayley.m_vector(v)
    assert np.allclose(bracket(X, Y), 0, atol=1e-12)
    assert flat_residual(m, X, Y) < 1e-20
    U, V = m.phi1_inv(X), m.phi1_inv(Y)
    assert abs(sectional(m, U, V)) < 1e-10
    # the undeformed preimage of the same pair is not flat
    Xb = X + cayley.m_vector(np.eye(7)[0])
    assert flat_residual(m, Xb, Y) > 1e-3
    assert sectional(m, m.phi1_inv(Xb), V) > 1e-4


def test_two_step_metric_flatness_agrees_with_oracle():
    ch = unitary_chain(2)
    m = DeformedMetric.two_step(ch, 0.5, 0.5)
    # two diagonal vectors commute with everything in sight, so they span a flat plane
    X = np.diag([1j, 2j, -1j])
    Y = np.diag([0, 1j, 3j])
    assert raw_residual(m, X, Y) < 1e-24
    assert abs(sectional(m, m.psi_inv(X), m.psi_inv(Y))) < 1e-10
    rng = np.random.default_rng(3)
    for _ in range(3):
        A, B = _rand(ch, rng), _rand(ch, rng)
        k = sectional(m, m.psi_inv(A), m.psi_inv(B))
        assert k > -1e-10
        # positive curvature iff some criterion bracket is non-zero
        assert (k > 1e-8) == (raw_residual(m, A, B) > 1e-8)


def test_flat_residual_depends_only_on_plane():
    m = DeformedMetric.one_step(SO8, 0.4)
    rng = np.random.default_rng(4)
    X, Y = _rand(SO8, rng), _rand(SO8, rng)
    r = flat_residual(m, X, Y)
    assert flat_residual(m, 3 * X + Y, X - 2 * Y) == pytest.approx(r, rel=1e-9)
    assert flat_residual(m, Y, X) == pytest.approx(r, rel=1e-9)


def test_phi_inverses():
    ch = unitary_chain(3)
    rng = np.random.default_rng(5)
    X = _rand(ch, rng)
    m1 = DeformedMetric.one_step(ch, 0.3)
    m2 = DeformedMetric.two_step(ch, 0.3, 0.6)
    assert np.allclose(m1.phi_inv(m1.phi(X)), X)
    assert np.allclose(m2.phi_inv(m2.phi(X)), X)
    assert np.allclose(m2.psi_inv(m2.psi(X)), X)
    # Phi2 = Phi1 Psi
    assert np.allclose(m2.phi(X), m2.phi1(m2.psi(X)))


def test_degenerate_pair_rejected():
    m = DeformedMetric.one_step(SO8, 0.5)
    X = cayley.p_basis()[0].astype(float)
    with pytest.raises(ValueError):
        orthonormalize(m, X, 2 * X)


def test_metric_parameter_validation():
    with pytest.raises(ValueError):
        DeformedMetric(SO8, 1.5)
    with pytest.raises(ValueError):
        DeformedMetric(SO8, 0.5, 0.5)
    with pytest.raises(ValueError):
        DeformedMetric.one_step(SO8).psi(np.zeros((8, 8)))


def test_plane_vector_and_criterion_vectors_invert():
    ch = unitary_chain(2)
    m = DeformedMetric.two_step(ch, 0.5, 0.25)
    X = _rand(ch, np.random.default_rng(6))
    assert np.allclose(m.criterion_vectors(plane_vector(m, X)), X)
