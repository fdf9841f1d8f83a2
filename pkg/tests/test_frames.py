import numpy as np
import pytest

from quasipos.algebra import SO8, inner0, unitary_chain
from quasipos.frames import psi_orthogonalize, rescale, rotate_p_leg_out, rotate_to_p_and_m, same_plane, unit_entry
from quasipos.metrics import DeformedMetric, raw_residual
from quasipos.verifier import planted_m13_pair


@pytest.fixture
def planted():
    return planted_m13_pair(seed=4)


def test_same_plane(planted):
    X, Y = planted
    assert same_plane(X, Y, X + 2 * Y, 3 * X - Y)
    assert not same_plane(X, Y, X, X + 0 * Y)
    Z = SO8.from_coords(np.random.default_rng(0).standard_normal(28))
    assert not same_plane(X, Y, X, Z)


def test_rotate_p_leg_out_on_mixed_basis(planted):
    X, Y = planted
    U, V = X + 2 * Y, 3 * X - Y
    U2, V2 = rotate_p_leg_out(SO8, U, V)
    assert same_plane(U, V, U2, V2)
    assert np.allclose(SO8.proj_p(V2), 0, atol=1e-12)


def test_rotate_to_p_and_m_recovers_planted_split(planted):
    X, Y = planted
    U, V = 0.5 * X - Y, X + Y
    P, K = rotate_to_p_and_m(SO8, U, V)
    assert same_plane(X, Y, P, K)
    assert np.allclose(SO8.proj_k(P), 0, atol=1e-12)
    assert np.allclose(SO8.proj_p(K), 0, atol=1e-12)
    assert np.allclose(SO8.proj_h(K), 0, atol=1e-12)


def test_rotate_rejects_independent_p_parts():
    rng = np.random.default_rng(1)
    U, V = (SO8.from_coords(rng.standard_normal(28)) for _ in range(2))
    with pytest.raises(ValueError):
        rotate_p_leg_out(SO8, U, V)


def test_rotations_keep_flatness(planted):
    m = DeformedMetric.one_step(SO8, 0.5)
    X, Y = planted
    U, V = rotate_to_p_and_m(SO8, X - Y, 2 * X + Y)
    assert raw_residual(m, U, V) < 1e-20


def test_psi_orthogonalize():
    ch = unitary_chain(2)
    m = DeformedMetric.two_step(ch, 0.5, 0.3)
    rng = np.random.default_rng(2)
    X, Y = (ch.from_coords(rng.standard_normal(ch.dim)) for _ in range(2))
    X2, Y2 = psi_orthogonalize(m, X, Y)
    assert np.allclose(Y2, Y)
    assert abs(m.inner(m.psi_inv(X2), m.psi_inv(Y2))) < 1e-12
    assert same_plane(X, Y, X2, Y2)
    with pytest.raises(ValueError):
        psi_orthogonalize(m, X, 0 * Y)


def test_rescale_and_unit_entry():
    V = np.diag([2j, -1j, 0])
    W = rescale(V, (0, 0))
    assert W[0, 0] == 1j and W[1, 1] == -0.5j
    with pytest.raises(ValueError):
        rescale(V, (0, 0), target=1)
    with pytest.raises(ValueError):
        rescale(V, (2, 2))
    assert abs(unit_entry(V, (1, 1))[1, 1]) == 1
    with pytest.raises(ValueError):
        unit_entry(V, (2, 2))
    assert inner0(W, W) > 0
