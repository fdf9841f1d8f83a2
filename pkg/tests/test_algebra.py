import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasipos import cayley
from quasipos.algebra import SO8, LieVector, bracket, inner0, is_skew, norm0_sq, unitary_chain


def _random(chain, rng):
    return chain.from_coords(rng.standard_normal(chain.dim))


@pytest.mark.parametrize("chain", [SO8, unitary_chain(2), unitary_chain(4)], ids=lambda c: c.tag)
def test_decompose_sums_and_is_orthogonal(chain):
    rng = np.random.default_rng(1)
    for _ in range(5):
        X = _random(chain, rng)
        parts = chain.decompose(X)
        assert np.allclose(sum(parts), X)
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(inner0(parts[i], parts[j])) < 1e-12


@pytest.mark.parametrize("chain", [SO8, unitary_chain(3)], ids=lambda c: c.tag)
def test_projections_are_idempotent(chain):
    rng = np.random.default_rng(2)
    X = _random(chain, rng)
    for proj in (chain.proj_p, chain.proj_m, chain.proj_h):
        assert np.allclose(proj(proj(X)), proj(X))


def test_dimensions():
    assert SO8.dim == 28
    assert unitary_chain(2).dim == 9
    assert unitary_chain(5).dim == 36


@pytest.mark.parametrize("chain", [SO8, unitary_chain(3)], ids=lambda c: c.tag)
def test_reductive_relations(chain):
    # [p, p] in k, [k, p] in p, [h, m] in m; [m, m] in h only for the unitary chain
    rng = np.random.default_rng(4)
    X, Y = _random(chain, rng), _random(chain, rng)
    Xp, Xm, Xh = chain.decompose(X)
    Yp, Ym, Yh = chain.decompose(Y)
    assert np.allclose(chain.proj_p(bracket(Xp, Yp)), 0)
    assert np.allclose(chain.proj_k(bracket(Xm + Xh, Yp)), 0)
    assert np.allclose(chain.proj_h(bracket(Xh, Ym)), 0, atol=1e-12)
    if chain.kind == "unitary":
        assert np.allclose(chain.proj_m(bracket(Xm, Ym)), 0, atol=1e-12)
    else:
        # so(7)/g2 is not symmetric
        assert not np.allclose(chain.proj_m(bracket(Xm, Ym)), 0, atol=1e-6)


def test_so8_h_is_g2():
    rng = np.random.default_rng(5)
    H = SO8.proj_h(_random(SO8, rng))
    assert cayley.satisfies_g2_relations(H[1:, 1:], 1e-12)


def test_coords_roundtrip():
    ch = unitary_chain(3)
    c = np.random.default_rng(6).standard_normal(ch.dim)
    assert np.allclose(ch.coords(ch.from_coords(c)), c)


def test_inner_is_bi_invariant():
    rng = np.random.default_rng(7)
    X, Y, Z = (_random(SO8, rng) for _ in range(3))
    assert abs(inner0(bracket(Z, X), Y) + inner0(X, bracket(Z, Y))) < 1e-12


def test_unitary_inner_is_real_part():
    X = np.diag([1j, 2j, 0])
    assert norm0_sq(X) == pytest.approx(5.0)


def test_chain_validation():
    with pytest.raises(ValueError):
        unitary_chain(1)
    with pytest.raises(ValueError):
        SO8.decompose(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        SO8.decompose(np.zeros((8, 8), dtype=complex))


def test_lie_vector_checks_skew_and_tag():
    with pytest.raises(ValueError):
        LieVector(np.ones((8, 8)), SO8)
    with pytest.raises(ValueError):
        LieVector(cayley.m_basis()[0].astype(float), SO8, tag="g2")
    v = LieVector(cayley.g2_basis8()[0].astype(float), SO8, tag="g2")
    assert np.allclose(v.h, v.matrix)
    assert np.allclose(v.k, v.matrix)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_unitary_elements_are_skew(coords):
    ch = unitary_chain(2)
    assert is_skew(ch.from_coords(np.array(coords)), 1e-12)
