import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasipos import cayley
from quasipos.cayley import (
    BASIS_PRODUCT,
    Octonion,
    derivation_defect,
    g2_basis,
    g2_element,
    g2_relation_values,
    oct_mul,
    oct_mul_array,
    satisfies_g2_relations,
)

NAMES = ["1", "i", "j", "k", "l", "il", "jl", "kl"]

# row * column for e1..e7, transcribed independently of the package
FROZEN_TABLE = """
-1   k   -j   il  -l   -kl  jl
-k   -1  i    jl  kl   -l   -il
j    -i  -1   kl  -jl  il   -l
-il  -jl -kl  -1  i    j    k
l    -kl jl   -i  -1   -k   j
kl   l   -il  -j  k    -1   -i
-jl  il  l    -k  -j   i    -1
"""


def _frozen():
    out = {}
    for r, line in enumerate(FROZEN_TABLE.strip().splitlines(), start=1):
        for c, tok in enumerate(line.split(), start=1):
            out[(r, c)] = (-1 if tok[0] == "-" else 1, NAMES.index(tok.lstrip("-")))
    return out


def _quat_mul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def _quat_conj(a):
    return np.array([a[0], -a[1], -a[2], -a[3]])


def doubling_product(x, y):
    """(a + b l)(c + d l) = (ac - conj(d) b) + (d a + b conj(c)) l."""
    a, b, c, d = x[:4], x[4:], y[:4], y[4:]
    first = _quat_mul(a, c) - _quat_mul(_quat_conj(d), b)
    second = _quat_mul(d, a) + _quat_mul(b, _quat_conj(c))
    return np.concatenate([first, second])


def test_basis_products_match_frozen_table():
    frozen = _frozen()
    for (r, c), expected in frozen.items():
        assert BASIS_PRODUCT[(r, c)] == expected, (NAMES[r], NAMES[c])
    for a in range(8):
        assert BASIS_PRODUCT[(0, a)] == (1, a) == BASIS_PRODUCT[(a, 0)]
    assert len(BASIS_PRODUCT) == 64


def test_all_49_products_through_oct_mul():
    frozen = _frozen()
    for r, c in itertools.product(range(1, 8), repeat=2):
        sign, idx = frozen[(r, c)]
        assert oct_mul(Octonion.basis(r), Octonion.basis(c)) == Octonion.basis(idx).scale(sign)


def test_table_agrees_with_quaternion_doubling():
    E = np.eye(8)
    for a, b in itertools.product(range(8), repeat=2):
        assert np.array_equal(oct_mul_array(E[a], E[b]), doubling_product(E[a], E[b]))


def test_norm_multiplicative_on_seeded_pairs():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    x = rng.standard_normal((1000, 8))
    y = rng.standard_normal((1000, 8))
    xy = oct_mul_array(x, y)
    err = np.abs(np.linalg.norm(xy, axis=1) - np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))
    assert err.max() < 1e-9
    assert time.perf_counter() - t0 < 1.0


def test_exact_norm_multiplicative_on_integers():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = Octonion(tuple(int(v) for v in rng.integers(-9, 10, 8)))
        b = Octonion(tuple(int(v) for v in rng.integers(-9, 10, 8)))
        assert (a * b).norm2() == a.norm2() * b.norm2()


def test_not_associative_but_alternative():
    i, j, l = (Octonion.basis(k) for k in (1, 2, 4))
    assert (i * j) * l != i * (j * l)
    x = Octonion((1, 2, -1, 0, 3, 1, 0, -2))
    y = Octonion((0, 1, 1, -3, 0, 2, 1, 1))
    assert (x * x) * y == x * (x * y)
    assert (y * x) * x == y * (x * x)


def test_conjugate_gives_norm():
    x = Octonion((1, 2, -1, 0, 3, 1, 0, -2))
    assert x * x.conj() == Octonion.basis(0).scale(x.norm2())


def test_octonion_rejects_wrong_length():
    with pytest.raises(ValueError):
        Octonion((1, 2, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=8, max_size=8), st.lists(st.integers(-20, 20), min_size=8, max_size=8))
def test_moufang_identity(xs, ys):
    x, y = Octonion(tuple(xs)), Octonion(tuple(ys))
    z = Octonion(tuple(reversed(xs)))
    assert (x * y) * (z * x) == x * ((y * z) * x)


# -- g2 -----------------------------------------------------------------------


def test_g2_has_fourteen_independent_generators():
    B = g2_basis()
    assert len(B) == 14
    M = np.array([b.ravel() for b in B], dtype=float)
    assert np.linalg.matrix_rank(M) == 14
    for b in B:
        assert np.array_equal(b, -b.T)


def test_g2_basis_satisfies_relations_exactly():
    for b in g2_basis():
        assert g2_relation_values(b) == [0] * 7


def test_g2_basis_elements_are_derivations():
    for b in g2_basis():
        assert derivation_defect(b) <= 1e-12


def test_g2_closed_under_bracket():
    B = [b.astype(float) for b in g2_basis()]
    M = np.array([b.ravel() for b in B]).T
    worst = 0.0
    for a, b in itertools.combinations(B, 2):
        C = (a @ b - b @ a).ravel()
        coef, *_ = np.linalg.lstsq(M, C, rcond=None)
        worst = max(worst, np.abs(M @ coef - C).max())
    assert worst < 1e-12


def test_derivations_of_table_are_exactly_g2():
    # the derivation condition is linear in D; its solution space must be the span of the basis
    rows = []
    E = np.eye(8)
    gens = []
    for r, c in itertools.combinations(range(7), 2):
        D = np.zeros((7, 7))
        D[r, c], D[c, r] = 1, -1
        gens.append(D)
    for a, b in itertools.product(range(8), repeat=2):
        block = []
        for D in gens:
            D8 = np.zeros((8, 8))
            D8[1:, 1:] = D
            block.append(D8 @ oct_mul_array(E[a], E[b]) - oct_mul_array(D8 @ E[a], E[b]) - oct_mul_array(E[a], D8 @ E[b]))
        rows.append(np.array(block).T)
    A = np.vstack(rows)
    assert A.shape[1] - np.linalg.matrix_rank(A) == 14


def test_so7_element_outside_g2_is_not_a_derivation():
    D = np.zeros((7, 7))
    D[0, 1], D[1, 0] = 1, -1
    assert not satisfies_g2_relations(D)
    assert derivation_defect(D) > 0.5


def test_g2_element_unknown_parameter():
    with pytest.raises(ValueError):
        g2_element(z=1)


def test_derivation_defect_shape_check():
    with pytest.raises(ValueError):
        derivation_defect(np.zeros((8, 8)))


def test_so8_splits_into_p_m_g2():
    pieces = cayley.p_basis() + cayley.m_basis() + cayley.g2_basis8()
    M = np.array([b.ravel() for b in pieces], dtype=float)
    assert M.shape[0] == 28 and np.linalg.matrix_rank(M) == 28
    # the three pieces are mutually orthogonal for -tr(XY)
    for P, Q in itertools.combinations((cayley.p_basis(), cayley.m_basis(), cayley.g2_basis8()), 2):
        for X in P:
            for Y in Q:
                assert np.trace(X @ Y) == 0
