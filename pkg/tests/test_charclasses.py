import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quasipos.charclasses import (
    S,
    T,
    U,
    ConstraintError,
    GradedPoly,
    elementary_symmetric,
    g2_roots,
    nicetrick_check,
    p1_integral_m13,
    p1_mod_p,
    pullback_Bfq,
    pullback_Bg,
    root_system,
    signed_permutations_even,
    sum_squared_positive_roots,
    t_vars,
    x1_bar,
    x_bar,
    y_bar,
    z_bar,
)

small = st.integers(-5, 5)


def test_root_sums():
    assert sum_squared_positive_roots(root_system("so8")) == z_bar() * 6
    assert sum_squared_positive_roots(root_system("g2")) == x1_bar() * 4
    assert sum_squared_positive_roots(root_system("so3")) == GradedPoly.u() ** 2


def test_root_sum_so8_by_hand():
    expr = sum((a + b) ** 2 + (a - b) ** 2 for a, b in itertools.combinations(T, 2))
    assert sympy.expand(expr - 6 * sum(t**2 for t in T)) == 0


def test_root_counts_and_degrees():
    assert root_system("so8").size == 12 and g2_roots().size == 6
    assert sum_squared_positive_roots(root_system("so8")).degree == 4
    assert y_bar(4).degree == 8


def test_x_bar_is_half_sigma1():
    assert x_bar() * 2 == x1_bar()


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_invariants_fixed_by_weyl_group(i):
    P = y_bar(i)
    t = t_vars()
    for perm, signs in signed_permutations_even(4):
        image = P.substitute({T[k]: signs[k] * t[perm[k]] for k in range(4)}, "t")
        assert image == P


def test_weyl_group_size():
    assert len(list(signed_permutations_even(4))) == 192


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), st.integers(1, 4), st.integers(1, 4))
def test_pullback_is_a_ring_homomorphism(q, i, j):
    P, Q = y_bar(i), y_bar(j)
    assert pullback_Bfq(P * Q, q) == pullback_Bfq(P, q) * pullback_Bfq(Q, q)
    assert pullback_Bfq(P + Q, q) == pullback_Bfq(P, q) + pullback_Bfq(Q, q)
    assert pullback_Bg(P * Q) == pullback_Bg(P) * pullback_Bg(Q)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_p1_matches_closed_form(q):
    if not any(q):
        with pytest.raises(ValueError):
            p1_mod_p("s1xg2", q)
        return
    assert p1_mod_p("s1xg2", q) == 2 * sum(x * x for x in q)


def test_p1_values():
    assert p1_mod_p("s1xg2") == 2
    assert p1_mod_p("so3xg2") == 1
    assert [p1_mod_p("s1xg2", (1, 1, 1, 2 * l)) for l in (1, 2, 3)] == [14, 38, 78]
    assert p1_mod_p("s1xg2", (1, 1, 1, 4), modulus=7) == 38 % 7


def test_p1_input_checks():
    with pytest.raises(ValueError):
        p1_mod_p("eschenburg")
    with pytest.raises(ValueError):
        p1_mod_p("s1xg2", (0, 0, 1))
    with pytest.raises(ValueError):
        p1_mod_p("so3xg2", (1, 1, 1, 2))
    with pytest.raises(ValueError):
        p1_mod_p("s1xg2", modulus=4)


def test_integral_p1():
    res = p1_integral_m13()
    assert res.magnitude == 8
    assert res.ks == (-2, -1, 1, 2)


def test_integral_p1_ambiguous_fixture():
    with pytest.raises(ConstraintError, match="not unique"):
        p1_integral_m13(x_shift=1)


def test_nicetrick_exhaustive():
    for r1, r2 in itertools.product(range(-50, 51), repeat=2):
        r3 = -r1 - r2
        if abs(r3) <= 50:
            assert nicetrick_check(r1, r2, r3) == (True, True)
    with pytest.raises(ValueError):
        nicetrick_check(1, 1, 1)


def test_graded_poly_basics():
    u = GradedPoly.u()
    P = 3 * u**2 + 1
    assert not P.is_homogeneous()
    with pytest.raises(ValueError):
        P.degree
    assert P.coeff(U**2) == 3
    assert (u * 5).mod(5).pretty() == "0 (mod 5)"
    assert (2 * u**2 - u).pretty() == "2*u^2 - u"
    with pytest.raises(ValueError):
        GradedPoly.u() + GradedPoly.w()
    with pytest.raises(ValueError):
        GradedPoly.from_expr(S[0], "t")
    with pytest.raises(ValueError):
        GradedPoly.from_expr(U / 2, "u")


def test_elementary_symmetric():
    assert elementary_symmetric(2, [1, 2, 3]) == 11
    with pytest.raises(ValueError):
        elementary_symmetric(4, [1, 2, 3])
