"""Exact case analysis for the SO(8) point A = diag(R(theta), I6).

Each ``step_*`` function checks one link of the argument that no flat
horizontal plane exists at (A, I) and returns a :class:`Step`.  A failed
check raises :class:`ReplayFailure`.  Steps run over any exact domain from
:mod:`quasipos.exact`: Q(sqrt 2) at theta = pi/4, sympy constants at other
rational multiples of pi, or the symbolic pair (c, s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from . import cayley
from .actions import PreconditionError, circle_generator, so3_generators
from .exact import AngleDomain, QSqrt2, QSqrt2Domain, SympyDomain, as_object, kernel, rank


class ReplayFailure(AssertionError):
    pass


@dataclass(frozen=True)
class Step:
    name: str
    detail: str

    def as_dict(self):
        return {"name": self.name, "detail": self.detail}


@dataclass
class AngleContext:
    domain: object
    c: object
    s: object
    label: str

    def point(self) -> np.ndarray:
        d = self.domain
        A = np.empty((8, 8), dtype=object)
        for i in range(8):
            for j in range(8):
                A[i, j] = d.convert(1 if i == j else 0)
        A[0, 0], A[0, 1] = self.c, -self.s
        A[1, 0], A[1, 1] = self.s, self.c
        return A

    def zero(self, x) -> bool:
        return self.domain.is_zero(x)


def angle_context(theta) -> AngleContext:
    """Exact context for theta = r*pi (``r`` rational) or ``"symbolic"``."""
    if isinstance(theta, str) and theta == "symbolic":
        d = AngleDomain()
        return AngleContext(d, d.c, d.s, "symbolic")
    r = Fraction(theta)
    if (2 * r).denominator == 1:
        raise PreconditionError("theta is a multiple of pi/2; the point is excluded")
    label = f"{r}*pi"
    if (4 * r).denominator == 1:
        half = Fraction(1, 2)
        c = QSqrt2(0, half if math.cos(math.pi * r) > 0 else -half)
        s = QSqrt2(0, half if math.sin(math.pi * r) > 0 else -half)
        return AngleContext(QSqrt2Domain(), c, s, label)
    d = SympyDomain()
    x = sympy.pi * sympy.Rational(r.numerator, r.denominator)
    return AngleContext(d, sympy.cos(x), sympy.sin(x), label)


def _int_object(M) -> np.ndarray:
    return as_object(np.asarray(M).tolist())


def _p_row(M) -> list:
    """First-row coordinates (the w-vector) of the p-component."""
    return list(M[0, 1:])


def _ad_transpose(A, X):
    return A.T.dot(X).dot(A)


def ad_p_map_p(ctx: AngleContext) -> np.ndarray:
    """7x7 matrix of w -> (Ad_{A^t} X_w)_p."""
    A = ctx.point()
    cols = [_p_row(_ad_transpose(A, _int_object(B))) for B in cayley.p_basis()]
    return np.array(cols, dtype=object).T


def ad_p_map_m(ctx: AngleContext) -> np.ndarray:
    """7x7 matrix of v -> (Ad_{A^t} Y_v)_p."""
    A = ctx.point()
    cols = [_p_row(_ad_transpose(A, _int_object(B))) for B in cayley.m_basis()]
    return np.array(cols, dtype=object).T


def _require(cond: bool, msg: str):
    if not cond:
        raise ReplayFailure(msg)


# ----------------------------------------------------------------------------
# rank-one facts (independent of theta)


@lru_cache(maxsize=None)
def _bracket_area_ratio(kind: str):
    """|[Y, Z]|^2 / (|y|^2 |z|^2 - <y,z>^2) as a polynomial identity."""
    a = sympy.symbols("a1:8", real=True)
    b = sympy.symbols("b1:8", real=True)
    if kind == "m":
        Y = sympy.Matrix(cayley.m_block(list(a)))
        Z = sympy.Matrix(cayley.m_block(list(b)))
    else:
        Y = sympy.Matrix(cayley.p_vector(np.array(a, dtype=object)))
        Z = sympy.Matrix(cayley.p_vector(np.array(b, dtype=object)))
    B = Y * Z - Z * Y
    n2 = sympy.expand(sum(x**2 for x in B))
    area = sympy.expand(sum(x**2 for x in a) * sum(x**2 for x in b) - sum(x * y for x, y in zip(a, b)) ** 2)
    ratio = sympy.cancel(n2 / area)
    return ratio


def step_p_rank_one() -> Step:
    """Commuting vectors of p are dependent (exact identity on all of p)."""
    ratio = _bracket_area_ratio("p")
    _require(ratio.is_number and ratio > 0, f"bracket norm on p is not a positive multiple of the area: {ratio}")
    # direct kernel at the first basis vector as a second witness
    X0 = _int_object(cayley.p_basis()[0])
    cols = []
    for B in cayley.p_basis():
        Z = _int_object(B)
        cols.append(list((X0.dot(Z) - Z.dot(X0)).ravel()))
    K = kernel(np.array(cols, dtype=object).T, QSqrt2Domain())
    _require(len(K) == 1 and list(K[0]) == [1, 0, 0, 0, 0, 0, 0], "kernel of ad on p is not the line of X0")
    return Step("p_rank_one", f"|[X,X']|^2 = {ratio} * area on p; ker ad_X0|p = span(X0)")


def step_m_no_commuting_pairs() -> Step:
    """Commuting vectors of m are dependent (exact identity on all of m)."""
    ratio = _bracket_area_ratio("m")
    _require(ratio.is_number and ratio > 0, f"bracket norm on m is not a positive multiple of the area: {ratio}")
    Y7 = _int_object(cayley.m_basis()[6])
    cols = []
    for B in cayley.m_basis():
        Z = _int_object(B)
        cols.append(list((Y7.dot(Z) - Z.dot(Y7)).ravel()))
    K = kernel(np.array(cols, dtype=object).T, QSqrt2Domain())
    _require(len(K) == 1 and list(K[0]) == [0, 0, 0, 0, 0, 0, 1], "kernel of ad at the v7 matrix is not its own line")
    return Step("m_no_commuting_pairs", f"|[Y,Y']|^2 = {ratio} * area on m; ker ad_Y7|m = span(Y7)")


# ----------------------------------------------------------------------------
# theta-dependent steps


def step_ad_maps(ctx: AngleContext) -> Step:
    """(Ad_{A^t} X)_p = diag(1, c, ..., c) w and (Ad_{A^t} Y)_p = s * shift(v)."""
    MX = ad_p_map_p(ctx)
    MY = ad_p_map_m(ctx)
    for i in range(7):
        for j in range(7):
            want_x = (1 if i == 0 else ctx.c) if i == j else 0
            want_y = ctx.s if i == j + 1 else 0
            _require(ctx.zero(MX[i, j] - want_x), f"M_X[{i},{j}] = {MX[i, j]} differs from {want_x}")
            _require(ctx.zero(MY[i, j] - want_y), f"M_Y[{i},{j}] = {MY[i, j]} differs from {want_y}")
    return Step("ad_maps", f"[{ctx.label}] M_X = diag(1,c,...,c), M_Y = s*shift")


def step_x_case(ctx: AngleContext) -> Step:
    """(Ad_{A^t} X)_p = 0 forces X = 0: M_X is injective."""
    MX = ad_p_map_p(ctx)
    r = rank(MX, ctx.domain)
    _require(r == 7, f"M_X has rank {r}")
    return Step("x_projection_vanishes", f"[{ctx.label}] rank M_X = 7, so X = 0")


def _commuting_first_entry() -> np.ndarray:
    """Bilinear form (w, v) -> first entry of the first row of [X_w, Y_v].

    [X, Y] = 0 forces this to vanish; it is -sum_j w_{j+1} v_j.
    """
    F = np.empty((7, 7), dtype=object)
    for i, P in enumerate(cayley.p_basis()):
        for j, M in enumerate(cayley.m_basis()):
            X, Y = _int_object(P), _int_object(M)
            F[i, j] = (X.dot(Y) - Y.dot(X))[0, 1]
    return F


def step_proportional_case(ctx: AngleContext) -> Step:
    """Proportional projections contradict [X, Y] = 0.

    w = s' M_X^{-1} M_Y v, and the commuting form evaluated on (w, v) is a
    semidefinite quadratic form in v whose kernel is ker M_Y; then w = 0.
    """
    d = ctx.domain
    MX = ad_p_map_p(ctx)
    MY = ad_p_map_m(ctx)
    # M_X is diagonal; invert entrywise with certified pivots
    S = np.empty((7, 7), dtype=object)
    for i in range(7):
        piv = MX[i, i]
        _require(d.nonvanishing(piv), f"pivot {piv} not certified nonzero")
        for j in range(7):
            S[i, j] = MY[i, j] / piv
    F = _commuting_first_entry()
    # quadratic form v -> v^T (S^T F) v, symmetrized
    Qm = S.T.dot(F)
    Qs = np.empty((7, 7), dtype=object)
    for i in range(7):
        for j in range(7):
            Qs[i, j] = (Qm[i, j] + Qm[j, i]) / 2
    diag = Qs[0, 0]
    _require(d.nonvanishing(diag), "quadratic form is degenerate on v1")
    for i in range(7):
        for j in range(7):
            want = diag if (i == j and i < 6) else 0
            _require(d.is_zero(Qs[i, j] - want), f"quadratic form entry ({i},{j}) = {Qs[i, j]}")
    # kernel of the form is span(v7), which is ker M_Y, so w = s' S v = 0
    KY = kernel(MY, d)
    _require(len(KY) == 1 and all(d.is_zero(x) for x in KY[0][:6]), "ker M_Y is not span(v7)")
    return Step("proportional_case", f"[{ctx.label}] form = {diag} * (v1^2+...+v6^2), kernel = ker M_Y, so X = 0")


def step_y_case(ctx: AngleContext, generators=None) -> Step:
    """(Ad_{A^t} Y)_p = 0 forces Y onto the v7 line, which is not horizontal."""
    d = ctx.domain
    MY = ad_p_map_m(ctx)
    KY = kernel(MY, d)
    _require(len(KY) == 1, f"ker M_Y has dimension {len(KY)}")
    v = KY[0]
    _require(all(d.is_zero(x) for x in v[:6]) and d.nonvanishing(v[6]), "ker M_Y is not span(v7)")
    A = ctx.point()
    Ainv = A.T
    gens = generators if generators is not None else [circle_generator((0, 0, 1))]
    Y7 = _int_object(cayley.m_basis()[6])
    pairing = []
    for T in gens:
        T = _int_object(T.astype(int))
        AdT = A.dot(T).dot(Ainv)
        _require(all(d.is_zero(x - y) for x, y in zip(AdT.ravel(), T.ravel())), "Ad_A does not fix the circle generator")
        pairing.append(-np.trace(Y7.dot(T)))
    _require(any(d.nonvanishing(x) for x in pairing), "v7 matrix is orthogonal to every vertical generator")
    return Step("y_projection_vanishes", f"[{ctx.label}] ker M_Y = span(v7); Ad_A fixes the circle; <Y7, Theta>_0 = {pairing[0]}")


def step_n11_contains_m13(ctx: AngleContext) -> Step:
    """The SO(3) constraints contain the circle constraint and are Ad_A-fixed."""
    d = ctx.domain
    theta_gen = circle_generator((0, 0, 1)).astype(int)
    gens = [g.astype(int) for g in so3_generators()]
    _require(any((theta_gen == g).all() or (theta_gen == -g).all() for g in gens), "circle is not inside SO(3)")
    A = ctx.point()
    for g in gens:
        T = _int_object(g)
        AdT = A.dot(T).dot(A.T)
        _require(all(d.is_zero(x - y) for x, y in zip(AdT.ravel(), T.ravel())), "Ad_A moves an SO(3) generator")
    return Step("n11_contains_m13", f"[{ctx.label}] circle in so(3); Ad_A fixes so(3)")


M13_STEPS = ("p_rank_one", "m_no_commuting_pairs", "ad_maps", "x_projection_vanishes",
             "proportional_case", "y_projection_vanishes")


def replay_m13(theta) -> list[Step]:
    ctx = angle_context(theta)
    return [
        step_p_rank_one(),
        step_m_no_commuting_pairs(),
        step_ad_maps(ctx),
        step_x_case(ctx),
        step_proportional_case(ctx),
        step_y_case(ctx),
    ]


def replay_n11(theta) -> list[Step]:
    ctx = angle_context(theta)
    steps = replay_m13(theta)
    steps.append(step_n11_contains_m13(ctx))
    return steps
