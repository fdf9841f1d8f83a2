"""Sectional curvature of a left-invariant metric from first principles."""

import numpy as np

from quasipos.algebra import bracket


def sectional(metric, U, V):
    """Unnormalized sectional curvature of a left-invariant metric.

    General formula with U(X, Y) defined by
    2<U(X,Y), Z> = <[Z,X], Y> + <X, [Z,Y]>; independent of the bracket criteria.
    """
    basis = metric.chain.basis()
    G = np.array([[metric.inner(a, b) for b in basis] for a in basis])

    def sym(X, Y):
        rhs = np.array([0.5 * (metric.inner(bracket(Z, X), Y) + metric.inner(X, bracket(Z, Y))) for Z in basis])
        c = np.linalg.solve(G, rhs)
        return sum(ci * b for ci, b in zip(c, basis))

    B = bracket(U, V)
    val = -0.75 * metric.inner(B, B)
    val -= 0.5 * metric.inner(bracket(U, B), V)
    val -= 0.5 * metric.inner(bracket(V, bracket(V, U)), U)
    W = sym(U, V)
    val += metric.inner(W, W) - metric.inner(sym(U, U), sym(V, V))
    return val
