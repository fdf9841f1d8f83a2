"""Normalizations of a spanning pair that leave the plane unchanged.

The bracket conditions are alternating and bilinear, so they hold for one
basis of a plane iff they hold for every basis.  These helpers pick the
convenient bases used in the case analysis.
"""

from __future__ import annotations

import numpy as np

from .algebra import ChainSpec, inner0
from .metrics import DeformedMetric


def same_plane(X, Y, U, V, tol=1e-9) -> bool:
    """True when span{U, V} = span{X, Y} (both pairs independent)."""
    M = np.array([np.concatenate([np.ravel(Z).real, np.ravel(Z).imag]) for Z in (X, Y, U, V)])
    rk = lambda R: int(np.linalg.matrix_rank(R, tol))  # noqa: E731
    return rk(M[:2]) == 2 and rk(M[2:]) == 2 and rk(M) == 2


def rescale(V, entry, target=1j):
    """Multiply by the real factor that makes ``V[entry]`` equal to ``target``.

    ``target`` and ``V[entry]`` must be real multiples of each other.
    """
    v = complex(np.asarray(V)[entry])
    t = complex(target)
    if abs(v) == 0:
        raise ValueError("cannot rescale by a zero entry")
    f = t / v
    if abs(f.imag) > 1e-12 * abs(f):
        raise ValueError("entry is not a real multiple of the target")
    return np.asarray(V) * f.real


def unit_entry(V, entry):
    """Scale so that ``|V[entry]| = 1``."""
    v = abs(complex(np.asarray(V)[entry]))
    if v == 0:
        raise ValueError("cannot normalize a zero entry")
    return np.asarray(V) / v


def psi_orthogonalize(metric: DeformedMetric, X, Y):
    """Replace X by X - tY so that Psi^-1 X and Psi^-1 Y are orthogonal.

    Y is kept.  Orthogonality is measured in the deformed metric, which is
    where the two-step criterion vectors live.
    """
    U, V = metric.psi_inv(X), metric.psi_inv(Y)
    a = metric.inner(V, V)
    if a <= 0:
        raise ValueError("second vector is zero")
    t = metric.inner(U, V) / a
    return np.asarray(X) - t * np.asarray(Y), np.asarray(Y)


def rotate_p_leg_out(chain: ChainSpec, X, Y, tol=1e-8):
    """Change basis so the second vector has no p-component.

    Requires [X_p, Y_p] = 0 and a rank-one pair, so X_p and Y_p are
    dependent.  Returns (X', Y') with Y'_p = 0.
    """
    Xp, Yp = chain.proj_p(X), chain.proj_p(Y)
    nx, ny = np.sqrt(inner0(Xp, Xp)), np.sqrt(inner0(Yp, Yp))
    if ny <= tol:
        return np.asarray(X), np.asarray(Y)
    if nx <= tol:
        return np.asarray(Y), np.asarray(X)
    t = inner0(Yp, Xp) / nx**2
    if np.sqrt(max(inner0(Yp - t * Xp, Yp - t * Xp), 0.0)) > tol * max(1.0, ny):
        raise ValueError("p-components are independent")
    return np.asarray(X), np.asarray(Y) - t * np.asarray(X)


def rotate_to_p_and_m(chain: ChainSpec, X, Y, tol=1e-8):
    """Basis (X', Y') of the same plane with X' in p and Y' in k.

    Uses that commuting p-parts are dependent and that the k-parts of a
    flat pair are dependent too (no commuting pairs in m).
    """
    X, Y = rotate_p_leg_out(chain, X, Y, tol)
    Yk, Xk = chain.proj_k(Y), chain.proj_k(X)
    ny = np.sqrt(inner0(Yk, Yk))
    if ny <= tol:
        raise ValueError("second vector vanished")
    t = inner0(Xk, Yk) / ny**2
    X = np.asarray(X) - t * np.asarray(Y)
    return X, Y
