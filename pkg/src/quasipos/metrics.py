"""Cheeger-deformed left-invariant metrics and their flatness criteria.

One-step metric on a symmetric pair (G, K):   Phi1(Y) = Y_p + l1 Y_k.
Two-step metric on G > K > H (both pairs symmetric):
    Phi2(Y) = Y_p + l1 Y_m + l1 l2 Y_h,   Psi(Y) = Y_p + Y_m + l2 Y_h.

A plane spanned by Phi1^{-1}X, Phi1^{-1}Y (resp. Psi^{-1}X, Psi^{-1}Y) is flat
iff the listed brackets of X and Y vanish.  ``flat_residual`` measures how far
a pair is from that, normalized so that it depends only on the plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ChainSpec, bracket, inner0, norm0_sq
from .config import TOL


@dataclass(frozen=True)
class DeformedMetric:
    chain: ChainSpec
    lam1: float = 0.5
    lam2: float | None = None

    def __post_init__(self):
        if not 0 < self.lam1 < 1:
            raise ValueError("lambda1 must lie in (0, 1)")
        if self.lam2 is not None:
            if not 0 < self.lam2 < 1:
                raise ValueError("lambda2 must lie in (0, 1)")
            if not self.chain.two_step_allowed:
                raise ValueError(f"{self.chain.tag} does not carry a two-step deformation")

    @classmethod
    def one_step(cls, chain, lam1=0.5):
        return cls(chain, lam1)

    @classmethod
    def two_step(cls, chain, lam1=0.5, lam2=0.5):
        return cls(chain, lam1, lam2)

    @property
    def two_step_metric(self) -> bool:
        return self.lam2 is not None

    @property
    def t(self):
        return self.lam1 / (1 - self.lam1)

    @property
    def s(self):
        if self.lam2 is None:
            return None
        return self.lam2 / (1 - self.lam2)

    def _check(self, X):
        X = np.asarray(X)
        if X.shape != (self.chain.size, self.chain.size):
            raise ValueError(f"vector does not belong to {self.chain.tag}")
        return X

    def _scale(self, X, cp, cm, ch):
        X = self._check(X)
        p, m, h = self.chain.decompose(X)
        return cp * p + cm * m + ch * h

    def phi(self, X):
        """Metric tensor relative to <,>_0 (Phi1 or Phi2)."""
        l1 = self.lam1
        if self.lam2 is None:
            return self._scale(X, 1, l1, l1)
        return self._scale(X, 1, l1, l1 * self.lam2)

    def phi_inv(self, X):
        l1 = self.lam1
        if self.lam2 is None:
            return self._scale(X, 1, 1 / l1, 1 / l1)
        return self._scale(X, 1, 1 / l1, 1 / (l1 * self.lam2))

    def phi1(self, X):
        return self._scale(X, 1, self.lam1, self.lam1)

    def phi1_inv(self, X):
        return self._scale(X, 1, 1 / self.lam1, 1 / self.lam1)

    def psi(self, X):
        if self.lam2 is None:
            raise ValueError("psi is defined for two-step metrics only")
        return self._scale(X, 1, 1, self.lam2)

    def psi_inv(self, X):
        if self.lam2 is None:
            raise ValueError("psi is defined for two-step metrics only")
        return self._scale(X, 1, 1, 1 / self.lam2)

    def inner(self, X, Y) -> float:
        return inner0(self._check(X), self.phi(Y))

    def criterion_vectors(self, U):
        """Map a tangent vector ``U`` to the vector the bracket criteria use.

        For the one-step metric that is ``Phi1(U)``; for the two-step metric
        the plane is spanned by ``Psi^{-1}`` of the returned vectors, which is
        ``Phi1^{-1} Phi2(U)``.
        """
        if self.lam2 is None:
            return self.phi1(U)
        return self.psi(U)

    def brackets(self, X, Y) -> list:
        """The brackets that vanish exactly on flat planes."""
        ch = self.chain
        Xp, Xm, Xh = ch.decompose(X)
        Yp, Ym, Yh = ch.decompose(Y)
        out = [bracket(X, Y), bracket(Xm + Xh, Ym + Yh), bracket(Xp, Yp)]
        if self.lam2 is not None:
            out += [bracket(Xm, Ym), bracket(Xh, Yh)]
        return out


def raw_residual(metric: DeformedMetric, X, Y) -> float:
    """Unnormalized sum of squared bracket norms of the criterion vectors."""
    return float(sum(norm0_sq(B) for B in metric.brackets(X, Y)))


def _gram(metric, U, V):
    a = metric.inner(U, U)
    b = metric.inner(U, V)
    c = metric.inner(V, V)
    return a, b, c


def orthonormalize(metric: DeformedMetric, U, V):
    """Gram-Schmidt w.r.t. the deformed metric; rejects degenerate pairs."""
    a, b, c = _gram(metric, U, V)
    det = a * c - b * b
    if a <= 0 or det / max(a * c, 1e-300) < TOL.degenerate_gram:
        raise ValueError("degenerate pair: vectors are linearly dependent")
    e1 = U / np.sqrt(a)
    W = V - (b / a) * U
    e2 = W / np.sqrt(det / a)
    return e1, e2


def plane_vector(metric: DeformedMetric, X):
    """Tangent vector whose plane the criteria for ``X`` describe."""
    if metric.lam2 is None:
        return metric.phi1_inv(X)
    return metric.psi_inv(X)


def flat_residual(metric: DeformedMetric, X, Y) -> float:
    """Residual of the plane spanned by the tangent vectors of ``X`` and ``Y``.

    The plane is span{Phi1^-1 X, Phi1^-1 Y} (one-step) or
    span{Psi^-1 X, Psi^-1 Y} (two-step).  Its spanning pair is made
    orthonormal for the deformed metric, mapped back, and the squared
    <,>_0-norms of the required brackets are summed.  Zero iff flat.
    """
    U = plane_vector(metric, np.asarray(X))
    V = plane_vector(metric, np.asarray(Y))
    e1, e2 = orthonormalize(metric, U, V)
    return raw_residual(metric, metric.criterion_vectors(e1), metric.criterion_vectors(e2))
