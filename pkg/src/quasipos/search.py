"""Randomized search for flat horizontal planes.

For a horizontal basis h_1..h_d that is orthonormal for the product metric,
a plane spanned by orthonormal coefficient vectors a, b has residual

    R(a, b) = sum over both factors and all required brackets of |[.,.]|_0^2,

which is a quadratic form in the Pluecker vector a ^ b.  For fixed ``a`` the
minimum over unit ``b`` orthogonal to ``a`` is the bottom eigenvalue of a
small symmetric matrix, so the local descent alternates between the two legs
of the frame.  Every step is an exact partial minimization; no derivatives
are used and the trace is monotone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import HorizontalBasis
from .algebra import bracket


def _flat(B) -> np.ndarray:
    B = np.asarray(B)
    if np.iscomplexobj(B):
        return np.concatenate([B.real.ravel(), B.imag.ravel()])
    return B.ravel().astype(float)


def _components(metric, X):
    p, m, h = metric.chain.decompose(X)
    comps = [X, m + h, p]
    if metric.lam2 is not None:
        comps += [m, h]
    return comps


def bracket_tensor(H: HorizontalBasis) -> np.ndarray:
    """T[i, j] = flattened brackets of the criterion vectors of h_i and h_j."""
    left_metric, right_metric = H.metrics
    comps = []
    for L, R in zip(H.left, H.right):
        cl = _components(left_metric, left_metric.criterion_vectors(L))
        cr = _components(right_metric, right_metric.criterion_vectors(R))
        comps.append((cl, cr))
    d = H.dim
    rows = {}
    for i in range(d):
        for j in range(i + 1, d):
            parts = []
            for side in (0, 1):
                for Ci, Cj in zip(comps[i][side], comps[j][side]):
                    parts.append(_flat(bracket(Ci, Cj)))
            rows[(i, j)] = np.concatenate(parts)
    K = len(next(iter(rows.values())))
    T = np.zeros((d, d, K))
    for (i, j), v in rows.items():
        T[i, j] = v
        T[j, i] = -v
    return T


@dataclass
class ResidualModel:
    """Quartic tensor S with R(a, b) = sum S[i,j,k,l] a_i b_j a_k b_l."""

    S: np.ndarray

    @classmethod
    def from_basis(cls, H: HorizontalBasis) -> "ResidualModel":
        T = bracket_tensor(H)
        return cls(np.einsum("ijx,klx->ijkl", T, T))

    @property
    def dim(self) -> int:
        return self.S.shape[0]

    def leg_matrix(self, a) -> np.ndarray:
        """M(a) with R(a, b) = b^T M(a) b."""
        return np.einsum("i,k,ijkl->jl", a, a, self.S)

    def value(self, a, b) -> float:
        """Plane residual of span(a, b); invariant under change of basis."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        gram = (a @ a) * (b @ b) - (a @ b) ** 2
        if gram <= 0:
            raise ValueError("degenerate pair")
        return float(b @ self.leg_matrix(a) @ b) / gram


def _complement(a) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the unit vector a."""
    Q, _ = np.linalg.qr(np.column_stack([a, np.eye(len(a))]))
    return Q[:, 1:]


def _best_partner(model: ResidualModel, a):
    C = _complement(a)
    M = C.T @ model.leg_matrix(a) @ C
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    return max(float(w[0]), 0.0), C @ V[:, 0]


def random_frame(rng, d: int, min_gram: float = 1e-8):
    """Orthonormal random pair; ill-conditioned draws are resampled."""
    while True:
        a = rng.standard_normal(d)
        b = rng.standard_normal(d)
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        a, b = a / na, b / nb
        if 1 - (a @ b) ** 2 >= min_gram:
            b = b - (a @ b) * a
            return a, b / np.linalg.norm(b)


def local_descent(model: ResidualModel, a, b, max_iter: int = 400, rtol: float = 1e-12, atol: float = 1e-16):
    """Alternate exact minimization over each leg.  Returns (value, a, b, trace)."""
    value = model.value(a, b)
    trace = [value]
    for _ in range(max_iter):
        new, b_new = _best_partner(model, a)
        a, b = b_new, a
        if new > value:
            # numerical noise; keep the monotone record
            new = value
        improved = value - new
        value = new
        trace.append(value)
        if value <= atol or improved <= rtol * max(value, 1e-300):
            break
    # final polish: a is the freshest leg, recompute its partner
    return value, a, b, trace


@dataclass
class SearchResult:
    residual: float
    frame: tuple
    trace: list
    restarts: int
    best_restart: int


def min_residual_search(H: HorizontalBasis, budget: int, seed: int, model: ResidualModel | None = None,
                        stop_below: float | None = None) -> SearchResult:
    """Best plane over ``budget`` seeded restarts.

    The trace records the running best value after each restart, so it is
    nonincreasing.  Ties go to the lowest restart index.  With
    ``stop_below`` set, the search stops at the first restart reaching it.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if H.dim < 2:
        raise ValueError("horizontal space has dimension < 2")
    model = model or ResidualModel.from_basis(H)
    rng = np.random.default_rng(seed)
    best = (np.inf, None, None, -1)
    trace = []
    done = 0
    for r in range(budget):
        a, b = random_frame(rng, model.dim)
        val, a, b, _ = local_descent(model, a, b)
        done = r + 1
        if val < best[0]:
            best = (val, a, b, r)
        trace.append(best[0])
        if stop_below is not None and best[0] < stop_below:
            break
    frame = (H.element(best[1]), H.element(best[2]))
    return SearchResult(float(best[0]), frame, trace, done, best[3])
