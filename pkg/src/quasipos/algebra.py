"""Matrix Lie algebras, the invariant inner product and reductive splittings.

Two chains are supported:

* ``so8`` : so(8) = p + so(7), so(7) = m + g2, with p the first row/column.
* ``u(n+1)`` : u(n+1) = p + (u(1) + u(n)), and u(1) + u(n) = m + h where m
  is the second row/column inside the u(n) block and h = u(1) + u(1) + u(n-1).

Matrices are plain numpy arrays (float for so(8), complex for u(n+1), or
``dtype=object`` for exact scalars where the projection is a pure entry mask).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import cayley
from .config import TOL


def bracket(X, Y):
    return X @ Y - Y @ X


def inner0(X, Y) -> float:
    """Bi-invariant product -Re tr(XY)."""
    t = np.trace(X @ Y)
    if isinstance(t, complex) or np.iscomplexobj(t):
        return -float(np.real(t))
    return -t


def norm0_sq(X) -> float:
    return float(inner0(X, X))


def is_skew(X, tol: float = TOL.identity) -> bool:
    X = np.asarray(X)
    return bool(np.max(np.abs(X + X.conj().T), initial=0.0) <= tol)


def _mask_first(n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=bool)
    M[0, 1:] = True
    M[1:, 0] = True
    return M


def _where(mask, X):
    out = X.copy()
    zero = 0 * X.flat[0] if X.size else 0
    out[~mask] = zero
    return out


@dataclass(frozen=True)
class ChainSpec:
    """A chain G > K (> H) of symmetric-pair or reductive splittings.

    ``kind`` is ``"so8"`` or ``"unitary"``; ``size`` is the matrix size.
    """

    kind: str
    size: int
    two_step_allowed: bool = field(default=False)

    def __post_init__(self):
        if self.kind not in ("so8", "unitary"):
            raise ValueError(f"unknown chain {self.kind!r}")
        if self.kind == "so8" and self.size != 8:
            raise ValueError("the so8 chain has size 8")
        if self.kind == "unitary" and self.size < 3:
            raise ValueError("the unitary chain needs size n+1 >= 3")

    @property
    def tag(self) -> str:
        return "so8" if self.kind == "so8" else f"u({self.size})"

    @property
    def is_complex(self) -> bool:
        return self.kind == "unitary"

    @cached_property
    def p_mask(self) -> np.ndarray:
        return _mask_first(self.size)

    @cached_property
    def m_mask(self) -> np.ndarray:
        """Entry mask of m (only meaningful for the unitary chain)."""
        n = self.size
        M = np.zeros((n, n), dtype=bool)
        M[1, 2:] = True
        M[2:, 1] = True
        return M

    @cached_property
    def lower_mask(self) -> np.ndarray:
        """u(n-1) block of h for the unitary chain."""
        M = np.zeros((self.size, self.size), dtype=bool)
        M[2:, 2:] = True
        return M

    @cached_property
    def _m_basis8(self):
        return [B.astype(float) for B in cayley.m_basis()]

    # -- projections --------------------------------------------------------

    def proj_p(self, X):
        return _where(self.p_mask, X)

    def proj_k(self, X):
        return _where(~self.p_mask, X)

    def proj_m(self, X):
        if self.kind == "unitary":
            return _where(self.m_mask, X)
        # every m basis vector has squared norm 6 and they are orthogonal
        K = self.proj_k(X)
        if K.dtype == object:
            out = np.zeros_like(K)
            for B in cayley.m_basis():
                c = inner0(K, B) / 6
                out = out + c * B
            return out
        out = np.zeros_like(K, dtype=float)
        for B in self._m_basis8:
            out += (inner0(K, B) / 6.0) * B
        return out

    def proj_h(self, X):
        return self.proj_k(X) - self.proj_m(X)

    def decompose(self, X):
        """``(X_p, X_m, X_h)``; they sum to ``X`` and are orthogonal."""
        X = np.asarray(X)
        if X.shape != (self.size, self.size):
            raise ValueError(f"{self.tag} expects {self.size}x{self.size} matrices, got {X.shape}")
        if np.iscomplexobj(X) and not self.is_complex:
            raise ValueError("complex matrix given to a real chain")
        return self.proj_p(X), self.proj_m(X), self.proj_h(X)

    # -- bases --------------------------------------------------------------

    def basis(self) -> list[np.ndarray]:
        """An orthogonal real basis of the top algebra (not normalized)."""
        n = self.size
        out = []
        if self.kind == "so8":
            for i in range(n):
                for j in range(i + 1, n):
                    E = np.zeros((n, n))
                    E[i, j], E[j, i] = 1.0, -1.0
                    out.append(E)
            return out
        for i in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[i, i] = 1j
            out.append(E)
        for i in range(n):
            for j in range(i + 1, n):
                E = np.zeros((n, n), dtype=complex)
                E[i, j], E[j, i] = 1.0, -1.0
                out.append(E)
                F = np.zeros((n, n), dtype=complex)
                F[i, j], F[j, i] = 1j, 1j
                out.append(F)
        return out

    @property
    def dim(self) -> int:
        return len(self.basis())

    def coords(self, X) -> np.ndarray:
        """Coordinates of ``X`` in the orthonormalized :meth:`basis`."""
        B = self.basis()
        return np.array([inner0(X, b) / np.sqrt(norm0_sq(b)) for b in B])

    def from_coords(self, c) -> np.ndarray:
        B = self.basis()
        dtype = complex if self.is_complex else float
        out = np.zeros((self.size, self.size), dtype=dtype)
        for ci, b in zip(c, B):
            out = out + ci * b / np.sqrt(norm0_sq(b))
        return out


SO8 = ChainSpec("so8", 8)


def unitary_chain(n: int) -> ChainSpec:
    """Chain U(n+1) > U(1)U(n) > U(1)U(1)U(n-1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return ChainSpec("unitary", n + 1, two_step_allowed=True)


class LieVector:
    """A tagged algebra element with cached components for its chain."""

    def __init__(self, matrix, chain: ChainSpec, tag: str | None = None):
        M = np.asarray(matrix)
        if M.shape != (chain.size, chain.size):
            raise ValueError(f"matrix shape {M.shape} does not fit {chain.tag}")
        if M.dtype != object and not is_skew(M, TOL.identity * max(1.0, float(np.max(np.abs(M), initial=0.0)))):
            raise ValueError("matrix is not skew")
        self.matrix = M
        self.chain = chain
        self.tag = tag or chain.tag
        if self.tag == "g2" and not cayley.satisfies_g2_relations(M[1:, 1:], TOL.identity):
            raise ValueError("matrix tagged g2 violates the defining relations")

    @cached_property
    def components(self):
        return self.chain.decompose(self.matrix)

    @property
    def p(self):
        return self.components[0]

    @property
    def m(self):
        return self.components[1]

    @property
    def h(self):
        return self.components[2]

    @property
    def k(self):
        return self.components[1] + self.components[2]

    def __repr__(self):
        return f"LieVector({self.tag}, size={self.chain.size})"
