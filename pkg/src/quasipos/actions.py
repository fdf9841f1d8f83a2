"""Acting subgroups U of G x G, freeness tests and horizontal spaces.

Three families are modelled:

``s1xg2``
    A circle acting on the left of SO(8) through rotations with weights
    (p1, p2, p3) in the planes (e2,e3), (e4,e5), (e6,e7), and G2 on the right.
``so3xg2``
    The circle of weights (0, 0, 1) enlarged to the SO(3) rotating
    span(e5, e6, e7), again with G2 on the right.
``eschenburg``
    diag(z^p1, ..., z^p{n+1}) on the left of U(n+1) and
    diag(z^q1, z^q2, U(n-1)) on the right.

At a point (A, I) of G x G the horizontal space consists of the pairs
``(-Om1^{-1} Ad_{A^{-1}} X, Om2^{-1} X)`` with ``X`` orthogonal to
``Ad_A Y1 - Y2`` for every ``(Y1, Y2)`` in the Lie algebra of U.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

import numpy as np
import scipy.linalg
import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from . import cayley
from .algebra import SO8, ChainSpec, inner0, unitary_chain
from .config import TOL
from .metrics import DeformedMetric

FAMILIES = ("s1xg2", "so3xg2", "eschenburg")


class PreconditionError(ValueError):
    """Input violates a hypothesis of the requested computation."""


@dataclass(frozen=True)
class BiquotientSpec:
    family: str
    p: tuple = ()
    q: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}")
        if self.family == "s1xg2":
            if len(self.p) != 3:
                raise PreconditionError("s1xg2 needs three circle weights")
            if not any(self.p):
                raise PreconditionError("circle weights are all zero")
        elif self.family == "so3xg2":
            if self.p not in ((), (0, 0, 1)):
                raise PreconditionError("so3xg2 is only defined for the weights (0, 0, 1)")
            object.__setattr__(self, "p", (0, 0, 1))
        else:
            if len(self.q) != 2:
                raise PreconditionError("eschenburg needs q = (q1, q2)")
            if len(self.p) < 3:
                raise PreconditionError("eschenburg needs n + 1 >= 3 weights p")

    @classmethod
    def m13(cls):
        return cls("s1xg2", (0, 0, 1))

    @classmethod
    def n11(cls):
        return cls("so3xg2", (0, 0, 1))

    @classmethod
    def eschenburg(cls, p, q):
        return cls("eschenburg", tuple(p), tuple(q))

    @property
    def n(self) -> int | None:
        return len(self.p) - 1 if self.family == "eschenburg" else None

    @property
    def chain(self) -> ChainSpec:
        return SO8 if self.family != "eschenburg" else unitary_chain(self.n)

    def metrics(self, lam1=0.5, lam2=0.5):
        """Left and right factor metrics of the product metric on G x G."""
        ch = self.chain
        if self.family == "eschenburg":
            return DeformedMetric.one_step(ch, lam1), DeformedMetric.two_step(ch, lam1, lam2)
        m = DeformedMetric.one_step(ch, lam1)
        return m, m

    @property
    def group_dim(self) -> int:
        if self.family == "s1xg2":
            return 15
        if self.family == "so3xg2":
            return 17
        return 1 + (self.n - 1) ** 2

    def to_json(self) -> str:
        return json.dumps({"family": self.family, "p": list(self.p), "q": list(self.q)})

    @classmethod
    def from_json(cls, text: str) -> "BiquotientSpec":
        d = json.loads(text)
        return cls(d["family"], tuple(d.get("p", ())), tuple(d.get("q", ())))


# ----------------------------------------------------------------------------
# Eschenburg freeness


def eschenburg_free(p, q) -> bool:
    p = tuple(int(x) for x in p)
    q1, q2 = (int(x) for x in q)
    if len(p) < 3:
        raise PreconditionError("need at least three weights p")
    for i, j in permutations(range(len(p)), 2):
        if math.gcd(p[i] - q1, p[j] - q2) != 1:
            return False
    return True


def eschenburg_free_bruteforce(p, q, order: int = 120) -> bool:
    """Root-of-unity oracle: compare eigenvalue multisets of both sides.

    For z = exp(2 pi i k / order), k = 1..order-1, the circle element is
    non-free exactly when {z^q1, z^q2} fits inside the multiset {z^pi}
    (U(n-1) then absorbs the remaining eigenvalues).
    """
    p = [int(x) for x in p]
    q = [int(x) for x in q]
    for k in range(1, order):
        left = Counter((k * x) % order for x in p)
        right = Counter((k * x) % order for x in q)
        if not right - left:
            return False
    return True


def eschenburg_free_bruteforce_batch(P: np.ndarray, Q: np.ndarray, order: int = 120) -> np.ndarray:
    """Vectorised :func:`eschenburg_free_bruteforce` for the case n = 2."""
    P = np.asarray(P, dtype=np.int64)
    Q = np.asarray(Q, dtype=np.int64)
    m = P.shape[1]
    off = ~np.eye(m, dtype=bool)
    free = np.ones(len(P), dtype=bool)
    for k in range(1, order):
        pe = (k * P) % order
        qe = (k * Q) % order
        e1 = pe == qe[:, :1]
        e2 = pe == qe[:, 1:2]
        hit = (e1[:, :, None] & e2[:, None, :] & off).any(axis=(1, 2))
        free &= ~hit
    return free


def qp_hypothesis(p, q) -> bool:
    return qp_witness(p, q) is not None


def qp_witness(p, q):
    """First pair i < j with p_i != p_j and p_i + p_j avoiding 2q1, 2q2, q1+q2."""
    p = tuple(int(x) for x in p)
    if len(p) < 3:
        raise PreconditionError("need at least three weights p")
    q1, q2 = (int(x) for x in q)
    bad = {2 * q1, 2 * q2, q1 + q2}
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] != p[j] and p[i] + p[j] not in bad:
                return i, j
    return None


def reorder_for_hypothesis(p, q) -> tuple:
    """Permute p so that the witnessing pair comes first."""
    w = qp_witness(p, q)
    if w is None:
        raise PreconditionError("hypothesis fails: no pair p_i != p_j with p_i + p_j outside {2q1, 2q2, q1+q2}")
    i, j = w
    rest = [x for k, x in enumerate(p) if k not in (i, j)]
    return (p[i], p[j], *rest)


def simply_connected_parity(q) -> bool:
    q = [int(x) for x in q]
    if not any(q):
        raise PreconditionError("q must be nonzero")
    return sum(q) % 2 == 1


# ----------------------------------------------------------------------------
# circle x G2 freeness

# even sign changes of four slots
_EVEN_SIGNS = [s for s in product((1, -1), repeat=4) if s.count(-1) % 2 == 0]

# torus angles of G2 in SO(8) as integer combinations of (a, b): 0, a, b, a+b
_TORUS = ((0, 0), (1, 0), (0, 1), (1, 1))


def _pattern_matrix(p, perm, signs):
    """Rows express  s_i * theta - sign_i * torus_{perm(i)}(a, b)  in (theta, a, b)."""
    circle = (0, *p)
    rows = []
    for i in range(4):
        ta, tb = _TORUS[perm[i]]
        rows.append([circle[i], -signs[i] * ta, -signs[i] * tb])
    return sympy.Matrix(rows)


def _pattern_admits_nontrivial_theta(M: sympy.Matrix) -> bool:
    """Does M x in Z^4 have a solution x in R^3 / Z^3 with x_0 not in Z?"""
    D, U, V = smith_normal_decomp(M)
    if U * M * V != D:
        raise RuntimeError("Smith decomposition failed to verify")
    for i in range(3):
        d = int(D[i, i]) if i < min(D.shape) else 0
        coeff = int(V[0, i])
        if d == 0:
            if coeff != 0:
                return True
        elif coeff % d != 0:
            return True
    return False


@lru_cache(maxsize=None)
def s1_g2_free(p1: int, p2: int, p3: int) -> bool:
    """Exact freeness of the circle-times-G2 action with weights (p1, p2, p3).

    Non-free iff some nontrivial circle parameter gives a rotation whose block
    angles (0, p1 t, p2 t, p3 t) match the G2 torus angles (0, a, b, a+b) under
    a block permutation and an even number of sign flips.  Each of the
    24 * 8 patterns is a linear congruence system, decided via Smith form.
    """
    p = (int(p1), int(p2), int(p3))
    if not any(p):
        raise PreconditionError("circle weights are all zero")
    for perm in permutations(range(4)):
        for signs in _EVEN_SIGNS:
            if _pattern_admits_nontrivial_theta(_pattern_matrix(p, perm, signs)):
                return False
    return True


def s1_g2_free_grid(p, N: int = 720) -> bool:
    """Grid oracle: angles restricted to 2 pi Z / N, compared as folded multisets."""
    p = [int(x) for x in p]

    def fold(x):
        x %= N
        return min(x, N - x)

    for k in range(1, N):
        target = sorted(fold(k * x) for x in (0, *p))
        cands = set()
        for v in target:
            cands.update((v % N, (-v) % N))
        for a in cands:
            for b in cands:
                if sorted((0, fold(a), fold(b), fold(a + b))) == target:
                    return False
    return True


def signed_permutations(v):
    out = set()
    for perm in permutations(v):
        for signs in product((1, -1), repeat=len(v)):
            out.add(tuple(s * x for s, x in zip(signs, perm)))
    return out


# ----------------------------------------------------------------------------
# horizontal spaces


def _rot_generator(size, i, j, weight=1):
    E = np.zeros((size, size))
    E[i, j] = -weight
    E[j, i] = weight
    return E


def circle_generator(p) -> np.ndarray:
    """Generator of theta -> diag(I2, R(p1 t), R(p2 t), R(p3 t)) in so(8)."""
    T = np.zeros((8, 8))
    for w, (i, j) in zip(p, ((2, 3), (4, 5), (6, 7))):
        T += _rot_generator(8, i, j, w)
    return T


def so3_generators() -> list[np.ndarray]:
    return [_rot_generator(8, i, j) for i, j in ((5, 6), (5, 7), (6, 7))]


def m13_point(theta: float) -> np.ndarray:
    A = np.eye(8)
    c, s = math.cos(theta), math.sin(theta)
    A[:2, :2] = [[c, -s], [s, c]]
    return A


def eschenburg_point(n: int) -> np.ndarray:
    A = np.eye(n + 1, dtype=complex)
    r = 1 / math.sqrt(2)
    A[:2, :2] = [[r, -r], [r, r]]
    return A


def check_group_element(spec: BiquotientSpec, A) -> np.ndarray:
    A = np.asarray(A)
    size = spec.chain.size
    if A.shape != (size, size):
        raise PreconditionError(f"point must be {size}x{size}")
    err = np.max(np.abs(A.conj().T @ A - np.eye(size)))
    if err > TOL.group:
        raise PreconditionError(f"point is not in the group (orthogonality residual {err:.2e})")
    if spec.family != "eschenburg":
        if np.iscomplexobj(A) and np.max(np.abs(A.imag)) > TOL.group:
            raise PreconditionError("SO(8) point must be real")
        if abs(np.linalg.det(A.real) - 1) > 1e-8:
            raise PreconditionError("SO(8) point must have determinant one")
        A = A.real
    return A


def vertical_constraints(spec: BiquotientSpec, A) -> list[np.ndarray]:
    """Vectors V with <X, V>_0 = 0 cutting out the horizontal X."""
    A = check_group_element(spec, A)
    Ainv = A.conj().T
    ad = lambda Z: A @ Z @ Ainv  # noqa: E731
    if spec.family == "s1xg2":
        return [B.astype(float) for B in cayley.g2_basis8()] + [ad(circle_generator(spec.p))]
    if spec.family == "so3xg2":
        return [B.astype(float) for B in cayley.g2_basis8()] + [ad(T) for T in so3_generators()]
    n = spec.n
    size = n + 1
    out = []
    for i in range(2, size):
        E = np.zeros((size, size), dtype=complex)
        E[i, i] = 1j
        out.append(E)
        for j in range(i + 1, size):
            E = np.zeros((size, size), dtype=complex)
            E[i, j], E[j, i] = 1, -1
            out.append(E)
            F = np.zeros((size, size), dtype=complex)
            F[i, j], F[j, i] = 1j, 1j
            out.append(F)
    P = np.diag([1j * x for x in spec.p])
    Q = np.diag([1j * spec.q[0], 1j * spec.q[1]] + [0] * (n - 1))
    out.append(ad(P) - Q)
    return out


@dataclass
class HorizontalBasis:
    """Product-orthonormal basis of the horizontal space at (A, I).

    ``W`` holds the defining algebra elements X; ``left`` and ``right`` hold
    the two components of the lifted horizontal vectors.
    """

    spec: BiquotientSpec
    A: np.ndarray
    W: list
    left: list
    right: list
    metrics: tuple = field(default=None)

    @property
    def dim(self) -> int:
        return len(self.W)

    def lift(self, coeffs):
        c = np.asarray(coeffs)
        L = sum(ci * Li for ci, Li in zip(c, self.left))
        R = sum(ci * Ri for ci, Ri in zip(c, self.right))
        return L, R

    def element(self, coeffs):
        return sum(ci * Wi for ci, Wi in zip(coeffs, self.W))


def lift_pair(spec, A, X, metrics):
    left_metric, right_metric = metrics
    Ainv = A.conj().T
    L = -left_metric.phi_inv(Ainv @ X @ A)
    R = right_metric.phi_inv(X)
    return L, R


def product_inner(metrics, u, v) -> float:
    return metrics[0].inner(u[0], v[0]) + metrics[1].inner(u[1], v[1])


def horizontal_basis(spec: BiquotientSpec, A, lam1=0.5, lam2=0.5) -> HorizontalBasis:
    A = check_group_element(spec, A)
    ch = spec.chain
    metrics = spec.metrics(lam1, lam2)
    basis = ch.basis()
    norms = [math.sqrt(inner0(b, b)) for b in basis]
    cons = vertical_constraints(spec, A)
    C = np.array([[inner0(b, V) / nb for b, nb in zip(basis, norms)] for V in cons])
    K = scipy.linalg.null_space(C, rcond=1e-10)
    Ws = []
    for col in K.T:
        Ws.append(sum(c * b / nb for c, b, nb in zip(col, basis, norms)))
    lifts = [lift_pair(spec, A, X, metrics) for X in Ws]
    G = np.array([[product_inner(metrics, u, v) for v in lifts] for u in lifts])
    # G^{-1/2} keeps the result well conditioned
    evals, evecs = np.linalg.eigh(G)
    T = evecs @ np.diag(evals**-0.5) @ evecs.T
    W = [sum(T[i, j] * Ws[i] for i in range(len(Ws))) for j in range(len(Ws))]
    lifts = [lift_pair(spec, A, X, metrics) for X in W]
    return HorizontalBasis(spec, A, W, [u[0] for u in lifts], [u[1] for u in lifts], metrics)


def vertical_space(spec: BiquotientSpec, A, samples: int = 0, seed: int = 0):
    """Generators of the vertical space at (A, I) as pairs (left, right).

    These are (Ad_{A^-1} Z - Y1, Z - Y2) for Z in a basis of g together with
    (-Y1, -Y2) for (Y1, Y2) in a basis of u.
    """
    A = check_group_element(spec, A)
    Ainv = A.conj().T
    gens = [(Ainv @ Z @ A, Z) for Z in spec.chain.basis()]
    if spec.family == "s1xg2":
        u = [(circle_generator(spec.p), np.zeros((8, 8)))]
        u += [(np.zeros((8, 8)), B.astype(float)) for B in cayley.g2_basis8()]
    elif spec.family == "so3xg2":
        u = [(T, np.zeros((8, 8))) for T in so3_generators()]
        u += [(np.zeros((8, 8)), B.astype(float)) for B in cayley.g2_basis8()]
    else:
        n = spec.n
        size = n + 1
        P = np.diag([1j * x for x in spec.p])
        Q = np.diag([1j * spec.q[0], 1j * spec.q[1]] + [0] * (n - 1)).astype(complex)
        u = [(P, Q)]
        for V in vertical_constraints(spec, A)[:-1]:
            u.append((np.zeros((size, size), dtype=complex), V))
    gens += [(-a, -b) for a, b in u]
    return gens
