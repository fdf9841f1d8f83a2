"""Cayley numbers, the Lie algebra g2 and the so(8) pieces built from them.

Basis conventions: ``e0 = 1, e1 = i, e2 = j, e3 = k, e4 = l, e5 = il,
e6 = jl, e7 = kl``.  Products follow the fixed multiplication table below
(row times column); nothing else about octonions is assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import TOL

_NAMES = {"1": 0, "i": 1, "j": 2, "k": 3, "l": 4, "il": 5, "jl": 6, "kl": 7}

# rows e1..e7, columns e1..e7
_TABLE_ROWS = [
    "-1  k -j il -l -kl jl",
    "-k -1  i jl kl -l -il",
    " j -i -1 kl -jl il -l",
    "-il -jl -kl -1 i j k",
    " l -kl jl -i -1 -k j",
    " kl l -il -j k -1 -i",
    "-jl il l -k -j i -1",
]


def _parse_table():
    table = {}
    for r, line in enumerate(_TABLE_ROWS, start=1):
        for c, tok in enumerate(line.split(), start=1):
            sign = -1 if tok.startswith("-") else 1
            table[(r, c)] = (sign, _NAMES[tok.lstrip("-")])
    for a in range(8):
        table[(0, a)] = (1, a)
        table[(a, 0)] = (1, a)
    return table


#: ``BASIS_PRODUCT[(a, b)] == (sign, c)`` means ``e_a * e_b = sign * e_c``.
BASIS_PRODUCT = _parse_table()


def _structure_constants() -> np.ndarray:
    f = np.zeros((8, 8, 8), dtype=np.int64)
    for (a, b), (sign, c) in BASIS_PRODUCT.items():
        f[a, b, c] = sign
    return f


STRUCTURE = _structure_constants()


@dataclass(frozen=True)
class Octonion:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError("an octonion has 8 coordinates")
        object.__setattr__(self, "coords", tuple(self.coords))

    @classmethod
    def basis(cls, a: int) -> "Octonion":
        return cls(tuple(1 if b == a else 0 for b in range(8)))

    def __mul__(self, other: "Octonion") -> "Octonion":
        return oct_mul(self, other)

    def __add__(self, other):
        return Octonion(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Octonion(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return Octonion(tuple(-x for x in self.coords))

    def scale(self, t) -> "Octonion":
        return Octonion(tuple(t * x for x in self.coords))

    def conj(self) -> "Octonion":
        return Octonion((self.coords[0],) + tuple(-x for x in self.coords[1:]))

    def norm2(self):
        return sum(x * x for x in self.coords)

    def norm(self) -> float:
        return math.sqrt(float(self.norm2()))

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    """Bilinear extension of the basis multiplication table."""
    out = [0] * 8
    for i, x in enumerate(a.coords):
        if not x:
            continue
        for j, y in enumerate(b.coords):
            if not y:
                continue
            sign, c = BASIS_PRODUCT[(i, j)]
            out[c] = out[c] + sign * x * y
    return Octonion(tuple(out))


def oct_mul_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised float product; ``x`` and ``y`` have trailing axis 8."""
    return np.einsum("...a,...b,abc->...c", x, y, STRUCTURE)


# ----------------------------------------------------------------------------
# g2 inside so(7)

#: The seven linear relations cutting g2 out of so(7); indices are 1-based
#: on the 7x7 matrix acting on span(e1..e7).
G2_RELATIONS = [
    ((2, 3), (4, 5), (7, 6)),
    ((1, 2), (4, 7), (6, 5)),
    ((1, 3), (6, 4), (7, 5)),
    ((1, 4), (7, 2), (3, 6)),
    ((1, 5), (2, 6), (3, 7)),
    ((1, 6), (5, 2), (4, 3)),
    ((1, 7), (2, 4), (5, 3)),
]

G2_PARAMETERS = (
    "x1", "x2", "x3", "x4", "x5", "x6",
    "y1", "y2", "y3", "y4", "y5", "y6",
    "alpha1", "alpha2",
)

# upper-triangular entries of the general g2 element, as sums of parameters
# (1-based row, column) -> list of (sign, parameter)
_G2_PATTERN = {
    (1, 2): [(1, "x1"), (1, "x2")],
    (1, 3): [(1, "y1"), (1, "y2")],
    (1, 4): [(1, "x3"), (1, "x4")],
    (1, 5): [(1, "y3"), (1, "y4")],
    (1, 6): [(1, "x5"), (1, "x6")],
    (1, 7): [(1, "y5"), (1, "y6")],
    (2, 3): [(1, "alpha1")],
    (2, 4): [(-1, "y5")],
    (2, 5): [(1, "x5")],
    (2, 6): [(-1, "y3")],
    (2, 7): [(1, "x3")],
    (3, 4): [(1, "x6")],
    (3, 5): [(1, "y6")],
    (3, 6): [(-1, "x4")],
    (3, 7): [(-1, "y4")],
    (4, 5): [(1, "alpha2")],
    (4, 6): [(1, "y1")],
    (4, 7): [(-1, "x1")],
    (5, 6): [(1, "x2")],
    (5, 7): [(1, "y2")],
    (6, 7): [(1, "alpha1"), (1, "alpha2")],
}


def g2_element(**params) -> np.ndarray:
    """7x7 integer-or-float matrix of the general g2 element."""
    unknown = set(params) - set(G2_PARAMETERS)
    if unknown:
        raise ValueError(f"unknown g2 parameters {sorted(unknown)}")
    dtype = object if any(not isinstance(v, (int, float)) for v in params.values()) else float
    A = np.zeros((7, 7), dtype=dtype)
    for (r, c), terms in _G2_PATTERN.items():
        val = sum(sign * params.get(name, 0) for sign, name in terms)
        A[r - 1, c - 1] = val
        A[c - 1, r - 1] = -val
    return A


def g2_basis() -> list[np.ndarray]:
    """The 14 integer generators, ordered x1..x6, y1..y6, alpha1, alpha2."""
    out = []
    for name in G2_PARAMETERS:
        A = np.zeros((7, 7), dtype=np.int64)
        for (r, c), terms in _G2_PATTERN.items():
            val = sum(sign for sign, n in terms if n == name)
            A[r - 1, c - 1] = val
            A[c - 1, r - 1] = -val
        out.append(A)
    return out


def g2_relation_values(A) -> list:
    """Values of the seven defining relations (all zero for A in g2)."""
    return [sum(A[i - 1][j - 1] for i, j in rel) for rel in G2_RELATIONS]


def satisfies_g2_relations(A, tol: float = 0.0) -> bool:
    return all(abs(v) <= tol for v in g2_relation_values(A))


def g2_basis_json() -> str:
    return json.dumps([B.tolist() for B in g2_basis()])


def derivation_defect(D) -> float:
    """max over basis pairs of |D(ei ej) - D(ei) ej - ei D(ej)|.

    ``D`` is 7x7 acting on span(e1..e7) (column convention) and is extended
    by zero on e0.
    """
    D = np.asarray(D, dtype=float)
    if D.shape != (7, 7):
        raise ValueError(f"expected a 7x7 matrix, got shape {D.shape}")
    D8 = np.zeros((8, 8))
    D8[1:, 1:] = D
    E = np.eye(8)
    worst = 0.0
    for a in range(8):
        for b in range(8):
            lhs = D8 @ oct_mul_array(E[a], E[b])
            rhs = oct_mul_array(D8 @ E[a], E[b]) + oct_mul_array(E[a], D8 @ E[b])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def is_derivation(D, tol: float = TOL.identity) -> bool:
    return derivation_defect(D) < tol


# ----------------------------------------------------------------------------
# so(8) = p + m + g2


def embed7(A) -> np.ndarray:
    """so(7) -> so(8), acting trivially on e0."""
    A = np.asarray(A)
    out = np.zeros((8, 8), dtype=A.dtype)
    out[1:, 1:] = A
    return out


def p_vector(w) -> np.ndarray:
    """Element of p determined by its first row ``(0, w)``."""
    w = np.asarray(w)
    if w.shape != (7,):
        raise ValueError("w must have 7 entries")
    X = np.zeros((8, 8), dtype=w.dtype if w.dtype != np.int64 else np.int64)
    X[0, 1:] = w
    X[1:, 0] = -w
    return X


# upper-triangular pattern of the 7x7 block of m, 1-based on that block,
# entries (sign, index of v)
_M_PATTERN = {
    (1, 2): (1, 1), (1, 3): (1, 2), (1, 4): (1, 3), (1, 5): (1, 4), (1, 6): (1, 5), (1, 7): (1, 6),
    (2, 3): (1, 7), (2, 4): (1, 6), (2, 5): (-1, 5), (2, 6): (1, 4), (2, 7): (-1, 3),
    (3, 4): (-1, 5), (3, 5): (-1, 6), (3, 6): (1, 3), (3, 7): (1, 4),
    (4, 5): (1, 7), (4, 6): (-1, 2), (4, 7): (1, 1),
    (5, 6): (-1, 1), (5, 7): (-1, 2),
    (6, 7): (-1, 7),
}


def m_block(v) -> np.ndarray:
    """7x7 block of the m element with parameters ``v = (v1, ..., v7)``."""
    v = list(v)
    if len(v) != 7:
        raise ValueError("v must have 7 entries")
    dtype = object if any(not isinstance(x, (int, float, np.integer, np.floating)) for x in v) else float
    B = np.zeros((7, 7), dtype=dtype)
    for (r, c), (sign, idx) in _M_PATTERN.items():
        B[r - 1, c - 1] = sign * v[idx - 1]
        B[c - 1, r - 1] = -sign * v[idx - 1]
    return B


def m_vector(v) -> np.ndarray:
    return embed7(m_block(v))


def m_basis() -> list[np.ndarray]:
    return [embed7(m_block([1 if j == i else 0 for j in range(7)]).astype(np.int64)) for i in range(7)]


def p_basis() -> list[np.ndarray]:
    return [p_vector(np.array([1 if j == i else 0 for j in range(7)], dtype=np.int64)) for i in range(7)]


def g2_basis8() -> list[np.ndarray]:
    return [embed7(B) for B in g2_basis()]


def bracket_pairs(vectors):
    for i, j in combinations(range(len(vectors)), 2):
        yield i, j, vectors[i] @ vectors[j] - vectors[j] @ vectors[i]
