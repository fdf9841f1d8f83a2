"""Exact scalars and exact linear algebra.

``QSqrt2`` holds numbers ``a + b*sqrt(2)`` with rational ``a, b``.  Every
point the certificates need (rotation by pi/4, the 1/sqrt(2) block used for
the unitary groups) has entries in this field.  Matrices over it are numpy
arrays of ``dtype=object``.

A *domain* tells the elimination routines how to decide ``x == 0`` and when a
nonzero value may be divided by.  Three domains are provided: the field
above, sympy constants, and a symbolic angle ``(c, s)`` with ``c**2 + s**2 = 1``
and ``c*s != 0``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np
import sympy


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class QSqrt2:
    """Element ``a + b*sqrt(2)`` of the real quadratic field Q(sqrt 2)."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def coerce(cls, x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        return cls(x)

    @classmethod
    def sqrt2(cls) -> "QSqrt2":
        return cls(0, 1)

    @classmethod
    def inv_sqrt2(cls) -> "QSqrt2":
        return cls(0, Fraction(1, 2))

    def __add__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate_root(self) -> "QSqrt2":
        """Galois conjugate ``a - b*sqrt(2)``."""
        return QSqrt2(self.a, -self.b)

    def field_norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def __truediv__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        num = self * o.conjugate_root()
        return QSqrt2(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        return QSqrt2.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / self ** (-k)
        out = QSqrt2(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        """Exact sign of the real number ``a + b*sqrt(2)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 2 b^2
        return sa if self.a * self.a > 2 * self.b * self.b else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __float__(self):
        return float(self.a) + float(self.b) * 2.0 ** 0.5

    def to_sympy(self):
        return sympy.Rational(self.a.numerator, self.a.denominator) + sympy.Rational(
            self.b.numerator, self.b.denominator
        ) * sympy.sqrt(2)

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt2({self.a})"
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt2"


# ----------------------------------------------------------------------------
# domains


class QSqrt2Domain:
    name = "Q(sqrt2)"

    def convert(self, x):
        return QSqrt2.coerce(x) if not isinstance(x, QSqrt2) else x

    def is_zero(self, x) -> bool:
        return not QSqrt2.coerce(x)

    def nonvanishing(self, x) -> bool:
        return bool(QSqrt2.coerce(x))

    def positive(self, x) -> bool:
        return QSqrt2.coerce(x).sign() > 0


class SympyDomain:
    """Exact algebraic constants handled by sympy (cos(pi/6) and the like)."""

    name = "sympy"

    def convert(self, x):
        if isinstance(x, QSqrt2):
            return x.to_sympy()
        return sympy.sympify(x)

    def simplify(self, x):
        x = sympy.sympify(x)
        y = sympy.radsimp(sympy.expand(x))
        if y != 0 and y.free_symbols == set() and not y.is_number:
            y = sympy.simplify(y)
        return y

    def is_zero(self, x) -> bool:
        y = self.simplify(x)
        if y == 0:
            return True
        if y.is_number:
            z = sympy.nsimplify(y)
            return z == 0
        return sympy.simplify(y) == 0

    def nonvanishing(self, x) -> bool:
        y = self.simplify(x)
        return bool(y.is_number) and not self.is_zero(y)

    def positive(self, x) -> bool:
        y = self.simplify(x)
        return bool(y.is_number) and bool(y > 0)


class AngleDomain(SympyDomain):
    """Polynomials in symbols ``c, s`` modulo ``c**2 + s**2 - 1``.

    A value is certified nonvanishing only when its reduced numerator is a
    nonzero constant times a monomial in ``c`` and ``s``; that covers every
    pivot the rotation-block computations produce under ``c*s != 0``.
    """

    name = "angle(c,s)"

    def __init__(self):
        self.c, self.s = sympy.symbols("c s", real=True)
        self.relation = self.c**2 + self.s**2 - 1

    def reduce(self, x):
        x = sympy.together(sympy.sympify(x))
        num, den = sympy.fraction(x)
        num = sympy.expand(num)
        if num.has(self.s):
            num = sympy.rem(num, self.s**2 + self.c**2 - 1, self.s)
        return sympy.expand(num), den

    def is_zero(self, x) -> bool:
        num, _ = self.reduce(x)
        return num == 0

    def _is_monomial(self, expr) -> bool:
        poly = sympy.Poly(expr, self.c, self.s)
        return len(poly.terms()) == 1

    def nonvanishing(self, x) -> bool:
        num, den = self.reduce(x)
        if num == 0:
            return False
        if not self._is_monomial(num):
            # try the other normal form (eliminate c^2 instead of s^2)
            alt = sympy.expand(sympy.rem(sympy.expand(num), self.c**2 + self.s**2 - 1, self.c))
            if alt == 0 or not self._is_monomial(alt):
                return False
        return True

    def positive(self, x) -> bool:
        num, den = self.reduce(x)
        return num.is_number and den.is_number and bool(num / den > 0)


# ----------------------------------------------------------------------------
# exact elimination


def as_object(M) -> np.ndarray:
    A = np.empty(np.shape(M), dtype=object)
    flat = np.asarray(M, dtype=object).ravel()
    for idx, val in enumerate(flat):
        A.flat[idx] = val
    return A


def row_reduce(M, domain):
    """Reduced row echelon form over ``domain``.

    Returns ``(R, pivots)``.  Raises ``ValueError`` if a candidate pivot is
    neither provably zero nor provably nonzero.
    """
    R = as_object(M).copy()
    R = np.vectorize(domain.convert, otypes=[object])(R) if R.size else R
    rows, cols = R.shape
    pivots = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        piv = None
        undecided = None
        for i in range(r, rows):
            if domain.is_zero(R[i, col]):
                R[i, col] = domain.convert(0)
                continue
            if domain.nonvanishing(R[i, col]):
                piv = i
                break
            undecided = i
        if piv is None:
            if undecided is not None:
                raise ValueError(f"cannot certify pivot {R[undecided, col]!r}")
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = domain.convert(1) / R[r, col]
        R[r] = np.array([v * inv for v in R[r]], dtype=object)
        for i in range(rows):
            if i != r and not domain.is_zero(R[i, col]):
                f = R[i, col]
                R[i] = np.array([a - f * b for a, b in zip(R[i], R[r])], dtype=object)
        pivots.append(col)
        r += 1
    return R, pivots


def rank(M, domain) -> int:
    return len(row_reduce(M, domain)[1])


def kernel(M, domain) -> list:
    """Basis of the right null space, one object vector per free column."""
    M = as_object(M)
    R, pivots = row_reduce(M, domain)
    cols = M.shape[1]
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        v = np.array([domain.convert(0)] * cols, dtype=object)
        v[f] = domain.convert(1)
        for row, pc in enumerate(pivots):
            v[pc] = -R[row, f]
        basis.append(v)
    return basis
