"""Graded polynomial arithmetic for Weyl-invariant rings and p1 computations.

Every generator (t1..t4, s1..s3, u, w) has cohomological degree 2.  The s
variables satisfy s1 + s2 + s3 = 0 and are stored with s3 eliminated.
Coefficients are exact integers; a prime modulus is applied only when
asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

import sympy
from sympy import ZZ, Poly

T = sympy.symbols("t1:5")
S = sympy.symbols("s1:4")
U = sympy.Symbol("u")
W = sympy.Symbol("w")

_GENS = {"t": T, "s": S[:2], "u": (U,), "w": (W,)}


def _canonical(expr, family):
    expr = sympy.sympify(expr)
    if family == "s":
        expr = expr.subs(S[2], -S[0] - S[1])
    return sympy.expand(expr)


@dataclass(frozen=True, eq=False)
class GradedPoly:
    family: str
    poly: Poly
    modulus: int | None = None

    @classmethod
    def from_expr(cls, expr, family: str, modulus: int | None = None) -> "GradedPoly":
        if family not in _GENS:
            raise ValueError(f"unknown variable family {family!r}")
        expr = _canonical(expr, family)
        stray = expr.free_symbols - set(_GENS[family])
        if stray:
            raise ValueError(f"symbols {sorted(map(str, stray))} do not belong to family {family!r}")
        try:
            poly = Poly(expr, *_GENS[family], domain=ZZ)
        except sympy.polys.polyerrors.CoercionFailed as exc:
            raise ValueError("coefficients must be integers") from exc
        out = cls(family, poly)
        return out.mod(modulus) if modulus else out

    @classmethod
    def const(cls, c: int, family: str) -> "GradedPoly":
        return cls.from_expr(c, family)

    @classmethod
    def t(cls, i):
        return cls.from_expr(T[i - 1], "t")

    @classmethod
    def s(cls, i):
        return cls.from_expr(S[i - 1], "s")

    @classmethod
    def u(cls):
        return cls.from_expr(U, "u")

    @classmethod
    def w(cls):
        return cls.from_expr(W, "w")

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if other.family != self.family:
                raise ValueError(f"cannot combine families {self.family!r} and {other.family!r}")
            if other.modulus != self.modulus and None not in (other.modulus, self.modulus):
                raise ValueError("moduli differ")
            return other
        if isinstance(other, int):
            return GradedPoly.const(other, self.family)
        return NotImplemented

    def _wrap(self, poly, other=None):
        mod = self.modulus or (other.modulus if other is not None else None)
        out = GradedPoly(self.family, poly)
        return out.mod(mod) if mod else out

    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap(self.poly + o.poly, o)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.poly)

    def __sub__(self, other):
        o = self._coerce(other)
        return self._wrap(self.poly - o.poly, o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(self.poly * o.poly, o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._wrap(self.poly**k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        diff = (self - o).poly
        return diff.is_zero

    def __hash__(self):
        return hash((self.family, self.poly.as_expr(), self.modulus))

    # -- structure ----------------------------------------------------------

    @property
    def expr(self):
        return self.poly.as_expr()

    def degrees(self) -> set[int]:
        """Cohomological degrees of the monomials present."""
        return {2 * sum(m) for m in self.poly.monoms()} if not self.poly.is_zero else set()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        d = self.degrees()
        if len(d) > 1:
            raise ValueError("polynomial is not homogeneous")
        return d.pop() if d else 0

    def coeff(self, monomial) -> int:
        """Coefficient of a monomial given as an expression, e.g. ``u**2``."""
        m = Poly(_canonical(monomial, self.family), *_GENS[self.family]).monoms()
        if len(m) != 1:
            raise ValueError("expected a single monomial")
        return int(self.poly.coeff_monomial(m[0]))

    def mod(self, p: int | None) -> "GradedPoly":
        if p is None:
            return GradedPoly(self.family, self.poly)
        if p < 3 or not sympy.isprime(p):
            raise ValueError("modulus must be a prime >= 3")
        terms = {m: int(c) % p for m, c in self.poly.terms()}
        poly = Poly.from_dict({m: c for m, c in terms.items() if c}, *_GENS[self.family], domain=ZZ) if any(terms.values()) \
            else Poly(0, *_GENS[self.family], domain=ZZ)
        return GradedPoly(self.family, poly, p)

    def substitute(self, images: dict, family: str) -> "GradedPoly":
        """Ring homomorphism sending each generator to a polynomial of ``family``."""
        mapping = {}
        for sym in _GENS[self.family]:
            img = images[sym]
            mapping[sym] = img.expr if isinstance(img, GradedPoly) else sympy.sympify(img)
        return GradedPoly.from_expr(self.expr.xreplace(mapping), family, self.modulus)

    def pretty(self) -> str:
        """Deterministic rendering, graded lexicographic order."""
        if self.poly.is_zero:
            return "0" + (f" (mod {self.modulus})" if self.modulus else "")
        gens = _GENS[self.family]
        parts = []
        for monom, c in self.poly.terms(order="grlex"):
            c = int(c)
            factors = []
            for g, e in zip(gens, monom):
                if e:
                    factors.append(str(g) if e == 1 else f"{g}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if body:
                term = body if mag == 1 else f"{mag}*{body}"
            else:
                term = str(mag)
            parts.append(("-" if c < 0 else "+", term))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        if self.modulus:
            out += f" (mod {self.modulus})"
        return out

    def __repr__(self):
        return f"GradedPoly({self.family}: {self.pretty()})"


# ----------------------------------------------------------------------------
# symmetric functions


def elementary_symmetric(k: int, values):
    values = list(values)
    if not 1 <= k <= len(values):
        raise ValueError(f"k must lie in 1..{len(values)}")
    return sum((math.prod(c) for c in combinations(values, k)), start=0 * values[0])


def squares(values):
    return [v * v for v in values]


def nicetrick_check(r1, r2, r3):
    """The two identities for a zero-sum triple: sigma1(r^2) = -2 sigma2(r), sigma2(r^2) = sigma2(r)^2."""
    r = [r1, r2, r3]
    total = r1 + r2 + r3
    if total != 0:
        raise ValueError("entries must sum to zero")
    s2 = elementary_symmetric(2, r)
    return (elementary_symmetric(1, squares(r)) == -2 * s2, elementary_symmetric(2, squares(r)) == s2 * s2)


def t_vars():
    return [GradedPoly.t(i) for i in range(1, 5)]


def s_vars():
    return [GradedPoly.s(i) for i in range(1, 4)]


def y_bar(i: int) -> GradedPoly:
    """Generators of the invariant ring of SO(8): sigma_i(t^2), i <= 3, and t1 t2 t3 t4."""
    t = t_vars()
    if i == 4:
        return t[0] * t[1] * t[2] * t[3]
    if i in (1, 2, 3):
        return elementary_symmetric(i, squares(t))
    raise ValueError("i must be 1..4")


def x1_bar() -> GradedPoly:
    return elementary_symmetric(1, squares(s_vars()))


def x2_bar() -> GradedPoly:
    return elementary_symmetric(3, squares(s_vars()))


def x_bar() -> GradedPoly:
    """Half of sigma1(s^2); integral since it equals -sigma2(s)."""
    x = -elementary_symmetric(2, s_vars())
    if x * 2 != x1_bar():
        raise ArithmeticError("sigma1(s^2) is not twice -sigma2(s)")
    return x


def z_bar() -> GradedPoly:
    return y_bar(1)


# ----------------------------------------------------------------------------
# root systems


@dataclass(frozen=True)
class RootSystem:
    name: str
    roots: tuple

    @property
    def size(self) -> int:
        return len(self.roots)


def so8_roots() -> RootSystem:
    t = t_vars()
    roots = []
    for i, j in combinations(range(4), 2):
        roots += [t[i] + t[j], t[i] - t[j]]
    return RootSystem("SO(8)", tuple(roots))


def g2_roots() -> RootSystem:
    s1, s2, s3 = s_vars()
    return RootSystem("G2", (s1, s2, -s3, s1 - s3, s2 - s1, s2 - s3))


def so3_roots() -> RootSystem:
    return RootSystem("SO(3)", (GradedPoly.u(),))


ROOT_SYSTEMS = {"so8": so8_roots, "g2": g2_roots, "so3": so3_roots}
_ROOT_COUNTS = {"SO(8)": 12, "G2": 6, "SO(3)": 1}


def root_system(name: str) -> RootSystem:
    rs = ROOT_SYSTEMS[name.lower()]()
    if rs.size != _ROOT_COUNTS[rs.name]:
        raise AssertionError(f"{rs.name} should have {_ROOT_COUNTS[rs.name]} positive roots")
    return rs


def sum_squared_positive_roots(rs: RootSystem) -> GradedPoly:
    return sum((r * r for r in rs.roots[1:]), start=rs.roots[0] * rs.roots[0])


# ----------------------------------------------------------------------------
# pullbacks


def _check_t(P):
    if not isinstance(P, GradedPoly) or P.family != "t":
        raise ValueError("expected a polynomial in t1..t4")


def pullback_Bfq(P: GradedPoly, q) -> GradedPoly:
    """Circle with weights q into the maximal torus: t_i -> q_i u."""
    _check_t(P)
    q = [int(x) for x in q]
    if len(q) != 4:
        raise ValueError("q must have four entries")
    return P.substitute({T[i]: q[i] * U for i in range(4)}, "u")


def pullback_Bg(P: GradedPoly) -> GradedPoly:
    """Torus of G2 into the torus of SO(8): t1 -> 0, t2 -> s1, t3 -> s2, t4 -> -s3."""
    _check_t(P)
    return P.substitute({T[0]: 0, T[1]: S[0], T[2]: S[1], T[3]: -S[2]}, "s")


def _multiple_of(P: GradedPoly, Q: GradedPoly) -> Fraction:
    """Rational c with P = c Q, checked exactly."""
    terms = Q.poly.terms()
    if not terms:
        raise ValueError("zero polynomial")
    monom, qc = terms[0]
    c = Fraction(int(P.poly.coeff_monomial(monom)), int(qc))
    if c.denominator != 1 or not P == Q * int(c):
        raise ValueError(f"{P.pretty()} is not an integer multiple of {Q.pretty()}")
    return c


def p1_mod_p(family: str, q=(0, 0, 0, 1), modulus: int | None = None) -> int:
    """Coefficient of the image of u^2 in p1 of the biquotient.

    p1 is the pullback of the root sum of SO(8), minus those of G2 and of
    the left factor.  The G2 term is a multiple of the Bg-image of
    sigma1(t^2), which pulls back to the same class as sigma1(t^2) along
    the circle, so every term is a multiple of u^2.
    """
    q = tuple(int(x) for x in q)
    if family not in ("s1xg2", "so3xg2"):
        raise ValueError("family must be s1xg2 or so3xg2")
    if len(q) != 4:
        raise ValueError("q must have four entries")
    if not any(q):
        raise ValueError("circle weights q are all zero")
    if modulus is not None and (modulus < 3 or not sympy.isprime(modulus)):
        raise ValueError("modulus must be an odd prime")
    if family == "so3xg2" and sorted(map(abs, q)) != [0, 0, 0, 1]:
        raise ValueError("so3xg2 is defined for q a signed permutation of (0,0,0,1) only")
    u2 = U**2
    y1 = y_bar(1)
    c_g = pullback_Bfq(sum_squared_positive_roots(root_system("so8")), q).coeff(u2)
    c_k = int(_multiple_of(sum_squared_positive_roots(root_system("g2")), pullback_Bg(y1))) * pullback_Bfq(y1, q).coeff(u2)
    c_h = sum_squared_positive_roots(root_system("so3")).coeff(u2) if family == "so3xg2" else 0
    c = c_g - c_k - c_h
    return c % modulus if modulus else c


# ----------------------------------------------------------------------------
# integral p1 of M13


class ConstraintError(ValueError):
    """The k-constraint system has no solution or more than one magnitude."""


@dataclass(frozen=True)
class IntegralP1:
    magnitude: int
    ks: tuple
    candidates: tuple


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def p1_integral_m13(z_images=(4, -4), x_coeff: int = 2, x_shift: int = 0, k_bound: int = 64) -> IntegralP1:
    """|p1| in units of y^2, from the spectral-sequence fixtures.

    Fixtures (taken as given, not computed here): the image of z = sigma1(t^2)
    is +-4 y^2 and the image of x = sigma1(s^2)/2 is (x_coeff k + x_shift) y^2
    for an unknown integer k.  Then p1 = 6 z - 8 x, and the mod-p result
    (twice a generator for every odd prime) forces |p1| to be a power of 2.
    """
    c_g = _multiple_of(sum_squared_positive_roots(root_system("so8")), z_bar())
    c_k = _multiple_of(sum_squared_positive_roots(root_system("g2")), x_bar())
    hits = {}
    candidates = []
    for z, k in product(z_images, range(-k_bound, k_bound + 1)):
        val = int(c_g) * z - int(c_k) * (x_coeff * k + x_shift)
        candidates.append((z, k, val))
        if _is_power_of_two(abs(val)):
            hits.setdefault(abs(val), set()).add(k)
    if not hits:
        raise ConstraintError("no k makes |p1| a power of two")
    if len(hits) != 1:
        raise ConstraintError(f"magnitude not unique: {sorted(hits)}")
    (mag, ks), = hits.items()
    return IntegralP1(mag, tuple(sorted(ks)), tuple(candidates))


def signed_permutations_even(n: int = 4):
    """Weyl group of SO(2n): permutations with an even number of sign changes."""
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            if signs.count(-1) % 2 == 0:
                yield perm, signs
