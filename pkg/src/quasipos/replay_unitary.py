"""Exact case analysis for the Eschenburg point of U(n+1).

The point is A = [[r, -r], [r, r]] + I_{n-1} with r = 1/sqrt(2).  Every
step is a sympy computation over real symbols (complex entries are written
as a + i b).  Each ``step_*`` returns a :class:`Step` or raises
:class:`ReplayFailure`.
"""

from __future__ import annotations

from functools import lru_cache

import sympy
from sympy import I, Rational, sqrt

from .actions import PreconditionError, eschenburg_free, reorder_for_hypothesis
from .replay_so8 import ReplayFailure, Step, _require


def _size(n):
    if n < 2:
        raise PreconditionError("n must be at least 2")
    return n + 1


def point(n: int) -> sympy.Matrix:
    N = _size(n)
    A = sympy.eye(N)
    r = sqrt(2) / 2
    A[0, 0], A[0, 1], A[1, 0], A[1, 1] = r, -r, r, r
    return A


def inner0(X, Y):
    return sympy.expand(-sympy.re(sympy.expand((X * Y).trace())))


def _zero(expr) -> bool:
    return sympy.simplify(sympy.expand(expr)) == 0


def _mat_zero(M) -> bool:
    return all(_zero(x) for x in M)


def _complex_vars(prefix, idx):
    out = []
    for j in idx:
        a, b = sympy.symbols(f"{prefix}{j}r {prefix}{j}i", real=True)
        out.append(a + I * b)
    return out


def p_element(n, x):
    """First row (0, -conj(x)), first column (0, x)."""
    N = _size(n)
    M = sympy.zeros(N, N)
    for k, xk in enumerate(x, start=1):
        M[k, 0] = xk
        M[0, k] = -sympy.conjugate(xk)
    return M


def m_element(n, y):
    N = _size(n)
    M = sympy.zeros(N, N)
    for k, yk in enumerate(y, start=2):
        M[k, 1] = yk
        M[1, k] = -sympy.conjugate(yk)
    return M


def diag_element(n, *vals):
    N = _size(n)
    M = sympy.zeros(N, N)
    for k, v in enumerate(vals):
        M[k, k] = I * v
    return M


def proj_p(M):
    N = M.shape[0]
    out = sympy.zeros(N, N)
    for k in range(1, N):
        out[k, 0], out[0, k] = M[k, 0], M[0, k]
    return out


def phi1(M, lam1):
    P = proj_p(M)
    return P + lam1 * (M - P)


def ad_star_p_row(A, V):
    """Entries j = 1..n of the first row of Ad_{A^*} V = A^* V A."""
    R = A.H * V * A
    return [sympy.expand(R[0, j]) for j in range(1, A.shape[0])]


def horizontality_form(n, p, q, X):
    A = point(n)
    P = diag_element(n, *p)
    Q = diag_element(n, q[0], q[1], *([0] * (n - 1)))
    return inner0(X, A * P * A.H - Q)


def _realify(exprs, params):
    """Real linear map from real params to (Re, Im) of the expressions."""
    rows = []
    for e in exprs:
        e = sympy.expand(e)
        for part in (sympy.re(e), sympy.im(e)):
            part = sympy.expand(part)
            rows.append([sympy.diff(part, v) for v in params])
    return sympy.Matrix(rows)


def _csub(var, value):
    """Substitution dict setting the complex variable a + i b to ``value``."""
    a, b = sympy.re(var), sympy.im(var)
    value = sympy.expand_complex(value)
    return {a: sympy.re(value), b: sympy.im(value)}


def _real_params(vals):
    out = []
    for v in vals:
        out.extend(sorted(v.free_symbols, key=lambda s: s.name))
    return out


# ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _nothoriz_form(n):
    t, f = sympy.symbols("theta phi", real=True)
    ps = sympy.symbols(f"p1:{n + 2}", integer=True)
    qs = sympy.symbols("q1 q2", integer=True)
    form = horizontality_form(n, ps, qs, diag_element(n, t, f))
    target = t * qs[0] + f * qs[1] - Rational(1, 2) * (t + f) * (ps[0] + ps[1])
    ratio = sympy.simplify(form / target)
    return form, ratio, (t, f), ps, qs


def step_nothoriz(n, p, q) -> Step:
    """diag(i,0..), diag(0,i,..), diag(i,i,..) are never horizontal."""
    form, ratio, (t, f), ps, qs = _nothoriz_form(n)
    _require(ratio.is_number and ratio != 0, f"horizontality form is not a multiple of the expected one: {ratio}")
    subs = dict(zip(ps, p)) | dict(zip(qs, q))
    vals = []
    for tv, fv in ((1, 0), (0, 1), (1, 1)):
        v = sympy.nsimplify(form.subs(subs | {t: tv, f: fv}))
        _require(v != 0, f"diag(i*{tv}, i*{fv}, 0, ...) is horizontal for p={p}, q={q}")
        vals.append(v)
    return Step("nothoriz", f"<diag(it,if), Ad_A P - Q>_0 = {ratio} * (t q1 + f q2 - (t+f)(p1+p2)/2); values {vals}")


def _kernel_dim(M):
    return len(M.nullspace())


@lru_cache(maxsize=None)
def _rank_one_data(n):
    xs = _complex_vars("x", range(2, n + 2))
    ys = _complex_vars("y", range(3, n + 2))
    U0 = p_element(n, [1] + [0] * (n - 1))
    Up = p_element(n, xs)
    Cp = U0 * Up - Up * U0
    kp = _kernel_dim(_realify(list(Cp), _real_params(xs)))
    W0 = m_element(n, [1] + [0] * (n - 2))
    Wm = m_element(n, ys)
    Cm = W0 * Wm - Wm * W0
    km = _kernel_dim(_realify(list(Cm), _real_params(ys)))
    return kp, km


def step_rank_one(n) -> Step:
    """Centralizers in p and in m of a nonzero vector are its own line.

    Checked at one unit vector; U(n) and U(n-1) act transitively on the unit
    spheres of p and m through Ad, preserving brackets, so it holds at all.
    """
    kp, km = _rank_one_data(n)
    _require(kp == 1, f"centralizer in p has dimension {kp}")
    _require(km == 1, f"centralizer in m has dimension {km}")
    return Step("rank_one", f"n={n}: dim ker ad|p = 1, dim ker ad|m = 1")


@lru_cache(maxsize=None)
def _hm_data(n):
    al, be = sympy.symbols("alpha beta", real=True)
    ys = _complex_vars("y", range(3, n + 2))
    W = m_element(n, ys)
    Z = diag_element(n, al, be)
    E = diag_element(n, 0, 1)
    ok = _mat_zero((Z * W - W * Z) - be * (E * W - W * E))
    k = _kernel_dim(_realify(list(E * W - W * E), _real_params(ys)))
    return ok, k


def step_h_m_bracket(n) -> Step:
    """[diag(ia, ib), W] = b [diag(0, i), W] on m, and the latter is injective."""
    ok, k = _hm_data(n)
    _require(ok, "bracket of h-diagonal with m does not reduce to its second entry")
    _require(k == 0, "ad diag(0,i) has a kernel on m")
    return Step("h_m_bracket", f"n={n}: [diag(ia,ib),W] = b[diag(0,i),W]; ker = 0")


def step_lower_block(n, lam1=Rational(1, 2), lam2=Rational(1, 2)) -> Step:
    """Horizontal vectors have no u(n-1) part on either factor."""
    N = _size(n)
    syms = sympy.symbols(f"z0:{N * N}", real=True)
    X = sympy.Matrix(N, N, list(syms))
    for i in range(2, N):
        for j in range(2, N):
            X[i, j] = 0
    left = phi1(X, 1 / lam1)
    Pp = proj_p(X)
    K = X - Pp
    # Phi2^{-1}: p unchanged, m by 1/l1, h by 1/(l1 l2); h and m share no entries
    Mm = sympy.zeros(N, N)
    for k in range(2, N):
        Mm[k, 1], Mm[1, k] = K[k, 1], K[1, k]
    right = Pp + Mm / lam1 + (K - Mm) / (lam1 * lam2)
    for M in (left, right):
        for i in range(2, N):
            for j in range(2, N):
                _require(M[i, j] == 0, "u(n-1) block survives")
    return Step("lower_block", f"n={n}: X_u(n-1) = 0 is preserved by Phi1^-1 and Phi2^-1")


@lru_cache(maxsize=None)
def _nasty_data(n):
    us = _complex_vars("u", range(2, n + 2))
    vs = _complex_vars("v", range(3, n + 2))
    g, d = sympy.symbols("gamma delta", real=True)
    U = p_element(n, us)
    V = diag_element(n, g, d) + m_element(n, vs)
    C = U * V - V * U
    u2 = us[0]
    first = I * (g - d) * u2 + sum(uj * sympy.conjugate(vj) for uj, vj in zip(us[1:], vs))
    rest = [I * g * uj - u2 * vj for uj, vj in zip(us[1:], vs)]
    conds = [first] + rest
    # every entry of C must be 0 or +- a condition or +- its conjugate
    unmatched = []
    seen = set()
    for e in C:
        if _zero(e):
            continue
        hit = None
        for k, c in enumerate(conds):
            for cand in (c, -c, sympy.conjugate(c), -sympy.conjugate(c)):
                if _zero(e - cand):
                    hit = k
                    break
            if hit is not None:
                break
        if hit is None:
            unmatched.append(e)
        else:
            seen.add(hit)
    return us, vs, g, d, C, conds, unmatched, seen


def step_commuting_conditions(n) -> Step:
    """[U, V] = 0 for U in p, V in k is the listed system of equations."""
    us, vs, g, d, C, conds, unmatched, seen = _nasty_data(n)
    _require(not unmatched, f"bracket entries outside the condition list: {unmatched[:2]}")
    _require(seen == set(range(len(conds))), "some condition does not appear in the bracket")
    return Step("commuting_conditions", f"n={n}: entries of [U,V] are exactly +-{len(conds)} conditions and conjugates")


def step_u2_nonzero_solution(n) -> Step:
    """With u2 != 0 the conditions force v_j and delta as displayed."""
    us, vs, g, d, C, conds, _, _ = _nasty_data(n)
    u2 = us[0]
    n2 = sympy.expand(u2 * sympy.conjugate(u2))
    rest2 = sum(sympy.expand(uj * sympy.conjugate(uj)) for uj in us[1:])
    v_sol = [g * I * sympy.conjugate(u2) * uj / n2 for uj in us[1:]]
    d_sol = g * (n2 - rest2) / n2
    # the second family of conditions is linear in v_j with coefficient -u2
    sub = {}
    for c, vj, vs_j in zip(conds[1:], vs, v_sol):
        _require(_zero(c.subs(_csub(vj, vs_j))), "v_j formula does not solve i g u_j = u2 v_j")
        sub |= _csub(vj, vs_j)
    first = sympy.expand(conds[0].subs(sub))
    # first condition is affine in delta with coefficient -i u2 != 0
    coeff = sympy.diff(first, d)
    _require(_zero(coeff + I * u2), "delta coefficient is not -i u2")
    _require(_zero(first.subs(d, d_sol)), "delta formula does not solve the first condition")
    Csub = C.subs(sub).subs(d, d_sol)
    _require(_mat_zero(Csub), "substituted bracket does not vanish")
    return Step("u2_nonzero_solution", f"n={n}: v_j = g i conj(u2) u_j/|u2|^2, delta = g(1 - sum|u_j|^2/|u2|^2)")


def step_u2_zero(n) -> Step:
    """With u2 = 0 the conditions read g u_j = 0 and sum u_j conj(v_j) = 0."""
    us, vs, g, d, C, conds, _, _ = _nasty_data(n)
    sub = _csub(us[0], 0)
    for c, uj in zip(conds[1:], us[1:]):
        _require(_zero(c.subs(sub) - I * g * uj), "u2 = 0 does not reduce i g u_j = u2 v_j")
    first = sympy.expand(conds[0].subs(sub))
    want = sum(uj * sympy.conjugate(vj) for uj, vj in zip(us[1:], vs))
    _require(_zero(first - want), "u2 = 0 does not reduce the first condition")
    return Step("u2_zero", f"n={n}: u2 = 0 gives X_p = 0, or gamma = 0 and sum u_j conj(v_j) = 0")


def step_diagonal_cases(n, p, q) -> Step:
    """Cases with Y diagonal in the top 2x2 block all contain a non-horizontal vector."""
    # two independent diagonal vectors span diag(i*, i*, 0, ...), which holds diag(i, 0, ...)
    step = step_nothoriz(n, p, q)
    return Step("diagonal_cases", "case3/case4a/case4b/case4c contain diag(i,0..), diag(0,i,..) or diag(i,i,..); " + step.detail)


def _case5b_forms(n, lam1):
    al, be = sympy.symbols("alpha beta", real=True)
    xs = _complex_vars("x", range(3, n + 2))
    ys = _complex_vars("y", range(3, n + 2))
    X = diag_element(n, al) + p_element(n, [0] + xs)
    Y = diag_element(n, 0, be) + m_element(n, ys)
    A = point(n)
    fx = ad_star_p_row(A, phi1(X, lam1))
    fy = ad_star_p_row(A, phi1(Y, lam1))
    return al, be, xs, ys, X, Y, fx, fy


def step_case5b(n, lam1=Rational(1, 2)) -> Step:
    al, be, xs, ys, X, Y, fx, fy = _case5b_forms(n, lam1)
    r = sqrt(2) / 2
    want_x = [-Rational(1, 2) * I * lam1 * al] + [-r * sympy.conjugate(x) for x in xs]
    want_y = [Rational(1, 2) * I * lam1 * be] + [-lam1 * r * sympy.conjugate(y) for y in ys]
    _require(all(_zero(u - v) for u, v in zip(fx, want_x)), f"X projection differs: {fx}")
    _require(all(_zero(u - v) for u, v in zip(fy, want_y)), f"Y projection differs: {fy}")
    # vanishing projections force the vectors to vanish
    _require(_kernel_dim(_realify(fx, [al] + _real_params(xs))) == 0, "X projection not injective")
    _require(_kernel_dim(_realify(fy, [be] + _real_params(ys))) == 0, "Y projection not injective")
    # proportional case: x_j = s y_j, then sum x_j conj(y_j) = s sum |y_j|^2
    s = sympy.symbols("s", real=True, nonzero=True)
    inner = sum(s * y * sympy.conjugate(y) for y in ys)
    norm = sum(sympy.expand(y * sympy.conjugate(y)) for y in ys)
    _require(_zero(inner - s * norm), "orthogonality relation does not reduce to s |y|^2")
    return Step("case5b", f"n={n}, l1={lam1}: projections match, injective; x = s y with sum x conj(y) = 0 forces x = 0")


def step_case5c_orthogonality(n, lam1=Rational(1, 2), lam2=Rational(1, 2)) -> Step:
    """Orthogonality of the plane legs in case5c is equivalent to alpha = 0."""
    al, be = sympy.symbols("alpha beta", real=True)
    xs = _complex_vars("x", range(2, n + 2))
    ys = _complex_vars("y", range(3, n + 2))
    X = diag_element(n, al) + p_element(n, xs)
    Y = diag_element(n, 1, be) + m_element(n, ys)
    Xh = diag_element(n, al)
    Yh = diag_element(n, 1, be)
    # <Psi^-1 X, Psi^-1 Y>_2 = <Psi^-1 X, Phi1 Y>_0 with Y in k
    psi_inv_x = proj_p(X) + Xh / lam2
    val = inner0(psi_inv_x, lam1 * Y)
    _require(_zero(val - lam1 / lam2 * inner0(Xh, Yh)), "metric pairing is not a multiple of <X_h, Y_h>_0")
    _require(_zero(inner0(Xh, Yh) - al), "<X_h, Y_h>_0 is not alpha")
    return Step("case5c_orthogonality", f"n={n}: <Psi^-1 X, Psi^-1 Y>_2 = (l1/l2) alpha, so alpha = 0")


def step_case5c_prime(n, p, q, lam1=Rational(1, 2)) -> Step:
    xs = _complex_vars("x", range(2, n + 2))
    x2 = xs[0]
    a, b = sympy.re(x2), sympy.im(x2)
    n2 = sympy.expand(x2 * sympy.conjugate(x2))
    rest2 = sum(sympy.expand(x * sympy.conjugate(x)) for x in xs[1:])
    beta = 1 - rest2 / n2
    ys = [I * sympy.conjugate(x2) * xj / n2 for xj in xs[1:]]
    X = p_element(n, xs)
    Y = diag_element(n, 1, beta) + m_element(n, ys)
    A = point(n)
    fx = ad_star_p_row(A, phi1(X, lam1))
    fy = ad_star_p_row(A, phi1(Y, lam1))
    r = sqrt(2) / 2
    want_x = [-Rational(1, 2) * (sympy.conjugate(x2) + x2)] + [-r * sympy.conjugate(x) for x in xs[1:]]
    want_y = [-Rational(1, 2) * I * lam1 * (1 - beta)] + [-lam1 * r * sympy.conjugate(y) for y in ys]
    _require(all(_zero(u - v) for u, v in zip(fx, want_x)), f"X projection differs: {fx}")
    _require(all(_zero(u - v) for u, v in zip(fy, want_y)), f"Y projection differs: {fy}")
    diag_ii = diag_element(n, 1, 1)
    # (a) X projection zero: x_j = 0 for j >= 3, hence Y = diag(i, i, 0, ...)
    sub0 = {sym: 0 for x in xs[1:] for sym in x.free_symbols}
    _require(_mat_zero(Y.subs(sub0) - diag_ii), "x_j = 0 does not give Y = diag(i,i,0..)")
    # (b) Y projection zero: y_j = 0 iff x_j = 0 (x2 != 0), same conclusion
    # (c) proportional: s i conj(x2) = |x2|^2 forces Re x2 = 0
    s = sympy.symbols("s", real=True)
    eq = sympy.expand(s * I * sympy.conjugate(x2) - n2)
    _require(_zero(sympy.im(eq) - s * a), "imaginary part of the proportionality relation is not s Re(x2)")
    # then horizontality reads c * Im(x2) * (p1 - p2) = 0
    form = horizontality_form(n, p, q, X)
    kappa = sympy.simplify(form / b) if p[0] != p[1] else None
    _require(kappa is not None and kappa.is_number and kappa != 0, f"horizontality form is not a multiple of Im(x2): {form}")
    half_ratio = sympy.nsimplify(kappa / (Rational(1, 2) * (p[0] - p[1])))
    return Step("case5c_prime", f"n={n}: projections match; subcases reduce to diag(i,i) or x2 in iR; "
                f"horizontality = {half_ratio} * Im(x2)(p1-p2)/2 forces x2 = 0")


@lru_cache(maxsize=None)
def _case5c_general_data(n):
    """Case5c with alpha kept free.

    Returns the projection check, then (hY, hX, B, s, ps, qs) where hY and
    hX are the horizontality forms of Phi1 Y and Phi1 X after the
    proportional subcase has fixed x2 = i s l1 and alpha = s (1 - B).
    """
    al = sympy.Symbol("alpha", real=True)
    lam = sympy.Symbol("lam", positive=True)
    xs = _complex_vars("x", range(2, n + 2))
    x2 = xs[0]
    n2 = sympy.expand(x2 * sympy.conjugate(x2))
    rest2 = sum(sympy.expand(x * sympy.conjugate(x)) for x in xs[1:])
    beta = 1 - rest2 / n2
    ys = [I * sympy.conjugate(x2) * xj / n2 for xj in xs[1:]]
    X = diag_element(n, al) + p_element(n, xs)
    Y = diag_element(n, 1, beta) + m_element(n, ys)
    A = point(n)
    fx = ad_star_p_row(A, phi1(X, lam))
    fy = ad_star_p_row(A, phi1(Y, lam))
    r = sqrt(2) / 2
    want_x = [-Rational(1, 2) * (sympy.conjugate(x2) + x2) - Rational(1, 2) * I * lam * al] + \
        [-r * sympy.conjugate(x) for x in xs[1:]]
    want_y = [-Rational(1, 2) * I * lam * (1 - beta)] + [-lam * r * sympy.conjugate(y) for y in ys]
    proj_ok = all(_zero(u - v) for u, v in zip(fx, want_x)) and all(_zero(u - v) for u, v in zip(fy, want_y))

    # proportional subcase, some x_j != 0: s l1 i conj(x2) = |x2|^2
    s = sympy.Symbol("s", real=True, nonzero=True)
    a, b = sympy.re(x2), sympy.im(x2)
    eq = sympy.expand(s * lam * I * sympy.conjugate(x2) - n2)
    sol_ok = _zero(sympy.im(eq) - s * lam * a) and _zero(eq.subs({a: 0, b: s * lam}))
    # first entries: -Re x2 - i l1 alpha / 2 = s * (-i l1 (1 - beta) / 2)
    B = sympy.Symbol("B", real=True)
    first = (want_x[0] - s * (-Rational(1, 2) * I * lam * (1 - B))).subs({a: 0})
    alpha_sol = sympy.solve(sympy.im(sympy.expand(first)), al)
    alpha_ok = len(alpha_sol) == 1 and _zero(alpha_sol[0] - s * (1 - B))

    ps = sympy.symbols(f"p1:{n + 2}", integer=True)
    qs = sympy.symbols("q1 q2", integer=True)
    Xs = diag_element(n, s * (1 - B)) + p_element(n, [I * s * lam] + [0] * (n - 1))
    Ys = diag_element(n, 1, B)
    hX = sympy.expand(horizontality_form(n, ps, qs, phi1(Xs, lam)) / (s * lam))
    hY = sympy.expand(horizontality_form(n, ps, qs, phi1(Ys, lam)) / lam)
    return proj_ok and sol_ok and alpha_ok, hY, hX, B, ps, qs


def case5c_obstruction(p, q):
    """Exact data deciding whether case5c with alpha != 0 yields a flat plane.

    Returns (beta, F): beta is forced by horizontality of Y (None when no
    beta works) and F is what horizontality of X reduces to.  A flat plane
    exists iff beta < 1 and F = 0.
    """
    n = len(p) - 1
    _, hY, hX, B, ps, qs = _case5c_general_data(n)
    sub = dict(zip(ps, p)) | dict(zip(qs, q))
    hy = sympy.expand(hY.subs(sub))
    c1 = hy.coeff(B, 1)
    if c1 == 0:
        return None, None
    beta = sympy.nsimplify(-hy.coeff(B, 0) / c1)
    F = sympy.nsimplify(sympy.expand(hX.subs(sub).subs(B, beta)))
    return beta, F


def has_case5c_plane(p, q) -> bool:
    beta, F = case5c_obstruction(p, q)
    return beta is not None and beta < 1 and F == 0


class FlatPlaneFound(ReplayFailure):
    """The case analysis produced an exact flat horizontal plane."""

    def __init__(self, msg, X, Y):
        super().__init__(msg)
        self.X = X
        self.Y = Y


def case5c_witness(p, q, lam1=Rational(1, 2)):
    """Exact pair (Phi1 X, Phi1 Y) spanning a flat horizontal plane, or None."""
    if not has_case5c_plane(p, q):
        return None
    n = len(p) - 1
    beta, _ = case5c_obstruction(p, q)
    x2 = I * lam1
    x3 = lam1 * sqrt(1 - beta)
    xs = [x2, x3] + [0] * (n - 2)
    ys = [I * sympy.conjugate(x2) * xj / (lam1**2) for xj in xs[1:]]
    X = diag_element(n, 1 - beta) + p_element(n, xs)
    Y = diag_element(n, 1, beta) + m_element(n, ys)
    return phi1(X, lam1), phi1(Y, lam1)


def _split(M):
    P = proj_p(M)
    K = M - P
    N = M.shape[0]
    Mm = sympy.zeros(N, N)
    for k in range(2, N):
        Mm[k, 1], Mm[1, k] = K[k, 1], K[1, k]
    return P, Mm, K - Mm


def flat_conditions(p, q, Xt, Yt, lam1=Rational(1, 2)) -> dict:
    """Exact check of horizontality and every bracket condition for X~, Y~."""
    n = len(p) - 1
    A = point(n)
    inv = 1 / lam1

    def br(u, v):
        return _mat_zero(u * v - v * u)

    Xr, Yr = phi1(Xt, inv), phi1(Yt, inv)
    Xp, Xm, Xh = _split(Xr)
    Yp, Ym, Yh = _split(Yr)
    L1, L2 = A.H * Xt * A, A.H * Yt * A
    P1, M1, H1 = _split(L1)
    P2, M2, H2 = _split(L2)
    out = {
        "horizontal": _zero(horizontality_form(n, p, q, Xt)) and _zero(horizontality_form(n, p, q, Yt)),
        "lower_block": all(Xt[i, j] == 0 and Yt[i, j] == 0 for i in range(2, n + 1) for j in range(2, n + 1)),
        "right": br(Xr, Yr) and br(Xm + Xh, Ym + Yh) and br(Xp, Yp) and br(Xm, Ym) and br(Xh, Yh),
        "left": br(L1, L2) and br(M1 + H1, M2 + H2) and br(P1, P2),
    }
    return out


def step_case5c_general(n, p, q, lam1=Rational(1, 2)) -> Step:
    """Case5c without assuming alpha = 0.

    Orthogonalizing the pair would leave the normal form, so alpha stays
    free.  The proportional subcase pins x2 = i s l1 and alpha = s(1 - beta);
    horizontality of Y then fixes beta and horizontality of X leaves one
    polynomial condition F(p, q).
    """
    ok = _case5c_general_data(n)[0]
    _require(ok, "general-alpha projections or the proportional subcase do not reduce as expected")
    beta, F = case5c_obstruction(p, q)
    if beta is None:
        return Step("case5c_general", f"n={n}: Y = diag(i, i beta) is never horizontal")
    if beta >= 1:
        return Step("case5c_general", f"n={n}: horizontality forces beta = {beta} >= 1, so x_j = 0 for j >= 3")
    if F != 0:
        return Step("case5c_general", f"n={n}: beta = {beta}, horizontality of X leaves {F} != 0")
    Xt, Yt = case5c_witness(p, q, lam1)
    checks = flat_conditions(p, q, Xt, Yt, lam1)
    _require(all(checks.values()), f"constructed case5c pair fails {checks}")
    raise FlatPlaneFound(f"case5c with alpha != 0 gives a flat horizontal plane (beta = {beta})", Xt, Yt)


ESCHENBURG_STEPS = ("nothoriz", "rank_one", "h_m_bracket", "lower_block", "commuting_conditions",
                    "u2_zero", "u2_nonzero_solution", "diagonal_cases", "case5b",
                    "case5c_orthogonality", "case5c_prime", "case5c_general")


def order_weights(p, q, avoid_case5c=True) -> tuple:
    """Permutation of p putting a witnessing pair first.

    Pairs are tried in order, each in both orientations; with
    ``avoid_case5c`` the first arrangement without a case5c plane wins.
    Falls back to the first arrangement when none avoids it.
    """
    p, q = tuple(int(x) for x in p), tuple(int(x) for x in q)
    bad = {2 * q[0], 2 * q[1], q[0] + q[1]}
    options = []
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] != p[j] and p[i] + p[j] not in bad:
                rest = [x for k, x in enumerate(p) if k not in (i, j)]
                options += [(p[i], p[j], *rest), (p[j], p[i], *rest)]
    if not options:
        reorder_for_hypothesis(p, q)  # raises with the standard message
    if avoid_case5c:
        for cand in options:
            if not has_case5c_plane(cand, q):
                return cand
    return options[0]


def check_preconditions(p, q, avoid_case5c=True):
    """Freeness first, then the hypothesis; returns the reordered weights."""
    if not eschenburg_free(p, q):
        raise PreconditionError(f"action is not free for p={tuple(p)}, q={tuple(q)}")
    reorder_for_hypothesis(tuple(p), tuple(q))
    return order_weights(p, q, avoid_case5c)


def replay_eschenburg(p, q, lam1=Rational(1, 2), lam2=Rational(1, 2), reorder=True) -> list[Step]:
    """Run every step; ``reorder=False`` takes p as given after the checks."""
    if reorder:
        p = check_preconditions(p, q)
    else:
        check_preconditions(p, q)
        p = tuple(int(x) for x in p)
        if p[0] == p[1] or p[0] + p[1] in {2 * q[0], 2 * q[1], q[0] + q[1]}:
            raise PreconditionError("hypothesis fails for the first pair of p as given")
    q = tuple(q)
    n = len(p) - 1
    lam1 = sympy.nsimplify(lam1)
    lam2 = sympy.nsimplify(lam2)
    return [
        step_nothoriz(n, p, q),
        step_rank_one(n),
        step_h_m_bracket(n),
        step_lower_block(n, lam1, lam2),
        step_commuting_conditions(n),
        step_u2_zero(n),
        step_u2_nonzero_solution(n),
        step_diagonal_cases(n, p, q),
        step_case5b(n, lam1),
        step_case5c_orthogonality(n, lam1, lam2),
        step_case5c_prime(n, p, q, lam1),
        step_case5c_general(n, p, q, lam1),
    ]
