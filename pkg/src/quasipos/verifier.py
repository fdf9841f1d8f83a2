"""Certificates for the absence of flat horizontal planes at a point.

Two independent routes are offered:

* ``exact`` replays the case analysis with exact arithmetic and is the
  actual certificate;
* ``numeric`` minimizes the flatness residual over random horizontal
  2-frames, which is only heuristic evidence when positive but gives a
  concrete witness when a flat plane exists.

``both`` runs the two and refuses to return if they contradict.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import cayley
from .actions import (
    BiquotientSpec,
    PreconditionError,
    eschenburg_point,
    horizontal_basis,
    m13_point,
    vertical_constraints,
)
from .algebra import inner0
from .config import TOL
from .metrics import raw_residual
from .replay_so8 import ReplayFailure, Step, replay_m13, replay_n11
from .replay_unitary import FlatPlaneFound, check_preconditions, replay_eschenburg
from .search import min_residual_search

MODES = ("exact", "numeric", "both")
VERDICTS = ("no-flat-plane", "flat-plane-found", "inconclusive")

_ANGLE = re.compile(r"^\s*(?P<sign>-)?\s*(?P<num>\d+)?\s*\*?\s*(?P<pi>pi)?\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_angle(text) -> Fraction | str:
    """Parse ``"pi/4"``, ``"3pi/4"``, ``"-pi/6"``, ``"0"`` or ``"symbolic"``.

    The result is the rational multiple of pi.  Anything that is not a
    rational multiple of pi is rejected.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if text == "symbolic":
        return text
    m = _ANGLE.match(text)
    if not m or (m["num"] is None and m["pi"] is None):
        raise PreconditionError(f"angle must be a rational multiple of pi, got {text!r}")
    num = int(m["num"]) if m["num"] else 1
    den = int(m["den"]) if m["den"] else 1
    if den == 0:
        raise PreconditionError("zero denominator in angle")
    if m["pi"] is None:
        if num != 0:
            raise PreconditionError(f"angle must be a rational multiple of pi, got {text!r}")
        return Fraction(0)
    r = Fraction(num, den)
    return -r if m["sign"] else r


def format_angle(r) -> str:
    if isinstance(r, str):
        return r
    if r == 0:
        return "0"
    num = "" if abs(r.numerator) == 1 else str(abs(r.numerator))
    sign = "-" if r < 0 else ""
    den = "" if r.denominator == 1 else f"/{r.denominator}"
    return f"{sign}{num}pi{den}"


def _matrix_json(M):
    if M is None:
        return None
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return {"re": M.real.tolist(), "im": M.imag.tolist()}
    return M.astype(float).tolist()


@dataclass(frozen=True)
class PointCertificate:
    spec: BiquotientSpec
    point: np.ndarray | None
    mode: str
    verdict: str
    residual: float | None = None
    restarts: int = 0
    seed: int | None = None
    budget: int | None = None
    witness: tuple | None = None
    steps: tuple = ()
    angle: str | None = None
    lam: tuple = (0.5, 0.5)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        numeric = self.mode in ("numeric", "both")
        if numeric and self.verdict == "no-flat-plane":
            if self.residual is None or self.residual <= TOL.positive or self.restarts < (self.budget or 0):
                raise ValueError("numeric no-flat-plane needs the full budget and a residual above threshold")
        if self.verdict == "flat-plane-found" and (self.witness is None or self.residual is None or self.residual >= TOL.flat):
            raise ValueError("flat-plane-found needs a witness frame below the flatness threshold")

    def as_dict(self) -> dict:
        return {
            "spec": json.loads(self.spec.to_json()),
            "angle": self.angle,
            "point": _matrix_json(self.point),
            "mode": self.mode,
            "verdict": self.verdict,
            "residual": self.residual,
            "restarts": self.restarts,
            "seed": self.seed,
            "budget": self.budget,
            "lam": list(self.lam),
            "witness": None if self.witness is None else [_matrix_json(W) for W in self.witness],
            "steps": [s.as_dict() for s in self.steps],
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


# ----------------------------------------------------------------------------
# numeric route


def witness_horizontality(spec, A, X) -> float:
    """Largest |<X, V>_0| over the vertical constraints, relative to |X|_0."""
    scale = math.sqrt(max(inner0(X, X), 1e-300))
    return max(abs(inner0(X, V)) for V in vertical_constraints(spec, A)) / scale


def witness_residual(H, X, Y) -> float:
    """Bracket residual of the plane of X, Y recomputed from the lifts."""
    total = 0.0
    for k, metric in enumerate(H.metrics):
        lifts = [_lift(H, Z)[k] for Z in (X, Y)]
        cv = [metric.criterion_vectors(L) for L in lifts]
        total += raw_residual(metric, *cv)
    return total


def _lift(H, X):
    from .actions import lift_pair

    return lift_pair(H.spec, H.A, X, H.metrics)


def numeric_verdict(H, budget, seed):
    res = min_residual_search(H, budget, seed, stop_below=TOL.flat * 1e-2)
    X, Y = res.frame
    if res.residual > TOL.positive and res.restarts >= budget:
        return "no-flat-plane", res, None
    if res.residual < TOL.flat:
        ok = max(witness_horizontality(H.spec, H.A, X), witness_horizontality(H.spec, H.A, Y)) < TOL.flat
        ok = ok and witness_residual(H, X, Y) < TOL.flat
        if ok:
            return "flat-plane-found", res, (X, Y)
    return "inconclusive", res, None


def _run(spec, A, mode, budget, seed, lam, exact_steps, angle=None):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    steps = ()
    verdict = None
    exact_witness = None
    if mode in ("exact", "both"):
        try:
            steps = tuple(exact_steps())
            verdict = "no-flat-plane"
        except FlatPlaneFound as found:
            exact_witness = (np.array(found.X.evalf(), dtype=complex), np.array(found.Y.evalf(), dtype=complex))
            steps = (Step("flat_plane", str(found)),)
            verdict = "flat-plane-found"
    if mode == "exact":
        if exact_witness is None:
            return PointCertificate(spec, A, mode, verdict, steps=steps, angle=angle, lam=lam)
        H = horizontal_basis(spec, A, *lam)
        res = witness_residual(H, *exact_witness)
        return PointCertificate(spec, A, mode, verdict, residual=res, witness=exact_witness, steps=steps,
                                angle=angle, lam=lam)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    H = horizontal_basis(spec, A, *lam)
    nverdict, res, witness = numeric_verdict(H, budget, seed)
    if mode == "both" and nverdict != "inconclusive" and nverdict != verdict:
        raise ReplayFailure(f"exact replay says {verdict} but the search says {nverdict}")
    if mode == "both" and nverdict == "inconclusive":
        # the exact replay is the certificate; the search only failed to confirm it
        verdict = "inconclusive"
    if mode == "numeric":
        verdict = nverdict
    if witness is None and exact_witness is not None:
        witness = exact_witness
    return PointCertificate(spec, A, mode, verdict, residual=res.residual, restarts=res.restarts, seed=seed,
                            budget=budget, witness=witness, steps=steps, angle=angle, lam=lam)


def _angle_point(r):
    if isinstance(r, str):
        return None
    return m13_point(float(r) * math.pi)


def verify_m13(theta="pi/4", mode="exact", budget=1000, seed=0, lam1=0.5) -> PointCertificate:
    r = parse_angle(theta)
    if mode != "exact" and isinstance(r, str):
        raise PreconditionError("numeric mode needs a concrete angle")
    return _run(BiquotientSpec.m13(), _angle_point(r), mode, budget, seed, (lam1, lam1),
                lambda: replay_m13(r), format_angle(r))


def verify_n11(theta="pi/4", mode="exact", budget=1000, seed=0, lam1=0.5) -> PointCertificate:
    r = parse_angle(theta)
    if mode != "exact" and isinstance(r, str):
        raise PreconditionError("numeric mode needs a concrete angle")
    return _run(BiquotientSpec.n11(), _angle_point(r), mode, budget, seed, (lam1, lam1),
                lambda: replay_n11(r), format_angle(r))


def verify_eschenburg(p, q, n=None, mode="exact", budget=1000, seed=0, lam1=0.5, lam2=0.5,
                      reorder=True) -> PointCertificate:
    """Certificate at the block point of U(n+1).

    The weights are checked for freeness first, then for the hypothesis of
    the case analysis.  With ``reorder`` the witnessing pair is moved to the
    front, in the orientation that avoids the case5c plane; otherwise p is
    used as given and its first pair must witness the hypothesis.
    """
    p, q = tuple(int(x) for x in p), tuple(int(x) for x in q)
    if n is not None and n != len(p) - 1:
        raise PreconditionError(f"n = {n} does not match {len(p)} weights p")
    if len(q) != 2:
        raise PreconditionError("q must have two entries")
    if len(p) < 3:
        raise PreconditionError("need at least three weights p")
    if reorder:
        p = check_preconditions(p, q)
    else:
        check_preconditions(p, q)
        if p[0] == p[1] or p[0] + p[1] in {2 * q[0], 2 * q[1], q[0] + q[1]}:
            raise PreconditionError("hypothesis fails for the first pair of p as given")
    spec = BiquotientSpec.eschenburg(p, q)
    l1 = Fraction(lam1).limit_denominator(10**6)
    l2 = Fraction(lam2).limit_denominator(10**6)
    return _run(spec, eschenburg_point(len(p) - 1), mode, budget, seed, (lam1, lam2),
                lambda: replay_eschenburg(p, q, sympy.Rational(l1.numerator, l1.denominator),
                                          sympy.Rational(l2.numerator, l2.denominator), reorder=False))


# ----------------------------------------------------------------------------
# planted flat planes


def planted_m13_pair(seed: int = 0):
    """A horizontal commuting pair (X in p, Y in m) for M13 at A = I.

    Y is a random m-vector orthogonal to the circle generator and X is the
    p-vector of a kernel direction of Y acting on R^7, so [X, Y] = 0.
    """
    from .actions import circle_generator

    rng = np.random.default_rng(seed)
    theta = circle_generator((0, 0, 1))
    basis = cayley.m_basis()
    c = np.array([inner0(B, theta) for B in basis])
    v = rng.standard_normal(7)
    v -= (v @ c) / (c @ c) * c
    Y = cayley.m_vector(v)
    _, _, Vt = np.linalg.svd(cayley.m_block(v))
    w = Vt[-1]
    X = cayley.p_vector(w)
    return X, Y
