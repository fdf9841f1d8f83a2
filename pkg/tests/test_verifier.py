import json
from fractions import Fraction

import numpy as np
import pytest

from quasipos import verifier
from quasipos.actions import BiquotientSpec, PreconditionError, horizontal_basis
from quasipos.algebra import bracket
from quasipos.replay_so8 import ReplayFailure
from quasipos.verifier import (
    PointCertificate,
    format_angle,
    parse_angle,
    planted_m13_pair,
    verify_eschenburg,
    verify_m13,
    verify_n11,
    witness_horizontality,
)


@pytest.mark.parametrize("text,value", [
    ("pi/4", Fraction(1, 4)), ("3pi/4", Fraction(3, 4)), ("3*pi/4", Fraction(3, 4)),
    ("-pi/6", Fraction(-1, 6)), ("0", Fraction(0)), ("pi", Fraction(1)), (" 2 pi / 3 ", Fraction(2, 3)),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == value


@pytest.mark.parametrize("text", ["0.785", "1", "pi/0", "e/4", "pi/4/2", ""])
def test_parse_angle_rejects(text):
    with pytest.raises(PreconditionError):
        parse_angle(text)


def test_format_angle_roundtrip():
    for r in (Fraction(1, 4), Fraction(-3, 4), Fraction(2), Fraction(0)):
        assert parse_angle(format_angle(r)) == r
    assert format_angle("symbolic") == "symbolic"


def test_certificate_invariants():
    spec = BiquotientSpec.m13()
    with pytest.raises(ValueError):
        PointCertificate(spec, None, "fast", "no-flat-plane")
    with pytest.raises(ValueError):
        PointCertificate(spec, None, "exact", "maybe")
    with pytest.raises(ValueError):
        PointCertificate(spec, None, "numeric", "no-flat-plane", residual=1e-9, restarts=10, budget=10)
    with pytest.raises(ValueError):
        PointCertificate(spec, None, "numeric", "no-flat-plane", residual=1.0, restarts=5, budget=10)
    with pytest.raises(ValueError):
        PointCertificate(spec, None, "numeric", "flat-plane-found", residual=1e-12)


def test_exact_m13_certificate_json():
    cert = verify_m13("pi/4")
    assert cert.verdict == "no-flat-plane"
    data = json.loads(cert.to_json())
    assert data["angle"] == "pi/4"
    assert data["spec"]["family"] == "s1xg2"
    assert [s["name"] for s in data["steps"]][-1] == "y_projection_vanishes"
    assert len(data["point"]) == 8


def test_symbolic_needs_exact_mode():
    assert verify_n11("symbolic").verdict == "no-flat-plane"
    with pytest.raises(PreconditionError):
        verify_m13("symbolic", mode="numeric")


def test_numeric_small_budget_is_deterministic():
    a = verify_eschenburg((1, 2, 3), (0, 0), mode="numeric", budget=15, seed=5)
    b = verify_eschenburg((1, 2, 3), (0, 0), mode="numeric", budget=15, seed=5)
    assert a.residual == b.residual and a.verdict == b.verdict == "no-flat-plane"
    assert a.restarts == 15


def test_numeric_finds_flat_plane_at_identity_angle():
    cert = verify_m13("0", mode="numeric", budget=50)
    assert cert.verdict == "flat-plane-found"
    assert cert.residual < 1e-10
    X, Y = cert.witness
    assert witness_horizontality(cert.spec, cert.point, X) < 1e-10


def test_both_mode_agrees_on_eschenburg():
    cert = verify_eschenburg((1, 2, 3), (0, 0), mode="both", budget=30)
    assert cert.verdict == "no-flat-plane"
    assert len(cert.steps) == 12


def test_both_mode_refuses_contradiction(monkeypatch):
    monkeypatch.setattr(verifier, "numeric_verdict", lambda H, budget, seed: ("flat-plane-found", None, None))
    with pytest.raises(ReplayFailure):
        verify_eschenburg((1, 2, 3), (0, 0), mode="both", budget=1)


def test_given_order_flat_plane_exact_and_numeric():
    exact = verify_eschenburg((0, 1, 1), (0, 0), reorder=False)
    assert exact.verdict == "flat-plane-found" and exact.residual < 1e-20
    numeric = verify_eschenburg((0, 1, 1), (0, 0), mode="numeric", budget=200, reorder=False)
    assert numeric.verdict == "flat-plane-found"
    fixed = verify_eschenburg((0, 1, 1), (0, 0), mode="both", budget=40)
    assert fixed.verdict == "no-flat-plane"
    assert fixed.spec.p == (1, 0, 1)


def test_eschenburg_input_checks():
    with pytest.raises(PreconditionError):
        verify_eschenburg((1, 2, 3), (0, 0), n=3)
    with pytest.raises(PreconditionError):
        verify_eschenburg((1, 2, 3), (0, 0, 0))
    with pytest.raises(PreconditionError):
        verify_eschenburg((1, 2), (0, 0))
    with pytest.raises(PreconditionError, match="not free"):
        verify_eschenburg((0, 0, 2), (0, 0))


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_planted_pair_commutes_and_is_horizontal(seed):
    X, Y = planted_m13_pair(seed)
    assert np.abs(bracket(X, Y)).max() < 1e-12
    spec = BiquotientSpec.m13()
    assert witness_horizontality(spec, np.eye(8), X) < 1e-12
    assert witness_horizontality(spec, np.eye(8), Y) < 1e-12
    H = horizontal_basis(spec, np.eye(8))
    assert verifier.witness_residual(H, X, Y) < 1e-20
