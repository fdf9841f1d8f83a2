import numpy as np
import pytest

from quasipos.actions import BiquotientSpec, eschenburg_point, horizontal_basis, m13_point
from quasipos.search import ResidualModel, local_descent, min_residual_search, random_frame
from quasipos.verifier import witness_residual


@pytest.fixture(scope="module")
def esch_basis():
    return horizontal_basis(BiquotientSpec.eschenburg((1, 2, 3), (0, 0)), eschenburg_point(2))


@pytest.fixture(scope="module")
def m13_basis():
    return horizontal_basis(BiquotientSpec.m13(), m13_point(np.pi / 4))


def test_model_matches_direct_bracket_residual(esch_basis):
    model = ResidualModel.from_basis(esch_basis)
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = random_frame(rng, model.dim)
        direct = witness_residual(esch_basis, esch_basis.element(a), esch_basis.element(b))
        assert model.value(a, b) == pytest.approx(direct, rel=1e-9)


def test_model_value_is_plane_invariant(m13_basis):
    model = ResidualModel.from_basis(m13_basis)
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal(model.dim), rng.standard_normal(model.dim)
    v = model.value(a, b)
    assert model.value(2 * a - b, a + 3 * b) == pytest.approx(v, rel=1e-9)
    with pytest.raises(ValueError):
        model.value(a, 2 * a)


def test_local_descent_trace_is_monotone(m13_basis):
    model = ResidualModel.from_basis(m13_basis)
    a, b = random_frame(np.random.default_rng(2), model.dim)
    value, a2, b2, trace = local_descent(model, a, b)
    assert all(x >= y for x, y in zip(trace, trace[1:]))
    assert value == trace[-1]
    assert abs(a2 @ b2) < 1e-9


def test_search_is_deterministic_and_trace_nonincreasing(esch_basis):
    r1 = min_residual_search(esch_basis, 20, seed=11)
    r2 = min_residual_search(esch_basis, 20, seed=11)
    assert r1.residual == r2.residual and r1.best_restart == r2.best_restart
    assert r1.restarts == 20
    assert all(x >= y for x, y in zip(r1.trace, r1.trace[1:]))
    assert r1.trace[r1.best_restart] == r1.residual


def test_more_restarts_never_worse(esch_basis):
    short = min_residual_search(esch_basis, 5, seed=3)
    long = min_residual_search(esch_basis, 25, seed=3)
    assert long.residual <= short.residual


def test_search_finds_flat_plane_at_identity():
    H = horizontal_basis(BiquotientSpec.m13(), np.eye(8))
    res = min_residual_search(H, 100, seed=0, stop_below=1e-12)
    assert res.residual < 1e-10
    assert res.restarts <= 100


def test_stop_below_stops_early():
    H = horizontal_basis(BiquotientSpec.m13(), np.eye(8))
    res = min_residual_search(H, 50, seed=0, stop_below=1e-12)
    assert res.restarts < 50
    assert len(res.trace) == res.restarts


def test_budget_validation(esch_basis):
    with pytest.raises(ValueError):
        min_residual_search(esch_basis, 0, seed=0)
