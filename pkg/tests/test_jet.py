import numpy as np
import pytest
import sympy as sp

from lieburgers import jet
from lieburgers.exact import ShockSolution
from lieburgers.jet import D, JetPoint, U, nu, u


def test_total_derivative_examples():
    assert D(U, "x") == u(1, 0)
    assert sp.expand(D(U ** 2, "x") - 2 * U * u(1, 0)) == 0
    g1 = -U * u(1, 0) + nu * u(2, 0)
    want = -u(1, 0) ** 2 - U * u(2, 0) + nu * u(3, 0)
    assert sp.expand(D(g1, "x") - want) == 0


def test_total_derivative_sees_explicit_coordinates():
    assert sp.expand(D(jet.x * jet.t * U, "t") - (jet.x * U + jet.x * jet.t * u(0, 1))) == 0


def test_mixed_partials_share_a_slot():
    assert D(D(U, "x"), "t") == D(D(U, "t"), "x") == u(1, 1)


def test_numeric_total_derivative_and_missing_order():
    p = JetPoint(0.0, 0.0, {(0, 0): 2.0, (1, 0): 3.0, (2, 0): 5.0})
    assert jet.total_derivative(U ** 2, p, "x") == pytest.approx(12.0)
    with pytest.raises(jet.InsufficientJetOrder):
        jet.total_derivative(u(2, 0), p, "x")


def test_jet_from_solution():
    s = ShockSolution(nu=0.1)
    p = JetPoint.from_solution(s, 0.1, 0.2, 2, nu=0.1)
    assert p.u == pytest.approx(float(s(0.1, 0.2)))
    assert p[(0, 1)] == pytest.approx(float(s.derivative(0, 1)(0.1, 0.2)))
    assert p.max_order == 2


def test_batch_evaluation():
    batch = {U: np.array([1.0, 2.0]), u(1, 0): np.array([3.0, 4.0])}
    assert list(jet.evaluate(U * u(1, 0), batch)) == [3.0, 8.0]


def test_index_helpers():
    assert jet.index_of(u(2, 3)) == (2, 3)
    assert jet.index_of(jet.x) is None
    assert jet.order(U * u(1, 2) + u(3, 0)) == 3
    with pytest.raises(ValueError):
        u(-1, 0)
