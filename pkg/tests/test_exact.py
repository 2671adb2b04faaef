import numpy as np
import pytest

from lieburgers.exact import (
    CbkdvCoefficients, InvalidParameter, ShockSolution, WavySolution,
    burgers_residual, cbkdv_residual,
)

rng = np.random.default_rng(3)


@pytest.mark.parametrize("sol", [ShockSolution(), ShockSolution(0.3, 0.7, 0.2, 0.1),
                                 WavySolution(), WavySolution(1.5, 0.05, 3.0)])
def test_closed_forms_solve_burgers(sol):
    x = rng.uniform(-1, 1, 100)
    t = rng.uniform(0, 1, 100)
    assert np.max(np.abs(burgers_residual(sol, x, t, sol.nu))) < 1e-7


def test_shock_values():
    s = ShockSolution(a=0.5, b=0.5, nu=0.05)
    assert s(0.0, 0.0) == pytest.approx(0.5)
    assert s(-10.0, 0.0) == pytest.approx(1.0)
    assert s(10.0, 0.0) == pytest.approx(0.0)


def test_wavy_value_and_speed():
    w = WavySolution(A=2.0, nu=0.1, L=2.0)
    # at x = L/4, sin = 1 and cos = 0
    assert w(0.5, 0.0) == pytest.approx(0.1 * np.pi)
    xs = np.linspace(0, 2, 20001)
    assert np.max(np.abs(w(xs, 0.0))) == pytest.approx(w.max_speed, rel=1e-6)


def test_invalid_parameters():
    with pytest.raises(InvalidParameter):
        WavySolution(A=1.0)
    with pytest.raises(InvalidParameter):
        ShockSolution(nu=0.0)


def test_exact_derivatives_against_finite_differences():
    s = ShockSolution(nu=0.1)
    x, t, e = 0.17, 0.3, 1e-5
    ux = s.derivative(1, 0)(x, t)
    assert ux == pytest.approx((s(x + e, t) - s(x - e, t)) / (2 * e), rel=1e-7)
    ut = s.derivative(0, 1)(x, t)
    assert ut == pytest.approx((s(x, t + e) - s(x, t - e)) / (2 * e), rel=1e-7)


def test_boost_is_galilean():
    s = ShockSolution(nu=0.1)
    b = s.boosted(0.25)
    x = rng.uniform(-1, 1, 10)
    assert np.allclose(b(x, 0.4), s(x - 0.1, 0.4) + 0.25)
    assert np.max(np.abs(burgers_residual(b, x, 0.4, s.nu))) < 1e-7
    assert s.boosted(0) is s


def test_cbkdv_reduces_to_burgers():
    s = ShockSolution(nu=0.1)
    x = rng.uniform(-1, 1, 20)
    c = CbkdvCoefficients.burgers(0.1)
    assert np.allclose(cbkdv_residual(s, c, x, 0.2), burgers_residual(s, x, 0.2, 0.1))


def test_third_derivative_probe_on_cubic():
    c = CbkdvCoefficients(0.0, 0.0, 0.0, -1.0)
    # u = x^3: u_xxx = 6, every other term vanishes
    assert cbkdv_residual(lambda x, t: x ** 3, c, np.array([0.3]), 0.0)[0] == pytest.approx(6.0)
