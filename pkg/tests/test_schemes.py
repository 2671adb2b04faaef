import numpy as np
import pytest

import oracles
from lieburgers import schemes as S
from lieburgers.exact import ShockSolution
from lieburgers.grid import BlowUp, Grid1D, SchemeParams, State
from lieburgers.schemes import OmegaClosure, SchemeId

EPS = np.finfo(float).eps


def random_cases(n_cases=20, seed=11):
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        n = int(rng.integers(8, 33))
        u = rng.uniform(-1, 1, n)
        h = rng.uniform(0.05, 0.5)
        a = np.max(np.abs(u))
        tau = rng.uniform(0.1, 0.5) * h / a
        nu = rng.uniform(0.05, 0.25) * h * h / tau
        grid = Grid1D.periodic(0.0, n * h, n)
        yield State(u, 0.0, grid), SchemeParams(nu, grid.h, tau), a


@pytest.mark.parametrize("stepper,oracle", [
    (S.step_ftcs, oracles.ftcs),
    (S.step_lax_wendroff, oracles.lax_wendroff),
    (S.step_semi_invariant, oracles.semi_invariant),
])
def test_explicit_steps_match_loop_oracles(stepper, oracle):
    for state, p, a in random_cases():
        got = stepper(state, p).values
        want = oracle(state.values, p.h, p.nu, p.tau)
        assert np.max(np.abs(got - want)) <= 16 * EPS * a


def test_crank_nicolson_matches_newton_oracle():
    for state, p, a in random_cases():
        got = S.step_crank_nicolson(state, p, tol=1e-15).values
        want = oracles.crank_nicolson_newton(state.values, p.h, p.nu, p.tau)
        assert np.max(np.abs(got - want)) <= 16 * EPS * a


def test_crank_nicolson_default_tolerance_residual():
    for state, p, a in random_cases(5):
        new = S.step_crank_nicolson(state, p)
        res = oracles.crank_nicolson_residual(state.values, new.values, p.h, p.nu, p.tau)
        assert np.max(np.abs(res)) < 1e-11


def test_crank_nicolson_reports_iterations():
    state, p, _ = next(random_cases(1))
    info = {}
    S.step_crank_nicolson(state, p, info=info)
    assert 1 <= info["iterations"] <= 50 and info["change"] <= 1e-12


def test_crank_nicolson_convergence_failure():
    state, p, _ = next(random_cases(1))
    with pytest.raises(S.ConvergenceFailure):
        S.step_crank_nicolson(state, p, tol=1e-30, max_iter=2)


def test_crank_nicolson_rejects_bad_settings():
    state, p, _ = next(random_cases(1))
    with pytest.raises(ValueError):
        S.step_crank_nicolson(state, p, tol=0.0)


def test_cyclic_tridiagonal_against_dense():
    rng = np.random.default_rng(5)
    n = 17
    lo, up = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    d = 4 + rng.uniform(0, 1, n)
    rhs = rng.uniform(-1, 1, n)
    m = np.diag(d)
    for i in range(n):
        m[i, (i - 1) % n] += lo[i]
        m[i, (i + 1) % n] += up[i]
    assert np.allclose(S.solve_cyclic_tridiagonal(lo, d, up, rhs), np.linalg.solve(m, rhs),
                       atol=1e-14)


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_periodic_steps_conserve_sum(scheme):
    state, p, _ = next(random_cases(1, seed=2))
    new = S.step(scheme, state, p)
    assert np.sum(new.values) == pytest.approx(np.sum(state.values), abs=1e-12)
    assert new.time == pytest.approx(p.tau)


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_self_residual_vanishes(scheme):
    sol = ShockSolution(nu=0.1)
    g = Grid1D.dirichlet(-1, 2, 41, sol)
    p = SchemeParams(sol.nu, g.h, 0.2 * g.h)
    old = State.sample(g, sol, 0.1)
    new = S.step(scheme, old, p)
    assert np.max(np.abs(S.scheme_residual(scheme, old, new, p))) < 1e-9


def test_constant_state_is_fixed_point():
    g = Grid1D.periodic(0, 1, 16)
    s = State(np.full(16, 0.7), 0.0, g)
    p = SchemeParams(0.01, g.h, 0.01)
    for scheme in SchemeId:
        assert np.allclose(S.step(scheme, s, p).values, 0.7, atol=1e-14)


class TestOmega:
    def test_parse_and_str(self):
        assert OmegaClosure.parse("cancel") == S.CANCEL
        c = OmegaClosure.parse("custom:0.3")
        assert c.rule == "custom" and c.c0 == 0.3 and str(c) == "custom:0.3"
        assert OmegaClosure.parse("frozen:0.01").omega_tau == 0.01
        with pytest.raises(ValueError):
            OmegaClosure.parse("bogus")

    def test_custom_is_galilean_invariant_correction(self):
        g = Grid1D.periodic(0, 1, 16)
        rng = np.random.default_rng(0)
        u = rng.uniform(-1, 1, 16)
        p = SchemeParams(0.01, g.h, 0.01)
        cancel, custom = S.CANCEL, OmegaClosure("custom", c0=0.2)
        diffs = []
        for shift in (0.0, 0.5):
            pad = g.extend(u + shift)
            diffs.append(custom.half_values(pad, p)[0] - cancel.half_values(pad, p)[0])
        assert np.allclose(diffs[0], diffs[1])

    def test_frozen_is_constant(self):
        g = Grid1D.periodic(0, 1, 16)
        p = SchemeParams(0.01, g.h, 0.02)
        om = OmegaClosure("frozen", omega_tau=0.01).half_values(g.extend(np.zeros(16)), p)
        assert om == (0.5, 0.5)


def test_scheme_id_parse():
    assert SchemeId.parse("LW") is SchemeId.LAX_WENDROFF
    assert SchemeId.parse("crank_nicolson") is SchemeId.CRANK_NICOLSON
    with pytest.raises(ValueError):
        SchemeId.parse("rk4")


class TestRun:
    def unstable(self):
        g = Grid1D.periodic(0, 1, 32)
        u = np.sin(2 * np.pi * g.x) + 0.01 * np.cos(30 * np.pi * g.x)
        return State(u, 0.0, g), SchemeParams(0.01, g.h, 2.0 * g.h ** 2 / 0.01)

    def test_blowup_leaves_k_records(self):
        state, p = self.unstable()
        traj = S.run("ftcs", state, p, 2000, {"max": lambda s: np.max(np.abs(s.values))})
        assert traj.blew_up
        k = traj.blowup_step
        assert traj.steps_taken == k and len(traj.records["max"]) == k
        assert np.all(np.isfinite(traj.final.values))

    def test_observers_called_every_step(self):
        g = Grid1D.periodic(0, 1, 16)
        s = State(np.sin(2 * np.pi * g.x), 0.0, g)
        p = SchemeParams(0.01, g.h, 0.01)
        traj = S.run("semi", s, p, 5, {"t": lambda s: s.time})
        assert not traj.blew_up
        assert traj.records["t"] == pytest.approx([0.01 * k for k in range(1, 6)])

    def test_rejects_zero_steps(self):
        state, p = self.unstable()
        with pytest.raises(ValueError):
            S.run("ftcs", state, p, 0)

    def test_step_raises_blowup_directly(self):
        g = Grid1D.periodic(0, 1, 8)
        s = State(np.full(8, 1e200), 0.0, g)
        with pytest.raises(BlowUp), np.errstate(over="ignore", invalid="ignore"):
            S.step_ftcs(s, SchemeParams(0.0, g.h, 0.01))
