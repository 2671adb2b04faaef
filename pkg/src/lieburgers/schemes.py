"""Time steppers for the viscous Burgers equation.

Every explicit scheme is written as ``u^{n+1} = u^n - tau * rate(u^n)`` where
``rate`` collects the spatial terms exactly as they appear in the scheme's
difference formula (undivided operators, explicit powers of ``h``).
Crank-Nicolson uses the trapezoidal half weighting and Picard iteration on the
convective flux.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.linalg import solve_banded

from .grid import (
    Boundary, BlowUp, State, delta2_k, delta4_k, delta_minus_k, delta_plus_k,
    half, half_delta2_k, mu_delta3_k, mu_delta_k, node,
)


class SchemeId(enum.Enum):
    FTCS = "ftcs"
    LAX_WENDROFF = "lw"
    CRANK_NICOLSON = "cn"
    SEMI_INVARIANT = "semi"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"laxwendroff": "lw", "lax_wendroff": "lw",
                   "cranknicolson": "cn", "crank_nicolson": "cn",
                   "semiinvariant": "semi", "semi_invariant": "semi"}
        key = str(value).strip().lower()
        return cls(aliases.get(key, key))


class ConvergenceFailure(RuntimeError):
    def __init__(self, iterations, change):
        self.iterations = iterations
        self.change = change
        super().__init__(
            f"Picard iteration did not converge in {iterations} iterations "
            f"(last sup-change {change:.3e})")


@dataclass(frozen=True)
class OmegaClosure:
    """Rule for the artificial-viscosity coefficient at half nodes.

    ``cancel``
        ``Omega_{i+1/2} = tau u_{i+1/2}^2 / (2 h^2)``, which makes
        ``C = tau u^2/2 - h^2 Omega`` vanish.
    ``custom``
        ``cancel`` minus ``c0 |delta u|_{i+1/2} / h``; ``|delta u|/h`` is unchanged
        by ``u -> u + eps`` so the added dissipation is Galilean invariant.
    ``frozen``
        A constant ``Omega = omega_tau / tau``; used for von Neumann analysis.
    """

    rule: str = "cancel"
    c0: float = 0.0
    omega_tau: float = 0.0

    @classmethod
    def parse(cls, text):
        text = str(text).strip().lower()
        if text == "cancel":
            return cls()
        if text.startswith("custom:"):
            return cls("custom", c0=float(text.split(":", 1)[1]))
        if text.startswith("frozen:"):
            return cls("frozen", omega_tau=float(text.split(":", 1)[1]))
        raise ValueError(f"unknown omega rule {text!r}")

    def __str__(self):
        if self.rule == "cancel":
            return "cancel"
        if self.rule == "custom":
            return f"custom:{self.c0!r}"
        return f"frozen:{self.omega_tau!r}"

    def half_values(self, p, params):
        """``(Omega_{i+1/2}, Omega_{i-1/2})`` on a padded array."""
        tau, h = params.tau, params.h
        if self.rule == "frozen":
            om = self.omega_tau / tau
            return om, om
        m_plus, m_minus = half(p, 0), half(p, -1)
        om_p = tau * m_plus ** 2 / (2 * h ** 2)
        om_m = tau * m_minus ** 2 / (2 * h ** 2)
        if self.rule == "custom":
            om_p = om_p - self.c0 * np.abs(delta_plus_k(p)) / h
            om_m = om_m - self.c0 * np.abs(delta_minus_k(p)) / h
        elif self.rule != "cancel":
            raise ValueError(f"unknown omega rule {self.rule!r}")
        return om_p, om_m


CANCEL = OmegaClosure()


# {{{ spatial rates on padded arrays

def rate_ftcs(p, params):
    h, nu = params.h, params.nu
    w = 0.5 * p * p
    return mu_delta_k(w) / h - nu * delta2_k(p) / h ** 2


def _viscous_corrections(p, w, params):
    """The three ``nu tau / 2`` terms shared by Lax-Wendroff and the
    semi-invariant scheme."""
    h, nu, tau = params.h, params.nu, params.tau
    pair = half(p, 0) * half_delta2_k(p, 0) - half(p, -1) * half_delta2_k(p, -1)
    return (nu * tau / (2 * h ** 3) * pair
            - nu ** 2 * tau / (2 * h ** 4) * delta4_k(p)
            + nu * tau / (2 * h ** 3) * mu_delta3_k(w))


def lax_wendroff_correction(p, params):
    """The ``A^n_i`` term."""
    h, tau = params.h, params.tau
    w = 0.5 * p * p
    convective = half(p, 0) * delta_plus_k(w) - half(p, -1) * delta_minus_k(w)
    return -tau / (2 * h ** 2) * convective + _viscous_corrections(p, w, params)


def rate_lax_wendroff(p, params):
    return rate_ftcs(p, params) + lax_wendroff_correction(p, params)


def rate_semi_invariant(p, params, omega=CANCEL):
    if not isinstance(omega, OmegaClosure):
        omega = OmegaClosure.parse(omega)
    h, nu = params.h, params.nu
    w = 0.5 * p * p
    convective = (mu_delta_k(w) - mu_delta3_k(w) / 6.0) / h
    viscous = nu * (delta2_k(p) - delta4_k(p) / 12.0) / h ** 2
    om_p, om_m = omega.half_values(p, params)
    artificial = om_p * delta_plus_k(p) - om_m * delta_minus_k(p)
    return convective - viscous - artificial + _viscous_corrections(p, w, params)

# }}}


def _advance(state, params, rate):
    grid = state.grid
    p = grid.extend(state.values, state.time)
    new = state.values - params.tau * rate(p, params)
    return State(new, state.time + params.tau, grid).check_finite()


def step_ftcs(state, params):
    return _advance(state, params, rate_ftcs)


def step_lax_wendroff(state, params):
    return _advance(state, params, rate_lax_wendroff)


def step_semi_invariant(state, params, omega=CANCEL):
    return _advance(state, params,
                    lambda p, prm: rate_semi_invariant(p, prm, omega))


# {{{ Crank-Nicolson

def solve_cyclic_tridiagonal(lower, diag, upper, rhs):
    """Solve a periodic tridiagonal system via Sherman-Morrison.

    Row ``i`` reads ``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``
    with indices taken modulo ``n``.
    """
    n = diag.size
    gamma = -diag[0]
    d = diag.copy()
    d[0] -= gamma
    d[-1] -= lower[0] * upper[-1] / gamma
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1] = d
    ab[2, :-1] = lower[1:]
    corr = np.zeros(n)
    corr[0] = gamma
    corr[-1] = upper[-1]
    sol = solve_banded((1, 1), ab, np.column_stack((rhs, corr)))
    y, z = sol[:, 0], sol[:, 1]
    fact = (y[0] + lower[0] * y[-1] / gamma) / (1.0 + z[0] + lower[0] * z[-1] / gamma)
    return y - fact * z


def _cn_solve(grid, r, params, ghost_next):
    """Solve ``(I - tau nu/(2 h^2) delta^2) x = r``."""
    n = grid.n_points
    k = params.tau * params.nu / (2 * params.h ** 2)
    if grid.boundary is Boundary.PERIODIC:
        if k == 0:
            return r.copy()
        off = np.full(n, -k)
        return solve_cyclic_tridiagonal(off, np.full(n, 1 + 2 * k), off, r)
    r = r.copy()
    r[0] += k * ghost_next[0]
    r[-1] += k * ghost_next[1]
    ab = np.zeros((3, n))
    ab[0, 1:] = -k
    ab[1] = 1 + 2 * k
    ab[2, :-1] = -k
    return solve_banded((1, 1), ab, r)


def step_crank_nicolson(state, params, tol=1e-12, max_iter=50, info=None):
    """One trapezoidal step, Picard-lagging the convective flux ``u^2/2``.

    Each iterate solves the constant tridiagonal (cyclic on periodic grids)
    viscous system exactly. ``info``, if a dict, receives the iteration count
    and final sup-change.
    """
    if not tol > 0 or max_iter < 1:
        raise ValueError("need tol > 0 and max_iter >= 1")
    grid, h, tau, nu = state.grid, params.h, params.tau, params.nu
    t_next = state.time + tau
    p = grid.extend(state.values, state.time)
    w_old = 0.5 * p * p
    explicit = (state.values - 0.5 * tau * mu_delta_k(w_old) / h
                + 0.5 * tau * nu * delta2_k(p) / h ** 2)
    ghost_next = None
    if grid.boundary is not Boundary.PERIODIC:
        q = grid.extend(state.values, t_next)
        ghost_next = (q[1], q[-2])
    current = state.values
    change = np.inf
    for it in range(1, max_iter + 1):
        q = grid.extend(current, t_next)
        r = explicit - 0.5 * tau * mu_delta_k(0.5 * q * q) / h
        new = _cn_solve(grid, r, params, ghost_next)
        State(new, t_next, grid).check_finite()
        change = float(np.max(np.abs(new - current)))
        current = new
        if change <= tol:
            break
    else:
        raise ConvergenceFailure(max_iter, change)
    if info is not None:
        info.update(iterations=it, change=change)
    return State(current, t_next, grid)

# }}}


def scheme_residual(scheme, old, new, params, omega=CANCEL):
    """Left-hand side of the difference equation for a given pair of levels.

    Zero (to round-off) when ``new`` is the scheme's own update of ``old``;
    evaluated on samples of an exact solution it is the local truncation error.
    """
    scheme = SchemeId.parse(scheme)
    grid, h, tau, nu = old.grid, params.h, params.tau, params.nu
    p = grid.extend(old.values, old.time)
    dt = (new.values - old.values) / tau
    if scheme is SchemeId.FTCS:
        return dt + rate_ftcs(p, params)
    if scheme is SchemeId.LAX_WENDROFF:
        return dt + rate_lax_wendroff(p, params)
    if scheme is SchemeId.SEMI_INVARIANT:
        return dt + rate_semi_invariant(p, params, omega)
    q = grid.extend(new.values, new.time)
    return (dt + 0.5 * (mu_delta_k(0.5 * q * q) + mu_delta_k(0.5 * p * p)) / h
            - 0.5 * nu * (delta2_k(q) + delta2_k(p)) / h ** 2)


def step(scheme, state, params, omega=CANCEL, **kwargs):
    scheme = SchemeId.parse(scheme)
    if scheme is SchemeId.FTCS:
        return step_ftcs(state, params)
    if scheme is SchemeId.LAX_WENDROFF:
        return step_lax_wendroff(state, params)
    if scheme is SchemeId.CRANK_NICOLSON:
        return step_crank_nicolson(state, params, **kwargs)
    return step_semi_invariant(state, params, omega)


@dataclass
class Trajectory:
    final: State
    steps_taken: int
    blowup_step: Optional[int] = None
    records: dict = field(default_factory=dict)

    @property
    def blew_up(self):
        return self.blowup_step is not None


def run(scheme, initial, params, n_steps, observers: Optional[Mapping[str, Callable]] = None,
        omega=CANCEL, **kwargs):
    """Advance ``n_steps`` steps or until the first blow-up.

    ``observers`` maps names to ``f(state) -> value``; each is called after
    every completed step and its values are collected in ``records``.
    Steps are numbered from 0, so a blow-up in step ``k`` leaves exactly ``k``
    completed steps (and ``k`` observer records).
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    observers = dict(observers or {})
    records = {name: [] for name in observers}
    state = initial
    for k in range(n_steps):
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                state = step(scheme, state, params, omega, **kwargs)
        except BlowUp:
            return Trajectory(state, k, k, records)
        for name, obs in observers.items():
            records[name].append(obs(state))
    return Trajectory(state, n_steps, None, records)
