"""Differential approximations (modified equations) of the Burgers schemes and
measurement of their truncation orders."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from . import jet
from .grid import DegenerateSample, Grid1D, SchemeParams, State, convergence_slope
from .jet import D, D_power, U, h, nu, tau, u
from .schemes import (
    CANCEL, OmegaClosure, SchemeId, rate_ftcs, rate_lax_wendroff,
    rate_semi_invariant, scheme_residual,
)

u_x, u_xx, u_xxxx = u(1, 0), u(2, 0), u(4, 0)


@lru_cache(maxsize=None)
def g_expressions():
    """``(g1, g2, g3)`` as jet-functions of ``u`` and its x-derivatives.

    Along an exact Burgers solution they equal ``u_t, u_tt, u_ttt``.
    """
    g1 = -U * u_x + nu * u_xx
    g2 = sp.expand(D(-g1 * U, "x") + nu * D_power(g1, "x", 2))
    g3 = sp.expand(D(-g2 * U - g1 ** 2, "x") + nu * D_power(g2, "x", 2))
    return g1, g2, g3


def g_functions(point, nu_value=None):
    """Numerical ``(g1, g2, g3)`` at a jet point (needs x-derivatives to 6)."""
    if nu_value is not None:
        point = jet.JetPoint(point.x, point.t, point.derivs, point.h,
                             point.tau, nu_value)
    return tuple(jet.evaluate(g, point) for g in g_expressions())


def burgers_expression():
    return u(0, 1) + U * u_x - nu * u_xx


def _spatial_h2():
    return (h ** 2 / 12 * D_power(U ** 2, "x", 3)
            - nu * h ** 2 / 12 * u_xxxx)


def omega_c_expression(omega):
    """``C = tau u^2/2 - h^2 Omega`` for a closure rule, as a jet-function."""
    omega = omega if isinstance(omega, OmegaClosure) else OmegaClosure.parse(omega)
    if omega.rule == "cancel":
        return sp.Integer(0)
    if omega.rule == "custom":
        return omega.c0 * h ** 2 * sp.Abs(u_x)
    return tau * U ** 2 / 2 - h ** 2 * sp.Float(omega.omega_tau) / tau


@dataclass(frozen=True)
class DifferentialRepresentation:
    """A scheme's first differential approximation.

    ``expression`` is the Burgers left-hand side plus ``correction``;
    ``leading_orders`` is ``(order in tau, order in h)`` of the correction.
    """

    scheme_id: SchemeId
    expression: sp.Expr
    correction: sp.Expr
    leading_orders: tuple

    def evaluate(self, point):
        return jet.evaluate(self.expression, point)

    def evaluate_correction(self, point):
        return jet.evaluate(self.correction, point)


def differential_representation(scheme, omega=CANCEL):
    scheme = SchemeId.parse(scheme)
    g1, g2, g3 = g_expressions()
    if scheme is SchemeId.FTCS:
        corr, orders = tau / 2 * g2 + _spatial_h2(), (1, 2)
    elif scheme is SchemeId.LAX_WENDROFF:
        corr, orders = tau ** 2 / 6 * g3 + _spatial_h2(), (2, 2)
    elif scheme is SchemeId.CRANK_NICOLSON:
        corr = (tau ** 2 * (g3 / 6 + D(g1 ** 2 + U * g2, "x") / 4
                            - nu / 4 * D_power(g2, "x", 2))
                + _spatial_h2())
        orders = (2, 2)
    else:
        c = omega_c_expression(omega)
        corr = D(c * u_x, "x")
        orders = (1, 2) if c != 0 else (None, None)
    corr = sp.expand(corr)
    return DifferentialRepresentation(scheme, sp.expand(burgers_expression() + corr),
                                      corr, orders)


# {{{ truncation errors on exact solutions

def _grid_for(solution, x_min, length, spacing):
    n = int(round(length / spacing)) + 1
    return Grid1D.dirichlet(x_min, length, n, solution)


def local_truncation_error(scheme, solution, spacing, step, t0=0.1,
                           x_min=-1.0, length=2.0, omega=CANCEL):
    """Scheme residual on samples of ``solution`` at ``t0`` and ``t0 + step``.

    Returns ``(grid, residual)``. Boundary ghosts come from the solution itself.
    """
    grid = _grid_for(solution, x_min, length, spacing)
    params = SchemeParams(solution.nu, grid.h, step)
    old = State.sample(grid, solution, t0)
    new = State.sample(grid, solution, t0 + step)
    return grid, scheme_residual(scheme, old, new, params, omega)


def spatial_truncation_error(scheme, solution, spacing, t0=0.1, x_min=-1.0,
                             length=2.0, omega=CANCEL):
    """The ``tau -> 0`` limit of the scheme residual: ``u_t + rate(u)``.

    Every ``tau``-dependent part of the rates scales with ``tau``, so the limit
    is taken by evaluating the rate at a vanishing step.
    """
    scheme = SchemeId.parse(scheme)
    omega = omega if isinstance(omega, OmegaClosure) else OmegaClosure.parse(omega)
    if scheme is SchemeId.SEMI_INVARIANT and omega.rule == "frozen":
        raise ValueError("a frozen Omega has no tau -> 0 limit")
    grid = _grid_for(solution, x_min, length, spacing)
    params = SchemeParams(solution.nu, grid.h, 1e-300)
    p = grid.extend(solution(grid.x, t0), t0)
    if scheme is SchemeId.SEMI_INVARIANT:
        rate = rate_semi_invariant(p, params, omega)
    elif scheme is SchemeId.LAX_WENDROFF:
        rate = rate_lax_wendroff(p, params)
    else:
        rate = rate_ftcs(p, params)
    return grid, solution.derivative(0, 1)(grid.x, t0) + rate


def _norm(grid, values):
    return float(np.sqrt(grid.h * np.sum(values * values)))


@dataclass(frozen=True)
class SchemeOrders:
    tau: float
    h: float
    tau_errors: tuple
    h_errors: tuple


def scheme_orders(scheme, solution, h_sequence=(1 / 16, 1 / 32, 1 / 64, 1 / 128),
                  tau_sequence=(0.08, 0.04, 0.02, 0.01), h_fine=1 / 1024,
                  t0=0.1, x_min=-1.0, length=2.0, omega=CANCEL):
    """Observed truncation orders in ``tau`` and ``h`` separately.

    The ``h`` order is the slope of the ``tau -> 0`` residual over
    ``h_sequence``. The ``tau`` order is the slope, over ``tau_sequence`` at
    fixed ``h_fine``, of the residual minus its ``tau -> 0`` limit, which
    removes the spatial part exactly.
    """
    h_err = []
    for s in h_sequence:
        grid, r = spatial_truncation_error(scheme, solution, s, t0, x_min, length, omega)
        h_err.append(_norm(grid, r))
    grid, r0 = spatial_truncation_error(scheme, solution, h_fine, t0, x_min, length, omega)
    t_err = []
    for step in tau_sequence:
        grid, r = local_truncation_error(scheme, solution, h_fine, step, t0,
                                         x_min, length, omega)
        t_err.append(_norm(grid, r - r0))
    return SchemeOrders(convergence_slope(tau_sequence, t_err),
                        convergence_slope(h_sequence, h_err),
                        tuple(t_err), tuple(h_err))


def exact_jets(solution, x, t, max_x_order):
    """Batch jet mapping with analytic x-derivatives of ``solution``."""
    out = {jet.x: np.asarray(x, float), jet.t: np.full(np.size(x), float(t))}
    for i in range(max_x_order + 1):
        out[u(i, 0)] = solution.derivative(i, 0)(x, t)
    out[u(0, 1)] = solution.derivative(0, 1)(x, t)
    return out


@dataclass(frozen=True)
class TruncationOrders:
    raw: float
    corrected: float
    raw_errors: tuple
    corrected_errors: tuple

    @property
    def improvement(self):
        return self.corrected - self.raw


def truncation_order_check(scheme, solution, sequence, t0=0.1, x_min=-1.0,
                           length=2.0, omega=CANCEL):
    """Slopes (against ``h``) of the raw residual and of the residual minus
    the differential-approximation correction, over ``(h, tau)`` pairs."""
    rep = differential_representation(scheme, omega)
    raw, corrected, hs = [], [], []
    for spacing, step in sequence:
        grid, r = local_truncation_error(scheme, solution, spacing, step, t0,
                                         x_min, length, omega)
        batch = exact_jets(solution, grid.x, t0, 6)
        batch.update({h: grid.h, tau: step, nu: solution.nu})
        corr = jet.evaluate(rep.correction, batch) if rep.correction.free_symbols \
            else np.full(grid.n_points, float(rep.correction))
        raw.append(_norm(grid, r))
        corrected.append(_norm(grid, r - corr))
        hs.append(grid.h)
    tiny = 100 * np.finfo(float).eps
    if min(raw) < tiny:
        raise DegenerateSample("scheme residual is at round-off")
    if min(corrected) < tiny:
        raise DegenerateSample("corrected residual is at round-off")
    return TruncationOrders(convergence_slope(hs, raw), convergence_slope(hs, corrected),
                            tuple(raw), tuple(corrected))

# }}}
