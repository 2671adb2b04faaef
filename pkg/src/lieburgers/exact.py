"""Closed-form Burgers solutions and PDE residual probes.

The residual probes differentiate any callable field ``u(x, t)`` with
fourth-order centred stencils, so they work equally on the closed forms here
and on fields produced by the finite symmetry transforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy as sp

X, T = sp.symbols("x t", real=True)


class InvalidParameter(ValueError):
    pass


class _ClosedForm:
    """Mixin: numeric evaluation and exact derivatives from a sympy expression."""

    def expression(self):
        raise NotImplementedError

    @cached_property
    def _compiled(self):
        return sp.lambdify((X, T), self.expression(), "numpy")

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        return np.asarray(self._compiled(x, t), dtype=float) * np.ones_like(x)

    evaluate = __call__

    def derivative(self, nx=0, nt=0):
        """Callable for the exact ``d^(nx+nt) u / dx^nx dt^nt``."""
        key = (nx, nt)
        cache = self.__dict__.setdefault("_derivs", {})
        if key not in cache:
            expr = sp.diff(self.expression(), X, nx, T, nt) if nx or nt \
                else self.expression()
            f = sp.lambdify((X, T), expr, "numpy")
            cache[key] = lambda x, t, f=f: np.asarray(f(np.asarray(x, float), t),
                                                      dtype=float) * np.ones_like(x, float)
        return cache[key]

    def boosted(self, eps):
        """The same solution seen from a frame moving with velocity ``-eps``.

        ``u*(x, t) = u(x - eps t, t) + eps`` (Galilean boost).
        """
        return BoostedSolution(self, eps) if eps else self


@dataclass(frozen=True, eq=False)
class ShockSolution(_ClosedForm):
    """Viscous travelling shock ``u = a - b tanh(b (x - a t - x0) / (2 nu))``."""

    a: float = 0.5
    b: float = 0.5
    nu: float = 0.05
    x0: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise InvalidParameter("shock solution needs nu > 0")

    def expression(self):
        a, b, nu, x0 = (sp.Float(v) for v in (self.a, self.b, self.nu, self.x0))
        return a - b * sp.tanh(b * (X - a * T - x0) / (2 * nu))

    @property
    def max_speed(self):
        return abs(self.a) + abs(self.b)


@dataclass(frozen=True, eq=False)
class WavySolution(_ClosedForm):
    """Decaying periodic Cole-Hopf solution.

    ``u = 2 nu k e sin(kx) / (A + e cos(kx))`` with ``e = exp(-nu k^2 t)`` and
    ``k = 2 pi / L``; ``A > 1`` keeps the denominator away from zero.
    """

    A: float = 2.0
    nu: float = 0.1
    L: float = 2.0

    def __post_init__(self):
        if not self.A > 1:
            raise InvalidParameter(f"WavySolution needs A > 1, got {self.A}")
        if not self.nu > 0 or not self.L > 0:
            raise InvalidParameter("WavySolution needs nu > 0 and L > 0")

    @property
    def k(self):
        return 2 * np.pi / self.L

    def expression(self):
        A, nu = sp.Float(self.A), sp.Float(self.nu)
        k = 2 * sp.pi / sp.Float(self.L)
        e = sp.exp(-nu * k ** 2 * T)
        return 2 * nu * k * e * sp.sin(k * X) / (A + e * sp.cos(k * X))

    @property
    def max_speed(self):
        # maximum of 2 nu k sin / (A + cos) at t = 0 is 2 nu k / sqrt(A^2 - 1)
        return 2 * self.nu * self.k / np.sqrt(self.A ** 2 - 1)


@dataclass(frozen=True, eq=False)
class BoostedSolution(_ClosedForm):
    base: _ClosedForm
    eps: float

    def expression(self):
        e = sp.Float(self.eps)
        return self.base.expression().subs(X, X - e * T) + e

    @property
    def nu(self):
        return self.base.nu


@dataclass(frozen=True)
class CbkdvCoefficients:
    """``u_t + alpha u u_x + beta u^2 u_x + mu u_xx - s u_xxx = 0``."""

    alpha: float
    beta: float
    mu: float
    s: float

    @classmethod
    def burgers(cls, nu):
        return cls(alpha=1.0, beta=0.0, mu=-nu, s=0.0)


def evaluate(solution, x, t):
    return solution(x, t)


# {{{ fourth-order probes

_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
# seven-point, fourth order for the third derivative
_D3 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0
_OFF5 = np.arange(-2, 3)
_OFF7 = np.arange(-3, 4)


def _probe(field, x, t, probe_h):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    ux5 = np.stack([field(x + k * probe_h, t) for k in _OFF5])
    ut5 = np.stack([field(x, t + k * probe_h) for k in _OFF5])
    u = ux5[2]
    u_x = np.tensordot(_D1, ux5, 1) / probe_h
    u_xx = np.tensordot(_D2, ux5, 1) / probe_h ** 2
    u_t = np.tensordot(_D1, ut5, 1) / probe_h
    return u, u_t, u_x, u_xx


def _third(field, x, t, probe_h):
    x = np.asarray(x, dtype=float)
    ux7 = np.stack([field(x + k * probe_h, t) for k in _OFF7])
    return np.tensordot(_D3, ux7, 1) / probe_h ** 3


def burgers_residual(field, x, t, nu, probe_h=1e-3):
    """``u_t + u u_x - nu u_xx`` from fourth-order centred probes."""
    u, u_t, u_x, u_xx = _probe(field, x, t, probe_h)
    return u_t + u * u_x - nu * u_xx


def cbkdv_residual(field, coeffs, x, t, probe_h=1e-3):
    u, u_t, u_x, u_xx = _probe(field, x, t, probe_h)
    u_xxx = _third(field, x, t, probe_h) if coeffs.s else 0.0
    return (u_t + coeffs.alpha * u * u_x + coeffs.beta * u * u * u_x
            + coeffs.mu * u_xx - coeffs.s * u_xxx)

# }}}
