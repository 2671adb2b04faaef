"""Lie point symmetries: finite transforms, generator flows, prolongation and
numerical checks of the infinitesimal invariance criterion.

Points are tuples ``(x, t, u)`` or ``(x, t, u, h, tau, nu)``. Generator
infinitesimals are sympy expressions in ``x, t, u`` (and ``h, tau, nu`` for the
step-size / viscosity components), so every partial derivative used by the
prolongation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np
import sympy as sp

from . import jet
from .exact import CbkdvCoefficients
from .grid import State
from .jet import D, U, h, nu, t, tau, u, x

COORDS = (x, t, U, h, tau, nu)


class DomainError(ValueError):
    """The transformation is singular at the requested point / parameter."""


# {{{ generators

@dataclass(frozen=True, eq=False)
class GroupGenerator:
    """One-parameter group: infinitesimals plus the closed-form finite map.

    ``transform(eps, x, t, u, h, tau, nu)`` returns the image of a point.
    For dilatations the finite map uses a multiplicative parameter (identity
    at ``eps = 1``) and the canonical flow parameter is ``log(eps)``.
    """

    name: str
    xi_x: sp.Expr
    xi_t: sp.Expr
    eta: sp.Expr
    transform: Callable = field(repr=False)
    zeta_h: sp.Expr = sp.Integer(0)
    zeta_tau: sp.Expr = sp.Integer(0)
    theta: sp.Expr = sp.Integer(0)
    multiplicative: bool = False
    description: str = ""

    @property
    def identity(self):
        return 1.0 if self.multiplicative else 0.0

    def flow_parameter(self, eps):
        if self.multiplicative:
            if eps <= 0:
                raise DomainError(f"{self.name}: dilatation factor must be positive")
            return float(np.log(eps))
        return float(eps)

    def inverse_parameter(self, eps):
        return 1.0 / eps if self.multiplicative else -eps

    @property
    def components(self):
        return (self.xi_x, self.xi_t, self.eta, self.zeta_h, self.zeta_tau,
                self.theta)

    def vector_field(self):
        """Numeric infinitesimals as ``f(coords6) -> array(6)``."""
        f = sp.lambdify([COORDS], list(self.components), "numpy")
        return lambda c: np.array(f(c), dtype=float)

    def __str__(self):
        return self.name


def _sym(v):
    return sp.sympify(v)


def _translation_x(e, X, T, Uu, H, TA, N):
    return X + e, T, Uu, H, TA, N


def _translation_t(e, X, T, Uu, H, TA, N):
    return X, T + e, Uu, H, TA, N


def _dilatation(e, X, T, Uu, H, TA, N):
    return e * X, e * e * T, Uu / e, H, TA, N


def _dilatation_grid(e, X, T, Uu, H, TA, N):
    return e * X, e * e * T, Uu / e, e * H, e * e * TA, N


def _projective(e, X, T, Uu, H, TA, N):
    den = 1.0 - e * T
    if np.any(den == 0):
        raise DomainError("projective transformation singular at 1 - eps t = 0")
    return X / den, T / den, e * X + Uu * den, H, TA, N


def _galilean(e, X, T, Uu, H, TA, N):
    return X + e * T, T, Uu + e, H, TA, N


def _viscous_dilatation(e, X, T, Uu, H, TA, N):
    return X, T / e, e * Uu, H, TA, e * N


def _viscous_dilatation_grid(e, X, T, Uu, H, TA, N):
    return X, T / e, e * Uu, H, TA / e, e * N


L1 = GroupGenerator("L1", _sym(1), _sym(0), _sym(0), _translation_x,
                    description="space translation")
L2 = GroupGenerator("L2", _sym(0), _sym(1), _sym(0), _translation_t,
                    description="time translation")
L3 = GroupGenerator("L3", x, 2 * t, -U, _dilatation, multiplicative=True,
                    description="dilatation (x, t, u) -> (e x, e^2 t, u/e)")
L4 = GroupGenerator("L4", x * t, t ** 2, -U * t + x, _projective,
                    description="projective transformation")
L5 = GroupGenerator("L5", t, _sym(0), _sym(1), _galilean,
                    description="Galilean boost")
L6 = GroupGenerator("L6", _sym(0), -t, U, _viscous_dilatation, theta=nu,
                    multiplicative=True,
                    description="dilatation (t, u, nu) -> (t/e, e u, e nu)")
L3_PRIME = GroupGenerator("L'3", x, 2 * t, -U, _dilatation_grid,
                          zeta_h=h, zeta_tau=2 * tau, multiplicative=True,
                          description="dilatation acting on h and tau too")
L4_PRIME = GroupGenerator("L'4", _sym(0), -t, U, _viscous_dilatation_grid,
                          zeta_tau=-tau, theta=nu, multiplicative=True,
                          description="viscous dilatation acting on tau too")

BURGERS_GENERATORS = (L1, L2, L3, L4, L5, L6)
DIFFERENTIAL_APPROXIMATION_GENERATORS = (L1, L2, L3_PRIME, L4_PRIME)
CBKDV_GENERATORS = (L1, L2)
ALL_GENERATORS = {g.name: g for g in BURGERS_GENERATORS
                  + DIFFERENTIAL_APPROXIMATION_GENERATORS}

# }}}


# {{{ finite transforms and flows

def _as_coords(point):
    p = tuple(point)
    if len(p) == 3:
        return p + (1.0, 1.0, 1.0), 3
    if len(p) == 6:
        return p, 6
    raise ValueError("points are (x, t, u) or (x, t, u, h, tau, nu)")


def finite_transform(gen, eps, point):
    """Image of ``point`` under the closed-form transformation of ``gen``."""
    coords, n = _as_coords(point)
    if gen.multiplicative and eps <= 0:
        raise DomainError(f"{gen.name}: dilatation factor must be positive")
    out = gen.transform(eps, *coords)
    return tuple(out[:n])


def integrate_generator_flow(gen, eps, point, ode_steps=256):
    """Integrate ``d(point)/ds = infinitesimals(point)`` with classical RK4.

    ``s`` runs from 0 to the canonical parameter of ``eps``, so the result
    approximates :func:`finite_transform` to ``O((eps/ode_steps)^4)``.
    """
    if ode_steps < 16:
        raise ValueError("ode_steps must be >= 16")
    coords, n = _as_coords(point)
    s_end = gen.flow_parameter(eps)
    f = gen.vector_field()
    y = np.array(coords, dtype=float)
    ds = s_end / ode_steps
    for _ in range(ode_steps):
        k1 = f(y)
        k2 = f(y + 0.5 * ds * k1)
        k3 = f(y + 0.5 * ds * k2)
        k4 = f(y + ds * k3)
        y = y + ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise DomainError(f"{gen.name}: flow left its domain before s={s_end}")
    return tuple(float(v) for v in y[:n])


def transform_solution(gen, eps, field, nu_value):
    """Map a solution ``u(x, t)`` to its image under ``gen``.

    Returns ``(field_star, nu_star)`` where ``field_star(x*, t*)`` is the
    transformed dependent variable at transformed base coordinates. Relies on
    ``x*, t*`` not depending on ``u``, true for every catalogued generator.
    """
    inv = gen.inverse_parameter(eps)
    nu_star = gen.transform(eps, 0.0, 0.0, 0.0, 1.0, 1.0, nu_value)[5]

    def field_star(xs, ts):
        xs = np.asarray(xs, dtype=float)
        ts = np.broadcast_to(np.asarray(ts, dtype=float), xs.shape)
        zero = np.zeros_like(xs)
        x0, t0 = gen.transform(inv, xs, ts, zero, 1.0, 1.0, nu_value)[:2]
        u0 = field(x0, t0)
        return gen.transform(eps, x0, t0, u0, 1.0, 1.0, nu_value)[2]

    return field_star, float(nu_star)

# }}}


# {{{ prolongation

def prolong(gen, max_order):
    """Symbolic prolongation coefficients ``{(i, j): sigma^{(i, j)}}``.

    ``sigma^{J+k} = D_k sigma^J - u_{J+x} D_k xi_x - u_{J+t} D_k xi_t`` with
    ``sigma^{()} = eta``.
    """
    sigma = {(0, 0): gen.eta}
    for total in range(1, max_order + 1):
        for j in range(total + 1):
            i = total - j
            if j > 0:
                parent, k, child = (i, j - 1), "t", lambda a, b: u(a, b + 1)
            else:
                parent, k, child = (i - 1, j), "x", lambda a, b: u(a + 1, b)
            pi, pj = parent
            sigma[(i, j)] = sp.expand(
                D(sigma[parent], k)
                - u(pi + 1, pj) * D(gen.xi_x, k)
                - u(pi, pj + 1) * D(gen.xi_t, k))
    del sigma[(0, 0)]
    return sigma


def prolong_coefficients(gen, point, max_order):
    """Numerical prolongation coefficients at a :class:`~lieburgers.jet.JetPoint`."""
    return {idx: jet.evaluate(expr, point)
            for idx, expr in prolong(gen, max_order).items()}


def prolonged_contributions(gen, expr):
    """Individual terms of ``pr(gen) expr``.

    The sum of the returned list is the prolonged generator applied to
    ``expr``; the terms are kept apart so their magnitudes can serve as a
    round-off scale.
    """
    coords = jet.jet_coordinates(expr)
    sigma = prolong(gen, max((i + j for i, j in coords), default=0))
    terms = [
        gen.xi_x * sp.diff(expr, x),
        gen.xi_t * sp.diff(expr, t),
        gen.eta * sp.diff(expr, U),
        gen.zeta_h * sp.diff(expr, h),
        gen.zeta_tau * sp.diff(expr, tau),
        gen.theta * sp.diff(expr, nu),
    ]
    for idx, sym in coords.items():
        if idx != (0, 0):
            terms.append(sigma[idx] * sp.diff(expr, sym))
    return [term for term in terms if term != 0]


def apply_prolonged(gen, expr):
    return sp.expand(sp.Add(*prolonged_contributions(gen, expr)))

# }}}


# {{{ solution manifold

def evolution_rhs(lhs):
    """``phi`` such that ``lhs = 0`` is equivalent to ``u_t = phi``."""
    ut = u(0, 1)
    coeff = sp.diff(lhs, ut)
    rest = sp.expand(lhs - coeff * ut)
    if coeff.has(ut) or any(j > 0 for _, j in jet.jet_coordinates(rest)) \
            or any(j > 0 for _, j in jet.jet_coordinates(coeff)):
        raise ValueError("equation is not of evolution form u_t = phi(x-derivatives)")
    return sp.expand(-rest / coeff)


class SolutionManifold:
    """Expresses every ``t``-derivative through ``u_t = phi`` and its
    differential consequences."""

    def __init__(self, lhs):
        self.lhs = lhs
        self.phi = evolution_rhs(lhs)
        self._cache = {}

    def _time_derivative(self, expr):
        d = D(expr, "t")
        return self.substitute(d)

    def value(self, i, j):
        """x-only expression for ``u_{i, j}`` on the manifold (``j >= 1``)."""
        key = (i, j)
        if key not in self._cache:
            if j == 0:
                self._cache[key] = u(i, 0)
            elif j == 1:
                self._cache[key] = sp.expand(jet.D_power(self.phi, "x", i))
            else:
                base = self._time_derivative(self.value(0, j - 1))
                self._cache[key] = sp.expand(jet.D_power(base, "x", i))
        return self._cache[key]

    def substitute(self, expr):
        subs = {sym: self.value(i, j)
                for (i, j), sym in jet.jet_coordinates(expr).items() if j > 0}
        return expr.xreplace(subs) if subs else expr


def burgers_lhs():
    return u(0, 1) + U * u(1, 0) - nu * u(2, 0)


def cbkdv_lhs(coeffs):
    c = coeffs
    return (u(0, 1) + c.alpha * U * u(1, 0) + c.beta * U ** 2 * u(1, 0)
            + c.mu * u(2, 0) - c.s * u(3, 0))


def equation_lhs(equation):
    if isinstance(equation, sp.Basic):
        return equation
    if isinstance(equation, CbkdvCoefficients):
        return cbkdv_lhs(equation)
    if equation == "burgers":
        return burgers_lhs()
    raise ValueError(f"unknown equation {equation!r}")


def sample_free_coordinates(exprs, n, rng=None, box=(-1.0, 1.0),
                            param_box=(0.05, 1.0)):
    """Uniform random values for every free symbol of ``exprs``.

    Base and derivative coordinates come from ``box``; ``h, tau, nu`` from
    ``param_box``.
    """
    rng = np.random.default_rng(rng)
    symbols = set()
    for e in exprs:
        symbols |= e.free_symbols
    sample = {}
    for s in sorted(symbols, key=lambda s: s.name):
        lo, hi = param_box if s in jet.PARAMETERS else box
        sample[s] = rng.uniform(lo, hi, n)
    return sample

# }}}


@dataclass
class InvarianceResult:
    """Residual of ``pr(gen) F`` on the solution manifold at sampled jets.

    ``scale`` is the sum of magnitudes of the individual prolongation terms,
    i.e. the size of the numbers whose cancellation the residual measures.
    """

    generator: str
    residual: np.ndarray
    scale: np.ndarray
    symbolic: Optional[sp.Expr] = None

    @property
    def ratios(self):
        return np.abs(self.residual) / np.maximum(self.scale, np.finfo(float).tiny)

    @property
    def max_ratio(self):
        return float(np.max(self.ratios))

    @property
    def rms_ratio(self):
        """``||residual|| / ||scale||`` over the whole sample."""
        den = np.linalg.norm(self.scale)
        return float(np.linalg.norm(self.residual) / den) if den > 0 else 0.0

    def is_symmetry(self, tol=1e-8):
        return self.max_ratio <= tol

    def is_broken(self, tol=1e-2):
        return self.rms_ratio >= tol


def invariance_residual(gen, lhs, jets=100, rng=None):
    """Evaluate ``pr(gen) lhs`` restricted to ``lhs = 0``.

    ``jets`` is either a sample size or a mapping from free coordinates to
    arrays (t-derivatives are always derived from the equation, never read
    from the sample).
    """
    manifold = SolutionManifold(lhs)
    terms = [manifold.substitute(term) for term in prolonged_contributions(gen, lhs)]
    total = sp.expand(manifold.substitute(apply_prolonged(gen, lhs)))
    if isinstance(jets, (int, np.integer)):
        jets = sample_free_coordinates(terms + [total], int(jets), rng)
    n = max((np.size(v) for v in jets.values()), default=1)
    res = jet.evaluate(total, jets) if total.free_symbols else np.full(n, float(total))
    scale = np.zeros(n)
    for term in terms:
        val = jet.evaluate(term, jets) if term.free_symbols else np.full(n, float(term))
        scale += np.abs(val)
    return InvarianceResult(gen.name, np.asarray(res, float) * np.ones(n), scale, total)


def pde_invariance_residual(gen, equation="burgers", jets=100, rng=None):
    """Infinitesimal invariance test for a PDE (``"burgers"``, CBKDV
    coefficients, or any evolution-form jet expression)."""
    return invariance_residual(gen, equation_lhs(equation), jets, rng)


def da_invariance_residual(gen, differential_approximation, jets=100, rng=None):
    """Same test for a differential approximation containing ``h, tau, nu``.

    Accepts a jet expression or an object with an ``expression`` attribute
    (see :class:`lieburgers.modified.DifferentialRepresentation`).
    """
    expr = getattr(differential_approximation, "expression", differential_approximation)
    return invariance_residual(gen, expr, jets, rng)


# {{{ frame changes

def frame_change(state, eps):
    """Galilean boost of a whole time level.

    Values shift by ``eps`` and the node positions by ``eps * t``; a uniform
    level moves rigidly, so no interpolation is involved.
    """
    grid = state.grid.shifted(eps * state.time)
    return State(state.values + eps, state.time, grid), grid

# }}}
