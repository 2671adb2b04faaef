"""Uniform 1-D grids, grid functions and the Hildebrand difference operators.

All difference operators are *undivided*: they are pure index arithmetic and
every power of ``1/h`` is written out explicitly where a scheme uses them.

Two calling levels exist:

* public operators (:func:`shift`, :func:`delta2`, :func:`mu_delta`, ...)
  take a plain array of node values plus an optional :class:`Grid1D` and
  return an array of the same length;
* ``*_k`` kernels act on ghost-padded arrays (see :meth:`Grid1D.extend`) and
  are what the time steppers use, since derived quantities such as ``u**2/2``
  need their ghost values computed from padded ``u``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

#: ghost layers needed by the widest (5-point) stencil
NGHOST = 2


class GridError(ValueError):
    pass


class BoundaryDataMissing(GridError):
    """A stencil crossed a DirichletExact boundary with no data registered."""


class DegenerateSample(ValueError):
    """Errors too close to round-off for a convergence slope to mean anything."""


#: magnitude treated as blow-up; squaring anything larger overflows soon after
BLOWUP_LIMIT = 1e100


class BlowUp(FloatingPointError):
    """Non-finite or runaway values appeared in a grid function."""

    def __init__(self, step, index, message=None):
        self.step = step
        self.index = index
        super().__init__(
            message or f"non-finite value at node {index} (step {step})")


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET_EXACT = "dirichlet_exact"


@dataclass(frozen=True)
class Grid1D:
    """Uniform mesh ``x_i = x_min + origin_offset + i*h``, ``i = 0..n_points-1``.

    For periodic grids the period is ``n_points*h``. For ``DIRICHLET_EXACT``
    grids every node is an unknown and ghost nodes outside the mesh are filled
    from ``boundary_data(x, t)``.
    """

    x_min: float
    h: float
    n_points: int
    origin_offset: float = 0.0
    boundary: Boundary = Boundary.PERIODIC
    boundary_data: Optional[Callable] = field(default=None, compare=False,
                                              repr=False)

    def __post_init__(self):
        if not self.h > 0:
            raise GridError(f"mesh spacing must be positive, got {self.h}")
        if self.n_points < 2 * NGHOST + 1:
            raise GridError(
                f"need at least {2 * NGHOST + 1} points, got {self.n_points}")

    @classmethod
    def periodic(cls, x_min, length, n_points):
        return cls(x_min, length / n_points, n_points)

    @classmethod
    def dirichlet(cls, x_min, length, n_points, boundary_data=None):
        """Grid with ``n_points`` nodes spanning ``[x_min, x_min + length]``."""
        return cls(x_min, length / (n_points - 1), n_points,
                   boundary=Boundary.DIRICHLET_EXACT,
                   boundary_data=boundary_data)

    @property
    def x(self):
        return self.x_min + self.origin_offset + self.h * np.arange(self.n_points)

    @property
    def length(self):
        if self.boundary is Boundary.PERIODIC:
            return self.n_points * self.h
        return (self.n_points - 1) * self.h

    def with_boundary_data(self, boundary_data):
        return replace(self, boundary_data=boundary_data)

    def shifted(self, offset):
        return replace(self, origin_offset=self.origin_offset + offset)

    def extend(self, values, t=0.0, width=NGHOST):
        """Return ``values`` padded with ``width`` ghost nodes on each side."""
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n_points,):
            raise GridError(
                f"expected {self.n_points} node values, got {values.shape}")
        if width == 0:
            return values.copy()
        if self.boundary is Boundary.PERIODIC:
            return np.concatenate((values[-width:], values, values[:width]))
        if self.boundary_data is None:
            raise BoundaryDataMissing(
                "stencil exceeds a DirichletExact boundary but no boundary "
                "data is registered on the grid")
        k = np.arange(1, width + 1)
        x0 = self.x_min + self.origin_offset
        left = x0 - self.h * k[::-1]
        right = x0 + self.h * (self.n_points - 1 + k)
        return np.concatenate((
            np.broadcast_to(self.boundary_data(left, t), (width,)),
            values,
            np.broadcast_to(self.boundary_data(right, t), (width,))))


@dataclass(frozen=True)
class State:
    """Grid function ``u`` at one time level."""

    values: np.ndarray
    time: float
    grid: Grid1D

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n_points,):
            raise GridError(
                f"state has {v.shape} values for a {self.grid.n_points}-point grid")

    @classmethod
    def sample(cls, grid, func, t=0.0):
        return cls(np.asarray(func(grid.x, t), dtype=float) * np.ones(grid.n_points),
                   t, grid)

    def check_finite(self, step=None):
        bad = np.flatnonzero(~(np.abs(self.values) < BLOWUP_LIMIT))
        if bad.size:
            raise BlowUp(step, int(bad[0]))
        return self


@dataclass(frozen=True)
class SchemeParams:
    """Viscosity, mesh spacing, time step and reference velocity."""

    nu: float
    h: float
    tau: float
    ref_velocity: float = 1.0

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError(f"viscosity must be non-negative, got {self.nu}")
        if not self.h > 0 or not self.tau > 0:
            raise ValueError("h and tau must be positive")

    @property
    def cfl(self):
        return self.ref_velocity * self.tau / self.h

    @property
    def s(self):
        return self.nu * self.tau / self.h ** 2

    @property
    def s_star(self):
        return (self.nu + self.ref_velocity * self.h * self.cfl / 2) \
            * self.tau / self.h ** 2

    @property
    def re_h(self):
        """Cell Reynolds number ``a*h/nu`` (only defined for ``nu > 0``)."""
        if self.nu == 0:
            raise ZeroDivisionError("cell Reynolds number undefined for nu = 0")
        return self.ref_velocity * self.h / self.nu

    @classmethod
    def from_numbers(cls, h, ref_velocity, cfl, s):
        tau = cfl * h / ref_velocity
        return cls(nu=s * h ** 2 / tau, h=h, tau=tau, ref_velocity=ref_velocity)


# {{{ kernels on padded arrays

def node(p, k=0, g=NGHOST):
    """``E^k`` for integer ``k`` on a padded array: ``u_{i+k}`` at every node."""
    n = p.size - 2 * g
    return p[g + k:g + k + n]


def half(p, k, g=NGHOST):
    """``E^{k+1/2}``: two-point mean ``(u_{i+k} + u_{i+k+1})/2``."""
    return 0.5 * (node(p, k, g) + node(p, k + 1, g))


def delta2_k(p, g=NGHOST):
    return node(p, 1, g) - 2.0 * node(p, 0, g) + node(p, -1, g)


def mu_delta_k(p, g=NGHOST):
    return 0.5 * (node(p, 1, g) - node(p, -1, g))


def delta_plus_k(p, g=NGHOST):
    return node(p, 1, g) - node(p, 0, g)


def delta_minus_k(p, g=NGHOST):
    return node(p, 0, g) - node(p, -1, g)


def delta3_k(p, g=NGHOST):
    """``delta^3`` lands on half nodes; returned at ``i+1/2``."""
    return (node(p, 2, g) - 3.0 * node(p, 1, g) + 3.0 * node(p, 0, g)
            - node(p, -1, g))


def delta4_k(p, g=NGHOST):
    return (node(p, 2, g) - 4.0 * node(p, 1, g) + 6.0 * node(p, 0, g)
            - 4.0 * node(p, -1, g) + node(p, -2, g))


def mu_delta3_k(p, g=NGHOST):
    return 0.5 * (node(p, 2, g) - 2.0 * node(p, 1, g) + 2.0 * node(p, -1, g)
                  - node(p, -2, g))


def half_delta2_k(p, k, g=NGHOST):
    """``delta^2`` of the staggered mean array, evaluated at node ``i+k+1/2``.

    Equals ``(delta^2 u_{i+k} + delta^2 u_{i+k+1})/2``; needs ``|k| + 2`` ghosts
    on the side it reaches.
    """
    return 0.5 * (node(p, k + 2, g) - node(p, k + 1, g) - node(p, k, g)
                  + node(p, k - 1, g))

# }}}


# {{{ public operators on node arrays

def _pad(values, grid, t, width=NGHOST):
    values = np.asarray(values, dtype=float)
    if grid is None:
        if values.size < 2 * width + 1:
            raise GridError("array too short for the stencil")
        return np.concatenate((values[-width:], values, values[:width]))
    return grid.extend(values, t, width)


def shift(values, alpha, grid=None, t=0.0):
    """Apply ``E^alpha``; half-integer ``alpha`` uses the two-point mean.

    ``grid=None`` means periodic wrap-around.
    """
    two_alpha = 2 * alpha
    if two_alpha != int(two_alpha):
        raise ValueError(f"shift must be a multiple of 1/2, got {alpha}")
    two_alpha = int(two_alpha)
    if two_alpha == 0:
        return np.array(values, dtype=float)
    reach = (abs(two_alpha) + 1) // 2
    p = _pad(values, grid, t, reach)
    if two_alpha % 2 == 0:
        return node(p, two_alpha // 2, reach).copy()
    return half(p, (two_alpha - 1) // 2, reach)


def delta(values, grid=None, t=0.0):
    """``delta u`` at half nodes: entry ``i`` holds ``u_{i+1} - u_i``."""
    return delta_plus_k(_pad(values, grid, t, 1), 1)


def mu(values, grid=None, t=0.0):
    """``mu u`` at half nodes: entry ``i`` holds ``(u_i + u_{i+1})/2``."""
    return half(_pad(values, grid, t, 1), 0, 1)


def delta_plus(values, grid=None, t=0.0):
    return delta_plus_k(_pad(values, grid, t, 1), 1)


def delta_minus(values, grid=None, t=0.0):
    return delta_minus_k(_pad(values, grid, t, 1), 1)


def mu_delta(values, grid=None, t=0.0):
    return mu_delta_k(_pad(values, grid, t, 1), 1)


def mu_delta3(values, grid=None, t=0.0):
    return mu_delta3_k(_pad(values, grid, t))


def delta_pow(values, k, grid=None, t=0.0):
    """``delta^k`` for ``k`` in {2, 3, 4}; odd powers land on half nodes."""
    if k == 2:
        return delta2_k(_pad(values, grid, t, 1), 1)
    if k == 3:
        return delta3_k(_pad(values, grid, t))
    if k == 4:
        return delta4_k(_pad(values, grid, t))
    raise ValueError(f"delta_pow supports k in (2, 3, 4), got {k}")


def delta2(values, grid=None, t=0.0):
    return delta_pow(values, 2, grid, t)


def delta4(values, grid=None, t=0.0):
    return delta_pow(values, 4, grid, t)

# }}}


# {{{ composite derivative approximations

def first_derivative_2(values, h, grid=None, t=0.0):
    """``mu delta / h``."""
    return mu_delta(values, grid, t) / h


def first_derivative_4(values, h, grid=None, t=0.0):
    """``(mu delta - mu delta^3 / 6) / h``, fourth order."""
    p = _pad(values, grid, t)
    return (mu_delta_k(p) - mu_delta3_k(p) / 6.0) / h


def second_derivative_2(values, h, grid=None, t=0.0):
    """``delta^2 / h^2``."""
    return delta2(values, grid, t) / h ** 2


def second_derivative_4(values, h, grid=None, t=0.0):
    """``(delta^2 - delta^4 / 12) / h^2``, fourth order."""
    p = _pad(values, grid, t)
    return (delta2_k(p) - delta4_k(p) / 12.0) / h ** 2


DERIVATIVE_OPERATORS = {
    "mu_delta": (1, first_derivative_2),
    "mu_delta_4": (1, first_derivative_4),
    "delta2": (2, second_derivative_2),
    "delta2_4": (2, second_derivative_4),
}

# }}}


def convergence_slope(hs, errors):
    """Least-squares slope of ``log(error)`` against ``log(h)``."""
    hs = np.asarray(hs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0) or not np.all(np.isfinite(errors)):
        raise DegenerateSample(f"non-positive or non-finite errors: {errors}")
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def operator_accuracy_check(func, derivative, operator, h_sequence,
                            x_min=0.0, length=2 * np.pi):
    """Observed order of a difference operator on a smooth periodic function.

    Parameters
    ----------
    func, derivative : callable
        The test function and its exact derivative of the operator's order.
    operator : str or callable
        A key of :data:`DERIVATIVE_OPERATORS` or ``op(values, h)``.
    h_sequence : sequence of float
        Strictly decreasing spacings; each must divide ``length``.

    Returns
    -------
    float
        Slope of ``log(max error)`` against ``log(h)``.

    Raises
    ------
    DegenerateSample
        If any error is below ``100*eps`` times the derivative magnitude, in
        which case the operator is exact to round-off and a slope is
        meaningless.
    """
    hs = np.asarray(h_sequence, dtype=float)
    if hs.size < 3 or np.any(np.diff(hs) >= 0):
        raise ValueError("h_sequence must be strictly decreasing with >= 3 entries")
    if isinstance(operator, str):
        operator = DERIVATIVE_OPERATORS[operator][1]
    errors = []
    for h in hs:
        n = int(round(length / h))
        grid = Grid1D.periodic(x_min, length, n)
        exact = derivative(grid.x)
        err = np.max(np.abs(operator(func(grid.x), grid.h) - exact))
        if err < 100 * np.finfo(float).eps * max(1.0, np.max(np.abs(exact))):
            raise DegenerateSample(f"error {err:.3g} at h={h:g} is at round-off")
        errors.append(err)
    return convergence_slope(hs, errors)


def l2_error(state, exact):
    """Discrete L2 norm ``sqrt(h * sum (u_i - u(x_i, t))^2)``."""
    diff = state.values - exact(state.grid.x, state.time)
    if not np.all(np.isfinite(diff)):
        return float("inf")
    return float(np.sqrt(state.grid.h * np.sum(diff * diff)))
