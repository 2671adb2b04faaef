"""Jet-space coordinates and total derivatives for one unknown ``u(x, t)``.

A *jet-function* is a sympy expression in the coordinates returned by
:func:`u` (``u_{i,j}`` is ``d^{i+j} u / dx^i dt^j``), the base coordinates
:data:`x`, :data:`t` and the parameters :data:`h`, :data:`tau`, :data:`nu`.
Mixed partials are stored by derivative *counts*, so permuted multi-indices
share a slot automatically. Parameters are constants for total
differentiation.

Numerical evaluation goes through :class:`JetPoint` (one point) or a mapping
of coordinate symbols to arrays (a batch of points).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Mapping, Tuple

import numpy as np
import sympy as sp

x, t = sp.symbols("x t", real=True)
h, tau, nu = sp.symbols("h tau nu", real=True)
PARAMETERS = (h, tau, nu)

_DIRECTIONS = {"x": 0, "t": 1, x: 0, t: 1}


class InsufficientJetOrder(KeyError):
    pass


@lru_cache(maxsize=None)
def u(i=0, j=0):
    """Jet coordinate ``d^{i+j} u / dx^i dt^j``."""
    if i < 0 or j < 0:
        raise ValueError("derivative counts must be non-negative")
    return sp.Symbol(f"u_{i}_{j}", real=True)


U = u(0, 0)


def index_of(sym):
    """``(i, j)`` for a jet coordinate symbol, ``None`` otherwise."""
    name = sym.name
    if not name.startswith("u_"):
        return None
    parts = name.split("_")
    if len(parts) != 3:
        return None
    return int(parts[1]), int(parts[2])


def jet_coordinates(expr):
    """Derivative coordinates ``{(i, j): symbol}`` that ``expr`` depends on."""
    out = {}
    for s in expr.free_symbols:
        idx = index_of(s)
        if idx is not None:
            out[idx] = s
    return out


def order(expr):
    """Highest derivative order appearing in ``expr`` (0 if none)."""
    return max((i + j for i, j in jet_coordinates(expr)), default=0)


def D(expr, direction):
    """Symbolic total derivative ``D_x`` or ``D_t``.

    ``D_k F = dF/dk + sum_J u_{J+k} dF/du_J`` over every jet coordinate ``J``
    that ``F`` depends on.
    """
    k = _DIRECTIONS[direction]
    base = (x, t)[k]
    out = sp.diff(expr, base)
    for (i, j), sym in jet_coordinates(expr).items():
        nxt = u(i + 1, j) if k == 0 else u(i, j + 1)
        out += nxt * sp.diff(expr, sym)
    return out


def D_power(expr, direction, n):
    for _ in range(n):
        expr = D(expr, direction)
    return expr


@dataclass
class JetPoint:
    """Numerical point of jet space.

    ``derivs[(i, j)]`` holds ``d^{i+j} u / dx^i dt^j``; ``(0, 0)`` is ``u``.
    """

    x: float
    t: float
    derivs: Dict[Tuple[int, int], float] = field(default_factory=dict)
    h: float | None = None
    tau: float | None = None
    nu: float | None = None

    @property
    def u(self):
        return self.derivs[(0, 0)]

    @property
    def max_order(self):
        return max((i + j for i, j in self.derivs), default=0)

    def __getitem__(self, idx):
        return self.derivs[idx]

    def substitutions(self):
        out = {x: self.x, t: self.t}
        for (i, j), v in self.derivs.items():
            out[u(i, j)] = v
        for sym, v in zip(PARAMETERS, (self.h, self.tau, self.nu)):
            if v is not None:
                out[sym] = v
        return out

    @classmethod
    def from_solution(cls, solution, x0, t0, max_order, **params):
        """Jet of a closed-form solution (see :mod:`lieburgers.exact`)."""
        derivs = {(i, j): float(solution.derivative(i, j)(x0, t0))
                  for i in range(max_order + 1)
                  for j in range(max_order + 1 - i)}
        return cls(x0, t0, derivs, **params)


def evaluate(expr, point):
    """Evaluate a jet-function at a :class:`JetPoint` or a batch mapping.

    A batch is a mapping from coordinate symbols to equal-length arrays.
    """
    if isinstance(point, JetPoint):
        subs = point.substitutions()
    else:
        subs = dict(point)
    missing = [s for s in expr.free_symbols if s not in subs]
    if missing:
        names = ", ".join(sorted(s.name for s in missing))
        raise InsufficientJetOrder(f"jet lacks coordinates: {names}")
    syms = sorted(expr.free_symbols, key=lambda s: s.name)
    f = _compile(expr, tuple(syms))
    out = f(*[subs[s] for s in syms])
    if isinstance(point, JetPoint):
        return float(out)
    size = max((np.size(v) for v in subs.values()), default=1)
    return np.asarray(out, dtype=float) * np.ones(size)


@lru_cache(maxsize=4096)
def _compile(expr, syms):
    return sp.lambdify(syms, expr, "numpy")


def total_derivative(expr, point, direction):
    """Numerical ``D_k expr`` at a jet point.

    Raises :class:`InsufficientJetOrder` if the point lacks a coordinate one
    order above what ``expr`` uses.
    """
    return evaluate(D(expr, direction), point)
