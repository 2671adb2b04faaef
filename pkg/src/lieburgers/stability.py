"""Von Neumann analysis of the schemes linearized about a constant state ``a``.

With ``q = sin^2(theta/2)`` the one-step symbols are

* FTCS: ``1 - 4 S q - i CFL sin(theta)``
* Lax-Wendroff: ``1 - 4 (S + CFL^2/2) q + 8 S^2 q^2 - i CFL sin(theta) (1 - 4 S q)``
* Crank-Nicolson: ``(1 - 2 S q - i CFL sin/2) / (1 + 2 S q + i CFL sin/2)``
* semi-invariant with ``Omega = omega_tau / tau``:
  ``1 - 4 (S + omega_tau) q - 4/3 S q^2 + 8 S^2 q^2
  - i CFL sin(theta) (1 + 2 q / 3 - 4 S q)``
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation

from .grid import SchemeParams, delta2_k, delta4_k, delta_minus_k, delta_plus_k, \
    half_delta2_k, mu_delta3_k, mu_delta_k
from .schemes import SchemeId

N_THETA = 257
TOLERANCE = 1e-12


@dataclass(frozen=True)
class Condition:
    label: str
    value: float
    bound: float
    lower: float = -np.inf

    @property
    def passed(self):
        return bool(self.lower <= self.value <= self.bound)

    def __str__(self):
        mark = "ok" if self.passed else "VIOLATED"
        lo = "" if self.lower == -np.inf else f"{self.lower:g} <= "
        return f"{lo}{self.label} = {self.value:.6g} <= {self.bound:g}  [{mark}]"


@dataclass(frozen=True)
class StabilityReport:
    scheme_id: SchemeId
    cfl: float
    s: float
    s_star: float
    omega_tau: float
    conditions: tuple = field(default=())

    @property
    def stable(self):
        return all(c.passed for c in self.conditions)

    def __str__(self):
        head = (f"{self.scheme_id.value}: CFL={self.cfl:g} S={self.s:g} "
                f"S*={self.s_star:g}")
        if self.scheme_id is SchemeId.SEMI_INVARIANT:
            head += f" omega_tau={self.omega_tau:g}"
        lines = [head] + [f"  {c}" for c in self.conditions]
        if not self.conditions:
            lines.append("  unconditionally stable")
        lines.append("  verdict: " + ("stable" if self.stable else "unstable"))
        return "\n".join(lines)


def _numbers(params):
    if isinstance(params, SchemeParams):
        return params.cfl, params.s
    cfl, s = params
    return float(cfl), float(s)


def check_conditions(scheme, params, omega_tau=0.0):
    """Evaluate the necessary von Neumann conditions of a scheme.

    ``params`` is a :class:`SchemeParams` or a ``(CFL, S)`` pair.
    """
    scheme = SchemeId.parse(scheme)
    cfl, s = _numbers(params)
    s_star = s + cfl ** 2 / 2
    if scheme is SchemeId.FTCS:
        conds = (Condition("S", s, 0.5), Condition("CFL", cfl, 1.0),
                 Condition("CFL^2 - 2S", cfl ** 2 - 2 * s, 0.0))
    elif scheme is SchemeId.LAX_WENDROFF:
        conds = (Condition("S*", s_star, 0.5), Condition("CFL", cfl, 1.0))
    elif scheme is SchemeId.CRANK_NICOLSON:
        conds = ()
    else:
        conds = (Condition("CFL^2 - 2S - 2 omega_tau",
                           cfl ** 2 - 2 * s - 2 * omega_tau, 0.0),
                 Condition("4S/3 - 2S^2 + omega_tau",
                           4 * s / 3 - 2 * s ** 2 + omega_tau, 0.5, lower=0.0))
    return StabilityReport(scheme, cfl, s, s_star, omega_tau, conds)


def symbol(scheme, params, theta, omega_tau=0.0):
    """Complex amplification factor ``G(theta)``."""
    scheme = SchemeId.parse(scheme)
    cfl, s = _numbers(params)
    theta = np.asarray(theta, dtype=float)
    q = np.sin(theta / 2) ** 2
    sn = np.sin(theta)
    if scheme is SchemeId.FTCS:
        return 1 - 4 * s * q - 1j * cfl * sn
    if scheme is SchemeId.LAX_WENDROFF:
        return (1 - 4 * (s + cfl ** 2 / 2) * q + 8 * s ** 2 * q ** 2
                - 1j * cfl * sn * (1 - 4 * s * q))
    if scheme is SchemeId.CRANK_NICOLSON:
        half = 2 * s * q + 0.5j * cfl * sn
        return (1 - half) / (1 + half)
    return (1 - 4 * (s + omega_tau) * q - 4 / 3 * s * q ** 2 + 8 * s ** 2 * q ** 2
            - 1j * cfl * sn * (1 + 2 * q / 3 - 4 * s * q))


def amplification_factor(scheme, params, theta, omega_tau=0.0):
    """``|G(theta)|`` of the linearized scheme."""
    return np.abs(symbol(scheme, params, theta, omega_tau))


# {{{ mode-propagation oracle

def _linear_rate(scheme, p, a, h, nu, tau, omega_tau):
    """Spatial rate with ``u^2/2 -> a u`` and half-node ``u -> a``."""
    lin = a * p
    ftcs = mu_delta_k(lin) / h - nu * delta2_k(p) / h ** 2
    visc = (nu * tau / (2 * h ** 3) * a * (half_delta2_k(p, 0) - half_delta2_k(p, -1))
            - nu ** 2 * tau / (2 * h ** 4) * delta4_k(p)
            + nu * tau / (2 * h ** 3) * mu_delta3_k(lin))
    if scheme is SchemeId.LAX_WENDROFF:
        conv = a * (delta_plus_k(lin) - delta_minus_k(lin))
        return ftcs - tau / (2 * h ** 2) * conv + visc
    if scheme is SchemeId.SEMI_INVARIANT:
        om = omega_tau / tau
        return ((mu_delta_k(lin) - mu_delta3_k(lin) / 6) / h
                - nu * (delta2_k(p) - delta4_k(p) / 12) / h ** 2
                - om * (delta_plus_k(p) - delta_minus_k(p)) + visc)
    return ftcs


def mode_amplification(scheme, params, k, n=64, omega_tau=0.0, h=1.0, tau=1.0):
    """Amplification of the Fourier mode ``exp(2 pi i k j / n)`` after one
    linearized step on an ``n``-point periodic grid.

    Built directly from the difference operators (independently of
    :func:`symbol`); Crank-Nicolson is solved with a dense matrix.
    """
    scheme = SchemeId.parse(scheme)
    cfl, s = _numbers(params)
    a = cfl * h / tau
    nu = s * h ** 2 / tau
    j = np.arange(n)
    mode = np.exp(2j * np.pi * k * j / n)

    def rate(v):
        p = np.concatenate((v[-2:], v, v[:2]))
        return _linear_rate(scheme, p, a, h, nu, tau, omega_tau)

    if scheme is SchemeId.CRANK_NICOLSON:
        L = np.column_stack([rate(e) for e in np.eye(n)])
        lhs = np.eye(n) + 0.5 * tau * L
        new = np.linalg.solve(lhs, mode - 0.5 * tau * (L @ mode))
    else:
        new = mode - tau * (rate(mode.real) + 1j * rate(mode.imag))
    ratios = new / mode
    return complex(np.mean(ratios)), float(np.ptp(np.abs(ratios)))

# }}}


def omega_tau_value(rule, cfl, s):
    """``omega_tau`` for a scan cell: a number, ``"cancel"`` (``CFL^2/2``),
    or a callable ``f(cfl, s)``."""
    if callable(rule):
        return float(rule(cfl, s))
    if rule == "cancel":
        return cfl ** 2 / 2
    return float(rule)


@dataclass
class StabilityScan:
    scheme_id: SchemeId
    cfl: np.ndarray
    s: np.ndarray
    empirical: np.ndarray
    predicted: np.ndarray
    max_gain: np.ndarray

    @property
    def mismatch(self):
        return self.empirical != self.predicted

    def boundary_cells(self):
        """Cells of the predicted map with a differently classified 8-neighbour."""
        st = np.ones((3, 3), bool)
        inner = binary_dilation(self.predicted, st) & binary_dilation(~self.predicted, st)
        return inner

    def agrees_within_one_cell(self):
        return bool(np.all(~self.mismatch | self.boundary_cells()))

    def predicted_contained(self):
        """Every predicted-stable cell is empirically stable."""
        return bool(np.all(self.empirical[self.predicted]))

    def render(self):
        """Text map; rows are S (ascending downwards), columns CFL.

        ``#`` both stable, ``.`` both unstable, ``E`` only empirically stable,
        ``P`` only predicted stable.
        """
        chars = np.where(self.empirical,
                         np.where(self.predicted, "#", "E"),
                         np.where(self.predicted, "P", "."))
        return "\n".join("".join(row) for row in chars.T)


def scan_stability(scheme, cfl_values, s_values, omega_tau=0.0, n_theta=N_THETA):
    """Compare ``max |G| <= 1 + 1e-12`` against :func:`check_conditions`
    on the grid ``cfl_values x s_values``."""
    scheme = SchemeId.parse(scheme)
    cfl_values = np.asarray(cfl_values, dtype=float)
    s_values = np.asarray(s_values, dtype=float)
    if cfl_values.size < 20 or s_values.size < 20:
        raise ValueError("scan needs at least 20 samples per axis")
    theta = np.linspace(0.0, 2 * np.pi, n_theta)
    shape = (cfl_values.size, s_values.size)
    gain = np.empty(shape)
    predicted = np.empty(shape, bool)
    for i, c in enumerate(cfl_values):
        for j, s in enumerate(s_values):
            om = omega_tau_value(omega_tau, c, s)
            gain[i, j] = np.max(amplification_factor(scheme, (c, s), theta, om))
            predicted[i, j] = check_conditions(scheme, (c, s), om).stable
    return StabilityScan(scheme, cfl_values, s_values, gain <= 1 + TOLERANCE,
                         predicted, gain)
