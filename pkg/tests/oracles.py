"""Direct-summation transcriptions of the scheme formulas.

Each function loops over nodes of a periodic array with explicit index
arithmetic and shares no code with the library, so it serves as an
independent oracle for the vectorised steppers.
"""

import numpy as np


def _at(u, i):
    return u[i % len(u)]


def _w(u, i):
    return 0.5 * _at(u, i) ** 2


def _uh(u, i):
    """u at i + 1/2."""
    return 0.5 * (_at(u, i) + _at(u, i + 1))


def _d2(f, u, i):
    return f(u, i + 1) - 2 * f(u, i) + f(u, i - 1)


def _d2u(u, i):
    return _at(u, i + 1) - 2 * _at(u, i) + _at(u, i - 1)


def _d2u_half(u, i):
    """delta^2 u at i + 1/2 (mean of the two neighbouring nodes)."""
    return 0.5 * (_d2u(u, i) + _d2u(u, i + 1))


def _d4u(u, i):
    return (_at(u, i + 2) - 4 * _at(u, i + 1) + 6 * _at(u, i)
            - 4 * _at(u, i - 1) + _at(u, i - 2))


def _mu_d3w(u, i):
    return 0.5 * (_w(u, i + 2) - 2 * _w(u, i + 1) + 2 * _w(u, i - 1) - _w(u, i - 2))


def _ftcs_terms(u, i, h, nu):
    conv = (_w(u, i + 1) - _w(u, i - 1)) / (2 * h)
    visc = nu * _d2u(u, i) / h ** 2
    return conv - visc


def _nu_tau_terms(u, i, h, nu, tau):
    pair = _uh(u, i) * _d2u_half(u, i) - _uh(u, i - 1) * _d2u_half(u, i - 1)
    return (nu * tau / (2 * h ** 3) * pair
            - nu ** 2 * tau / (2 * h ** 4) * _d4u(u, i)
            + nu * tau / (2 * h ** 3) * _mu_d3w(u, i))


def ftcs(u, h, nu, tau):
    return np.array([u[i] - tau * _ftcs_terms(u, i, h, nu) for i in range(len(u))])


def lax_wendroff(u, h, nu, tau):
    out = []
    for i in range(len(u)):
        conv = (_uh(u, i) * (_w(u, i + 1) - _w(u, i))
                - _uh(u, i - 1) * (_w(u, i) - _w(u, i - 1)))
        a_term = -tau / (2 * h ** 2) * conv + _nu_tau_terms(u, i, h, nu, tau)
        out.append(u[i] - tau * (_ftcs_terms(u, i, h, nu) + a_term))
    return np.array(out)


def semi_invariant(u, h, nu, tau):
    """Semi-invariant step with Omega_{i+1/2} = tau u_{i+1/2}^2 / (2 h^2)."""
    out = []
    for i in range(len(u)):
        conv = ((_w(u, i + 1) - _w(u, i - 1)) / 2 - _mu_d3w(u, i) / 6) / h
        visc = nu * (_d2u(u, i) - _d4u(u, i) / 12) / h ** 2
        om_p = tau * _uh(u, i) ** 2 / (2 * h ** 2)
        om_m = tau * _uh(u, i - 1) ** 2 / (2 * h ** 2)
        art = om_p * (_at(u, i + 1) - _at(u, i)) - om_m * (_at(u, i) - _at(u, i - 1))
        rate = conv - visc - art + _nu_tau_terms(u, i, h, nu, tau)
        out.append(u[i] - tau * rate)
    return np.array(out)


def crank_nicolson_residual(old, new, h, nu, tau):
    """Per-node residual of the trapezoidal scheme, scaled by ``tau``."""
    n = len(old)
    res = []
    for i in range(n):
        r = new[i] - old[i]
        r += tau / 2 * ((_w(new, i + 1) - _w(new, i - 1)) / (2 * h)
                        + (_w(old, i + 1) - _w(old, i - 1)) / (2 * h))
        r -= tau / 2 * nu * (_d2u(new, i) + _d2u(old, i)) / h ** 2
        res.append(r)
    return np.array(res)


def crank_nicolson_newton(old, h, nu, tau, iterations=30):
    """Solve the trapezoidal system by Newton's method with a dense,
    loop-assembled Jacobian."""
    n = len(old)
    new = np.array(old, dtype=float)
    for _ in range(iterations):
        res = crank_nicolson_residual(old, new, h, nu, tau)
        jac = np.zeros((n, n))
        for i in range(n):
            jac[i, i] += 1 + tau * nu / h ** 2
            for j, sign in (((i + 1) % n, 1), ((i - 1) % n, -1)):
                jac[i, j] += sign * tau / (4 * h) * new[j] - tau * nu / (2 * h ** 2)
        step = np.linalg.solve(jac, res)
        new = new - step
        if np.max(np.abs(step)) == 0:
            break
    return new
