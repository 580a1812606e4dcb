"""Bohr-Sommerfeld quantization and the zeroth-order WKB phase equation.

With ``H = tan^2(sqrt(beta) p)/beta - alpha/x`` the orbit at energy
``E = -eps`` is ``x(p) = alpha beta / (tan^2(sqrt(beta) p) + beta eps)``,
and ``oint p dx = int_{-L}^{L} x(p) dp`` over the full momentum interval.
"""

from __future__ import annotations

import math

import numpy as np

from .model import EnergyLevel, Method, ModelParams, interval_half_width
from .numerics import (
    DEFAULT_NODES,
    DEFAULT_ROOT_TOL,
    ConvergenceError,
    RootBracket,
    find_root,
    grid_integral,
    integrate,
    momentum_grid,
)
from .spectrum import undeformed_binding

ACTION_REL_TOL = 1e-12


def action_closed_form(params: ModelParams, eps: float) -> float:
    return math.pi * params.alpha / (math.sqrt(eps) + params.sqrt_beta * eps)


def _action_on_grid(params: ModelParams, eps: float, node_count: int) -> float:
    half = interval_half_width(params)
    grid = momentum_grid(params.beta, node_count, scale=min(0.25 * math.sqrt(eps), half))
    t = np.tan(params.sqrt_beta * grid.nodes)
    return grid_integral(params.alpha * params.beta / (t * t + params.beta * eps), grid).real


def action_integral(
    params: ModelParams,
    eps: float,
    node_count: int = DEFAULT_NODES,
    rel_tol: float = ACTION_REL_TOL,
) -> float:
    """``oint p dx`` by quadrature of ``x(p)`` over the momentum interval.

    The integrand is bounded by ``alpha/eps`` and vanishes at the interval
    ends. ``beta = 0`` integrates ``alpha/(p^2 + eps)`` over the real line.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if params.beta == 0:
        return integrate(lambda p: params.alpha / (p * p + eps), -math.inf, math.inf).real
    coarse = _action_on_grid(params, eps, node_count)
    fine = _action_on_grid(params, eps, 2 * node_count)
    if abs(fine - coarse) > rel_tol * abs(fine):
        raise ConvergenceError("action integral not converged", (coarse, fine))
    return fine


def energy_semiclassical(
    params: ModelParams,
    n: int,
    abs_tol: float = DEFAULT_ROOT_TOL,
    rel_tol: float = ACTION_REL_TOL,
) -> EnergyLevel:
    """Level from ``oint p dx = 2 n pi`` solved by root finding on the action."""
    if int(n) != n or n < 1:
        raise ValueError(f"quantum number must be a positive integer, got {n!r}")
    eps0 = undeformed_binding(params.alpha, n)
    # sqrt(eps)(1 + sqrt(beta eps)) = alpha/(2n) bounds eps from both sides
    lo = 0.5 * eps0 / (1.0 + params.sqrt_beta * params.alpha / (2.0 * n)) ** 2
    hi = eps0 * (1.0 + 1e-6)

    def g(eps: float) -> float:
        return action_integral(params, eps, rel_tol=rel_tol) / (2.0 * math.pi) - n

    try:
        bracket = RootBracket.around(g, lo, hi)
    except ValueError as exc:
        raise ValueError(f"semiclassical bracket failed for {params}, n={n}: {exc}") from exc
    return EnergyLevel(n, find_root(g, bracket, abs_tol=abs_tol * eps0), Method.SEMICLASSICAL)


def classical_turning_curve(params: ModelParams, E: float, p: float) -> float:
    """Orbit position ``x(p) = alpha beta / (tan^2(sqrt(beta) p) - beta E)``."""
    if params.beta > 0:
        t = math.tan(params.sqrt_beta * p)
        denom = t * t / params.beta - E
    else:
        denom = p * p - E
    if abs(denom) <= 1e-14 * max(1.0, abs(E)):
        # only possible for E > 0, where tan^2(sqrt(beta) p) = beta E
        if params.beta > 0:
            p_turn = math.atan(math.sqrt(params.beta * E)) / params.sqrt_beta
        else:
            p_turn = math.sqrt(E)
        raise ValueError(f"orbit runs to x = infinity at turning momentum p = +-{p_turn!r}")
    return params.alpha / denom


def wkb_momentum_squared(params: ModelParams, E: float, x: float) -> float:
    """Positive root of ``y + (2 beta/3) y^2 = E + alpha/x`` for ``y = Phi_0'^2``."""
    kinetic = E + params.alpha / x
    if not (x > 0 and kinetic > 0):
        raise ValueError(f"x={x!r} is classically forbidden at E={E!r}")
    if params.beta == 0:
        return kinetic
    # (-3 + 3 sqrt(1 + 8 beta K/3)) / (4 beta), rationalized against cancellation
    return 2.0 * kinetic / (1.0 + math.sqrt(1.0 + 8.0 * params.beta * kinetic / 3.0))


def wkb_phase_residual(params: ModelParams, E: float, x: float) -> float:
    """``|Phi_0'^2 + (2 beta/3) Phi_0'^4 - (E + alpha/x)|``."""
    y = wkb_momentum_squared(params, E, x)
    return abs(y + 2.0 * params.beta / 3.0 * y * y - (E + params.alpha / x))
