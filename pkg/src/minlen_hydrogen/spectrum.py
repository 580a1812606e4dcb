"""Bound-state spectrum by several independent routes.

The quantization condition from Hermiticity of the Hamiltonian reads
``alpha / (2 (sqrt(eps) + sqrt(beta) eps)) = n``. It is a quadratic in
``sqrt(eps)``, solved in closed form by :func:`energy_closed_form` and by
bracketed root finding in :func:`energy_root_found`.
"""

from __future__ import annotations

import enum
import math

from .model import EnergyLevel, Method, ModelParams
from .numerics import DEFAULT_ROOT_TOL, RootBracket, find_root, integrate


class PerturbativeOrder(str, enum.Enum):
    SQRT_BETA = "sqrt_beta"
    BETA = "beta"


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"quantum number must be a positive integer, got {n!r}")
    return int(n)


def undeformed_binding(alpha: float, n: int) -> float:
    return alpha * alpha / (4.0 * n * n)


def closed_form_binding(params: ModelParams, n: int) -> float:
    n = _check_n(n)
    if params.beta == 0:
        return undeformed_binding(params.alpha, n)
    # (sqrt(1+x) - 1) rewritten as x / (sqrt(1+x) + 1) to avoid cancellation
    x = 2.0 * params.alpha * params.sqrt_beta / n
    root_eps = (params.alpha / n) / (1.0 + math.sqrt(1.0 + x))
    return root_eps * root_eps


def energy_closed_form(params: ModelParams, n: int) -> EnergyLevel:
    """Exact level ``E_n = -(1/(4 beta)) (1 - sqrt(1 + 2 alpha sqrt(beta)/n))**2``."""
    return EnergyLevel(n, closed_form_binding(params, n), Method.CLOSED_FORM)


def quantization_residual(params: ModelParams, eps: float, n: float) -> float:
    """``alpha / (2 (sqrt(eps) + sqrt(beta) eps)) - n``; decreasing in ``eps``."""
    return params.alpha / (2.0 * (math.sqrt(eps) + params.sqrt_beta * eps)) - n


def hermiticity_phase(params: ModelParams, eps: float) -> float:
    """Phase ``pi alpha / (2 sqrt(eps) (1 + sqrt(beta eps)))`` of the constant c."""
    return math.pi * params.alpha / (2.0 * math.sqrt(eps) * (1.0 + math.sqrt(params.beta * eps)))


def energy_root_found(
    params: ModelParams, n: int, abs_tol: float = DEFAULT_ROOT_TOL
) -> EnergyLevel:
    n = _check_n(n)
    if params.beta <= 0:
        raise ValueError("root-found route requires beta > 0")
    eps_closed = closed_form_binding(params, n)
    hi = undeformed_binding(params.alpha, n) * (1.0 + 1e-6)

    def g(eps: float) -> float:
        return quantization_residual(params, eps, n)

    try:
        bracket = RootBracket.around(g, 0.5 * eps_closed, hi)
    except ValueError as exc:
        raise ValueError(f"inconsistent parameters {params}, n={n}: {exc}") from exc
    # rescale so the absolute tolerance is relative to the level
    eps = find_root(g, bracket, abs_tol=abs_tol * eps_closed)
    return EnergyLevel(n, eps, Method.ROOT_FOUND)


def single_valued_residual(params: ModelParams, eps: float, m: float) -> float:
    return params.alpha / (2.0 * math.sqrt(eps) * (1.0 - params.beta * eps)) - m


def energy_single_valued(
    params: ModelParams, m: int, abs_tol: float = DEFAULT_ROOT_TOL
) -> EnergyLevel:
    """Level from ``alpha / (2 sqrt(eps) (1 - beta eps)) = m``.

    In ``y = sqrt(eps)`` the condition is ``y - beta y**3 = alpha/(2m)``.
    The branch continuous from ``beta = 0`` is the smallest positive root,
    which lives on ``0 < y < 1/sqrt(3 beta)`` where the left side increases.
    """
    m = _check_n(m)
    if params.beta == 0:
        return EnergyLevel(m, undeformed_binding(params.alpha, m), Method.SINGLE_VALUED)
    target = params.alpha / (2.0 * m)
    y_peak = 1.0 / math.sqrt(3.0 * params.beta)
    if target >= y_peak - params.beta * y_peak**3:
        raise ValueError(
            f"single-valued branch absent for alpha={params.alpha}, beta={params.beta}, m={m}"
        )

    def g(y: float) -> float:
        return y - params.beta * y**3 - target

    y = find_root(g, RootBracket.around(g, 0.0, y_peak), abs_tol=abs_tol * target)
    return EnergyLevel(m, y * y, Method.SINGLE_VALUED)


def m_of_n(params: ModelParams, n: int) -> float:
    """Non-integer single-valuedness label ``n / (1 - sqrt(beta eps_n))``."""
    eps = closed_form_binding(params, n)
    s = math.sqrt(params.beta * eps)
    if s >= 1.0:
        raise ValueError(f"beta*eps_n = {s * s} >= 1; m(n) undefined")
    return n / (1.0 - s)


def energy_perturbative(
    params: ModelParams, n: int, order: PerturbativeOrder | str = PerturbativeOrder.BETA
) -> float:
    """Small-beta expansion of ``E_n`` through ``sqrt(beta)`` or ``beta``."""
    n = _check_n(n)
    order = PerturbativeOrder(order)
    a = params.alpha
    energy = -a**2 / (4 * n**2) + a**3 / (4 * n**3) * params.sqrt_beta
    if order is PerturbativeOrder.BETA:
        energy -= 5 * a**4 / (16 * n**4) * params.beta
    return energy


def perturbative_level(params: ModelParams, n: int) -> EnergyLevel:
    return EnergyLevel(n, -energy_perturbative(params, n, PerturbativeOrder.BETA), Method.PERTURBATIVE)


def undeformed_density(p, eps: float):
    """``|phi_n^0(p)|^2 = 2 eps^{3/2} / (pi (p^2 + eps)^2)``."""
    return 2.0 * eps**1.5 / (math.pi * (p * p + eps) ** 2)


def moment_p4_cutoff(params: ModelParams, n: int, cutoff: float) -> float:
    """``int_{-cutoff}^{cutoff} p^4 |phi_n^0|^2 dp``; grows linearly with the cutoff."""
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    eps = undeformed_binding(params.alpha, _check_n(n))
    w = math.sqrt(eps)

    def f(p):
        return p**4 * undeformed_density(p, eps)

    # split at the density width so the peak region gets its own panels
    inner = min(cutoff, 10.0 * w)
    total = 2.0 * integrate(f, 0.0, inner).real
    if cutoff > inner:
        total += 2.0 * integrate(f, inner, cutoff).real
    return total
