"""Maximal-localization states and the quasiposition transform."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, MomentumGrid, interval_half_width
from .numerics import grid_derivative, grid_fourier, grid_integral, momentum_grid
from .wavefunction import EigenfunctionContext, eval_phi

# Taylor coefficients of the overlap in k = d/sqrt(beta) about k = 0 and k = 2
_PI2 = math.pi**2
_TAYLOR_0 = (1.0, 0.0, 0.25 - _PI2 / 24.0, 0.0)
_TAYLOR_2 = (0.5, -3.0 / 8.0, 7.0 / 32.0 - _PI2 / 48.0, -15.0 / 128.0 + _PI2 / 64.0)
SINGULAR_GUARD = 1e-4


def ml_normalization(params: ModelParams) -> float:
    return math.sqrt(2.0 * params.sqrt_beta / math.pi)


@dataclass(frozen=True)
class MLState:
    """Absolutely maximally localized state centred at quasiposition ``xi``."""

    params: ModelParams
    xi: float
    normalization_N: float = field(init=False)

    def __post_init__(self) -> None:
        if self.params.beta <= 0:
            raise ValueError("maximal localization states require beta > 0")
        object.__setattr__(self, "normalization_N", ml_normalization(self.params))


def ml_eval(state: MLState, p):
    """``N cos(sqrt(beta) p) exp(-i p xi)``."""
    p = np.asarray(p, dtype=float)
    out = state.normalization_N * np.cos(state.params.sqrt_beta * p) * np.exp(-1j * p * state.xi)
    return complex(out) if out.ndim == 0 else out


def ml_grid(params: ModelParams, node_count: int = 256) -> MomentumGrid:
    # ML profiles are entire functions on the interval; uniform panels suffice
    return momentum_grid(params.beta, node_count, scale=interval_half_width(params))


def ml_moments(state: MLState, grid: MomentumGrid | None = None) -> tuple[float, float]:
    """``(<X>, Delta X)`` by quadrature with ``X = i d/dp`` applied spectrally."""
    grid = grid or ml_grid(state.params)
    grid.check_beta(state.params.beta)
    phi = ml_eval(state, grid.nodes)
    x_phi = 1j * grid_derivative(phi, grid)
    norm = grid_integral(np.abs(phi) ** 2, grid).real
    mean = grid_integral(np.conj(phi) * x_phi, grid).real / norm
    # X is symmetric on states vanishing at the ends: <X^2> = ||X phi||^2
    second = grid_integral(np.abs(x_phi) ** 2, grid).real / norm
    return mean, math.sqrt(max(second - mean * mean, 0.0))


def _taylor(coeffs, delta):
    return coeffs[0] + delta * (coeffs[1] + delta * (coeffs[2] + delta * coeffs[3]))


def ml_overlap(params: ModelParams, xi: float, xi_prime: float) -> float:
    """``<phi_xi'|phi_xi> = (8 beta^{3/2}/pi) sin(pi d/(2 sqrt(beta))) / (4 beta d - d^3)``.

    ``d = xi - xi'``. Removable singularities at ``d = 0`` (value 1) and
    ``d = +-2 sqrt(beta)`` (value 1/2) are evaluated by Taylor series.
    """
    if params.beta <= 0:
        raise ValueError("overlap of maximal localization states requires beta > 0")
    sb = params.sqrt_beta
    k = (xi - xi_prime) / sb
    if abs(k) < SINGULAR_GUARD:
        return _taylor(_TAYLOR_0, k)
    if abs(abs(k) - 2.0) < SINGULAR_GUARD:
        return _taylor(_TAYLOR_2, abs(k) - 2.0)
    d = xi - xi_prime
    return 8.0 * params.beta**1.5 / math.pi * math.sin(math.pi * k / 2.0) / (4.0 * params.beta * d - d**3)


def ml_overlap_quadrature(params: ModelParams, xi: float, xi_prime: float, grid: MomentumGrid | None = None) -> complex:
    """Defining integral ``N^2 int cos^2(sqrt(beta) p) exp(-i p d) dp``."""
    grid = grid or ml_grid(params, 512)
    a = ml_eval(MLState(params, xi_prime), grid.nodes)
    b = ml_eval(MLState(params, xi), grid.nodes)
    return grid_integral(np.conj(a) * b, grid)


def default_xi_samples(alpha: float, n: int, count: int = 513) -> np.ndarray:
    half = 20.0 * n * n / alpha
    return np.linspace(-half, half, count)


def transform_samples(values: np.ndarray, grid: MomentumGrid, xi, window: bool = True) -> np.ndarray:
    """``N int [cos(sqrt(beta) p)] exp(i p xi) f(p) dp`` for sampled ``f``.

    With ``window=False`` the cosine is dropped and the prefactor becomes
    ``sqrt(sqrt(beta)/pi)``, which is the coordinate-space transform.
    """
    sb = math.sqrt(grid.beta)
    p = grid.nodes
    if window:
        pref = math.sqrt(2.0 * sb / math.pi)
        f = np.cos(sb * p) * np.asarray(values)
    else:
        pref = math.sqrt(sb / math.pi)
        f = np.asarray(values, dtype=complex)
    return pref * grid_fourier(f, grid, xi)


def quasiposition_transform(ctx: EigenfunctionContext, xi, grid: MomentumGrid):
    """Quasiposition wave function ``psi(xi)`` of an eigenfunction."""
    grid.check_beta(ctx.params.beta)
    out = transform_samples(eval_phi(ctx, grid.nodes), grid, xi, window=True)
    return complex(out[0]) if np.ndim(xi) == 0 else out


def quasiposition_origin_ratio(
    ctx: EigenfunctionContext, grid: MomentumGrid, xi_samples: np.ndarray | None = None
) -> float:
    """``|psi(0)| / max |psi(xi)|`` over the sampling (which must contain 0)."""
    if xi_samples is None:
        xi_samples = default_xi_samples(ctx.params.alpha, ctx.level.n)
    psi = quasiposition_transform(ctx, xi_samples, grid)
    at0 = abs(quasiposition_transform(ctx, 0.0, grid))
    return at0 / max(np.max(np.abs(psi)), at0)

