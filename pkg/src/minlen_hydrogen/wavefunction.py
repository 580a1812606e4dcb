"""Momentum-space eigenfunctions and their consistency conditions.

In the representation ``X = i d/dp``, ``P = tan(sqrt(beta) p)/sqrt(beta)``
on ``|p| < L = pi / (2 sqrt(beta))``, the eigenfunction at binding ``eps``
has modulus ``A beta eps / (tan^2 + beta eps)`` and a phase whose
derivative is ``-alpha beta / (tan^2 + beta eps)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    AbscissaKind,
    EnergyLevel,
    Method,
    MomentumGrid,
    ModelParams,
    SampledWaveFunction,
    interval_half_width,
)
from .numerics import (
    DEFAULT_NODES,
    derivative,
    grid_cumulative,
    grid_derivative,
    grid_integral,
    momentum_grid,
)
from .spectrum import energy_closed_form, hermiticity_phase


def normalization(params: ModelParams, eps: float) -> float:
    s = math.sqrt(params.beta * eps)
    return math.sqrt(2.0 / math.pi) * eps**-0.25 * (1.0 + s) / math.sqrt(1.0 + 2.0 * s)


@dataclass(frozen=True)
class EigenfunctionContext:
    """Eigenfunction data at a given binding.

    ``level`` need not be on the spectrum: off-spectrum contexts are how the
    Hermiticity and Dirichlet conditions are shown to select the levels.
    """

    params: ModelParams
    level: EnergyLevel
    A: float
    c: complex

    @classmethod
    def at(cls, params: ModelParams, eps: float, n: int = 1) -> "EigenfunctionContext":
        if params.beta <= 0:
            raise ValueError("momentum-space eigenfunctions require beta > 0")
        if abs(1.0 - params.beta * eps) < 1e-12:
            raise ValueError("beta*eps = 1 is a removable singularity of the phase; not supported")
        level = EnergyLevel(n, eps, Method.CLOSED_FORM)
        A = normalization(params, eps)
        return cls(params, level, A, _constant_c(params, eps, A))

    @classmethod
    def for_level(cls, params: ModelParams, n: int) -> "EigenfunctionContext":
        return cls.at(params, energy_closed_form(params, n).epsilon, n)

    @property
    def eps(self) -> float:
        return self.level.epsilon

    def scaled(self, factor: float) -> "EigenfunctionContext":
        return EigenfunctionContext(self.params, self.level, self.A * factor, self.c * factor)


def _constant_c(params: ModelParams, eps: float, A: float) -> complex:
    return A * eps / params.alpha * cmath.exp(1j * hermiticity_phase(params, eps))


def eigen_grid(ctx: EigenfunctionContext, node_count: int = DEFAULT_NODES) -> MomentumGrid:
    """Grid graded down to the eigenfunction's width ``~ sqrt(eps)``."""
    half = interval_half_width(ctx.params)
    return momentum_grid(ctx.params.beta, node_count, scale=min(0.25 * math.sqrt(ctx.eps), half))


def _check_domain(params: ModelParams, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(np.abs(p) >= interval_half_width(params)):
        raise ValueError("momentum outside the open interval (-pi/(2 sqrt(beta)), pi/(2 sqrt(beta)))")
    return p


def _modulus(ctx: EigenfunctionContext, p: np.ndarray) -> np.ndarray:
    # equals 2 beta eps cos^2 / (1 + beta eps - (1 - beta eps) cos 2x), without the
    # cancellation that form suffers near p = 0 when beta*eps is small
    be = ctx.params.beta * ctx.eps
    x = ctx.params.sqrt_beta * p
    c2 = np.cos(x) ** 2
    return ctx.A * be * c2 / (np.sin(x) ** 2 + be * c2)


def phase(ctx: EigenfunctionContext, p) -> np.ndarray:
    """Continuous phase ``alpha/(1-beta eps) (beta p - arctan(tan(sqrt(beta) p)/sqrt(beta eps))/sqrt(eps))``."""
    beta, eps, alpha = ctx.params.beta, ctx.eps, ctx.params.alpha
    x = ctx.params.sqrt_beta * np.asarray(p, dtype=float)
    # arctan2 with cos > 0 stays on the principal branch across the interval
    at = np.arctan2(np.sin(x), math.sqrt(beta * eps) * np.cos(x))
    return alpha / (1.0 - beta * eps) * (beta * np.asarray(p) - at / math.sqrt(eps))


def eval_phi(ctx: EigenfunctionContext, p):
    p = _check_domain(ctx.params, p)
    out = _modulus(ctx, p) * np.exp(1j * phase(ctx, p))
    return complex(out) if out.ndim == 0 else out


def density(ctx: EigenfunctionContext, p):
    p = _check_domain(ctx.params, p)
    out = _modulus(ctx, p) ** 2
    return float(out) if out.ndim == 0 else out


def sample_phi(ctx: EigenfunctionContext, grid: MomentumGrid) -> SampledWaveFunction:
    grid.check_beta(ctx.params.beta)
    return SampledWaveFunction(
        AbscissaKind.MOMENTUM_P, grid.nodes, eval_phi(ctx, grid.nodes), ctx.level, ctx.A, ctx.c
    )


def constant_c(ctx: EigenfunctionContext) -> complex:
    """``c = A (eps/alpha) exp(i pi alpha / (2 sqrt(eps) (1 + sqrt(beta eps))))``."""
    return _constant_c(ctx.params, ctx.eps, ctx.A)


def constant_c_limit(ctx: EigenfunctionContext, distance: float) -> complex:
    """``(1/alpha)(tan^2/beta + eps) phi`` evaluated ``distance`` inside ``p = -L``."""
    p = -interval_half_width(ctx.params) + distance
    t = math.tan(ctx.params.sqrt_beta * p)
    return (t * t / ctx.params.beta + ctx.eps) * eval_phi(ctx, p) / ctx.params.alpha


def hermiticity_residual(ctx: EigenfunctionContext) -> float:
    """``Im c``; vanishes exactly on the quantized spectrum."""
    return constant_c(ctx).imag


def integral_condition_closed_form(ctx: EigenfunctionContext) -> float:
    return ctx.A * 2.0 * ctx.eps / ctx.params.alpha * math.sin(hermiticity_phase(ctx.params, ctx.eps))


def integral_condition(ctx: EigenfunctionContext, grid: MomentumGrid) -> complex:
    """Quadrature of ``phi`` over the full interval."""
    grid.check_beta(ctx.params.beta)
    return grid_integral(eval_phi(ctx, grid.nodes), grid)


def norm(ctx: EigenfunctionContext, grid: MomentumGrid) -> float:
    grid.check_beta(ctx.params.beta)
    return grid_integral(density(ctx, grid.nodes), grid).real


def schrodinger_residual(
    ctx: EigenfunctionContext, grid: MomentumGrid, c: complex | None = None
) -> float:
    """Sup over nodes of ``|-tan^2/beta phi - i alpha F + alpha c - eps phi|``.

    ``F`` is the running integral of ``phi`` from ``-L``. ``c`` defaults to
    the context's constant.
    """
    grid.check_beta(ctx.params.beta)
    c = ctx.c if c is None else c
    p = grid.nodes
    phi = eval_phi(ctx, p)
    running, _ = grid_cumulative(phi, grid)
    t2 = np.tan(ctx.params.sqrt_beta * p) ** 2
    alpha = ctx.params.alpha
    res = -t2 / ctx.params.beta * phi - 1j * alpha * running + alpha * c - ctx.eps * phi
    return float(np.max(np.abs(res)))


def ode_residual(ctx: EigenfunctionContext, points, h: float | None = None) -> float:
    """Sup of ``|phi' + beta (2 sec^2 tan / sqrt(beta) + i alpha)/(tan^2 + beta eps) phi|``.

    ``phi'`` is taken by Richardson-refined central differences.
    """
    beta, sb, alpha, eps = ctx.params.beta, ctx.params.sqrt_beta, ctx.params.alpha, ctx.eps
    points = _check_domain(ctx.params, points)
    if h is None:
        h = 0.05 * math.sqrt(eps)
    worst = 0.0
    for p in np.atleast_1d(points):
        step = min(h, 0.5 * (interval_half_width(ctx.params) - abs(p)))
        d = derivative(lambda q: eval_phi(ctx, q), float(p), step)
        t = math.tan(sb * p)
        coeff = beta * (2.0 * t / (math.cos(sb * p) ** 2 * sb) + 1j * alpha) / (t * t + beta * eps)
        worst = max(worst, abs(d + coeff * eval_phi(ctx, p)))
    return worst


def _inverse_x(values: np.ndarray, c: complex, grid: MomentumGrid) -> np.ndarray:
    running, _ = grid_cumulative(values, grid)
    return -1j * running + c


def _apply_x(values: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    return 1j * grid_derivative(values, grid)


def inverse_X_identities(
    phi: SampledWaveFunction, c: complex, grid: MomentumGrid
) -> tuple[float, float]:
    """Residuals of ``X (1/X) phi = phi`` and ``(1/X) X phi = phi + c``.

    ``1/X`` acts as ``-i int_{-L}^p phi + c`` and ``X`` as ``i d/dp``, both
    realized spectrally on the grid panels. The second identity presumes
    ``phi(-L) = 0``.
    """
    if not np.array_equal(phi.abscissae, grid.nodes):
        raise ValueError("sampled function is not on the supplied grid")
    v = np.asarray(phi.values)
    r1 = np.max(np.abs(_apply_x(_inverse_x(v, c, grid), grid) - v))
    r2 = np.max(np.abs(_inverse_x(_apply_x(v, grid), c, grid) - v - c))
    return float(r1), float(r2)


def inverse_X_commutator(phi: SampledWaveFunction, c: complex, grid: MomentumGrid) -> np.ndarray:
    """Pointwise ``[X, 1/X] phi``; analytically the constant ``-c``."""
    v = np.asarray(phi.values)
    return _apply_x(_inverse_x(v, c, grid), grid) - _inverse_x(_apply_x(v, grid), c, grid)


def commutator_check(
    params: ModelParams,
    testfn: Callable[[float], complex],
    p: float,
    h: float = 1e-2,
) -> float:
    """``|(XP - PX) f(p) - i (1 + beta P^2) f(p)|`` with numeric ``d/dp``.

    ``beta = 0`` uses ``P = p``.
    """
    if params.beta > 0:
        _check_domain(params, p)
        sb = params.sqrt_beta

        def P(q):
            return math.tan(sb * q) / sb
    else:
        def P(q):
            return q

    d_pf = derivative(lambda q: P(q) * testfn(q), p, h)
    d_f = derivative(testfn, p, h)
    lhs = 1j * d_pf - P(p) * 1j * d_f
    return abs(lhs - 1j * (1.0 + params.beta * P(p) ** 2) * testfn(p))
