"""Position eigenfunctions and the formal coordinate-space transform.

``eta(x)`` is built from position eigenstates, which have zero position
uncertainty and are therefore not physical states; ``eta`` is an
intermediate object, not the physical wave function. The physical
position-like profile is the quasiposition function in
:mod:`minlen_hydrogen.localization`.
"""

from __future__ import annotations

import math

import numpy as np

from .model import MomentumGrid, ModelParams
from .localization import default_xi_samples, transform_samples
from .wavefunction import EigenfunctionContext, eval_phi, _check_domain


def position_eigenfunction(params: ModelParams, x: float, p):
    """``u_x(p) = sqrt(sqrt(beta)/pi) exp(-i p x)``."""
    p = _check_domain(params, p)
    out = math.sqrt(params.sqrt_beta / math.pi) * np.exp(-1j * p * x)
    return complex(out) if out.ndim == 0 else out


def coordinate_transform(ctx: EigenfunctionContext, x, grid: MomentumGrid):
    """``eta(x) = sqrt(sqrt(beta)/pi) int exp(i p x) phi(p) dp``."""
    grid.check_beta(ctx.params.beta)
    out = transform_samples(eval_phi(ctx, grid.nodes), grid, x, window=False)
    return complex(out[0]) if np.ndim(x) == 0 else out


def default_x_samples(alpha: float, n: int, count: int = 513) -> np.ndarray:
    # shared with the quasiposition sampling so profiles line up
    return default_xi_samples(alpha, n, count)


def dirichlet_check(
    ctx: EigenfunctionContext, grid: MomentumGrid, x_samples: np.ndarray | None = None
) -> float:
    """``|eta(0)| / max |eta(x)|``; vanishes on the spectrum."""
    if x_samples is None:
        x_samples = default_x_samples(ctx.params.alpha, ctx.level.n)
    eta = coordinate_transform(ctx, x_samples, grid)
    at0 = abs(coordinate_transform(ctx, 0.0, grid))
    return at0 / max(np.max(np.abs(eta)), at0)
