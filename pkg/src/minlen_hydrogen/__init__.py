"""Exact and cross-validated solution of the 1D hydrogen atom with a minimal length.

The deformed algebra ``[X, P] = i (1 + beta P^2)`` is realized on momentum
space as ``X = i d/dp``, ``P = tan(sqrt(beta) p) / sqrt(beta)`` with
``|p| < pi / (2 sqrt(beta))``. Units: hbar = 1, 2m = 1.
"""

__version__ = "0.1.0"

from .model import EnergyLevel, Method, ModelParams, MomentumGrid, SampledWaveFunction, SpectrumTable, interval_half_width
from .numerics import momentum_grid
from .spectrum import (
    energy_closed_form,
    energy_perturbative,
    energy_root_found,
    energy_single_valued,
    m_of_n,
    moment_p4_cutoff,
)
from .semiclassical import action_integral, energy_semiclassical
from .wavefunction import EigenfunctionContext, eigen_grid, eval_phi

__all__ = [
    "EigenfunctionContext",
    "EnergyLevel",
    "Method",
    "ModelParams",
    "MomentumGrid",
    "SampledWaveFunction",
    "SpectrumTable",
    "action_integral",
    "eigen_grid",
    "energy_closed_form",
    "energy_perturbative",
    "energy_root_found",
    "energy_semiclassical",
    "energy_single_valued",
    "eval_phi",
    "interval_half_width",
    "m_of_n",
    "moment_p4_cutoff",
    "momentum_grid",
]
