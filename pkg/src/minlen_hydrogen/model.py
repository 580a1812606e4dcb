"""Parameter and result types shared by the computational modules.

Units are fixed to hbar = 1 and 2m = 1 throughout. Energies are reported as
``E = -epsilon`` with ``epsilon > 0`` the binding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    ROOT_FOUND = "root_found"
    SEMICLASSICAL = "semiclassical"
    SINGLE_VALUED = "single_valued"
    PERTURBATIVE = "perturbative"


class AbscissaKind(str, enum.Enum):
    MOMENTUM_P = "momentum_p"
    QUASIPOSITION_XI = "quasiposition_xi"
    COORDINATE_X = "coordinate_x"


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the deformed 1D Coulomb problem.

    Attributes:
        alpha: Coulomb coupling, ``V(x) = -alpha / x``.
        beta: Deformation parameter of ``[X, P] = i(1 + beta P^2)``.
            ``beta == 0`` is ordinary quantum mechanics.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be non-negative and finite, got {self.beta!r}")

    @property
    def sqrt_beta(self) -> float:
        return math.sqrt(self.beta)

    @property
    def deformed(self) -> bool:
        return self.beta > 0

    def to_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta}


def interval_half_width(params: ModelParams | float) -> float:
    """Half width ``pi / (2 sqrt(beta))`` of the momentum domain."""
    beta = params.beta if isinstance(params, ModelParams) else float(params)
    if beta <= 0:
        raise ValueError("undeformed limit has unbounded momentum domain")
    return math.pi / (2.0 * math.sqrt(beta))


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    epsilon: float
    method: Method = Method.CLOSED_FORM
    energy: float = field(init=False)

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"quantum number must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"binding epsilon must be positive (bound state), got {self.epsilon!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "energy", -self.epsilon)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "epsilon": self.epsilon, "energy": self.energy}


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Composite Gauss-Legendre rule on the open interval ``(-L, L)``.

    The interval is split into panels (``edges``), each carrying a Gauss
    rule of order ``orders[k]``. Nodes are strictly interior and symmetric
    about ``p = 0``; weights sum to ``2 L``.
    """

    beta: float
    nodes: np.ndarray
    weights: np.ndarray
    edges: np.ndarray
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        for name in ("nodes", "weights", "edges"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.beta <= 0:
            raise ValueError("momentum grid requires beta > 0")
        if sum(self.orders) != self.nodes.size or self.weights.size != self.nodes.size:
            raise ValueError("panel orders inconsistent with node count")
        half = interval_half_width(self.beta)
        if not (np.all(np.abs(self.nodes) < half) and np.all(np.diff(self.nodes) > 0)):
            raise ValueError("nodes must be strictly increasing and interior")

    @property
    def node_count(self) -> int:
        return int(self.nodes.size)

    @property
    def half_width(self) -> float:
        return interval_half_width(self.beta)

    def panel_slices(self) -> list[slice]:
        out, start = [], 0
        for q in self.orders:
            out.append(slice(start, start + q))
            start += q
        return out

    def check_beta(self, beta: float) -> None:
        if not math.isclose(self.beta, beta, rel_tol=1e-14, abs_tol=0.0):
            raise ValueError(f"grid built for beta={self.beta!r} does not match beta={beta!r}")


@dataclass(frozen=True, eq=False)
class SampledWaveFunction:
    abscissa_kind: AbscissaKind
    abscissae: np.ndarray
    values: np.ndarray
    level: EnergyLevel | None = None
    normalization_A: float = float("nan")
    constant_c: complex = complex("nan")

    def __post_init__(self) -> None:
        x = np.asarray(self.abscissae, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError("abscissae and values must be 1-D arrays of equal length")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise ValueError("abscissae must be strictly increasing")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "abscissa_kind", AbscissaKind(self.abscissa_kind))

    def with_values(self, values: np.ndarray) -> "SampledWaveFunction":
        return SampledWaveFunction(
            self.abscissa_kind, self.abscissae, values, self.level,
            self.normalization_A, self.constant_c,
        )


@dataclass(frozen=True)
class SpectrumTable:
    params: ModelParams
    levels: tuple[EnergyLevel, ...]
    produced_by: Method
    tolerances: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        levels = tuple(sorted(self.levels, key=lambda lv: lv.n))
        ns = [lv.n for lv in levels]
        if len(set(ns)) != len(ns):
            raise ValueError("duplicate quantum numbers in spectrum table")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "produced_by", Method(self.produced_by))

    def to_dict(self, tool_version: str) -> dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "method": self.produced_by.value,
            "levels": [lv.to_dict() for lv in self.levels],
            "tolerances": dict(self.tolerances),
            "tool_version": tool_version,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SpectrumTable":
        method = Method(data["method"])
        levels = []
        for rec in data["levels"]:
            lv = EnergyLevel(rec["n"], rec["epsilon"], method)
            if lv.energy != rec["energy"]:
                raise ValueError(f"inconsistent energy for n={rec['n']}")
            levels.append(lv)
        return cls(
            ModelParams(**data["params"]), tuple(levels), method,
            {k: float(v) for k, v in data.get("tolerances", {}).items()},
        )
