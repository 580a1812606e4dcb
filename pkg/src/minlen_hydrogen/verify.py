"""Invariant suite run by ``minlen-hydrogen verify``.

Each check returns a :class:`CheckResult` with the measured worst-case value
and the threshold it was held to.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .coordinate import dirichlet_check
from .localization import MLState, ml_grid, ml_moments, ml_overlap, ml_overlap_quadrature, quasiposition_origin_ratio
from .model import AbscissaKind, Method, ModelParams, SampledWaveFunction, SpectrumTable
from .numerics import momentum_grid
from .semiclassical import energy_semiclassical, wkb_phase_residual
from .spectrum import (
    closed_form_binding,
    energy_closed_form,
    energy_root_found,
    energy_single_valued,
    m_of_n,
    moment_p4_cutoff,
    undeformed_binding,
)
from .wavefunction import (
    EigenfunctionContext,
    commutator_check,
    eigen_grid,
    integral_condition,
    inverse_X_commutator,
    inverse_X_identities,
    norm,
    ode_residual,
    schrodinger_residual,
)

ALPHAS = (0.5, 1.0, 2.0)
BETAS = (1e-4, 1e-2, 0.1)
LEVELS = tuple(range(1, 11))
QUASIPOSITION_THRESHOLD = 1e-2


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: measured={self.measured:.3e} threshold={self.threshold:.1e} {self.detail}".rstrip()


@dataclass
class SuiteConfig:
    alphas: Sequence[float] = ALPHAS
    betas: Sequence[float] = BETAS
    levels: Sequence[int] = LEVELS
    node_count: int = 2048
    extra: dict = field(default_factory=dict)

    def params(self) -> Iterable[ModelParams]:
        for a in self.alphas:
            for b in self.betas:
                yield ModelParams(a, b)


def _below(name, values, threshold, detail="") -> CheckResult:
    worst = float(max(values))
    return CheckResult(name, worst < threshold, worst, threshold, detail)


def check_spectrum_routes(cfg: SuiteConfig) -> list[CheckResult]:
    root, semi = [], []
    for params in cfg.params():
        for n in cfg.levels:
            exact = closed_form_binding(params, n)
            root.append(abs(energy_root_found(params, n).epsilon - exact) / exact)
            semi.append(abs(energy_semiclassical(params, n).epsilon - exact) / exact)
    return [
        _below("spectrum: root-found vs closed form (rel)", root, 1e-10),
        _below("spectrum: semiclassical vs closed form (rel)", semi, 1e-8),
    ]


def check_undeformed_limit(cfg: SuiteConfig) -> list[CheckResult]:
    dev = [
        abs(energy_closed_form(ModelParams(a, 0.0), n).energy + a * a / (4 * n * n))
        for a in set(cfg.alphas) | {2.0} for n in cfg.levels
    ]
    ground = energy_closed_form(ModelParams(2.0, 0.0), 1).energy
    return [
        CheckResult("undeformed limit: E_n = -alpha^2/(4 n^2) exactly", max(dev) == 0.0, max(dev), 0.0),
        CheckResult("undeformed limit: alpha=2, n=1 gives E=-1", ground == -1.0, abs(ground + 1.0), 0.0),
    ]


def sqrt_beta_slope(alpha: float, n: int, betas=(1e-8, 1e-9, 1e-10)) -> float:
    """Least-squares slope of ``E_n(beta) - E_n(0)`` against ``sqrt(beta)``."""
    e0 = energy_closed_form(ModelParams(alpha, 0.0), n).energy
    x = np.sqrt(betas)
    y = np.array([energy_closed_form(ModelParams(alpha, b), n).energy - e0 for b in betas])
    return float(np.polyfit(x, y, 1)[0])


def check_sqrt_beta_law(cfg: SuiteConfig) -> list[CheckResult]:
    devs = []
    for a in cfg.alphas:
        for n in (1, 2, 3):
            target = a**3 / (4 * n**3)
            devs.append(abs(sqrt_beta_slope(a, n) - target) / target)
    return [_below("sqrt(beta) law: slope vs alpha^3/(4 n^3) (rel)", devs, 0.01)]


def check_hermiticity(cfg: SuiteConfig) -> list[CheckResult]:
    on, off_margin, sign_ok = [], [], True
    for params in cfg.params():
        for n in cfg.levels:
            eps = closed_form_binding(params, n)
            on.append(abs(EigenfunctionContext.at(params, eps, n).c.imag))
            mid = 0.5 * (eps + closed_form_binding(params, n + 1))
            ctx = EigenfunctionContext.at(params, mid, n)
            off_margin.append(abs(ctx.c.imag) / (1e-3 * ctx.A * mid / params.alpha))
            lo = EigenfunctionContext.at(params, eps * (1 - 1e-6), n).c.imag
            hi = EigenfunctionContext.at(params, eps * (1 + 1e-6), n).c.imag
            sign_ok &= lo * hi < 0
    worst_margin = min(off_margin)
    return [
        _below("hermiticity: |Im c| on spectrum", on, 1e-10),
        CheckResult("hermiticity: |Im c| / (1e-3 A eps/alpha) at midpoints", worst_margin > 1.0, worst_margin, 1.0),
        CheckResult("hermiticity: Im c changes sign across each level", sign_ok, float(sign_ok), 1.0),
    ]


def check_eigenfunctions(cfg: SuiteConfig) -> list[CheckResult]:
    nrm, integ, schro, ode = [], [], [], []
    for params in cfg.params():
        for n in cfg.levels:
            ctx = EigenfunctionContext.for_level(params, n)
            grid = eigen_grid(ctx, cfg.node_count)
            nrm.append(abs(norm(ctx, grid) - 1.0))
            integ.append(abs(integral_condition(ctx, grid)))
            schro.append(schrodinger_residual(ctx, grid))
            ode.append(ode_residual(ctx, grid.nodes[5:-5:97]))
    return [
        _below("eigenfunction: |norm - 1|", nrm, 1e-8),
        _below("eigenfunction: |int phi dp|", integ, 1e-8),
        _below("eigenfunction: sup Schrodinger integral-equation residual", schro, 1e-6),
        _below("eigenfunction: sup first-order ODE residual", ode, 1e-6),
    ]


def check_inverse_x(cfg: SuiteConfig) -> list[CheckResult]:
    r1s, r2s, comm = [], [], []
    for b in cfg.betas:
        params = ModelParams(1.0, b)
        grid = ml_grid(params, 512)
        sb = params.sqrt_beta
        tests: list[Callable] = [
            lambda p: np.cos(sb * p),
            lambda p: np.cos(sb * p) ** 2 * np.exp(1j * sb * p),
        ]
        for f in tests:
            phi = SampledWaveFunction(AbscissaKind.MOMENTUM_P, grid.nodes, f(grid.nodes))
            for c in (0.0, 0.3 - 0.2j):
                r1, r2 = inverse_X_identities(phi, c, grid)
                r1s.append(r1)
                r2s.append(r2)
                comm.append(float(np.max(np.abs(inverse_X_commutator(phi, c, grid) + c))))
    return [
        _below("1/X identities: X (1/X) phi = phi", r1s, 1e-6),
        _below("1/X identities: (1/X) X phi = phi + c", r2s, 1e-6),
        _below("1/X identities: [X, 1/X] phi = -c pointwise", comm, 1e-6),
    ]


def check_deformed_commutator(cfg: SuiteConfig) -> list[CheckResult]:
    res = []
    for b in tuple(cfg.betas) + (0.0,):
        params = ModelParams(1.0, b)
        span = 0.8 * (math.pi / (2 * params.sqrt_beta)) if b > 0 else 3.0
        sb = params.sqrt_beta if b > 0 else 1.0
        for f in (lambda p: math.exp(-p * p), lambda p: math.cos(sb * p)):
            for p in np.linspace(-min(span, 3.0), min(span, 3.0), 20):
                res.append(commutator_check(params, f, float(p)))
    return [_below("deformed commutator: [X,P] f = i(1+beta P^2) f", res, 1e-8)]


def check_maximal_localization(cfg: SuiteConfig) -> list[CheckResult]:
    mean_dev, width_dev, overlap_dev = [], [], []
    betas = sorted(set(cfg.extra.get("ml_betas", (1e-2, 0.1))))
    for b in betas:
        params = ModelParams(1.0, b)
        for xi in (-1.0, 0.0, 1.0):
            mean, width = ml_moments(MLState(params, xi))
            mean_dev.append(abs(mean - xi))
            width_dev.append(abs(width - params.sqrt_beta))
        grid = ml_grid(params, 512)
        sb = params.sqrt_beta
        ds = np.concatenate([np.linspace(-6 * sb, 6 * sb, 49), [0.0, 2 * sb, -2 * sb, 2 * sb + 1e-9]])
        for d in ds:
            overlap_dev.append(abs(ml_overlap(params, d, 0.0) - ml_overlap_quadrature(params, d, 0.0, grid)))
    return [
        _below("maximal localization: |<X> - xi|", mean_dev, 1e-8),
        _below("maximal localization: |Delta X - sqrt(beta)|", width_dev, 1e-8),
        _below("maximal localization: overlap closed form vs quadrature", overlap_dev, 1e-8),
    ]


def check_boundary_behavior(cfg: SuiteConfig) -> list[CheckResult]:
    dirichlet = []
    for params in cfg.params():
        for n in (1, 2, 3):
            ctx = EigenfunctionContext.for_level(params, n)
            dirichlet.append(dirichlet_check(ctx, eigen_grid(ctx, cfg.node_count)))
    params = ModelParams(1.0, 0.1)
    ratios = []
    for n in (1, 2, 3):
        ctx = EigenfunctionContext.for_level(params, n)
        ratios.append(quasiposition_origin_ratio(ctx, eigen_grid(ctx, cfg.node_count)))
    best = max(ratios)
    return [
        _below("boundary: |eta(0)| / max|eta| on spectrum", dirichlet, 1e-6),
        CheckResult(
            "boundary: max_{n<=3} |psi_n(0)| / max|psi_n| at alpha=1, beta=0.1",
            best > QUASIPOSITION_THRESHOLD, best, QUASIPOSITION_THRESHOLD,
            "ratios=" + ",".join(f"{r:.4f}" for r in ratios),
        ),
    ]


def check_p4_divergence(cfg: SuiteConfig) -> list[CheckResult]:
    devs = []
    for a in cfg.alphas:
        params = ModelParams(a, 0.0)
        for n in (1, 2, 3):
            eps = undeformed_binding(a, n)
            target = 4 * eps**1.5 / math.pi
            for mult in (100.0, 300.0, 1000.0):
                lam = mult * math.sqrt(eps)
                slope = (moment_p4_cutoff(params, n, 2 * lam) - moment_p4_cutoff(params, n, lam)) / lam
                devs.append(abs(slope - target) / target)
    return [_below("p^4 moment: d/dLambda -> 4 eps^{3/2}/pi (rel)", devs, 0.01)]


def single_valued_slope(alpha: float, n: int, betas=(1e-8, 1e-7, 1e-6, 1e-5, 1e-4)) -> float:
    y = [m_of_n(ModelParams(alpha, b), n) - n for b in betas]
    return float(np.polyfit(np.log(betas), np.log(y), 1)[0])


def check_single_valuedness(cfg: SuiteConfig) -> list[CheckResult]:
    excess = [m_of_n(p, n) - n for p in cfg.params() for n in cfg.levels]
    slopes = [abs(single_valued_slope(a, n) - 0.5) for a in cfg.alphas for n in (1, 2, 3)]
    undeformed = [
        abs(energy_single_valued(ModelParams(a, 0.0), m).epsilon - undeformed_binding(a, m))
        / undeformed_binding(a, m)
        for a in cfg.alphas for m in cfg.levels
    ]
    worst = min(excess)
    return [
        CheckResult("single-valuedness: m(n) - n > 0 for beta > 0", worst > 0, worst, 0.0),
        _below("single-valuedness: |log-log slope - 0.5|", slopes, 0.02),
        _below("single-valuedness: beta=0 spectrum matches undeformed (rel)", undeformed, 1e-12),
    ]


def check_wkb(cfg: SuiteConfig) -> list[CheckResult]:
    res = []
    for params in cfg.params():
        for n in (1, 2, 3):
            E = energy_closed_form(params, n).energy
            x_max = params.alpha / -E
            for x in np.geomspace(1e-3, 0.999, 50) * x_max:
                res.append(wkb_phase_residual(params, E, float(x)))
    return [_below("WKB: zeroth-order phase equation residual", res, 1e-12)]


def check_json_roundtrip(cfg: SuiteConfig) -> list[CheckResult]:
    params = next(iter(cfg.params()))
    table = SpectrumTable(params, tuple(energy_closed_form(params, n) for n in cfg.levels), Method.CLOSED_FORM)
    text = json.dumps(table.to_dict(__version__), indent=2)
    again = json.dumps(SpectrumTable.from_dict(json.loads(text)).to_dict(__version__), indent=2)
    return [CheckResult("export: JSON spectrum round-trip byte-stable", text == again, float(text != again), 0.0)]


ALL_CHECKS = (
    check_spectrum_routes,
    check_undeformed_limit,
    check_sqrt_beta_law,
    check_hermiticity,
    check_eigenfunctions,
    check_inverse_x,
    check_deformed_commutator,
    check_maximal_localization,
    check_boundary_behavior,
    check_p4_divergence,
    check_single_valuedness,
    check_wkb,
    check_json_roundtrip,
)


def run_suite(cfg: SuiteConfig | None = None) -> list[CheckResult]:
    cfg = cfg or SuiteConfig()
    out: list[CheckResult] = []
    for check in ALL_CHECKS:
        out.extend(check(cfg))
    return out
