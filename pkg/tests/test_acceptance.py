"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Default parameter set: alpha in {0.5, 1, 2}, beta in {1e-4, 1e-2, 0.1}, n = 1..10.
"""

import json
import math

import numpy as np

from minlen_hydrogen import (
    EigenfunctionContext,
    Method,
    ModelParams,
    SpectrumTable,
    __version__,
    eigen_grid,
    energy_closed_form,
    energy_root_found,
    energy_semiclassical,
    energy_single_valued,
    m_of_n,
    moment_p4_cutoff,
)
from minlen_hydrogen.cli import main, render_json
from minlen_hydrogen.coordinate import dirichlet_check
from minlen_hydrogen.localization import (
    MLState,
    ml_grid,
    ml_moments,
    ml_overlap,
    ml_overlap_quadrature,
    quasiposition_origin_ratio,
)
from minlen_hydrogen.model import AbscissaKind, SampledWaveFunction
from minlen_hydrogen.semiclassical import wkb_phase_residual
from minlen_hydrogen.spectrum import closed_form_binding, undeformed_binding
from minlen_hydrogen.verify import QUASIPOSITION_THRESHOLD
from minlen_hydrogen.wavefunction import (
    commutator_check,
    integral_condition,
    inverse_X_commutator,
    inverse_X_identities,
    norm,
    ode_residual,
    schrodinger_residual,
)

ALPHAS = (0.5, 1.0, 2.0)
BETAS = (1e-4, 1e-2, 0.1)
LEVELS = range(1, 11)
GRID = [ModelParams(a, b) for a in ALPHAS for b in BETAS]


def test_01_spectrum_route_equivalence(report):
    root, semi = [], []
    for p in GRID:
        for n in LEVELS:
            exact = energy_closed_form(p, n).epsilon
            root.append(abs(energy_root_found(p, n).epsilon - exact) / exact)
            semi.append(abs(energy_semiclassical(p, n).epsilon - exact) / exact)
    ok1 = report("C1 root-found vs closed form", max(root) < 1e-10, max(root), 1e-10)
    ok2 = report("C1 semiclassical vs closed form", max(semi) < 1e-8, max(semi), 1e-8)
    assert ok1 and ok2


def test_02_undeformed_limit(report):
    dev = max(
        abs(energy_closed_form(ModelParams(a, 0.0), n).energy + a * a / (4 * n * n))
        for a in ALPHAS + (2.0,) for n in LEVELS
    )
    ground = energy_closed_form(ModelParams(2.0, 0.0), 1).energy
    ok = report("C2 beta=0 gives -alpha^2/(4n^2) exactly; alpha=2,n=1 -> -1", dev == 0 and ground == -1.0, dev, 0.0)
    assert ok


def test_03_sqrt_beta_law(report):
    betas = np.array([1e-8, 1e-9, 1e-10])
    worst = 0.0
    for a in ALPHAS:
        for n in (1, 2, 3):
            e0 = energy_closed_form(ModelParams(a, 0.0), n).energy
            shift = [energy_closed_form(ModelParams(a, b), n).energy - e0 for b in betas]
            slope = np.polyfit(np.sqrt(betas), shift, 1)[0]
            target = a**3 / (4 * n**3)
            worst = max(worst, abs(slope - target) / target)
    assert report("C3 slope of dE/sqrt(beta) vs alpha^3/(4n^3) (rel)", worst < 0.01, worst, 0.01)


def test_04_hermiticity(report):
    on, margin, sign_change = 0.0, math.inf, True
    for p in GRID:
        for n in LEVELS:
            eps = closed_form_binding(p, n)
            on = max(on, abs(EigenfunctionContext.at(p, eps, n).c.imag))
            mid = 0.5 * (eps + closed_form_binding(p, n + 1))
            ctx = EigenfunctionContext.at(p, mid, n)
            margin = min(margin, abs(ctx.c.imag) / (1e-3 * ctx.A * mid / p.alpha))
            below = EigenfunctionContext.at(p, eps * (1 - 1e-6), n).c.imag
            above = EigenfunctionContext.at(p, eps * (1 + 1e-6), n).c.imag
            sign_change &= below * above < 0
    ok1 = report("C4 |Im c| on spectrum", on < 1e-10, on, 1e-10)
    ok2 = report("C4 |Im c|/(1e-3 A eps/alpha) at midpoints", margin > 1, margin, 1.0)
    ok3 = report("C4 Im c changes sign across every level", sign_change, float(sign_change), 1.0)
    assert ok1 and ok2 and ok3


def test_05_eigenfunction_consistency(report):
    nrm = integ = schro = ode = 0.0
    for p in GRID:
        for n in LEVELS:
            ctx = EigenfunctionContext.for_level(p, n)
            grid = eigen_grid(ctx)
            nrm = max(nrm, abs(norm(ctx, grid) - 1))
            integ = max(integ, abs(integral_condition(ctx, grid)))
            schro = max(schro, schrodinger_residual(ctx, grid))
            ode = max(ode, ode_residual(ctx, grid.nodes[5:-5:97]))
    oks = [
        report("C5 |norm - 1|", nrm < 1e-8, nrm, 1e-8),
        report("C5 |int phi dp|", integ < 1e-8, integ, 1e-8),
        report("C5 sup Schrodinger integral-equation residual", schro < 1e-6, schro, 1e-6),
        report("C5 sup first-order ODE residual", ode < 1e-6, ode, 1e-6),
    ]
    assert all(oks)


def test_06_inverse_position(report):
    r1s = r2s = comm = 0.0
    for b in BETAS:
        p = ModelParams(1.0, b)
        grid = ml_grid(p, 512)
        sb = p.sqrt_beta
        for f in (lambda q: np.cos(sb * q), lambda q: np.cos(sb * q) ** 2 * np.exp(1j * sb * q)):
            phi = SampledWaveFunction(AbscissaKind.MOMENTUM_P, grid.nodes, f(grid.nodes))
            for c in (0.0, 0.3 - 0.2j):
                r1, r2 = inverse_X_identities(phi, c, grid)
                r1s, r2s = max(r1s, r1), max(r2s, r2)
                comm = max(comm, float(np.max(np.abs(inverse_X_commutator(phi, c, grid) + c))))
    oks = [
        report("C6 r1 = |X X^-1 phi - phi|", r1s < 1e-6, r1s, 1e-6),
        report("C6 r2 = |X^-1 X phi - phi - c|", r2s < 1e-6, r2s, 1e-6),
        report("C6 [X, X^-1] phi + c pointwise", comm < 1e-6, comm, 1e-6),
    ]
    assert all(oks)


def test_07_deformed_commutator(report):
    worst = 0.0
    for b in BETAS:
        p = ModelParams(1.0, b)
        span = min(0.8 * math.pi / (2 * p.sqrt_beta), 3.0)
        for f in (lambda q: math.exp(-q * q), lambda q, s=p.sqrt_beta: math.cos(s * q)):
            for q in np.linspace(-span, span, 20):
                worst = max(worst, commutator_check(p, f, float(q)))
    assert report("C7 [X,P] f - i(1+beta P^2) f", worst < 1e-8, worst, 1e-8)


def test_08_maximal_localization(report):
    mean_dev = width_dev = overlap_dev = 0.0
    for b in (1e-2, 0.1):
        p = ModelParams(1.0, b)
        for xi in (-1.0, 0.0, 1.0):
            mean, width = ml_moments(MLState(p, xi))
            mean_dev = max(mean_dev, abs(mean - xi))
            width_dev = max(width_dev, abs(width - p.sqrt_beta))
        grid = ml_grid(p, 512)
        sb = p.sqrt_beta
        ds = np.concatenate([np.linspace(-6 * sb, 6 * sb, 49), [0.0, 2 * sb, -2 * sb]])
        for d in ds:
            overlap_dev = max(overlap_dev, abs(ml_overlap(p, d, 0.0) - ml_overlap_quadrature(p, d, 0.0, grid)))
    oks = [
        report("C8 |<X> - xi|", mean_dev < 1e-8, mean_dev, 1e-8),
        report("C8 |Delta X - sqrt(beta)|", width_dev < 1e-8, width_dev, 1e-8),
        report("C8 overlap closed form vs quadrature", overlap_dev < 1e-8, overlap_dev, 1e-8),
    ]
    assert all(oks)


def test_09_boundary_behavior(report):
    dirichlet = 0.0
    for p in GRID:
        for n in (1, 2, 3):
            ctx = EigenfunctionContext.for_level(p, n)
            dirichlet = max(dirichlet, dirichlet_check(ctx, eigen_grid(ctx)))
    p = ModelParams(1.0, 0.1)
    ratios = []
    for n in (1, 2, 3):
        ctx = EigenfunctionContext.for_level(p, n)
        ratios.append(quasiposition_origin_ratio(ctx, eigen_grid(ctx)))
    ok1 = report("C9 |eta(0)|/max|eta| on spectrum", dirichlet < 1e-6, dirichlet, 1e-6)
    ok2 = report(
        "C9 max_{n<=3} |psi_n(0)|/max|psi_n| at alpha=1, beta=0.1",
        max(ratios) > QUASIPOSITION_THRESHOLD, max(ratios), QUASIPOSITION_THRESHOLD,
        "ratios=" + ",".join(f"{r:.4f}" for r in ratios),
    )
    assert ok1 and ok2


def test_10_p4_divergence(report):
    worst = 0.0
    for a in ALPHAS:
        p = ModelParams(a, 0.0)
        for n in (1, 2, 3):
            eps = undeformed_binding(a, n)
            target = 4 * eps**1.5 / math.pi
            for mult in (100.0, 300.0, 1000.0):
                lam = mult * math.sqrt(eps)
                slope = (moment_p4_cutoff(p, n, 2 * lam) - moment_p4_cutoff(p, n, lam)) / lam
                worst = max(worst, abs(slope - target) / target)
    assert report("C10 dM4/dLambda vs 4 eps^{3/2}/pi (rel)", worst < 0.01, worst, 0.01)


def test_11_single_valuedness(report):
    excess = min(m_of_n(p, n) - n for p in GRID for n in LEVELS)
    betas = np.array([1e-8, 1e-7, 1e-6, 1e-5, 1e-4])
    slope_dev = 0.0
    for a in ALPHAS:
        for n in (1, 2, 3):
            y = [m_of_n(ModelParams(a, b), n) - n for b in betas]
            slope_dev = max(slope_dev, abs(np.polyfit(np.log(betas), np.log(y), 1)[0] - 0.5))
    undeformed = max(
        abs(energy_single_valued(ModelParams(a, 0.0), m).epsilon - undeformed_binding(a, m)) / undeformed_binding(a, m)
        for a in ALPHAS for m in LEVELS
    )
    oks = [
        report("C11 min m(n) - n for beta > 0", excess > 0, excess, 0.0),
        report("C11 |log-log slope of m(n)-n vs beta - 0.5|", slope_dev < 0.02, slope_dev, 0.02),
        report("C11 beta=0 single-valued spectrum vs undeformed (rel)", undeformed < 1e-12, undeformed, 1e-12),
    ]
    assert all(oks)


def test_12_wkb_phase_equation(report):
    worst = 0.0
    for p in GRID:
        for n in (1, 2, 3):
            E = energy_closed_form(p, n).energy
            for x in np.geomspace(1e-3, 0.999, 50) * (p.alpha / -E):
                worst = max(worst, wkb_phase_residual(p, E, float(x)))
    assert report("C12 WKB phase residual (50 points per (alpha, E))", worst < 1e-12, worst, 1e-12)


def test_13_cli_verify_and_json_roundtrip(report, capsys, tmp_path):
    code = main(["verify"])
    out = capsys.readouterr().out
    checks = [ln for ln in out.splitlines() if ln.startswith("[")]
    ok1 = report("C13 verify exits 0 with every check passing", code == 0 and all(ln.startswith("[PASS]") for ln in checks),
                 float(code), 0.0, f"checks={len(checks)}")
    path = tmp_path / "s.json"
    main(["spectrum", "--alpha", "0.5", "--beta", "1e-4", "--levels", "1..10", "--method", "closed_form",
          "--format", "json", "--out", str(path)])
    text = path.read_text()
    again = render_json(SpectrumTable.from_dict(json.loads(text)).to_dict(__version__))
    p = ModelParams(0.5, 1e-4)
    table = SpectrumTable(p, tuple(energy_closed_form(p, n) for n in LEVELS), Method.CLOSED_FORM)
    direct = render_json(table.to_dict(__version__))
    again_direct = render_json(SpectrumTable.from_dict(json.loads(direct)).to_dict(__version__))
    stable = text == again and direct == again_direct
    ok2 = report("C13 JSON spectrum round-trip byte-stable", stable, float(not stable), 0.0)
    assert ok1 and ok2
