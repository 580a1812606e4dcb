"""Command-line front end.

Usage:
    minlen-hydrogen spectrum --alpha 1 --beta 0.01 --levels 1..5
    minlen-hydrogen wavefn --alpha 1 --beta 0.01 --n 1 --format json --out phi.json
    minlen-hydrogen quasipos --alpha 1 --beta 0.1 --n 1
    minlen-hydrogen coord --alpha 1 --beta 0.1 --n 1 --x-range -40..40
    minlen-hydrogen semiclassical --alpha 1 --beta 0.01 --levels 1..10
    minlen-hydrogen verify --alpha 1 --beta 0.1

All quantities are in units with hbar = 1 and 2m = 1.

Exit codes: 0 success, 1 validation error, 2 numeric non-convergence,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .coordinate import coordinate_transform, default_x_samples
from .localization import default_xi_samples, quasiposition_transform
from .model import EnergyLevel, Method, ModelParams, SpectrumTable
from .numerics import DEFAULT_NODES, DEFAULT_ROOT_TOL, ConvergenceError
from .semiclassical import ACTION_REL_TOL, action_integral, energy_semiclassical
from .spectrum import (
    energy_closed_form,
    energy_root_found,
    moment_p4_cutoff,
    perturbative_level,
)
from .verify import SuiteConfig, run_suite
from .wavefunction import (
    EigenfunctionContext,
    density,
    eigen_grid,
    integral_condition,
    norm,
    sample_phi,
    schrodinger_residual,
)

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED, EXIT_VERIFY_FAILED = 0, 1, 2, 3
COMMANDS = ("spectrum", "wavefn", "quasipos", "coord", "semiclassical", "verify")
SPECTRUM_METHODS = ("closed_form", "root_found", "semiclassical", "perturbative")
FLOAT_FMT = "{:.17g}"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: float | None = None
    beta: float | None = None
    levels: tuple[int, ...] = (1,)
    grid_points: int = DEFAULT_NODES
    fmt: str = "csv"
    out: Path | None = None
    method: str = "all"
    tol_spectrum: float = DEFAULT_ROOT_TOL
    tol_quadrature: float = ACTION_REL_TOL
    sample_range: tuple[float, float] | None = None
    samples: int = 513
    cutoff: float | None = None
    workers: int = 4
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command != "verify" and (self.alpha is None or self.beta is None):
            raise ConfigError("--alpha and --beta are required")
        if self.alpha is not None:
            ModelParams(self.alpha, self.beta if self.beta is not None else 0.0)
        if self.grid_points < 64 or self.grid_points % 2:
            raise ConfigError("--grid-points must be even and >= 64")
        if not self.levels or min(self.levels) < 1:
            raise ConfigError("level range must be nonempty and start at n >= 1")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.command in ("wavefn", "quasipos", "coord") and not self.beta:
            raise ConfigError(f"{self.command} requires beta > 0 (momentum domain is bounded)")
        if self.tol_spectrum <= 0 or self.tol_quadrature <= 0:
            raise ConfigError("tolerances must be positive")
        if self.cutoff is not None and self.cutoff <= 0:
            raise ConfigError("--cutoff must be positive")
        if self.samples < 2:
            raise ConfigError("--samples must be at least 2")
        if self.out is not None:
            parent = self.out.expanduser().resolve().parent
            if not parent.is_dir():
                raise ConfigError(f"output directory {parent} does not exist")

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.alpha, self.beta)


def parse_levels(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or invalid level range {text!r}")
    return tuple(range(lo, hi + 1))


def parse_range(text: str) -> tuple[float, float]:
    try:
        a, b = text.split("..", 1)
        lo, hi = float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minlen-hydrogen",
        description="1D hydrogen atom with minimal length (units hbar = 2m = 1).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--alpha", type=float, required=name != "verify")
        p.add_argument("--beta", type=float, required=name != "verify")
        grp = p.add_mutually_exclusive_group()
        grp.add_argument("--n", type=parse_levels, dest="levels")
        grp.add_argument("--levels", type=parse_levels, dest="levels")
        p.add_argument("--grid-points", type=int, default=DEFAULT_NODES)
        p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
        p.add_argument("--out", type=Path)
        p.add_argument("--tol-spectrum", type=float, default=DEFAULT_ROOT_TOL)
        p.add_argument("--tol-quadrature", type=float, default=ACTION_REL_TOL)
        p.add_argument("--workers", type=int, default=4)
        if name == "spectrum":
            p.add_argument("--method", choices=("all",) + SPECTRUM_METHODS, default="all")
            p.add_argument("--cutoff", type=float, help="momentum cutoff for <p^4> of the undeformed levels")
        if name == "quasipos":
            p.add_argument("--xi-range", type=parse_range, dest="sample_range")
        if name == "coord":
            p.add_argument("--x-range", type=parse_range, dest="sample_range")
        if name in ("quasipos", "coord"):
            p.add_argument("--samples", type=int, default=513)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    default_levels = tuple(range(1, 11)) if ns.command in ("verify",) else (1,)
    return RunConfig(
        command=ns.command,
        alpha=ns.alpha,
        beta=ns.beta,
        levels=ns.levels or default_levels,
        grid_points=ns.grid_points,
        fmt=ns.fmt,
        out=ns.out,
        method=getattr(ns, "method", "all"),
        tol_spectrum=ns.tol_spectrum,
        tol_quadrature=ns.tol_quadrature,
        sample_range=getattr(ns, "sample_range", None),
        samples=getattr(ns, "samples", 513),
        cutoff=getattr(ns, "cutoff", None),
        workers=max(1, ns.workers),
    )


# --- computation ---------------------------------------------------------------------


def _sweep(fn: Callable[[int], Any], levels: Sequence[int], workers: int) -> list[Any]:
    # map preserves input order, so output is deterministic in n
    if workers == 1 or len(levels) == 1:
        return [fn(n) for n in levels]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, levels))


def spectrum_tables(cfg: RunConfig) -> list[SpectrumTable]:
    params = cfg.params
    methods = SPECTRUM_METHODS if cfg.method == "all" else (cfg.method,)
    tols = {"spectrum_abs": cfg.tol_spectrum, "quadrature_rel": cfg.tol_quadrature}
    producers: dict[str, Callable[[int], EnergyLevel]] = {
        "closed_form": lambda n: energy_closed_form(params, n),
        "root_found": lambda n: energy_root_found(params, n, cfg.tol_spectrum),
        "semiclassical": lambda n: energy_semiclassical(params, n, cfg.tol_spectrum, cfg.tol_quadrature),
        "perturbative": lambda n: perturbative_level(params, n),
    }
    tables = []
    for m in methods:
        if m == "root_found" and params.beta == 0:
            if cfg.method == "all":
                continue
            raise ConfigError("root_found requires beta > 0")
        levels = _sweep(producers[m], cfg.levels, cfg.workers)
        tables.append(SpectrumTable(params, tuple(levels), Method(m), tols))
    return tables


def spectrum_rows(cfg: RunConfig, tables: list[SpectrumTable]) -> tuple[list[str], list[list[Any]]]:
    by_method = {t.produced_by.value: {lv.n: lv for lv in t.levels} for t in tables}
    present = [m for m in SPECTRUM_METHODS if m in by_method]
    header = ["n"] + [f"eps_{m}" for m in present] + [f"E_{m}" for m in present]
    others = [m for m in present if m != "closed_form"]
    if "closed_form" in by_method:
        header += [f"reldelta_{m}" for m in others]
    if cfg.cutoff is not None:
        header += ["p4_moment", "p4_energy_shift"]
    rows = []
    for n in cfg.levels:
        row: list[Any] = [n]
        row += [by_method[m][n].epsilon for m in present]
        row += [by_method[m][n].energy for m in present]
        if "closed_form" in by_method:
            exact = by_method["closed_form"][n].epsilon
            row += [(by_method[m][n].epsilon - exact) / exact for m in others]
        if cfg.cutoff is not None:
            moment = moment_p4_cutoff(cfg.params, n, cfg.cutoff)
            row += [moment, 2.0 / 3.0 * cfg.params.beta * moment]
        rows.append(row)
    return header, rows


def wavefunction_payload(cfg: RunConfig, n: int) -> dict[str, Any]:
    ctx = EigenfunctionContext.for_level(cfg.params, n)
    grid = eigen_grid(ctx, cfg.grid_points)
    phi = sample_phi(ctx, grid)
    diagnostics = {
        "n": n,
        "epsilon": ctx.eps,
        "energy": ctx.level.energy,
        "A": ctx.A,
        "c_re": ctx.c.real,
        "c_im": ctx.c.imag,
        "norm": norm(ctx, grid),
        "int_phi_re": integral_condition(ctx, grid).real,
        "int_phi_im": integral_condition(ctx, grid).imag,
        "schrodinger_residual": schrodinger_residual(ctx, grid),
    }
    columns = {
        "p": phi.abscissae,
        "re": phi.values.real,
        "im": phi.values.imag,
        "density": density(ctx, grid.nodes),
    }
    return {"diagnostics": diagnostics, "columns": columns}


def transform_payload(cfg: RunConfig, n: int, kind: str) -> dict[str, Any]:
    ctx = EigenfunctionContext.for_level(cfg.params, n)
    grid = eigen_grid(ctx, cfg.grid_points)
    if cfg.sample_range is None:
        xs = default_xi_samples(cfg.params.alpha, n, cfg.samples)
    else:
        xs = np.linspace(*cfg.sample_range, cfg.samples)
    fn = quasiposition_transform if kind == "quasipos" else coordinate_transform
    values = fn(ctx, xs, grid)
    at0 = fn(ctx, 0.0, grid)
    peak = float(np.max(np.abs(values)))
    diagnostics = {
        "n": n,
        "epsilon": ctx.eps,
        "origin_re": at0.real,
        "origin_im": at0.imag,
        "origin_abs": abs(at0),
        "max_abs": peak,
        "origin_ratio": abs(at0) / max(peak, abs(at0)),
        "note": (
            "quasiposition wave function psi(xi)"
            if kind == "quasipos"
            else "formal coordinate-space function eta(x); not the physical wave function"
        ),
    }
    label = "xi" if kind == "quasipos" else "x"
    columns = {label: xs, "re": values.real, "im": values.imag, "abs": np.abs(values)}
    return {"diagnostics": diagnostics, "columns": columns}


def semiclassical_rows(cfg: RunConfig) -> tuple[list[str], list[list[Any]]]:
    params = cfg.params

    def row(n: int) -> list[Any]:
        semi = energy_semiclassical(params, n, cfg.tol_spectrum, cfg.tol_quadrature)
        exact = energy_closed_form(params, n)
        action = action_integral(params, semi.epsilon, cfg.grid_points, cfg.tol_quadrature)
        return [n, semi.epsilon, exact.epsilon, (semi.epsilon - exact.epsilon) / exact.epsilon,
                action / (2 * math.pi)]

    header = ["n", "eps_semiclassical", "eps_closed_form", "reldelta", "action_over_2pi"]
    return header, _sweep(row, cfg.levels, cfg.workers)


# --- output --------------------------------------------------------------------------


def _fmt(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT.format(float(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def render_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _columns_to_rows(columns: dict[str, np.ndarray]) -> tuple[list[str], list[list[float]]]:
    header = list(columns)
    return header, [list(r) for r in zip(*columns.values())]


def produce(cfg: RunConfig) -> tuple[str, int]:
    """Compute the requested artifact; returns ``(text, exit_code)``."""
    params_dict = cfg.params.to_dict() if cfg.alpha is not None else None

    if cfg.command == "spectrum":
        tables = spectrum_tables(cfg)
        if cfg.fmt == "json":
            if len(tables) == 1 and cfg.cutoff is None:
                return render_json(tables[0].to_dict(__version__)), EXIT_OK
            header, rows = spectrum_rows(cfg, tables)
            obj = {
                "params": params_dict,
                "tool_version": __version__,
                "tables": [t.to_dict(__version__) for t in tables],
                "comparison": [dict(zip(header, r)) for r in rows],
            }
            return render_json(obj), EXIT_OK
        header, rows = spectrum_rows(cfg, tables)
        return render_csv(header, rows), EXIT_OK

    if cfg.command == "semiclassical":
        header, rows = semiclassical_rows(cfg)
        if cfg.fmt == "json":
            obj = {"params": params_dict, "tool_version": __version__,
                   "levels": [dict(zip(header, r)) for r in rows]}
            return render_json(obj), EXIT_OK
        return render_csv(header, rows), EXIT_OK

    if cfg.command in ("wavefn", "quasipos", "coord"):
        if cfg.command == "wavefn":
            payloads = _sweep(lambda n: wavefunction_payload(cfg, n), cfg.levels, cfg.workers)
        else:
            payloads = _sweep(lambda n: transform_payload(cfg, n, cfg.command), cfg.levels, cfg.workers)
        if cfg.fmt == "json":
            obj = {"params": params_dict, "tool_version": __version__, "kind": cfg.command,
                   "states": [_jsonable(p) for p in payloads]}
            return render_json(obj), EXIT_OK
        chunks = []
        for p in payloads:
            header, rows = _columns_to_rows(p["columns"])
            comments = [f"{k}={_fmt(v)}" for k, v in p["diagnostics"].items()]
            chunks.append(render_csv(header, rows, comments))
        return "\n".join(chunks), EXIT_OK

    # verify
    suite = SuiteConfig()
    if cfg.alpha is not None:
        suite.alphas = (cfg.alpha,)
    if cfg.beta is not None:
        if cfg.beta <= 0:
            raise ConfigError("verify requires beta > 0")
        suite.betas = (cfg.beta,)
        suite.extra["ml_betas"] = (1e-2, 0.1, cfg.beta)
    suite.levels = cfg.levels
    suite.node_count = cfg.grid_points
    results = run_suite(suite)
    ok = all(r.passed for r in results)
    if cfg.fmt == "json":
        obj = {"tool_version": __version__, "passed": ok,
               "checks": [{"name": r.name, "passed": r.passed, "measured": r.measured,
                           "threshold": r.threshold, "detail": r.detail} for r in results]}
        text = render_json(obj)
    else:
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if ok else EXIT_VERIFY_FAILED


def _error(kind: str, message: str, code: int) -> int:
    record = {"error": kind, "message": message, "exit_code": code}
    sys.stderr.write(json.dumps(record) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        cfg = config_from_args(ns)
        cfg.validate()
        text, code = produce(cfg)
    except ConvergenceError as exc:
        return _error("nonconvergence", f"{exc}; estimates={list(map(str, exc.estimates))}", EXIT_NONCONVERGED)
    except ValueError as exc:
        return _error("validation", str(exc), EXIT_INVALID)
    # single writer, after all computation has finished
    if cfg.out is None:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    else:
        cfg.out.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
