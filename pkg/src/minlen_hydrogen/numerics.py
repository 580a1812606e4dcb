"""Quadrature, cumulative integration, root bracketing and differentiation.

All integrands are expected to be vectorized: ``f(np.ndarray) -> np.ndarray``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import legendre
from scipy import optimize, special

from .model import AbscissaKind, MomentumGrid, SampledWaveFunction, interval_half_width

PANEL_ORDER = 32
DEFAULT_NODES = 2048
DEFAULT_ROOT_TOL = 1e-12
MAX_DOUBLINGS = 6


class ConvergenceError(RuntimeError):
    """Raised when refinement fails to reach the requested tolerance."""

    def __init__(self, message: str, estimates: tuple[complex, ...] = ()):
        super().__init__(message)
        self.estimates = estimates


class Scheme(str, enum.Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    TANH_SINH = "tanh_sinh"


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: Scheme = Scheme.GAUSS_LEGENDRE
    node_count: int = DEFAULT_NODES
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_doublings: int = MAX_DOUBLINGS

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.node_count < 64 or self.node_count % 2:
            raise ValueError(f"node_count must be even and >= 64, got {self.node_count}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"invalid bracket: lo={self.lo!r} must be below hi={self.hi!r}")
        if not self.f_lo * self.f_hi < 0:
            raise ValueError(
                f"invalid bracket: f({self.lo!r})={self.f_lo!r} and "
                f"f({self.hi!r})={self.f_hi!r} do not straddle zero"
            )

    @classmethod
    def around(cls, f: Callable[[float], float], lo: float, hi: float) -> "RootBracket":
        return cls(lo, hi, f(lo), f(hi))


# --- Gauss-Legendre building blocks -------------------------------------------------


@functools.lru_cache(maxsize=None)
def _gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = legendre.leggauss(order)
    # exact mirror symmetry of the reference rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


@functools.lru_cache(maxsize=None)
def _to_legendre(order: int) -> np.ndarray:
    x, w = _gauss_rule(order)
    vander = legendre.legvander(x, order - 1)
    return ((2 * np.arange(order) + 1) / 2.0)[:, None] * (vander.T * w[None, :])


@functools.lru_cache(maxsize=None)
def _panel_operators(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative-integral and derivative matrices on the reference panel [-1, 1].

    Both act on nodal values through the degree ``order - 1`` interpolant.
    """
    x, w = _gauss_rule(order)
    integ = legendre.legint(_to_legendre(order), lbnd=-1.0, axis=0)
    cumulative = legendre.legvander(x, order) @ integ
    # barycentric form; the Legendre-coefficient route loses ~5 digits here
    lam = (-1.0) ** np.arange(order) * np.sqrt((1.0 - x**2) * w)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    derivative = (lam[None, :] / lam[:, None]) / diff
    np.fill_diagonal(derivative, 0.0)
    np.fill_diagonal(derivative, -derivative.sum(axis=1))
    return cumulative, derivative


def _half_edges(half: float, panels: int, scale: float) -> np.ndarray:
    if panels == 1 or scale >= half:
        return np.linspace(0.0, half, panels + 1)
    geo = [0.0]
    s = scale
    while s < half and len(geo) < panels:
        geo.append(s)
        s *= 2.0
    if s < half:
        # too few panels for doubling widths: stretch the ratio instead
        ratio = (half / scale) ** (1.0 / (panels - 1))
        geo = [0.0] + [scale * ratio**j for j in range(panels - 1)]
    edges = geo + [half]
    while len(edges) - 1 < panels:
        widths = np.diff(edges)
        k = int(np.argmax(widths))
        edges.insert(k + 1, 0.5 * (edges[k] + edges[k + 1]))
    return np.asarray(edges)


def momentum_grid(
    beta: float,
    node_count: int = DEFAULT_NODES,
    scale: float | None = None,
    order: int = PANEL_ORDER,
) -> MomentumGrid:
    """Build a symmetric composite Gauss-Legendre grid on ``(-L, L)``.

    Panels are graded geometrically away from ``p = 0`` starting at width
    ``scale`` (default ``L / 2**12``), which keeps functions localized on a
    scale much smaller than ``L`` spectrally resolved. Remaining panels are
    spent bisecting the widest ones.
    """
    if node_count < 64 or node_count % 2:
        raise ValueError(f"node_count must be even and >= 64, got {node_count}")
    half = interval_half_width(beta)
    per_half = node_count // 2
    panels = max(1, per_half // order)
    base, extra = divmod(per_half, panels)
    if scale is None:
        scale = half / 2**12
    if not scale > 0:
        raise ValueError("grid scale must be positive")
    edges_half = _half_edges(half, panels, scale)
    orders_half = [base + (1 if k < extra else 0) for k in range(panels)]

    pos_nodes, pos_weights = [], []
    for k, q in enumerate(orders_half):
        a, b = edges_half[k], edges_half[k + 1]
        x, w = _gauss_rule(q)
        pos_nodes.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        pos_weights.append(0.5 * (b - a) * w)
    right_n = np.concatenate(pos_nodes)
    right_w = np.concatenate(pos_weights)
    nodes = np.concatenate([-right_n[::-1], right_n])
    weights = np.concatenate([right_w[::-1], right_w])
    edges = np.concatenate([-edges_half[::-1], edges_half[1:]])
    orders = tuple(orders_half[::-1] + orders_half)
    return MomentumGrid(beta, nodes, weights, edges, orders)


def grid_integral(values: np.ndarray, grid: MomentumGrid) -> complex:
    return complex(np.dot(grid.weights, values))


def grid_cumulative(values: np.ndarray, grid: MomentumGrid) -> tuple[np.ndarray, complex]:
    """Values of ``int_{-L}^{p_k} f`` at the grid nodes, plus the full integral."""
    values = np.asarray(values, dtype=complex)
    out = np.empty_like(values)
    running = 0.0 + 0.0j
    for k, sl in enumerate(grid.panel_slices()):
        q = grid.orders[k]
        half_width = 0.5 * (grid.edges[k + 1] - grid.edges[k])
        cumulative, _ = _panel_operators(q)
        out[sl] = running + half_width * (cumulative @ values[sl])
        running += np.dot(grid.weights[sl], values[sl])
    return out, complex(running)


def grid_fourier(values: np.ndarray, grid: MomentumGrid, omega) -> np.ndarray:
    """``int exp(i omega p) f(p) dp`` for nodal values of ``f`` (Filon-Legendre).

    Each panel's Legendre interpolant is integrated against the exponential
    exactly, ``int_{-1}^{1} P_k(t) exp(i w t) dt = 2 i^k j_k(w)``, so large
    ``omega`` needs no extra nodes.
    """
    values = np.asarray(values, dtype=complex)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros(omega.size, dtype=complex)
    # mirrored and bisected panels share widths, hence moment matrices
    moment_cache: dict[tuple[float, int], np.ndarray] = {}
    for k, sl in enumerate(grid.panel_slices()):
        q = grid.orders[k]
        mid = 0.5 * (grid.edges[k + 1] + grid.edges[k])
        half = 0.5 * (grid.edges[k + 1] - grid.edges[k])
        key = (round(half, 12), q)
        moments = moment_cache.get(key)
        if moments is None:
            orders = np.arange(q)
            jk = special.spherical_jn(orders[None, :], np.abs(half * omega)[:, None])
            # j_k has the parity of k
            jk *= np.where(omega[:, None] < 0, (-1.0) ** orders[None, :], 1.0)
            moments = moment_cache[key] = 2.0 * (1j ** orders)[None, :] * jk
        coef = _to_legendre(q) @ values[sl]
        out += half * np.exp(1j * omega * mid) * (moments @ coef)
    return out


def grid_derivative(values: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Spectral derivative of nodal values, panel by panel."""
    values = np.asarray(values, dtype=complex)
    out = np.empty_like(values)
    for k, sl in enumerate(grid.panel_slices()):
        q = grid.orders[k]
        if q < 8:
            raise ValueError("grid too coarse for differentiation (panel order < 8)")
        half_width = 0.5 * (grid.edges[k + 1] - grid.edges[k])
        _, derivative = _panel_operators(q)
        out[sl] = (derivative @ values[sl]) / half_width
    return out


# --- general-purpose quadrature ------------------------------------------------------


def _composite_gl(f, lo: float, hi: float, nodes: int) -> complex:
    panels = max(1, nodes // PANEL_ORDER)
    x, w = _gauss_rule(PANEL_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return complex(np.dot(wts, f(pts)))


def _tanh_sinh(f, lo: float, hi: float, nodes: int) -> complex:
    t_max = 3.2
    h = 2.0 * t_max / nodes
    t = h * np.arange(-(nodes // 2), nodes // 2 + 1)
    u = 0.5 * math.pi * np.sinh(t)
    # distance from each endpoint computed without cancellation
    dist = 1.0 / (np.exp(2.0 * np.abs(u)) + 1.0) * 2.0
    x = np.sign(u) * (1.0 - dist)
    w = h * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = mid + half * x
    keep = (pts > lo) & (pts < hi) & (w > 0)
    return complex(half * np.dot(w[keep], f(pts[keep])))


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Integrate ``f`` over ``(lo, hi)``, refining by node doubling.

    Infinite limits are mapped to a finite interval with ``p = tan(u)``.
    Two successive estimates must agree within
    ``max(abs_tol, rel_tol * |I|)``; otherwise :class:`ConvergenceError`
    carries both estimates.
    """
    spec = spec or QuadratureSpec()
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo!r}, {hi!r})")
    integrand = f
    if math.isinf(lo) or math.isinf(hi):
        def integrand(u):
            return f(np.tan(u)) / np.cos(u) ** 2

        lo, hi = math.atan(lo), math.atan(hi)

    rule = _composite_gl if spec.scheme is Scheme.GAUSS_LEGENDRE else _tanh_sinh
    n = spec.node_count
    prev = rule(integrand, lo, hi, n)
    cur = prev
    for _ in range(spec.max_doublings):
        n *= 2
        prev, cur = cur, rule(integrand, lo, hi, n)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur
    raise ConvergenceError(f"quadrature did not converge with {n} nodes", (prev, cur))


def cumulative_integral(
    samples: SampledWaveFunction, grid: MomentumGrid, with_endpoint: bool = False
) -> SampledWaveFunction:
    """Running integral ``F(p_k) = int_{-L}^{p_k} phi(q) dq`` on the grid nodes.

    With ``with_endpoint=True`` the value at ``p = +L`` is appended.
    """
    if samples.abscissae.size < 2:
        raise ValueError("cumulative integral needs at least 2 nodes")
    if samples.abscissae.shape != grid.nodes.shape or not np.array_equal(
        samples.abscissae, grid.nodes
    ):
        raise ValueError("samples are not on the supplied grid")
    running, total = grid_cumulative(samples.values, grid)
    x = grid.nodes
    if with_endpoint:
        x = np.append(x, grid.half_width)
        running = np.append(running, total)
    return SampledWaveFunction(
        AbscissaKind.MOMENTUM_P, x, running, samples.level,
        samples.normalization_A, samples.constant_c,
    )


def find_root(
    f: Callable[[float], float],
    bracket: RootBracket,
    abs_tol: float = DEFAULT_ROOT_TOL,
) -> float:
    """Root of ``f`` inside a sign-changing bracket (Brent's method)."""
    if bracket.f_lo == 0:
        return bracket.lo
    if bracket.f_hi == 0:
        return bracket.hi
    root, info = optimize.brentq(
        f, bracket.lo, bracket.hi, xtol=abs_tol, rtol=4 * np.finfo(float).eps,
        maxiter=500, full_output=True, disp=False,
    )
    if not info.converged:
        raise ConvergenceError(f"root finder did not converge: {info.flag}", (root,))
    return float(root)


def bisect(f: Callable[[float], float], lo: float, hi: float, iterations: int = 200) -> float:
    """Plain bisection; slow but assumption-free."""
    f_lo = f(lo)
    if f_lo * f(hi) > 0:
        raise ValueError("bisection needs a sign change")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid == 0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def derivative(
    f: Callable[[float], complex],
    x: float,
    h: float = 1e-2,
    full_output: bool = False,
):
    """Central difference refined by Ridders' Richardson tableau.

    Returns the derivative estimate, or ``(estimate, error)`` when
    ``full_output`` is set.
    """
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h!r}")
    shrink, shrink2 = 1.4, 1.4**2
    ntab = 10
    tab = np.zeros((ntab, ntab), dtype=complex)
    tab[0, 0] = (f(x + h) - f(x - h)) / (2.0 * h)
    best, err = tab[0, 0], np.inf
    for i in range(1, ntab):
        h /= shrink
        tab[0, i] = (f(x + h) - f(x - h)) / (2.0 * h)
        fac = shrink2
        for j in range(1, i + 1):
            tab[j, i] = (tab[j - 1, i] * fac - tab[j - 1, i - 1]) / (fac - 1.0)
            fac *= shrink2
            e = max(abs(tab[j, i] - tab[j - 1, i]), abs(tab[j, i] - tab[j - 1, i - 1]))
            if e <= err:
                err, best = e, tab[j, i]
        if abs(tab[i, i] - tab[i - 1, i - 1]) >= 2.0 * err:
            break
    best = complex(best)
    return (best, float(err)) if full_output else best
