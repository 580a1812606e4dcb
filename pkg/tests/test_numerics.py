import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minlen_hydrogen import momentum_grid
from minlen_hydrogen.model import AbscissaKind, SampledWaveFunction
from minlen_hydrogen.numerics import (
    ConvergenceError,
    QuadratureSpec,
    RootBracket,
    Scheme,
    bisect,
    cumulative_integral,
    derivative,
    find_root,
    grid_derivative,
    grid_fourier,
    grid_integral,
    integrate,
)

# eps_1 for alpha=1, beta=0.01 from a 40-digit bisection of the quantization condition
EPS_1_ORACLE = 0.2277442494833886541


@pytest.mark.parametrize("scheme", list(Scheme))
def test_integrate_examples(scheme):
    spec = QuadratureSpec(scheme=scheme)
    assert integrate(np.cos, -math.pi / 2, math.pi / 2, spec).real == pytest.approx(2.0, rel=1e-12)
    lorentz = integrate(lambda p: 1.0 / (p * p + 1.0), -math.inf, math.inf, spec)
    assert lorentz.real == pytest.approx(math.pi, rel=1e-12)


def test_integrate_complex_and_errors():
    val = integrate(lambda p: np.exp(1j * p), 0.0, math.pi)
    assert val == pytest.approx(2j, abs=1e-13)
    with pytest.raises(ValueError):
        integrate(np.cos, 1.0, 0.0)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda p: np.sin(1e4 / (p + 1e-9)), 0.0, 1.0, QuadratureSpec(node_count=64, max_doublings=1))
    assert len(info.value.estimates) == 2


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(node_count=63)
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(-3, 3), b=st.floats(-3, 3),
    k=st.floats(0.1, 5.0), lo=st.floats(-2, 0), width=st.floats(0.1, 3),
)
def test_integrate_is_linear(a, b, k, lo, width):
    hi = lo + width
    f, g = np.cos, (lambda p: np.exp(-k * p * p))
    lhs = integrate(lambda p: a * f(p) + b * g(p), lo, hi)
    rhs = a * integrate(f, lo, hi) + b * integrate(g, lo, hi)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


@settings(max_examples=30, deadline=None)
@given(k=st.floats(0.1, 10.0), half=st.floats(0.1, 5.0))
def test_odd_integrand_vanishes(k, half):
    assert abs(integrate(lambda p: np.sin(k * p) * np.exp(-p * p), -half, half)) < 1e-13


@settings(max_examples=20, deadline=None)
@given(beta=st.floats(1e-4, 1.0), k=st.floats(0.0, 3.0))
def test_cumulative_final_value_matches_integral(beta, k):
    grid = momentum_grid(beta, 256)
    sb = math.sqrt(beta)
    f = lambda p: np.cos(sb * p) ** 2 * np.exp(1j * k * sb * p)  # noqa: E731
    samples = SampledWaveFunction(AbscissaKind.MOMENTUM_P, grid.nodes, f(grid.nodes))
    out = cumulative_integral(samples, grid, with_endpoint=True)
    assert out.abscissae[-1] == grid.half_width
    direct = integrate(f, -grid.half_width, grid.half_width)
    assert abs(out.values[-1] - direct) < 1e-12 * grid.half_width
    # running values increase monotonically for a positive integrand
    pos = cumulative_integral(samples.with_values(np.cos(sb * grid.nodes) ** 2), grid)
    assert np.all(np.diff(pos.values.real) > 0)


def test_cumulative_integral_pointwise():
    grid = momentum_grid(1.0, 128, scale=0.5)
    s = SampledWaveFunction(AbscissaKind.MOMENTUM_P, grid.nodes, np.cos(grid.nodes))
    out = cumulative_integral(s, grid)
    np.testing.assert_allclose(out.values.real, np.sin(grid.nodes) + 1.0, atol=1e-14)


def test_cumulative_integral_rejects_foreign_samples():
    grid = momentum_grid(1.0, 128)
    with pytest.raises(ValueError, match="not on the supplied grid"):
        cumulative_integral(SampledWaveFunction("momentum_p", [0.0, 0.1], [1.0, 1.0]), grid)
    with pytest.raises(ValueError, match="at least 2"):
        cumulative_integral(SampledWaveFunction("momentum_p", [0.0], [1.0]), grid)


def test_grid_derivative_and_fourier():
    grid = momentum_grid(0.25, 256, scale=0.1)
    p = grid.nodes
    np.testing.assert_allclose(grid_derivative(np.sin(p) ** 2, grid), np.sin(2 * p), atol=1e-10)
    w = np.array([0.0, 0.3, 1.7, 25.0])
    expected = np.array([integrate(lambda q, w=wk: np.cos(q / 2) ** 2 * np.cos(w * q), -math.pi, math.pi).real for wk in w])
    np.testing.assert_allclose(grid_fourier(np.cos(p / 2) ** 2, grid, w).real, expected, atol=1e-13)
    assert grid_integral(np.ones_like(p), grid).real == pytest.approx(2 * math.pi, rel=1e-14)


def _quantization(eps):
    return 1.0 / (2.0 * (math.sqrt(eps) + 0.1 * eps)) - 1.0


def test_find_root_against_bisection_oracle():
    bracket = RootBracket.around(_quantization, 0.1, 0.25)
    root = find_root(_quantization, bracket, abs_tol=1e-15)
    assert root == pytest.approx(EPS_1_ORACLE, rel=1e-13)
    assert bisect(_quantization, 0.1, 0.25) == pytest.approx(EPS_1_ORACLE, rel=1e-14)


def test_root_bracket_validation():
    with pytest.raises(ValueError, match="straddle"):
        RootBracket.around(_quantization, 0.01, 0.1)
    with pytest.raises(ValueError):
        RootBracket(1.0, 0.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        bisect(_quantization, 0.01, 0.1)


@settings(max_examples=30, deadline=None)
@given(c=st.floats(-5, 5), s=st.floats(0.5, 3.0))
def test_find_root_matches_bisect(c, s):
    f = lambda x: math.atan(s * (x - c))  # noqa: E731
    bracket = RootBracket.around(f, -10.0, 10.0)
    assert find_root(f, bracket, 1e-14) == pytest.approx(bisect(f, -10.0, 10.0), abs=1e-12)


def test_derivative():
    d, err = derivative(np.exp, 0.3, full_output=True)
    assert abs(d - math.exp(0.3)) < 1e-12
    assert err < 1e-10
    with pytest.raises(ValueError):
        derivative(np.exp, 0.0, h=0.0)
