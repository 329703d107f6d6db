import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pesmc.core import (
    Field,
    PhysicalParams,
    build_grid,
    derivative,
    h1_norm,
    integrate,
    l2_norm,
    weighted_inner,
)
from pesmc.errors import IncompatibleGrids, InvalidCoefficient, InvalidResolution

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
# squares of smaller scalars underflow
scalars = finite.filter(lambda c: c == 0 or abs(c) > 1e-100)


def sin_field(n):
    g = build_grid(n)
    return Field.from_function(g, lambda x: np.sin(np.pi * x))


def test_build_grid_n10():
    g = build_grid(10)
    assert g.h == 0.1
    assert g.nodes[3] == pytest.approx(0.3, abs=1e-15)
    assert g.weights[0] == pytest.approx(0.05)
    assert g.weights[5] == pytest.approx(0.1)
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0


def test_build_grid_minimum():
    g = build_grid(8)
    assert g.size == 9
    assert abs(g.weights.sum() - 1.0) <= 1e-12


@pytest.mark.parametrize("n", [4, 7, 0, -3])
def test_build_grid_rejects_coarse(n):
    with pytest.raises(InvalidResolution):
        build_grid(n)


@pytest.mark.parametrize("n", [8, 9, 33, 200, 1000])
def test_grid_invariants(n):
    g = build_grid(n)
    assert np.all(np.diff(g.nodes) > 0)
    assert abs(g.weights.sum() - 1.0) <= 1e-12


def test_params_validation():
    with pytest.raises(InvalidCoefficient):
        PhysicalParams(0.0, 1, 1, 1)
    with pytest.raises(InvalidCoefficient):
        PhysicalParams(1.0, math.nan, 1, 1)


def test_field_rejects_bad_values():
    g = build_grid(8)
    with pytest.raises(ValueError):
        Field(g, np.ones(5))
    with pytest.raises(ValueError):
        Field(g, np.full(9, np.inf))


def test_integrate_examples():
    g = build_grid(10)
    assert integrate(Field(g, 1.0)) == pytest.approx(1.0, abs=1e-15)
    assert integrate(Field.from_function(g, lambda x: x)) == pytest.approx(0.5, abs=1e-15)
    assert abs(integrate(sin_field(200)) - 2 / np.pi) < 1e-4


def test_l2_norm_examples():
    g = build_grid(16)
    assert l2_norm(Field(g, 0.0)) == 0.0
    assert l2_norm(Field(g, 2.0)) == pytest.approx(2.0, abs=1e-14)
    assert abs(l2_norm(sin_field(200)) - 1 / math.sqrt(2)) < 1e-4


def test_h1_norm_examples():
    g = build_grid(16)
    assert h1_norm(Field(g, 0.0)) == 0.0
    assert h1_norm(Field(g, -3.0)) == pytest.approx(3.0, abs=1e-13)
    expected = math.sqrt(0.5 + math.pi**2 / 2)
    assert abs(h1_norm(sin_field(200)) - expected) < 1e-2


def test_derivative_is_second_order_at_ends():
    errs = []
    for n in (50, 100):
        g = build_grid(n)
        f = Field.from_function(g, lambda x: np.sin(2 * x))
        errs.append(np.max(np.abs(derivative(f).values - 2 * np.cos(2 * g.nodes))))
    assert 3.5 <= errs[0] / errs[1] <= 4.5
    # quadratics are differentiated exactly
    g = build_grid(9)
    f = Field.from_function(g, lambda x: 3 * x**2 - x)
    assert np.allclose(derivative(f).values, 6 * g.nodes - 1, atol=1e-12)


def test_weighted_inner_examples():
    g = build_grid(12)
    assert weighted_inner(Field(g, 1.0), Field(g, 1.0)) == pytest.approx(1.0, abs=1e-15)
    f = sin_field(200)
    assert abs(weighted_inner(f, Field(f.grid, 1.0)) - 2 / np.pi) < 1e-4
    with pytest.raises(IncompatibleGrids):
        weighted_inner(Field(build_grid(10), 1.0), Field(build_grid(20), 1.0))


@given(st.integers(8, 400), finite, finite)
def test_integrate_exact_on_affine(n, a, b):
    g = build_grid(n)
    f = Field.from_function(g, lambda x: a * x + b)
    assert abs(integrate(f) - (a / 2 + b)) <= 1e-12 * max(1.0, abs(a), abs(b))


@settings(max_examples=50)
@given(st.integers(8, 64).flatmap(lambda n: arrays(float, n + 1, elements=scalars)), scalars)
def test_norm_homogeneity(values, c):
    g = build_grid(len(values) - 1)
    f = Field(g, values)
    lhs = l2_norm(f * c)
    rhs = abs(c) * l2_norm(f)
    assert abs(lhs - rhs) <= 1e-12 * max(rhs, 1e-300)


@settings(max_examples=50)
@given(st.integers(8, 64).flatmap(lambda n: st.tuples(arrays(float, n + 1, elements=finite), arrays(float, n + 1, elements=finite))))
def test_cauchy_schwarz(pair):
    a, b = pair
    g = build_grid(len(a) - 1)
    f, h = Field(g, a), Field(g, b)
    assert abs(weighted_inner(f, h)) <= l2_norm(f) * l2_norm(h) * (1 + 1e-12) + 1e-12


def test_quadrature_refinement_order():
    errors = [abs(integrate(sin_field(n)) - 2 / np.pi) for n in (16, 32, 64, 128)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.5 <= coarse / fine <= 4.5
