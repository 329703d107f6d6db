import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pesmc.core import PhysicalParams, build_grid
from pesmc.elliptic import mode_gain
from pesmc.errors import DomainError
from pesmc.spectral import analytic_mode_solution, eigenvalue, modal_report

positive = st.floats(1e-3, 50.0)
real = st.floats(-20.0, 20.0)


@st.composite
def dominant_params(draw):
    alpha = draw(st.floats(0.0, 10.0))
    beta = draw(st.floats(0.0, 10.0))
    sign = draw(st.sampled_from([1.0, -1.0]))
    return PhysicalParams(draw(positive), draw(real), sign * alpha, sign * beta)


def test_eigenvalue_fig1(fig1_params):
    assert abs(eigenvalue(fig1_params, 0) - 1.0 / 6.0) <= 1e-12
    lam1 = -1 / 3 + 0.125 / (0.25 + math.pi**2) - math.pi**2
    assert eigenvalue(fig1_params, 1) == pytest.approx(lam1, rel=1e-14)
    assert eigenvalue(fig1_params, 1) == pytest.approx(-10.1906, abs=1e-4)


def test_eigenvalue_decoupled():
    p = PhysicalParams(0.7, 0.4, 0.0, 3.0)
    for n in range(5):
        assert eigenvalue(p, n) == pytest.approx(-0.4 - (n * math.pi) ** 2, rel=1e-15)
    with pytest.raises(DomainError):
        eigenvalue(p, -1)


def test_modal_report_examples(fig1_params):
    rep = modal_report(fig1_params)
    assert not rep.stable
    assert rep.dominant == pytest.approx(1 / 6, abs=1e-12)
    assert len(rep.eigenvalues) == 33
    stable = modal_report(PhysicalParams(0.25, 1.0, 0.25, 0.5), 4)
    assert stable.stable and stable.dominant == pytest.approx(-0.5, abs=1e-15)
    assert stable.margin == pytest.approx(0.5)
    decoupled = modal_report(PhysicalParams(0.25, 1.0, 0.0, 0.5), 4)
    assert decoupled.stable and decoupled.dominant == -1.0


def test_modal_report_negative_coupling_warns():
    rep = modal_report(PhysicalParams(1.0, 0.0, -2.0, 3.0), 8)
    assert rep.regime_warning
    assert rep.dominant == max(lam for _, lam in rep.eigenvalues)


def test_analytic_mode_solution(fig1_params):
    g = build_grid(20)
    assert np.allclose(analytic_mode_solution(fig1_params, 0, 0.0, g).values, 1.0)
    assert np.allclose(analytic_mode_solution(fig1_params, 0, 6.0, g).values, math.e, rtol=1e-12)
    lam2 = -1 / 3 + 0.125 / (0.25 + 4 * math.pi**2) - 4 * math.pi**2
    assert lam2 == pytest.approx(-39.8086, abs=1e-4)
    f = analytic_mode_solution(fig1_params, 2, 1.0, g)
    assert np.allclose(f.values, math.exp(lam2) * np.cos(2 * np.pi * g.nodes), rtol=1e-12, atol=0)
    with pytest.raises(DomainError):
        analytic_mode_solution(fig1_params, 0, -1.0, g)


@given(dominant_params())
def test_monotone_in_mode(p):
    lams = [eigenvalue(p, n) for n in range(65)]
    assert all(a > b for a, b in zip(lams, lams[1:]))


@given(dominant_params())
def test_stable_flag_matches_dominant(p):
    rep = modal_report(p, 4)
    assert rep.stable == (eigenvalue(p, 0) < 0)
    assert rep.stable == (rep.margin > 0) or rep.margin == 0


@given(dominant_params(), st.integers(0, 64))
def test_consistent_with_elliptic_gain(p, n):
    expected = -p.rho - (n * math.pi) ** 2 + p.alpha * mode_gain(p, n)
    assert eigenvalue(p, n) == pytest.approx(expected, rel=1e-12, abs=1e-12)
