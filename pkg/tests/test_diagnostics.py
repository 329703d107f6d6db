import math

import numpy as np
import pytest

from pesmc.control import certify_gain
from pesmc.core import PhysicalParams
from pesmc.diagnostics import audit_certificate, envelope_violation, fit_rate
from pesmc.errors import InsufficientTrace, UnfittableSeries
from pesmc.sim import InitialProfile, SimConfig, run
from pesmc.spectral import eigenvalue
from pesmc.trace import SimTrace


def synthetic(times, **series):
    z = np.zeros_like(times)
    cols = {k: series.get(k, z) for k in ("s", "omega", "d", "norm_u_l2", "norm_v_l2", "norm_u_h1")}
    return SimTrace(times, remainder=series.get("remainder"), **cols)


def test_fit_rate_exact_exponential():
    t = np.linspace(0, 6, 601)
    fit = fit_rate(synthetic(t, norm_u_l2=np.exp(t / 6)), "norm_u_l2", (2, 6))
    assert fit.rate == pytest.approx(1 / 6, abs=1e-6)
    assert fit.residual < 1e-10
    assert fit.window == pytest.approx((2.0, 6.0))


def test_fit_rate_constant_and_errors():
    t = np.linspace(0, 1, 11)
    assert fit_rate(synthetic(t, norm_v_l2=np.full_like(t, 3.0)), "norm_v_l2", (0, 1)).rate == pytest.approx(0, abs=1e-12)
    touching = np.linspace(1, 0, 11)
    with pytest.raises(UnfittableSeries):
        fit_rate(synthetic(t, norm_u_l2=touching), "norm_u_l2", (0, 1))
    with pytest.raises(UnfittableSeries):
        fit_rate(synthetic(t, norm_u_l2=np.ones_like(t)), "norm_u_l2", (1, 0))


@pytest.mark.parametrize("mode", [0, 1])
def test_fit_rate_recovers_eigenvalue(fig1_params, mode):
    t_final = 2.0 if mode == 0 else 1.5
    cfg = SimConfig(fig1_params, 200, 1e-4, t_final, u0=InitialProfile("cos", mode))
    fit = fit_rate(run(cfg), "norm_u_l2", (1.0, t_final))
    lam = eigenvalue(fig1_params, mode)
    assert abs(fit.rate - lam) <= 0.02 * abs(lam)


def test_audit_requires_remainder():
    t = np.linspace(0, 1, 5)
    with pytest.raises(InsufficientTrace):
        audit_certificate(synthetic(t), 2.0, 1.0, 1.0, band=1e-3)


def test_audit_consistent_with_certificate():
    t = np.linspace(0, 1, 101)
    s = np.maximum(0.0, 0.6 - t)
    r = 0.3 * np.cos(7 * t)
    trace = synthetic(t, s=s, remainder=r)
    report = audit_certificate(trace, 2.0, 1.0, 1.0, band=1e-3)
    cert = certify_gain(2.0, 1.0, 1.0, float(np.max(np.abs(r))), 0.6)
    assert report.certificate.eta == pytest.approx(cert.eta, rel=1e-12)
    assert report.reaching_time == pytest.approx(0.6, abs=0.011)
    assert report.within_bound


def test_audit_skips_when_unsatisfied():
    t = np.linspace(0, 1, 11)
    trace = synthetic(t, s=np.ones_like(t), remainder=np.full_like(t, 5.0))
    report = audit_certificate(trace, 2.0, 1.0, 1.0, band=1e-3)
    assert not report.certificate.satisfied
    assert report.within_bound is None
    assert math.isinf(report.certificate.settling_bound)


def test_envelope_violation_sign():
    t = np.linspace(0, 1, 11)
    inside = synthetic(t, s=np.maximum(0, 0.5 - t))
    assert envelope_violation(inside, 1.0, 1e-3) <= 0
    outside = synthetic(t, s=np.full_like(t, 0.5))
    assert envelope_violation(outside, 1.0, 1e-3) > 0


def test_trace_rejects_inconsistent_lengths():
    with pytest.raises(ValueError):
        SimTrace([0, 1], [0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0])
    with pytest.raises(ValueError):
        SimTrace([1, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0])
