"""Post-processing of traces: exponential rate fits and reaching-condition audits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pesmc.control import GainCertificate, certify_gain
from pesmc.errors import InsufficientTrace, UnfittableSeries
from pesmc.sim import detect_reaching, reaching_band
from pesmc.trace import SimTrace

__all__ = ["SimTrace", "RateFit", "AuditReport", "fit_rate", "audit_certificate"]

SETTLING_SLACK = 1.05


@dataclass(frozen=True)
class RateFit:
    rate: float
    window: tuple[float, float]
    residual: float
    series_name: str


def fit_rate(trace: SimTrace, series: str, window: tuple[float, float]) -> RateFit:
    """Least-squares slope of log(series) against t on the closed window."""
    t0, t1 = window
    if not t0 < t1:
        raise UnfittableSeries(f"window start {t0} must precede end {t1}")
    times = trace.times
    mask = (times >= t0 - 1e-12) & (times <= t1 + 1e-12)
    if mask.sum() < 2:
        raise UnfittableSeries(f"fewer than two samples of {series!r} in window [{t0}, {t1}]")
    values = trace.series(series)[mask]
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise UnfittableSeries(f"{series!r} is not strictly positive on [{t0}, {t1}]")
    t = times[mask]
    logs = np.log(values)
    slope, intercept = np.polyfit(t, logs, 1)
    residual = float(np.sqrt(np.mean((logs - (slope * t + intercept)) ** 2)))
    return RateFit(float(slope), (float(t[0]), float(t[-1])), residual, series)


@dataclass(frozen=True)
class AuditReport:
    r_max: float
    certificate: GainCertificate
    band: float
    reaching_time: Optional[float]
    # None when the certificate fails and the comparison is skipped
    within_bound: Optional[bool]

    def format(self) -> str:
        reach = "none" if self.reaching_time is None else f"{self.reaching_time:.12g}"
        within = "skipped" if self.within_bound is None else str(self.within_bound).lower()
        return "\n".join(
            [
                f"r_max = {self.r_max:.12g}",
                self.certificate.format(),
                f"band = {self.band:.12g}",
                f"reaching_time = {reach}",
                f"reaching_within_bound = {within}",
            ]
        )


def audit_certificate(
    trace: SimTrace,
    gain: float,
    psi_boundary: float,
    d_max: float,
    band: Optional[float] = None,
) -> AuditReport:
    """Check the reaching condition against the remainder actually measured along ``trace``.

    ``band`` defaults to the chatter band of the trace's own configuration.
    """
    if trace.remainder is None or len(trace) == 0:
        raise InsufficientTrace("trace carries no remainder data (open-loop run or empty trace)")
    r = trace.remainder
    if not np.all(np.isfinite(r)):
        raise InsufficientTrace("remainder series contains non-finite values")
    cfg = trace.config_echo
    compensated = cfg is not None and cfg.controller is not None and cfg.controller.law == "compensated"
    r_max = float(np.max(np.abs(r)))
    cert = certify_gain(gain, psi_boundary, d_max, 0.0 if compensated else r_max, float(trace.s[0]))
    if band is None:
        if cfg is None:
            raise InsufficientTrace("no band given and trace has no configuration to derive one")
        band = reaching_band(cfg)
    reach = detect_reaching(trace, band)
    if not cert.satisfied:
        within = None
    else:
        within = reach is not None and reach <= cert.settling_bound * SETTLING_SLACK
    return AuditReport(r_max, cert, band, reach, within)


def envelope_violation(trace: SimTrace, eta: float, band: float) -> float:
    """Largest excess of |s(t)| over max(0, |s(0)| - eta*t) + band (<= 0 means inside)."""
    s0 = abs(trace.s[0])
    envelope = np.maximum(0.0, s0 - eta * (trace.times - trace.times[0])) + band
    return float(np.max(np.abs(trace.s) - envelope))


def default_fit_window(trace: SimTrace, start: float = 1.0) -> tuple[float, float]:
    t_end = float(trace.times[-1])
    return (min(start, 0.5 * t_end), t_end)


def summarize(trace: SimTrace) -> dict:
    out = {
        "t_final": float(trace.times[-1]),
        "final_norm_u_l2": float(trace.norm_u_l2[-1]),
        "final_norm_v_l2": float(trace.norm_v_l2[-1]),
        "final_norm_u_h1": float(trace.norm_u_h1[-1]),
        "reaching_time": None,
        "fitted_rate_u_l2": math.nan,
    }
    cfg = trace.config_echo
    if cfg is not None and cfg.controller is not None:
        out["reaching_time"] = detect_reaching(trace, reaching_band(cfg))
    try:
        out["fitted_rate_u_l2"] = fit_rate(trace, "norm_u_l2", default_fit_window(trace)).rate
    except UnfittableSeries:
        pass
    return out
