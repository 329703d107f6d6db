"""IMEX time integration of the closed-loop parabolic-elliptic system.

Each step from t to t + dt:

1. the boundary flux omega + d is frozen at its value at t (zero-order hold);
2. alpha*v(t) and the flux, inserted through the ghost node
   u[n+1] = u[n-1] + 2h(omega + d), are explicit;
3. diffusion and -rho*u are advanced by Crank-Nicolson (one tridiagonal solve);
4. v(t + dt) is re-solved from the constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Optional

import numpy as np

from pesmc import elliptic
from pesmc.control import ControllerConfig, TestFunction, feedback, normalized_measurements, sliding_value
from pesmc.core import Field, PhysicalParams, build_grid, h1_norm, l2_norm
from pesmc.disturbance import DisturbanceModel, evaluate
from pesmc.errors import DivergenceError, ValidationError
from pesmc.trace import SimTrace
from pesmc.tridiag import neumann_laplacian_bands, thomas, tridiag_matvec

PROFILES = ("sin", "cos", "constant", "tabulated")
EXPLICIT_STABILITY_LIMIT = 0.5


@dataclass(frozen=True)
class InitialProfile:
    """u0 = amplitude*sin(mode*pi*x), amplitude*cos(mode*pi*x), a constant, or tabulated values."""

    profile: str = "sin"
    mode: int = 1
    amplitude: float = 1.0
    values: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValidationError("u0.profile", f"unknown profile {self.profile!r}; expected one of {PROFILES}")
        if self.profile == "tabulated" and not self.values:
            raise ValidationError("u0.values", "tabulated profile needs values")

    def resolve(self, grid) -> Field:
        x = grid.nodes
        if self.profile == "sin":
            return Field(grid, self.amplitude * np.sin(self.mode * np.pi * x))
        if self.profile == "cos":
            return Field(grid, self.amplitude * np.cos(self.mode * np.pi * x))
        if self.profile == "constant":
            return Field(grid, self.amplitude)
        return Field(grid, self.values)

    def to_dict(self) -> dict:
        if self.profile == "tabulated":
            return {"profile": "tabulated", "values": list(self.values)}
        if self.profile == "constant":
            return {"profile": "constant", "amplitude": self.amplitude}
        return {"profile": self.profile, "mode": self.mode, "amplitude": self.amplitude}


@dataclass(frozen=True)
class SimConfig:
    params: PhysicalParams
    grid_n: int = 200
    dt: float = 1e-4
    t_final: float = 10.0
    controller: Optional[ControllerConfig] = None
    disturbance: DisturbanceModel = DisturbanceModel()
    u0: InitialProfile = InitialProfile()
    snapshot_stride: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt", f"must be > 0, got {self.dt}")
        if not self.t_final > 0:
            raise ValidationError("t_final", f"must be > 0, got {self.t_final}")
        if self.dt > self.t_final:
            raise ValidationError("dt", f"dt={self.dt} exceeds t_final={self.t_final}")
        p = self.params
        explicit_rate = max(abs(p.rho), p.coupling / p.gamma)
        if self.dt * explicit_rate > EXPLICIT_STABILITY_LIMIT:
            raise ValidationError(
                "dt",
                f"dt*max(|rho|, alpha*beta/gamma) = {self.dt * explicit_rate:.3g} exceeds {EXPLICIT_STABILITY_LIMIT}",
            )
        if self.snapshot_stride < 0:
            raise ValidationError("snapshot_stride", "must be >= 0")
        if self.controller is not None and self.controller.psi.grid.n != self.grid_n:
            raise ValidationError("controller.psi", "test function is sampled on a different grid")
        if self.u0.profile == "tabulated" and len(self.u0.values) != self.grid_n + 1:
            raise ValidationError("u0.values", f"need {self.grid_n + 1} values, got {len(self.u0.values)}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def open_loop(self) -> "SimConfig":
        return replace(self, controller=None)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {"gamma": p.gamma, "rho": p.rho, "alpha": p.alpha, "beta": p.beta},
            "grid_n": self.grid_n,
            "dt": self.dt,
            "t_final": self.t_final,
            "controller": None if self.controller is None else self.controller.to_dict(),
            "disturbance": self.disturbance.to_dict(),
            "u0": self.u0.to_dict(),
            "snapshot_stride": self.snapshot_stride,
        }


@dataclass(frozen=True)
class SimState:
    """State at time t together with the control it will hold over [t, t + dt]."""

    index: int
    t: float
    u: Field
    v: Field
    omega: float
    d: float
    s: float
    r: float


class Integrator:
    """Pre-assembled stepping operators for one configuration."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.grid = build_grid(cfg.grid_n)
        self.elliptic = elliptic.assemble(self.grid, cfg.params.gamma)
        lower, diag, upper = neumann_laplacian_bands(self.grid.n, self.grid.h)
        diag = diag - cfg.params.rho
        half = 0.5 * cfg.dt
        self._lhs = (-half * lower, 1.0 - half * diag, -half * upper)
        self._rhs = (half * lower, 1.0 + half * diag, half * upper)
        # psi = 1 gives the mean of u as the monitored quantity in open loop
        self._psi = cfg.controller.psi if cfg.controller else TestFunction.constant(self.grid)

    def _observe(self, index: int, u: Field, v: Field) -> SimState:
        cfg = self.cfg
        t = index * cfg.dt
        d = evaluate(cfg.disturbance, t)
        if cfg.controller is None:
            return SimState(index, t, u, v, 0.0, d, sliding_value(self._psi, u), math.nan)
        s_hat, r_hat = normalized_measurements(self._psi, u, v, cfg.params.alpha)
        omega = feedback(cfg.controller, cfg.params.rho, s_hat, r_hat)
        psi1 = self._psi.boundary_value
        return SimState(index, t, u, v, omega, d, psi1 * s_hat, psi1 * r_hat)

    def initial_state(self) -> SimState:
        u0 = self.cfg.u0.resolve(self.grid)
        v0 = elliptic.apply_K(self.elliptic, u0, self.cfg.params.beta)
        return self._observe(0, u0, v0)

    def step(self, state: SimState) -> SimState:
        cfg = self.cfg
        rhs = tridiag_matvec(*self._rhs, state.u.values)
        rhs += cfg.dt * cfg.params.alpha * state.v.values
        rhs[-1] += cfg.dt * 2.0 * (state.omega + state.d) / self.grid.h
        u_new = thomas(*self._lhs, rhs)
        if not np.isfinite(u_new).all():
            raise DivergenceError((state.index + 1) * cfg.dt)
        u = Field._trusted(self.grid, u_new)
        try:
            v = elliptic.apply_K(self.elliptic, u, cfg.params.beta)
        except FloatingPointError:
            raise DivergenceError((state.index + 1) * cfg.dt) from None
        return self._observe(state.index + 1, u, v)

    def states(self) -> Iterator[SimState]:
        """Initial state followed by every step up to t_final."""
        state = self.initial_state()
        yield state
        for _ in range(self.cfg.n_steps):
            state = self.step(state)
            yield state


def step(state: SimState, cfg: SimConfig) -> SimState:
    return Integrator(cfg).step(state)


class _Recorder:
    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.rows: list[tuple] = []
        self.remainder: list[float] = []
        self.snapshots: list = []

    def add(self, state: SimState):
        self.rows.append(
            (state.t, state.s, state.omega, state.d, l2_norm(state.u), l2_norm(state.v), h1_norm(state.u))
        )
        self.remainder.append(state.r)
        stride = self.cfg.snapshot_stride
        if stride > 0 and state.index % stride == 0:
            self.snapshots.append((state.t, state.u, state.v))

    def trace(self) -> SimTrace:
        if not self.rows:
            return SimTrace.empty(self.cfg)
        cols = np.array(self.rows, dtype=float).T
        return SimTrace(
            *cols,
            remainder=None if self.cfg.controller is None else np.array(self.remainder),
            snapshots=self.snapshots,
            config_echo=self.cfg,
        )


def run(cfg: SimConfig) -> SimTrace:
    """Integrate from u0 (with v0 slaved to u0) to t_final, recording every step."""
    rec = _Recorder(cfg)
    try:
        for state in Integrator(cfg).states():
            rec.add(state)
    except DivergenceError as exc:
        exc.trace = rec.trace()
        raise
    return rec.trace()


def detect_reaching(trace: SimTrace, band: float) -> Optional[float]:
    """First recorded time after which |s| stays within ``band``; None if it never settles."""
    if not band > 0:
        raise ValueError(f"band must be > 0, got {band}")
    if len(trace) == 0:
        return None
    outside = np.flatnonzero(np.abs(trace.s) > band)
    if outside.size == 0:
        return float(trace.times[0])
    last = outside[-1]
    if last == len(trace) - 1:
        return None
    return float(trace.times[last + 1])


def reaching_band(cfg: SimConfig) -> float:
    """eps*|psi(1)| + 5*dt*(K + d_max): sampled-control chatter band around s = 0."""
    ctrl = cfg.controller
    if ctrl is None:
        raise ValueError("reaching band is only defined for closed-loop configurations")
    eps = ctrl.sign_mode.eps if ctrl.sign_mode.kind != "ideal" else 0.0
    return eps * abs(ctrl.psi.boundary_value) + 5.0 * cfg.dt * (ctrl.gain + cfg.disturbance.bound)
