"""Sliding variable, remainder term, regularized sign and the boundary feedback laws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from pesmc.core import Field, Grid, PhysicalParams, derivative, weighted_inner
from pesmc.errors import InvalidCoefficient

LAWS = ("basic", "compensated")
SIGN_KINDS = ("ideal", "saturation", "tanh")
PSI_KINDS = ("constant", "polynomial", "tabulated")


@dataclass(frozen=True)
class TestFunction:
    """Weight psi of the sliding variable s = <psi, u>, with psi(1) != 0."""

    __test__ = False  # not a pytest class

    kind: str
    samples: Field
    derivative_samples: Field
    boundary_value: float
    coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in PSI_KINDS:
            raise ValueError(f"unknown test function kind {self.kind!r}")
        if self.boundary_value == 0 or not math.isfinite(self.boundary_value):
            raise InvalidCoefficient("test function must satisfy psi(1) != 0")

    @property
    def grid(self) -> Grid:
        return self.samples.grid

    @cached_property
    def normalized(self) -> tuple[Field, Field]:
        """(psi, psi_x) divided by psi(1); unchanged by positive rescaling of psi."""
        return self.samples * (1.0 / self.boundary_value), self.derivative_samples * (1.0 / self.boundary_value)

    @classmethod
    def constant(cls, grid: Grid, value: float = 1.0) -> "TestFunction":
        return cls(
            "constant",
            Field(grid, float(value)),
            Field(grid, 0.0),
            float(value),
            (float(value),),
        )

    @classmethod
    def polynomial(cls, grid: Grid, coefficients) -> "TestFunction":
        """psi(x) = sum_k coefficients[k] * x**k."""
        coefs = tuple(float(c) for c in coefficients)
        if not coefs:
            raise ValueError("polynomial test function needs at least one coefficient")
        poly = np.polynomial.Polynomial(coefs)
        x = grid.nodes
        return cls(
            "polynomial",
            Field(grid, poly(x)),
            Field(grid, poly.deriv()(x)),
            float(poly(1.0)),
            coefs,
        )

    @classmethod
    def tabulated(cls, grid: Grid, values) -> "TestFunction":
        samples = Field(grid, values)
        return cls("tabulated", samples, derivative(samples), float(samples.values[-1]))

    def scaled(self, c: float) -> "TestFunction":
        return TestFunction(
            self.kind,
            self.samples * c,
            self.derivative_samples * c,
            self.boundary_value * c,
            tuple(c * a for a in self.coefficients),
        )

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.boundary_value}
        if self.kind == "polynomial":
            return {"kind": "polynomial", "coefficients": list(self.coefficients)}
        return {"kind": "tabulated", "values": self.samples.values.tolist()}


@dataclass(frozen=True)
class SignMode:
    kind: str = "saturation"
    eps: float = 1e-3

    def __post_init__(self):
        if self.kind not in SIGN_KINDS:
            raise ValueError(f"unknown sign mode {self.kind!r}; expected one of {SIGN_KINDS}")
        if self.kind != "ideal" and not self.eps > 0:
            raise InvalidCoefficient(f"{self.kind} sign needs eps > 0, got {self.eps}")

    def to_dict(self) -> dict:
        if self.kind == "ideal":
            return {"kind": "ideal"}
        return {"kind": self.kind, "eps": self.eps}


def regularized_sign(mode: SignMode, s: float) -> float:
    """Bounded odd approximation of sign(s); ideal mode uses sign(0) = 0."""
    if mode.kind == "ideal":
        return float(np.sign(s))
    if mode.kind == "saturation":
        return min(1.0, max(-1.0, s / mode.eps))
    return math.tanh(s / mode.eps)


@dataclass(frozen=True)
class ControllerConfig:
    gain: float
    psi: TestFunction
    law: str = "basic"
    sign_mode: SignMode = SignMode()

    def __post_init__(self):
        if not self.gain > 0:
            raise InvalidCoefficient(f"gain K must be > 0, got {self.gain}")
        if self.law not in LAWS:
            raise ValueError(f"unknown control law {self.law!r}; expected one of {LAWS}")

    def to_dict(self) -> dict:
        return {
            "gain": self.gain,
            "law": self.law,
            "sign_mode": self.sign_mode.to_dict(),
            "psi": self.psi.to_dict(),
        }


def sliding_value(psi: TestFunction, u: Field) -> float:
    return weighted_inner(psi.samples, u)


def _remainder(weight: Field, weight_x: Field, u: Field, v: Field, alpha: float) -> float:
    return -weighted_inner(weight_x, derivative(u)) + alpha * weighted_inner(weight, v)


def remainder(psi: TestFunction, u: Field, v: Field, alpha: float) -> float:
    """R = -<psi_x, u_x> + alpha*<psi, v>, with v the elliptic response to u."""
    return _remainder(psi.samples, psi.derivative_samples, u, v, alpha)


def normalized_measurements(psi: TestFunction, u: Field, v: Field, alpha: float) -> tuple[float, float]:
    """(s, R) divided by psi(1), computed directly from the normalized weight."""
    weight, weight_x = psi.normalized
    return weighted_inner(weight, u), _remainder(weight, weight_x, u, v, alpha)


def feedback(cfg: ControllerConfig, rho: float, s_hat: float, r_hat: float = 0.0) -> float:
    """Boundary flux omega from s/psi(1) and R/psi(1).

    omega = -K sign(s) + rho s/psi(1)            (basic)
    omega = -K sign(s) + rho s/psi(1) - R/psi(1) (compensated)

    The regularized sign acts on s/|psi(1)|, so the boundary layer in s has
    width eps*|psi(1)| and the law depends on psi only through psi/psi(1).
    """
    direction = s_hat if cfg.psi.boundary_value > 0 else -s_hat
    omega = -cfg.gain * regularized_sign(cfg.sign_mode, direction) + rho * s_hat
    if cfg.law == "compensated":
        omega -= r_hat
    return omega


def control_output(cfg: ControllerConfig, params: PhysicalParams, u: Field, v: Field) -> float:
    s_hat, r_hat = normalized_measurements(cfg.psi, u, v, params.alpha)
    return feedback(cfg, params.rho, s_hat, r_hat)


@dataclass(frozen=True)
class GainCertificate:
    gain: float
    psi_boundary: float
    d_max: float
    r_max: float
    required_gain: float
    eta: float
    satisfied: bool
    settling_bound: float

    def format(self) -> str:
        return "\n".join(
            [
                f"K = {self.gain:.12g}",
                f"psi(1) = {self.psi_boundary:.12g}",
                f"d_max = {self.d_max:.12g}",
                f"r_max = {self.r_max:.12g}",
                f"required_gain = {self.required_gain:.12g}",
                f"eta = {self.eta:.12g}",
                f"satisfied = {str(self.satisfied).lower()}",
                f"settling_bound = {self.settling_bound:.12g}",
            ]
        )


def certify_gain(gain: float, psi_boundary: float, d_max: float, r_max: float, s0: float) -> GainCertificate:
    """Reaching condition K > (|psi(1)| d_max + R_max)/|psi(1)| and T* = |s(0)|/eta."""
    if d_max < 0 or r_max < 0:
        raise ValueError("d_max and r_max must be non-negative")
    if psi_boundary == 0:
        raise InvalidCoefficient("psi(1) must be non-zero")
    p = abs(psi_boundary)
    perturbation = p * d_max + r_max
    eta = gain * p - perturbation
    satisfied = eta > 0
    return GainCertificate(
        gain=gain,
        psi_boundary=psi_boundary,
        d_max=d_max,
        r_max=r_max,
        required_gain=perturbation / p,
        eta=eta,
        satisfied=satisfied,
        settling_bound=abs(s0) / eta if satisfied else math.inf,
    )


def gain_certificate(cfg: ControllerConfig, d_max: float, r_max: float, s0: float) -> GainCertificate:
    """Certificate for ``cfg``; the compensated law cancels R, so r_max is dropped."""
    if cfg.law == "compensated":
        r_max = 0.0
    return certify_gain(cfg.gain, cfg.psi.boundary_value, d_max, r_max, s0)
