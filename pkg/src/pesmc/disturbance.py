"""Bounded boundary disturbances d(t)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from pesmc.errors import DomainError

KINDS = ("zero", "constant", "sinusoid", "noise")


@dataclass(frozen=True)
class DisturbanceModel:
    """One of

    * ``zero``
    * ``constant``: d = level
    * ``sinusoid``: d = amplitude*sin(angular_frequency*t + phase)
    * ``noise``: piecewise constant over ``hold_interval``, each hold level drawn
      uniformly from [-amplitude, amplitude] by a PCG64 stream keyed on (seed, hold index)
    """

    kind: str = "zero"
    level: float = 0.0
    amplitude: float = 0.0
    angular_frequency: float = 0.0
    phase: float = 0.0
    seed: int = 0
    hold_interval: float = 0.01

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown disturbance kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "noise" and not self.hold_interval > 0:
            raise ValueError("noise hold_interval must be > 0")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, level: float):
        return cls("constant", level=float(level))

    @classmethod
    def sinusoid(cls, amplitude: float, angular_frequency: float, phase: float = 0.0):
        return cls(
            "sinusoid",
            amplitude=float(amplitude),
            angular_frequency=float(angular_frequency),
            phase=float(phase),
        )

    @classmethod
    def noise(cls, amplitude: float, seed: int, hold_interval: float):
        return cls("noise", amplitude=float(amplitude), seed=int(seed), hold_interval=float(hold_interval))

    @property
    def bound(self) -> float:
        """Certified d_max, i.e. sup |d(t)|."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return abs(self.level)
        return abs(self.amplitude)

    def to_dict(self) -> dict:
        fields = {
            "zero": (),
            "constant": ("level",),
            "sinusoid": ("amplitude", "angular_frequency", "phase"),
            "noise": ("amplitude", "seed", "hold_interval"),
        }[self.kind]
        return {"kind": self.kind, **{k: getattr(self, k) for k in fields}}


@lru_cache(maxsize=65536)
def _hold_level(seed: int, index: int) -> float:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
    return float(rng.uniform(-1.0, 1.0))


def evaluate(model: DisturbanceModel, t: float) -> float:
    if t < 0:
        raise DomainError(f"disturbance is defined for t >= 0, got {t}")
    if model.kind == "zero":
        return 0.0
    if model.kind == "constant":
        return model.level
    if model.kind == "sinusoid":
        return model.amplitude * math.sin(model.angular_frequency * t + model.phase)
    index = int(math.floor(t / model.hold_interval))
    return model.amplitude * _hold_level(model.seed, index)
