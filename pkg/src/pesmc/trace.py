"""Recorded time series of a simulation run."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from pesmc.core import Field

SERIES = ("s", "omega", "d", "norm_u_l2", "norm_v_l2", "norm_u_h1")


@dataclass
class SimTrace:
    times: np.ndarray
    s: np.ndarray
    omega: np.ndarray
    d: np.ndarray
    norm_u_l2: np.ndarray
    norm_v_l2: np.ndarray
    norm_u_h1: np.ndarray
    # R(t); only recorded when a controller is active
    remainder: Optional[np.ndarray] = None
    snapshots: list[tuple[float, Field, Field]] = field(default_factory=list)
    config_echo: object = None

    def __post_init__(self):
        for name in ("times",) + SERIES:
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.remainder is not None:
            self.remainder = np.asarray(self.remainder, dtype=float)
        n = len(self.times)
        lengths = {name: len(getattr(self, name)) for name in SERIES}
        if self.remainder is not None:
            lengths["remainder"] = len(self.remainder)
        bad = [k for k, v in lengths.items() if v != n]
        if bad:
            raise ValueError(f"series {bad} do not match {n} time samples")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("trace times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def series(self, name: str) -> np.ndarray:
        if name not in SERIES and name != "remainder":
            raise KeyError(f"unknown series {name!r}; expected one of {SERIES}")
        values = getattr(self, name)
        if values is None:
            raise KeyError(f"trace has no {name!r} series")
        return values

    @classmethod
    def empty(cls, config_echo=None) -> "SimTrace":
        z = np.zeros(0)
        return cls(z, z, z, z, z, z, z, config_echo=config_echo)
