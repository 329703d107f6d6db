"""Uniform grid on [0, 1], grid-sampled fields, trapezoid quadrature and norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from pesmc.errors import IncompatibleGrids, InvalidCoefficient, InvalidResolution

MIN_INTERVALS = 8


@dataclass(frozen=True)
class PhysicalParams:
    """Coefficients of the coupled system.

    gamma: elliptic reaction, rho: parabolic reaction,
    alpha: coupling of v into the u equation, beta: coupling of u into the v equation.
    """

    gamma: float
    rho: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("gamma", "rho", "alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidCoefficient(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.gamma <= 0:
            raise InvalidCoefficient(f"gamma must be > 0, got {self.gamma}")

    @property
    def coupling(self) -> float:
        """alpha*beta, the strength of the nonlocal feedback loop."""
        return self.alpha * self.beta

    @property
    def dominant_regime(self) -> bool:
        """True when the constant mode carries the largest eigenvalue (alpha*beta >= 0)."""
        return self.coupling >= 0

    @property
    def open_loop_stable(self) -> bool:
        return self.rho > self.coupling / self.gamma


@dataclass(frozen=True)
class Grid:
    """Uniform mesh x_i = i*h, i = 0..n, with trapezoid weights."""

    n: int
    h: float = field(init=False, compare=False)
    nodes: np.ndarray = field(init=False, compare=False, repr=False)
    weights: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_INTERVALS:
            raise InvalidResolution(
                f"grid needs an integer n >= {MIN_INTERVALS} intervals, got {self.n}"
            )
        n = int(self.n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", 1.0 / n)
        nodes = np.arange(n + 1) / n
        weights = np.full(n + 1, 1.0 / n)
        weights[0] = weights[-1] = 0.5 / n
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.n + 1


def build_grid(n: int) -> Grid:
    return Grid(n)


class Field:
    """Scalar function sampled at the nodes of a grid. Values are read-only."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        arr = np.array(values, dtype=float)
        if arr.ndim == 0:
            arr = np.full(grid.size, float(arr))
        if arr.shape != (grid.size,):
            raise ValueError(
                f"field needs {grid.size} values for n={grid.n}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("field values must be finite")
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @classmethod
    def _trusted(cls, grid: Grid, values: np.ndarray) -> "Field":
        # internal fast path: caller guarantees shape and finiteness
        obj = cls.__new__(cls)
        values.setflags(write=False)
        obj.grid = grid
        obj.values = values
        return obj

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return cls(grid, np.broadcast_to(func(grid.nodes), (grid.size,)))

    def _check(self, other: "Field"):
        if other.grid != self.grid:
            raise IncompatibleGrids(
                f"fields live on different grids (n={self.grid.n} vs n={other.grid.n})"
            )

    def __add__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.values + other.values)
        return Field(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.values - other.values)
        return Field(self.grid, self.values - other)

    def __mul__(self, scalar):
        return Field(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __repr__(self):
        return f"Field(n={self.grid.n}, max|f|={self.max_abs():.4g})"


def check_same_grid(*fields: Field) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise IncompatibleGrids(
                f"fields live on different grids (n={grid.n} vs n={f.grid.n})"
            )
    return grid


def integrate(f: Field) -> float:
    """Trapezoid approximation of the integral of f over [0, 1]."""
    return float(f.grid.weights @ f.values)


def weighted_inner(f: Field, g: Field) -> float:
    grid = check_same_grid(f, g)
    return float(grid.weights @ (f.values * g.values))


def l2_norm(f: Field) -> float:
    return math.sqrt(float(f.grid.weights @ (f.values * f.values)))


def _diff(values: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(values)
    out[1:-1] = values[2:] - values[:-2]
    out[0] = -3.0 * values[0] + 4.0 * values[1] - values[2]
    out[-1] = 3.0 * values[-1] - 4.0 * values[-2] + values[-3]
    out *= 0.5 / h
    return out


def derivative(f: Field) -> Field:
    """Central differences inside, one-sided second-order stencils at both ends."""
    return Field._trusted(f.grid, _diff(f.values, f.grid.h))


def h1_norm(f: Field) -> float:
    df = derivative(f)
    return math.sqrt(l2_norm(f) ** 2 + l2_norm(df) ** 2)
