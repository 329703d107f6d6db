"""Quasi-steady elliptic constraint (gamma - d^2/dx^2) v = beta*u with Neumann ends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pesmc.core import Field, Grid, PhysicalParams, weighted_inner
from pesmc.errors import IncompatibleGrids, InvalidCoefficient
from pesmc.tridiag import neumann_laplacian_bands, thomas, tridiag_matvec


@dataclass(frozen=True)
class EllipticSystem:
    """Bands of gamma*I - D2 on ``grid``.

    Boundary rows keep the raw ghost-node closure (off-diagonal -2/h^2), so the
    matrix is the symmetric one after halving rows 0 and n.
    """

    grid: Grid
    gamma: float
    lower: np.ndarray = field(repr=False, compare=False)
    diag: np.ndarray = field(repr=False, compare=False)
    upper: np.ndarray = field(repr=False, compare=False)

    def matvec(self, v: Field) -> Field:
        self._check(v)
        return Field(self.grid, tridiag_matvec(self.lower, self.diag, self.upper, v.values))

    def _check(self, f: Field):
        if f.grid != self.grid:
            raise IncompatibleGrids(
                f"field on n={f.grid.n} does not match elliptic system on n={self.grid.n}"
            )


def assemble(grid: Grid, gamma: float) -> EllipticSystem:
    if not gamma > 0:
        raise InvalidCoefficient(f"gamma must be > 0 for an invertible Neumann operator, got {gamma}")
    lower, diag, upper = neumann_laplacian_bands(grid.n, grid.h)
    lower, upper = -lower, -upper
    diag = gamma - diag
    for band in (lower, diag, upper):
        band.setflags(write=False)
    return EllipticSystem(grid, float(gamma), lower, diag, upper)


def solve(sys: EllipticSystem, rhs: Field) -> Field:
    sys._check(rhs)
    return Field(sys.grid, thomas(sys.lower, sys.diag, sys.upper, rhs.values))


def apply_K(sys: EllipticSystem, u: Field, beta: float) -> Field:
    """v = (gamma - d^2/dx^2)^{-1}(beta*u), i.e. the v solving the constraint for this u."""
    sys._check(u)
    v = thomas(sys.lower, sys.diag, sys.upper, beta * u.values)
    if not np.isfinite(v).all():
        raise FloatingPointError("elliptic solve produced non-finite values")
    return Field._trusted(sys.grid, v)


def mode_gain(params: PhysicalParams, k: int) -> float:
    """Eigenvalue of the continuous operator on cos(k*pi*x): beta/(gamma + (k*pi)^2)."""
    return params.beta / (params.gamma + (k * np.pi) ** 2)


def spectral_oracle(u: Field, params: PhysicalParams, modes: int) -> Field:
    """Reference for apply_K built on the cosine eigenbasis, independent of the FD solve.

    Projects u onto cos(k*pi*x), k = 0..modes, scales mode k by
    beta/(gamma + (k*pi)^2) and resynthesizes on the grid.
    """
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    x = u.grid.nodes
    out = np.zeros_like(x)
    for k in range(modes + 1):
        basis = Field(u.grid, np.cos(k * np.pi * x))
        coef = weighted_inner(u, basis) * (1.0 if k == 0 else 2.0)
        out += mode_gain(params, k) * coef * basis.values
    return Field(u.grid, out)
