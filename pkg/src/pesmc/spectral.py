"""Closed-form modal analysis of the uncontrolled reduced system.

With Neumann ends the reduced operator u_xx - rho*u + alpha*beta*(gamma - d_xx)^{-1} u
is diagonal in cos(n*pi*x), so its spectrum and single-mode solutions are explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pesmc.core import Field, Grid, PhysicalParams
from pesmc.errors import DomainError

DEFAULT_N_MAX = 32


def eigenvalue(params: PhysicalParams, n: int) -> float:
    if n < 0:
        raise DomainError(f"mode index must be >= 0, got {n}")
    k2 = (n * math.pi) ** 2
    return -params.rho + params.coupling / (params.gamma + k2) - k2


@dataclass(frozen=True)
class ModalReport:
    eigenvalues: list[tuple[int, float]]
    dominant: float
    stable: bool
    margin: float
    # set when alpha*beta < 0 and lambda_0 is not guaranteed to dominate
    regime_warning: bool = False

    def format(self) -> str:
        lines = [f"lambda_{n} = {lam:.12g}" for n, lam in self.eigenvalues]
        lines.append(f"dominant = {self.dominant:.12g}")
        lines.append(f"margin = {self.margin:.12g}")
        lines.append(f"stable = {str(self.stable).lower()}")
        if self.regime_warning:
            lines.append("warning: alpha*beta < 0, stability judged from computed modes only")
        return "\n".join(lines)


def modal_report(params: PhysicalParams, n_max: int = DEFAULT_N_MAX) -> ModalReport:
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    eigs = [(n, eigenvalue(params, n)) for n in range(n_max + 1)]
    margin = params.rho - params.coupling / params.gamma
    if params.dominant_regime:
        dominant = eigs[0][1]
        return ModalReport(eigs, dominant, params.rho > params.coupling / params.gamma, margin)
    top = max(lam for _, lam in eigs)
    return ModalReport(eigs, top, top < 0, margin, regime_warning=True)


def analytic_mode_solution(params: PhysicalParams, n: int, t: float, grid: Grid) -> Field:
    """exp(lambda_n t) cos(n pi x): the exact uncontrolled solution from u0 = cos(n pi x)."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    amp = math.exp(eigenvalue(params, n) * t)
    return Field(grid, amp * np.cos(n * np.pi * grid.nodes))
