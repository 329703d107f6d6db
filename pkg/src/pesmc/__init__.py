"""Sliding-mode boundary control of a coupled parabolic-elliptic PDE.

The package integrates

    u_t = u_xx - rho*u + alpha*v,      0 = v_xx - gamma*v + beta*u,

on (0, 1) with homogeneous Neumann conditions except u_x(1, t) = omega(t) + d(t),
where omega is a sliding-mode boundary feedback and d a bounded disturbance.
"""

from pesmc.core import Field, Grid, PhysicalParams, build_grid

__version__ = "0.1.0"

__all__ = ["Field", "Grid", "PhysicalParams", "build_grid", "__version__"]
