"""Isothermic surface data on a grid and analytic generators.

An isothermic parametrization carries the first and second fundamental
forms

    I  = e^{2u} (dx^2 + dy^2),        II = e^{2u} (k1 dx^2 + k2 dy^2),

so a patch is the triple of scalar fields (u, k1, k2).  Such data is
admissible exactly when the Gauss and Codazzi equations hold:

    0 = lap(u) + e^{2u} k1 k2,
    0 = d k1/dy + (k1 - k2) du/dy,
    0 = d k2/dx - (k1 - k2) du/dx.

Two generators are provided.  ``make_cylinder_patch`` parametrizes a round
cylinder with x running around the circle and y along the axis (u = log R,
k1 = 1/R, k2 = 0).  ``revolution_patch`` takes a meridian curve (r, z)
with r^2 = r'^2 + z'^2 -- arc length in the Poincare half-plane metric --
and produces the surface of revolution

    f(x, y) = (r(x) cos y, r(x) sin y, z(x)),

whose isothermic data is u = log r, k1 = (r'z'' - r''z')/r^3, k2 = z'/r^2.
Note the coordinate roles differ between the two generators: the cylinder
patch runs x around the profile circle, the revolution patch runs x along
the meridian.  ``solve_meridian`` generates meridians from a turning angle
theta via r' = r cos(theta), z' = r sin(theta), which enforces the
arc-length constraint structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import StepSizeError
from .grids import Grid, diff_x, diff_y, laplacian

__all__ = [
    "IsothermicPatch",
    "MeridianCurve",
    "gauss_codazzi_residual",
    "make_cylinder_patch",
    "make_plane_patch",
    "solve_meridian",
    "conformal_factor_k",
    "revolution_patch",
]

MERIDIAN_CONSTRAINT_RTOL = 1e-10


@dataclass(frozen=True)
class IsothermicPatch:
    """Conformal curvature-line data (u, k1, k2) on a grid."""

    grid: Grid
    u: np.ndarray
    k1: np.ndarray
    k2: np.ndarray

    def __post_init__(self):
        for name in ("u", "k1", "k2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != self.grid.shape:
                raise ValueError(
                    f"field {name} has shape {arr.shape}, expected {self.grid.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"field {name} contains non-finite values")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class MeridianCurve:
    """Samples of a profile curve (r, z) with r^2 = r'^2 + z'^2.

    The derivative samples are analytic values, not finite differences, so
    downstream fields built from them are smooth to solver accuracy.
    """

    x: np.ndarray
    r: np.ndarray
    rp: np.ndarray
    rpp: np.ndarray
    z: np.ndarray
    zp: np.ndarray
    zpp: np.ndarray
    lambda_hint: float = 1.0

    def __post_init__(self):
        for name in ("x", "r", "rp", "rpp", "z", "zp", "zpp"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.r <= 0):
            raise ValueError("meridian radius r must be positive everywhere")
        residual = np.abs(self.r**2 - self.rp**2 - self.zp**2)
        bound = MERIDIAN_CONSTRAINT_RTOL * self.r**2
        if np.any(residual > bound):
            i = int(np.argmax(residual - bound))
            raise ValueError(
                f"arc-length constraint violated at sample {i}: "
                f"|r^2 - r'^2 - z'^2| = {residual[i]:.3e} > {bound[i]:.3e}"
            )


def gauss_codazzi_residual(patch: IsothermicPatch):
    """Discrete residual fields of the three admissibility equations.

    Returns (gauss, codazzi1, codazzi2), each of full grid shape; second
    order accurate including the one-sided boundary stencils.
    """
    g = patch.grid
    u, k1, k2 = patch.u, patch.k1, patch.k2
    ux, uy = diff_x(u, g.hx), diff_y(u, g.hy)
    gauss = laplacian(u, g.hx, g.hy) + np.exp(2.0 * u) * k1 * k2
    codazzi1 = diff_y(k1, g.hy) + (k1 - k2) * uy
    codazzi2 = diff_x(k2, g.hx) - (k1 - k2) * ux
    return gauss, codazzi1, codazzi2


def make_cylinder_patch(radius: float, grid: Grid) -> IsothermicPatch:
    """Round cylinder of given radius: u = log R, k1 = 1/R, k2 = 0.

    x is the angle around the profile circle, y runs along the axis; the
    embedding with these forms is (R sin x, R cos x, R y).  All three
    admissibility residuals vanish identically.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    shape = grid.shape
    return IsothermicPatch(
        grid,
        u=np.full(shape, np.log(radius)),
        k1=np.full(shape, 1.0 / radius),
        k2=np.zeros(shape),
    )


def make_plane_patch(grid: Grid) -> IsothermicPatch:
    """Flat plane: u = k1 = k2 = 0."""
    shape = grid.shape
    return IsothermicPatch(grid, np.zeros(shape), np.zeros(shape), np.zeros(shape))


def _meridian_rhs(state, theta_val):
    r = state[0]
    return np.array([r * np.cos(theta_val), r * np.sin(theta_val)])


def _rk4_sweep(x: np.ndarray, r_init: float, theta: Callable, substeps: int) -> np.ndarray:
    """Classical RK4 for (r, z)' = r (cos theta, sin theta) sampled at x."""
    states = np.empty((x.size, 2))
    states[0] = (r_init, 0.0)
    state = states[0].copy()
    for i in range(x.size - 1):
        h = (x[i + 1] - x[i]) / substeps
        t = x[i]
        for _ in range(substeps):
            k1 = _meridian_rhs(state, theta(t))
            k2 = _meridian_rhs(state + 0.5 * h * k1, theta(t + 0.5 * h))
            k3 = _meridian_rhs(state + 0.5 * h * k2, theta(t + 0.5 * h))
            k4 = _meridian_rhs(state + h * k3, theta(t + h))
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        states[i + 1] = state
    return states


def solve_meridian(
    theta: Callable[[float], float],
    r_init: float,
    x: np.ndarray,
    dtheta: Optional[Callable[[float], float]] = None,
    substeps: int = 8,
    rtol: float = 1e-9,
    lambda_hint: float = 1.0,
) -> MeridianCurve:
    """Integrate r' = r cos(theta), z' = r sin(theta) through the samples x.

    A fourth-order one-step sweep with `substeps` stages per cell; the
    result is Richardson-checked against a doubled-substep sweep and a
    StepSizeError is raised when theta varies too fast for the grid.  First
    and second derivative samples come from the right-hand side (the
    arc-length constraint r^2 = r'^2 + z'^2 then holds to roundoff):

        r'' = r' cos(theta) - r theta' sin(theta),
        z'' = r' sin(theta) + r theta' cos(theta).

    theta' is taken from `dtheta` when provided, otherwise by a small-step
    central difference.
    """
    x = np.asarray(x, dtype=float)
    if r_init <= 0:
        raise ValueError(f"r_init must be positive, got {r_init}")

    coarse = _rk4_sweep(x, r_init, theta, substeps)
    fine = _rk4_sweep(x, r_init, theta, 2 * substeps)
    err = np.max(np.abs(coarse - fine) / np.maximum(np.abs(fine), 1.0))
    if err > rtol:
        i = int(np.argmax(np.max(np.abs(coarse - fine), axis=1)))
        raise StepSizeError(
            f"meridian integration error {err:.3e} exceeds rtol {rtol:.1e}; "
            "theta varies too fast for this grid",
            grid_point=(i,),
        )
    r, z = fine[:, 0], fine[:, 1]

    th = np.array([theta(t) for t in x], dtype=float)
    if dtheta is not None:
        thp = np.array([dtheta(t) for t in x], dtype=float)
    else:
        d = 1e-6
        thp = np.array([(theta(t + d) - theta(t - d)) / (2.0 * d) for t in x])
    c, s = np.cos(th), np.sin(th)
    rp = r * c
    zp = r * s
    rpp = rp * c - r * thp * s
    zpp = rp * s + r * thp * c
    return MeridianCurve(x, r, rp, rpp, z, zp, zpp, lambda_hint=lambda_hint)


def conformal_factor_k(meridian: MeridianCurve) -> np.ndarray:
    """Conformal factor k = (r z' - r' z'' + r'' z') / (2 r^2) along the meridian.

    k^2 relates the metric induced by the central sphere congruence of the
    revolution surface to the isometric one; it depends on x only.
    """
    m = meridian
    return (m.r * m.zp - m.rp * m.zpp + m.rpp * m.zp) / (2.0 * m.r**2)


def revolution_patch(meridian: MeridianCurve, grid: Grid) -> IsothermicPatch:
    """Isothermic data of the revolution surface over the meridian.

    Requires the grid's x-samples to coincide with the meridian samples.
    With the surface normal taken along f_x cross f_y (pointing toward the
    axis), u = log r, k1 = (r'z'' - r''z')/r^3 and k2 = z'/r^2; the
    admissibility residuals vanish analytically, so the discrete residual
    decays at second order.
    """
    m = meridian
    if grid.nx != m.x.size or np.max(np.abs(grid.x - m.x)) > 1e-12 * max(1.0, np.max(np.abs(m.x))):
        raise ValueError("grid x-samples do not align with the meridian samples")
    u = np.log(m.r)
    k1 = (m.rp * m.zpp - m.rpp * m.zp) / m.r**3
    k2 = m.zp / m.r**2
    ones = np.ones((1, grid.ny))
    return IsothermicPatch(
        grid,
        u=u[:, np.newaxis] * ones,
        k1=k1[:, np.newaxis] * ones,
        k2=k2[:, np.newaxis] * ones,
    )
