"""Uniform coordinate grids, finite differences, and path integration.

Scalar fields are arrays of shape (nx, ny) indexed [i, j] at the point
(x0 + i*hx, y0 + j*hy); vector/matrix fields append trailing axes.  The
coordinates are the canonical conformal curvature-line coordinates of the
surface data, so uniform spacing is the only case supported.

Derivative stencils are second-order: central in the interior, one-sided
at the boundary, so residual fields cover the full grid without silently
dropping boundary errors.

Two cumulative path integrators are provided:

* ``integrate_steps`` consumes per-cell increments (row 0 first, then up
  every column).  Increments built from compact differences of a potential
  telescope exactly, which several downstream identities rely on.
* ``quartic_cumulative`` integrates node samples to fourth order; it is
  used where second-order quadrature error would dominate the quantity
  being reconstructed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid",
    "diff_x",
    "diff_y",
    "diff_xx",
    "diff_yy",
    "diff_xy",
    "laplacian",
    "integrate_steps",
    "circulation",
    "quartic_cumulative",
]


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular grid in the conformal coordinates (x, y)."""

    nx: int
    ny: int
    hx: float
    hy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 5 or self.ny < 5:
            raise ValueError(
                f"grid must be at least 5x5 for the widest stencils, got {self.nx}x{self.ny}"
            )
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError(f"grid spacings must be positive, got hx={self.hx}, hy={self.hy}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.hy * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    def refine(self) -> "Grid":
        """Grid over the same domain with both spacings halved."""
        return Grid(2 * self.nx - 1, 2 * self.ny - 1, self.hx / 2, self.hy / 2, self.x0, self.y0)

    def header_values(self) -> list[float]:
        return [float(self.nx), float(self.ny), self.hx, self.hy, self.x0, self.y0]


def _first_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    g = np.moveaxis(f, axis, 0)
    out = np.empty_like(g)
    out[1:-1] = (g[2:] - g[:-2]) / (2.0 * h)
    out[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h)
    out[-1] = (3.0 * g[-1] - 4.0 * g[-2] + g[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, axis)


def _second_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    g = np.moveaxis(f, axis, 0)
    out = np.empty_like(g)
    out[1:-1] = (g[2:] - 2.0 * g[1:-1] + g[:-2]) / (h * h)
    out[0] = (2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]) / (h * h)
    out[-1] = (2.0 * g[-1] - 5.0 * g[-2] + 4.0 * g[-3] - g[-4]) / (h * h)
    return np.moveaxis(out, 0, axis)


def diff_x(f: np.ndarray, hx: float) -> np.ndarray:
    """d/dx along axis 0, second order everywhere."""
    return _first_derivative(f, hx, 0)


def diff_y(f: np.ndarray, hy: float) -> np.ndarray:
    """d/dy along axis 1, second order everywhere."""
    return _first_derivative(f, hy, 1)


def diff_xx(f: np.ndarray, hx: float) -> np.ndarray:
    return _second_derivative(f, hx, 0)


def diff_yy(f: np.ndarray, hy: float) -> np.ndarray:
    return _second_derivative(f, hy, 1)


def diff_xy(f: np.ndarray, hx: float, hy: float) -> np.ndarray:
    """Mixed derivative as composed 1-d stencils (cross stencil in the interior)."""
    return diff_y(diff_x(f, hx), hy)


def laplacian(f: np.ndarray, hx: float, hy: float) -> np.ndarray:
    return diff_xx(f, hx) + diff_yy(f, hy)


def integrate_steps(step_x: np.ndarray, step_y: np.ndarray) -> np.ndarray:
    """Cumulative sum of per-cell increments along row 0, then up each column.

    step_x has shape (nx-1, ny, ...) (only row 0 enters the path), step_y
    has shape (nx, ny-1, ...).  Returns the potential of shape (nx, ny, ...)
    vanishing at the origin.  Path dependence of non-closed step fields is
    quantified by ``circulation``.
    """
    step_x = np.asarray(step_x, dtype=float)
    step_y = np.asarray(step_y, dtype=float)
    nx = step_x.shape[0] + 1
    ny = step_y.shape[1] + 1
    out = np.zeros((nx, ny) + step_x.shape[2:])
    out[1:, 0] = np.cumsum(step_x[:, 0], axis=0)
    out[:, 1:] = out[:, :1] + np.cumsum(step_y, axis=1)
    return out


def circulation(step_x: np.ndarray, step_y: np.ndarray) -> np.ndarray:
    """Per-plaquette circulation of a per-cell increment field.

    Zero circulation means ``integrate_steps`` is path independent.  For
    increments h*(coefficient at cell midpoint) this is hx*hy times the
    discrete curl of the underlying 1-form.
    """
    step_x = np.asarray(step_x, dtype=float)
    step_y = np.asarray(step_y, dtype=float)
    return step_x[:, :-1] + step_y[1:, :] - step_x[:, 1:] - step_y[:-1, :]


def quartic_cumulative(f: np.ndarray, h: float, axis: int = 0) -> np.ndarray:
    """Fourth-order cumulative integral of node samples along one axis.

    Each cell's increment integrates the cubic through the four nearest
    nodes; the first and last cells use the one-sided cubic.  The result
    has the same shape as f and vanishes at the first node.
    """
    f = np.asarray(f, dtype=float)
    g = np.moveaxis(f, axis, 0)
    n = g.shape[0]
    if n < 4:
        raise ValueError("quartic cumulative integration needs at least 4 nodes")
    steps = np.empty_like(g[:-1])
    steps[1:-1] = (h / 24.0) * (-g[:-3] + 13.0 * g[1:-2] + 13.0 * g[2:-1] - g[3:])
    steps[0] = (h / 24.0) * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
    steps[-1] = (h / 24.0) * (9.0 * g[-1] + 19.0 * g[-2] - 5.0 * g[-3] + g[-4])
    out = np.zeros_like(g)
    out[1:] = np.cumsum(steps, axis=0)
    return np.moveaxis(out, 0, axis)
