"""The fourth-order conformal-factor equation and the invariant frame it feeds.

A scalar field k on the grid (the conformal factor relating the metric of
the central sphere congruence to the isometric one) determines an
isothermic surface up to conformal transformations once it satisfies

    0 = lap(k_xy / k) + 2 (k^2)_xy                       (Calapso residual)

which is precisely the integrability condition for the potential u:

    du = -((k_xy/k)_y + (k^2)_x) dx + ((k_xy/k)_x + (k^2)_y) dy.

``integrate_u`` integrates that 1-form from the origin; its plaquette
circulation (the compatibility defect) agrees with the Calapso residual
up to discretization.  ``build_moebius_frame_form`` assembles the
adapted-frame connection

    A = [[0,     0,    k dx,  dx,   chi1],
         [0,     0,   -k dy,  dy,   chi2],
         [-k dx, k dy, 0,     0,    tau ],
         [-chi1,-chi2,-tau,   0,    0   ],
         [-dx,  -dy,   0,     0,    0   ]],

    tau  = k_x dx - k_y dy,
    chi1 = (k^2/2 - u) dx - (k_xy/k) dy,
    chi2 = -(k_xy/k) dx + (k^2/2 + u) dy,

whose frame integral carries the surface (isometric lift in column 4,
central sphere congruence in column 3).  ``build_conformal_change_form``
is the same frame after the conformal change f -> f/k fixing the sphere
congruence; its vanishing tau-slot exhibits the flat normal bundle.

For revolution surfaces k depends on x alone, u = lam^2 - k^2 solves the
potential equation with the preset constant u0 = lam^2 - k(origin)^2, and
a pointwise change of the enveloped sphere congruence

    n -> n + k f,   f -> lam f,   fhat -> fhat / lam

(``sphere_shift_change``) turns the adapted frame into a genuine
curved-flat framing: the transformed connection reproduces the degenerate
revolution family entrywise.

Only residual evaluation and the compatibility integration are in scope;
the equation is never time-stepped as an initial/boundary value problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connections import ConnectionForm
from .errors import ConformalFactorFloorError, ResidualThresholdError
from .frames import FrameField, apply_frame_change, integrate_frame
from .grids import (
    Grid,
    circulation,
    diff_x,
    diff_xx,
    diff_xy,
    diff_y,
    diff_yy,
    integrate_steps,
    laplacian,
)
from .surfaces import SurfaceTriple, extract_triple

__all__ = [
    "CalapsoField",
    "calapso_residual",
    "integrate_u",
    "u0_revolution_preset",
    "build_moebius_frame_form",
    "build_conformal_change_form",
    "sphere_shift_change",
    "isothermic_from_calapso",
]


@dataclass(frozen=True)
class CalapsoField:
    """Conformal factor k on a grid, with a hard floor where k is divided by.

    The floor is an explicit error, not a regularization: smoothing a
    near-zero denominator would silently corrupt every residual downstream.
    """

    grid: Grid
    k: np.ndarray
    k_floor: float = 1e-6

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        if k.ndim == 1:
            if k.size != self.grid.nx:
                raise ValueError(f"k has {k.size} samples, expected nx={self.grid.nx}")
            k = np.broadcast_to(k[:, np.newaxis], self.grid.shape).copy()
        if k.shape != self.grid.shape:
            raise ValueError(f"k has shape {k.shape}, expected {self.grid.shape}")
        object.__setattr__(self, "k", k)

    def require_floor(self):
        small = np.abs(self.k) < self.k_floor
        if np.any(small):
            i, j = np.unravel_index(int(np.argmin(np.abs(self.k))), self.k.shape)
            raise ConformalFactorFloorError(
                f"|k| = {float(np.abs(self.k).min()):.3e} below floor "
                f"{self.k_floor:.1e} at grid point ({i}, {j})"
            )


def calapso_residual(field: CalapsoField) -> np.ndarray:
    """Residual lap(k_xy/k) + 2 (k^2)_xy by nested central differences.

    Returned on the interior where every stencil is fully central: shape
    (nx - 4, ny - 4), offset (2, 2) into the grid.  Fields constant in one
    coordinate produce exact zeros.
    """
    field.require_floor()
    g = field.grid
    k = field.k
    hx, hy = g.hx, g.hy

    # Cross-stencil mixed derivative, valid one ring in.
    kxy = (k[2:, 2:] - k[2:, :-2] - k[:-2, 2:] + k[:-2, :-2]) / (4.0 * hx * hy)
    W = kxy / k[1:-1, 1:-1]
    lapW = (W[2:, 1:-1] - 2.0 * W[1:-1, 1:-1] + W[:-2, 1:-1]) / hx**2 + (
        W[1:-1, 2:] - 2.0 * W[1:-1, 1:-1] + W[1:-1, :-2]
    ) / hy**2

    k2 = k * k
    k2xy = (k2[2:, 2:] - k2[2:, :-2] - k2[:-2, 2:] + k2[:-2, :-2]) / (4.0 * hx * hy)
    return lapW + 2.0 * k2xy[1:-1, 1:-1]


def _quotient_field(field: CalapsoField) -> np.ndarray:
    """k_xy / k on the full grid (one-sided closures at the boundary)."""
    field.require_floor()
    g = field.grid
    return diff_xy(field.k, g.hx, g.hy) / field.k


def integrate_u(field: CalapsoField, u0: float) -> tuple[np.ndarray, float]:
    """Path-integrate the potential 1-form from the origin with u(origin) = u0.

    Per-cell increments evaluate the derivative of k^2 compactly at the
    cell midpoint, (k^2 at far node - k^2 at near node)/h, so the exact
    gradient part telescopes: for k = k(x) the result is u0 - (k^2 -
    k(origin)^2) to roundoff.  The transverse quotient terms use endpoint
    averages of the node fields.  The returned compatibility defect is the
    maximal plaquette circulation per unit area, which matches the Calapso
    residual up to discretization.
    """
    g = field.grid
    k2 = field.k**2
    W = _quotient_field(field)
    Wx = diff_x(W, g.hx)
    Wy = diff_y(W, g.hy)

    # P dx + Q dy with P = -(W_y + (k^2)_x), Q = W_x + (k^2)_y.
    step_x = g.hx * (-0.5 * (Wy[:-1, :] + Wy[1:, :])) - (k2[1:, :] - k2[:-1, :])
    step_y = g.hy * (0.5 * (Wx[:, :-1] + Wx[:, 1:])) + (k2[:, 1:] - k2[:, :-1])

    u = u0 + integrate_steps(step_x, step_y)
    defect = float(np.abs(circulation(step_x, step_y)).max() / (g.hx * g.hy))
    return u, defect


def u0_revolution_preset(field: CalapsoField, lam: float) -> float:
    """Integration constant lam^2 - k(origin)^2, which makes the potential
    of an x-only factor equal lam^2 - k^2 everywhere."""
    return float(lam) ** 2 - float(field.k[0, 0]) ** 2


def build_moebius_frame_form(
    field: CalapsoField,
    u: np.ndarray,
    lam: float | None = None,
) -> ConnectionForm:
    """Adapted-frame connection of the isothermic surface determined by k.

    `u` is the potential from ``integrate_u`` (or supplied analytically);
    `lam` only stamps the family parameter used to pick u's constant.
    """
    g = field.grid
    field.require_floor()
    u = np.asarray(u, dtype=float)
    if u.shape != g.shape:
        raise ValueError(f"u has shape {u.shape}, expected {g.shape}")
    k = field.k
    kx = diff_x(k, g.hx)
    ky = diff_y(k, g.hy)
    W = _quotient_field(field)
    half_k2 = 0.5 * k * k

    chi1_x = half_k2 - u
    chi1_y = -W
    chi2_x = -W
    chi2_y = half_k2 + u

    shape = g.shape + (5, 5)
    Ax = np.zeros(shape)
    Ay = np.zeros(shape)
    ones = np.ones(g.shape)

    Ax[..., 0, 2] = k
    Ax[..., 2, 0] = -k
    Ax[..., 0, 3] = ones
    Ax[..., 4, 0] = -ones
    Ax[..., 0, 4] = chi1_x
    Ax[..., 3, 0] = -chi1_x
    Ax[..., 1, 4] = chi2_x
    Ax[..., 3, 1] = -chi2_x
    Ax[..., 2, 4] = kx
    Ax[..., 3, 2] = -kx

    Ay[..., 1, 2] = -k
    Ay[..., 2, 1] = k
    Ay[..., 1, 3] = ones
    Ay[..., 4, 1] = -ones
    Ay[..., 0, 4] = chi1_y
    Ay[..., 3, 0] = -chi1_y
    Ay[..., 1, 4] = chi2_y
    Ay[..., 3, 1] = -chi2_y
    Ay[..., 2, 4] = -ky
    Ay[..., 3, 2] = ky
    return ConnectionForm(g, Ax, Ay, lam=lam)


def build_conformal_change_form(
    field: CalapsoField,
    u: np.ndarray,
    lam: float | None = None,
) -> ConnectionForm:
    """Frame connection after the conformal change f -> f/k fixing the
    sphere congruence.  The tau-slot (row 3, column 5) vanishes: the
    congruence has flat normal bundle."""
    g = field.grid
    field.require_floor()
    u = np.asarray(u, dtype=float)
    if u.shape != g.shape:
        raise ValueError(f"u has shape {u.shape}, expected {g.shape}")
    k = field.k
    kx = diff_x(k, g.hx)
    ky = diff_y(k, g.hy)
    kxx = diff_xx(k, g.hx)
    kyy = diff_yy(k, g.hy)
    inv_k = 1.0 / k
    grad2 = (kx**2 + ky**2) / (2.0 * k * k)
    half_k2 = 0.5 * k * k

    omega_x = -ky * inv_k
    omega_y = kx * inv_k
    chi1_x = k * (kxx * inv_k - grad2 + half_k2 - u)
    chi2_y = k * (kyy * inv_k - grad2 + half_k2 + u)

    shape = g.shape + (5, 5)
    Ax = np.zeros(shape)
    Ay = np.zeros(shape)

    Ax[..., 0, 1] = omega_x
    Ax[..., 1, 0] = -omega_x
    Ax[..., 0, 2] = k
    Ax[..., 2, 0] = -k
    Ax[..., 0, 3] = inv_k
    Ax[..., 4, 0] = -inv_k
    Ax[..., 0, 4] = chi1_x
    Ax[..., 3, 0] = -chi1_x

    Ay[..., 0, 1] = omega_y
    Ay[..., 1, 0] = -omega_y
    Ay[..., 1, 2] = -k
    Ay[..., 2, 1] = k
    Ay[..., 1, 3] = inv_k
    Ay[..., 4, 1] = -inv_k
    Ay[..., 1, 4] = chi2_y
    Ay[..., 3, 1] = -chi2_y
    return ConnectionForm(g, Ax, Ay, lam=lam)


def sphere_shift_change(field: CalapsoField, lam: float) -> np.ndarray:
    """Pointwise isometry implementing n -> n + k f, f -> lam f,
    fhat -> fhat/lam - k n/lam - k^2 f/(2 lam).

    Applied on the right of the adapted frame of a revolution factor k(x),
    it produces the degenerate curved-flat framing; the composite column
    map preserves all pairings, so the matrix lies in O1(5) exactly.
    """
    if lam == 0:
        raise ValueError("the sphere-shift change needs lam != 0")
    g = field.grid
    k = field.k
    K = np.zeros(g.shape + (5, 5))
    K[..., 0, 0] = 1.0
    K[..., 1, 1] = 1.0
    K[..., 2, 2] = 1.0
    K[..., 3, 3] = lam
    K[..., 4, 4] = 1.0 / lam
    K[..., 3, 2] = k
    K[..., 2, 4] = -k / lam
    K[..., 3, 4] = -0.5 * k * k / lam
    return K


def isothermic_from_calapso(
    field: CalapsoField,
    u0: float,
    base: np.ndarray | None = None,
    residual_threshold: float = 1e-6,
    **integrate_kwargs,
) -> SurfaceTriple:
    """Surface triple of the isothermic surface determined by a solution k.

    Composes the potential integration, the adapted-frame connection, frame
    integration, and column extraction.  Fields whose Calapso residual
    exceeds `residual_threshold` are rejected: the potential 1-form would
    not be closed and the frame would depend on the integration path.
    """
    res = calapso_residual(field)
    worst = float(np.abs(res).max())
    if worst > residual_threshold:
        i, j = np.unravel_index(int(np.argmax(np.abs(res))), res.shape)
        raise ResidualThresholdError(
            f"Calapso residual {worst:.3e} above threshold {residual_threshold:.1e} "
            f"at interior point ({i + 2}, {j + 2}); k does not determine a surface"
        )
    u, _ = integrate_u(field, u0)
    form = build_moebius_frame_form(field, u)
    frames = integrate_frame(form, base=base, **integrate_kwargs)
    return extract_triple(frames)
