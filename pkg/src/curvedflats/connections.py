"""Explicit o1(5)-valued connection forms on the grid.

A ConnectionForm stores the two coefficient fields (Ax, Ay) of a Lie
algebra valued 1-form A = Ax dx + Ay dy.  Three families are built here.

``build_phi_lambda`` assembles the spectral family attached to isothermic
data (u, k1, k2):

    Ax = [[0,    u_y, -e^u k1, s e^u,  -s/e^u ]      (s = lambda)
          [-u_y, 0,    0,      0,       0     ]
          [e^u k1, 0,  0,      0,       0     ]
          [s/e^u, 0,   0,      0,       0     ]
          [-s e^u, 0,  0,      0,       0     ]]

    Ay = [[0,   -u_x,  0,      0,       0     ]
          [u_x,  0,   -e^u k2, s e^u,   s/e^u ]
          [0,  e^u k2, 0,      0,       0     ]
          [0, -s/e^u,  0,      0,       0     ]
          [0, -s e^u,  0,      0,       0     ]]

The block-diagonal part is independent of lambda and the off-diagonal part
is linear in it, so the family interpolates a one-parameter loop of flat
connections whenever the patch is admissible.  The off-diagonal parts at
the two coordinate directions commute identically -- the curved-flat
property -- which ``curved_flat_defect`` measures.

``build_revolution_form`` writes the same family directly from meridian
data (it coincides with build_phi_lambda on the revolution patch, with the
rotation coefficient -r'/r supplied analytically instead of by finite
differences).  ``build_degenerate_revolution_form`` assembles the
degenerate channel-surface family driven by a conformal factor k(x) alone.

``zero_curvature_residual`` evaluates the flatness defect
R = d_x Ay - d_y Ax + [Ax, Ay] with second-order stencils.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid, diff_x, diff_y
from .minkowski import kp_split
from .patches import IsothermicPatch, MeridianCurve

__all__ = [
    "ConnectionForm",
    "CurvatureField",
    "build_phi_lambda",
    "build_revolution_form",
    "build_degenerate_revolution_form",
    "zero_curvature_residual",
    "curved_flat_defect",
]


@dataclass(frozen=True)
class ConnectionForm:
    """Coefficients (Ax, Ay) of an algebra-valued 1-form, shape (nx, ny, 5, 5).

    `lam` records the spectral parameter of the family the form was built
    from (None for forms outside any spectral family), so gauge operations
    can preserve it.
    """

    grid: Grid
    Ax: np.ndarray
    Ay: np.ndarray
    lam: float | None = None

    def __post_init__(self):
        expected = self.grid.shape + (5, 5)
        for name in ("Ax", "Ay"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != expected:
                raise ValueError(f"{name} has shape {arr.shape}, expected {expected}")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CurvatureField:
    """Discrete curvature R = d_x Ay - d_y Ax + [Ax, Ay] plus split diagnostics.

    `abelian` holds the pointwise max-norm of the bracket of the two
    off-block-diagonal coefficient parts (the curved-flat defect field).
    """

    grid: Grid
    R: np.ndarray
    abelian: np.ndarray

    def max_norm(self, interior: bool = True) -> float:
        R = self.R[1:-1, 1:-1] if interior else self.R
        return float(np.abs(R).max())

    def k_part_max(self, interior: bool = True) -> float:
        Rk, _ = kp_split(self.R)
        Rk = Rk[1:-1, 1:-1] if interior else Rk
        return float(np.abs(Rk).max())

    def p_part_max(self, interior: bool = True) -> float:
        _, Rp = kp_split(self.R)
        Rp = Rp[1:-1, 1:-1] if interior else Rp
        return float(np.abs(Rp).max())

    def abelian_max(self) -> float:
        return float(self.abelian.max())


def _empty_pair(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    shape = grid.shape + (5, 5)
    return np.zeros(shape), np.zeros(shape)


def build_phi_lambda(patch: IsothermicPatch, lam: float) -> ConnectionForm:
    """Spectral-family connection form of an isothermic patch.

    Paired entries share one computed coefficient with opposite signs, so
    the algebra-membership defect of the output is exactly zero.
    """
    g = patch.grid
    u, k1, k2 = patch.u, patch.k1, patch.k2
    ux = diff_x(u, g.hx)
    uy = diff_y(u, g.hy)
    eu = np.exp(u)
    emu = np.exp(-u)
    psi1 = eu * k1
    psi2 = eu * k2
    a = lam * eu
    b = lam * emu

    Ax, Ay = _empty_pair(g)
    Ax[..., 0, 1] = uy
    Ax[..., 1, 0] = -uy
    Ax[..., 0, 2] = -psi1
    Ax[..., 2, 0] = psi1
    Ax[..., 0, 3] = a
    Ax[..., 3, 0] = b
    Ax[..., 0, 4] = -b
    Ax[..., 4, 0] = -a

    Ay[..., 0, 1] = -ux
    Ay[..., 1, 0] = ux
    Ay[..., 1, 2] = -psi2
    Ay[..., 2, 1] = psi2
    Ay[..., 1, 3] = a
    Ay[..., 3, 1] = -b
    Ay[..., 1, 4] = b
    Ay[..., 4, 1] = -a
    return ConnectionForm(g, Ax, Ay, lam=lam)


def build_revolution_form(meridian: MeridianCurve, lam: float, grid: Grid) -> ConnectionForm:
    """Spectral family of a revolution surface, written from meridian data.

    Entrywise this is build_phi_lambda evaluated on the revolution patch,
    except that the rotation coefficient r'/r and the normal curvature
    coefficients are analytic in x rather than finite-differenced.
    """
    m = meridian
    if grid.nx != m.x.size:
        raise ValueError("grid x-count does not match the meridian samples")

    def col(values: np.ndarray) -> np.ndarray:
        return np.broadcast_to(values[:, np.newaxis], grid.shape).copy()

    w = col((m.rp * m.zpp - m.rpp * m.zp) / m.r**2)
    rot = col(m.rp / m.r)
    zr = col(m.zp / m.r)
    a = lam * col(m.r)
    b = lam * col(1.0 / m.r)

    Ax, Ay = _empty_pair(grid)
    Ax[..., 0, 2] = -w
    Ax[..., 2, 0] = w
    Ax[..., 0, 3] = a
    Ax[..., 3, 0] = b
    Ax[..., 0, 4] = -b
    Ax[..., 4, 0] = -a

    Ay[..., 0, 1] = -rot
    Ay[..., 1, 0] = rot
    Ay[..., 1, 2] = -zr
    Ay[..., 2, 1] = zr
    Ay[..., 1, 3] = a
    Ay[..., 3, 1] = -b
    Ay[..., 1, 4] = b
    Ay[..., 4, 1] = -a
    return ConnectionForm(grid, Ax, Ay, lam=lam)


def build_degenerate_revolution_form(k: np.ndarray, lam: float, grid: Grid) -> ConnectionForm:
    """Degenerate channel family driven by a conformal factor k(x):

        Ax = [[0, 0, 2k, s, -s], ..., antisymmetry completions],
        Ay has only the constant null-column entries at rows 2, 4, 5.

    Flat exactly when k depends on x alone.
    """
    k = np.asarray(k, dtype=float)
    if k.ndim == 1:
        if k.size != grid.nx:
            raise ValueError(f"k has {k.size} samples, expected nx={grid.nx}")
        k = np.broadcast_to(k[:, np.newaxis], grid.shape).copy()
    elif k.shape != grid.shape:
        raise ValueError(f"k has shape {k.shape}, expected {grid.shape}")

    two_k = 2.0 * k
    s = float(lam)
    Ax, Ay = _empty_pair(grid)
    Ax[..., 0, 2] = two_k
    Ax[..., 2, 0] = -two_k
    Ax[..., 0, 3] = s
    Ax[..., 3, 0] = s
    Ax[..., 0, 4] = -s
    Ax[..., 4, 0] = -s

    Ay[..., 1, 3] = s
    Ay[..., 3, 1] = -s
    Ay[..., 1, 4] = s
    Ay[..., 4, 1] = -s
    return ConnectionForm(grid, Ax, Ay, lam=lam)


def zero_curvature_residual(form: ConnectionForm) -> CurvatureField:
    """Flatness defect R = d_x Ay - d_y Ax + [Ax, Ay] at every node.

    Derivatives are central in the interior with one-sided boundary
    closures; CurvatureField.max_norm(interior=True) restricts to the fully
    central region.  The block-diagonal and off-diagonal parts of R are
    available separately through the CurvatureField accessors, and the
    curved-flat bracket of the off-diagonal coefficient parts comes along
    as the `abelian` field.
    """
    g = form.grid
    Ax, Ay = form.Ax, form.Ay
    R = diff_x(Ay, g.hx) - diff_y(Ax, g.hy) + Ax @ Ay - Ay @ Ax
    _, Axp = kp_split(Ax)
    _, Ayp = kp_split(Ay)
    bracket = Axp @ Ayp - Ayp @ Axp
    abelian = np.abs(bracket).max(axis=(-1, -2))
    return CurvatureField(g, R, abelian)


def curved_flat_defect(form: ConnectionForm) -> float:
    """Max norm over the grid of the bracket of the off-diagonal parts.

    Vanishes identically for the three families built in this module: their
    off-diagonal columns span abelian subspaces for every lambda.
    """
    _, Axp = kp_split(form.Ax)
    _, Ayp = kp_split(form.Ay)
    bracket = Axp @ Ayp - Ayp @ Axp
    return float(np.abs(bracket).max())
