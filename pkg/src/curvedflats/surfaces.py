"""Sphere congruences, enveloping maps, and Euclidean surface extraction.

From a frame field F the columns

    n = F e3  (unit space-like: a sphere congruence),
    f = F e4,  fhat = F e5  (null: the two enveloping maps)

form a SurfaceTriple with the pairings <n,n> = 1, <f,fhat> = 1 and all
others zero inherited from the group.  ``envelope_defect`` and
``second_form_diagonality`` verify numerically that f and fhat envelop n
with diagonal mixed second forms -- the defining property of an isothermic
pair.

Euclidean representatives come out two ways and cross-check each other:

* ``sym_surfaces`` differentiates the spectral family at its degenerate
  parameter.  The derivative-of-frame map has closed-form differential
  H3 (e^u dx, e^u dy, 0) for f and H3 (-e^{-u} dx, e^{-u} dy, 0) for fhat,
  where H3 is the rotation block of the degenerate frame; integrating
  those 1-forms (fourth-order cumulative quadrature) yields both surfaces
  directly in R^3.
* ``project_to_affine_chart`` maps light-cone points to R^3 by scaling to
  <v, infinity> = 1 and reading off coordinates in the space-like
  complement of the chart's two null directions.

``euclidean_dual`` integrates the dual 1-form e^{-2u}(-f_x dx + f_y dy)
with compact per-cell increments and geometric-mean conformal weights, a
discretization chosen to make dual(dual(f)) = f + const hold to roundoff.

The circle congruence t -> sin(t)/sqrt(2) n + (1+cos t)/2 f - (1-cos t)/2 fhat
parametrizes, for each grid point, the circle through f and fhat that meets
the sphere n orthogonally; it is light-like for every t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartSingularityError, ClosednessError, TripleInvariantError
from .frames import FrameField
from .grids import Grid, diff_x, diff_y, integrate_steps, circulation, quartic_cumulative
from .minkowski import METRIC, defect_floor, minkowski_inner
from .patches import IsothermicPatch

__all__ = [
    "SurfaceTriple",
    "EuclideanSurface",
    "extract_triple",
    "envelope_defect",
    "second_form_diagonality",
    "DiagonalityReport",
    "sym_surfaces",
    "euclidean_dual",
    "circle_congruence_point",
    "project_to_affine_chart",
    "measure_surface",
]

TRIPLE_TOL = 1e-10


@dataclass(frozen=True)
class SurfaceTriple:
    """Sphere congruence n and enveloping null maps f, fhat, shape (nx, ny, 5)."""

    grid: Grid
    n: np.ndarray
    f: np.ndarray
    fhat: np.ndarray

    def pairing_defects(self) -> dict[str, np.ndarray]:
        n, f, fh = self.n, self.f, self.fhat
        return {
            "<n,n>-1": minkowski_inner(n, n) - 1.0,
            "<f,f>": minkowski_inner(f, f),
            "<fhat,fhat>": minkowski_inner(fh, fh),
            "<f,n>": minkowski_inner(f, n),
            "<fhat,n>": minkowski_inner(fh, n),
            "<f,fhat>-1": minkowski_inner(f, fh) - 1.0,
        }


@dataclass(frozen=True)
class EuclideanSurface:
    """Surface points in R^3 with unit normals and measured fundamental forms.

    I_coeffs stacks (E, F, G), II_coeffs stacks (e, f, g) along the last
    axis; both are measured by central differences of points and normals,
    the normal being the normalized cross product of the coordinate
    tangents.
    """

    grid: Grid
    points: np.ndarray
    normals: np.ndarray
    I_coeffs: np.ndarray
    II_coeffs: np.ndarray


def extract_triple(frames: FrameField, tol: float | None = None) -> SurfaceTriple:
    """Columns 3, 4, 5 of the frames; raises when a pairing invariant breaks.

    The default tolerance is 1e-10, relaxed to the orthogonality roundoff
    floor for large-entry frames (group columns inherit the pairings only
    up to the frames' own defect).
    """
    F = frames.F
    if tol is None:
        tol = max(TRIPLE_TOL, 8.0 * defect_floor(F))
    triple = SurfaceTriple(frames.grid, F[..., :, 2].copy(), F[..., :, 3].copy(), F[..., :, 4].copy())
    worst_name, worst_val, worst_idx = None, 0.0, (0, 0)
    for name, d in triple.pairing_defects().items():
        m = float(np.abs(d).max())
        if m > worst_val:
            worst_val = m
            worst_name = name
            worst_idx = np.unravel_index(int(np.argmax(np.abs(d))), d.shape)
    if worst_val > tol:
        raise TripleInvariantError(
            f"pairing {worst_name} off by {worst_val:.3e} (tol {tol:.1e})",
            grid_point=tuple(int(v) for v in worst_idx),
            defect=worst_val,
        )
    return triple


def envelope_defect(triple: SurfaceTriple) -> tuple[float, float]:
    """(for f, for fhat): max|<f, n>| + max|<df, n>| with central differences.

    The derivative term is evaluated on the interior only, where the
    stencil is genuinely central; second order in the grid spacing for
    exact frames of admissible data, plus the frame drift."""
    g = triple.grid
    inner = (slice(1, -1), slice(1, -1))
    out = []
    for m in (triple.f, triple.fhat):
        tangency = np.abs(minkowski_inner(m, triple.n)).max()
        mx = minkowski_inner(diff_x(m, g.hx), triple.n)[inner]
        my = minkowski_inner(diff_y(m, g.hy), triple.n)[inner]
        out.append(float(tangency + max(np.abs(mx).max(), np.abs(my).max())))
    return out[0], out[1]


@dataclass(frozen=True)
class DiagonalityReport:
    """Mixed second-form and induced-metric coefficients of the two envelopes.

    All fields are interior-valued (fully central stencils, one ring in).
    b11/b22 are the diagonal coefficients <m_x, n_x>, <m_y, n_y> of the
    symmetrized mixed form for m in {f, fhat}; off is the maximum
    off-diagonal coefficient |<m_x, n_y> + <m_y, n_x>|/2.  E/F/G are the
    induced metric coefficients of f.  The sign of the mixed form follows
    the frame's own orientation of the sphere congruence, so comparisons
    against curvature data are up to one global sign.
    """

    off_f: float
    off_fhat: float
    b11_f: np.ndarray
    b22_f: np.ndarray
    b11_fhat: np.ndarray
    b22_fhat: np.ndarray
    E_f: np.ndarray
    F_f: np.ndarray
    G_f: np.ndarray


def second_form_diagonality(triple: SurfaceTriple) -> DiagonalityReport:
    g = triple.grid
    inner = (slice(1, -1), slice(1, -1))
    nx_ = diff_x(triple.n, g.hx)[inner]
    ny_ = diff_y(triple.n, g.hy)[inner]
    fields = {}
    offs = {}
    for label, m in (("f", triple.f), ("fhat", triple.fhat)):
        mx = diff_x(m, g.hx)[inner]
        my = diff_y(m, g.hy)[inner]
        fields[f"b11_{label}"] = minkowski_inner(mx, nx_)
        fields[f"b22_{label}"] = minkowski_inner(my, ny_)
        offs[label] = float(
            np.abs(0.5 * (minkowski_inner(mx, ny_) + minkowski_inner(my, nx_))).max()
        )
    fx = diff_x(triple.f, g.hx)[inner]
    fy = diff_y(triple.f, g.hy)[inner]
    return DiagonalityReport(
        off_f=offs["f"],
        off_fhat=offs["fhat"],
        E_f=minkowski_inner(fx, fx),
        F_f=minkowski_inner(fx, fy),
        G_f=minkowski_inner(fy, fy),
        **fields,
    )


def measure_surface(grid: Grid, points: np.ndarray, normal_sign: float = 1.0) -> EuclideanSurface:
    """Fundamental forms of a point field by central differences.

    The unit normal is the normalized cross product of the coordinate
    tangents (f_x cross f_y), times `normal_sign`; II is measured through
    the Weingarten pairing e = -<f_x, N_x> etc., which only needs first
    derivatives of N.  Dual surfaces pass normal_sign = -1: the dual
    construction reverses one tangent, so the co-oriented normal of the
    shared tangent planes is minus the cross product.
    """
    points = np.asarray(points, dtype=float)
    fx = diff_x(points, grid.hx)
    fy = diff_y(points, grid.hy)
    normal = np.cross(fx, fy)
    norms = np.linalg.norm(normal, axis=-1, keepdims=True)
    if np.any(norms <= 0):
        raise ValueError("degenerate tangent plane: cannot orient a normal")
    normal = normal_sign * normal / norms
    Nx = diff_x(normal, grid.hx)
    Ny = diff_y(normal, grid.hy)

    E = np.sum(fx * fx, axis=-1)
    Fc = np.sum(fx * fy, axis=-1)
    G = np.sum(fy * fy, axis=-1)
    e = -np.sum(fx * Nx, axis=-1)
    fcoef = -0.5 * (np.sum(fx * Ny, axis=-1) + np.sum(fy * Nx, axis=-1))
    gcoef = -np.sum(fy * Ny, axis=-1)
    return EuclideanSurface(
        grid,
        points,
        normal,
        np.stack([E, Fc, G], axis=-1),
        np.stack([e, fcoef, gcoef], axis=-1),
    )


def sym_surfaces(
    patch: IsothermicPatch,
    frames_at_zero: FrameField,
    closedness_tol: float = 1e-2,
) -> tuple[EuclideanSurface, EuclideanSurface]:
    """Both Euclidean surfaces from the degenerate-parameter frame field.

    `frames_at_zero` must come from the patch's spectral family at lambda=0,
    where the frame is block diagonal: a rotation field H3 and an identity
    null block.  The surfaces integrate

        df    = H3 (e^u dx,  e^u dy, 0),
        dfhat = H3 (-e^{-u} dx, e^{-u} dy, 0)

    with fourth-order cumulative quadrature (row 0 then columns).  The
    integrands are closed up to discretization; a mixed-partial defect
    above `closedness_tol` raises ClosednessError.
    """
    g = patch.grid
    F = frames_at_zero.F
    off = max(float(np.abs(F[..., :3, 3:]).max()), float(np.abs(F[..., 3:, :3]).max()))
    if off > 1e-8:
        raise ValueError(
            f"frames are not block diagonal (off-block magnitude {off:.3e}); "
            "integrate the patch's family at lambda = 0 first"
        )
    H3 = F[..., :3, :3]
    h1 = H3[..., :, 0]
    h2 = H3[..., :, 1]
    eu = np.exp(patch.u)[..., np.newaxis]
    emu = np.exp(-patch.u)[..., np.newaxis]

    surfaces = []
    for sign, wx, wy in ((1.0, eu * h1, eu * h2), (-1.0, -emu * h1, emu * h2)):
        defect = np.abs(diff_y(wx, g.hy) - diff_x(wy, g.hx)).max()
        if defect > closedness_tol:
            raise ClosednessError(
                f"surface differential has mixed-partial defect {float(defect):.3e} "
                f"(tol {closedness_tol:.1e})"
            )
        pts = quartic_cumulative(wx[:, 0], g.hx, axis=0)[:, np.newaxis, :] + quartic_cumulative(
            wy, g.hy, axis=1
        )
        surfaces.append(measure_surface(g, pts, normal_sign=sign))
    return surfaces[0], surfaces[1]


def euclidean_dual(
    surface: EuclideanSurface,
    u: np.ndarray,
    closedness_tol: float = 1e-2,
    conformal_rtol: float = 0.2,
) -> EuclideanSurface:
    """Integrate the dual 1-form e^{-2u}(-f_x dx + f_y dy) from the origin.

    Per-cell increments use the compact difference of the points and the
    conformal weight at the cell midpoint, exp(-(u_i + u_{i+1})); with that
    choice the construction is an exact involution up to a translation.
    The measured metric must agree with e^{2u} (the input has to be the
    isothermic parametrization u describes), and the increment field's
    plaquette circulation must stay under `closedness_tol`.
    """
    g = surface.grid
    u = np.asarray(u, dtype=float)
    if u.shape != g.shape:
        raise ValueError(f"u has shape {u.shape}, expected {g.shape}")

    E = surface.I_coeffs[..., 0]
    inner = (slice(1, -1), slice(1, -1))
    rel = np.abs(E[inner] - np.exp(2.0 * u[inner])) / np.abs(np.exp(2.0 * u[inner]))
    if float(rel.max()) > conformal_rtol:
        raise ValueError(
            f"measured metric disagrees with e^(2u) by {float(rel.max()):.3e} relative; "
            "u does not describe this surface"
        )

    pts = surface.points
    wx = np.exp(-(u[:-1, :] + u[1:, :]))[..., np.newaxis]
    wy = np.exp(-(u[:, :-1] + u[:, 1:]))[..., np.newaxis]
    step_x = -wx * (pts[1:, :] - pts[:-1, :])
    step_y = wy * (pts[:, 1:] - pts[:, :-1])

    circ = np.abs(circulation(step_x, step_y)).max(axis=-1) / (g.hx * g.hy)
    worst = float(circ.max())
    if worst > closedness_tol:
        raise ClosednessError(
            f"dual 1-form circulation {worst:.3e} above {closedness_tol:.1e}; "
            "input is not isothermic-parametrized"
        )
    dual_pts = integrate_steps(step_x, step_y)

    # The dual shares co-oriented tangent planes with its source, so its
    # normal is minus the raw cross product relative to the source's sign.
    fx = diff_x(pts, g.hx)
    fy = diff_y(pts, g.hy)
    src_sign = 1.0 if np.median(np.sum(np.cross(fx, fy) * surface.normals, axis=-1)) >= 0 else -1.0
    return measure_surface(g, dual_pts, normal_sign=-src_sign)


def circle_congruence_point(triple: SurfaceTriple, t: float) -> np.ndarray:
    """Point at parameter t on the normal circle congruence:

        c_t = sin(t)/sqrt(2) n + (1 + cos t)/2 f - (1 - cos t)/2 fhat.

    c_0 = f and c_pi = -fhat exactly; <c_t, c_t> = 0 for all t.
    """
    c, s = np.cos(t), np.sin(t)
    return (
        (s / np.sqrt(2.0)) * triple.n
        + 0.5 * (1.0 + c) * triple.f
        - 0.5 * (1.0 - c) * triple.fhat
    )


def _chart_basis(infinity: np.ndarray):
    """Null origin o with <o, infinity> = 1 and a space-like orthonormal triple
    spanning the complement of {infinity, o}."""
    candidates = [np.eye(5)[i] for i in (3, 4, 0, 1, 2)]
    pairings = [abs(float(minkowski_inner(c, infinity))) for c in candidates]
    w = candidates[int(np.argmax(pairings))]
    o0 = w / float(minkowski_inner(w, infinity))
    o = o0 - 0.5 * float(minkowski_inner(o0, o0)) * infinity

    basis = []
    for c in np.eye(5):
        v = c - minkowski_inner(c, o) * infinity - minkowski_inner(c, infinity) * o
        for b in basis:
            v = v - minkowski_inner(v, b) * b
        norm2 = float(minkowski_inner(v, v))
        if norm2 > 1e-10:
            basis.append(v / np.sqrt(norm2))
        if len(basis) == 3:
            break
    if len(basis) != 3:
        raise ValueError("failed to build a space-like chart basis; infinity degenerate?")
    return o, np.array(basis)


def project_to_affine_chart(
    field: np.ndarray,
    infinity: np.ndarray,
    cutoff: float = 1e-8,
) -> np.ndarray:
    """Affine coordinates of light-cone points in the chart missing `infinity`.

    Each point v is scaled to <v, infinity> = 1 and expanded in a
    space-like orthonormal basis of {infinity, origin}^perp; for
    infinity = e5 this returns the e1, e2, e3 components of v / v_4.
    Points with |<v, infinity>| < cutoff sit at this chart's infinity and
    raise ChartSingularityError.
    """
    field = np.asarray(field, dtype=float)
    infinity = np.asarray(infinity, dtype=float)
    if abs(float(minkowski_inner(infinity, infinity))) > 1e-10:
        raise ValueError("the point at infinity must be light-like")

    denom = minkowski_inner(field, infinity)
    bad = np.abs(denom) < cutoff
    if np.any(bad):
        idx = np.unravel_index(int(np.argmin(np.abs(denom))), denom.shape)
        raise ChartSingularityError(
            f"|<v, infinity>| = {float(np.abs(denom).min()):.3e} below cutoff {cutoff:.1e}",
            grid_point=tuple(int(v) for v in idx),
        )
    _, basis = _chart_basis(infinity)
    scaled = field / denom[..., np.newaxis]
    return np.einsum("...i,ij,aj->...a", scaled, METRIC, basis)
