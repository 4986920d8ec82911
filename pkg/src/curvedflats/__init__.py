"""Isothermic surface pairs as curved flats in the light-cone model.

The package builds spectral families of flat o1(5)-valued connection forms
from isothermic surface data, integrates moving frames, extracts sphere
congruences and their enveloping surface pairs, reconstructs Euclidean
representatives (directly and through affine charts of the projective
light cone), and evaluates the fourth-order conformal-factor equation that
encodes the whole construction Moebius invariantly.
"""

from .grids import Grid, diff_x, diff_y, diff_xx, diff_yy, diff_xy, laplacian
from .minkowski import (
    METRIC,
    SPLIT_INVOLUTION,
    algebra_defect,
    basis_vector,
    group_exp,
    group_inverse,
    kp_split,
    minkowski_inner,
    orthogonality_defect,
    reorthonormalize,
)
from .patches import (
    IsothermicPatch,
    MeridianCurve,
    conformal_factor_k,
    gauss_codazzi_residual,
    make_cylinder_patch,
    make_plane_patch,
    revolution_patch,
    solve_meridian,
)
from .connections import (
    ConnectionForm,
    CurvatureField,
    build_degenerate_revolution_form,
    build_phi_lambda,
    build_revolution_form,
    curved_flat_defect,
    zero_curvature_residual,
)
from .frames import (
    FrameField,
    GaugeField,
    apply_frame_change,
    apply_gauge,
    conformal_rescale,
    integrate_frame,
    measured_connection,
    path_independence_defect,
)
from .surfaces import (
    EuclideanSurface,
    SurfaceTriple,
    circle_congruence_point,
    envelope_defect,
    euclidean_dual,
    extract_triple,
    measure_surface,
    project_to_affine_chart,
    second_form_diagonality,
    sym_surfaces,
)
from .calapso import (
    CalapsoField,
    build_conformal_change_form,
    build_moebius_frame_form,
    calapso_residual,
    integrate_u,
    isothermic_from_calapso,
    sphere_shift_change,
    u0_revolution_preset,
)
from .alignment import align_points, rms_distance

__version__ = "0.1.0"
