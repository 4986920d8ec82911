"""Procrustes alignment of point clouds for shape comparisons.

All geometric reconstructions in this package are defined up to a global
motion (integration constants, frame base points, chart choices), so
surface comparisons are made after an optimal alignment: rigid
(rotation + translation), orthogonal (reflections allowed), or similarity
(with scale).
"""

from __future__ import annotations

import numpy as np

__all__ = ["align_points", "rms_distance"]


def align_points(
    src: np.ndarray,
    dst: np.ndarray,
    allow_reflection: bool = False,
    allow_scale: bool = False,
):
    """Least-squares align src onto dst over Q src + t (optionally s Q src + t).

    Returns (aligned_src, rms).  Q is orthogonal; det Q = +1 unless
    allow_reflection.  Shapes (..., 3) are flattened to point lists.
    """
    P = np.asarray(src, dtype=float).reshape(-1, 3)
    D = np.asarray(dst, dtype=float).reshape(-1, 3)
    if P.shape != D.shape:
        raise ValueError(f"point sets differ in shape: {P.shape} vs {D.shape}")
    pc, dc = P.mean(axis=0), D.mean(axis=0)
    P0, D0 = P - pc, D - dc

    H = P0.T @ D0
    U, S, Vt = np.linalg.svd(H)
    signs = np.ones(3)
    if not allow_reflection and np.linalg.det(Vt.T @ U.T) < 0:
        signs[2] = -1.0
    Q = Vt.T @ np.diag(signs) @ U.T

    if allow_scale:
        denom = (P0**2).sum()
        s = float((S * signs).sum() / denom) if denom > 0 else 1.0
    else:
        s = 1.0

    aligned = s * P0 @ Q.T + dc
    rms = float(np.sqrt(np.mean(np.sum((aligned - D) ** 2, axis=1))))
    return aligned.reshape(np.asarray(src).shape), rms


def rms_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Root-mean-square pointwise distance between two (..., 3) point fields."""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    return float(np.sqrt(np.mean(np.sum((a - b) ** 2, axis=1))))
