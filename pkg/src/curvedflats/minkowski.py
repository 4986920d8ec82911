"""Linear algebra for 5-dimensional Minkowski space in a light-cone basis.

The bilinear form of signature (4,1) is stored as the Gram matrix

    METRIC = [[ I3  0 ]      J = [[0, 1],
              [ 0   J ]],         [1, 0]],

so the first three basis vectors are orthonormal space-like directions and
the last two are null directions pairing to 1.  The isometry group is

    O1(5)  = { A : A^T METRIC A = METRIC },

with Lie algebra

    o1(5)  = { X : (METRIC X) + (METRIC X)^T = 0 }.

Conjugation by Q = diag(-1, -1, -1, 1, 1) is an involutive automorphism of
o1(5); its +1 eigenspace is the block-diagonal subalgebra o(3) x o1(2) and
its -1 eigenspace is the complementary off-block-diagonal subspace.  All
connection forms and frames downstream live in this decomposition.

Every function is pure and accepts stacked operands: vectors of shape
(..., 5), matrices of shape (..., 5, 5).
"""

from __future__ import annotations

import numpy as np

from .errors import ReorthonormalizationError

__all__ = [
    "METRIC",
    "SPLIT_INVOLUTION",
    "basis_vector",
    "minkowski_inner",
    "algebra_defect",
    "orthogonality_defect",
    "kp_split",
    "group_exp",
    "group_inverse",
    "reorthonormalize",
    "defect_floor",
]

METRIC = np.array(
    [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 1.0, 0.0],
    ]
)
METRIC.setflags(write=False)

# Involution defining the symmetric split of o1(5).
SPLIT_INVOLUTION = np.diag([-1.0, -1.0, -1.0, 1.0, 1.0])
SPLIT_INVOLUTION.setflags(write=False)


def basis_vector(i: int) -> np.ndarray:
    """Return the i-th basis vector (1-based, matching the e_1..e_5 labels)."""
    v = np.zeros(5)
    v[i - 1] = 1.0
    return v


def minkowski_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Indefinite inner product a^T METRIC b, broadcast over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,ij,...j->...", a, METRIC, b)


def algebra_defect(X: np.ndarray) -> np.ndarray:
    """Max-norm of (METRIC X) + (METRIC X)^T; zero iff X lies in o1(5).

    Returns a scalar for a single matrix, an array of shape (...) for stacks.
    """
    X = np.asarray(X, dtype=float)
    EX = METRIC @ X
    S = EX + np.swapaxes(EX, -1, -2)
    return np.abs(S).max(axis=(-1, -2))

def orthogonality_defect(A: np.ndarray) -> np.ndarray:
    """Max-norm of A^T METRIC A - METRIC; zero iff A lies in O1(5)."""
    A = np.asarray(A, dtype=float)
    S = np.swapaxes(A, -1, -2) @ METRIC @ A - METRIC
    return np.abs(S).max(axis=(-1, -2))


def kp_split(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split X into its +1/-1 eigenparts under conjugation by SPLIT_INVOLUTION.

    X_k = (X + Q X Q)/2 keeps only the diagonal 3x3 and 2x2 blocks;
    X_p = X - X_k keeps only the off-diagonal blocks.  The sum is exact.
    """
    X = np.asarray(X, dtype=float)
    QXQ = SPLIT_INVOLUTION @ X @ SPLIT_INVOLUTION
    Xk = 0.5 * (X + QXQ)
    return Xk, X - Xk


# Degree-13 Pade coefficients for expm (Higham's scaling-and-squaring).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def group_exp(X: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a degree-13 Pade core.

    Exact algebra elements map into O1(5) up to roundoff; block-diagonal
    inputs produce block-diagonal outputs.  Stacked input is exponentiated
    matrix-wise (one common squaring count, taken from the largest 1-norm).
    """
    X = np.asarray(X, dtype=float)
    single = X.ndim == 2
    A = X[np.newaxis] if single else X

    norm1 = np.abs(A).sum(axis=-2).max(axis=-1)
    nmax = float(norm1.max()) if norm1.size else 0.0
    s = max(0, int(np.ceil(np.log2(nmax / _THETA13)))) if nmax > _THETA13 else 0
    A = A / (2.0**s)

    b = _PADE13
    ident = np.broadcast_to(np.eye(5), A.shape)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = A @ (
        A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
        + b[7] * A6
        + b[5] * A4
        + b[3] * A2
        + b[1] * ident
    )
    V = (
        A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
        + b[6] * A6
        + b[4] * A4
        + b[2] * A2
        + b[0] * ident
    )
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R[0] if single else R


def group_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of an isometry via the metric adjoint: METRIC A^T METRIC."""
    A = np.asarray(A, dtype=float)
    return METRIC @ np.swapaxes(A, -1, -2) @ METRIC


def defect_floor(G: np.ndarray) -> float:
    """Smallest orthogonality defect representable for matrices of this size.

    The defect contracts products of entries, so roundoff alone contributes
    about machine epsilon times the squared magnitude; no stored matrix near
    G can do better.  Group membership of large-entry isometries is only
    meaningful relative to this floor.
    """
    m = 1.0 + float(np.abs(G).max())
    return 32.0 * np.finfo(float).eps * m * m


def reorthonormalize(
    G: np.ndarray,
    tol: float = 1e-13,
    max_iter: int = 30,
) -> np.ndarray:
    """Project a near-isometry back into O1(5) by the averaging iteration

        G <- (G + METRIC G^{-T} METRIC) / 2,

    iterated until orthogonality_defect(G) < tol or the roundoff floor for
    matrices of this magnitude is reached.  The iteration contracts
    quadratically near the group, so the defect drops by far more than a
    factor of 10 per sweep for inputs with defect below ~1e-2.  Raises
    ReorthonormalizationError when the defect stops decreasing while still
    above the floor (the input is too far from the group; the contract
    requires defect < 0.1).

    The metric-adapted average is used instead of an SVD polar factor
    because the Euclidean polar factor of a near-O1(5) matrix does not lie
    in O1(5) for an indefinite metric.
    """
    G = np.asarray(G, dtype=float).copy()
    defect = float(np.max(orthogonality_defect(G)))
    for _ in range(max_iter):
        if defect < tol:
            return G
        Gn = 0.5 * (G + METRIC @ np.swapaxes(np.linalg.inv(G), -1, -2) @ METRIC)
        new_defect = float(np.max(orthogonality_defect(Gn)))
        if not new_defect < defect:
            if defect <= defect_floor(G):
                return G
            raise ReorthonormalizationError(
                f"averaging iteration stalled at defect {new_defect:.3e} "
                f"(previous {defect:.3e}); input too far from O1(5)"
            )
        G, defect = Gn, new_defect
    if defect < tol or defect <= defect_floor(G):
        return G
    raise ReorthonormalizationError(
        f"defect {defect:.3e} still above tol {tol:.1e} after {max_iter} iterations"
    )
