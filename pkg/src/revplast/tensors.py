"""Orthonormal (Mandel) 6-component algebra for symmetric tensors.

Symmetric second-order tensors are stored as 6-vectors
``(a11, a22, a33, sqrt(2)*a23, sqrt(2)*a13, sqrt(2)*a12)`` and fourth-order
tensors with minor symmetries as 6x6 matrices in the same basis.  The basis is
orthonormal, so the 6-vector dot product equals the full double contraction,
composition/inversion/transposition of operators are plain matrix operations,
and rotation operators are orthogonal 6x6 matrices.  Stresses are in MPa,
strains dimensionless.
"""
from __future__ import annotations

import numpy as np

from .errors import IncompressibilityError, SingularOperatorError, SymmetryError

SQRT2 = np.sqrt(2.0)

# component order of the Mandel basis: 11, 22, 33, 23, 13, 12
COMPONENT_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
COMPONENT_LABELS = ("11", "22", "33", "23", "13", "12")
_SCALE = np.array([1.0, 1.0, 1.0, SQRT2, SQRT2, SQRT2])

#: second-order identity as a Mandel vector
IVEC = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
IDENTITY = np.eye(6)


def sym2_from_matrix(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Convert a symmetric 3x3 matrix to its Mandel 6-vector."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    scale = max(1.0, np.abs(m).max())
    if np.abs(m - m.T).max() > tol * scale:
        raise SymmetryError("matrix is not symmetric to within tolerance")
    return np.array([_SCALE[k] * m[i, j] for k, (i, j) in enumerate(COMPONENT_PAIRS)])


def sym2_to_matrix(v: np.ndarray) -> np.ndarray:
    """Convert a Mandel 6-vector back to the symmetric 3x3 matrix."""
    v = np.asarray(v, dtype=float)
    m = np.zeros((3, 3))
    for k, (i, j) in enumerate(COMPONENT_PAIRS):
        m[i, j] = m[j, i] = v[k] / _SCALE[k]
    return m


def ten4_from_tensor(t: np.ndarray) -> np.ndarray:
    """Convert a minor-symmetric 3x3x3x3 tensor to its Mandel 6x6 matrix."""
    t = np.asarray(t, dtype=float)
    out = np.empty((6, 6))
    for a, (i, j) in enumerate(COMPONENT_PAIRS):
        for b, (k, l) in enumerate(COMPONENT_PAIRS):
            out[a, b] = _SCALE[a] * _SCALE[b] * t[i, j, k, l]
    return out


def ten4_to_tensor(m: np.ndarray) -> np.ndarray:
    """Convert a Mandel 6x6 matrix to the minor-symmetric 3x3x3x3 tensor."""
    m = np.asarray(m, dtype=float)
    t = np.zeros((3, 3, 3, 3))
    for a, (i, j) in enumerate(COMPONENT_PAIRS):
        for b, (k, l) in enumerate(COMPONENT_PAIRS):
            v = m[a, b] / (_SCALE[a] * _SCALE[b])
            t[i, j, k, l] = t[j, i, k, l] = t[i, j, l, k] = t[j, i, l, k] = v
    return t


def ten4_apply(t: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Double contraction T : a."""
    return np.asarray(t) @ np.asarray(a)


def ten4_mul(t: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Operator composition T : U."""
    return np.asarray(t) @ np.asarray(u)


def ten4_transpose(t: np.ndarray) -> np.ndarray:
    """Major transpose; the adjoint w.r.t. the double contraction."""
    return np.asarray(t).T.copy()


def ten4_inv(t: np.ndarray, cond_limit: float = 1e12) -> np.ndarray:
    """Invert a fourth-order operator, rejecting ill-conditioned input."""
    t = np.asarray(t, dtype=float)
    cond = np.linalg.cond(t)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularOperatorError("fourth-order operator not invertible", cond)
    return np.linalg.inv(t)


def is_major_symmetric(t: np.ndarray, tol: float = 1e-12) -> bool:
    t = np.asarray(t)
    scale = max(1.0, np.abs(t).max())
    return bool(np.abs(t - t.T).max() <= tol * scale)


def iso_projectors() -> tuple[np.ndarray, np.ndarray]:
    """Spherical and deviatoric projectors (J, K) with J + K = I."""
    j = np.outer(IVEC, IVEC) / 3.0
    return j, np.eye(6) - j


J_PROJ, K_PROJ = iso_projectors()


def iso_stiffness(young: float, poisson: float) -> np.ndarray:
    """Isotropic stiffness 3k*J + 2mu*K from Young's modulus (MPa) and Poisson ratio."""
    if young <= 0.0:
        raise ValueError(f"Young's modulus must be positive, got {young}")
    if not -1.0 < poisson < 0.5:
        if poisson == 0.5:
            raise IncompressibilityError("poisson ratio 0.5 gives a singular stiffness")
        raise ValueError(f"Poisson ratio must lie in (-1, 0.5), got {poisson}")
    k = young / (3.0 * (1.0 - 2.0 * poisson))
    mu = young / (2.0 * (1.0 + poisson))
    return 3.0 * k * J_PROJ + 2.0 * mu * K_PROJ


def bulk_shear_moduli(c: np.ndarray) -> tuple[float, float]:
    """(k, mu) projections of a stiffness; exact for isotropic input."""
    c = np.asarray(c)
    return float(np.tensordot(J_PROJ, c) / 3.0), float(np.tensordot(K_PROJ, c) / 10.0)


def check_rotation(r: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate a proper rotation matrix and return it as float array."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got shape {r.shape}")
    if np.abs(r.T @ r - np.eye(3)).max() > tol:
        raise ValueError("rotation matrix is not orthonormal")
    if abs(np.linalg.det(r) - 1.0) > tol:
        raise ValueError("rotation matrix must be proper (det = +1)")
    return r


def rotation_operator(r: np.ndarray) -> np.ndarray:
    """6x6 Mandel operator of the rotation a -> R a R^T; orthogonal by construction."""
    r = check_rotation(r)
    op = np.empty((6, 6))
    for b in range(6):
        basis = np.zeros(6)
        basis[b] = 1.0
        op[:, b] = sym2_from_matrix(r @ sym2_to_matrix(basis) @ r.T)
    return op


def rotate_sym2(a: np.ndarray, r: np.ndarray) -> np.ndarray:
    return rotation_operator(r) @ np.asarray(a)


def rotate_ten4(t: np.ndarray, r: np.ndarray) -> np.ndarray:
    op = rotation_operator(r)
    return op @ np.asarray(t) @ op.T
