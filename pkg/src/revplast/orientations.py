"""Orientation helpers: axis-to-rotation frames and the built-in direction sets."""
from __future__ import annotations

import numpy as np


def rotation_to_axis(axis) -> np.ndarray:
    """Rotation mapping the local frame (symmetry axis = local 3) onto ``axis``.

    The in-plane frame completion is deterministic so repeated runs give
    identical operators; transversely isotropic tensors do not depend on it.
    """
    d = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise ValueError("orientation axis must be nonzero")
    d = d / norm
    seed = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = seed - np.dot(seed, d) * d
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(d, t1)
    return np.column_stack([t1, t2, d])


def cube26() -> list[np.ndarray]:
    """26 unit directions of cube symmetry: 6 face, 12 edge, 8 vertex."""
    dirs: list[np.ndarray] = []
    for i in range(3):
        for s in (1.0, -1.0):
            v = np.zeros(3)
            v[i] = s
            dirs.append(v)
    for i in range(3):
        for j in range(i + 1, 3):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    v = np.zeros(3)
                    v[i], v[j] = si, sj
                    dirs.append(v / np.sqrt(2.0))
    for sx in (1.0, -1.0):
        for sy in (1.0, -1.0):
            for sz in (1.0, -1.0):
                dirs.append(np.array([sx, sy, sz]) / np.sqrt(3.0))
    return dirs


ORIENTATION_SETS = {"cube26": cube26}
