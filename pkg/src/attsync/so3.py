"""Rotation-group primitives.

Hat/vee maps between 3-vectors and skew-symmetric matrices, the Rodrigues
exponential, the matrix logarithm with a stable near-half-turn branch, the
geodesic distance on the rotation group, and the sinc-ratio coefficient
shared with the kinematics module.

Rotation vectors are radians (axis scaled by angle).  Vectors and matrices
are plain float ndarrays of shape (3,) and (3, 3); ``Rotation`` and
``AxisAngle`` wrap them with validation at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "STRUCTURAL_TOL",
    "BOUNDARY_TOL",
    "SMALL_ANGLE",
    "DomainError",
    "Rotation",
    "AxisAngle",
    "hat",
    "vee",
    "exp_so3",
    "log_so3",
    "geodesic_distance",
    "sinc_ratio",
]

# Structural checks (orthonormality, determinant, skewness) against 1e-9;
# domain-boundary slack (angle near pi, trace range) against 1e-6.
STRUCTURAL_TOL = 1e-9
BOUNDARY_TOL = 1e-6

# Below this angle the sinc-type coefficients switch to Taylor expansions.
SMALL_ANGLE = 1e-4

# Above this angle the logarithm extracts the axis from the symmetric part.
_NEAR_PI = math.pi - 1e-3


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


def _as_vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite")
    return arr


def _as_mat3(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class Rotation:
    """A 3x3 rotation matrix, validated at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_mat3(self.matrix)
        if np.linalg.norm(m @ m.T - np.eye(3)) > STRUCTURAL_TOL:
            raise ValueError("matrix is not orthonormal (R R^T != I)")
        if abs(np.linalg.det(m) - 1.0) > STRUCTURAL_TOL:
            raise ValueError("matrix determinant must be +1")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.eye(3))


@dataclass(frozen=True, eq=False)
class AxisAngle:
    """Axis-angle vector: direction is the rotation axis, norm the angle."""

    vector: np.ndarray

    def __post_init__(self):
        v = _as_vec3(self.vector)
        if float(np.linalg.norm(v)) > math.pi + STRUCTURAL_TOL:
            raise ValueError("axis-angle norm exceeds pi")
        object.__setattr__(self, "vector", v)

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.vector))


def hat(v) -> np.ndarray:
    """Skew-symmetric matrix of ``v``: ``hat(v) @ w == cross(v, w)``."""
    x, y, z = _as_vec3(v)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m) -> np.ndarray:
    """Inverse of :func:`hat`; requires ``m`` skew-symmetric within 1e-9."""
    arr = _as_mat3(m)
    if np.linalg.norm(arr + arr.T) > STRUCTURAL_TOL:
        raise DomainError("matrix is not skew-symmetric")
    return np.array([arr[2, 1], arr[0, 2], arr[1, 0]])


def exp_so3(v) -> Rotation:
    """Rodrigues exponential of a rotation vector.

    R = I + (sin t / t) hat(v) + ((1 - cos t) / t^2) hat(v)^2 with
    t = ||v||; for t < 1e-4 the two coefficients use 4th-order Taylor
    expansions to avoid 0/0 cancellation.
    """
    arr = _as_vec3(v)
    theta = float(np.linalg.norm(arr))
    k = hat(arr)
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / (theta * theta)
    return Rotation(np.eye(3) + a * k + b * (k @ k))


def _rotation_matrix(r) -> np.ndarray:
    if isinstance(r, Rotation):
        return r.matrix
    return _as_mat3(r)


def log_so3(rotation) -> AxisAngle:
    """Rotation vector of a rotation matrix (inverse of :func:`exp_so3`).

    The angle comes from atan2 of the antisymmetric-part norm against
    (trace - 1)/2, which stays well conditioned over [0, pi].  Above
    pi - 1e-3 the axis is extracted from the symmetric part instead of the
    sin-scaled antisymmetric part; the identity maps to the zero vector.
    """
    r = _rotation_matrix(rotation)
    trace = float(np.trace(r))
    if trace < -1.0 - STRUCTURAL_TOL or trace > 3.0 + STRUCTURAL_TOL:
        raise DomainError(f"trace {trace:.12g} outside [-1, 3]; not a rotation")
    antisym = 0.5 * np.array(
        [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]
    )  # equals sin(theta) * axis
    s = float(np.linalg.norm(antisym))
    c = 0.5 * (trace - 1.0)
    theta = math.atan2(s, c)
    if theta < SMALL_ANGLE:
        # theta/sin(theta) -> 1; log(I) := 0 as the analytic limit
        return AxisAngle((1.0 + theta * theta / 6.0) * antisym)
    if theta > _NEAR_PI:
        return AxisAngle(_log_near_pi(r, theta, antisym))
    return AxisAngle((theta / s) * antisym)


def _log_near_pi(r: np.ndarray, theta: float, antisym: np.ndarray) -> np.ndarray:
    # (R + R^T)/2 = cos(t) I + (1 - cos(t)) u u^T, so the axis is the
    # eigenvector for the largest eigenvalue (= 1) of the symmetric part.
    sym = 0.5 * (r + r.T)
    _, vecs = np.linalg.eigh(sym)
    axis = vecs[:, 2]
    axis = axis / float(np.linalg.norm(axis))
    projection = float(axis @ antisym)  # sin(theta) * (u . axis)
    if abs(projection) > 1e-12:
        if projection < 0.0:
            axis = -axis
    else:
        # Exact half-turn: both antipodal vectors map to R.  Convention:
        # first component larger than 1e-12 in magnitude made positive.
        for comp in axis:
            if abs(comp) > 1e-12:
                if comp < 0.0:
                    axis = -axis
                break
    return min(theta, math.pi) * axis


def geodesic_distance(r1, r2) -> float:
    """Riemannian distance on the rotation group: the angle of R1^-1 R2."""
    m1 = _rotation_matrix(r1)
    m2 = _rotation_matrix(r2)
    return log_so3(m1.T @ m2).angle


def _sinc_ratio_core(theta: np.ndarray) -> np.ndarray:
    """sinc(t) / sinc(t/2)^2 on [0, pi,] without domain checks.

    Algebraically equal to (t/2) / tan(t/2): decreasing from 1 at t = 0
    to exactly 0 at t = pi.
    """
    half = 0.5 * theta
    safe = np.where(half > 0.0, half, 1.0)
    t2 = theta * theta
    taylor = 1.0 - t2 / 12.0 - t2 * t2 / 720.0
    out = np.where(theta < SMALL_ANGLE, taylor, half / np.tan(safe))
    return np.where(theta >= math.pi, 0.0, out)


def sinc_ratio(theta):
    """Radial coefficient of the axis-angle transition matrix.

    Accepts a scalar or an ndarray of angles in [0, pi]; values lie in
    [0, 1], with 1 at 0 and 0 at pi.  Angles below 1e-4 use the Taylor
    expansion 1 - t^2/12 - t^4/720.
    """
    arr = np.asarray(theta, dtype=float)
    if np.any(arr < -STRUCTURAL_TOL) or np.any(arr > math.pi + STRUCTURAL_TOL):
        raise DomainError("sinc ratio is defined on [0, pi]")
    out = _sinc_ratio_core(np.clip(arr, 0.0, math.pi))
    if arr.ndim == 0:
        return float(out)
    return out
