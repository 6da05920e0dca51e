"""Axis-angle kinematics.

The transition matrix mapping body angular velocity to the rate of the
axis-angle coordinates, its positive-semidefinite symmetric part and
spectrum, and the stacked open-loop state derivative for a network of
rigid bodies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import so3
from .so3 import SMALL_ANGLE, STRUCTURAL_TOL, DomainError

__all__ = [
    "TransitionMatrix",
    "transition_matrix",
    "symmetric_part",
    "lambda_min",
    "state_derivative",
    "as_state_array",
]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Velocity-to-coordinate-rate matrix together with its source state."""

    matrix: np.ndarray
    source_state: np.ndarray


def _as_axis_vec(x) -> np.ndarray:
    vec = x.vector if isinstance(x, so3.AxisAngle) else np.asarray(x, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"expected a 3-vector state, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("state components must be finite")
    return vec


def _checked_angle(vec: np.ndarray) -> float:
    theta = float(np.linalg.norm(vec))
    if theta > math.pi + STRUCTURAL_TOL:
        raise DomainError(f"state norm {theta:.12g} exceeds pi")
    return min(theta, math.pi)


def transition_matrix(x) -> TransitionMatrix:
    """Transition matrix L of an axis-angle state with ||x|| <= pi.

    L = r I + (1 - r) x x^T / ||x||^2 + hat(x)/2 with r the sinc ratio of
    ||x||; below the small-angle switch the 0/0 outer-product term drops
    and L = I + hat(x)/2.
    """
    vec = _as_axis_vec(x)
    theta = _checked_angle(vec)
    if theta < SMALL_ANGLE:
        m = np.eye(3) + 0.5 * so3.hat(vec)
    else:
        r = so3.sinc_ratio(theta)
        m = (
            r * np.eye(3)
            + ((1.0 - r) / (theta * theta)) * np.outer(vec, vec)
            + 0.5 * so3.hat(vec)
        )
    return TransitionMatrix(m, vec)


def symmetric_part(x) -> np.ndarray:
    """Symmetric part of the transition matrix; eigenvalues {r, r, 1}."""
    vec = _as_axis_vec(x)
    theta = _checked_angle(vec)
    if theta < SMALL_ANGLE:
        return np.eye(3)
    r = so3.sinc_ratio(theta)
    return r * np.eye(3) + ((1.0 - r) / (theta * theta)) * np.outer(vec, vec)


def lambda_min(x) -> float:
    """Smallest eigenvalue of the symmetric part; positive for ||x|| < pi."""
    vec = _as_axis_vec(x)
    theta = float(np.linalg.norm(vec))
    if theta >= math.pi:
        raise DomainError("smallest eigenvalue reaches 0 at the pi boundary")
    return so3.sinc_ratio(theta)


def as_state_array(states) -> np.ndarray:
    """Coerce a stacked network state to an (n, 3) float array."""
    arr = getattr(states, "states", states)
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1 and arr.size % 3 == 0:
        arr = arr.reshape(-1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
        raise ValueError(f"expected an (n, 3) state array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state components must be finite")
    return arr


def _apply_transition(xs: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Per-agent L(x_i) @ omega_i, vectorized over the agent axis.

    Uses L w = r w + (1 - r)(x.w / ||x||^2) x + (x cross w)/2, which
    avoids forming the n 3x3 matrices.
    """
    normsq = np.einsum("ij,ij->i", xs, xs)
    norms = np.sqrt(normsq)
    small = norms < SMALL_ANGLE
    ratio = np.where(small, 1.0, so3._sinc_ratio_core(np.minimum(norms, math.pi)))
    dots = np.einsum("ij,ij->i", xs, omega)
    coef = np.where(
        small, 0.0, (1.0 - ratio) * dots / np.where(small, 1.0, normsq)
    )
    return ratio[:, None] * omega + coef[:, None] * xs + 0.5 * np.cross(xs, omega)


def state_derivative(states, omega) -> np.ndarray:
    """Open-loop rate of the stacked state: block-diagonal L applied to omega.

    ``states`` and ``omega`` may be (n, 3) arrays or flat length-3n vectors;
    the result is (n, 3).
    """
    xs = as_state_array(states)
    om = np.asarray(omega, dtype=float)
    if om.ndim == 1 and om.size == xs.size:
        om = om.reshape(xs.shape)
    if om.shape != xs.shape:
        raise ValueError(
            f"velocity shape {om.shape} does not match state shape {xs.shape}"
        )
    norms = np.linalg.norm(xs, axis=1)
    if np.any(norms > math.pi + STRUCTURAL_TOL):
        raise DomainError("a state norm exceeds pi")
    return _apply_transition(xs, om)
