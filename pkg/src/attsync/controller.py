"""Distributed signum controller and the closed-loop right-hand side.

Each agent steers with the componentwise sign of its neighbors' state
differences.  The discontinuous sign can be realized exactly, with a
deadband (zero inside a small band, the default), or smoothed with tanh;
the regularized modes are practical selections of the sliding-mode
solution for fixed-step integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kinematics
from .graphs import Graph, incidence_matrix
from .kinematics import as_state_array
from .so3 import STRUCTURAL_TOL

__all__ = [
    "DEFAULT_EPSILON",
    "SignMode",
    "NetworkState",
    "SingularityError",
    "sign_value",
    "control_input",
    "control_input_stacked",
    "closed_loop_rhs",
]

DEFAULT_EPSILON = 1e-3

_SIGN_KINDS = ("exact", "deadband", "smooth")


class SingularityError(RuntimeError):
    """A state reached the pi boundary of the axis-angle chart."""


@dataclass(frozen=True)
class SignMode:
    """Realization of the signum nonlinearity: exact, deadband, or smooth."""

    kind: str
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in _SIGN_KINDS:
            raise ValueError(f"unknown sign mode {self.kind!r}; use one of {_SIGN_KINDS}")
        if self.kind == "exact":
            object.__setattr__(self, "epsilon", 0.0)
        elif not self.epsilon > 0.0:
            raise ValueError(f"{self.kind} mode needs epsilon > 0")

    @classmethod
    def exact(cls) -> "SignMode":
        return cls("exact")

    @classmethod
    def deadband(cls, epsilon: float = DEFAULT_EPSILON) -> "SignMode":
        return cls("deadband", epsilon)

    @classmethod
    def smooth(cls, epsilon: float = DEFAULT_EPSILON) -> "SignMode":
        return cls("smooth", epsilon)


DEFAULT_SIGN_MODE = SignMode.deadband()


@dataclass(frozen=True, eq=False)
class NetworkState:
    """Stacked axis-angle states of n agents as an (n, 3) array."""

    states: np.ndarray

    def __post_init__(self):
        arr = as_state_array(self.states).copy()
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms > math.pi + STRUCTURAL_TOL):
            raise ValueError("every agent state must have norm <= pi")
        object.__setattr__(self, "states", arr)

    @property
    def n(self) -> int:
        return self.states.shape[0]


def _apply_sign(values: np.ndarray, mode: SignMode) -> np.ndarray:
    if mode.kind == "exact":
        return np.sign(values)
    if mode.kind == "deadband":
        return np.where(np.abs(values) <= mode.epsilon, 0.0, np.sign(values))
    return np.tanh(values / mode.epsilon)


def sign_value(a: float, mode: SignMode = DEFAULT_SIGN_MODE) -> float:
    """Scalar sign in the selected mode; odd, valued in [-1, 1]."""
    if not math.isfinite(a):
        raise ValueError("sign input must be finite")
    return float(_apply_sign(np.asarray(float(a)), mode))


def _checked_states(states, g: Graph) -> np.ndarray:
    xs = as_state_array(states)
    if xs.shape[0] != g.n:
        raise ValueError(f"state has {xs.shape[0]} agents but graph has {g.n} nodes")
    return xs


def control_input(states, g: Graph, mode: SignMode = DEFAULT_SIGN_MODE) -> np.ndarray:
    """Angular-velocity command per agent: sum of componentwise signs of
    neighbor differences."""
    xs = _checked_states(states, g)
    nbrs: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in g.edges:
        nbrs[i - 1].append(j - 1)
        nbrs[j - 1].append(i - 1)
    out = np.zeros_like(xs)
    for i, js in enumerate(nbrs):
        if js:
            out[i] = _apply_sign(xs[js] - xs[i], mode).sum(axis=0)
    return out


def control_input_stacked(
    states, g: Graph, mode: SignMode = DEFAULT_SIGN_MODE
) -> np.ndarray:
    """Equivalent incidence form of the control: -B_hat sign(B_hat^T x)."""
    xs = _checked_states(states, g)
    b = incidence_matrix(g)
    return -(b @ _apply_sign(b.T @ xs, mode))


def closed_loop_rhs(states, g: Graph, mode: SignMode = DEFAULT_SIGN_MODE) -> np.ndarray:
    """State rate under the signum control law.

    Raises :class:`SingularityError` when a state norm reaches pi, where the
    axis-angle chart (and the transition matrix spectrum bound) breaks down.
    """
    xs = _checked_states(states, g)
    norms = np.linalg.norm(xs, axis=1)
    if np.any(norms >= math.pi):
        raise SingularityError("a state norm reached the pi chart boundary")
    return kinematics.state_derivative(xs, control_input(xs, g, mode))
