"""Fixed-step integration of the discontinuous closed loop plus monitors.

One forward-Euler selection of the sliding-mode solution is computed,
with trajectory recording and the monitor channels used to validate the
invariance, finite-time-consensus, and singularity claims empirically:
V1 = l1 norm of the edge differences, V2 = half the squared state norm,
the maximum agent norm, and the worst pairwise disagreement.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import so3
from .controller import DEFAULT_SIGN_MODE, SignMode
from .graphs import Graph, incidence_matrix, is_connected
from .kinematics import as_state_array
from .so3 import STRUCTURAL_TOL

__all__ = [
    "EventKind",
    "Event",
    "SimConfig",
    "TrajectoryRecord",
    "MonitorReport",
    "integrate",
    "lyapunov_v1",
    "lyapunov_v2",
    "disagreement",
    "max_state_norm",
    "check_invariance",
    "estimate_v1_slope",
    "build_report",
]

# Per-step Lyapunov drift budget; invariance checks allow it linearly in
# the number of steps.
DRIFT_RATE = 1e-6

DEFAULT_CONSENSUS_TOLERANCE = 1e-2


class EventKind(Enum):
    CONSENSUS_REACHED = "consensus_reached"
    SINGULARITY_CROSSED = "singularity_crossed"
    DOMAIN_ERROR = "domain_error"


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Inputs of one simulation run."""

    graph: Graph
    initial_state: np.ndarray
    t_max: float
    dt: float = 1e-3
    mode: SignMode = DEFAULT_SIGN_MODE
    consensus_tolerance: float = DEFAULT_CONSENSUS_TOLERANCE
    record_stride: int = 1

    def __post_init__(self):
        xs = as_state_array(self.initial_state).copy()
        if xs.shape[0] != self.graph.n:
            raise ValueError(
                f"initial state has {xs.shape[0]} agents, graph has {self.graph.n}"
            )
        norms = np.linalg.norm(xs, axis=1)
        if np.any(norms > math.pi + STRUCTURAL_TOL):
            raise ValueError("initial state norms must not exceed pi")
        if not 0.0 < self.dt <= 1e-2:
            raise ValueError(f"dt must be in (0, 1e-2], got {self.dt}")
        if self.t_max < self.dt:
            raise ValueError("t_max must be at least dt")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")
        if self.consensus_tolerance < 0.0:
            raise ValueError("consensus_tolerance must be nonnegative")
        object.__setattr__(self, "initial_state", xs)
        object.__setattr__(self, "record_stride", int(self.record_stride))


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Recorded time series plus the events raised during integration."""

    times: np.ndarray        # (k,)
    states: np.ndarray       # (k, n, 3)
    v1: np.ndarray           # (k,)
    v2: np.ndarray           # (k,)
    max_norm: np.ndarray     # (k,)
    disagreement: np.ndarray  # (k,)
    events: tuple[Event, ...] = field(default_factory=tuple)

    def first_event_time(self, kind: EventKind):
        for event in self.events:
            if event.kind is kind:
                return event.time
        return None


@dataclass(frozen=True)
class MonitorReport:
    """Aggregated trajectory diagnostics."""

    consensus_time: float | None
    final_disagreement: float
    v2_max_increase_per_step: float
    invariance_violated: bool
    min_lambda_along_trajectory: float
    v1_max_slope_outside_consensus: float | None
    singularity_time: float | None

    def to_dict(self) -> dict:
        return {
            "consensus_time": self.consensus_time,
            "final_disagreement": self.final_disagreement,
            "v2_max_increase_per_step": self.v2_max_increase_per_step,
            "invariance_violated": self.invariance_violated,
            "min_lambda_along_trajectory": self.min_lambda_along_trajectory,
            "v1_max_slope_outside_consensus": self.v1_max_slope_outside_consensus,
            "singularity_time": self.singularity_time,
        }


def lyapunov_v2(states) -> float:
    """Half the squared norm of the stacked state."""
    xs = as_state_array(states)
    return 0.5 * float(np.einsum("ij,ij->", xs, xs))


def lyapunov_v1(states, g: Graph) -> float:
    """Sum over edges of the l1 norm of the state difference."""
    xs = as_state_array(states)
    if xs.shape[0] != g.n:
        raise ValueError(f"state has {xs.shape[0]} agents but graph has {g.n} nodes")
    b = incidence_matrix(g)
    return float(np.abs(b.T @ xs).sum())


def disagreement(states) -> float:
    """Worst pairwise l-infinity distance; zero iff all agents agree."""
    xs = as_state_array(states)
    return float((xs.max(axis=0) - xs.min(axis=0)).max())


def max_state_norm(states) -> float:
    xs = as_state_array(states)
    return float(np.linalg.norm(xs, axis=1).max())


def integrate(config: SimConfig) -> TrajectoryRecord:
    """Explicit-Euler trajectory of the closed loop.

    Records every ``record_stride`` steps (the initial state always), logs
    a consensus event at the first time the disagreement falls inside the
    tolerance, and halts early when a state norm reaches pi (singularity)
    or the state stops being finite.  Once the control vanishes exactly,
    the remaining trajectory is constant and is filled without stepping.
    """
    from . import _engine  # deferred: numba import and JIT are slow

    g = config.graph
    if not is_connected(g):
        warnings.warn("graph is not connected; consensus is not expected", stacklevel=2)

    dt = config.dt
    stride = config.record_stride
    mode = config.mode
    mode_code = {"exact": _engine.MODE_EXACT, "deadband": _engine.MODE_DEADBAND,
                 "smooth": _engine.MODE_SMOOTH}[mode.kind]
    n_steps = max(1, int(round(config.t_max / dt)))
    tails = np.array([i - 1 for i, _ in g.edges], dtype=np.int64)
    heads = np.array([j - 1 for _, j in g.edges], dtype=np.int64)

    n = g.n
    cap = n_steps // stride + 2
    rec_steps = np.zeros(cap, dtype=np.int64)
    rec_states = np.zeros((cap, n, 3))
    rec_v1 = np.zeros(cap)
    rec_v2 = np.zeros(cap)
    rec_mx = np.zeros(cap)
    rec_spread = np.zeros(cap)

    x = config.initial_state.copy()
    count, consensus_step, sing_step, domerr_step, frozen_step = _engine.run_loop(
        x, tails, heads, dt, n_steps, stride, mode_code, mode.epsilon,
        config.consensus_tolerance,
        rec_steps, rec_states, rec_v1, rec_v2, rec_mx, rec_spread,
    )

    if frozen_step >= 0:
        # the Euler map is at an exact equilibrium: fill the constant tail
        for k2 in range((frozen_step // stride + 1) * stride, n_steps + 1, stride):
            rec_steps[count] = k2
            rec_states[count] = rec_states[count - 1]
            rec_v1[count] = rec_v1[count - 1]
            rec_v2[count] = rec_v2[count - 1]
            rec_mx[count] = rec_mx[count - 1]
            rec_spread[count] = rec_spread[count - 1]
            count += 1

    events = []
    if consensus_step >= 0:
        events.append(Event(consensus_step * dt, EventKind.CONSENSUS_REACHED))
    if sing_step >= 0:
        events.append(Event(sing_step * dt, EventKind.SINGULARITY_CROSSED))
    if domerr_step >= 0:
        events.append(Event(domerr_step * dt, EventKind.DOMAIN_ERROR))
    events.sort(key=lambda event: event.time)

    return TrajectoryRecord(
        times=rec_steps[:count] * dt,
        states=rec_states[:count].copy(),
        v1=rec_v1[:count].copy(),
        v2=rec_v2[:count].copy(),
        max_norm=rec_mx[:count].copy(),
        disagreement=rec_spread[:count].copy(),
        events=tuple(events),
    )


def check_invariance(traj: TrajectoryRecord, bound: float) -> bool:
    """True iff the total squared norm stays below ``bound`` throughout.

    The budget for integration drift grows linearly with elapsed time
    (DRIFT_RATE per unit of steps*dt).
    """
    if traj.times.size == 0:
        raise ValueError("trajectory is empty")
    allowance = DRIFT_RATE * float(traj.times[-1] - traj.times[0])
    return bool(np.all(2.0 * traj.v2 < bound + allowance))


def estimate_v1_slope(traj: TrajectoryRecord, window: int) -> float | None:
    """Largest windowed finite-difference slope of V1 before consensus.

    Windows end at or before the consensus event (the whole trajectory if
    none).  Returns None when the trajectory starts at consensus or has
    fewer than ``window`` + 1 pre-consensus samples.
    """
    if window < 1:
        raise ValueError("window must be a positive integer")
    t_consensus = traj.first_event_time(EventKind.CONSENSUS_REACHED)
    if t_consensus is not None and t_consensus <= traj.times[0]:
        return None
    if t_consensus is None:
        last = traj.times.size - 1
    else:
        last = int(np.searchsorted(traj.times, t_consensus, side="right")) - 1
    if last < window:
        return None
    t = traj.times[: last + 1]
    v1 = traj.v1[: last + 1]
    slopes = (v1[window:] - v1[:-window]) / (t[window:] - t[:-window])
    return float(slopes.max())


def _min_lambda(traj: TrajectoryRecord) -> float:
    norms = np.linalg.norm(traj.states, axis=2)
    return float(np.min(so3._sinc_ratio_core(np.minimum(norms, math.pi))))


def _v2_max_increase_per_step(traj: TrajectoryRecord, dt: float) -> float:
    if traj.times.size < 2:
        return 0.0
    steps = np.maximum(np.round(np.diff(traj.times) / dt), 1.0)
    return float((np.diff(traj.v2) / steps).max())


def build_report(traj: TrajectoryRecord, config: SimConfig, bound: float) -> MonitorReport:
    """Aggregate the monitor channels of a finished run."""
    window = max(1, int(round(0.25 / (config.dt * config.record_stride))))
    return MonitorReport(
        consensus_time=traj.first_event_time(EventKind.CONSENSUS_REACHED),
        final_disagreement=float(traj.disagreement[-1]),
        v2_max_increase_per_step=_v2_max_increase_per_step(traj, config.dt),
        invariance_violated=not check_invariance(traj, bound),
        min_lambda_along_trajectory=_min_lambda(traj),
        v1_max_slope_outside_consensus=estimate_v1_slope(traj, window),
        singularity_time=traj.first_event_time(EventKind.SINGULARITY_CROSSED),
    )
