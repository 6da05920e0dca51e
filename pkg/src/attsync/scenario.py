"""Scenario files: JSON descriptions of one simulation run.

A scenario names the topology, the initial state (explicit values or a
seeded draw with a prescribed total squared norm), the integration
parameters, the sign mode, the invariance bound to monitor, and optional
output file names.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .controller import SignMode
from .graphs import Graph, from_edges
from .simulator import DEFAULT_CONSENSUS_TOLERANCE, SimConfig

__all__ = [
    "ScenarioError",
    "Scenario",
    "load_scenario",
    "sample_initial_state",
]

PI_SQUARED = math.pi * math.pi


class ScenarioError(ValueError):
    """A scenario file is malformed; the message names the offending field."""


@dataclass(frozen=True, eq=False)
class Scenario:
    """Parsed scenario: a ready SimConfig plus reporting parameters."""

    name: str
    config: SimConfig
    invariance_bound: float
    outputs: dict[str, str]
    seed: int | None = None
    sum_sq_norm: float | None = None

    @property
    def seeded(self) -> bool:
        return self.seed is not None

    def with_seed(self, seed: int) -> "Scenario":
        """Same scenario with the initial state redrawn from ``seed``."""
        if not self.seeded:
            raise ScenarioError("initial_state: explicit states cannot be reseeded")
        initial = sample_initial_state(self.config.graph.n, seed, self.sum_sq_norm)
        config = SimConfig(
            graph=self.config.graph,
            initial_state=initial,
            t_max=self.config.t_max,
            dt=self.config.dt,
            mode=self.config.mode,
            consensus_tolerance=self.config.consensus_tolerance,
            record_stride=self.config.record_stride,
        )
        return Scenario(self.name, config, self.invariance_bound, self.outputs,
                        seed, self.sum_sq_norm)


def sample_initial_state(n: int, seed: int, sum_sq_norm: float) -> np.ndarray:
    """Seeded initial state with the requested total squared norm.

    Each agent is drawn uniformly from the ball of radius pi/2, then the
    stacked vector is rescaled so the sum of squared norms equals
    ``sum_sq_norm`` exactly.  For targets below pi^2 the per-agent norms
    stay below pi automatically; above that the draw is validated.
    """
    if n < 1:
        raise ScenarioError("graph.nodes: need at least one agent")
    if not 0.0 < sum_sq_norm < 4.0 * PI_SQUARED:
        raise ScenarioError(
            f"initial_state.sum_sq_norm: must be in (0, 4*pi^2), got {sum_sq_norm}"
        )
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(n, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = 0.5 * math.pi * rng.uniform(size=n) ** (1.0 / 3.0)
    states = directions * radii[:, None]
    states *= math.sqrt(sum_sq_norm / float((states * states).sum()))
    norms = np.linalg.norm(states, axis=1)
    if np.any(norms > math.pi):
        raise ScenarioError(
            f"initial_state.seed: seed {seed} puts an agent outside the pi ball; "
            "choose another seed"
        )
    return states


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise ScenarioError(f"{where}{key}: missing")
    value = data[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ScenarioError(f"{where}{key}: expected {kind.__name__}, got {value!r}")
    return value


def _parse_graph(data) -> Graph:
    if not isinstance(data, dict):
        raise ScenarioError("graph: expected an object with nodes and edges")
    nodes = _require(data, "nodes", int, "graph.")
    edges = _require(data, "edges", list, "graph.")
    try:
        return from_edges(nodes, edges)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"graph.edges: {exc}") from exc


def _parse_mode(data: dict) -> SignMode:
    kind = _require(data, "mode", str, "")
    try:
        if kind == "exact":
            return SignMode.exact()
        epsilon = _require(data, "epsilon", float, "")
        return SignMode(kind, epsilon)
    except ValueError as exc:
        raise ScenarioError(f"mode: {exc}") from exc


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path.name}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ScenarioError(f"{path.name}: top level must be an object")

    graph = _parse_graph(data.get("graph"))
    mode = _parse_mode(data)

    initial = data.get("initial_state")
    if not isinstance(initial, dict):
        raise ScenarioError("initial_state: expected an object")
    seed = None
    sum_sq_norm = None
    if "values" in initial:
        values = np.asarray(initial["values"], dtype=float)
        if values.shape != (graph.n, 3):
            raise ScenarioError(
                f"initial_state.values: expected shape ({graph.n}, 3), "
                f"got {values.shape}"
            )
        if np.any(np.linalg.norm(values, axis=1) > math.pi):
            raise ScenarioError("initial_state.values: an agent norm exceeds pi")
        states = values
    elif "seed" in initial:
        seed = _require(initial, "seed", int, "initial_state.")
        sum_sq_norm = _require(initial, "sum_sq_norm", float, "initial_state.")
        states = sample_initial_state(graph.n, seed, sum_sq_norm)
    else:
        raise ScenarioError("initial_state: needs either values or seed + sum_sq_norm")

    dt = _require(data, "dt", float, "")
    t_max = _require(data, "t_max", float, "")
    tolerance = float(data.get("consensus_tolerance", DEFAULT_CONSENSUS_TOLERANCE))
    stride = data.get("record_stride", 1)
    if not isinstance(stride, int) or isinstance(stride, bool):
        raise ScenarioError(f"record_stride: expected a positive integer, got {stride!r}")
    bound = float(data.get("invariance_bound", PI_SQUARED))
    if bound <= 0.0:
        raise ScenarioError(f"invariance_bound: must be positive, got {bound}")

    outputs = data.get("outputs", {})
    if not isinstance(outputs, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in outputs.items()
    ):
        raise ScenarioError("outputs: expected an object of name -> file name")

    try:
        config = SimConfig(
            graph=graph,
            initial_state=states,
            t_max=t_max,
            dt=dt,
            mode=mode,
            consensus_tolerance=tolerance,
            record_stride=stride,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc

    return Scenario(
        name=path.stem,
        config=config,
        invariance_bound=bound,
        outputs=dict(outputs),
        seed=seed,
        sum_sq_norm=sum_sq_norm,
    )
