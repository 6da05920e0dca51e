import json
import math

import numpy as np
import pytest

from attsync import SimConfig, integrate, lyapunov_v1, lyapunov_v2, disagreement
from attsync.scenario import ScenarioError, load_scenario, sample_initial_state
from attsync.tables import (
    TableFormatError,
    TrajectoryTable,
    read_trajectory_csv,
    table_header,
    write_trajectory_csv,
)
from helpers import fig_topology

PI_SQ = math.pi**2


def scenario_dict(**overrides):
    data = {
        "graph": {"nodes": 5, "edges": [[1, 2], [2, 3], [2, 4], [3, 4], [4, 5]]},
        "initial_state": {"seed": 3, "sum_sq_norm": 0.5 * PI_SQ},
        "dt": 0.001,
        "t_max": 1.0,
        "mode": "deadband",
        "epsilon": 0.001,
        "consensus_tolerance": 0.01,
        "record_stride": 1,
        "invariance_bound": PI_SQ,
    }
    data.update(overrides)
    return data


def write_scenario(tmp_path, name="case.json", **overrides):
    path = tmp_path / name
    path.write_text(json.dumps(scenario_dict(**overrides)))
    return path


class TestSampleInitialState:
    def test_total_squared_norm_is_exact(self):
        xs = sample_initial_state(5, 11, 0.9 * PI_SQ)
        assert float((xs * xs).sum()) == pytest.approx(0.9 * PI_SQ, rel=1e-14)

    def test_agents_stay_inside_the_chart(self):
        for seed in range(30):
            xs = sample_initial_state(5, seed, 0.9 * PI_SQ)
            assert np.linalg.norm(xs, axis=1).max() < math.pi

    def test_deterministic(self):
        a = sample_initial_state(4, 5, 2.0)
        b = sample_initial_state(4, 5, 2.0)
        assert np.array_equal(a, b)

    def test_rejects_out_of_range_target(self):
        with pytest.raises(ScenarioError):
            sample_initial_state(5, 0, 4.1 * PI_SQ)


class TestLoadScenario:
    def test_seeded_form(self, tmp_path):
        scn = load_scenario(write_scenario(tmp_path))
        assert scn.config.graph.n == 5
        assert scn.seeded and scn.seed == 3
        assert scn.invariance_bound == PI_SQ
        assert scn.config.mode.kind == "deadband"

    def test_explicit_values_form(self, tmp_path):
        values = [[0.1, 0.0, 0.0]] * 5
        scn = load_scenario(
            write_scenario(tmp_path, initial_state={"values": values})
        )
        assert not scn.seeded
        assert np.allclose(scn.config.initial_state, values)

    def test_zero_dt_names_field(self, tmp_path):
        with pytest.raises(ScenarioError, match="dt"):
            load_scenario(write_scenario(tmp_path, dt=0.0))

    def test_missing_t_max_names_field(self, tmp_path):
        data = scenario_dict()
        del data["t_max"]
        path = tmp_path / "case.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ScenarioError, match="t_max"):
            load_scenario(path)

    def test_bad_mode_named(self, tmp_path):
        with pytest.raises(ScenarioError, match="mode"):
            load_scenario(write_scenario(tmp_path, mode="fuzzy"))

    def test_bad_edges_named(self, tmp_path):
        with pytest.raises(ScenarioError, match="graph.edges"):
            load_scenario(
                write_scenario(tmp_path, graph={"nodes": 3, "edges": [[1, 1]]})
            )

    def test_explicit_state_norm_checked(self, tmp_path):
        values = [[3.2, 0.0, 0.0]] + [[0.0, 0.0, 0.0]] * 4
        with pytest.raises(ScenarioError, match="initial_state"):
            load_scenario(write_scenario(tmp_path, initial_state={"values": values}))

    def test_not_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_with_seed_redraws(self, tmp_path):
        scn = load_scenario(write_scenario(tmp_path))
        other = scn.with_seed(99)
        assert not np.array_equal(other.config.initial_state, scn.config.initial_state)
        assert float((other.config.initial_state ** 2).sum()) == pytest.approx(
            0.5 * PI_SQ, rel=1e-14
        )


class TestTrajectoryTable:
    def test_header_layout(self):
        assert table_header(2) == [
            "t", "x_1_1", "x_1_2", "x_1_3", "x_2_1", "x_2_2", "x_2_3",
            "v1", "v2", "max_norm", "disagreement",
        ]

    def test_roundtrip_is_exact(self, tmp_path):
        cfg = SimConfig(
            fig_topology(),
            sample_initial_state(5, 3, 0.5 * PI_SQ),
            t_max=0.5,
            record_stride=5,
        )
        rec = integrate(cfg)
        table = TrajectoryTable.from_record(rec)
        path = write_trajectory_csv(tmp_path / "traj.csv", table)
        loaded = read_trajectory_csv(path)
        assert np.array_equal(loaded.times, table.times)
        assert np.array_equal(loaded.states, table.states)
        assert np.array_equal(loaded.v1, table.v1)
        assert np.array_equal(loaded.v2, table.v2)
        assert np.array_equal(loaded.max_norm, table.max_norm)
        assert np.array_equal(loaded.disagreement, table.disagreement)

    def test_monitor_channels_recomputable_from_states(self, tmp_path):
        g = fig_topology()
        cfg = SimConfig(
            g, sample_initial_state(5, 4, 0.6 * PI_SQ), t_max=0.5
        )
        rec = integrate(cfg)
        path = write_trajectory_csv(
            tmp_path / "traj.csv", TrajectoryTable.from_record(rec)
        )
        loaded = read_trajectory_csv(path)
        for k in range(0, loaded.times.size, 97):
            xs = loaded.states[k]
            assert lyapunov_v1(xs, g) == pytest.approx(loaded.v1[k], abs=1e-12)
            assert lyapunov_v2(xs) == pytest.approx(loaded.v2[k], abs=1e-12)
            assert disagreement(xs) == pytest.approx(loaded.disagreement[k], abs=1e-12)

    def test_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(TableFormatError):
            read_trajectory_csv(path)

    def test_rejects_empty_table(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(",".join(table_header(2)) + "\n")
        with pytest.raises(TableFormatError):
            read_trajectory_csv(path)
