"""Finite-time attitude synchronization of networked rigid bodies.

Library and CLI for simulating a distributed signum consensus controller
on axis-angle attitude coordinates, with Lyapunov monitors validating the
invariance, finite-time-convergence, and chart-singularity behavior.
"""

from .so3 import (
    AxisAngle,
    DomainError,
    Rotation,
    exp_so3,
    geodesic_distance,
    hat,
    log_so3,
    sinc_ratio,
    vee,
)
from .kinematics import (
    TransitionMatrix,
    lambda_min,
    state_derivative,
    symmetric_part,
    transition_matrix,
)
from .graphs import Graph, degree, from_edges, incidence_matrix, is_connected, neighbors
from .controller import (
    NetworkState,
    SignMode,
    SingularityError,
    closed_loop_rhs,
    control_input,
    control_input_stacked,
    sign_value,
)
from .simulator import (
    Event,
    EventKind,
    MonitorReport,
    SimConfig,
    TrajectoryRecord,
    build_report,
    check_invariance,
    disagreement,
    estimate_v1_slope,
    integrate,
    lyapunov_v1,
    lyapunov_v2,
    max_state_norm,
)

__version__ = "0.1.0"
