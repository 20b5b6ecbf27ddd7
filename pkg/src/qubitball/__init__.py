"""A manipulable qubit: rotate a ball, carry its spinor along the lift.

The package keeps an SO(3) orientation path and its continuous SU(2)
lift side by side, so global-phase effects that the Bloch sphere hides
(sign flips after one turn, Berry phases, homotopy classes) stay
observable.  Sessions are driven by scripts, gyroscope logs, field
segments, or live WebSocket events, and emit deterministic JSON traces.
"""

from .dynamics import FieldSegment, evolve, evolve_path, magnetic_hamiltonian
from .measurement import (
    FrequencyReport,
    MeasurementRecord,
    RandomStream,
    measure_axis,
    measure_z,
    statistics,
)
from .path_lift import (
    BallState,
    HomotopyClass,
    LoopNotClosed,
    StepTooLarge,
    classify_loop,
    init,
    lift_path,
    rotate,
    step,
)
from .phase_geometry import (
    GeodesicLoop,
    PhaseReport,
    berry_experiment,
    geodesic_increments,
    solid_angle,
    wrap_angle,
)
from .rotor_core import (
    SO3Element,
    SU2Element,
    Spinor,
    apply,
    compose,
    inverse,
    project,
    quaternion_from_so3,
    relative,
    so3_from_axis_angle,
    su2_from_axis_angle,
)
from .session_io import (
    ImuSample,
    ScriptError,
    TraceFrame,
    apply_event,
    frame_from_state,
    frame_to_json,
    parse_imu_log,
    parse_script,
    parse_trace,
    replay_imu,
)
from .spin_state import (
    BlochPoint,
    HopfCoordinates,
    PanelFrame,
    bloch_point,
    color_decode,
    color_encode,
    hopf_coordinates,
    panel_frame,
    spinor_from_euler,
)

__version__ = "0.1.0"

__all__ = [
    "BallState",
    "BlochPoint",
    "FieldSegment",
    "FrequencyReport",
    "GeodesicLoop",
    "HomotopyClass",
    "HopfCoordinates",
    "ImuSample",
    "LoopNotClosed",
    "MeasurementRecord",
    "PanelFrame",
    "PhaseReport",
    "RandomStream",
    "SO3Element",
    "SU2Element",
    "ScriptError",
    "Spinor",
    "StepTooLarge",
    "TraceFrame",
    "apply",
    "apply_event",
    "berry_experiment",
    "bloch_point",
    "classify_loop",
    "color_decode",
    "color_encode",
    "compose",
    "evolve",
    "evolve_path",
    "frame_from_state",
    "frame_to_json",
    "geodesic_increments",
    "hopf_coordinates",
    "init",
    "inverse",
    "lift_path",
    "magnetic_hamiltonian",
    "measure_axis",
    "measure_z",
    "panel_frame",
    "parse_imu_log",
    "parse_script",
    "parse_trace",
    "project",
    "quaternion_from_so3",
    "relative",
    "replay_imu",
    "rotate",
    "so3_from_axis_angle",
    "solid_angle",
    "spinor_from_euler",
    "statistics",
    "step",
    "su2_from_axis_angle",
    "wrap_angle",
]
