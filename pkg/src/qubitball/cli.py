"""Command line front end.

Subcommands:

    run            execute a session script, emit a trace and a summary
    replay         integrate a gyroscope log, emit a trace and a summary
    berry          transport a spinor around a spherical loop, print the report
    measure-stats  repeated measurement frequencies against the Born value
    loop-class     homotopy class of a recorded orientation trace
    serve          WebSocket endpoint speaking the script-event protocol

Exit codes: 0 success, 2 input validation failure, 3 runtime failure
(unreadable files and errors mid-execution).  All randomness flows from
--seed; when absent a fresh seed is drawn, used, and echoed on stderr so
the run stays reproducible.

Traces are JSON lines (`frame_to_json`), one frame per step, written to
--out (default stdout).  The summary is one compact JSON object on
stdout: final spinor, Bloch angles, loop gamma when the orientation
closed, the overlap phase against the session's starting spinor,
measurement records, annotations, and the seed.
"""

import argparse
import cmath
import contextlib
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .measurement import RandomStream, measure_axis, record_payload, record_to_json, statistics
from .path_lift import DEFAULT_CLOSURE_TOL, BallState, classify_loop, init, lift_path
from .phase_geometry import DEFAULT_BERRY_TOLERANCE, berry_experiment, loop_from_json
from .rotor_core import Spinor, SU2Element, project
from .session_io import (
    LogFormatError,
    ScriptError,
    apply_event,
    frame_from_state,
    frame_to_json,
    gamma_so_far,
    parse_imu_log,
    parse_script,
    parse_trace,
    replay_imu,
)
from .spin_state import bloch_point, spinor_from_euler

# below this overlap magnitude the relative phase carries no information
OVERLAP_EPS = 1e-9


@dataclass
class SessionConfig:
    """Resolved options shared by the session-running commands."""

    seed: int
    initial_spinor: Spinor
    imu_mode: str = "body"
    steps_per_degree: float = 1.0
    closure_tol: float = DEFAULT_CLOSURE_TOL


# ---------------------------------------------------------------------------
# option parsing helpers


def _csv_floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"{what} needs {n} comma-separated numbers, got {len(parts)}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"{what}: could not parse {text!r} as numbers") from None
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{what} must be finite")
    return values


def _spinor_option(text: str) -> Spinor:
    """Parse 'a_re,a_im,b_re,b_im' and normalize."""
    re_a, im_a, re_b, im_b = _csv_floats(text, 4, "--initial")
    a = complex(re_a, im_a)
    b = complex(re_b, im_b)
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if norm == 0.0:
        raise ValueError("--initial must not be the zero vector")
    return Spinor(a / norm, b / norm)


def _axis_option(text: str) -> np.ndarray:
    v = np.array(_csv_floats(text, 3, "--axis"), dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("--axis must not be the zero vector")
    return v / n


def _argtype(converter):
    """Wrap a ValueError-raising converter for argparse (usage exit 2)."""

    def convert(text):
        try:
            return converter(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return convert


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return int(value)
    seed = int.from_bytes(os.urandom(4), "big")
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r") as handle:
        return handle.read()


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as handle:
            yield handle


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, separators=(",", ":")))


# ---------------------------------------------------------------------------
# session execution shared by run and replay


def _bloch_payload(spinor: Spinor) -> dict:
    b = bloch_point(spinor)
    return {
        "theta": float(b.theta),
        "phi": float(b.phi),
        "vector": [float(c) for c in b.unit_vector],
    }


def _summary(
    initial: BallState,
    final: BallState,
    records: list,
    annotations: list,
    seed: int | None,
    steps: int,
    closure_tol: float,
) -> dict:
    overlap = initial.spinor.overlap(final.spinor)
    phase = cmath.phase(overlap) if abs(overlap) > OVERLAP_EPS else None
    return {
        "seed": seed,
        "steps": steps,
        "final": {
            "alpha": [final.spinor.alpha.real, final.spinor.alpha.imag],
            "beta": [final.spinor.beta.real, final.spinor.beta.imag],
        },
        "bloch": _bloch_payload(final.spinor),
        "gamma": gamma_so_far(initial, final, closure_tol),
        "overlap_phase": phase,
        "measurements": [record_payload(r) for r in records],
        "annotations": annotations,
    }


def cmd_run(args) -> int:
    seed = _resolve_seed(args.seed)
    events = parse_script(_read_text(args.script), args.steps_per_degree)
    stream = RandomStream(seed)
    initial = init(args.initial)
    state = initial
    records: list = []
    annotations: list = []
    step_index = 0
    with _sink(args.out) as sink:
        sink.write(frame_to_json(frame_from_state(initial, 0, gamma=0.0)) + "\n")
        for event in events:
            result = apply_event(state, event, stream)
            state = result.state
            if result.record is not None:
                records.append(result.record)
            if result.annotation is not None:
                annotations.append(result.annotation)
            for s in result.states:
                step_index += 1
                attach = result.record if s is result.states[-1] else None
                frame = frame_from_state(
                    s,
                    step_index,
                    gamma=gamma_so_far(initial, s, args.closure_tol),
                    measurement=attach,
                )
                sink.write(frame_to_json(frame) + "\n")
    _print_json(
        _summary(initial, state, records, annotations, seed, step_index, args.closure_tol)
    )
    return 0


def cmd_replay(args) -> int:
    samples = parse_imu_log(_read_text(args.log))
    states = replay_imu(samples, mode=args.imu_mode, initial=init(args.initial))
    with _sink(args.out) as sink:
        for i, s in enumerate(states):
            frame = frame_from_state(
                s, i, gamma=gamma_so_far(states[0], s, args.closure_tol)
            )
            sink.write(frame_to_json(frame) + "\n")
    _print_json(
        _summary(states[0], states[-1], [], [], None, len(states) - 1, args.closure_tol)
    )
    return 0


# ---------------------------------------------------------------------------
# reports


def _eigenstate_along(v: np.ndarray) -> Spinor:
    theta = math.atan2(math.hypot(v[0], v[1]), v[2])
    phi = math.atan2(v[1], v[0])
    return spinor_from_euler(theta, phi, 0.0)


def cmd_berry(args) -> int:
    loop = loop_from_json(json.loads(_read_text(args.loop)))
    v0 = loop.vertices[0]
    initial = _eigenstate_along(v0 if args.spin == "up" else -v0)
    report = berry_experiment(loop, initial, tolerance=args.tolerance)
    _print_json(
        {
            "spin": args.spin,
            "overlap_phase": report.overlap_phase,
            "solid_angle": report.solid_angle,
            "berry_prediction": report.berry_prediction,
            "mismatch": report.mismatch,
            "tolerance": report.tolerance,
            "agrees": report.agrees,
            "gamma": report.gamma,
        }
    )
    return 0


def cmd_measure_stats(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be positive")
    seed = _resolve_seed(args.seed)
    state = init(args.initial)
    report = statistics(state, args.axis, args.trials, seed)
    if args.records is not None:
        # same stream, so the records reproduce exactly the report's draws
        stream = RandomStream(seed)
        with open(args.records, "w") as handle:
            for _ in range(args.trials):
                record, _after = measure_axis(state, args.axis, stream)
                handle.write(record_to_json(record) + "\n")
    _print_json(
        {
            "axis": [float(c) for c in report.axis],
            "trials": report.trials,
            "expected_p": report.expected_p,
            "observed_p": report.observed_p,
            "up_count": report.up_count,
            "standard_error": report.standard_error,
            "bound": report.bound,
            "within_bound": report.within_bound,
            "seed": report.seed,
        }
    )
    return 0


def cmd_loop_class(args) -> int:
    frames = parse_trace(_read_text(args.trace))
    if len(frames) < 2:
        raise ValueError("trace needs at least two frames to classify")
    orientations = [project(SU2Element(*f.orientation)) for f in frames]
    states = lift_path(orientations)
    cls = classify_loop(states, closure_tol=args.closure_tol)
    _print_json(
        {
            "is_trivial": cls.is_trivial,
            "endpoint_sign": cls.endpoint_sign,
            "gamma": cls.gamma,
        }
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = SessionConfig(
        seed=_resolve_seed(args.seed),
        initial_spinor=args.initial,
        steps_per_degree=args.steps_per_degree,
        closure_tol=args.closure_tol,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def _add_initial(parser) -> None:
    parser.add_argument(
        "--initial",
        type=_argtype(_spinor_option),
        default=Spinor(1.0, 0.0),
        metavar="A_RE,A_IM,B_RE,B_IM",
        help="starting spinor components, normalized internally (default spin up)",
    )


def _add_seed(parser) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="measurement RNG seed; generated and echoed on stderr when absent",
    )


def _add_closure_tol(parser) -> None:
    parser.add_argument(
        "--closure-tol",
        type=float,
        default=DEFAULT_CLOSURE_TOL,
        help="orientation closure tolerance for gamma readout",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitball",
        description="Rotate a spinor-carrying ball, read phases, measure spins.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a session script")
    run.add_argument("script", help="script JSON path, or - for stdin")
    _add_seed(run)
    _add_initial(run)
    run.add_argument("--out", default=None, help="trace destination (default stdout)")
    run.add_argument(
        "--steps-per-degree",
        type=float,
        default=1.0,
        help="default step density for events that omit steps",
    )
    _add_closure_tol(run)
    run.set_defaults(handler=cmd_run)

    replay = sub.add_parser("replay", help="integrate a gyroscope log")
    replay.add_argument("log", help="IMU JSON-lines path, or - for stdin")
    _add_initial(replay)
    replay.add_argument(
        "--imu-mode", choices=("body", "world"), default="body",
        help="frame the angular rates are expressed in",
    )
    replay.add_argument("--out", default=None, help="trace destination (default stdout)")
    _add_closure_tol(replay)
    replay.set_defaults(handler=cmd_replay)

    berry = sub.add_parser("berry", help="transport around a loop, compare phases")
    berry.add_argument("loop", help="loop JSON path (vertices, samples_per_edge)")
    berry.add_argument(
        "--spin", choices=("up", "down"), default="up",
        help="start aligned or anti-aligned with the first vertex",
    )
    berry.add_argument(
        "--tolerance", type=float, default=DEFAULT_BERRY_TOLERANCE,
        help="phase agreement tolerance",
    )
    berry.set_defaults(handler=cmd_berry)

    stats = sub.add_parser(
        "measure-stats", help="repeated measurements against the Born value"
    )
    _add_initial(stats)
    _add_seed(stats)
    stats.add_argument(
        "--axis", type=_argtype(_axis_option), metavar="X,Y,Z",
        default=np.array([0.0, 0.0, 1.0]), help="measurement axis (default z)",
    )
    stats.add_argument("--trials", type=int, default=100000)
    stats.add_argument(
        "--records", default=None, metavar="PATH",
        help="also write one measurement record JSON line per trial",
    )
    stats.set_defaults(handler=cmd_measure_stats)

    loop_class = sub.add_parser(
        "loop-class", help="homotopy class of a recorded orientation trace"
    )
    loop_class.add_argument("trace", help="trace JSON-lines path, or - for stdin")
    _add_closure_tol(loop_class)
    loop_class.set_defaults(handler=cmd_loop_class)

    serve = sub.add_parser("serve", help="WebSocket session endpoint")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    _add_seed(serve)
    _add_initial(serve)
    serve.add_argument("--steps-per-degree", type=float, default=1.0)
    _add_closure_tol(serve)
    serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ScriptError, LogFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
