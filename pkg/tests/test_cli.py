"""End-to-end checks of the command line front end.

Most cases drive the argparse entry point in-process and read stdout
through capsys; the byte-determinism contract is additionally pinned by
spawning `python3 -m qubitball.cli` twice and comparing raw files.
"""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qubitball.cli import main
from qubitball.measurement import RandomStream

FULL_TURN = [
    {"type": "rotate", "axis": [0, 0, 1], "angle": 2.0 * math.pi, "steps": 360}
]
OCTANT = [
    {"type": "geodesic", "from": [0, 0, 1], "to": [1, 0, 0]},
    {"type": "geodesic", "from": [1, 0, 0], "to": [0, 1, 0]},
    {"type": "geodesic", "from": [0, 1, 0], "to": [0, 0, 1]},
]
# tilt to the equator, measure z, leave a note
MEASURE_SESSION = [
    {"type": "rotate", "axis": [0, 1, 0], "angle": math.pi / 2.0, "steps": 45},
    {"type": "measure", "axis": [0, 0, 1]},
    {"type": "annotate", "text": "done"},
]


def write_json(tmp_path, payload, name):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def run_cli(capsys, *args):
    code = main([str(a) for a in args])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def summary_of(out):
    return json.loads(out.strip().splitlines()[-1])


# ---------------------------------------------------------------------------
# run


def test_run_empty_script(tmp_path, capsys):
    script = write_json(tmp_path, [], "empty.json")
    trace = tmp_path / "trace.jsonl"
    code, out, err = run_cli(capsys, "run", script, "--seed", 1, "--out", trace)
    assert code == 0
    summary = summary_of(out)
    assert summary["final"]["alpha"] == [1.0, 0.0]
    assert summary["final"]["beta"] == [0.0, 0.0]
    assert summary["gamma"] == 0.0
    assert summary["overlap_phase"] == 0.0
    assert summary["steps"] == 0
    assert summary["seed"] == 1
    lines = trace.read_text().splitlines()
    assert len(lines) == 1
    frame = json.loads(lines[0])
    assert frame["step"] == 0
    assert frame["pentagon"] == [255, 0, 0]
    assert frame["hexagon"] == [0, 0, 0]


def test_run_full_turn_flips_sign_and_reports_gamma(tmp_path, capsys):
    script = write_json(tmp_path, FULL_TURN, "turn.json")
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run_cli(capsys, "run", script, "--seed", 1, "--out", trace)
    assert code == 0
    summary = summary_of(out)
    assert abs(summary["final"]["alpha"][0] + 1.0) < 1e-8
    assert abs(summary["final"]["alpha"][1]) < 1e-8
    assert summary["gamma"] == math.pi
    assert abs(summary["overlap_phase"] - math.pi) < 1e-8
    lines = trace.read_text().splitlines()
    assert len(lines) == 361
    assert json.loads(lines[-1])["gamma"] == math.pi
    assert json.loads(lines[180])["gamma"] is None


def test_run_octant_loop_overlap_phase(tmp_path, capsys):
    script = write_json(tmp_path, OCTANT, "octant.json")
    code, out, _ = run_cli(capsys, "run", script, "--seed", 1, "--out", "/dev/null")
    assert code == 0
    summary = summary_of(out)
    assert abs(summary["overlap_phase"] + math.pi / 4.0) < 1e-6
    # the frame comes back rotated by the solid angle, so no closed loop
    assert summary["gamma"] is None
    assert summary["steps"] == 270


def test_run_measure_session(tmp_path, capsys):
    script = write_json(tmp_path, MEASURE_SESSION, "measure.json")
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run_cli(capsys, "run", script, "--seed", 17, "--out", trace)
    assert code == 0
    summary = summary_of(out)
    assert summary["annotations"] == ["done"]
    [record] = summary["measurements"]
    assert abs(record["p_up"] - 0.5) < 1e-12
    assert record["draw"] == RandomStream(17).uniform()
    assert record["seed_position"] == 0
    lines = trace.read_text().splitlines()
    # initial + 45 rotation steps + 1 measurement step; annotate adds none
    assert len(lines) == 47
    assert json.loads(lines[-1])["measurement"] == record
    assert all("measurement" not in json.loads(l) for l in lines[:-1])


def test_run_is_deterministic_per_seed(tmp_path, capsys):
    script = write_json(tmp_path, MEASURE_SESSION, "measure.json")
    t1, t2, t3 = (tmp_path / n for n in ("a.jsonl", "b.jsonl", "c.jsonl"))
    _, out1, _ = run_cli(capsys, "run", script, "--seed", 17, "--out", t1)
    _, out2, _ = run_cli(capsys, "run", script, "--seed", 17, "--out", t2)
    _, out3, _ = run_cli(capsys, "run", script, "--seed", 18, "--out", t3)
    assert out1 == out2
    assert t1.read_bytes() == t2.read_bytes()
    draw = lambda out: summary_of(out)["measurements"][0]["draw"]
    assert draw(out1) != draw(out3)


def test_run_rejects_bad_script(tmp_path, capsys):
    script = write_json(
        tmp_path, [{"type": "rotate", "axis": [0, 0, 0], "angle": 1.0}], "bad.json"
    )
    code, out, err = run_cli(capsys, "run", script, "--seed", 1)
    assert code == 2
    assert out == ""
    assert "events[0]" in err


def test_run_missing_file_is_runtime_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "run", tmp_path / "absent.json", "--seed", 1)
    assert code == 3
    assert "absent.json" in err


def test_bad_initial_is_usage_error(tmp_path, capsys):
    script = write_json(tmp_path, [], "empty.json")
    with pytest.raises(SystemExit) as exc:
        main(["run", str(script), "--initial", "1,0"])
    assert exc.value.code == 2


def test_initial_is_normalized(tmp_path, capsys):
    script = write_json(tmp_path, [], "empty.json")
    code, out, _ = run_cli(
        capsys, "run", script, "--seed", 1, "--initial", "1,0,1,0", "--out", "/dev/null"
    )
    assert code == 0
    summary = summary_of(out)
    root_half = 1.0 / math.sqrt(2.0)
    assert summary["final"]["alpha"] == [root_half, 0.0]
    assert summary["final"]["beta"] == [root_half, 0.0]


def test_missing_seed_is_generated_and_echoed(tmp_path, capsys):
    script = write_json(tmp_path, [], "empty.json")
    code, out, err = run_cli(capsys, "run", script, "--out", "/dev/null")
    assert code == 0
    assert err.startswith("seed: ")
    seed = int(err.split()[1])
    assert summary_of(out)["seed"] == seed


# ---------------------------------------------------------------------------
# replay


def constant_z_log(tmp_path, rate, seconds=2.0, hz=100):
    lines = [
        json.dumps({"t": i / hz, "gyro": [0.0, 0.0, rate]})
        for i in range(int(seconds * hz) + 1)
    ]
    path = tmp_path / "imu.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_replay_full_turn_log(tmp_path, capsys):
    log = constant_z_log(tmp_path, math.pi)
    for mode in ("body", "world"):
        code, out, _ = run_cli(
            capsys, "replay", log, "--imu-mode", mode, "--out", "/dev/null"
        )
        assert code == 0
        summary = summary_of(out)
        assert abs(summary["final"]["alpha"][0] + 1.0) < 1e-8
        assert summary["gamma"] == math.pi
        assert summary["steps"] == 200
        assert summary["seed"] is None


def test_replay_zero_log(tmp_path, capsys):
    log = constant_z_log(tmp_path, 0.0)
    code, out, _ = run_cli(capsys, "replay", log, "--out", "/dev/null")
    assert code == 0
    summary = summary_of(out)
    assert summary["final"]["alpha"] == [1.0, 0.0]
    assert summary["gamma"] == 0.0
    assert summary["overlap_phase"] == 0.0


def test_replay_rejects_bad_log(tmp_path, capsys):
    log = tmp_path / "imu.jsonl"
    log.write_text('{"t": 0.0}\n')
    code, _, err = run_cli(capsys, "replay", log)
    assert code == 2
    assert "line 1" in err


# ---------------------------------------------------------------------------
# berry


def octant_loop(tmp_path):
    return write_json(
        tmp_path,
        {"vertices": [[0, 0, 1], [1, 0, 0], [0, 1, 0]], "samples_per_edge": 90},
        "loop.json",
    )


def test_berry_octant_both_spins(tmp_path, capsys):
    loop = octant_loop(tmp_path)
    for spin, sign in (("up", -1.0), ("down", +1.0)):
        code, out, _ = run_cli(capsys, "berry", loop, "--spin", spin)
        assert code == 0
        report = json.loads(out)
        assert abs(report["overlap_phase"] - sign * math.pi / 4.0) < 1e-9
        assert abs(report["solid_angle"] - math.pi / 2.0) < 1e-9
        assert report["berry_prediction"] == sign * math.pi / 4.0
        assert report["agrees"] is True


def test_berry_rejects_bad_loop(tmp_path, capsys):
    loop = write_json(tmp_path, {"vertices": [[0, 0, 1]]}, "short.json")
    code, _, err = run_cli(capsys, "berry", loop)
    assert code == 2
    assert "vertices" in err


# ---------------------------------------------------------------------------
# measure-stats


def test_measure_stats_eigenstate(capsys):
    code, out, _ = run_cli(capsys, "measure-stats", "--trials", 500, "--seed", 3)
    assert code == 0
    report = json.loads(out)
    assert report["expected_p"] == 1.0
    assert report["observed_p"] == 1.0
    assert report["up_count"] == 500
    assert report["within_bound"] is True


def test_measure_stats_balanced_state(capsys):
    code, out, _ = run_cli(
        capsys,
        "measure-stats", "--initial", "1,0,1,0", "--trials", 20000, "--seed", 11,
    )
    assert code == 0
    report = json.loads(out)
    assert report["expected_p"] == pytest.approx(0.5, abs=1e-15)
    assert abs(report["observed_p"] - 0.5) <= report["bound"]
    assert report["within_bound"] is True
    assert report["standard_error"] == pytest.approx(
        math.sqrt(0.25 / 20000), rel=1e-12
    )


def test_measure_stats_record_lines_match_report(tmp_path, capsys):
    records_path = tmp_path / "records.jsonl"
    code, out, _ = run_cli(
        capsys,
        "measure-stats", "--initial", "0.6,0,0,0.8", "--trials", 40, "--seed", 9,
        "--records", records_path,
    )
    assert code == 0
    report = json.loads(out)
    records = [json.loads(l) for l in records_path.read_text().splitlines()]
    assert len(records) == 40
    assert sum(r["outcome"] == 1 for r in records) == report["up_count"]
    draws = RandomStream(9).uniforms(40)
    assert [r["draw"] for r in records] == list(draws)
    assert [r["seed_position"] for r in records] == list(range(40))


def test_measure_stats_bad_axis_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["measure-stats", "--axis", "0,0,0"])
    assert exc.value.code == 2


def test_measure_stats_rejects_nonpositive_trials(capsys):
    code, _, err = run_cli(capsys, "measure-stats", "--trials", 0, "--seed", 1)
    assert code == 2
    assert "trials" in err


# ---------------------------------------------------------------------------
# loop-class


def test_loop_class_single_turn(tmp_path, capsys):
    script = write_json(tmp_path, FULL_TURN, "turn.json")
    trace = tmp_path / "trace.jsonl"
    run_cli(capsys, "run", script, "--seed", 1, "--out", trace)
    code, out, _ = run_cli(capsys, "loop-class", trace)
    assert code == 0
    cls = json.loads(out)
    assert cls == {"is_trivial": False, "endpoint_sign": -1, "gamma": math.pi}


def test_loop_class_retraced_turn(tmp_path, capsys):
    retraced = FULL_TURN + [
        {"type": "rotate", "axis": [0, 0, 1], "angle": -2.0 * math.pi, "steps": 360}
    ]
    script = write_json(tmp_path, retraced, "retraced.json")
    trace = tmp_path / "trace.jsonl"
    run_cli(capsys, "run", script, "--seed", 1, "--out", trace)
    code, out, _ = run_cli(capsys, "loop-class", trace)
    assert code == 0
    cls = json.loads(out)
    assert cls == {"is_trivial": True, "endpoint_sign": 1, "gamma": 0.0}


def test_loop_class_open_path_rejected(tmp_path, capsys):
    quarter = [{"type": "rotate", "axis": [0, 0, 1], "angle": math.pi / 2.0}]
    script = write_json(tmp_path, quarter, "quarter.json")
    trace = tmp_path / "trace.jsonl"
    run_cli(capsys, "run", script, "--seed", 1, "--out", trace)
    code, _, err = run_cli(capsys, "loop-class", trace)
    assert code == 2
    assert "endpoints differ" in err


# ---------------------------------------------------------------------------
# module entry point, raw bytes


def test_module_entry_byte_identical_runs(tmp_path):
    script = write_json(tmp_path, MEASURE_SESSION, "measure.json")

    def spawn(seed, out):
        return subprocess.run(
            [
                sys.executable, "-m", "qubitball.cli",
                "run", str(script), "--seed", str(seed), "--out", str(out),
            ],
            capture_output=True,
            check=True,
        )

    first = spawn(7, tmp_path / "a.jsonl")
    second = spawn(7, tmp_path / "b.jsonl")
    other = spawn(8, tmp_path / "c.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert first.stdout == second.stdout
    assert first.stdout != other.stdout
