import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from relphase.cli import EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, run
from relphase.scenario import (DEFAULTS, ScenarioError, emit, execute, parse_complex,
                               parse_scenario)

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

DISCRETE = """
kind = "discrete-phase"
[state]
model = "two-qubit"
lambda = 1.0471975511965976
[sequence]
generator = "qubit-triangle"
phi = 1.5707963267948966
"""

SAMPLED = DISCRETE.replace("discrete-phase", "protocol") + """
[options]
mode = "sampled"
shots = 5000
fringe_points = 8
seed = 11
"""


def test_defaults_filled_in():
    sc = parse_scenario(DISCRETE)
    assert sc.kind == "discrete-phase"
    assert sc.options == DEFAULTS
    assert sc.state["model"] == "two-qubit"


@pytest.mark.parametrize("text,expected", [
    (1, 1 + 0j), (-0.5, -0.5 + 0j), ("0.5+0.5i", 0.5 + 0.5j), ("i", 1j), ("-2j", -2j),
    ("1-i", 1 - 1j), (" 3 ", 3 + 0j),
])
def test_complex_literals(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("bad", ["abc", True, None, "1+2k"])
def test_bad_complex_literals(bad):
    with pytest.raises(ValueError):
        parse_complex(bad)


def test_lambda_out_of_range():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(DISCRETE.replace("1.0471975511965976", "4.0"))
    assert [loc for loc, _ in info.value.errors] == ["state.lambda"]


def test_all_errors_collected():
    text = DISCRETE.replace("1.0471975511965976", "4.0").replace("qubit-triangle", "spiral")
    text += '[options]\nshots = -3\nmode = "fuzzy"\n'
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    locs = {loc for loc, _ in info.value.errors}
    assert {"state.lambda", "sequence.generator", "options.shots", "options.mode"} <= locs


def test_syntax_error_location():
    with pytest.raises(ScenarioError) as info:
        parse_scenario('kind = "discrete-phase"\n[state\nmodel = 1\n')
    assert info.value.errors[0][0].startswith("line 2, column")


def test_cross_field_rules():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(SAMPLED.replace("seed = 11\n", ""))
    assert info.value.errors[0][0] == "options.seed"
    assert parse_scenario(SAMPLED.replace("seed = 11\n", ""), seed=5).options["seed"] == 5
    with pytest.raises(ScenarioError):
        parse_scenario(DISCRETE.replace("discrete-phase", "uhlmann"))


def test_execute_discrete():
    report = execute(parse_scenario(DISCRETE))
    val = report.results["relative_phase"]["value"]
    assert val == pytest.approx(np.pi / 4 - np.arctan(0.5), abs=1e-14)
    assert report.results["sequence_phase"]["value"] == pytest.approx(-np.pi / 4, abs=1e-15)
    assert report.results["relative_phase"]["branch"] == "(-pi,pi]"
    assert report.diagnostics["route_discrepancy"] < 1e-14


def test_json_round_trip_is_bit_exact():
    report = execute(parse_scenario(SAMPLED))
    payload = emit(report)
    back = json.loads(payload)
    assert back["results"]["gamma"]["value"] == report.results["gamma"]["value"]
    assert back["steps"][1]["fringe"] == report.steps[1]["fringe"]
    assert back["seed"] == 11


def test_csv_fringe_rows():
    report = execute(parse_scenario(SAMPLED))
    lines = emit(report, "csv-fringe").decode().splitlines()
    assert lines[0] == "step,f,intensity"
    assert len(lines) == 1 + 3 * 8
    assert emit(execute(parse_scenario(DISCRETE)), "csv-fringe").decode() == "step,f,intensity\n"


def test_sampled_output_is_byte_identical():
    sc = parse_scenario(SAMPLED)
    assert emit(execute(sc)) == emit(execute(sc))


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.toml")), ids=lambda p: p.stem)
def test_shipped_scenarios_run(path):
    verb = {"discrete": "phase", "continuous": "phase", "protocol": "protocol",
            "uhlmann": "uhlmann", "oracle": "oracle"}
    name = next(v for k, v in verb.items() if k in path.stem)
    out = io.BytesIO()
    assert run([name, "--scenario", str(path)], stdout=out, stderr=io.StringIO()) == EXIT_OK
    assert json.loads(out.getvalue())["version"]


def _cli(tmp_path, text, verb="phase", *extra):
    path = tmp_path / "s.toml"
    path.write_text(text)
    out, err = io.BytesIO(), io.StringIO()
    code = run([verb, "--scenario", str(path), *extra], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_cli_exit_codes(tmp_path):
    assert _cli(tmp_path, DISCRETE)[0] == EXIT_OK
    code, _, err = _cli(tmp_path, DISCRETE.replace("1.0471975511965976", "4.0"))
    assert code == EXIT_INVALID and "state.lambda" in err
    code, _, err = _cli(tmp_path, DISCRETE.replace("1.0471975511965976", "3.141592653589793"))
    assert code == EXIT_NUMERIC and "UndefinedPhase" in err
    assert _cli(tmp_path, DISCRETE, "uhlmann")[0] == EXIT_INVALID
    assert run(["phase", "--scenario", str(tmp_path / "missing.toml")],
               stdout=io.BytesIO(), stderr=io.StringIO()) == EXIT_INVALID


def test_cli_seed_override_and_out_file(tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = _cli(tmp_path, SAMPLED, "protocol", "--seed", "99", "--out", str(out))
    assert code == EXIT_OK and stdout == b""
    assert json.loads(out.read_text())["seed"] == 99


def test_console_script_module_entry(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text(DISCRETE)
    proc = subprocess.run([sys.executable, "-m", "relphase.cli", "phase", "--scenario", str(path)],
                          capture_output=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["relative_phase"]["value"] > 0
