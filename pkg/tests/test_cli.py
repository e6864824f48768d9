import io
import json
import subprocess
import sys

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anharmonia.cli import main
from anharmonia.config import DEFAULTS, ENV_VAR, load_config
from anharmonia.report import REPORT_SCHEMA


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_series_text_and_json():
    code, text, _ = run("series", "E4", "--order", "4")
    assert code == 0 and "240" in text
    code, body, _ = run("--json", "series", "E4", "--order", "4")
    data = json.loads(body)
    assert data["name"] == "E4" and data["order"] == 4


@pytest.mark.parametrize("argv", [
    ("mobius", "verify", "--group", "dihedral", "--m", "3"),
    ("darboux", "--n", "4", "--check", "tau4"),
    ("darboux", "--n", "2"),
    ("schwarz", "eq20"),
    ("schwarz", "platonic", "--k", "2,3,4"),
    ("transvect", "klein", "--kind", "tetrahedral", "--check"),
    ("numeric", "cross-ratio", "--potential", "zero", "--steps", "400"),
    ("suite", "transvect", "--cases", "5"),
])
def test_reports_validate(argv):
    code, body, _ = run(*argv, "--json")
    assert code == 0
    data = json.loads(body)
    if "checks" in data:
        jsonschema.validate(data, REPORT_SCHEMA)


def test_suite_json_schema_and_exit():
    code, body, _ = run("suite", "schwarz", "--cases", "5", "--json")
    assert code == 0
    jsonschema.validate(json.loads(body), REPORT_SCHEMA)


def test_exit_codes():
    assert run("suite", "bogus")[0] == 2
    assert run()[0] == 2
    assert run("series", "E5")[0] == 2
    assert run("schwarz", "eq20", "--a", "0")[0] == 2
    assert run("transvect")[0] == 2
    # a tolerance too tight to meet is a verification failure, not a usage error
    assert run("numeric", "cross-ratio", "--potential", "zero", "--steps", "50", "--tol", "1e-30")[0] == 1


def test_transvect_form():
    code, body, _ = run("transvect", "--form", "1,0,0,0,1", "--r", "4", "--json")
    assert code == 0
    assert json.loads(body)["r"] == 4


def test_same_seed_is_byte_identical():
    a = run("suite", "transvect", "--cases", "8", "--seed", "7", "--json")[1]
    b = run("--seed", "7", "suite", "transvect", "--cases", "8", "--json")[1]
    assert a == b


def test_timing_only_when_requested():
    data = json.loads(run("schwarz", "eq20", "--json")[1])
    assert all(c["wall_time"] is None for c in data["checks"])
    data = json.loads(run("suite", "transvect", "--cases", "3", "--json", "--timing")[1])
    assert all(isinstance(c["wall_time"], float) for c in data["checks"])


def test_csv_output(tmp_path):
    path = tmp_path / "traj.csv"
    code, _, _ = run("numeric", "cross-ratio", "--potential", "zero", "--steps", "400", "--csv", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "z_re,z_im,u_re,u_im"


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"order": 6, "seed": 3}))
    env = {ENV_VAR: str(cfg)}
    assert load_config(env=env)["order"] == 6
    assert load_config({"order": 9}, env=env)["order"] == 9
    assert load_config({"order": None}, env=env)["order"] == 6
    assert load_config(env={})["order"] == DEFAULTS["order"]
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        load_config(env=env)


def test_config_file_via_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"order": 3}))
    monkeypatch.setenv(ENV_VAR, str(cfg))
    data = json.loads(run("series", "E6", "--json")[1])
    assert data["order"] == 3
    data = json.loads(run("series", "E6", "--json", "--order", "5")[1])
    assert data["order"] == 5


flag = st.sampled_from(["--json", "--timing", "--seed", "--order", "--tol", "--zzz", "-x", "3", "-1", "abc", ""])


@settings(max_examples=40)
@given(st.lists(flag, max_size=5))
def test_fuzzed_flags_never_crash(extra):
    code, _, _ = run("series", "E2", *extra)
    assert code in (0, 2)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "anharmonia", "schwarz", "platonic", "--k", "2,3,5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "60" in proc.stdout
