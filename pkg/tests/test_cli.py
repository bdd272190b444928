import json

import pytest

from entdyn.cli import load_config, main, scenario_from_config
from entdyn.errors import ConfigurationError
from entdyn.export import read_csv

CONFIG = """\
# zero-temperature Bell decay
name = bell_demo
dims.d1 = 2
dims.d2 = 2
state.kind = bell
state.bell = psi_plus
model.kind = thermal
model.gamma = 1.0
model.nbar = 0.0
estimators = wootters, analytic
oracle.formula = bell_zero_temperature
oracle.kind = psi_plus
oracle.gamma = 1.0
time.t_max = 1.0
time.points = 11
seed = 3
"""


@pytest.fixture
def config_file(tmp_path):
    p = tmp_path / "scenario.cfg"
    p.write_text(CONFIG)
    return p


def test_load_config_parsing(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("a.b = 3\nc = 1.5  # trailing comment\nname = run_1\n\n")
    cfg = load_config(p)
    assert cfg == {"a.b": 3, "c": 1.5, "name": "run_1"}


def test_load_config_rejects_bad_line(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("just some words\n")
    with pytest.raises(ConfigurationError):
        load_config(p)


def test_scenario_from_config_roundtrip(config_file):
    sc = scenario_from_config(load_config(config_file))
    assert sc.name == "bell_demo"
    assert (sc.dims.d1, sc.dims.d2) == (2, 2)
    assert sc.estimators == ("wootters", "analytic")
    assert sc.oracle.formula == "bell_zero_temperature"
    assert sc.n_points == 11
    assert sc.seed == 3


def test_scenario_from_config_seed_override(config_file):
    sc = scenario_from_config(load_config(config_file), seed_override=99)
    assert sc.seed == 99


def test_evolve_writes_csv_json_png(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(config_file), "--out", str(out)]) == 0
    assert (out / "bell_demo.csv").exists()
    assert (out / "bell_demo.png").exists()
    header, rows = read_csv(out / "bell_demo.csv")
    assert header[:3] == ["t", "c_wootters", "c_analytic"]
    assert len(rows) == 11
    assert main(["evolve", "--config", str(config_file), "--out", str(out),
                 "--format", "json"]) == 0
    doc = json.loads((out / "bell_demo.json").read_text())
    assert doc["metadata"]["name"] == "bell_demo"


def test_evolve_deterministic_bytes(config_file, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    main(["evolve", "--config", str(config_file), "--out", str(out1)])
    main(["evolve", "--config", str(config_file), "--out", str(out2)])
    a = (out1 / "bell_demo.csv").read_bytes()
    b = (out2 / "bell_demo.csv").read_bytes()
    assert a == b


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["evolve", "--config", str(tmp_path / "nope.cfg")]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_bad_estimator_exits_2(tmp_path, capsys):
    p = tmp_path / "c.cfg"
    p.write_text("estimators = telepathy\n")
    assert main(["evolve", "--config", str(p), "--out", str(tmp_path)]) == 2


def test_unwritable_output_exits_4(config_file, capsys):
    assert main(["evolve", "--config", str(config_file),
                 "--out", "/proc/entdyn_cannot_write"]) == 4
    assert "I/O error" in capsys.readouterr().err


def test_oracle_stdout(capsys):
    rc = main(["oracle", "--formula", "bell_dephasing", "--params", "gamma=1.0",
               "--tmax", "1.0", "--points", "3"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "t,c_analytic,boundary_pop,valid_analytic"
    assert len(out) == 4
    first = out[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0


def test_oracle_bad_formula_exits_2(capsys):
    assert main(["oracle", "--formula", "who_knows", "--tmax", "1.0"]) == 2


def test_oracle_bad_param_syntax_exits_2(capsys):
    assert main(["oracle", "--formula", "bell_dephasing", "--params", "gamma",
                 "--tmax", "1.0"]) == 2


def test_oracle_file_output(tmp_path):
    rc = main(["oracle", "--formula", "bell_infinite_temperature",
               "--params", "gamma=1.0", "--tmax", "0.5", "--points", "5",
               "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "oracle_bell_infinite_temperature.csv").exists()
    assert (tmp_path / "oracle_bell_infinite_temperature.png").exists()


def test_validate_small_sample(capsys):
    assert main(["validate", "--samples", "3", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 6
    assert "FAIL" not in out
