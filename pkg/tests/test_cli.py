import json

import numpy as np
import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from fracoll.channels import ChannelSpec
from fracoll.cli import main
from fracoll.config import load_config, parse_config, parse_number
from fracoll.errors import ConfigurationError, DomainError
from fracoll.scan import ResultTable, ScanPointError, emit, read_csv, render, run_scan


def write(tmp_path, data, name="c.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data, allow_unicode=True), encoding="utf-8")
    return p


MINIMAL = {"channels": ["Σ→Σ→Π"], "light": {"mode": "opo", "kappa": 1.0},
           "scan": {"phi": {"start": 0, "stop": "2*pi", "count": 9}}}

TRAJECTORY = {
    "channels": ["S-S-P", "S-P-D"],
    "light": {"mode": "opo", "kappa": 0.5, "envelope": {"model": "exponential", "coherence_time": 3000}},
    "scan": {"phi": {"start": 0, "stop": "pi", "count": 3}, "delay": {"values": [0, 2000]}},
    "kinematics": {"trajectory": {
        "collision_energy": 0.01, "impact_parameter": 1.0, "reduced_mass": 2000,
        "ground": {"form": "inverse_power", "C": 0, "n": 3},
        "intermediate": {"form": "inverse_power", "C": 2, "n": 3},
        "final": {"form": "inverse_power", "C": 6, "n": 3},
        "photon_detunings": [0.01, 0.001]}},
}


def test_parse_number_forms():
    assert parse_number("pi", "x") == np.pi
    assert parse_number("-pi/2", "x") == -np.pi / 2
    assert parse_number("2*pi", "x") == 2 * np.pi
    assert parse_number("0.25pi", "x") == 0.25 * np.pi
    assert parse_number("1e-3", "x") == 1e-3
    for bad in ("two", True, None, "inf"):
        with pytest.raises(ConfigurationError):
            parse_number(bad, "x")


def test_minimal_config(tmp_path):
    cfg = load_config(write(tmp_path, MINIMAL))
    assert cfg.channels == (ChannelSpec((0, 0, 1)),)
    assert cfg.n_points == 9
    assert cfg.axes[0].values[-1] == pytest.approx(2 * np.pi)
    assert cfg.echo["kinematics"] == {"source": "recoil"}


def test_channel_label_resolved():
    cfg = parse_config({"channels": ["Σ→Π→Δ"], "light": {"kappa": 1}, "scan": {"phi": [0]}})
    assert cfg.channels[0].lambdas == (0, 1, 2)


def test_default_channels_are_the_worked_five():
    cfg = parse_config({"light": {"kappa": 1}, "scan": {"phi": [0]}})
    assert len(cfg.channels) == 5


def test_kappa_zero_points_to_weak_limit():
    with pytest.raises(ConfigurationError, match="weak_limit"):
        parse_config({"light": {"kappa": 0}, "scan": {"phi": [0]}})
    with pytest.raises(ConfigurationError, match="weak_limit"):
        parse_config({"light": {"kappa": 1}, "scan": {"kappa": {"start": 0, "stop": 1, "count": 3}}})
    cfg = parse_config({"light": {"weak_limit": True}, "scan": {"phi": [0]}})
    assert cfg.light.mode == "weak_limit"


def test_unknown_keys_listed():
    with pytest.raises(ConfigurationError, match="colour, flavour"):
        parse_config({"light": {"kappa": 1}, "scan": {"phi": [0]}, "flavour": 1, "colour": 2})
    with pytest.raises(ConfigurationError, match="gain"):
        parse_config({"light": {"kappa": 1, "gain": 2}, "scan": {"phi": [0]}})


def test_invalid_channel_names_valid_ones():
    with pytest.raises(ConfigurationError, match="Σ→Σ→Σ"):
        parse_config({"channels": ["Σ→Q→Σ"], "light": {"kappa": 1}, "scan": {"phi": [0]}})


@pytest.mark.parametrize("bad", [
    {"light": {"kappa": 1}, "scan": {}},
    {"light": {"kappa": 1}, "scan": {"phi": [0], "g": [1], "delay": [0]}},
    {"light": {"kappa": 1}, "scan": {"phi": {"start": 0, "stop": 1, "count": 0}}},
    {"light": {"kappa": 1}, "scan": {"phi": {"start": 0, "stop": 1, "count": 1}}},
    {"light": {"mode": "classical"}, "scan": {"g": [1]}},
    {"light": {"mode": "weak_limit"}, "scan": {"kappa": [1]}},
    {"light": {"kappa": 1, "mode": "laser"}, "scan": {"phi": [0]}},
    {"light": {"kappa": 1}, "scan": {"phi": [0]}, "output": {"format": "xml"}},
    {"light": {"kappa": 1}, "scan": {"phi": [0]}, "workers": 0},
    {"light": {"kappa": 1}, "scan": {"phi": [0]}, "units": {"energy": "erg"}},
    {"light": {"kappa": 1}, "scan": {"phi": [0]}, "kinematics": {"explicit": {"R1": 1}}},
    {"light": {"kappa": 1}, "scan": {"phi": [0]}, "kinematics": {"recoil": True, "explicit": {"R1": 1, "R2": 1}}},
    {"light": {}, "scan": {"phi": [0]}},
])
def test_rejected_configs(bad):
    with pytest.raises(ConfigurationError):
        parse_config(bad)


def test_units_converted():
    cfg = parse_config({"light": {"kappa": 1, "envelope": {"model": "exponential", "coherence_time": 1}},
                        "scan": {"delay": [0, 1]}, "units": {"time": "fs"}})
    assert cfg.light.envelope.coherence_time == pytest.approx(41.341373335, rel=1e-9)
    assert cfg.axes[0].values[1] == pytest.approx(41.341373335, rel=1e-9)


def test_nine_point_scan():
    table = run_scan(parse_config(MINIMAL))
    assert len(table.rows) == 9
    assert table.columns == ("phi", "sigma0[Σ→Σ→Π]", "fraction[Σ→Σ→Π]", "classicality_witness")
    assert np.all(table.column("fraction[Σ→Σ→Π]") == 1.0)


def test_two_axis_order_and_count():
    cfg = parse_config(TRAJECTORY)
    table = run_scan(cfg)
    assert len(table.rows) == cfg.n_points == 6
    assert table.columns[:2] == ("phi", "delay")
    np.testing.assert_allclose(table.column("phi"), np.repeat([0, np.pi / 2, np.pi], 2))
    np.testing.assert_allclose(table.column("delay"), [0, 2000] * 3)
    assert "trajectory" in table.metadata


def test_weak_limit_phi_pi_row():
    cfg = parse_config({"light": {"mode": "weak_limit", "g": 1.0}, "scan": {"phi": [0, "pi"]}})
    table = run_scan(cfg)
    zero, pi = table.rows
    for label in ("Σ→Σ→Σ", "Σ→Π→Σ", "Σ→Π→Δ"):
        i = table.columns.index(f"sigma0[{label}]")
        assert abs(pi[i]) < 1e-12 * zero[i]
    for label in ("Σ→Σ→Π", "Σ→Π→Π"):
        i = table.columns.index(f"sigma0[{label}]")
        assert pi[i] > zero[i]
        assert pi[i] / zero[i] == pytest.approx(5 / 3, rel=1e-12)


def test_failure_annotated_with_grid_point():
    cfg = parse_config({"channels": ["Σ→Σ→Σ"], "light": {"mode": "weak_limit", "g": 1.0},
                        "scan": {"phi": [0, "pi"]}})
    with pytest.raises(ScanPointError, match="phi=3.14159") as info:
        run_scan(cfg)
    assert isinstance(info.value, DomainError)


def test_scan_over_g_and_kappa():
    cfg = parse_config({"channels": ["S-P-D"], "light": {"mode": "opo", "phi": 0},
                        "scan": {"kappa": [0.5, 1.0], "g": [0.0, 1.0]}})
    table = run_scan(cfg)
    w = table.column("classicality_witness")
    np.testing.assert_allclose(w, [0, 1 / np.tanh(0.5) ** 2, 0, 1 / np.tanh(1.0) ** 2])


@settings(max_examples=10, deadline=None)
@given(workers=st.integers(1, 8))
def test_thread_count_does_not_change_bytes(workers):
    cfg = parse_config(TRAJECTORY)
    assert render(run_scan(cfg, workers)) == render(run_scan(cfg, 1))


def test_header_only_and_single_row_csv():
    empty = ResultTable(("a", "b"), ())
    assert render(empty) == "a,b\n"
    one = ResultTable(("a", "b"), ((0.1, 2.0),))
    lines = render(one).splitlines()
    assert lines == ["a,b", "0.10000000000000001,2"]


def test_metadata_preamble_is_commented():
    text = render(ResultTable(("a",), ((1.0,),), {"version": "x"}))
    assert text.splitlines()[0] == '# version: "x"'
    assert len([ln for ln in text.splitlines() if not ln.startswith("#")]) == 2


def test_csv_round_trip_exact(tmp_path):
    table = run_scan(parse_config(TRAJECTORY))
    path = tmp_path / "o.csv"
    emit(table, "csv", path)
    meta, cols, rows = read_csv(path)
    assert cols == table.columns
    assert rows == list(table.rows)
    assert meta["config"] == json.loads(json.dumps(table.metadata["config"]))


def test_json_round_trip(tmp_path):
    table = run_scan(parse_config(MINIMAL))
    path = tmp_path / "o.json"
    emit(table, "json", path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert tuple(doc["columns"]) == table.columns
    assert [tuple(r) for r in doc["rows"]] == list(table.rows)
    assert doc["metadata"]["schema_version"] == 1


def test_emit_unwritable_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        emit(ResultTable(("a",), ()), "csv", tmp_path / "missing" / "o.csv")


# ---------------------------------------------------------------------------
# command line


def test_cli_scan_writes_file_and_is_repeatable(tmp_path):
    cfg = write(tmp_path, TRAJECTORY)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["scan", "--config", str(cfg), "--out", str(out1)]) == 0
    assert main(["scan", "--config", str(cfg), "--out", str(out2), "--workers", "4"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_scan_stdout_json(tmp_path, capsys):
    assert main(["scan", "--config", str(write(tmp_path, MINIMAL)), "--format", "json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 9


def test_cli_kinematics(tmp_path, capsys):
    assert main(["kinematics", "--config", str(write(tmp_path, TRAJECTORY))]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["trajectory"]["R1"] == pytest.approx(200 ** (1 / 3))
    assert doc["units"]["internal"]["energy"] == "hartree"


def test_cli_oracle(capsys):
    assert main(["oracle", "--channel", "Σ→Π→Δ", "--phi", "0", "--coth2g", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.6, rel=1e-15)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["scan", "--config", str(tmp_path / "nope.yaml")]) == 2
    bad = write(tmp_path, {"light": {"kappa": 0}, "scan": {"phi": [0]}}, "bad.yaml")
    assert main(["scan", "--config", str(bad)]) == 2
    assert "weak_limit" in capsys.readouterr().err
    closing = write(tmp_path, {"channels": ["Σ→Σ→Σ"], "light": {"mode": "weak_limit", "g": 1},
                               "scan": {"phi": ["pi"]}}, "closing.yaml")
    assert main(["scan", "--config", str(closing)]) == 3
    assert main(["oracle", "--channel", "Σ→Δ→Δ", "--phi", "0", "--coth2g", "1"]) == 3
    assert main(["oracle", "--channel", "nonsense", "--phi", "0", "--coth2g", "1"]) == 2
    (tmp_path / "broken.yaml").write_text("light: [unclosed\n")
    assert main(["scan", "--config", str(tmp_path / "broken.yaml")]) == 2
