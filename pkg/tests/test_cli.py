import json
from pathlib import Path

import pytest

from dhwalk import cli
from dhwalk.io import dump_scenario, load_scenario, serialize_scenario
from dhwalk.scenario import three_sphere_product_data

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def good_file(tmp_path):
    path = tmp_path / "good.json"
    dump_scenario(three_sphere_product_data(2, 3, 4, mode="small"), path)
    return str(path)


def test_validate_ok(capsys, good_file):
    code, out, _ = run(capsys, "validate", good_file)
    assert code == 0
    assert "structurally valid" in out


def test_validate_reports_violations(capsys, tmp_path):
    payload = json.loads(serialize_scenario(three_sphere_product_data(2, 3, 4, mode="small")))
    payload["levels"][-1]["components"][0]["index"] = 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 2
    assert "coindex 0" in out


def test_walk_csv_rows(capsys, good_file):
    code, out, _ = run(capsys, "walk", good_file, "--trace", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 8
    assert [r.split(",")[2] for r in rows[1:]] == ["0", "1", "2", "3", "2", "1", "0"]


def test_walk_output_is_byte_stable(capsys, good_file):
    code1, out1, _ = run(capsys, "walk", good_file, "--trace", "csv")
    code2, out2, _ = run(capsys, "walk", good_file, "--trace", "csv")
    assert (code1, out1) == (code2, out2)


def test_classify_certificate_exit_zero(capsys, good_file):
    code, out, _ = run(capsys, "classify", good_file)
    assert code == 0
    assert "CERTIFICATE" in out
    assert "(2,3,4)" in out


def test_classify_refusal_exit_two(capsys):
    code, out, _ = run(capsys, "classify", str(SCENARIOS / "bad_value_lattice.json"))
    assert code == 2
    assert "REFUSAL" in out


def test_classify_takes_the_general_path_for_surface_data(capsys):
    code, out, _ = run(capsys, "classify", str(SCENARIOS / "conic_surface_wall.json"))
    assert code == 0
    assert "determined up to equivariant" in out


def test_walk_refuses_bad_maximum(capsys):
    code, _, err = run(capsys, "walk", str(SCENARIOS / "bad_maximum_8.json"))
    assert code == 2
    assert "maximum" in err


def test_strict_walk_fails_on_uncertified_extrema(capsys):
    code, _, err = run(capsys, "walk", str(SCENARIOS / "sphere_product_extrema.json"), "--strict")
    assert code == 3
    assert "face value" in err
    code, _, _ = run(capsys, "walk", str(SCENARIOS / "sphere_product_extrema.json"))
    assert code == 0


def test_parse_error_exit_one(capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{this is not json")
    code, _, err = run(capsys, "walk", str(bad))
    assert code == 1
    assert "error" in err
    code, _, _ = run(capsys, "walk", str(tmp_path / "missing.json"))
    assert code == 1


def test_unknown_schema_key_exit_one(capsys, tmp_path):
    payload = json.loads(serialize_scenario(three_sphere_product_data(1, 2, 4, mode="small")))
    payload["surprise"] = True
    bad = tmp_path / "extra.json"
    bad.write_text(json.dumps(payload))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "unknown key" in err


def test_bad_command_line_exit_one(capsys):
    assert cli.main(["walk"]) == 1
    capsys.readouterr()
    assert cli.main(["no-such-command"]) == 1
    capsys.readouterr()


def test_internal_errors_map_to_exit_four(capsys, monkeypatch, good_file):
    from dhwalk.errors import InternalInvariantError

    def boom(path):
        raise InternalInvariantError("synthetic")

    monkeypatch.setattr(cli, "load_scenario", boom)
    code, _, err = run(capsys, "walk", good_file)
    assert code == 4
    assert "bug" in err


def test_dh_profile_csv(capsys, good_file):
    code, out, _ = run(capsys, "dh-profile", good_file, "--samples", "9", "--emit", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,volume,k"
    assert lines[1] == "0,0,0"
    assert lines[-1] == "9,0,0"


def test_dh_profile_svg(capsys, good_file):
    code, out, _ = run(capsys, "dh-profile", good_file, "--samples", "18", "--emit", "svg")
    assert code == 0
    assert out.startswith("<svg")


def test_lattice_exc(capsys):
    code, out, _ = run(capsys, "lattice", "exc", "-k", "2")
    assert code == 0
    assert "3 exceptional classes" in out
    assert "L-E1-E2" in out
    code, out, _ = run(capsys, "lattice", "exc", "-k", "4")
    assert code == 0
    assert "uncertified" in out


def test_bootstrap_writes_full_mode(capsys, tmp_path, good_file):
    out_path = tmp_path / "full.json"
    code, out, _ = run(capsys, "bootstrap", good_file, "-o", str(out_path))
    assert code == 0
    full = load_scenario(out_path)
    assert full.mode == "full"
    assert full.level_at(5).euler_minus is not None


def test_rigidity_table(capsys):
    code, out, _ = run(capsys, "rigidity-table")
    assert code == 0
    assert "Seidel" in out
    assert "sphere-product" in out
