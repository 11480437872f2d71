import io
import json

import pytest

from adlvstrat import cli
from adlvstrat.sigma_structures import unramified_unitary


def run_cli(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines()]


def test_eo_unramified_preset(capsys):
    code, recs = run_cli(capsys, "eo", "--preset", "example-3.1")
    assert code == 0 and len(recs) == 5
    assert [r["payload"]["word"] for r in recs] == [[], [0], [0, 8], [0, 8, 7], [0, 8, 7, 6]]
    assert [r["payload"]["sigma_w"] for r in recs] == [[0, 1], [2, 8], [3, 7], [4, 6], [5]]
    assert {r["payload"]["omega"] for r in recs} == {"tau^1"}
    assert all(r["status"] == "ok" and r["command"] == "eo" for r in recs)


def test_eo_ramified_preset(capsys):
    code, recs = run_cli(capsys, "eo", "--preset", "example-3.2")
    assert code == 0 and len(recs) == 8
    assert recs[5]["payload"]["sigma_w"] == [0, 1]


def test_preset_parameter_override(capsys, tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("preset: example-3.1\nn: 5\n")
    code, recs = run_cli(capsys, "eo", str(cfg))
    assert code == 0 and [r["payload"]["word"] for r in recs] == [[], [0], [0, 4]]
    code, recs = run_cli(capsys, "eo", "--preset", "example-3.2", "--m", "2")
    assert code == 0 and len(recs) == 4


def test_dl_check_and_moore(capsys):
    code, recs = run_cli(capsys, "dl-check", "--n", "3", "--field", "2", "3")
    assert code == 0 and recs[0]["payload"]["passed"] and recs[0]["payload"]["points"] == 24
    code, recs = run_cli(capsys, "moore", "--n", "3", "--field", "2", "3")
    assert recs[0]["payload"]["mismatches"] == 0 and recs[0]["payload"]["lines"] == 73


def test_config_from_stdin(capsys, monkeypatch):
    text = "type: A\nrank: 2\nmu: [1, 0]\nremoved_node: 0\n"
    code, recs = run_cli(capsys, "adm", "-", stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and len(recs) == 7
    assert sorted(r["payload"]["length"] for r in recs) == [0, 1, 1, 1, 2, 2, 2]
    text = "type: A\nrank: 2\nb: [0, 1, 2]\nresidue: {base: [], type: [1, 2]}\n"
    code, recs = run_cli(capsys, "gate", "-", stdin=text, monkeypatch=monkeypatch)
    # b^{-1} = s2 s1 s0 is already minimal in its coset b^{-1} W_0
    assert code == 0 and recs[0]["payload"]["distance"] == 3
    assert recs[0]["payload"]["gate"]["word"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["eo", "--preset", "example-3.1", "--n", "6"],
        ["rational", "--preset", "example-1.3", "--radius", "3"],
        ["straight", "--preset", "example-3.2", "--m", "2", "--radius", "2"],
        ["sigma-w", "--preset", "example-3.2", "--m", "3"],
    ],
)
def test_records_round_trip(capsys, argv):
    code, recs = run_cli(capsys, *argv)
    assert code == 0 and recs
    for r in recs:
        assert json.loads(json.dumps(r, sort_keys=True)) == r
        assert set(r) == {"command", "input", "payload", "status"}
    group = unramified_unitary(4).group if "example-1.3" in argv else None
    if group is not None:
        for r in recs:
            x = cli.parse_element(group, r["payload"])
            assert list(x.reduced_word()) == r["payload"]["word"]
            assert cli.omega_str(x.omega) == r["payload"]["omega"]


def test_output_is_deterministic(capsys):
    a = run_cli(capsys, "rational", "--preset", "example-1.3", "--radius", "4")
    b = run_cli(capsys, "rational", "--preset", "example-1.3", "--radius", "4")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["eo", "--preset", "example-9.9"],
        ["eo", "--preset", "example-1.3", "--n", "6"],
        ["eo", "/nonexistent/config.yaml"],
        ["eo"],
        ["dl-check", "--n", "3", "--field", "4", "1"],
        ["eo", "--radius", "x"],
    ],
)
def test_errors_emit_single_record(capsys, argv):
    code, recs = run_cli(capsys, *argv)
    assert code == 1 and len(recs) == 1
    assert recs[0]["status"] == "error" and recs[0]["payload"]["error"]


def test_bad_yaml(capsys, monkeypatch):
    code, recs = run_cli(capsys, "eo", "-", stdin="[1, 2", monkeypatch=monkeypatch)
    assert code == 1 and recs[0]["status"] == "error"
    code, recs = run_cli(capsys, "eo", "-", stdin="- 1\n- 2\n", monkeypatch=monkeypatch)
    assert code == 1
