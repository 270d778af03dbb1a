import json
import math

import pytest

# Import the CLI module under test
import src.application.interfaces.cli as cli
from src.domain.exceptions import InvalidInput
from src.domain.schemas import SQRT3

# -----------------------
# Fixtures
# -----------------------


@pytest.fixture
def triangle_file(tmp_path):
    ch, sh = math.cosh(1.0), math.sinh(1.0)
    p = tmp_path / "tri.json"
    p.write_text(
        json.dumps({"vertices": [[1.0, 0.0, 0.0], [ch, sh, 0.0], [ch, 0.0, sh]]}),
        encoding="utf-8",
    )
    return str(p)


@pytest.fixture
def class_file(tmp_path):
    p = tmp_path / "class.json"
    p.write_text(json.dumps({"d": [2.0, 2.0, 2.0]}), encoding="utf-8")
    return str(p)


def _error(captured) -> dict:
    return json.loads(captured.err)


# -------------
# _parse_class / _parse_epsilon / _env_int
# -------------


def test_parse_class_ok():
    assert cli._parse_class(" 2.5, 2.1 ,1.9").d == (2.5, 2.1, 1.9)


@pytest.mark.parametrize("text", ["2,2", "2,2,2,2", "a,2,2", ""])
def test_parse_class_invalid(text):
    with pytest.raises(InvalidInput):
        cli._parse_class(text)


def test_parse_epsilon():
    assert cli._parse_epsilon("-1") == -1
    assert cli._parse_epsilon("+1") == 1
    assert cli._parse_epsilon("1") == 1


def test_env_int(monkeypatch):
    monkeypatch.setenv("HYPNAP_THREADS", "6")
    assert cli._env_int("HYPNAP_THREADS", 1) == 6
    monkeypatch.setenv("HYPNAP_THREADS", " ")
    assert cli._env_int("HYPNAP_THREADS", 1) == 1
    monkeypatch.setenv("HYPNAP_THREADS", "many")
    with pytest.raises(SystemExit):
        cli._env_int("HYPNAP_THREADS", 1)


# -------------
# build_parser
# -------------


def test_build_parser_subcommands():
    parser = cli.build_parser()
    args = parser.parse_args(["napoleonize", "--class", "2,2,2", "--epsilon", "-1"])
    assert args.cmd == "napoleonize"
    assert args.class_spec == "2,2,2"
    assert args.epsilon == "-1"
    assert args.func is cli.cmd_napoleonize

    for name in ("realize", "sample", "iterate", "certify", "sweep", "project"):
        assert parser.parse_args([name]).cmd == name


def test_build_parser_threads_from_env(monkeypatch):
    monkeypatch.setenv("HYPNAP_THREADS", "4")
    args = cli.build_parser().parse_args(["certify"])
    assert args.threads == 4


def test_build_parser_rejects_bad_epsilon():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["napoleonize", "--epsilon", "2"])


def test_build_parser_requires_command():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args([])


# -------------
# napoleonize
# -------------


def test_main_napoleonize_class(capsys):
    rc = cli.main(["napoleonize", "--class", "2,2,2", "--epsilon", "-1"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["kind"] == "equilateral"
    assert out["epsilon"] == -1
    assert out["e_class"] == pytest.approx([17.0 / (5.0 * SQRT3)] * 3)
    assert out["napoleonic"] is True


def test_main_napoleonize_triangle(capsys, triangle_file):
    rc = cli.main(["napoleonize", "--triangle", triangle_file])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert len(out["centroids"]) == 3
    assert out["kind"] == "isosceles"


def test_main_napoleonize_unrealizable(capsys):
    rc = cli.main(["napoleonize", "--class", "3,1.8,1.8"])
    err = _error(capsys.readouterr())
    assert rc == 2
    assert err["error"] == "unrealizable"


def test_main_napoleonize_needs_input(capsys):
    rc = cli.main(["napoleonize"])
    assert rc == 2
    assert _error(capsys.readouterr())["error"] == "invalid_input"


def test_main_napoleonize_rejects_csv(capsys):
    rc = cli.main(["napoleonize", "--class", "2,2,2", "--format", "csv"])
    err = _error(capsys.readouterr())
    assert rc == 2
    assert "JSON only" in err["message"]


def test_main_class_and_triangle_are_exclusive(capsys, triangle_file):
    rc = cli.main(["napoleonize", "--class", "2,2,2", "--triangle", triangle_file])
    assert rc == 2
    assert "mutually exclusive" in _error(capsys.readouterr())["message"]


def test_main_missing_triangle_file(capsys, tmp_path):
    rc = cli.main(["napoleonize", "--triangle", str(tmp_path / "nope.json")])
    assert rc == 2
    assert "Input file not found" in _error(capsys.readouterr())["message"]


def test_main_napoleonize_class_file(capsys, class_file):
    rc = cli.main(["napoleonize", "--class", class_file, "--epsilon", "-1"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["kind"] == "equilateral"
    assert out["e_class"] == pytest.approx([17.0 / (5.0 * SQRT3)] * 3)


def test_main_malformed_class_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"d": [2.0, 2.0]}), encoding="utf-8")
    rc = cli.main(["napoleonize", "--class", str(p)])
    err = _error(capsys.readouterr())
    assert rc == 2
    assert err["error"] == "invalid_input"
    assert "Class file" in err["message"]


# -------------
# realize / sample
# -------------


def test_main_realize(capsys):
    rc = cli.main(["realize", "--class", "2,2,2"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["vertices"][0] == [1, 0, 0]
    assert out["vertices"][2] == pytest.approx([1.5, 0.3 * math.sqrt(5.0), 0.4 * math.sqrt(5.0)])


def test_main_realize_degenerate(capsys):
    rc = cli.main(["realize", "--class", f"{SQRT3!r},2,2"])
    assert rc == 2
    assert _error(capsys.readouterr())["error"] == "degenerate_class"


def test_main_sample_is_seeded(capsys):
    cli.main(["sample", "--seed", "12", "--radius", "1.5"])
    first = capsys.readouterr().out
    cli.main(["sample", "--seed", "12", "--radius", "1.5"])
    assert capsys.readouterr().out == first
    data = json.loads(first)
    assert data["seed"] == 12
    assert len(data["d"]) == 3


# -------------
# iterate
# -------------


def test_main_iterate_csv_is_reproducible(capsys, tmp_path):
    out = tmp_path / "runs" / "traj.csv"
    argv = ["iterate", "--class", "2.5,2.1,1.9", "--steps", "100", "--out", str(out)]

    assert cli.main(argv) == 0
    summary = json.loads(capsys.readouterr().out)
    first = out.read_bytes()
    assert cli.main(argv) == 0
    capsys.readouterr()
    assert out.read_bytes() == first

    lines = first.decode("utf-8").splitlines()
    assert lines[0] == ",".join(cli.TRAJECTORY_HEADER)
    assert len(lines) == summary["steps"] + 2
    assert summary["terminal_status"] == "point_limit_reached"
    assert summary["passed"] is True
    assert b"\r\n" not in first


def test_main_iterate_to_stdout(capsys):
    rc = cli.main(["iterate", "--class", "2,2,2", "--epsilon", "-1", "--steps", "5"])
    captured = capsys.readouterr()
    assert rc == 0
    assert len(captured.out.splitlines()) == 7
    summary = json.loads(captured.err)
    assert summary["terminal_status"] == "max_steps"
    assert summary["epsilon"] == -1


def test_main_iterate_json(capsys):
    rc = cli.main(["iterate", "--class", "2.5,2.1,1.9", "--format", "json", "--steps", "3"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert len(out["trajectory"]) == 4
    assert out["report"]["epsilon"] == 1


def test_main_iterate_random_start(capsys):
    rc = cli.main(["iterate", "--seed", "4", "--steps", "100"])
    summary = json.loads(capsys.readouterr().err)
    assert rc == 0
    assert summary["terminal_status"] == "point_limit_reached"


def test_main_iterate_from_class_file(capsys, class_file):
    rc = cli.main(["iterate", "--class", class_file, "--steps", "40"])
    summary = json.loads(capsys.readouterr().err)
    assert rc == 0
    assert summary["terminal_status"] == "point_limit_reached"


# -------------
# certify / sweep
# -------------


def test_main_certify_single_cell(capsys):
    argv = ["certify", "--grid-min", "2", "--grid-max", "2", "--grid-step", "0.1"]
    rc = cli.main(argv)
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["cells"] == 1
    assert out["passed"] is True


def test_main_certify_rejects_grid_below_point_limit(capsys):
    rc = cli.main(["certify", "--grid-min", "1.5"])
    err = _error(capsys.readouterr())
    assert rc == 2
    assert err["error"] == "invalid_input"


def test_main_sweep(capsys, tmp_path):
    out = tmp_path / "sweep.json"
    rc = cli.main(["sweep", "--seed", "1", "--samples", "10", "--threads", "2", "--out", str(out)])
    data = json.loads(out.read_text(encoding="utf-8"))
    assert rc == 0
    assert data["samples"] == 10
    assert data["passed"] is True


def test_main_rejects_non_positive_steps(capsys):
    rc = cli.main(["iterate", "--class", "2,2,2", "--steps", "0"])
    assert rc == 2
    assert "steps" in _error(capsys.readouterr())["message"]


# -------------
# project
# -------------


def test_main_project_csv(capsys, triangle_file):
    rc = cli.main(["project", "--triangle", triangle_file, "--epsilon", "-1"])
    lines = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert lines[0] == "label,u,v"
    assert [line.split(",")[0] for line in lines[1:]] == [
        "P0",
        "P1",
        "P2",
        "Q0",
        "Q1",
        "Q2",
        "R0",
        "R1",
        "R2",
    ]


def test_main_project_class_json(capsys):
    rc = cli.main(["project", "--class", "2.5,2.1,1.9", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert len(out["points"]) == 9
    assert out["points"][0] == {"label": "P0", "u": 0, "v": 0}
