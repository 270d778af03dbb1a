import io
import json
import math

import pytest

from src.domain.exceptions import InvalidInput, NotOnHyperboloid, Unrealizable
from src.domain.schemas import StepStatus
from src.infrastructure.files.artifact_uow import ArtifactUnitOfWork

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
    p.write_text(json.dumps({"d": [2.5, 2.1, 1.9]}), encoding="utf-8")
    return str(p)


# -------------
# read_json
# -------------


def test_read_json_missing_file(tmp_path):
    missing = tmp_path / "nope.json"
    with pytest.raises(InvalidInput) as exc:
        ArtifactUnitOfWork.read_json(str(missing))
    assert "Input file not found" in str(exc.value)


def test_read_json_empty_file(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("   \n", encoding="utf-8")
    with pytest.raises(InvalidInput) as exc:
        ArtifactUnitOfWork.read_json(str(p))
    assert "Empty input file" in str(exc.value)


def test_read_json_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ invalid json", encoding="utf-8")
    with pytest.raises(InvalidInput) as exc:
        ArtifactUnitOfWork.read_json(str(p))
    msg = str(exc.value)
    assert "Invalid JSON in input file" in msg
    assert "line 1" in msg


# -------------
# read_triangle / read_class
# -------------


def test_read_triangle(triangle_file):
    T = ArtifactUnitOfWork().read_triangle(triangle_file)
    assert T.P0.coords == (1.0, 0.0, 0.0)
    assert T.P1.coords[0] == pytest.approx(math.cosh(1.0))


def test_read_triangle_malformed(tmp_path):
    p = tmp_path / "tri.json"
    p.write_text(json.dumps({"vertices": [[1.0, 0.0, 0.0]]}), encoding="utf-8")
    with pytest.raises(InvalidInput) as exc:
        ArtifactUnitOfWork().read_triangle(str(p))
    assert "is malformed" in str(exc.value)


def test_read_triangle_off_hyperboloid(tmp_path):
    p = tmp_path / "tri.json"
    p.write_text(
        json.dumps({"vertices": [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 1.0, 0.0]]}),
        encoding="utf-8",
    )
    with pytest.raises(NotOnHyperboloid):
        ArtifactUnitOfWork().read_triangle(str(p))


def test_read_class(class_file):
    c = ArtifactUnitOfWork().read_class(class_file)
    assert c.d == (2.5, 2.1, 1.9)


def test_read_class_below_point_limit(tmp_path):
    p = tmp_path / "class.json"
    p.write_text(json.dumps({"d": [1.5, 2.0, 2.0]}), encoding="utf-8")
    with pytest.raises(Unrealizable):
        ArtifactUnitOfWork().read_class(str(p))


def test_read_class_malformed(tmp_path):
    p = tmp_path / "class.json"
    p.write_text(json.dumps({"d": ["a", 2.0, 2.0]}), encoding="utf-8")
    with pytest.raises(InvalidInput) as exc:
        ArtifactUnitOfWork().read_class(str(p))
    assert "Class file" in str(exc.value)


# -------------
# Writing
# -------------


def test_write_json_to_stream():
    stream = io.StringIO()
    ArtifactUnitOfWork(stream=stream).write_json({"status": StepStatus.MAX_STEPS, "x": 0.5})
    assert json.loads(stream.getvalue()) == {"status": "max_steps", "x": 0.5}


def test_write_csv_to_nested_path(tmp_path):
    out = tmp_path / "runs" / "deep" / "traj.csv"
    uow = ArtifactUnitOfWork(out=str(out))
    uow.write_csv(("k", "mu", "ratio"), [(0, 0.1, None), (1, 2.0, 0.5)])
    data = out.read_bytes()
    assert data == b"k,mu,ratio\n0,0.10000000000000001,\n1,2,0.5\n"


def test_write_without_destination():
    with pytest.raises(InvalidInput):
        ArtifactUnitOfWork().write_json({"a": 1})
