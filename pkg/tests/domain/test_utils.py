import json

import numpy as np
import pytest

from src.domain.exceptions import ConsistencyFailure, HypNapError, InvalidInput, Unrealizable
from src.domain.schemas import CongruenceClass, StepStatus
from src.domain.utils import dumps_json, format_float, to_dict, to_jsonable

# -------------
# format_float
# -------------


def test_format_float_round_trips():
    for x in (0.1, 1.0 / 3.0, 2.0**0.5, 1e-17, 123456789.123):
        assert float(format_float(x)) == x
    assert format_float(2.0) == "2"


# -------------
# to_jsonable / to_dict
# -------------


def test_to_jsonable_handles_models_enums_and_arrays():
    value = {
        "class": CongruenceClass.from_values((2.0, 2.0, 2.0)),
        "status": StepStatus.MAX_STEPS,
        "array": np.array([1.0, 2.0]),
        "pair": (1, 2),
    }
    out = to_jsonable(value)
    assert out == {
        "class": {"d0": 2.0, "d1": 2.0, "d2": 2.0},
        "status": "max_steps",
        "array": [1.0, 2.0],
        "pair": [1, 2],
    }


def test_to_dict_from_json_string():
    assert to_dict('{"a": 1}') == {"a": 1}


def test_to_dict_rejects_non_mapping():
    with pytest.raises(TypeError):
        to_dict([1, 2, 3])


# -------------
# dumps_json
# -------------


def test_dumps_json_layout():
    text = dumps_json({"d": (2.0, 0.1, 3), "ok": True, "none": None, "nested": {"k": "v"}})
    assert text.endswith("\n")
    assert '"d": [2, 0.10000000000000001, 3]' in text
    assert json.loads(text) == {
        "d": [2, 0.1, 3],
        "ok": True,
        "none": None,
        "nested": {"k": "v"},
    }


def test_dumps_json_nests_lists_of_objects():
    text = dumps_json({"items": [{"a": 1.5}, {"a": 2.5}], "empty": [], "blank": {}})
    data = json.loads(text)
    assert data == {"items": [{"a": 1.5}, {"a": 2.5}], "empty": [], "blank": {}}
    assert "\n    {" in text


def test_dumps_json_is_stable():
    value = {"x": 1.0 / 3.0, "y": [0.1, 0.2]}
    assert dumps_json(value) == dumps_json(value)


# -------------
# Exceptions
# -------------


def test_error_payloads_and_exit_codes():
    err = Unrealizable("class (3, 1.8, 1.8) has radicand -29.9 < 0")
    assert isinstance(err, HypNapError)
    assert err.exit_code == 2
    assert err.to_dict() == {"error": "unrealizable", "message": err.message}
    assert InvalidInput("x").to_dict()["error"] == "invalid_input"
    assert ConsistencyFailure("drift").exit_code == 1
