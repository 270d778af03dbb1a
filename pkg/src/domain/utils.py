from __future__ import annotations

import json
from enum import Enum
from typing import Any, Dict

from pydantic import BaseModel


def format_float(x: float) -> str:
    """Decimal text with 17 significant digits, enough to round-trip a float64."""
    return format(x, ".17g")


def to_jsonable(value: Any) -> Any:
    """
    Convert models, enums, tuples and nested containers into JSON-ready primitives.

    Floats are kept as floats here; :func:`dumps_json` fixes their text representation.

    Args:
        value (Any): A pydantic model, an Enum member, a mapping, a sequence or a scalar.

    Returns:
        Any: Plain dicts, lists, strings, numbers, booleans and ``None``.
    """
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return value


def to_dict(value: Any) -> Dict[str, Any]:
    """Coerce a model, a mapping or a JSON string into a plain dict."""
    if isinstance(value, str):
        return json.loads(value)
    data = to_jsonable(value)
    if not isinstance(data, dict):
        raise TypeError(f"cannot convert {type(value).__name__} to a dict")
    return data


def _render(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if not value:
        return "[]"
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return "[" + ", ".join(_render(v, indent, level) for v in value) + "]"
    items = [f"{pad}{_render(v, indent, level + 1)}" for v in value]
    return "[\n" + ",\n".join(items) + "\n" + end + "]"


def dumps_json(value: Any, indent: int = 2) -> str:
    """
    Serialize ``value`` as indented JSON with stable float formatting.

    Numeric arrays stay on one line and floats use :func:`format_float`, so identical runs
    produce byte-identical files.
    """
    return _render(to_jsonable(value), indent, 0) + "\n"
