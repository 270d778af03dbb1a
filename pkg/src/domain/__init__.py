from src.domain.exceptions import ConsistencyFailure, HypNapError, InvalidInput, Unrealizable
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    CongruenceClass,
    HPoint,
    NapoleonParams,
    NapoleonResult,
    StopCriterion,
    Tolerances,
    TrajectoryRecord,
    Triangle,
)
from src.domain.utils import dumps_json, to_dict

__all__ = [
    "HypNapError",
    "InvalidInput",
    "Unrealizable",
    "ConsistencyFailure",
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "HPoint",
    "Triangle",
    "CongruenceClass",
    "NapoleonParams",
    "NapoleonResult",
    "StopCriterion",
    "TrajectoryRecord",
    "dumps_json",
    "to_dict",
]
