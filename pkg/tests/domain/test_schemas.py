import math

import pytest
from pydantic import ValidationError

from src.domain.exceptions import DegenerateTriangle, NotOnHyperboloid, Unrealizable
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    RHO,
    SQRT3,
    CongruenceClass,
    HPoint,
    NapoleonParams,
    RunConfig,
    StopCriterion,
    Tolerances,
    Triangle,
    TrianglePayload,
)

# -------------
# Constants and tolerances
# -------------


def test_contraction_constants():
    assert RHO == pytest.approx(0.93319, abs=1e-5)
    assert SQRT3 * SQRT3 == pytest.approx(3.0)


def test_default_tolerances():
    assert DEFAULT_TOLERANCES.point == 1e-12
    assert DEFAULT_TOLERANCES.consistency == 1e-9
    assert DEFAULT_TOLERANCES.isometry == 1e-10


def test_tolerances_must_be_positive():
    with pytest.raises(ValidationError):
        Tolerances(point=0.0)
    with pytest.raises(ValidationError):
        Tolerances(consistency=-1e-9)


def test_models_are_frozen():
    c = CongruenceClass.from_values((2.0, 2.0, 2.0))
    with pytest.raises(ValidationError):
        c.d0 = 3.0


# -------------
# HPoint
# -------------


def test_hpoint_accepts_far_points_with_scaled_tolerance():
    t = 10.0
    P = HPoint.from_coords((math.cosh(t), math.sinh(t), 0.0))
    assert P.v.x0 > 1e4


def test_hpoint_rejects_off_hyperboloid():
    with pytest.raises(NotOnHyperboloid):
        HPoint.from_coords((1.0, 0.1, 0.0))


def test_hpoint_rejects_lower_sheet():
    with pytest.raises(NotOnHyperboloid):
        HPoint.from_coords((-1.0, 0.0, 0.0))


def test_hpoint_tolerance_from_context():
    x1 = 1e-4
    coords = (1.0, x1, 0.0)
    with pytest.raises(NotOnHyperboloid):
        HPoint.from_coords(coords)
    assert HPoint.from_coords(coords, tol=1e-6).coords == coords


def test_hpoint_rejects_nan():
    with pytest.raises(ValidationError):
        HPoint.from_coords((math.nan, 0.0, 0.0))


# -------------
# Triangle
# -------------


def test_triangle_rejects_coincident_vertices():
    P = HPoint.from_coords((1.0, 0.0, 0.0))
    Q = HPoint.from_coords((math.cosh(1.0), math.sinh(1.0), 0.0))
    with pytest.raises(DegenerateTriangle):
        Triangle.from_points((P, Q, P))


def test_triangle_relabel():
    P = HPoint.from_coords((1.0, 0.0, 0.0))
    Q = HPoint.from_coords((math.cosh(1.0), math.sinh(1.0), 0.0))
    R = HPoint.from_coords((math.cosh(1.0), 0.0, math.sinh(1.0)))
    T = Triangle.from_points((P, Q, R))
    assert T.relabel((2, 0, 1)).vertices == (R, P, Q)


def test_triangle_payload_round_trip():
    P = HPoint.from_coords((1.0, 0.0, 0.0))
    Q = HPoint.from_coords((math.cosh(1.0), math.sinh(1.0), 0.0))
    R = HPoint.from_coords((math.cosh(1.0), 0.0, math.sinh(1.0)))
    T = Triangle.from_points((P, Q, R))
    payload = TrianglePayload.model_validate(TrianglePayload.of(T))
    assert payload.to_triangle() == T


# -------------
# CongruenceClass
# -------------


def test_class_below_point_limit():
    with pytest.raises(Unrealizable):
        CongruenceClass.from_values((1.7, 2.0, 2.0))


def test_class_accessors():
    c = CongruenceClass.from_values((2.1, 2.5, 1.9))
    assert c.d == (2.1, 2.5, 1.9)
    assert c.squares == pytest.approx((4.41, 6.25, 3.61))
    assert c.shifted == pytest.approx((1.41, 3.25, 0.61))
    assert c.mu == pytest.approx(3.25)
    assert c.gap_max == pytest.approx(0.6)


def test_class_rotation_and_canonical_form():
    c = CongruenceClass.from_values((2.1, 2.5, 1.9))
    assert c.rotated(1).d == (2.5, 1.9, 2.1)
    assert c.rotated(4) == c.rotated(1)
    assert c.canonical().d == (2.5, 1.9, 2.1)
    tied = CongruenceClass.from_values((2.5, 2.5, 1.9))
    assert tied.canonical() is tied


def test_class_from_shifts():
    c = CongruenceClass.from_shifts((1.0, 0.0, 0.5))
    assert c.d == pytest.approx((2.0, SQRT3, math.sqrt(3.5)))
    assert c.shifted[1] == pytest.approx(0.0, abs=1e-15)


# -------------
# Parameters and settings
# -------------


def test_napoleon_params_epsilon():
    assert NapoleonParams(epsilon=-1).epsilon == -1
    with pytest.raises(ValidationError):
        NapoleonParams(epsilon=0)


def test_stop_criterion_bounds():
    assert StopCriterion().max_steps == 10_000
    with pytest.raises(ValidationError):
        StopCriterion(max_steps=0)
    with pytest.raises(ValidationError):
        StopCriterion(verify_every=-1)


def test_run_config_defaults():
    config = RunConfig(command="certify")
    assert config.grid_min == pytest.approx(SQRT3 + 0.01)
    assert config.grid_max == 6.0
    assert config.threads == 1
    assert config.output_format is None


def test_run_config_rejects_grid_below_point_limit():
    with pytest.raises(ValidationError):
        RunConfig(command="certify", grid_min=1.5)
    with pytest.raises(ValidationError):
        RunConfig(command="certify", grid_min=3.0, grid_max=2.0)


def test_run_config_rejects_unknown_command_and_format():
    with pytest.raises(ValidationError):
        RunConfig(command="plot")
    with pytest.raises(ValidationError):
        RunConfig(command="iterate", output_format="xml")
