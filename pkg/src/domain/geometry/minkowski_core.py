"""Minkowski (1,2) linear algebra on the hyperboloid model of the hyperbolic plane."""

from __future__ import annotations

import math
from typing import Sequence, Tuple, Union

import numpy as np

from src.domain.exceptions import (
    DegeneratePair,
    InvalidInput,
    InvalidIsometry,
    NotTimelike,
    WrongSheet,
)
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    DiskPoint,
    HPoint,
    LorentzMap,
    MVec,
    Tolerances,
)

VectorLike = Union[MVec, HPoint, np.ndarray, Sequence[float]]

J = np.diag((-1.0, 1.0, 1.0))
BASE_POINT = HPoint.from_coords((1.0, 0.0, 0.0))


def as_array(v: VectorLike) -> np.ndarray:
    """Coordinates of a vector-like value as a float64 array of shape (3,)."""
    if isinstance(v, HPoint):
        v = v.v
    if isinstance(v, MVec):
        return np.array(v.coords, dtype=float)
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise InvalidInput(f"expected 3 Minkowski coordinates, got shape {arr.shape}")
    return arr


def hpoint(arr: np.ndarray, tolerances: Tolerances = DEFAULT_TOLERANCES) -> HPoint:
    return HPoint.from_coords(arr, tol=tolerances.point)


# ---- Bilinear form and products ---- #


def minkowski_inner(v: VectorLike, w: VectorLike) -> float:
    """Return ⟨v,w⟩ = −v0·w0 + v1·w1 + v2·w2."""
    a, b = as_array(v), as_array(w)
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def cross_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """J(a × b) on raw arrays."""
    return J @ np.cross(a, b)


def hyperbolic_cross(v: VectorLike, w: VectorLike) -> MVec:
    """Return v ×̃ w = J(v × w), Minkowski-orthogonal to both arguments."""
    return MVec.from_coords(cross_array(as_array(v), as_array(w)))


def triple_product(u: VectorLike, v: VectorLike, w: VectorLike) -> float:
    """Return ⟨u, v ×̃ w⟩, the Euclidean determinant of (u, v, w)."""
    return minkowski_inner(u, cross_array(as_array(v), as_array(w)))


# ---- Hyperboloid ---- #


def project_to_hyperboloid(
    v: VectorLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> HPoint:
    """Normalize a future-pointing timelike vector onto the upper sheet.

    Args:
        v: Vector with ⟨v,v⟩ < 0 and x0 > 0.
        tolerances: ``projection`` bounds how close to the light cone v may be.

    Returns:
        HPoint: ``v / sqrt(-<v,v>)``, re-validated.

    Raises:
        NotTimelike: If ⟨v,v⟩ ≥ −tolerances.projection.
        WrongSheet: If x0 ≤ 0.
    """
    a = as_array(v)
    norm = float(-a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
    if not norm < -tolerances.projection:
        raise NotTimelike(f"<v,v> = {norm!r} for {tuple(a)}")
    if a[0] <= 0.0:
        raise WrongSheet(f"x0 = {a[0]!r} points to the past")
    return hpoint(a / math.sqrt(-norm), tolerances)


def hyperbolic_distance(P: HPoint, Q: HPoint) -> float:
    """Return arccosh(−⟨P,Q⟩), clamped at 0 for coincident points."""
    return math.acosh(max(1.0, -minkowski_inner(P, Q)))


def frame_coordinates(
    P0: HPoint, P1: HPoint, Q: VectorLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[float, float, float]:
    """Decompose Q = a0·P0 + a1·P1 + b·(P0 ×̃ P1).

    Raises:
        DegeneratePair: If P0 and P1 coincide.
    """
    c = minkowski_inner(P0, P1)
    if c >= -1.0 - tolerances.distinct:
        raise DegeneratePair(f"<P0,P1> = {c!r}")
    q0, q1 = minkowski_inner(Q, P0), minkowski_inner(Q, P1)
    det = 1.0 - c * c
    a0 = -(q0 + c * q1) / det
    a1 = -(q1 + c * q0) / det
    b = triple_product(Q, P0, P1) / (c * c - 1.0)
    return a0, a1, b


def from_frame(
    P0: HPoint,
    P1: HPoint,
    coefficients: Tuple[float, float, float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> HPoint:
    """Inverse of :func:`frame_coordinates`, projected back onto the hyperboloid."""
    a0, a1, b = coefficients
    p0, p1 = as_array(P0), as_array(P1)
    return project_to_hyperboloid(a0 * p0 + a1 * p1 + b * cross_array(p0, p1), tolerances)


# ---- Isometries ---- #


def check_isometry(L: LorentzMap, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Raise InvalidIsometry unless L preserves the form and the upper sheet."""
    defect = L.form_defect()
    if defect > tolerances.isometry:
        raise InvalidIsometry(f"m^T J m differs from J by {defect:.3g}")
    if L.m[0][0] < 1.0 - tolerances.isometry:
        raise InvalidIsometry(f"m00 = {L.m[0][0]!r} reverses time orientation")


def _lorentz(m: np.ndarray) -> LorentzMap:
    rows = tuple(tuple(float(x) for x in row) for row in m)
    return LorentzMap(m=rows)


def identity_map() -> LorentzMap:
    return _lorentz(np.eye(3))


def rotation(theta: float) -> LorentzMap:
    """Rotation by ``theta`` in the (x1, x2) plane; fixes the base point."""
    c, s = math.cos(theta), math.sin(theta)
    return _lorentz(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))


def boost(t: float) -> LorentzMap:
    """Boost of rapidity ``t`` in the (x0, x1) plane."""
    ch, sh = math.cosh(t), math.sinh(t)
    return _lorentz(np.array([[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]]))


def random_isometry(rng: np.random.Generator, max_rapidity: float = 1.0) -> LorentzMap:
    """Rotation · boost · rotation with uniform angles and rapidity in [0, max_rapidity]."""
    theta1 = rng.uniform(0.0, 2.0 * math.pi)
    t = rng.uniform(0.0, max_rapidity)
    theta2 = rng.uniform(0.0, 2.0 * math.pi)
    return rotation(theta1) @ boost(t) @ rotation(theta2)


def apply_isometry(
    L: LorentzMap, P: HPoint, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> HPoint:
    """Return L·P, re-validated as a hyperboloid point.

    Raises:
        InvalidIsometry: If L fails its invariants at call time.
    """
    check_isometry(L, tolerances)
    return hpoint(np.array(L.m) @ as_array(P), tolerances)


def random_point(rng: Union[np.random.Generator, int], radius_bound: float) -> HPoint:
    """Boost the base point by a random direction and a radius in [0, radius_bound].

    Deterministic given the generator state; an integer is used as a seed.
    """
    if radius_bound < 0.0:
        raise InvalidInput(f"radius bound must be non-negative, got {radius_bound}")
    gen = np.random.default_rng(rng) if isinstance(rng, int) else rng
    r = gen.uniform(0.0, radius_bound)
    theta = gen.uniform(0.0, 2.0 * math.pi)
    sh = math.sinh(r)
    return HPoint.from_coords((math.cosh(r), sh * math.cos(theta), sh * math.sin(theta)))


# ---- Poincaré disk ---- #


def poincare_disk(P: HPoint, label: str = "") -> DiskPoint:
    """Map (x0, x1, x2) to (x1/(1+x0), x2/(1+x0))."""
    x0, x1, x2 = P.coords
    return DiskPoint(label=label, u=x1 / (1.0 + x0), v=x2 / (1.0 + x0))


def from_poincare_disk(q: DiskPoint, tolerances: Tolerances = DEFAULT_TOLERANCES) -> HPoint:
    """Inverse of :func:`poincare_disk`."""
    r2 = q.u * q.u + q.v * q.v
    k = 1.0 / (1.0 - r2)
    return project_to_hyperboloid(((1.0 + r2) * k, 2.0 * q.u * k, 2.0 * q.v * k), tolerances)
