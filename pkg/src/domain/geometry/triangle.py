"""Triangles, their congruence coordinates (d0, d1, d2) and the scalars α, χ, γ."""

from __future__ import annotations

import logging
import math
import sys
from typing import Optional, Tuple, Union

import numpy as np

from src.domain.exceptions import DegenerateClass, DegenerateTriangle, Unrealizable
from src.domain.geometry.minkowski_core import (
    BASE_POINT,
    from_frame,
    hyperbolic_cross,
    minkowski_inner,
    project_to_hyperboloid,
    random_point,
)
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    SHIFT_THRESHOLD,
    SQRT3,
    CongruenceClass,
    DerivedScalars,
    Tolerances,
    Triangle,
    TriangleKind,
    TriangleKindTag,
    Triple,
)

logger = logging.getLogger(__name__)

ROUNDING_ULPS = 256


def congruence_of(T: Triangle) -> CongruenceClass:
    """Return d_i = √(1 − 2⟨P_{i+1},P_{i+2}⟩), indices mod 3.

    Raises:
        DegenerateTriangle: If two vertices coincide (⟨P_i,P_j⟩ ≥ −1).
    """
    pts = T.vertices
    d = []
    for i in range(3):
        c = minkowski_inner(pts[(i + 1) % 3], pts[(i + 2) % 3])
        if c >= -1.0:
            raise DegenerateTriangle(f"vertices {(i + 1) % 3} and {(i + 2) % 3} coincide")
        d.append(math.sqrt(1.0 - 2.0 * c))
    return CongruenceClass.from_values(d)


# ---- Derived scalars ---- #


def alpha_of(c: CongruenceClass) -> float:
    """2α = 1 − d0² − d1² − d2²."""
    D0, D1, D2 = c.squares
    return 0.5 * (1.0 - D0 - D1 - D2)


def alpha_point(T: Triangle) -> float:
    """α = −1 + ⟨P0,P1⟩ + ⟨P1,P2⟩ + ⟨P2,P0⟩ evaluated on the points."""
    P0, P1, P2 = T.vertices
    return -1.0 + minkowski_inner(P0, P1) + minkowski_inner(P1, P2) + minkowski_inner(P2, P0)


def _radicand_terms(c: CongruenceClass) -> Tuple[float, float]:
    """The radicand and the sum of the magnitudes of its terms."""
    if c.mu < SHIFT_THRESHOLD:
        s0, s1, s2 = c.shifted
        total = s0 + s1 + s2
        pairs = s0 * s1 + s1 * s2 + s2 * s0
        product = s0 * s1 * s2
        value = 4.0 * pairs - total * total + product
        return value, 4.0 * abs(pairs) + total * total + abs(product)
    D0, D1, D2 = c.squares
    linear = 3.0 * (D0 + D1 + D2)
    quadratic = D0 * D1 + D1 * D2 + D2 * D0 + D0 * D0 + D1 * D1 + D2 * D2
    cubic = D0 * D1 * D2
    return linear - quadratic + cubic, linear + quadratic + cubic


def radicand_of(c: CongruenceClass) -> float:
    """(2χ)² as a polynomial in the class.

    Near the point limit the same polynomial is evaluated in s_i = d_i² − 3, where it reads
    4(s0s1 + s1s2 + s2s0) − (s0 + s1 + s2)² + s0s1s2 and has no cancellation.
    """
    return _radicand_terms(c)[0]


def radicand_rounding(c: CongruenceClass) -> float:
    """Bound on the rounding error of :func:`radicand_of` for float inputs."""
    return ROUNDING_ULPS * sys.float_info.epsilon * _radicand_terms(c)[1]


def chi_of(c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Return χ = √radicand / 2 ≥ 0.

    Radicands in [−tolerances.realizable, 0) are clamped to 0.

    Raises:
        Unrealizable: If the radicand is below −tolerances.realizable.
    """
    rad = radicand_of(c)
    if rad < -tolerances.realizable:
        raise Unrealizable(f"class {c.d} has radicand {rad:.6g} < 0")
    return 0.5 * math.sqrt(max(rad, 0.0))


def gamma_of(c: CongruenceClass) -> float:
    D0, D1, D2 = c.squares
    return 3.0 * (D0 + 1.0) * (D1 + 1.0) * (D2 + 1.0)


def derived_scalars(
    c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> DerivedScalars:
    return DerivedScalars(alpha=alpha_of(c), chi=chi_of(c, tolerances), gamma=gamma_of(c))


def chi_point(T: Triangle) -> float:
    """Signed χ = ⟨P0 ×̃ P1, P2⟩ of an ordered triangle."""
    P0, P1, P2 = T.vertices
    return minkowski_inner(hyperbolic_cross(P0, P1), P2)


def chi_estimate(c: CongruenceClass) -> float:
    """Upper estimate (1/3)·Σ d_i²(d_{i+1}² − 3)(d_{i+2}² − 3) of (2χ)²."""
    D = c.squares
    s = c.shifted
    return sum(D[i] * s[(i + 1) % 3] * s[(i + 2) % 3] for i in range(3)) / 3.0


# ---- Ordering and realization ---- #


def canonicalize(T: Triangle) -> Triangle:
    """Relabel T so that χ ≥ 0, then rotate cyclically so that d0 is maximal.

    Ties in the maximum keep the smallest rotation index, so canonical input is returned
    with unchanged labels.
    """
    if chi_point(T) < 0.0:
        T = T.relabel((0, 2, 1))
    d = congruence_of(T).d
    k = d.index(max(d))
    if k == 0:
        return T
    return T.relabel((k, (k + 1) % 3, (k + 2) % 3))


def realize(c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Triangle:
    """Build the canonical-gauge triangle of a class.

    P0 is the base point, P1 lies on the x1-axis geodesic with cosh t = (d2² − 1)/2, and P2 is
    written in the frame (P0, P1, P0 ×̃ P1) with the χ ≥ 0 orientation.

    Raises:
        DegenerateClass: If some d_i is within tolerances.strict of √3.
        Unrealizable: If the radicand is negative.
    """
    for i, x in enumerate(c.d):
        if x <= SQRT3 + tolerances.strict:
            raise DegenerateClass(f"d{i} = {x!r} is within {tolerances.strict:g} of sqrt(3)")
    chi = chi_of(c, tolerances)
    D0, D1, D2 = c.squares

    ch = 0.5 * (D2 - 1.0)
    sh = math.sqrt((ch - 1.0) * (ch + 1.0))
    P0 = BASE_POINT
    P1 = project_to_hyperboloid((ch, sh, 0.0), tolerances)

    # <P2,P0> and <P2,P1> are fixed by d1 and d0
    cc = -ch
    q0 = 0.5 * (1.0 - D1)
    q1 = 0.5 * (1.0 - D0)
    det = 1.0 - cc * cc
    a0 = -(q0 + cc * q1) / det
    a1 = -(q1 + cc * q0) / det
    b = chi / (cc * cc - 1.0)
    P2 = from_frame(P0, P1, (a0, a1, b), tolerances)
    return Triangle.from_points((P0, P1, P2), tol=tolerances.distinct)


def random_triangle(
    rng: Union[np.random.Generator, int],
    radius_bound: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Triangle:
    """Three random points within ``radius_bound`` of the base point, resampled until distinct."""
    gen = np.random.default_rng(rng) if isinstance(rng, int) else rng
    while True:
        points = [random_point(gen, radius_bound) for _ in range(3)]
        try:
            return Triangle.from_points(points, tol=tolerances.distinct)
        except DegenerateTriangle:
            logger.debug("resampling coincident random vertices")


# ---- Classification and bounds ---- #


def classify(
    c: CongruenceClass,
    tol_class: Optional[float] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> TriangleKind:
    """Tag a class as equilateral, isosceles, cogeodesic or generic.

    Cogeodesic means χ ≤ tol, or a radicand that is zero up to its own rounding error, since
    the square root amplifies rounding near zero. A point-degenerate class (every d_i within
    tol of √3) is equilateral.
    """
    tol = tolerances.classification if tol_class is None else tol_class
    chi = chi_of(c, tolerances)
    d = c.d
    close = [abs(d[i] - d[(i + 1) % 3]) <= tol for i in range(3)]
    equilateral = all(close)
    cogeodesic = chi <= tol or radicand_of(c) <= radicand_rounding(c)

    if equilateral and cogeodesic:
        at_point = all(x <= SQRT3 + tol for x in d)
        tag = TriangleKindTag.EQUILATERAL if at_point else TriangleKindTag.COGEODESIC
    elif equilateral:
        tag = TriangleKindTag.EQUILATERAL
    elif cogeodesic:
        tag = TriangleKindTag.COGEODESIC
    elif any(close):
        tag = TriangleKindTag.ISOSCELES
    else:
        tag = TriangleKindTag.GENERIC
    return TriangleKind(tag=tag, tolerance=tol)


def side_lengths(c: CongruenceClass) -> Triple:
    """Hyperbolic side lengths arccosh((d_i² − 1)/2); display only."""
    a, b, e = (math.acosh(max(1.0, 0.5 * (D - 1.0))) for D in c.squares)
    return (a, b, e)


def satisfies_triangle_inequality(c: CongruenceClass, tol: float = 1e-9) -> bool:
    lengths = side_lengths(c)
    return all(
        lengths[i] <= lengths[(i + 1) % 3] + lengths[(i + 2) % 3] + tol for i in range(3)
    )


def satisfies_coordinate_bounds(c: CongruenceClass, tol: float = 1e-9) -> bool:
    """d_i ≥ √3 and d_i² − 1 ≤ (d_{i+1}² − 1)(d_{i+2}² − 1)."""
    D = c.squares
    if any(x < SQRT3 - 1e-12 for x in c.d):
        return False
    return all(
        D[i] - 1.0 <= (D[(i + 1) % 3] - 1.0) * (D[(i + 2) % 3] - 1.0) + tol for i in range(3)
    )
