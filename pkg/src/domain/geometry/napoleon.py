"""Napoleonization: equilateral flanks, their centroids and the class-space closed form.

Two pipelines compute the same thing. :func:`napoleonize` builds apexes and centroids from
points; :func:`napoleonize_class` evaluates the closed form for
⟨R_{i+1},R_{i+2}⟩ in terms of (d0, d1, d2), α, χ and γ without constructing any point.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Tuple

import numpy as np

from src.domain.exceptions import CogeodesicClass, ConsistencyFailure, DegeneratePair
from src.domain.geometry.minkowski_core import (
    as_array,
    cross_array,
    minkowski_inner,
    project_to_hyperboloid,
)
from src.domain.geometry.triangle import (
    alpha_of,
    canonicalize,
    chi_of,
    chi_point,
    classify,
    congruence_of,
    gamma_of,
)
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    SHIFT_THRESHOLD,
    SQRT3,
    CongruenceClass,
    Epsilon,
    HPoint,
    NapoleonParams,
    NapoleonResult,
    Tolerances,
    Triangle,
    TriangleKindTag,
    Triple,
)

logger = logging.getLogger(__name__)


# ---- Flank triangles ---- #


def _pair(
    P0: HPoint, P1: HPoint, tolerances: Tolerances
) -> Tuple[float, np.ndarray, np.ndarray]:
    c = minkowski_inner(P0, P1)
    if c >= -1.0 - tolerances.distinct:
        raise DegeneratePair(f"<P0,P1> = {c!r}")
    return c, as_array(P0), as_array(P1)


def apex(
    P0: HPoint, P1: HPoint, epsilon: Epsilon, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> HPoint:
    """Third vertex Q of the equilateral triangle P0P1Q on the ε side of P0P1.

    Q = [−c(P0 + P1) + ε√(1 − 2c)·P0 ×̃ P1]/(1 − c) with c = ⟨P0,P1⟩, so that
    ⟨Q,P0⟩ = ⟨Q,P1⟩ = c.

    Raises:
        DegeneratePair: If P0 and P1 coincide.
    """
    c, p0, p1 = _pair(P0, P1, tolerances)
    q = (-c * (p0 + p1) + epsilon * math.sqrt(1.0 - 2.0 * c) * cross_array(p0, p1)) / (1.0 - c)
    return project_to_hyperboloid(q, tolerances)


def centroid_equilateral(
    P0: HPoint, P1: HPoint, epsilon: Epsilon, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> HPoint:
    """Centroid of the flank P0P1·apex(P0, P1, ε), in closed form.

    Raises:
        DegeneratePair: If P0 and P1 coincide.
    """
    c, p0, p1 = _pair(P0, P1, tolerances)
    r = (math.sqrt(1.0 - 2.0 * c) * (p0 + p1) + epsilon * cross_array(p0, p1)) / (
        SQRT3 * (1.0 - c)
    )
    return project_to_hyperboloid(r, tolerances)


# ---- Closed form ---- #


def _residual(d: Triple, alpha: float, chi: float, epsilon: Epsilon) -> float:
    d0, d1, d2 = d
    return alpha * (d0 + d1 + d2 - d0 * d1 * d2) + epsilon * chi * (
        1.0 - d0 * d1 - d1 * d2 - d2 * d0
    )


def _shifts_direct(c: CongruenceClass, chi: float, epsilon: Epsilon) -> Triple:
    d = c.d
    D = c.squares
    alpha = alpha_of(c)
    gamma = gamma_of(c)
    out = []
    for i in range(3):
        p, q = d[(i + 1) % 3], d[(i + 2) % 3]
        P, Q = D[(i + 1) % 3], D[(i + 2) % 3]
        bracket = (
            4.0 * (alpha * p * q + epsilon * chi * (p + q))
            - (P - 1.0) * (Q - 1.0)
            + 2.0 * (D[i] - 1.0)
        )
        inner = (D[i] + 1.0) * bracket / gamma
        out.append(-2.0 * (1.0 + inner))
    return (out[0], out[1], out[2])


def _shifts_near_limit(c: CongruenceClass, chi: float, epsilon: Epsilon) -> Triple:
    d = c.d
    s = c.shifted
    out = []
    for i in range(3):
        p, q = d[(i + 1) % 3], d[(i + 2) % 3]
        sp, sq = s[(i + 1) % 3], s[(i + 2) % 3]
        # t = pq − 3 without cancellation
        t = (3.0 * sp + 3.0 * sq + sp * sq) / (p * q + 3.0)
        w = (p * q - 1.0) * s[i] + (sp + sq - t) + (3.0 + sp + sq - t) * t
        out.append(4.0 * (w - 2.0 * epsilon * chi * (p + q)) / (3.0 * (sp + 4.0) * (sq + 4.0)))
    return (out[0], out[1], out[2])


def _closed_form_shifts(
    c: CongruenceClass, chi: float, epsilon: Epsilon, tolerances: Tolerances
) -> Triple:
    if c.mu < SHIFT_THRESHOLD:
        raw = _shifts_near_limit(c, chi, epsilon)
    else:
        raw = _shifts_direct(c, chi, epsilon)
    for i, x in enumerate(raw):
        if x < -tolerances.consistency:
            logger.warning(
                "closed form below the point limit",
                extra={"d": c.d, "epsilon": epsilon, "index": i, "shift": x},
            )
            raise ConsistencyFailure(f"e{i}^2 - 3 = {x!r} < 0 for class {c.d}")
    a, b, e = (max(x, 0.0) for x in raw)
    return (a, b, e)


def napoleonize_shifted(c: CongruenceClass, p: NapoleonParams) -> Triple:
    """Return e_i² − 3 of the Napoleonization of ``c``, labels kept.

    Switches to the cancellation-free form in s_i = d_i² − 3 once mu < 1e−4.

    Raises:
        Unrealizable: If the class has a negative radicand.
        ConsistencyFailure: If the closed form leaves the valid range.
    """
    chi = chi_of(c, p.tolerances)
    return _closed_form_shifts(c, chi, p.epsilon, p.tolerances)


def napoleonize_class(c: CongruenceClass, p: NapoleonParams) -> CongruenceClass:
    """Class of the Napoleonization, computed without building points."""
    return CongruenceClass.from_shifts(napoleonize_shifted(c, p))


# ---- Point space ---- #


def napoleonize(T: Triangle, p: NapoleonParams) -> NapoleonResult:
    """Erect the three ε-flanks of T and return their centroids.

    T is canonicalized first. The class of R0R1R2 is cross-checked against the closed form;
    both are evaluated on the same labels with the signed χ of the points.

    Raises:
        DegenerateTriangle: If vertices of T coincide.
        ConsistencyFailure: If the two evaluations disagree.
    """
    tol = p.tolerances
    eps = p.epsilon
    T = canonicalize(T)
    P = T.vertices
    Q = tuple(apex(P[(i + 1) % 3], P[(i + 2) % 3], eps, tol) for i in range(3))
    R = tuple(centroid_equilateral(P[(i + 1) % 3], P[(i + 2) % 3], eps, tol) for i in range(3))

    e = []
    for i in range(3):
        inner = minkowski_inner(R[(i + 1) % 3], R[(i + 2) % 3])
        e.append(math.sqrt(max(1.0 - 2.0 * inner, 3.0)))
    e_class = CongruenceClass.from_values(e)

    c = congruence_of(T)
    chi = max(chi_point(T), 0.0)
    closed = _closed_form_shifts(c, chi, eps, tol)
    scale = max(1.0, max(r.v.x0 for r in R) ** 2)
    for i in range(3):
        gap = abs(e[i] - math.sqrt(3.0 + closed[i]))
        if gap > tol.consistency * scale:
            logger.warning(
                "point and closed-form Napoleonization disagree",
                extra={"d": c.d, "epsilon": eps, "index": i, "gap": gap},
            )
            raise ConsistencyFailure(f"e{i} differs from its closed form by {gap:.3g}")

    logger.debug("napoleonized triangle", extra={"d": c.d, "e": e_class.d, "epsilon": eps})
    return NapoleonResult(
        triangle=T,
        epsilon=eps,
        Q0=Q[0],
        Q1=Q[1],
        Q2=Q[2],
        R0=R[0],
        R1=R[1],
        R2=R[2],
        e_class=e_class,
        residual_value=_residual(c.d, alpha_of(c), chi, eps),
    )


# ---- Napoleonic criterion ---- #


def napoleonic_residual(c: CongruenceClass, p: NapoleonParams) -> float:
    """α(d0 + d1 + d2 − d0d1d2) + εχ(1 − d0d1 − d1d2 − d2d0) on the canonical class.

    For a non-equilateral class the Napoleonization is equilateral exactly when this vanishes.
    """
    c = c.canonical()
    return _residual(c.d, alpha_of(c), chi_of(c, p.tolerances), p.epsilon)


def is_napoleonic(c: CongruenceClass, p: NapoleonParams, tol: float = 1e-9) -> bool:
    """Whether the Napoleonization of ``c`` is equilateral.

    Equilateral classes are napoleonic for both signs.

    Raises:
        CogeodesicClass: If χ = 0, where the criterion does not apply.
    """
    kind = classify(c, tolerances=p.tolerances)
    if kind.tag is TriangleKindTag.EQUILATERAL:
        return True
    if kind.tag is TriangleKindTag.COGEODESIC:
        raise CogeodesicClass(f"class {c.d} is cogeodesic")
    return abs(napoleonic_residual(c, p)) <= tol


# ---- Non-existence certificate ---- #


def _integer_terms(c: CongruenceClass) -> Tuple[int, int, int]:
    """Both sides of the certificate as integers over a common power of the scale k.

    Every float is a dyadic rational, so d_i = n_i/k exactly for k the largest denominator.
    Returns (4k¹⁰·lhs, 24k¹⁰·rhs, k).
    """
    ratios = [x.as_integer_ratio() for x in c.d]
    k = max(den for _, den in ratios)
    n0, n1, n2 = (num * (k // den) for num, den in ratios)
    one2 = k * k

    sq = n0 * n0 + n1 * n1 + n2 * n2
    pairs = n0 * n1 + n1 * n2 + n2 * n0
    prod = n0 * n1 * n2
    two_alpha = one2 - sq
    a_term = one2 * (n0 + n1 + n2) - prod
    b_term = one2 - pairs

    D0, D1, D2 = n0 * n0, n1 * n1, n2 * n2
    rad6 = (
        3 * one2 * one2 * sq
        - one2 * (D0 * D1 + D1 * D2 + D2 * D0 + D0 * D0 + D1 * D1 + D2 * D2)
        + D0 * D1 * D2
    )
    lhs4 = two_alpha * two_alpha * a_term * a_term - rad6 * b_term * b_term

    gamma6 = 3 * (D0 + one2) * (D1 + one2) * (D2 + one2)
    spread = (n0 - n1) ** 2 + (n1 - n2) ** 2 + (n2 - n0) ** 2
    tail = sq + pairs - 2 * one2
    rhs24 = gamma6 * spread * tail
    return lhs4, rhs24, k


def certificate_values(
    c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[float, float, float]:
    """Return (lhs, rhs, exact relative defect) of :func:`theorem1_certificate`.

    Raises:
        Unrealizable: If the class has a negative radicand.
    """
    chi_of(c, tolerances)
    lhs4, rhs24, k = _integer_terms(c)
    denom = 24 * k**10
    lhs = Fraction(6 * lhs4, denom)
    rhs = Fraction(rhs24, denom)
    defect = abs(lhs - rhs) / max(Fraction(1), abs(rhs))
    return float(lhs), float(rhs), float(defect)


def theorem1_certificate(
    c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[float, float]:
    """Both sides of the factorization behind the non-existence of Napoleonic triangles.

    lhs = α²(Σd − Πd)² − χ²(1 − Σd_id_j)² and
    rhs = (γ/24)·Σ(d_i − d_j)²·(Σd_i² + Σd_id_j − 2). The product of the residuals for the two
    signs is lhs, so the residual can only vanish where rhs does. Both sides are evaluated
    exactly from the float inputs and rounded once.

    Raises:
        Unrealizable: If the class has a negative radicand.
    """
    lhs, rhs, _ = certificate_values(c, tolerances)
    return lhs, rhs


def certificate_defect(c: CongruenceClass, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Exact |lhs − rhs| / max(1, |rhs|) of :func:`theorem1_certificate`."""
    return certificate_values(c, tolerances)[2]
