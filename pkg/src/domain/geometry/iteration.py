"""Iterated Napoleonization in class space and its contraction bounds."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

from src.domain.exceptions import ConsistencyFailure, DegenerateClass, InsufficientData
from src.domain.geometry.napoleon import (
    napoleonic_residual,
    napoleonize,
    napoleonize_shifted,
)
from src.domain.geometry.triangle import derived_scalars, realize
from src.domain.schemas import (
    BETA_CEILING,
    DEFAULT_TOLERANCES,
    MU_CONTRACTION,
    RHO,
    SQRT3,
    CongruenceClass,
    ContractionReport,
    Epsilon,
    NapoleonParams,
    StepStatus,
    StopCriterion,
    Tolerances,
    TrajectoryRecord,
    Triple,
)

logger = logging.getLogger(__name__)

VACUOUS = 1e-12
BOUND_SLACK = 1e-9
CEILING_SLACK = 1e-6
CROSS_CHECK_FLOOR = 1e-6


# ---- Gap quantities ---- #


def r_d_of(
    c: CongruenceClass, epsilon: Epsilon, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """r_d = (8/γ)·(α(Σd − Πd) + εχ(1 − Σd_id_j)).

    It satisfies e_{i+2}² − e_{i+1}² = r_d·(d_{i+2} − d_{i+1}) and is positive for ε = −1.
    """
    params = NapoleonParams(epsilon=epsilon, tolerances=tolerances)
    scalars = derived_scalars(c, tolerances)
    return 8.0 * napoleonic_residual(c, params) / scalars.gamma


def r_i_of(
    c: CongruenceClass, epsilon: Epsilon, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Triple:
    rd = abs(r_d_of(c, epsilon, tolerances))
    d = c.d
    a, b, e = (rd / (d[(i + 1) % 3] + d[(i + 2) % 3]) for i in range(3))
    return (a, b, e)


def r_d_bound(c: CongruenceClass) -> float:
    """Upper estimate (2/3)(d1 + d2) + 4/(9√3) + 2/3 of |r_d| on a canonical class."""
    _, d1, d2 = c.canonical().d
    return 2.0 / 3.0 * (d1 + d2) + 4.0 / (9.0 * SQRT3) + 2.0 / 3.0


def vertex_bound(c: CongruenceClass) -> Triple:
    """Per-side estimate of e_i² − 3 for ε = +1.

    (4/3)(D_{i+1} + D_{i+2} + 1)/((D_{i+1} + 1)(D_{i+2} + 1))·mu with D = d²; each factor in
    front of mu is at most 7/12 on valid classes.
    """
    D = c.squares
    mu = c.mu
    a, b, e = (
        4.0
        / 3.0
        * (D[(i + 1) % 3] + D[(i + 2) % 3] + 1.0)
        / ((D[(i + 1) % 3] + 1.0) * (D[(i + 2) % 3] + 1.0))
        * mu
        for i in range(3)
    )
    return (a, b, e)


def inner_mu_bound(c: CongruenceClass) -> float:
    """16·D0(D0 − 3)/(3(D1 + 1)(D2 + 1)) on the canonical class.

    Bounds e0² − 3 of the next class for ε = −1.
    """
    c = c.canonical()
    D0, D1, D2 = c.squares
    return 16.0 * D0 * c.shifted[0] / (3.0 * (D1 + 1.0) * (D2 + 1.0))


# ---- Trajectories ---- #


def at_point_limit(c: CongruenceClass, stop: StopCriterion) -> bool:
    return all(abs(x - SQRT3) < stop.tol_point_limit for x in c.d)


def _gap_ratio(before: Triple, after: Triple) -> Optional[float]:
    """Largest |s'_a − s'_b| / |s_a − s_b| over pairs whose denominator does not vanish."""
    ratios = []
    for a, b in ((0, 1), (1, 2), (2, 0)):
        den = abs(before[a] - before[b])
        if den >= VACUOUS:
            ratios.append(abs(after[a] - after[b]) / den)
    return max(ratios) if ratios else None


def observe(
    c: CongruenceClass,
    epsilon: Epsilon,
    *,
    k: int = 0,
    ratio_mu: Optional[float] = None,
    ratio_gap: Optional[float] = None,
    status: StepStatus = StepStatus.CONTINUE,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> TrajectoryRecord:
    """Record of a class, canonicalized, with its scalars and gap quantities."""
    c = c.canonical()
    scalars = derived_scalars(c, tolerances)
    return TrajectoryRecord(
        k=k,
        epsilon=epsilon,
        congruence=c,
        alpha=scalars.alpha,
        chi=scalars.chi,
        gamma=scalars.gamma,
        r_d=r_d_of(c, epsilon, tolerances),
        r_i_max=max(r_i_of(c, epsilon, tolerances)),
        mu=c.mu,
        gap_max=c.gap_max,
        ratio_mu=ratio_mu,
        ratio_gap=ratio_gap,
        status=status,
    )


def step(
    c: CongruenceClass,
    epsilon: Epsilon,
    *,
    k: int = 1,
    stop: Optional[StopCriterion] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> TrajectoryRecord:
    """Napoleonize ``c`` once in class space and record the canonicalized result.

    Ratios compare the new class with ``c`` on the labels of ``c``. The status is
    ``point_limit_reached`` when every new d_i is within ``stop.tol_point_limit`` of √3.

    Raises:
        Unrealizable: If ``c`` or its image has a negative radicand.
    """
    stop = stop or StopCriterion()
    c = c.canonical()
    shifts = napoleonize_shifted(c, NapoleonParams(epsilon=epsilon, tolerances=tolerances))
    e = CongruenceClass.from_shifts(shifts)
    ratio_mu = max(shifts) / c.mu if c.mu >= VACUOUS else None
    status = StepStatus.POINT_LIMIT_REACHED if at_point_limit(e, stop) else StepStatus.CONTINUE
    return observe(
        e,
        epsilon,
        k=k,
        ratio_mu=ratio_mu,
        ratio_gap=_gap_ratio(c.shifted, shifts),
        status=status,
        tolerances=tolerances,
    )


def _cross_check(
    c: CongruenceClass, record: TrajectoryRecord, epsilon: Epsilon, tolerances: Tolerances
) -> None:
    """Compare one class-space step with the point-space construction.

    Skipped near the point limit, where realizing the class loses the digits being compared.
    """
    if min(c.shifted) < CROSS_CHECK_FLOOR:
        return
    try:
        T = realize(c, tolerances)
    except DegenerateClass:
        return
    params = NapoleonParams(epsilon=epsilon, tolerances=tolerances)
    points = sorted(napoleonize(T, params).e_class.d)
    closed = sorted(record.congruence.d)
    gap = max(abs(a - b) for a, b in zip(points, closed))
    if gap > tolerances.consistency:
        logger.warning("class-space step drifted", extra={"k": record.k, "gap": gap})
        raise ConsistencyFailure(
            f"step {record.k} differs from the point construction by {gap:.3g}"
        )


def run(
    c0: CongruenceClass,
    epsilon: Epsilon,
    stop: Optional[StopCriterion] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> List[TrajectoryRecord]:
    """Iterate from ``c0`` until the point limit or ``stop.max_steps``.

    Every ``stop.verify_every`` steps the class-space step is replayed on points.

    Raises:
        Unrealizable: If an iterate leaves the realizable region.
        ConsistencyFailure: If a replayed step disagrees.
    """
    stop = stop or StopCriterion()
    first_status = (
        StepStatus.POINT_LIMIT_REACHED if at_point_limit(c0, stop) else StepStatus.CONTINUE
    )
    records = [observe(c0, epsilon, k=0, status=first_status, tolerances=tolerances)]
    if first_status is StepStatus.POINT_LIMIT_REACHED:
        return records

    c = records[0].congruence
    for k in range(1, stop.max_steps + 1):
        record = step(c, epsilon, k=k, stop=stop, tolerances=tolerances)
        if stop.verify_every and k % stop.verify_every == 0:
            _cross_check(c, record, epsilon, tolerances)
        logger.debug("step", extra={"k": k, "mu": record.mu, "gap": record.gap_max})
        records.append(record)
        if record.status is StepStatus.POINT_LIMIT_REACHED:
            break
        c = record.congruence
    else:
        records[-1] = records[-1].model_copy(update={"status": StepStatus.MAX_STEPS})

    logger.info(
        "trajectory finished",
        extra={"epsilon": epsilon, "steps": len(records) - 1, "status": records[-1].status.value},
    )
    return records


# ---- Contraction bounds ---- #


def _max_present(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return max(present) if present else None


def contraction_report(trajectory: Sequence[TrajectoryRecord]) -> ContractionReport:
    """Check every step of a trajectory against the contraction bounds of its sign.

    ε = +1: mu ratios at most 7/12. ε = −1: gap ratios at most ρ, the per-step estimate of
    e0² − 3, and d0² ≤ 25/3 after any step that starts with D0 − min D_j below 1. Steps whose
    denominator vanishes pass vacuously.

    Raises:
        InsufficientData: If fewer than two records are given.
    """
    if len(trajectory) < 2:
        raise InsufficientData(f"need at least 2 records, got {len(trajectory)}")
    epsilon = trajectory[0].epsilon
    steps = trajectory[1:]
    ratios_mu = [r.ratio_mu for r in steps]
    ratios_gap = [r.ratio_gap for r in steps]
    max_mu = _max_present(ratios_mu)
    max_gap = _max_present(ratios_gap)

    inner_mu_excess: Optional[float] = None
    ceiling_ok = True
    if epsilon == 1:
        vacuous = sum(1 for r in ratios_mu if r is None)
        passed = max_mu is None or max_mu <= MU_CONTRACTION + BOUND_SLACK
    else:
        vacuous = sum(1 for r in ratios_gap if r is None)
        excesses = []
        for prev, nxt in zip(trajectory, steps):
            excesses.append(nxt.mu - inner_mu_bound(prev.congruence))
            D0, D1, D2 = prev.congruence.squares
            narrow = D0 - min(D1, D2) < 1.0
            if narrow and nxt.congruence.squares[0] > BETA_CEILING + CEILING_SLACK:
                ceiling_ok = False
        inner_mu_excess = max(excesses)
        passed = (
            (max_gap is None or max_gap <= RHO + BOUND_SLACK)
            and inner_mu_excess <= BOUND_SLACK
            and ceiling_ok
        )

    return ContractionReport(
        epsilon=epsilon,
        steps=len(steps),
        terminal_status=trajectory[-1].status,
        ratios_mu=ratios_mu,
        ratios_gap=ratios_gap,
        max_ratio_mu=max_mu,
        max_ratio_gap=max_gap,
        last_ratio_mu=ratios_mu[-1],
        inner_mu_max_excess=inner_mu_excess,
        beta_ceiling_respected=ceiling_ok,
        vacuous_steps=vacuous,
        passed=passed,
    )
