from __future__ import annotations

import logging
import math
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.application.services.parallel import ordered_map
from src.domain.geometry.iteration import r_d_bound, r_d_of, r_i_of, vertex_bound
from src.domain.geometry.napoleon import napoleonic_residual, napoleonize, napoleonize_shifted
from src.domain.geometry.triangle import classify, congruence_of, random_triangle
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    MU_CONTRACTION,
    RHO,
    CongruenceClass,
    NapoleonParams,
    SweepReport,
    Tolerances,
    Triangle,
    TriangleKindTag,
)

logger = logging.getLogger(__name__)

SLACK = 1e-9
RESIDUAL_FLOOR = 1e-6


class SampleStats(BaseModel):
    """Statistics of one random triangle, for both signs."""

    model_config = ConfigDict(frozen=True)

    ratio_mu: float = 0.0
    vertex_excess: float = -math.inf
    r_i: float = 0.0
    r_d_excess: float = -math.inf
    abs_residual: float = math.inf
    napoleon_gap: float = math.inf
    closed_form_gap: float = 0.0
    recursion_defect: float = 0.0
    r_d_minus: float = math.inf
    order_preserved: bool = True


def _same_order(d: Sequence[float], e: Sequence[float]) -> bool:
    for a, b in ((0, 1), (1, 2), (2, 0)):
        if abs(d[a] - d[b]) > SLACK and (d[a] - d[b]) * (e[a] - e[b]) <= 0.0:
            return False
    return True


class SweepService:
    """Seeded random-class experiment over the acceptance statistics.

    Sample ``i`` draws from its own stream ``SeedSequence(seed).spawn(samples)[i]``, so the
    report is a function of (seed, samples, radius) only, whatever the number of worker processes.
    """

    def __init__(self, threads: int = 1, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
        self.threads = max(1, threads)
        self.tolerances = tolerances

    def measure(self, c: CongruenceClass, T: Optional[Triangle] = None) -> SampleStats:
        """
        Evaluate every per-class statistic on ``c``.

        Args:
            c: A realizable, non-cogeodesic class.
            T: Optional triangle of class ``c``; when given, the point-space Napoleonization
                is compared with the closed form.
        """
        d = c.d
        ratio_mu = 0.0
        vertex_excess = r_d_excess = -math.inf
        r_i = closed_gap = defect = 0.0
        abs_residual = napoleon_gap = r_d_minus = math.inf
        ordered = True
        kind = classify(c, tolerances=self.tolerances).tag
        non_equilateral = kind is not TriangleKindTag.EQUILATERAL

        for epsilon in (1, -1):
            params = NapoleonParams(epsilon=epsilon, tolerances=self.tolerances)
            shifts = napoleonize_shifted(c, params)
            e = CongruenceClass.from_shifts(shifts)
            rd = r_d_of(c, epsilon, self.tolerances)

            r_i = max(r_i, *r_i_of(c, epsilon, self.tolerances))
            r_d_excess = max(r_d_excess, abs(rd) - r_d_bound(c))
            for i in range(3):
                j, k = (i + 1) % 3, (i + 2) % 3
                defect = max(defect, abs((shifts[k] - shifts[j]) - rd * (d[k] - d[j])))
            if non_equilateral:
                abs_residual = min(abs_residual, abs(napoleonic_residual(c, params)))
                napoleon_gap = min(napoleon_gap, e.gap_max)
            if T is not None:
                points = sorted(napoleonize(T, params).e_class.d)
                closed_gap = max(
                    closed_gap, max(abs(a - b) for a, b in zip(points, sorted(e.d)))
                )

            if epsilon == 1:
                if c.mu >= 1e-12:
                    ratio_mu = max(shifts) / c.mu
                bounds = vertex_bound(c)
                vertex_excess = max(shifts[i] - bounds[i] for i in range(3))
            else:
                r_d_minus = rd
                ordered = _same_order(d, e.d)

        return SampleStats(
            ratio_mu=ratio_mu,
            vertex_excess=vertex_excess,
            r_i=r_i,
            r_d_excess=r_d_excess,
            abs_residual=abs_residual,
            napoleon_gap=napoleon_gap,
            closed_form_gap=closed_gap,
            recursion_defect=defect,
            r_d_minus=r_d_minus,
            order_preserved=ordered,
        )

    def _sample(self, seed_seq: np.random.SeedSequence, radius: float) -> SampleStats:
        rng = np.random.default_rng(seed_seq)
        while True:
            T = random_triangle(rng, radius, self.tolerances)
            c = congruence_of(T)
            if classify(c, tolerances=self.tolerances).tag is not TriangleKindTag.COGEODESIC:
                return self.measure(c, T)

    def sweep(self, seed: int, samples: int, radius: float) -> SweepReport:
        """
        Draw ``samples`` random triangles and check the contraction and non-existence bounds.

        Returns:
            SweepReport: worst values of each statistic and a list of violated bounds.
        """
        streams = np.random.SeedSequence(seed).spawn(samples)
        stats: List[SampleStats] = ordered_map(
            partial(self._sample, radius=radius), streams, self.threads
        )

        report = SweepReport(
            seed=seed,
            samples=samples,
            radius=radius,
            max_ratio_mu=max(s.ratio_mu for s in stats),
            max_vertex_excess=max(s.vertex_excess for s in stats),
            max_r_i=max(s.r_i for s in stats),
            max_r_d_excess=max(s.r_d_excess for s in stats),
            min_abs_residual=min(s.abs_residual for s in stats),
            min_napoleon_gap=min(s.napoleon_gap for s in stats),
            max_closed_form_gap=max(s.closed_form_gap for s in stats),
            max_recursion_defect=max(s.recursion_defect for s in stats),
            min_r_d_minus=min(s.r_d_minus for s in stats),
            order_preserved=all(s.order_preserved for s in stats),
            violations=self._violations(stats),
        )
        logger.info(
            "random sweep finished",
            extra={"seed": seed, "samples": samples, "violations": len(report.violations)},
        )
        return report

    @staticmethod
    def _violations(stats: List[SampleStats]) -> List[str]:
        out = []
        worst = max(s.ratio_mu for s in stats)
        if worst > MU_CONTRACTION + SLACK:
            out.append(f"mu ratio {worst:.12g} exceeds 7/12")
        worst = max(s.vertex_excess for s in stats)
        if worst > SLACK:
            out.append(f"vertex estimate exceeded by {worst:.3g}")
        worst = max(s.r_i for s in stats)
        if worst > RHO + SLACK:
            out.append(f"r_i {worst:.12g} exceeds rho")
        worst = max(s.r_d_excess for s in stats)
        if worst > SLACK:
            out.append(f"|r_d| estimate exceeded by {worst:.3g}")
        least = min(s.abs_residual for s in stats)
        if least <= RESIDUAL_FLOOR:
            out.append(f"napoleonic residual {least:.3g} at a non-equilateral class")
        least = min(s.napoleon_gap for s in stats)
        if least <= 0.0:
            out.append("equilateral Napoleonization of a non-equilateral class")
        worst = max(s.closed_form_gap for s in stats)
        if worst > SLACK:
            out.append(f"closed form differs from the point construction by {worst:.3g}")
        worst = max(s.recursion_defect for s in stats)
        if worst > SLACK:
            out.append(f"gap recursion defect {worst:.3g}")
        least = min(s.r_d_minus for s in stats)
        if least <= 0.0:
            out.append(f"r_d = {least:.3g} is not positive for epsilon = -1")
        if not all(s.order_preserved for s in stats):
            out.append("epsilon = -1 changed the order of the sides")
        return out
