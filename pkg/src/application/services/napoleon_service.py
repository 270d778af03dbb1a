from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.domain.exceptions import CogeodesicClass
from src.domain.geometry.iteration import contraction_report, run
from src.domain.geometry.minkowski_core import poincare_disk
from src.domain.geometry.napoleon import (
    is_napoleonic,
    napoleonic_residual,
    napoleonize,
    napoleonize_class,
)
from src.domain.geometry.triangle import (
    classify,
    congruence_of,
    derived_scalars,
    random_triangle,
    realize,
    side_lengths,
)
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    CongruenceClass,
    ContractionReport,
    DiskPoint,
    Epsilon,
    NapoleonParams,
    StopCriterion,
    Tolerances,
    TrajectoryRecord,
    Triangle,
    TrianglePayload,
)

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = (
    "k",
    "d0",
    "d1",
    "d2",
    "alpha",
    "chi",
    "r_d",
    "mu",
    "gap_max",
    "ratio_mu",
    "ratio_gap",
)
PROJECTION_HEADER = ("label", "u", "v")


class NapoleonService:
    """Use cases around a single class or triangle: describe, realize, iterate, project.

    Every method is a pure function of its arguments and the tolerances given at
    construction, so results are reproducible from the CLI flags alone.

    Attributes:
      tolerances: Numeric tolerances forwarded to the geometric core.
    """

    def __init__(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
        self.tolerances = tolerances

    def _params(self, epsilon: Epsilon) -> NapoleonParams:
        return NapoleonParams(epsilon=epsilon, tolerances=self.tolerances)

    # -----------------------------
    # Description
    # -----------------------------
    def describe_class(
        self, c: CongruenceClass, epsilon: Epsilon, tol_class: Optional[float] = None
    ) -> Dict[str, Any]:
        """Napoleonize a class in closed form and report its shape data.

        Args:
          c: Input class, labels kept in the e-class.
          epsilon: Orientation of the flanks.
          tol_class: Override of the classification tolerance.

        Returns:
          dict: input class, kind, α/χ/γ, side lengths, e-class and its kind, residuals for
          both signs and whether the class is napoleonic (``None`` when cogeodesic).
        """
        scalars = derived_scalars(c, self.tolerances)
        e = napoleonize_class(c, self._params(epsilon))
        try:
            napoleonic: Optional[bool] = is_napoleonic(c, self._params(epsilon))
        except CogeodesicClass:
            napoleonic = None
        return {
            "d": c.d,
            "kind": classify(c, tol_class, self.tolerances).tag,
            "alpha": scalars.alpha,
            "chi": scalars.chi,
            "gamma": scalars.gamma,
            "side_lengths": side_lengths(c),
            "epsilon": epsilon,
            "e_class": e.d,
            "e_kind": classify(e, tol_class, self.tolerances).tag,
            "residual": {
                "+1": napoleonic_residual(c, self._params(1)),
                "-1": napoleonic_residual(c, self._params(-1)),
            },
            "napoleonic": napoleonic,
        }

    def describe_triangle(
        self, T: Triangle, epsilon: Epsilon, tol_class: Optional[float] = None
    ) -> Dict[str, Any]:
        """Point-space Napoleonization of ``T`` plus the class description of its input."""
        result = napoleonize(T, self._params(epsilon))
        payload = self.describe_class(congruence_of(result.triangle), epsilon, tol_class)
        payload["triangle"] = TrianglePayload.of(result.triangle)["vertices"]
        payload["apexes"] = [list(q.coords) for q in result.apexes]
        payload["centroids"] = [list(r.coords) for r in result.centroids]
        payload["e_class"] = result.e_class.d
        payload["residual_value"] = result.residual_value
        return payload

    # -----------------------------
    # Construction
    # -----------------------------
    def realize(self, c: CongruenceClass) -> Dict[str, Any]:
        T = realize(c, self.tolerances)
        return {"d": c.d, **TrianglePayload.of(T)}

    def sample(self, seed: int, radius: float) -> Triangle:
        """Seeded random triangle within ``radius`` of the base point."""
        return random_triangle(np.random.default_rng(seed), radius, self.tolerances)

    def random_class(self, seed: int, radius: float) -> CongruenceClass:
        return congruence_of(self.sample(seed, radius))

    # -----------------------------
    # Iteration
    # -----------------------------
    def iterate(
        self, c0: CongruenceClass, epsilon: Epsilon, stop: StopCriterion
    ) -> Tuple[List[TrajectoryRecord], Optional[ContractionReport]]:
        """Run the class-space trajectory; the report needs at least one step."""
        records = run(c0, epsilon, stop, self.tolerances)
        report = contraction_report(records) if len(records) >= 2 else None
        if report is not None and not report.passed:
            logger.warning(
                "trajectory violates its contraction bound",
                extra={"epsilon": epsilon, "steps": report.steps},
            )
        return records, report

    @staticmethod
    def trajectory_rows(records: List[TrajectoryRecord]) -> List[List[Any]]:
        return [
            [
                r.k,
                *r.congruence.d,
                r.alpha,
                r.chi,
                r.r_d,
                r.mu,
                r.gap_max,
                r.ratio_mu,
                r.ratio_gap,
            ]
            for r in records
        ]

    # -----------------------------
    # Projection
    # -----------------------------
    def project(self, T: Triangle, epsilon: Epsilon) -> List[DiskPoint]:
        """Poincaré-disk images of the canonical triangle, its apexes and its centroids."""
        result = napoleonize(T, self._params(epsilon))
        groups = (
            ("P", result.triangle.vertices),
            ("Q", result.apexes),
            ("R", result.centroids),
        )
        return [
            poincare_disk(point, f"{prefix}{i}")
            for prefix, points in groups
            for i, point in enumerate(points)
        ]
