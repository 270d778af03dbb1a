from __future__ import annotations

import logging
import math
from functools import partial
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from src.application.services.parallel import ordered_map
from src.domain.exceptions import Unrealizable
from src.domain.geometry.napoleon import certificate_values
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    CertificateReport,
    CertificateViolation,
    CongruenceClass,
    Tolerances,
    Triple,
)

logger = logging.getLogger(__name__)

POSITIVITY_GAP = 0.01


class _RowResult(BaseModel):
    """Partial result of one wedge row d0 = grid[j0]."""

    model_config = ConfigDict(frozen=True)

    cells: int = 0
    realizable: int = 0
    max_defect: float = 0.0
    min_rhs: Optional[float] = None
    min_rhs_cell: Optional[Triple] = None
    violations: List[CertificateViolation] = []


def grid_values(grid_min: float, grid_max: float, grid_step: float) -> List[float]:
    """Points grid_min + j·grid_step up to grid_max, inclusive up to rounding."""
    n = int(math.floor((grid_max - grid_min) / grid_step + 1e-9)) + 1
    return [grid_min + j * grid_step for j in range(n)]


class CertificationService:
    """Sweeps the non-existence certificate over the wedge d0 ≥ d1 ≥ d2 of a grid.

    Rows of the wedge are independent and run on ``threads`` worker processes; results are
    merged in row order, so the report does not depend on the worker count.
    """

    def __init__(self, threads: int = 1, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
        self.threads = max(1, threads)
        self.tolerances = tolerances

    def _row(self, values: Sequence[float], j0: int) -> _RowResult:
        cells = realizable = 0
        max_defect = 0.0
        min_rhs: Optional[float] = None
        min_cell: Optional[Triple] = None
        violations: List[CertificateViolation] = []
        for j1 in range(j0 + 1):
            for j2 in range(j1 + 1):
                cells += 1
                c = CongruenceClass.from_values((values[j0], values[j1], values[j2]))
                try:
                    lhs, rhs, defect = certificate_values(c, self.tolerances)
                except Unrealizable:
                    continue
                realizable += 1
                max_defect = max(max_defect, defect)
                if defect > self.tolerances.consistency:
                    violations.append(
                        CertificateViolation(cell=c.d, kind="identity", lhs=lhs, rhs=rhs)
                    )
                if c.gap_max <= self.tolerances.classification:
                    continue
                if min_rhs is None or rhs < min_rhs:
                    min_rhs, min_cell = rhs, c.d
                if rhs <= 0.0 and c.gap_max >= POSITIVITY_GAP:
                    violations.append(
                        CertificateViolation(cell=c.d, kind="positivity", lhs=lhs, rhs=rhs)
                    )
        return _RowResult(
            cells=cells,
            realizable=realizable,
            max_defect=max_defect,
            min_rhs=min_rhs,
            min_rhs_cell=min_cell,
            violations=violations,
        )

    def certify(self, grid_min: float, grid_max: float, grid_step: float) -> CertificateReport:
        """
        Evaluate the certificate on every realizable wedge cell.

        A cell violates the identity when the exact relative defect exceeds the consistency
        tolerance, and violates positivity when rhs ≤ 0 with a side gap of at least 0.01.

        Returns:
            CertificateReport: cell counts, the worst defect, the smallest rhs away from the
            equilateral diagonal and every violation found.
        """
        values = grid_values(grid_min, grid_max, grid_step)
        rows = ordered_map(partial(self._row, values), range(len(values)), self.threads)

        min_rhs: Optional[float] = None
        min_cell: Optional[Triple] = None
        for row in rows:
            if row.min_rhs is not None and (min_rhs is None or row.min_rhs < min_rhs):
                min_rhs, min_cell = row.min_rhs, row.min_rhs_cell

        report = CertificateReport(
            grid_min=grid_min,
            grid_max=grid_max,
            grid_step=grid_step,
            cells=sum(r.cells for r in rows),
            realizable_cells=sum(r.realizable for r in rows),
            max_relative_defect=max((r.max_defect for r in rows), default=0.0),
            min_rhs_non_equilateral=min_rhs,
            min_rhs_cell=min_cell,
            violations=[v for r in rows for v in r.violations],
        )
        logger.info(
            "certificate sweep finished",
            extra={
                "cells": report.cells,
                "realizable": report.realizable_cells,
                "violations": len(report.violations),
            },
        )
        return report


def wedge_size(n: int) -> int:
    """Number of cells j0 ≥ j1 ≥ j2 on an n-point axis."""
    return n * (n + 1) * (n + 2) // 6
