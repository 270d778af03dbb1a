from __future__ import annotations

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from src.domain.exceptions import (
    DegenerateTriangle,
    InvalidIsometry,
    NotOnHyperboloid,
    Unrealizable,
)

# ------------------- #
# ---- Constants ---- #
# ------------------- #

SQRT3 = math.sqrt(3.0)
RHO = 2.0 / 3.0 + 2.0 / 27.0 + 1.0 / (3.0 * SQRT3)
MU_CONTRACTION = 7.0 / 12.0
BETA_CEILING = 25.0 / 3.0
SHIFT_THRESHOLD = 1e-4

Epsilon = Literal[1, -1]
Triple = Tuple[float, float, float]


def _context(info: ValidationInfo, key: str, default: float) -> float:
    ctx = info.context or {}
    return float(ctx.get(key, default))


class ValueModel(BaseModel):
    """Immutable value with finite float fields."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)


# --------------------- #
# ---- Tolerances ---- #
# --------------------- #


class Tolerances(ValueModel):
    """Numeric tolerances shared by the geometric operations."""

    point: float = Field(default=1e-12, gt=0)
    projection: float = Field(default=1e-14, gt=0)
    distinct: float = Field(default=1e-12, gt=0)
    realizable: float = Field(default=1e-9, gt=0)
    strict: float = Field(default=1e-9, gt=0)
    classification: float = Field(default=1e-9, gt=0)
    consistency: float = Field(default=1e-9, gt=0)
    isometry: float = Field(default=1e-10, gt=0)


DEFAULT_TOLERANCES = Tolerances()


# ---------------------------- #
# ---- Minkowski geometry ---- #
# ---------------------------- #


class MVec(ValueModel):
    """A vector of Minkowski space with signature (-, +, +) on (x0, x1, x2)."""

    x0: float
    x1: float
    x2: float

    @property
    def coords(self) -> Triple:
        return (self.x0, self.x1, self.x2)

    def minkowski(self, other: "MVec") -> float:
        """The bilinear form -x0*y0 + x1*y1 + x2*y2."""
        return -self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2

    @classmethod
    def from_coords(cls, coords: Sequence[float]) -> "MVec":
        x0, x1, x2 = (float(x) for x in coords)
        return cls(x0=x0, x1=x1, x2=x2)


class HPoint(ValueModel):
    """A point on the upper sheet of the unit hyperboloid.

    The residual of ⟨v,v⟩ = -1 is compared with ``tol_point * max(1, x0**2)``: the form is a
    difference of squares of that size. The tolerance can be passed through the validation
    context under ``"tol_point"``.
    """

    v: MVec

    @model_validator(mode="after")
    def _on_upper_sheet(self, info: ValidationInfo) -> "HPoint":
        tol = _context(info, "tol_point", DEFAULT_TOLERANCES.point)
        x0 = self.v.x0
        norm = self.v.minkowski(self.v)
        if abs(norm + 1.0) > tol * max(1.0, x0 * x0):
            raise NotOnHyperboloid(f"<v,v> = {norm!r}, expected -1 for {self.v.coords}")
        if x0 < 1.0 - tol:
            raise NotOnHyperboloid(f"x0 = {x0!r} is below the upper sheet")
        return self

    @property
    def coords(self) -> Triple:
        return self.v.coords

    @classmethod
    def from_coords(cls, coords: Sequence[float], *, tol: Optional[float] = None) -> "HPoint":
        x0, x1, x2 = (float(x) for x in coords)
        context = None if tol is None else {"tol_point": tol}
        return cls.model_validate({"v": {"x0": x0, "x1": x1, "x2": x2}}, context=context)


class LorentzMap(ValueModel):
    """An orthochronous Lorentz transformation (mᵀJm = J, m00 ≥ 1)."""

    m: Tuple[Triple, Triple, Triple]

    @model_validator(mode="after")
    def _preserves_form(self, info: ValidationInfo) -> "LorentzMap":
        tol = _context(info, "tol_isometry", DEFAULT_TOLERANCES.isometry)
        defect = self.form_defect()
        if defect > tol:
            raise InvalidIsometry(f"m^T J m differs from J by {defect:.3g}")
        if self.m[0][0] < 1.0 - tol:
            raise InvalidIsometry(f"m00 = {self.m[0][0]!r} reverses time orientation")
        return self

    def form_defect(self) -> float:
        """Largest entry of |mᵀJm − J|, relative to the squared size of m."""
        sign = (-1.0, 1.0, 1.0)
        worst = 0.0
        for a in range(3):
            for b in range(3):
                g = sum(sign[k] * self.m[k][a] * self.m[k][b] for k in range(3))
                worst = max(worst, abs(g - (sign[a] if a == b else 0.0)))
        scale = max(1.0, max(abs(x) for row in self.m for x in row) ** 2)
        return worst / scale

    def __matmul__(self, other: "LorentzMap") -> "LorentzMap":
        rows = tuple(
            tuple(sum(self.m[i][k] * other.m[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        return LorentzMap(m=rows)


class DiskPoint(ValueModel):
    """Poincaré-disk coordinates of a hyperboloid point."""

    label: str = ""
    u: float
    v: float

    @model_validator(mode="after")
    def _inside_disk(self) -> "DiskPoint":
        if self.u * self.u + self.v * self.v >= 1.0:
            raise ValueError(f"({self.u}, {self.v}) is not inside the unit disk")
        return self


# ------------------------------ #
# ---- Triangles & classes ---- #
# ------------------------------ #


class Triangle(ValueModel):
    """An ordered triple of distinct hyperboloid points."""

    P0: HPoint
    P1: HPoint
    P2: HPoint

    @model_validator(mode="after")
    def _distinct(self, info: ValidationInfo) -> "Triangle":
        tol = _context(info, "tol_distinct", DEFAULT_TOLERANCES.distinct)
        pts = self.vertices
        for i in range(3):
            c = pts[(i + 1) % 3].v.minkowski(pts[(i + 2) % 3].v)
            if c >= -1.0 - tol:
                raise DegenerateTriangle(
                    f"vertices {(i + 1) % 3} and {(i + 2) % 3} coincide (<P,Q> = {c!r})"
                )
        return self

    @property
    def vertices(self) -> Tuple[HPoint, HPoint, HPoint]:
        return (self.P0, self.P1, self.P2)

    def relabel(self, order: Sequence[int]) -> "Triangle":
        """Return the triangle with vertices taken in ``order``."""
        pts = self.vertices
        a, b, c = (pts[i] for i in order)
        return Triangle(P0=a, P1=b, P2=c)

    @classmethod
    def from_points(cls, points: Sequence[HPoint], *, tol: Optional[float] = None) -> "Triangle":
        a, b, c = points
        context = None if tol is None else {"tol_distinct": tol}
        return cls.model_validate({"P0": a, "P1": b, "P2": c}, context=context)


class CongruenceClass(ValueModel):
    """The coordinates d_i = √(1 − 2⟨P_{i+1},P_{i+2}⟩) of a triangle up to isometry.

    Every d_i must be at least √3 (up to ``tol_point`` from the validation context);
    realizability is a separate question answered by ``triangle.chi_of``.
    """

    d0: float
    d1: float
    d2: float

    @model_validator(mode="after")
    def _above_point_limit(self, info: ValidationInfo) -> "CongruenceClass":
        tol = _context(info, "tol_point", DEFAULT_TOLERANCES.point)
        for i, x in enumerate(self.d):
            if x < SQRT3 - tol:
                raise Unrealizable(f"d{i} = {x!r} is below sqrt(3)")
        return self

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "CongruenceClass":
        d0, d1, d2 = (float(x) for x in values)
        return cls(d0=d0, d1=d1, d2=d2)

    @classmethod
    def from_shifts(cls, shifts: Sequence[float]) -> "CongruenceClass":
        """Build a class from s_i = d_i² − 3."""
        return cls.from_values([math.sqrt(3.0 + s) for s in shifts])

    @property
    def d(self) -> Triple:
        return (self.d0, self.d1, self.d2)

    @property
    def squares(self) -> Triple:
        return (self.d0 * self.d0, self.d1 * self.d1, self.d2 * self.d2)

    @property
    def shifted(self) -> Triple:
        """s_i = d_i² − 3, factored to stay accurate at the point limit."""
        a, b, c = ((x - SQRT3) * (x + SQRT3) for x in self.d)
        return (a, b, c)

    @property
    def mu(self) -> float:
        return max(self.shifted)

    @property
    def gap_max(self) -> float:
        d = self.d
        return max(abs(d[0] - d[1]), abs(d[1] - d[2]), abs(d[2] - d[0]))

    def rotated(self, k: int) -> "CongruenceClass":
        """Class of the triangle relabelled (P_k, P_{k+1}, P_{k+2})."""
        d = self.d
        k %= 3
        return CongruenceClass.from_values(d[k:] + d[:k])

    def canonical(self) -> "CongruenceClass":
        """Cyclic rotation with d0 maximal; ties keep the smallest rotation index."""
        d = self.d
        k = d.index(max(d))
        return self if k == 0 else self.rotated(k)


class DerivedScalars(ValueModel):
    """α, χ and γ of a congruence class."""

    alpha: float
    chi: float = Field(ge=0.0)
    gamma: float = Field(gt=0.0)


class TriangleKindTag(str, Enum):
    EQUILATERAL = "equilateral"
    ISOSCELES = "isosceles"
    COGEODESIC = "cogeodesic"
    GENERIC = "generic"


class TriangleKind(ValueModel):
    """Shape tag of a class together with the tolerance that produced it."""

    tag: TriangleKindTag
    tolerance: float


# ------------------ #
# ---- Napoleon ---- #
# ------------------ #


class NapoleonParams(ValueModel):
    """Orientation sign shared by the three flank triangles, plus tolerances."""

    epsilon: Epsilon
    tolerances: Tolerances = DEFAULT_TOLERANCES


class NapoleonResult(ValueModel):
    """Point-space Napoleonization of a canonical triangle."""

    triangle: Triangle
    epsilon: Epsilon
    Q0: HPoint
    Q1: HPoint
    Q2: HPoint
    R0: HPoint
    R1: HPoint
    R2: HPoint
    e_class: CongruenceClass
    residual_value: float

    @property
    def apexes(self) -> Tuple[HPoint, HPoint, HPoint]:
        return (self.Q0, self.Q1, self.Q2)

    @property
    def centroids(self) -> Tuple[HPoint, HPoint, HPoint]:
        return (self.R0, self.R1, self.R2)


# ------------------- #
# ---- Iteration ---- #
# ------------------- #


class StepStatus(str, Enum):
    CONTINUE = "continue"
    POINT_LIMIT_REACHED = "point_limit_reached"
    MAX_STEPS = "max_steps"


class StopCriterion(ValueModel):
    """When an iterated Napoleonization run ends.

    ``verify_every`` is the period of the point-space cross-check (0 disables it).
    """

    max_steps: int = Field(default=10_000, ge=1)
    tol_point_limit: float = Field(default=1e-6, gt=0)
    verify_every: int = Field(default=10, ge=0)


class TrajectoryRecord(ValueModel):
    """One step of an iterated Napoleonization run."""

    k: int = Field(ge=0)
    epsilon: Epsilon
    congruence: CongruenceClass
    alpha: float
    chi: float = Field(ge=0.0)
    gamma: float = Field(gt=0.0)
    r_d: float
    r_i_max: float = Field(ge=0.0)
    mu: float = Field(ge=-1e-12)
    gap_max: float = Field(ge=0.0)
    ratio_mu: Optional[float] = None
    ratio_gap: Optional[float] = None
    status: StepStatus = StepStatus.CONTINUE


class ContractionReport(ValueModel):
    """Per-step contraction ratios of a trajectory checked against the proven bounds."""

    epsilon: Epsilon
    steps: int
    terminal_status: StepStatus
    ratios_mu: List[Optional[float]]
    ratios_gap: List[Optional[float]]
    max_ratio_mu: Optional[float]
    max_ratio_gap: Optional[float]
    last_ratio_mu: Optional[float]
    bound_mu: float = MU_CONTRACTION
    bound_gap: float = RHO
    inner_mu_max_excess: Optional[float] = None
    beta_ceiling_respected: bool = True
    vacuous_steps: int = 0
    passed: bool


# --------------------------------------- #
# ---- Certification & sweep reports ---- #
# --------------------------------------- #


class CertificateViolation(ValueModel):
    cell: Triple
    kind: Literal["identity", "positivity"]
    lhs: float
    rhs: float


class CertificateReport(ValueModel):
    """Summary of a grid sweep of the non-existence certificate."""

    grid_min: float
    grid_max: float
    grid_step: float
    cells: int
    realizable_cells: int
    max_relative_defect: float
    min_rhs_non_equilateral: Optional[float] = None
    min_rhs_cell: Optional[Triple] = None
    violations: List[CertificateViolation] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class SweepReport(ValueModel):
    """Statistics of a seeded random-class experiment."""

    seed: int
    samples: int
    radius: float
    max_ratio_mu: float
    max_vertex_excess: float
    max_r_i: float
    max_r_d_excess: float
    min_abs_residual: float
    min_napoleon_gap: float
    max_closed_form_gap: float
    max_recursion_defect: float
    min_r_d_minus: float
    order_preserved: bool
    violations: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


# ---------------------------- #
# ---- I/O & run settings ---- #
# ---------------------------- #


class ClassPayload(BaseModel):
    """JSON form of a congruence class: ``{"d": [d0, d1, d2]}``."""

    model_config = ConfigDict(allow_inf_nan=False)

    d: Triple

    def to_class(self) -> CongruenceClass:
        return CongruenceClass.from_values(self.d)


class TrianglePayload(BaseModel):
    """JSON form of a triangle: ``{"vertices": [[x0, x1, x2], ...]}``, time coordinate first."""

    model_config = ConfigDict(allow_inf_nan=False)

    vertices: Tuple[Triple, Triple, Triple]

    def to_triangle(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Triangle:
        points = [HPoint.from_coords(v, tol=tolerances.point) for v in self.vertices]
        return Triangle.from_points(points, tol=tolerances.distinct)

    @staticmethod
    def of(triangle: Triangle) -> Dict[str, Any]:
        return {"vertices": [list(p.coords) for p in triangle.vertices]}


Command = Literal["napoleonize", "realize", "sample", "iterate", "certify", "sweep", "project"]


class RunConfig(BaseModel):
    """Validated settings of one CLI invocation."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    command: Command
    epsilon: Epsilon = 1
    steps: int = Field(default=10_000, ge=1)
    tol: Optional[float] = Field(default=None, gt=0)
    tolerances: Tolerances = DEFAULT_TOLERANCES
    grid_min: float = SQRT3 + 0.01
    grid_max: float = 6.0
    grid_step: float = Field(default=0.05, gt=0)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    samples: int = Field(default=1000, ge=1)
    radius: float = Field(default=2.2, gt=0)
    output_format: Optional[Literal["json", "csv"]] = None
    out: Optional[str] = None

    @model_validator(mode="after")
    def _grid_bounds(self) -> "RunConfig":
        if self.grid_min < SQRT3:
            raise ValueError(f"grid minimum {self.grid_min} is below sqrt(3)")
        if self.grid_max < self.grid_min:
            raise ValueError(f"grid maximum {self.grid_max} is below the minimum {self.grid_min}")
        return self
