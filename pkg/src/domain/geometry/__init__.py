from src.domain.geometry.iteration import (
    contraction_report,
    inner_mu_bound,
    r_d_bound,
    r_d_of,
    r_i_of,
    run,
    step,
    vertex_bound,
)
from src.domain.geometry.minkowski_core import (
    apply_isometry,
    from_poincare_disk,
    hyperbolic_cross,
    minkowski_inner,
    poincare_disk,
    project_to_hyperboloid,
    random_isometry,
    random_point,
    triple_product,
)
from src.domain.geometry.napoleon import (
    apex,
    centroid_equilateral,
    certificate_defect,
    is_napoleonic,
    napoleonic_residual,
    napoleonize,
    napoleonize_class,
    napoleonize_shifted,
    theorem1_certificate,
)
from src.domain.geometry.triangle import (
    alpha_of,
    canonicalize,
    chi_of,
    chi_point,
    classify,
    congruence_of,
    radicand_of,
    radicand_rounding,
    random_triangle,
    realize,
)

__all__ = [
    "minkowski_inner",
    "hyperbolic_cross",
    "triple_product",
    "project_to_hyperboloid",
    "apply_isometry",
    "random_isometry",
    "random_point",
    "poincare_disk",
    "from_poincare_disk",
    "congruence_of",
    "alpha_of",
    "chi_of",
    "chi_point",
    "radicand_of",
    "radicand_rounding",
    "canonicalize",
    "realize",
    "classify",
    "random_triangle",
    "apex",
    "centroid_equilateral",
    "napoleonize",
    "napoleonize_class",
    "napoleonize_shifted",
    "napoleonic_residual",
    "is_napoleonic",
    "theorem1_certificate",
    "certificate_defect",
    "r_d_of",
    "r_i_of",
    "r_d_bound",
    "vertex_bound",
    "inner_mu_bound",
    "step",
    "run",
    "contraction_report",
]
