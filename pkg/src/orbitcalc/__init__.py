"""Equivariant classes of matrix orbit closures in products of projective spaces."""

from .algebra import (
    ChowClass,
    QuantumContext,
    QuantumElement,
    UniPoly,
    f_adic_digits,
    f_adic_expand,
    integrate_point,
    mod_F_power,
    reduce_class,
    reduce_mod_F,
    star,
)
from .classes import (
    InvariantError,
    class_from_duals,
    class_via_kernel,
    class_via_permutation_formula,
    graph_closure_class,
    monomial_duals,
    nonequivariant_class,
    nonequivariant_graph_closure,
    serpar_classes,
)
from .enumerative import (
    grassmannian_degree,
    line_section_class_closed_form,
    line_section_class_via_pipeline,
    tri_incident_report,
)
from .matroid import (
    GenericityError,
    Matroid,
    MatroidError,
    PathMatrix,
    QMatrix,
    RankDeficiencyError,
    matroid_from_matrix,
    partition,
    path_heights,
    schubert,
    uniform,
)
from .poly import AlgebraError, Poly, parse_poly
from .polytope import (
    Subdivision,
    brion_eval,
    flacets,
    indicator_residual,
    lattice_points,
    lattice_transform,
    regular_subdivision,
    shadow_subdivision,
)
from .quantum import MatroidExpr, kronecker_dual, mhbar, partition_expr, schubert_expr, uniform_expr

__all__ = [name for name in dir() if not name.startswith("_")]
