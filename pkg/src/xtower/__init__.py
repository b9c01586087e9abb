"""Exact extraspecial-group towers and their Weil representations."""

from .errors import XTowerError
from .extraspecial import (
    ExtraspecialElement,
    ExtraspecialGroup,
    IsoType,
    standard_isomorphism,
)
from .forms import (
    SesquiForm,
    TraceFormSpec,
    diagonalize,
    direct_sum,
    standard_form,
    symplectic_basis,
    tensor_product,
    trace_form,
)
from .gf import (
    GF,
    FieldAuto,
    FieldElement,
    FieldSpec,
    conway_polynomial,
    embed_integer,
    frobenius,
    gauss_sum,
    inverting_automorphism,
    primitive_root_of_unity,
    quadratic_character,
    trace,
)
from .isometry import (
    Isometry,
    OneMinusG,
    enumerate_group,
    gamma_form,
    image_kernel,
    is_isometry,
    radical,
    skew_hermitian_form,
    wall_form,
)
from .linalg import Mat
from .reps import (
    MatrixRep,
    RepForm,
    base_rep,
    invariant_form,
    rep_of_group,
    restrict_scalars,
    sum_with_contragredient,
    tensor_rep,
)
from .tower import (
    TowerElement,
    TowerGroup,
    TowerLevel,
    build_tower,
    derived_series,
    materialize,
    next_level,
    total_order_factors,
)
from .weil import (
    SplitCase,
    WeilExtension,
    WeilSetting,
    hyperbolic_setting,
    symplectic_setting,
    unitary_setting,
)

__all__ = [
    "XTowerError",
    "ExtraspecialElement",
    "ExtraspecialGroup",
    "IsoType",
    "standard_isomorphism",
    "SesquiForm",
    "TraceFormSpec",
    "diagonalize",
    "direct_sum",
    "standard_form",
    "symplectic_basis",
    "tensor_product",
    "trace_form",
    "GF",
    "FieldAuto",
    "FieldElement",
    "FieldSpec",
    "conway_polynomial",
    "embed_integer",
    "frobenius",
    "gauss_sum",
    "inverting_automorphism",
    "primitive_root_of_unity",
    "quadratic_character",
    "trace",
    "Isometry",
    "OneMinusG",
    "enumerate_group",
    "gamma_form",
    "image_kernel",
    "is_isometry",
    "radical",
    "skew_hermitian_form",
    "wall_form",
    "Mat",
    "MatrixRep",
    "RepForm",
    "base_rep",
    "invariant_form",
    "rep_of_group",
    "restrict_scalars",
    "sum_with_contragredient",
    "tensor_rep",
    "TowerElement",
    "TowerGroup",
    "TowerLevel",
    "build_tower",
    "derived_series",
    "materialize",
    "next_level",
    "total_order_factors",
    "SplitCase",
    "WeilExtension",
    "WeilSetting",
    "hyperbolic_setting",
    "symplectic_setting",
    "unitary_setting",
]
