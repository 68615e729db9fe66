from .lattice import (
    INFINITE,
    Lattice,
    coset_representatives,
    det_int,
    hnf,
    integer_kernel,
    saturation,
    snf,
    snf_diagonal,
    span_rank,
    subgroup_index,
    wedge_coordinates,
    xgcd,
)
from .numberfield import FieldElement, NumberField, as_fraction, field_sign, rational_coordinates

__all__ = [
    "INFINITE",
    "FieldElement",
    "Lattice",
    "NumberField",
    "as_fraction",
    "coset_representatives",
    "det_int",
    "field_sign",
    "hnf",
    "integer_kernel",
    "rational_coordinates",
    "saturation",
    "snf",
    "snf_diagonal",
    "span_rank",
    "subgroup_index",
    "wedge_coordinates",
    "xgcd",
]
