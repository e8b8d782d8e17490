"""Census engine for finite semifields of order p^d and their planes.

The package enumerates every coordinatizing matrix tuple of a semifield
of order p^d (reference target: 81 = 3^4), classifies the results up to
isomorphism, isotopy and the action of the symmetric group on the three
cube indices, and reproduces the published census tables.  Hot kernels
run in a compiled extension when available, with a pure-Python fallback
selected at import (see semifields.kernels.BACKEND).
"""

from .gf import (
    FieldSpec,
    MatrixCode,
    MatrixGF,
    PolyGF,
    VectorGF,
    char_poly,
    companion_matrix,
    decode_matrix,
    encode_matrix,
    is_primitive_poly,
    mat_inv,
    mat_is_invertible,
    mat_mul,
    mat_rank,
    mat_vec,
    primitive_polys,
)
from .algebra import (
    IsotopyTriple,
    StandardSet,
    ThreeCube,
    basis_change,
    cube_from_set,
    isotopy_apply,
    multiply,
    predicates,
    principal_isotope,
    set_from_cube,
    sigma_transform,
    unitalize,
    validate_standard_set,
)
from .classify import (
    CanonicalKey,
    Census,
    IsoClassRecord,
    PlaneClassRecord,
    at_order,
    aut_order,
    canonical_key,
    cyclic_representations,
    isomorphism_classes,
    isotope_inventory,
    isotopy_classes,
    right_power_basis,
    s3_classes,
    s3_orbit_structure,
)
from .search import SearchConfig, complete_search, search_all, valid_columns
from .kernels import BACKEND

__version__ = "0.1.0"
