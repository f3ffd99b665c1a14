"""Exact symbolic toolkit for rational sphere maps.

Constructs sphere maps and their reflection matrices, classifies finite and
holomorphic degeneracy, computes X-variety fibers, and solves for spaces of
infinitesimal deformations, all over the exact field of rationals extended
by square roots.
"""

from .scalars import (
    ComplexRadical,
    RadicalReal,
    Rational,
    RadicandOverflowError,
    sign_of,
)
from .polys import (
    BiPoly,
    PolyMatrix,
    homogenize_on_sphere,
    norm_squared_poly,
    on_unit_sphere,
    point_from_parameters,
    rational_point,
    sphere_points,
    vanishes_on_sphere,
)
from .maps import (
    K,
    SphereMap,
    SubspaceSelector,
    apply_unitary,
    family_map,
    group_invariant_map,
    homogeneous_map,
    juxtapose,
    juxtaposition_witness,
    monomial_map,
    multiindices,
    tensor_map,
    validate_sphere_map,
    zero_pad,
)
from .reflection import (
    ReflectionMatrix,
    build_reflection,
    holomorphic_extension_on_sphere,
    map_identities,
    transpose_conjugate_apply,
    verify_fundamental_identity,
)
from .degeneracy import (
    CertificationError,
    Classification,
    DegeneracyReport,
    StratificationReport,
    VectorField,
    classify_map,
    cr_basis_bar,
    cr_field,
    cr_field_bar,
    degeneracy_witness,
    generic_rank,
    jet_degeneracy,
    kernel_at_point,
    lie_bracket,
    s_field,
    s_field_2d,
    stratify,
    t_field,
    x_classify,
    x_fiber,
)
from .deformations import (
    AutBasis,
    DeformationBasis,
    aut_basis,
    dim_formula,
    family_derivative,
    hom_deformation_basis,
    in_hol,
    is_infinitesimally_rigid,
    is_trivial_deformation,
    push_through_reflection,
    real_coords,
    solve_hol,
    tensor_deformation,
)
from .catalog import default_catalog, resolve

__version__ = "0.1.0"
