"""Exact-arithmetic resolution of singularities over Q at desk scale."""

from .poly import INF, ParseError, Polynomial, parse_polynomial
from .groebner import (
    BudgetExceeded,
    Ideal,
    ideal_is_unit,
    jacobian_unit_check,
    radical_membership,
    reduced_groebner_basis,
    variable_valuation,
)
from .marked import (
    BoundaryEntry,
    BoundarySet,
    Divisor,
    MarkedIdeal,
    NoTangentDirection,
    ResolutionError,
    coefficient_ideal,
    companion_ideal,
    derivative_ideal,
    homogenized_ideal,
    iterated_derivative,
    marked_product,
    marked_sum,
    max_order,
    max_order_on_locus,
    monomial_decomposition,
    restrict_to_hypersurface,
    select_tangent_direction,
    support_is_empty,
    tangent_directions,
)
from .blowup import (
    Center,
    CenterNotInSupport,
    Chart,
    TransformKind,
    blow_up_center,
    normalize_tangent_direction,
    transform_boundary,
    transform_ideal,
)
from .invariant import (
    InvVector,
    ResolutionKey,
    Rho,
    compare_key,
    compute_rho_nu_monomial,
)
from .resolver import (
    CenterNotMonomializable,
    Config,
    ResolutionNode,
    ResolutionTree,
    embedded_desingularize,
    principalize,
    resolve_marked_ideal,
    stop_marker,
    total_transform_at,
    verify_leaf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
