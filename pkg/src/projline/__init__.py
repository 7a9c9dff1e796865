"""Projective lines over finite fields as groupoids with projection structure."""

from .coordinate import (
    CoordMorphism, ProjPoint, compose_coord, cross_ratio_coord, det2, enumerate_points,
    generate_groupoid, label_of_map, proj_scalar,
)
from .coordinatizer import (
    PhiGroup, Projectivity, build_projectivity, coordinatize, extract_phi_group,
    reconstruct_field, verify_projectivity,
)
from .fields import (
    FieldTable, field_iso_check, make_prime_field, read_field, validate_field, write_field,
)
from .groupoid import (
    Morphism, ProjGroupoid, abstract_scalar_of, check_axioms, read_groupoid, validate_structure,
    write_groupoid,
)
from .rapport import (
    cross_ratio, derive_phi, find_unit_reference, harmonic_conjugate, minus_one,
    permutation_descent_report, solve_fourth_point, tri_as_birapport_product, tri_rapport,
    twelve_scalars,
)
from .report import Check, ValidationReport
from .search import SearchResult, enumerate_models, iso_check

__version__ = "0.1.0"
