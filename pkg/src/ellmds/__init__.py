"""Maximum-length MDS elliptic codes: construction, verification and bounds."""

from .codes import CodeSpec, GenMatrix, Verdict, generator_matrix, mds_combinatorial, mds_matrix
from .constructions import (
    audit_code,
    build_max_code,
    construct_coset_code,
    construct_deg3_code,
    mec_bound,
)
from .curves import Curve, Point, enumerate_points, find_curve, make_curve, point_add, scalar_mul
from .fields import FieldElem, FiniteField, extend_field, field_arith, make_field, solve_quadratic
from .functions import FunctionRep, evaluate_fn, miller_reduce, rr_basis
from .groups import (
    GroupTable,
    Subgroup,
    admissible_traces,
    gcd_plus_minus,
    group_table,
    index2_subgroups,
    k_sumset,
    possible_structures,
    predict_cyclic_binary_maximal,
)
from .places import (
    Divisor,
    Place,
    divisor_sum,
    find_degree3_avoid,
    find_degree3_trace,
    line_divisor,
    make_place,
)

__version__ = "0.1.0"
