"""Sums of dilates |A + lambda*A| for transcendental lambda, computed exactly.

With lambda transcendental, finite subsets of Q[lambda] are finite sets of
integer vectors and multiplication by lambda is the coordinate shift ``phi``.
"""
from .compression import (
    IndexSet,
    alpha,
    compress_full,
    compress_k,
    delete_coord,
    is_compressed,
    project,
    reduce_dim,
    shift_index_set,
)
from .constructions import ap, kl_grid, kl_upper_envelope, random_ideal
from .core import (
    PointSet,
    affine_dim,
    dilate_sum,
    doubling_K,
    minkowski,
    parse_set,
    phi,
    read_set,
    serialize_set,
    write_set,
)
from .errors import (
    CapExceeded,
    CoordinateOverflow,
    DilatesError,
    EmptySetError,
    IndexOutOfRange,
    PreconditionError,
    SetFormatError,
)
from .oracles import (
    Report,
    check_discbm,
    check_hdsums,
    check_injection_claim,
    check_pr_chain,
    check_projection_bound,
    check_ruzsa_triangle,
    count_by_alpha,
    lower_bound_value,
    theorem_trace,
)
from .search import SearchRecord, bounds_table, enumerate_ideals, exact_min, local_search

__version__ = "0.1.0"
