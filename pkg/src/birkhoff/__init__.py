"""Exact volumes and Ehrhart polynomials of the Birkhoff polytope B_n."""

from .ehrhart import (
    CountTable,
    EhrhartPoly,
    SumVector,
    count_2x2,
    count_contingency,
    ehrhart_polynomial,
    evaluate,
    magic_count,
    multiplicity,
)
from .matrix import (
    BinaryMatrix,
    InvalidFaceError,
    PermutationMatrix,
    UsageError,
    contains,
    dimension,
    face_closure,
    find_permutation,
    permute_cols,
    permute_rows,
    transpose,
    union,
)
from .montecarlo import SampleReport, estimate_alpha, exact_alpha, is_in_A, sample_row_stochastic
from .triangulate import (
    BudgetExceededError,
    FaceLattice,
    FaceRecord,
    ScorePair,
    birkhoff,
    build_lattice,
    canonicalize,
    choose_vertex,
    compute_scores,
    opposite_facets,
    relative_volume,
    true_volume,
)
from .young import catalan_product, staircase_face, verify_conjecture

__version__ = "0.1.0"
