"""Birkhoff-James orthogonality in finite-dimensional normed spaces.

Exact rational arithmetic for polyhedral and Euclidean norms, with a float
backend for regular polygons.
"""

from .space import (
    EUCLIDEAN, L1, LINF, POLYGON, POLYHEDRAL, NormSpace, Operator, SpaceError,
    build_space, consecutive_vertex_pairs, extreme_points, is_extreme_point, norm_eval,
)
from .geometry import (
    auerbach_basis, is_auerbach, is_bj_orthogonal, is_orthogonal_to_span,
    smoothness_order, support_set,
)
from .preservation import (
    PRESERVES, UNKNOWN, VIOLATES, hyperplane_obstruction_decide, preserves_bj_at,
    preserves_on_set, reverse_preserves_bj_at,
)
from .kset import (
    CERTIFIED, REFUTED, certify_kset, decide_kset, is_kset_hilbert, is_scalar_isometry,
    kappa_report, refute_kset,
)
from .workspace import Workspace, WorkspaceError, emit_report, parse_workspace

__version__ = "0.1.0"
