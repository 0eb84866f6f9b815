"""Piecewise-smooth 3D vector fields with cusp-fold singularities:
classification, hybrid simulation, and one-parameter unfolding."""

from .bifurcation import (
    BifurcationReport,
    FoldFoldType,
    fold_fold_point,
    fold_fold_type,
    scan,
    table_cross_check,
)
from .dynamics import (
    Event,
    EventKind,
    IntegratorOptions,
    Regime,
    Trajectory,
    TrajectorySegment,
    flow_exact,
    integrate,
    residual_check,
    sliding_field,
)
from .fields import (
    EPSILON_UNFOLD,
    PSVF,
    SignVector,
    SmoothField3,
    WorkingBox,
    all_sign_vectors,
    canonical_form,
    dumps_psvf,
    loads_psvf,
    unfolded_form,
)
from .poly import DegenerateEventError, Point3, Poly3, roots_univariate
from .regions import RegionLabel, SectorLayout, classify_region, sector_layout
from .render import DiagramSpec, ShowFlags, draw_sigma_diagram, export_trajectory_csv
from .signature import (
    CuspFoldSignature,
    signature_of_psvf,
    signature_of_sign_vector,
    verify_theorem_one,
    weak_equivalent,
)
from .tangency import (
    ContactClass,
    Side,
    classify_contact,
    cusp_orbit,
    lie_chain,
    lie_derivative,
    tangency_line,
)

__version__ = "0.1.0"
