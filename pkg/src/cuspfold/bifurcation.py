"""One-parameter deformation of the cusp-fold into a fold-fold point.

For lambda != 0 the lower tangency line translates to y = t*lambda and
the two tangency lines meet transversally at p = (0, t*lambda, 0), which
is a fold for both fields.  Its visibility pair is computed from first
principles (Lie-derivative signs at p):

* upper fold visible  iff  sign(a*g*t*lambda) = +1
* lower fold visible  iff  m*t < 0

A previously tabulated clause-by-clause classification is kept as a
cross-check fixture; its invisible-invisible row contains a known
misprint (the second clause duplicates the invisible-visible row and
contradicts lower-fold invisibility), so the sign-derived rule is
authoritative and the discrepancy is surfaced, never silently patched.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .fields import EPSILON_UNFOLD, SignVector, all_sign_vectors, unfolded_form
from .poly import Point3
from .regions import SectorLayout, sector_layout
from .tangency import Side, classify_contact


class FoldFoldType(Enum):
    VISIBLE_VISIBLE = "visible-visible"
    VISIBLE_INVISIBLE = "visible-invisible"
    INVISIBLE_VISIBLE = "invisible-visible"
    INVISIBLE_INVISIBLE = "invisible-invisible"


def _check_lambda(lam: float, epsilon: float) -> None:
    if lam == 0.0:
        raise ValueError("cusp-fold, not fold-fold")
    if abs(lam) >= epsilon:
        raise ValueError("lambda outside unfolding window")


def fold_fold_point(sv: SignVector, lam: float,
                    epsilon: float = EPSILON_UNFOLD) -> Point3:
    """The intersection of the two tangency lines: (0, t*lambda, 0)."""
    _check_lambda(lam, epsilon)
    return Point3(0.0, sv.t * lam, 0.0)


def fold_fold_type(sv: SignVector, lam: float,
                   epsilon: float = EPSILON_UNFOLD) -> FoldFoldType:
    """Visibility pair at the fold-fold point, upper field first."""
    _check_lambda(lam, epsilon)
    upper_visible = sv.a * sv.g * sv.t * lam > 0
    lower_visible = sv.m * sv.t < 0
    if upper_visible:
        return (FoldFoldType.VISIBLE_VISIBLE if lower_visible
                else FoldFoldType.VISIBLE_INVISIBLE)
    return (FoldFoldType.INVISIBLE_VISIBLE if lower_visible
            else FoldFoldType.INVISIBLE_INVISIBLE)


#: The tabulated clauses, verbatim, keyed by (sign(a*g), sign(m*t), sign(lam*t)).
#: The starred cell carries the known misprint described in the module docstring.
REFERENCE_TABLE_CLAUSES: list[tuple[tuple[int, int, int], FoldFoldType]] = [
    ((-1, -1, -1), FoldFoldType.VISIBLE_VISIBLE),
    ((+1, -1, +1), FoldFoldType.VISIBLE_VISIBLE),
    ((-1, +1, -1), FoldFoldType.VISIBLE_INVISIBLE),
    ((+1, +1, +1), FoldFoldType.VISIBLE_INVISIBLE),
    ((+1, -1, -1), FoldFoldType.INVISIBLE_VISIBLE),
    ((-1, -1, +1), FoldFoldType.INVISIBLE_VISIBLE),
    ((+1, +1, -1), FoldFoldType.INVISIBLE_INVISIBLE),
    ((-1, -1, +1), FoldFoldType.INVISIBLE_INVISIBLE),  # * misprinted clause
]


def reference_table_types(sv: SignVector, lam: float) -> list[FoldFoldType]:
    """All table clauses matching (sv, lam); empty or multiple on the
    misprinted cells."""
    key = (
        1 if sv.a * sv.g > 0 else -1,
        1 if sv.m * sv.t > 0 else -1,
        1 if lam * sv.t > 0 else -1,
    )
    return [ftype for cell, ftype in REFERENCE_TABLE_CLAUSES if cell == key]


@dataclass(frozen=True)
class TableDiscrepancy:
    sv: SignVector
    lam_sign: int
    table_types: tuple
    derived_type: FoldFoldType


@dataclass(frozen=True)
class TableCrossCheck:
    agreements: int
    discrepancies: list


def table_cross_check(lam_mag: float = 0.1) -> TableCrossCheck:
    """Compare the sign-derived classification with the reference table
    over all 64 (sign vector, sign lambda) cells."""
    agreements = 0
    discrepancies = []
    for sv in all_sign_vectors():
        for lam_sign in (1, -1):
            lam = lam_sign * lam_mag
            derived = fold_fold_type(sv, lam)
            table = reference_table_types(sv, lam)
            if table == [derived]:
                agreements += 1
            else:
                discrepancies.append(
                    TableDiscrepancy(sv, lam_sign, tuple(table), derived)
                )
    return TableCrossCheck(agreements=agreements, discrepancies=discrepancies)


def contact_fold_fold_type(sv: SignVector, lam: float,
                           epsilon: float = EPSILON_UNFOLD) -> FoldFoldType:
    """Independent oracle: classify both contacts at the fold-fold point
    with the Lie-derivative machinery and read off the visibility pair."""
    p = fold_fold_point(sv, lam, epsilon)
    psvf = unfolded_form(sv, lam, epsilon)
    upper = classify_contact(psvf.zplus, psvf.f, p, Side.UPPER)
    lower = classify_contact(psvf.zminus, psvf.f, p, Side.LOWER)
    if not (upper.is_fold and lower.is_fold):
        raise ValueError(f"expected fold-fold at {p}, got {upper.kind}/{lower.kind}")
    uv = upper.kind == "fold_visible"
    lv = lower.kind == "fold_visible"
    if uv:
        return FoldFoldType.VISIBLE_VISIBLE if lv else FoldFoldType.VISIBLE_INVISIBLE
    return FoldFoldType.INVISIBLE_VISIBLE if lv else FoldFoldType.INVISIBLE_INVISIBLE


@dataclass(frozen=True)
class ScanRecord:
    lam: float
    cusp_fold: bool
    singular_point: Point3
    fold_fold: FoldFoldType | None
    layout: SectorLayout
    lower_line_y: float


@dataclass(frozen=True)
class BifurcationReport:
    sv: SignVector
    epsilon: float
    records: list


def scan(sv: SignVector, epsilon: float = 0.2, n: int = 9) -> BifurcationReport:
    """Uniform lambda sweep over [-epsilon, epsilon]; n odd so lambda=0
    (the cusp-fold itself) sits on the grid."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be an odd integer >= 3")
    # the unfolding window must strictly contain the scanned grid
    window = 2.0 * epsilon
    records = []
    for i in range(n):
        lam = -epsilon + 2.0 * epsilon * i / (n - 1)
        if abs(lam) < 1e-15:
            lam = 0.0
        layout = sector_layout(sv, lam, epsilon=window)
        if lam == 0.0:
            records.append(ScanRecord(
                lam=0.0, cusp_fold=True, singular_point=Point3(0.0, 0.0, 0.0),
                fold_fold=None, layout=layout, lower_line_y=0.0,
            ))
        else:
            records.append(ScanRecord(
                lam=lam, cusp_fold=False,
                singular_point=fold_fold_point(sv, lam, epsilon=window),
                fold_fold=fold_fold_type(sv, lam, epsilon=window),
                layout=layout, lower_line_y=sv.t * lam,
            ))
    return BifurcationReport(sv=sv, epsilon=epsilon, records=records)


def report_to_dict(report: BifurcationReport) -> dict:
    return {
        "sv": report.sv.compact(),
        "epsilon": report.epsilon,
        "records": [
            {
                "lambda": r.lam,
                "cusp_fold": r.cusp_fold,
                "singular_point": list(r.singular_point.as_tuple()),
                "fold_fold_type": r.fold_fold.value if r.fold_fold else None,
                "lower_line_y": r.lower_line_y,
                "sectors": {
                    f"{'+' if sx > 0 else '-'}{'+' if sy > 0 else '-'}": label.value
                    for (sx, sy), label in r.layout.sectors.items()
                },
            }
            for r in report.records
        ],
    }
