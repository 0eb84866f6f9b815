"""Self-verification suite behind the `verify` CLI command.

Runs the 32-form distinctness check, the numeric/analytic signature
agreement suite, the fold-fold reference-table cross-check, and a seeded
sampled check of the region product rule.  Output is deterministic for a
fixed seed (the seed is printed in the report).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bifurcation import table_cross_check
from .fields import all_sign_vectors, canonical_form, unfolded_form
from .poly import Point3
from .signature import signature_of_psvf, signature_of_sign_vector, verify_theorem_one
from .tangency import lie_derivative

#: Reference-table cells affected by the known misprint, keyed by
#: (sign(a*g), sign(m*t), sign(lam*t)).
KNOWN_MISPRINT_CELLS = {(-1, -1, 1), (-1, 1, 1)}


@dataclass
class VerificationReport:
    ok: bool = True
    lines: list = field(default_factory=list)

    def record(self, ok: bool, text: str):
        self.ok = self.ok and ok
        self.lines.append(f"[{'PASS' if ok else 'FAIL'}] {text}")


def run_verification(seed: int = 0, probe_radius: float = 0.1) -> VerificationReport:
    report = VerificationReport()
    report.lines.append(f"seed: {seed}")

    # 1. distinctness of the 32 signatures
    t1 = verify_theorem_one()
    report.record(
        t1.count_distinct == 32 and not t1.collisions,
        f"signature distinctness: {t1.count_distinct}/32 distinct, "
        f"{len(t1.collisions)} collisions",
    )

    # 2. numeric probe agrees with the analytic signature on every form
    mismatches = []
    for sv in all_sign_vectors():
        psvf = canonical_form(sv)
        try:
            numeric = signature_of_psvf(psvf, Point3(0, 0, 0), probe_radius)
        except ValueError as exc:
            mismatches.append((sv.compact(), str(exc)))
            continue
        if numeric != signature_of_sign_vector(sv):
            mismatches.append((sv.compact(), "signature mismatch"))
    report.record(
        not mismatches,
        f"numeric/analytic signature agreement: {32 - len(mismatches)}/32"
        + (f" (failures: {mismatches})" if mismatches else ""),
    )

    # 3. fold-fold reference-table cross-check
    cc = table_cross_check()
    unexpected = [
        d for d in cc.discrepancies
        if (1 if d.sv.a * d.sv.g > 0 else -1,
            1 if d.sv.m * d.sv.t > 0 else -1,
            d.lam_sign * (1 if d.sv.t > 0 else -1)) not in KNOWN_MISPRINT_CELLS
    ]
    report.record(
        not unexpected and cc.agreements == 48,
        "fold-fold table cross-check: 1 known discrepancy "
        "(misprinted invisible-invisible clause, "
        f"{len(cc.discrepancies)} affected cells), "
        f"{len(unexpected)} unexpected",
    )

    # 4. seeded sampled check of the region product rule
    rng = np.random.default_rng(seed)
    violations = 0
    total = 0
    for sv in all_sign_vectors():
        for lam in (0.0, 0.1, -0.1):
            psvf = unfolded_form(sv, lam)
            a_poly = lie_derivative(psvf.zplus, psvf.f)
            b_poly = lie_derivative(psvf.zminus, psvf.f)
            pts = rng.uniform(-1.0, 1.0, size=(100, 2))
            for x, y in pts:
                if abs(x) < 1e-3 or abs(y - sv.t * lam) < 1e-3:
                    continue
                total += 1
                q = Point3(x, y, 0.0)
                lhs = math.copysign(1.0, a_poly.eval(q) * b_poly.eval(q))
                rhs = math.copysign(1.0, sv.g * sv.t * x * (y - sv.t * lam))
                if lhs != rhs:
                    violations += 1
    report.record(
        violations == 0,
        f"region product rule: {violations} violations over {total} samples",
    )
    return report
