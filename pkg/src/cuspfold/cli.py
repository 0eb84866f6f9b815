"""Command-line front end.

Subcommands: catalog, classify, signature, simulate, unfold, portrait,
verify.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bifurcation, checks, render
from .dynamics import IntegratorOptions, Regime, integrate
from .fields import (
    SignVector,
    WorkingBox,
    all_sign_vectors,
    canonical_form,
    loads_psvf,
    unfolded_form,
)
from .poly import Point3
from .signature import signature_of_psvf, signature_of_sign_vector


def _parse_sv(text: str) -> SignVector:
    try:
        return SignVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_point(text: str) -> Point3:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return Point3(*(float(p) for p in parts))


def _load_psvf_file(path: str):
    return loads_psvf(Path(path).read_text())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuspfold",
        description="Classify, simulate and unfold 3D piecewise-smooth "
        "vector fields around a cusp-fold singularity.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list the 32 canonical forms with signatures")

    p = sub.add_parser("classify", help="signature of a canonical form")
    p.add_argument("sv", type=_parse_sv, help="five signs, e.g. +++++ or (+++,++)")

    p = sub.add_parser("signature", help="numeric signature of a field from file")
    p.add_argument("psvf_file", help="PSVF JSON document")
    p.add_argument("--point", type=_parse_point, default=Point3(0, 0, 0))
    p.add_argument("--probe-radius", type=float, default=0.1)

    p = sub.add_parser("simulate", help="integrate a hybrid trajectory")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--sv", type=_parse_sv)
    src.add_argument("--psvf-file")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--q0", type=_parse_point, required=True)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--max-events", type=int, default=64)
    p.add_argument("--regime", choices=["upper", "lower"], default=None,
                   help="initial zone when starting in the escaping region")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--no-fig", action="store_true",
                   help="skip the rendered figure next to the CSV")

    p = sub.add_parser("unfold", help="lambda sweep of the deformation")
    p.add_argument("--sv", type=_parse_sv, required=True)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--no-fig", action="store_true")

    p = sub.add_parser("portrait", help="SVG diagram of the switching plane")
    p.add_argument("--sv", type=_parse_sv, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--show", default="regions,tangency_lines",
                   help="comma list from: regions,tangency_lines,fold_arcs,"
                        "cusp_orbit,sample_trajectories (or 'none')")
    p.add_argument("--out", required=True, help="SVG output path")

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probe-radius", type=float, default=0.1)
    return ap


def _cmd_catalog() -> int:
    print(f"{'form':>9}  {'arrival':>8}  {'visible branch':>14}  "
          f"{'Z+ layout':>9}  {'S- type':>9}  {'Z- layout':>9}")
    for sv in all_sign_vectors():
        sig = signature_of_sign_vector(sv)
        print(f"{sv.pretty():>9}  {sig.cusp_arrival:>8}  {sig.visible_branch:>14}  "
              f"{sig.zplus_layout:>+9d}  {sig.sminus_type:>9}  "
              f"{sig.zminus_layout:>+9d}")
    return 0


def _cmd_classify(args) -> int:
    sig = signature_of_sign_vector(args.sv)
    print(json.dumps(sig.to_json_dict(), indent=2))
    return 0


def _cmd_signature(args) -> int:
    psvf = _load_psvf_file(args.psvf_file)
    sig = signature_of_psvf(psvf, args.point, args.probe_radius)
    print(json.dumps(sig.to_json_dict(), indent=2))
    return 0


def _cmd_simulate(args) -> int:
    exact_hint = None
    if args.sv is not None:
        psvf = unfolded_form(args.sv, args.lam) if args.lam else canonical_form(args.sv)
        exact_hint = (args.sv, args.lam)
    else:
        psvf = _load_psvf_file(args.psvf_file)
    opts = IntegratorOptions(t_max=args.t_max, step=args.step,
                             max_events=args.max_events, box=WorkingBox(2.0, 2.0, 2.0))
    regime = {"upper": Regime.UPPER, "lower": Regime.LOWER, None: None}[args.regime]
    traj = integrate(psvf, args.q0, opts, exact_hint=exact_hint,
                     initial_regime=regime)
    out = Path(args.out)
    out.write_bytes(render.export_trajectory_csv(traj))
    events_path = out.with_suffix(".events.json")
    events_path.write_bytes(render.export_events_json(traj))
    written = [str(out), str(events_path)]
    if not args.no_fig:
        from .figures import save_trajectory_figure

        fig_path = out.with_suffix(".png")
        save_trajectory_figure(traj, str(fig_path))
        written.append(str(fig_path))
    print("wrote " + ", ".join(written))
    return 0


def _cmd_unfold(args) -> int:
    report = bifurcation.scan(args.sv, epsilon=args.epsilon, n=args.n)
    out = Path(args.out)
    out.write_text(json.dumps(bifurcation.report_to_dict(report), indent=2))
    written = [str(out)]
    if not args.no_fig:
        from .figures import save_scan_figure

        fig_path = out.with_suffix(".png")
        save_scan_figure(report, str(fig_path))
        written.append(str(fig_path))
    print("wrote " + ", ".join(written))
    return 0


def _cmd_portrait(args) -> int:
    names = [] if args.show.strip() in ("", "none") else args.show.split(",")
    valid = {"regions", "tangency_lines", "fold_arcs", "cusp_orbit",
             "sample_trajectories"}
    bad = set(names) - valid
    if bad:
        raise SystemExit(f"unknown show flags: {sorted(bad)}")
    flags = render.ShowFlags(**{name: name in names for name in valid})
    spec = render.DiagramSpec(sv=args.sv, lam=args.lam, show=flags)
    Path(args.out).write_bytes(render.draw_sigma_diagram(spec))
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    report = checks.run_verification(seed=args.seed,
                                     probe_radius=args.probe_radius)
    for line in report.lines:
        print(line)
    print("verification " + ("PASSED" if report.ok else "FAILED"))
    return 0 if report.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "catalog":
            return _cmd_catalog()
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "signature":
            return _cmd_signature(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "unfold":
            return _cmd_unfold(args)
        if args.command == "portrait":
            return _cmd_portrait(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
