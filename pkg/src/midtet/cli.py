"""Command-line interface.

Commands: analyze, build (from-face | from-cone), partition, sweep,
certify-kmax.  Exit codes: 0 success, 2 parse error, 3 geometric
precondition failure, 4 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import (
    FAMILIES,
    K_MAX_THEORY,
    SIGMA_LOWER_CUBE_CORNER,
    SIGMA_LOWER_FOURBALL,
    SIGMA_UPPER_PATH,
    THREE_PI,
    TWO_PI,
    certify_kmax,
    default_grid,
    sweep,
)
from .errors import ConvergenceError, GeometryError
from .fourball import (
    fourball_checks,
    fourball_from_cone,
    fourball_from_face,
    fourball_tangents,
    midsphere,
)
from .geom_core import DEFAULT_TOL, Tolerance
from .io_formats import (
    DocumentError,
    TetraDocument,
    mesh_from_partition,
    parse_tetra_document,
    sweep_csv,
)
from .partition import partition_fourball_24, red_refine_path, validate_conformity
from .tet_metrics import (
    EDGE_LABELS,
    cayley_menger_blumenthal,
    cayley_menger_d3,
    circumsphere,
    dihedral_angles,
    edge_sextuple,
    insphere,
    is_path,
    volume,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GEOMETRY = 3
EXIT_NONCONVERGENCE = 4

DEFAULT_SWEEP_N = {
    "path_diag": 200,
    "cube_corner": 8000,
    "eq_pyramid": 500,
    "equifacial_box": 343,
    "random_fourball": 10_000,
}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


def _parse_vectors(text: str, count: int, what: str) -> list[np.ndarray]:
    groups = [g for g in text.replace("(", "").replace(")", "").split(";") if g.strip()]
    if len(groups) != count:
        raise DocumentError(f"expected {count} {what} separated by ';', got {len(groups)}")
    out = []
    for g in groups:
        parts = [p for p in g.replace(",", " ").split() if p]
        if len(parts) != 3:
            raise DocumentError(f"each of the {what} needs 3 coordinates, got {g!r}")
        try:
            out.append(np.array([float(p) for p in parts]))
        except ValueError as exc:
            raise DocumentError(f"bad coordinate in {g!r}: {exc}") from exc
    return out


def _fmt_angle(value: float, radians: bool) -> str:
    return f"{value:.9f} rad" if radians else f"{math.degrees(value):.2f} deg"


def _fmt_point(p) -> str:
    return "(" + ", ".join(f"{float(x):.9g}" for x in p) + ")"


def _tolerance(ns) -> Tolerance:
    return Tolerance(
        rel=ns.tol_rel if ns.tol_rel is not None else DEFAULT_TOL.rel,
        abs=ns.tol_abs if ns.tol_abs is not None else DEFAULT_TOL.abs,
        angle_abs=DEFAULT_TOL.angle_abs,
    )


def _analyze_payload(t, tol: Tolerance, label: str | None) -> dict:
    s = edge_sextuple(t)
    report = dihedral_angles(t, tol)
    checks = fourball_checks(t, tol)
    in_center, r = insphere(t)
    circ_center, big_r = circumsphere(t)
    payload: dict = {
        "label": label,
        "vertices": [[float(x) for x in row] for row in t.verts],
        "edges": {lab: float(s[lab]) for lab in EDGE_LABELS},
        "opposite_edge_sums": [float(x) for x in s.opposite_sums()],
        "d3_bordered": cayley_menger_d3(s),
        "d3_blumenthal": cayley_menger_blumenthal(s),
        "volume": volume(t),
        "dihedral_rad": {lab: report.angles[lab] for lab in EDGE_LABELS},
        "dihedral_deg": {lab: math.degrees(report.angles[lab]) for lab in EDGE_LABELS},
        "sigma_rad": report.sigma,
        "sigma_deg": math.degrees(report.sigma),
        "classifications": {
            "fourball": report.fourball,
            "path": report.path,
            "equifacial": report.equifacial,
            "nonobtuse": report.nonobtuse,
        },
        "fourball_conditions": {
            str(n): {"passed": c.passed, "residual": c.residual} for n, c in checks.checks().items()
        },
        "insphere": {"center": [float(x) for x in in_center], "radius": r},
        "circumsphere": {"center": [float(x) for x in circ_center], "radius": big_r},
    }
    if report.fourball:
        tangents = fourball_tangents(t, tol)
        sphere = midsphere(t, tol)
        payload["tangent_lengths"] = list(tangents.as_tuple())
        payload["midsphere"] = {
            "center": [float(x) for x in sphere.center],
            "radius": sphere.radius,
            "location": sphere.location,
        }
        payload["laszlo_chain"] = {
            "R": big_r,
            "sqrt3_rho": math.sqrt(3.0) * sphere.radius,
            "3r": 3.0 * r,
        }
    return payload


def cmd_analyze(ns) -> int:
    tol = _tolerance(ns)
    doc = parse_tetra_document(_read_input(ns.input))
    t = doc.to_tetra(tol)
    payload = _analyze_payload(t, doc.tolerance or tol, doc.label)
    if ns.json:
        print(json.dumps(payload, indent=2))
        return EXIT_OK

    if payload["label"]:
        print(f"label: {payload['label']}")
    print("vertices:")
    for n, row in enumerate(payload["vertices"]):
        print(f"  P{n + 1} = {_fmt_point(row)}")
    print("edges: " + "  ".join(f"{lab}={payload['edges'][lab]:.9g}" for lab in EDGE_LABELS))
    print(
        "opposite edge sums (a+d, b+e, c+f): "
        + ", ".join(f"{x:.9g}" for x in payload["opposite_edge_sums"])
    )
    print(f"D3 (5x5 bordered): {payload['d3_bordered']:.9g}")
    print(f"D3 (Blumenthal):   {payload['d3_blumenthal']:.9g}")
    print(f"volume: {payload['volume']:.9g}")
    print(
        "dihedral angles: "
        + "  ".join(f"{lab}={_fmt_angle(payload['dihedral_rad'][lab], ns.radians)}" for lab in EDGE_LABELS)
    )
    print(f"sigma (dihedral angle sum): {_fmt_angle(payload['sigma_rad'], ns.radians)}")
    cls = payload["classifications"]
    print(
        "classification: "
        + "  ".join(f"{name}={'yes' if cls[name] else 'no'}" for name in ("fourball", "path", "equifacial", "nonobtuse"))
    )
    conds = payload["fourball_conditions"]
    print(
        "4-ball conditions 1..5: "
        + "  ".join(f"{n}:{'pass' if conds[n]['passed'] else 'FAIL'}" for n in sorted(conds))
    )
    print(f"insphere: r = {payload['insphere']['radius']:.9g}, center = {_fmt_point(payload['insphere']['center'])}")
    print(
        f"circumsphere: R = {payload['circumsphere']['radius']:.9g},"
        f" center = {_fmt_point(payload['circumsphere']['center'])}"
    )
    if "midsphere" in payload:
        ls = ", ".join(f"{x:.9g}" for x in payload["tangent_lengths"])
        ms = payload["midsphere"]
        print(f"tangent lengths: ({ls})")
        print(f"midsphere: rho = {ms['radius']:.9g}, G = {_fmt_point(ms['center'])} ({ms['location']})")
        chain = payload["laszlo_chain"]
        print(
            f"Laszlo chain: R = {chain['R']:.9g} >= sqrt(3)*rho = {chain['sqrt3_rho']:.9g}"
            f" >= 3r = {chain['3r']:.9g}"
        )
    return EXIT_OK


def _emit_document(t, label: str, out: str | None, check: bool, tol: Tolerance) -> int:
    if check:
        checks = fourball_checks(t, tol)
        summary = "  ".join(
            f"{n}:{'pass' if c.passed else 'FAIL'}(res={c.residual:.3e})" for n, c in checks.checks().items()
        )
        print(f"fourball checks: {summary}", file=sys.stderr)
    text = json.dumps(TetraDocument.from_tetra(t, label=label).to_dict(), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_build_from_face(ns) -> int:
    tol = _tolerance(ns)
    a1, a2, a3 = _parse_vectors(ns.triangle, 3, "triangle vertices")
    t = fourball_from_face((a1, a2, a3), ns.l4, mirror=ns.mirror, tol=tol)
    return _emit_document(t, "fourball-from-face", ns.out, ns.check, tol)


def cmd_build_from_cone(ns) -> int:
    tol = _tolerance(ns)
    u2, u3, u4 = _parse_vectors(ns.directions, 3, "cone directions")
    t = fourball_from_cone(u2, u3, u4, tol=tol)
    return _emit_document(t, "fourball-from-cone", ns.out, ns.check, tol)


def cmd_partition(ns) -> int:
    tol = _tolerance(ns)
    doc = parse_tetra_document(_read_input(ns.input))
    t = doc.to_tetra(tol)
    if ns.kind == "fourball24":
        part = partition_fourball_24(t, tol)
    else:
        part = red_refine_path(t, tol=tol)
    mesh = mesh_from_partition(part, tol, seed=ns.seed)
    Path(ns.out).write_text(mesh.to_off())
    if ns.obj:
        Path(ns.obj).write_text(mesh.boundary_obj())

    conf = validate_conformity(part, tol)
    n_path = sum(1 for c in part.cells if is_path(c, tol) is not None)
    print(f"partition kind: {part.kind}, cells: {len(part.cells)}")
    print(f"path cells: {n_path}/{len(part.cells)}")
    print(f"conformity: face-to-face = {'yes' if conf.is_face_to_face else 'NO'}")
    print(f"volume residual (relative): {conf.volume_residual:.3e}")
    if conf.worst_pair is not None:
        print(f"worst pair: {conf.worst_pair} ({conf.detail})")
    print(f"mesh written to {ns.out}" + (f" and {ns.obj}" if ns.obj else ""))
    return EXIT_OK


def cmd_sweep(ns) -> int:
    tol = _tolerance(ns)
    if ns.family not in FAMILIES:
        raise DocumentError(f"unknown family {ns.family!r}; choose from {sorted(FAMILIES)}")
    n = ns.n if ns.n is not None else DEFAULT_SWEEP_N[ns.family]
    if ns.family == "random_fourball":
        result = sweep(ns.family, n, seed=ns.seed, tol=tol)
    else:
        result = sweep(ns.family, default_grid(ns.family, n), tol=tol)
    if ns.out:
        Path(ns.out).write_text(sweep_csv(result))
        print(f"csv written to {ns.out}")

    print(
        f"family {result.family}: {len(result.samples)} samples,"
        f" sigma in [{_fmt_angle(result.sigma_min, ns.radians)}, {_fmt_angle(result.sigma_max, ns.radians)}]"
    )
    for name, ok in result.verdicts.items():
        print(f"  {name}: {'PASS' if ok else 'FAIL'}")
    verdict = "PASS" if result.passed else "FAIL"
    print(
        f"verdict {verdict} | context: 2pi = {math.degrees(TWO_PI):.2f} deg,"
        f" 2.5pi = {math.degrees(SIGMA_UPPER_PATH):.2f} deg,"
        f" cube-corner lower = {math.degrees(SIGMA_LOWER_CUBE_CORNER):.1f} deg,"
        f" 4-ball lower = {math.degrees(SIGMA_LOWER_FOURBALL):.2f} deg,"
        f" 3pi = {math.degrees(THREE_PI):.2f} deg"
    )
    return EXIT_OK if result.passed else EXIT_GEOMETRY


def cmd_certify_kmax(ns) -> int:
    tol = _tolerance(ns)
    report = certify_kmax(ns.resolution, tol)
    payload = {
        "argmax": list(report.argmax),
        "k_max": report.k_max,
        "k_max_theory": K_MAX_THEORY,
        "gap_to_theory": report.gap_to_theory,
        "sigma_lower_bound_deg": math.degrees(report.sigma_lower_bound),
        "isosceles_gap": report.isosceles_gap,
    }
    if ns.json:
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    a, b, c = report.argmax
    print(f"argmax (a, b, c) = ({a:.6f}, {b:.6f}, {c:.6f})  [theory: all = {math.pi - math.acos(1 / 3):.6f}]")
    print(f"k_max = {report.k_max:.9f}  (2*arccos(-1/3) = {K_MAX_THEORY:.9f})")
    print(f"|k_max - theory| = {report.gap_to_theory:.3e}")
    print(
        f"implied dihedral-sum lower bound: {math.degrees(report.sigma_lower_bound):.2f} deg"
        f"  (theory 6*arccos(1/3) = {math.degrees(SIGMA_LOWER_FOURBALL):.2f} deg)"
    )
    print(f"isosceles cross-check: {'PASS' if report.isosceles_gap <= 1e-8 else 'FAIL'}"
          f" (|k_iso - k_general| = {report.isosceles_gap:.3e})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midtet",
        description="Dihedral angle sums, midspheres, and path partitions of tetrahedra.",
    )
    parser.add_argument("--tol-rel", type=float, default=None, help="relative tolerance (default 1e-9)")
    parser.add_argument("--tol-abs", type=float, default=None, help="absolute tolerance floor (default 1e-12)")
    parser.add_argument("--radians", action="store_true", help="print angles in radians instead of degrees")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    parser.add_argument("--json", action="store_true", help="emit machine-readable JSON where supported")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one tetrahedron document")
    p.add_argument("input", help="JSON TetraDocument path, or - for stdin")
    p.set_defaults(func=cmd_analyze)

    build = sub.add_parser("build", help="construct a 4-ball tetrahedron")
    bsub = build.add_subparsers(dest="mode", required=True)
    p = bsub.add_parser("from-face", help="infinitely many 4-ball tetra share a face; pick one by l4")
    p.add_argument("--triangle", required=True, help="three vertices 'x,y,z; x,y,z; x,y,z'")
    p.add_argument("--l4", type=float, required=True, help="apex tangent length (> inner Soddy radius)")
    p.add_argument("--mirror", action="store_true", help="apex on the negative-orientation side")
    p.add_argument("--check", action="store_true", help="re-run the five 4-ball checks (stderr)")
    p.add_argument("--out", default=None, help="write the TetraDocument here instead of stdout")
    p.set_defaults(func=cmd_build_from_face)
    p = bsub.add_parser("from-cone", help="the unique 4-ball tetrahedron inscribed in a cone")
    p.add_argument("--directions", required=True, help="three edge directions 'x,y,z; x,y,z; x,y,z'")
    p.add_argument("--check", action="store_true", help="re-run the five 4-ball checks (stderr)")
    p.add_argument("--out", default=None, help="write the TetraDocument here instead of stdout")
    p.set_defaults(func=cmd_build_from_cone)

    p = sub.add_parser("partition", help="face-to-face partition into path tetrahedra")
    p.add_argument("input", help="JSON TetraDocument path, or - for stdin")
    p.add_argument("--kind", choices=("fourball24", "red8"), required=True)
    p.add_argument("--out", required=True, help="OFF mesh output path")
    p.add_argument("--obj", default=None, help="optional OBJ boundary-surface output path")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sweep", help="angle-sum bound certification over a family grid")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, default=None, help="sample count (family-specific default)")
    p.add_argument("--out", default=None, help="CSV output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify-kmax", help="certify k_max = 2*arccos(-1/3) by grid + refinement")
    p.add_argument("--resolution", type=int, default=40, help="grid resolution per axis (>= 20)")
    p.set_defaults(func=cmd_certify_kmax)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
