"""Serialization: JSON tetra/mesh documents, OFF mesh export, sweep CSV."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from .bounds import SweepResult
from .geom_core import DEFAULT_TOL, Tolerance
from .partition import Partition, _weld_points
from .tet_metrics import EDGE_LABELS, EdgeSextuple, Tetra, edge_sextuple, realize


class DocumentError(ValueError):
    """Malformed input document (maps to the CLI parse-error exit code)."""


@dataclass(frozen=True)
class TetraDocument:
    """One tetrahedron given either by 4 vertices or by 6 edge lengths."""

    vertices: np.ndarray | None = None
    edges: EdgeSextuple | None = None
    label: str | None = None
    tolerance: Tolerance | None = None

    def __post_init__(self) -> None:
        if (self.vertices is None) == (self.edges is None):
            raise DocumentError("document must contain exactly one of 'vertices' or 'edges'")
        if self.vertices is not None:
            v = np.asarray(self.vertices, dtype=float)
            if v.shape != (4, 3) or not np.all(np.isfinite(v)):
                raise DocumentError("'vertices' must be 4 rows of 3 finite numbers")
            object.__setattr__(self, "vertices", v)

    @classmethod
    def from_dict(cls, obj: dict) -> "TetraDocument":
        if not isinstance(obj, dict):
            raise DocumentError(f"expected a JSON object, got {type(obj).__name__}")
        known = {"vertices", "edges", "label", "tolerance"}
        unknown = set(obj) - known
        if unknown:
            raise DocumentError(f"unknown fields: {sorted(unknown)}")
        edges = None
        if "edges" in obj:
            e = obj["edges"]
            if not isinstance(e, dict) or set(e) != set(EDGE_LABELS):
                raise DocumentError(f"'edges' must map exactly the labels {EDGE_LABELS}")
            try:
                edges = EdgeSextuple(**{k: float(e[k]) for k in EDGE_LABELS})
            except (TypeError, ValueError) as exc:
                raise DocumentError(f"bad edge lengths: {exc}") from exc
        tolerance = None
        if "tolerance" in obj:
            t = obj["tolerance"]
            if not isinstance(t, dict):
                raise DocumentError("'tolerance' must be an object")
            try:
                tolerance = Tolerance(
                    rel=float(t.get("rel", DEFAULT_TOL.rel)),
                    abs=float(t.get("abs", DEFAULT_TOL.abs)),
                    angle_abs=float(t.get("angle_abs", DEFAULT_TOL.angle_abs)),
                )
            except (TypeError, ValueError) as exc:
                raise DocumentError(f"bad tolerance: {exc}") from exc
        try:
            return cls(
                vertices=np.asarray(obj["vertices"], dtype=float) if "vertices" in obj else None,
                edges=edges,
                label=obj.get("label"),
                tolerance=tolerance,
            )
        except (TypeError, ValueError) as exc:
            raise DocumentError(str(exc)) from exc

    def to_dict(self) -> dict:
        out: dict = {}
        if self.label is not None:
            out["label"] = self.label
        if self.vertices is not None:
            out["vertices"] = [[float(x) for x in row] for row in self.vertices]
        if self.edges is not None:
            out["edges"] = {lab: getattr(self.edges, lab) for lab in EDGE_LABELS}
        if self.tolerance is not None:
            out["tolerance"] = {
                "rel": self.tolerance.rel,
                "abs": self.tolerance.abs,
                "angle_abs": self.tolerance.angle_abs,
            }
        return out

    @classmethod
    def from_tetra(cls, t: Tetra, label: str | None = None) -> "TetraDocument":
        return cls(vertices=t.verts.copy(), label=label)

    def to_tetra(self, tol: Tolerance = DEFAULT_TOL) -> Tetra:
        """Realize the document; edge documents go through the canonical embedding."""
        if self.vertices is not None:
            return Tetra(self.vertices)
        return realize(self.edges, self.tolerance or tol)


def parse_tetra_document(text: str) -> TetraDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return TetraDocument.from_dict(obj)


@dataclass(frozen=True)
class MeshDocument:
    """Flat tetrahedral mesh: shared vertices plus 4-index cells."""

    vertices: np.ndarray
    cells: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        c = np.asarray(self.cells, dtype=int)
        if v.ndim != 2 or v.shape[1] != 3 or not np.all(np.isfinite(v)):
            raise DocumentError("mesh vertices must be an (n, 3) finite array")
        if c.ndim != 2 or c.shape[1] != 4:
            raise DocumentError("mesh cells must be an (m, 4) index array")
        if c.size and (c.min() < 0 or c.max() >= len(v)):
            raise DocumentError("cell indices out of range")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "cells", c)
        self.validate_distinct_vertices()

    def validate_distinct_vertices(self, tol: Tolerance = DEFAULT_TOL) -> None:
        scale = float(np.max(np.abs(self.vertices))) if len(self.vertices) else 1.0
        radius = tol.gap(max(scale, 1.0))
        for i in range(len(self.vertices)):
            d = np.linalg.norm(self.vertices[i + 1 :] - self.vertices[i], axis=1)
            if d.size and float(d.min()) <= radius:
                raise DocumentError(f"duplicate mesh vertices at index {i}")

    def cell_tetra(self, n: int) -> Tetra:
        return Tetra(self.vertices[self.cells[n]])

    def to_dict(self) -> dict:
        return {
            "vertices": [[float(x) for x in row] for row in self.vertices],
            "cells": [[int(i) for i in row] for row in self.cells],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MeshDocument":
        if not isinstance(obj, dict) or not {"vertices", "cells"} <= set(obj):
            raise DocumentError("mesh document needs 'vertices' and 'cells'")
        try:
            return cls(
                vertices=np.asarray(obj["vertices"], dtype=float),
                cells=np.asarray(obj["cells"], dtype=int),
                provenance=obj.get("provenance", {}),
            )
        except (TypeError, ValueError) as exc:
            raise DocumentError(str(exc)) from exc

    def to_off(self) -> str:
        lines = ["OFF", f"{len(self.vertices)} {len(self.cells)} 0"]
        for row in self.vertices:
            lines.append(" ".join(repr(float(x)) for x in row))
        for cell in self.cells:
            lines.append("4 " + " ".join(str(int(i)) for i in cell))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_off(cls, text: str) -> "MeshDocument":
        rows = [ln.strip() for ln in text.splitlines()]
        rows = [ln for ln in rows if ln and not ln.startswith("#")]
        if not rows or rows[0] != "OFF":
            raise DocumentError("missing OFF header")
        try:
            nv, nc, _ = (int(x) for x in rows[1].split())
            verts = np.array([[float(x) for x in rows[2 + i].split()] for i in range(nv)])
            cells = []
            for i in range(nc):
                parts = rows[2 + nv + i].split()
                if parts[0] != "4":
                    raise DocumentError("only tetrahedral (4-index) cells are supported")
                cells.append([int(x) for x in parts[1:5]])
        except (IndexError, ValueError) as exc:
            raise DocumentError(f"malformed OFF file: {exc}") from exc
        return cls(vertices=verts, cells=np.array(cells, dtype=int).reshape(-1, 4))

    def boundary_obj(self) -> str:
        """OBJ surface of the mesh boundary (facets owned by a single cell)."""
        owners: dict[tuple[int, int, int], int] = {}
        for quad in self.cells:
            for skip in range(4):
                tri = tuple(sorted(int(q) for pos, q in enumerate(quad) if pos != skip))
                owners[tri] = owners.get(tri, 0) + 1
        lines = ["# midtet boundary surface"]
        for row in self.vertices:
            lines.append("v " + " ".join(repr(float(x)) for x in row))
        for tri, count in sorted(owners.items()):
            if count == 1:
                lines.append(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}")
        return "\n".join(lines) + "\n"


def mesh_from_partition(p: Partition, tol: Tolerance = DEFAULT_TOL, seed: int | None = None) -> MeshDocument:
    """Weld the partition's cell vertices into a shared-vertex mesh.

    Cells are sorted by the lexicographic order of their vertex coordinates so
    exports are byte-stable across runs.
    """
    scale = max(edge_sextuple(p.parent).as_tuple())
    points = np.vstack([c.verts for c in p.cells])
    welded, index = _weld_points(points, tol.gap(scale))
    quads = index.reshape(-1, 4)
    order = sorted(range(len(quads)), key=lambda n: tuple(welded[quads[n]].ravel()))
    provenance = {
        "parent": [[float(x) for x in row] for row in p.parent.verts],
        "kind": p.kind,
        "seed": seed,
    }
    return MeshDocument(vertices=welded, cells=quads[order], provenance=provenance)


SWEEP_PARAM_COLUMNS = {
    "path_diag": ("a",),
    "cube_corner": ("a", "b", "c"),
    "eq_pyramid": ("h",),
    "equifacial_box": ("p", "q", "r"),
    "random_fourball": ("l1", "l2", "l3", "l4"),
}


def sweep_csv(result: SweepResult) -> str:
    """CSV with one row per sample: parameters, sigma, classification flags."""
    params = SWEEP_PARAM_COLUMNS[result.family]
    flag_names = ("fourball", "path", "equifacial", "nonobtuse")
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*params, "sigma_radians", "sigma_degrees", *flag_names])
    for s in result.samples:
        writer.writerow(
            [
                *(repr(float(x)) for x in s.params),
                repr(float(s.sigma)),
                repr(math.degrees(s.sigma)),
                *(int(s.flags[f]) for f in flag_names),
            ]
        )
    return buf.getvalue()
