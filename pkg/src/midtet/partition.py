"""Face-to-face decompositions: the 24 path-tetrahedron partition of a
4-ball tetrahedron, red refinement of a path tetrahedron into 8, and a
conformity validator for both."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CenterNotInterior, NotFourBall, NotPath
from .fourball import edge_tangency_points, face_incircle, fourball_tangents, is_fourball, midsphere
from .geom_core import DEFAULT_TOL, Array, Tolerance, dot, norm
from .tet_metrics import EDGE_VERTS, FACE_VERTS, Tetra, edge_sextuple, is_path, volume


@dataclass(frozen=True)
class Partition:
    """Ordered list of sub-tetrahedra covering ``parent``."""

    parent: Tetra
    cells: tuple[Tetra, ...]
    kind: str  # "fourball24" | "red8"


@dataclass(frozen=True)
class ConformityReport:
    """Outcome of the face-to-face validation.

    ``is_face_to_face`` certifies that every cell facet is either matched by
    exactly one neighboring cell or lies on the parent boundary, which for
    partitions built from shared named points is equivalent to the pairwise
    face/edge/vertex intersection property.
    """

    is_face_to_face: bool
    volume_residual: float
    worst_pair: tuple[int, int] | None = None
    detail: str = ""
    contact_types: dict[tuple[int, int], str] = field(default_factory=dict, repr=False)


def _oriented(verts: np.ndarray) -> Tetra:
    """Cell with positive signed volume (swap two vertices if needed)."""
    t = Tetra(verts)
    if t.signed_volume < 0:
        flipped = verts.copy()
        flipped[[2, 3]] = flipped[[3, 2]]
        return Tetra(flipped)
    return t


def partition_fourball_24(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> Partition:
    """Split a 4-ball tetrahedron into 24 path tetrahedra.

    Each face is cut into six right triangles by its incenter F and the three
    edge tangency points of the midsphere; coning every right triangle to the
    midsphere center G gives a path cell (vertex -> tangency point -> F -> G).
    Requires G strictly interior; a boundary G would give the degenerate
    18-cell case, which is detected and rejected, not constructed.
    """
    if not is_fourball(t, tol):
        raise NotFourBall("only 4-ball tetrahedra admit the 24-cell path partition")
    sphere = midsphere(t, tol)
    if sphere.location != "interior":
        raise CenterNotInterior(
            f"midsphere center is {sphere.location}; the 24-cell partition needs an"
            " interior center (a boundary center gives the 18-cell case)"
        )
    g = sphere.center
    tangents = fourball_tangents(t, tol)
    touch = edge_tangency_points(t, tangents)
    edge_of = {frozenset(ij): lab for lab, ij in EDGE_VERTS.items()}

    cells = []
    for m in range(4):
        incenter, _, _ = face_incircle(t, m)
        i, j, k = FACE_VERTS[m]
        for v in (i, j, k):
            for w in sorted(x for x in (i, j, k) if x != v):
                tp = touch[edge_of[frozenset((v, w))]]
                cells.append(_oriented(np.array([t.verts[v], tp, incenter, g])))
    return Partition(parent=t, cells=tuple(cells), kind="fourball24")


def red_refine_path(
    t: Tetra,
    ordering: tuple[int, int, int, int] | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> Partition:
    """Red refinement of a path tetrahedron into 8 path subtetrahedra.

    Uses the midpoints of all six edges plus the interior diagonal M1-M2,
    where M1 and M2 are the midpoints of the path diagonals OB and AC of the
    orthogonal path O -> A -> B -> C.  Every cell is again a path tetrahedron
    with volume exactly one eighth of the parent.
    """
    if ordering is None:
        ordering = is_path(t, tol)
        if ordering is None:
            raise NotPath("tetrahedron has no orthogonal path ordering")
    else:
        if sorted(ordering) != [0, 1, 2, 3]:
            raise ValueError(f"ordering must permute vertex indices 0..3, got {ordering}")
        v = t.verts
        o, a, b, c = ordering
        legs = (v[a] - v[o], v[b] - v[a], v[c] - v[b])
        for u1, u2 in ((legs[0], legs[1]), (legs[1], legs[2]), (legs[0], legs[2])):
            if abs(dot(u1, u2)) > 2 * tol.angle_abs * norm(u1) * norm(u2):
                raise NotPath(f"ordering {ordering} is not an orthogonal path")

    o, a, b, c = ordering
    v = t.verts
    mid = lambda i, j: 0.5 * (v[i] + v[j])
    m_oa, m_ob, m_oc = mid(o, a), mid(o, b), mid(o, c)
    m_ab, m_ac, m_bc = mid(a, b), mid(a, c), mid(b, c)

    corner_cells = [
        (v[o], m_oa, m_ob, m_oc),
        (v[a], m_oa, m_ab, m_ac),
        (v[b], m_ob, m_ab, m_bc),
        (v[c], m_oc, m_ac, m_bc),
    ]
    # Octahedron split along the M1-M2 diagonal (M1 = mid OB, M2 = mid AC);
    # the equatorial cycle avoids the opposite-midpoint pairs.
    equator = [m_oa, m_oc, m_bc, m_ab]
    interior_cells = [
        (m_ob, m_ac, equator[n], equator[(n + 1) % 4]) for n in range(4)
    ]
    cells = tuple(_oriented(np.array(cell)) for cell in corner_cells + interior_cells)
    return Partition(parent=t, cells=cells, kind="red8")


def _weld_points(points: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Merge points closer than ``radius``; returns (unique points, index map)."""
    unique: list[Array] = []
    index = np.empty(len(points), dtype=int)
    for n, p in enumerate(points):
        for u_idx, u in enumerate(unique):
            if norm(p - u) <= radius:
                index[n] = u_idx
                break
        else:
            index[n] = len(unique)
            unique.append(p)
    return np.array(unique), index


def validate_conformity(p: Partition, tol: Tolerance = DEFAULT_TOL) -> ConformityReport:
    """Certify that ``p`` is a conforming (face-to-face) partition.

    Welds cell vertices at tolerance, then requires every cell facet to occur
    exactly twice (interior) or once while lying inside a parent face
    (boundary).  Also reports the relative volume residual and classifies
    each touching cell pair by its shared simplex (vertex/edge/face).
    """
    parent_vol = volume(p.parent)
    total = sum(volume(c) for c in p.cells)
    vol_residual = abs(total - parent_vol) / parent_vol

    scale = max(edge_sextuple(p.parent).as_tuple())
    radius = tol.gap(scale)
    all_points = np.vstack([c.verts for c in p.cells])
    welded, index = _weld_points(all_points, radius)
    cells_idx = index.reshape(-1, 4)

    face_owners: dict[tuple[int, int, int], list[int]] = {}
    for n, quad in enumerate(cells_idx):
        if len(set(quad)) != 4:
            return ConformityReport(
                False, vol_residual, (n, n), f"cell {n} has merged vertices", {}
            )
        for skip in range(4):
            tri = tuple(sorted(q for pos, q in enumerate(quad) if pos != skip))
            face_owners.setdefault(tri, []).append(n)

    parent_planes = []
    for m in range(4):
        n_out = p.parent.outward_normal(m)
        parent_planes.append((n_out, dot(n_out, p.parent.verts[FACE_VERTS[m][0]])))

    def on_parent_boundary(tri: tuple[int, int, int]) -> bool:
        pts = welded[list(tri)]
        for n_out, offset in parent_planes:
            if all(abs(dot(n_out, q) - offset) <= radius for q in pts):
                return True
        return False

    is_ok = True
    worst: tuple[int, int] | None = None
    detail = ""
    for tri, owners in face_owners.items():
        if len(owners) == 2:
            continue
        if len(owners) == 1 and on_parent_boundary(tri):
            continue
        is_ok = False
        worst = (owners[0], owners[1]) if len(owners) > 1 else (owners[0], owners[0])
        detail = (
            f"facet {tri} owned by cells {owners}"
            + ("" if len(owners) > 1 else " is interior but unmatched")
        )
        break

    contact: dict[tuple[int, int], str] = {}
    kinds = {1: "vertex", 2: "edge", 3: "face"}
    vertex_sets = [set(map(int, quad)) for quad in cells_idx]
    for i in range(len(p.cells)):
        for j in range(i + 1, len(p.cells)):
            shared = len(vertex_sets[i] & vertex_sets[j])
            if shared == 0:
                continue
            if shared == 4:
                is_ok = False
                if worst is None:
                    worst, detail = (i, j), f"cells {i} and {j} coincide"
                contact[(i, j)] = "duplicate"
            else:
                contact[(i, j)] = kinds[shared]

    return ConformityReport(
        is_face_to_face=is_ok,
        volume_residual=vol_residual,
        worst_pair=worst,
        detail=detail,
        contact_types=contact,
    )
