"""Per-tetrahedron measurements: edge labeling, volume, Cayley-Menger
determinants, dihedral angles, classical spheres, and realizability.

Edge labeling is frozen everywhere in this package:

    a = |P1P2|   b = |P2P3|   c = |P1P3|
    d = |P3P4|   e = |P1P4|   f = |P2P4|

so the opposite pairs are (a,d), (b,e), (c,f) and the four faces carry the
side triples (a,b,c), (a,e,f), (b,d,f), (c,d,e).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateInput, NotRealizable
from .geom_core import DEFAULT_TOL, Array, Tolerance, as_point, cross, dot, norm, normalize

# Edge label -> (i, j) vertex indices (0-based).
EDGE_VERTS: dict[str, tuple[int, int]] = {
    "a": (0, 1),
    "b": (1, 2),
    "c": (0, 2),
    "d": (2, 3),
    "e": (0, 3),
    "f": (1, 3),
}
EDGE_LABELS = ("a", "b", "c", "d", "e", "f")
OPPOSITE_PAIRS = (("a", "d"), ("b", "e"), ("c", "f"))

# Face m is the one opposite vertex m.
FACE_VERTS: tuple[tuple[int, int, int], ...] = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
FACE_NAMES = ("P2P3P4", "P1P3P4", "P1P2P4", "P1P2P3")
# Side triples of the four faces, in FACE_NAMES order.
FACE_EDGES: tuple[tuple[str, str, str], ...] = (("b", "d", "f"), ("c", "d", "e"), ("a", "f", "e"), ("a", "b", "c"))
# Edge label -> the two incident faces (as indices into FACE_VERTS).
EDGE_FACES: dict[str, tuple[int, int]] = {
    lab: tuple(m for m in range(4) if m not in ij)  # type: ignore[misc]
    for lab, ij in EDGE_VERTS.items()
}


class Tetra:
    """Four labeled vertices in 3-space; the universal geometric carrier.

    Rejects degenerate (near-zero volume) vertex sets unless built through
    :meth:`degenerate`, which exists for Soddy-limit configurations.
    """

    __slots__ = ("verts",)

    def __init__(self, verts, _allow_degenerate: bool = False) -> None:
        v = np.asarray(verts, dtype=float)
        if v.shape != (4, 3):
            raise ValueError(f"expected 4x3 vertex array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v = v.copy()
        v.setflags(write=False)
        self.verts = v
        if not _allow_degenerate and abs(self.signed_volume) <= DEFAULT_TOL.abs:
            raise DegenerateInput(
                f"vertices are (near-)coplanar: |signed volume| = {abs(self.signed_volume):.3e}"
            )

    @classmethod
    def from_points(cls, p1, p2, p3, p4) -> "Tetra":
        return cls(np.array([as_point(p1), as_point(p2), as_point(p3), as_point(p4)]))

    @classmethod
    def degenerate(cls, verts) -> "Tetra":
        """Construct without the volume check (flat Soddy-limit cases)."""
        return cls(verts, _allow_degenerate=True)

    @property
    def p1(self) -> Array:
        return self.verts[0]

    @property
    def p2(self) -> Array:
        return self.verts[1]

    @property
    def p3(self) -> Array:
        return self.verts[2]

    @property
    def p4(self) -> Array:
        return self.verts[3]

    @property
    def signed_volume(self) -> float:
        m = self.verts[1:] - self.verts[0]
        return float(np.linalg.det(m)) / 6.0

    @property
    def centroid(self) -> Array:
        return self.verts.mean(axis=0)

    def face_points(self, m: int) -> Array:
        """Vertices of the face opposite vertex ``m`` (3x3 array)."""
        return self.verts[list(FACE_VERTS[m])]

    def outward_normal(self, m: int) -> Array:
        """Unit normal of face ``m`` pointing away from the opposite vertex."""
        i, j, k = FACE_VERTS[m]
        n = cross(self.verts[j] - self.verts[i], self.verts[k] - self.verts[i])
        if dot(n, self.verts[m] - self.verts[i]) > 0:
            n = -n
        return normalize(n)

    def transformed(self, rotation=None, translation=None, scale: float = 1.0) -> "Tetra":
        v = self.verts * scale
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            v = v + as_point(translation)
        return Tetra(v, _allow_degenerate=True)

    def __repr__(self) -> str:
        rows = ", ".join(f"P{i + 1}={tuple(round(x, 6) for x in p)}" for i, p in enumerate(self.verts))
        return f"Tetra({rows})"


@dataclass(frozen=True)
class EdgeSextuple:
    """Six edge lengths under the frozen (a,b,c | d,e,f) opposite-pair labeling."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self) -> None:
        for lab in EDGE_LABELS:
            val = getattr(self, lab)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"edge {lab} must be a positive finite length, got {val!r}")

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def __getitem__(self, label: str) -> float:
        return getattr(self, label)

    def opposite_sums(self) -> tuple[float, float, float]:
        return (self.a + self.d, self.b + self.e, self.c + self.f)

    def faces(self) -> dict[str, tuple[float, float, float]]:
        """Side lengths of the four faces, keyed by face name."""
        return {
            name: tuple(getattr(self, lab) for lab in labs)  # type: ignore[misc]
            for name, labs in zip(FACE_NAMES, FACE_EDGES)
        }


def edge_sextuple(t: Tetra) -> EdgeSextuple:
    """Measure the six pairwise distances of ``t`` under the frozen labeling."""
    v = t.verts
    return EdgeSextuple(*(norm(v[j] - v[i]) for i, j in (EDGE_VERTS[lab] for lab in EDGE_LABELS)))


def cayley_menger_d3(s: EdgeSextuple) -> float:
    """D3 as the 5x5 bordered determinant of squared edge lengths."""
    a2, b2, c2, d2, e2, f2 = (x * x for x in s.as_tuple())
    m = np.array(
        [
            [0.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, a2, c2, e2],
            [1.0, a2, 0.0, b2, f2],
            [1.0, c2, b2, 0.0, d2],
            [1.0, e2, f2, d2, 0.0],
        ]
    )
    return float(np.linalg.det(m))


def cayley_menger_blumenthal(s: EdgeSextuple) -> float:
    """D3 via the 3x3 expansion; identical value to :func:`cayley_menger_d3`."""
    a2, b2, c2, d2, e2, f2 = (x * x for x in s.as_tuple())
    p = a2 + c2 - b2
    q = c2 + e2 - d2
    r = a2 + e2 - f2
    return 2.0 * (4.0 * a2 * c2 * e2 + p * q * r - a2 * q * q - c2 * r * r - e2 * p * p)


def volume(t: Tetra) -> float:
    """Unsigned volume; satisfies 288 * volume^2 = D3 of the edge sextuple."""
    return abs(t.signed_volume)


class Existence(Enum):
    YES = "yes"
    NO_TRIANGLE = "no-triangle"
    NO_EMBEDDING = "no-embedding"


@dataclass(frozen=True)
class ExistenceReport:
    """Outcome of the six-lengths realizability test.

    The two failure modes are reported separately: a face can violate a
    triangle inequality while D3 > 0, and all faces can be valid triangles
    while D3 < 0.
    """

    status: Existence
    failing_face: str | None
    d3: float

    def __bool__(self) -> bool:
        return self.status is Existence.YES


def tetra_exists(s: EdgeSextuple) -> ExistenceReport:
    """Realizability of six lengths: all four faces are triangles and D3 > 0."""
    d3 = cayley_menger_d3(s)
    for name, (x, y, z) in s.faces().items():
        if x + y <= z or y + z <= x or x + z <= y:
            return ExistenceReport(Existence.NO_TRIANGLE, name, d3)
    if d3 <= 0.0:
        return ExistenceReport(Existence.NO_EMBEDDING, None, d3)
    return ExistenceReport(Existence.YES, None, d3)


def realize(s: EdgeSextuple, tol: Tolerance = DEFAULT_TOL) -> Tetra:
    """Canonical embedding of a realizable sextuple.

    P1 at the origin, P2 on the positive x-axis, P3 in the z=0 plane with
    y > 0, P4 with z > 0.
    """
    report = tetra_exists(s)
    if not report:
        raise NotRealizable(
            f"edge lengths do not embed: {report.status.value}"
            + (f" on face {report.failing_face}" if report.failing_face else "")
            + f" (D3 = {report.d3:.6g})"
        )
    a, b, c, d, e, f = s.as_tuple()
    x3 = (a * a + c * c - b * b) / (2.0 * a)
    y3 = math.sqrt(max(c * c - x3 * x3, 0.0))
    x4 = (a * a + e * e - f * f) / (2.0 * a)
    y4 = (e * e + c * c - d * d - 2.0 * x3 * x4) / (2.0 * y3)
    z4_sq = e * e - x4 * x4 - y4 * y4
    z4 = math.sqrt(max(z4_sq, 0.0))
    return Tetra(
        np.array(
            [
                [0.0, 0.0, 0.0],
                [a, 0.0, 0.0],
                [x3, y3, 0.0],
                [x4, y4, z4],
            ]
        )
    )


@dataclass(frozen=True)
class AngleReport:
    """Six dihedral angles (radians, keyed by edge label), their sum, the
    4x3 interior face angles, and classification flags."""

    angles: dict[str, float]
    sigma: float
    face_angles: dict[str, tuple[float, float, float]]
    nonobtuse: bool
    path: bool
    equifacial: bool
    fourball: bool

    def opposite_angle_sums(self) -> tuple[float, float, float]:
        return tuple(self.angles[x] + self.angles[y] for x, y in OPPOSITE_PAIRS)  # type: ignore[return-value]


def _clamped_arccos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


def opposite_sums_equal(s: EdgeSextuple, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff a+d = b+e = c+f within tolerance (the cheap 4-ball predicate)."""
    s1, s2, s3 = s.opposite_sums()
    scale = max(s1, s2, s3)
    return tol.eq(s1, s2, scale) and tol.eq(s2, s3, scale) and tol.eq(s1, s3, scale)


def dihedral_angles(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> AngleReport:
    """Dihedral angles from outward face normals: angle = arccos(-n_i . n_j).

    Raises DegenerateInput when a face normal cannot be formed.
    """
    try:
        normals = [t.outward_normal(m) for m in range(4)]
    except DegenerateInput as exc:
        raise DegenerateInput(f"cannot compute dihedral angles: {exc}") from exc

    angles: dict[str, float] = {}
    for lab in EDGE_LABELS:
        m1, m2 = EDGE_FACES[lab]
        angles[lab] = _clamped_arccos(-dot(normals[m1], normals[m2]))
    sigma = sum(angles.values())

    face_angles: dict[str, tuple[float, float, float]] = {}
    for name, (i, j, k) in zip(FACE_NAMES, FACE_VERTS):
        tri = []
        for v, w1, w2 in ((i, j, k), (j, i, k), (k, i, j)):
            u1 = normalize(t.verts[w1] - t.verts[v])
            u2 = normalize(t.verts[w2] - t.verts[v])
            tri.append(_clamped_arccos(dot(u1, u2)))
        face_angles[name] = tuple(tri)  # type: ignore[assignment]

    s = edge_sextuple(t)
    return AngleReport(
        angles=angles,
        sigma=sigma,
        face_angles=face_angles,
        nonobtuse=all(th <= math.pi / 2 + tol.angle_abs for th in angles.values()),
        path=is_path(t, tol) is not None,
        equifacial=is_equifacial(t, tol),
        fourball=opposite_sums_equal(s, tol),
    )


def _face_areas(t: Tetra) -> np.ndarray:
    areas = np.empty(4)
    for m in range(4):
        i, j, k = FACE_VERTS[m]
        areas[m] = 0.5 * norm(cross(t.verts[j] - t.verts[i], t.verts[k] - t.verts[i]))
    return areas


def insphere(t: Tetra) -> tuple[Array, float]:
    """Incenter and inradius: r = 3 vol / total face area."""
    vol = volume(t)
    if vol <= DEFAULT_TOL.abs:
        raise DegenerateInput("degenerate tetrahedron has no insphere")
    areas = _face_areas(t)
    total = float(areas.sum())
    center = (areas[:, None] * t.verts).sum(axis=0) / total
    return center, 3.0 * vol / total


def circumsphere(t: Tetra) -> tuple[Array, float]:
    """Circumcenter (equidistant from all four vertices) and circumradius."""
    v = t.verts
    lhs = 2.0 * (v[1:] - v[0])
    rhs = (v[1:] ** 2).sum(axis=1) - (v[0] ** 2).sum()
    try:
        center = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInput("degenerate tetrahedron has no circumsphere") from exc
    return center, norm(v[0] - center)


def is_path(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> tuple[int, int, int, int] | None:
    """Search the 12 essentially distinct orderings (O,A,B,C) for a path of
    three mutually orthogonal edges OA, AB, BC; return one or None."""
    v = t.verts
    half_pi = math.pi / 2
    for perm in itertools.permutations(range(4)):
        if perm[0] > perm[3]:
            continue  # the reversed ordering describes the same path
        o, a, b, c = perm
        u1 = v[a] - v[o]
        u2 = v[b] - v[a]
        u3 = v[c] - v[b]
        ok = True
        for x, y in ((u1, u2), (u2, u3), (u1, u3)):
            ang = _clamped_arccos(dot(x, y) / (norm(x) * norm(y)))
            if abs(ang - half_pi) > tol.angle_abs:
                ok = False
                break
        if ok:
            return perm
    return None


def is_equifacial(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff opposite edges are pairwise equal (all faces congruent)."""
    s = edge_sextuple(t)
    return all(tol.eq(s[x], s[y]) for x, y in OPPOSITE_PAIRS)
