"""Everything specific to 4-ball tetrahedra (a sphere tangent to all six
edges): tangent-length algebra, the five equivalent detections, midsphere
computation, the inner Soddy circle, kissing-ball feasibility, and the two
constructive builders (from a face, from a cone)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ApexDegenerate,
    BadConfiguration,
    ConvergenceError,
    DegenerateInput,
    NoTriangle,
    NotConstructible,
    NotFourBall,
    OutOfDomain,
)
from .geom_core import (
    DEFAULT_TOL,
    Array,
    Tolerance,
    as_point,
    cross,
    dot,
    line_foot,
    norm,
    normalize,
    point_line_distance,
    trilaterate,
)
from .tet_metrics import (
    EDGE_LABELS,
    EDGE_VERTS,
    FACE_VERTS,
    EdgeSextuple,
    Tetra,
    cayley_menger_blumenthal,
    dihedral_angles,
    edge_sextuple,
    opposite_sums_equal,
    tetra_exists,
    volume,
)


@dataclass(frozen=True)
class TangentLengths3:
    """Kissing-circle radii of a triangle's vertices (l_i at vertex i)."""

    l1: float
    l2: float
    l3: float

    def __post_init__(self) -> None:
        if min(self.l1, self.l2, self.l3) <= 0:
            raise ValueError("tangent lengths must be positive")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class TangentLengths4:
    """Midsphere tangent lengths of a 4-ball tetrahedron, indexed by vertex."""

    l1: float
    l2: float
    l3: float
    l4: float

    def __post_init__(self) -> None:
        if min(self.as_tuple()) <= 0:
            raise ValueError("tangent lengths must be positive")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.l1, self.l2, self.l3, self.l4)

    def induced_sextuple(self) -> EdgeSextuple:
        """Edge lengths l_i + l_j under the frozen labeling."""
        l1, l2, l3, l4 = self.as_tuple()
        return EdgeSextuple(l1 + l2, l2 + l3, l1 + l3, l3 + l4, l1 + l4, l2 + l4)


@dataclass(frozen=True)
class MidSphere:
    """Sphere tangent to all six edges; ``location`` says where its center
    sits relative to the tetrahedron (interior / boundary / exterior)."""

    center: Array
    radius: float
    location: str

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("midsphere radius must be positive")
        if self.location not in ("interior", "boundary", "exterior"):
            raise ValueError(f"unknown location {self.location!r}")


@dataclass(frozen=True)
class SoddyCircle:
    """Inner circle externally tangent to three mutually tangent circles."""

    center: Array
    radius: float


@dataclass(frozen=True)
class ConditionCheck:
    passed: bool
    residual: float


@dataclass(frozen=True)
class FourBallReport:
    """Numeric evaluation of the five equivalent 4-ball conditions."""

    edge_sums: ConditionCheck
    dihedral_sums: ConditionCheck
    incircle_tangency: ConditionCheck
    kissing_balls: ConditionCheck
    concurrent_perpendiculars: ConditionCheck

    def checks(self) -> dict[int, ConditionCheck]:
        return {
            1: self.edge_sums,
            2: self.dihedral_sums,
            3: self.incircle_tangency,
            4: self.kissing_balls,
            5: self.concurrent_perpendiculars,
        }

    @property
    def is_fourball(self) -> bool:
        return self.edge_sums.passed

    @property
    def agree(self) -> bool:
        verdicts = {c.passed for c in self.checks().values()}
        return len(verdicts) == 1


def triangle_to_tangents(a: float, b: float, c: float) -> TangentLengths3:
    """Unique (l1,l2,l3) with a = l1+l2, b = l1+l3, c = l2+l3."""
    l1 = 0.5 * (a + b - c)
    l2 = 0.5 * (a + c - b)
    l3 = 0.5 * (b + c - a)
    if min(l1, l2, l3) <= 0:
        raise NoTriangle(f"sides ({a}, {b}, {c}) violate a strict triangle inequality")
    return TangentLengths3(l1, l2, l3)


def tangents_to_triangle(t: TangentLengths3) -> tuple[float, float, float]:
    """Forward map (always a valid triangle)."""
    return (t.l1 + t.l2, t.l1 + t.l3, t.l2 + t.l3)


def is_fourball(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Condition 1 of the five: the three opposite-edge sums are equal."""
    return opposite_sums_equal(edge_sextuple(t), tol)


def fourball_tangents(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> TangentLengths4:
    """Per-vertex tangent lengths with every edge |PiPj| = l_i + l_j."""
    s = edge_sextuple(t)
    if not opposite_sums_equal(s, tol):
        raise NotFourBall(f"opposite edge sums differ: {s.opposite_sums()}")
    l1 = 0.5 * (s.a + s.c - s.b)
    l2 = s.a - l1
    l3 = s.c - l1
    l4 = s.e - l1
    ls = (l1, l2, l3, l4)
    if min(ls) <= 0:
        raise NotFourBall(f"derived tangent lengths are not all positive: {ls}")
    scale = max(s.as_tuple())
    residual = max(abs(s[lab] - ls[i] - ls[j]) for lab, (i, j) in EDGE_VERTS.items())
    if residual > 10 * tol.gap(scale):
        raise NotFourBall(f"tangent lengths inconsistent across faces (residual {residual:.3e})")
    return TangentLengths4(*ls)


def edge_tangency_points(t: Tetra, tangents: TangentLengths4 | None = None) -> dict[str, Array]:
    """Midsphere touching point on each edge: at distance l_i from P_i."""
    if tangents is None:
        tangents = fourball_tangents(t)
    ls = tangents.as_tuple()
    points = {}
    for lab, (i, j) in EDGE_VERTS.items():
        u = normalize(t.verts[j] - t.verts[i])
        points[lab] = t.verts[i] + ls[i] * u
    return points


def face_incircle(t: Tetra, m: int) -> tuple[Array, float, Array]:
    """Incenter, inradius, and outward unit normal of face ``m`` (opposite P_{m+1})."""
    i, j, k = FACE_VERTS[m]
    pi, pj, pk = t.verts[i], t.verts[j], t.verts[k]
    wi, wj, wk = norm(pj - pk), norm(pi - pk), norm(pi - pj)
    center = (wi * pi + wj * pj + wk * pk) / (wi + wj + wk)
    area = 0.5 * norm(cross(pj - pi, pk - pi))
    radius = 2.0 * area / (wi + wj + wk)
    return center, radius, t.outward_normal(m)


def _closest_point_to_lines(bases: list[Array], dirs: list[Array]) -> Array:
    """Least-squares point minimizing summed squared distance to lines."""
    lhs = np.zeros((3, 3))
    rhs = np.zeros(3)
    for p, d in zip(bases, dirs):
        proj = np.eye(3) - np.outer(d, d) / dot(d, d)
        lhs += proj
        rhs += proj @ p
    return np.linalg.solve(lhs, rhs)


def fourball_checks(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> FourBallReport:
    """Evaluate all five equivalent 4-ball conditions with residuals.

    For any tetrahedron the five verdicts agree; the residual magnitudes
    differ because the conditions measure in different units (lengths vs
    angles vs concurrency distances).
    """
    s = edge_sextuple(t)
    v = t.verts
    edge_scale = max(s.as_tuple())
    gap = tol.gap(edge_scale)

    # 1) opposite edge sums
    sums = s.opposite_sums()
    mean = sum(sums) / 3.0
    r1 = max(abs(x - mean) for x in sums)
    c1 = ConditionCheck(r1 <= gap, r1)

    # 2) sums of dihedral angles at opposite edges
    report = dihedral_angles(t, tol)
    asums = report.opposite_angle_sums()
    amean = sum(asums) / 3.0
    r2 = max(abs(x - amean) for x in asums)
    c2 = ConditionCheck(r2 <= tol.angle_abs, r2)

    # 3) adjacent-face incircles touch in one point on the shared edge
    r3 = 0.0
    for lab, (i, j) in EDGE_VERTS.items():
        touch = []
        for m in range(4):
            if m in (i, j):
                continue
            k = next(x for x in FACE_VERTS[m] if x not in (i, j))
            ti = 0.5 * (norm(v[j] - v[i]) + norm(v[k] - v[i]) - norm(v[k] - v[j]))
            touch.append(v[i] + ti * normalize(v[j] - v[i]))
        r3 = max(r3, norm(touch[0] - touch[1]))
    c3 = ConditionCheck(r3 <= gap, r3)

    # 4) four mutually externally tangent balls centered at the vertices
    rows = np.zeros((6, 4))
    lengths = np.zeros(6)
    for row, lab in enumerate(EDGE_LABELS):
        i, j = EDGE_VERTS[lab]
        rows[row, i] = rows[row, j] = 1.0
        lengths[row] = s[lab]
    radii, *_ = np.linalg.lstsq(rows, lengths, rcond=None)
    r4 = float(np.max(np.abs(rows @ radii - lengths)))
    c4 = ConditionCheck(r4 <= gap and float(radii.min()) > 0.0, r4)

    # 5) perpendiculars from the face incenters meet at one point
    bases, dirs = [], []
    for m in range(4):
        center, _, normal = face_incircle(t, m)
        bases.append(center)
        dirs.append(normal)
    candidate = _closest_point_to_lines(bases, dirs)
    r5 = max(point_line_distance(candidate, p, d) for p, d in zip(bases, dirs))
    c5 = ConditionCheck(r5 <= gap, r5)

    return FourBallReport(c1, c2, c3, c4, c5)


def midsphere(t: Tetra, tol: Tolerance = DEFAULT_TOL) -> MidSphere:
    """Midsphere of a 4-ball tetrahedron.

    The radius comes from the closed form rho = 2 l1 l2 l3 l4 / (3 vol); the
    center is seeded by the least-squares intersection of the face-incenter
    perpendiculars and then polished (Gauss-Newton) until all six edge-line
    distances equal rho.
    """
    tangents = fourball_tangents(t, tol)
    l1, l2, l3, l4 = tangents.as_tuple()
    vol = volume(t)
    rho = 2.0 * l1 * l2 * l3 * l4 / (3.0 * vol)

    bases, dirs = [], []
    for m in range(4):
        center, _, normal = face_incircle(t, m)
        bases.append(center)
        dirs.append(normal)
    g = _closest_point_to_lines(bases, dirs)

    edges = [(t.verts[i], t.verts[j] - t.verts[i]) for i, j in EDGE_VERTS.values()]
    scale = max(norm(d) for _, d in edges)
    for _ in range(60):
        residuals = np.empty(6)
        jac = np.empty((6, 3))
        for row, (base, direction) in enumerate(edges):
            foot = line_foot(g, base, direction)
            offset = g - foot
            dist = norm(offset)
            residuals[row] = dist - rho
            jac[row] = offset / dist
        if float(np.max(np.abs(residuals))) <= 1e-15 * scale:
            break
        step, *_ = np.linalg.lstsq(jac, -residuals, rcond=None)
        g = g + step
        if norm(step) <= 1e-16 * scale:
            break
    worst = max(abs(point_line_distance(g, b, d) - rho) for b, d in edges)
    if worst > 1e3 * tol.gap(scale):
        raise ConvergenceError(f"midsphere center refinement stalled (residual {worst:.3e})")

    signed = []
    for m in range(4):
        n = t.outward_normal(m)
        signed.append(dot(n, g - t.verts[FACE_VERTS[m][0]]))
    gap = tol.gap(scale)
    if max(signed) > gap:
        location = "exterior"
    elif max(signed) >= -gap:
        location = "boundary"
    else:
        location = "interior"
    return MidSphere(center=g, radius=rho, location=location)


def kissing_feasible(t4: TangentLengths4) -> bool:
    """Can four balls with these radii mutually kiss?  All face triangle
    inequalities hold automatically; the binding test is D3 > 0."""
    return bool(tetra_exists(t4.induced_sextuple()))


def soddy_radius(l1: float, l2: float, l3: float) -> float:
    """Inner Soddy radius by Descartes' theorem (curvatures k_i = 1/l_i)."""
    k1, k2, k3 = 1.0 / l1, 1.0 / l2, 1.0 / l3
    k0 = k1 + k2 + k3 + 2.0 * math.sqrt(k1 * k2 + k2 * k3 + k3 * k1)
    return 1.0 / k0


def soddy_inner(a1, a2, a3, t3: TangentLengths3, tol: Tolerance = DEFAULT_TOL) -> SoddyCircle:
    """Inner Soddy circle of three mutually externally tangent circles
    centered at a1, a2, a3 with radii t3."""
    p = [as_point(a1), as_point(a2), as_point(a3)]
    ls = t3.as_tuple()
    scale = max(norm(p[i] - p[j]) for i in range(3) for j in range(i + 1, 3))
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        gapped = abs(norm(p[i] - p[j]) - (ls[i] + ls[j]))
        if gapped > tol.gap(scale):
            raise BadConfiguration(
                f"circles {i + 1} and {j + 1} are not externally tangent (residual {gapped:.3e})"
            )

    l0 = soddy_radius(*ls)
    r1, r2, r3 = (l + l0 for l in ls)

    e1 = normalize(p[1] - p[0], tol)
    n = normalize(cross(p[1] - p[0], p[2] - p[0]), tol)
    e2 = cross(n, e1)
    d = norm(p[1] - p[0])
    a3_local = (dot(p[2] - p[0], e1), dot(p[2] - p[0], e2))

    x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    y_sq = r1 * r1 - x * x
    best = None
    for y in (math.sqrt(max(y_sq, 0.0)), -math.sqrt(max(y_sq, 0.0))):
        err = abs(math.hypot(x - a3_local[0], y - a3_local[1]) - r3)
        if best is None or err < best[0]:
            best = (err, y)
    err, y = best
    if err > 10 * tol.gap(scale):
        raise BadConfiguration(f"Soddy center placement failed (residual {err:.3e})")
    return SoddyCircle(center=p[0] + x * e1 + y * e2, radius=l0)


def fourball_from_face(
    triangle,
    l4: float,
    mirror: bool = False,
    tol: Tolerance = DEFAULT_TOL,
) -> Tetra:
    """Build a 4-ball tetrahedron on the given triangular face.

    The apex is the center of the fourth kissing ball of radius ``l4``; it is
    placed by trilateration on the positive-orientation side of the triangle
    (``mirror`` selects the reflected solution).  ``l4`` must exceed the
    face's inner Soddy radius l0: at l4 = l0 the apex falls into the plane.
    """
    a1, a2, a3 = (as_point(q) for q in triangle)
    s12, s13, s23 = norm(a2 - a1), norm(a3 - a1), norm(a3 - a2)
    tangents = triangle_to_tangents(s12, s13, s23)  # l_i at vertex a_i
    l0 = soddy_radius(*tangents.as_tuple())
    if l4 <= l0:
        raise ApexDegenerate(
            f"l4 = {l4:.9g} must exceed the inner Soddy radius l0 = {l0:.9g}"
        )
    pair = trilaterate(
        a1, a2, a3, tangents.l1 + l4, tangents.l2 + l4, tangents.l3 + l4, tol
    )
    if pair is None:
        raise NotConstructible(
            f"no kissing position for the fourth ball (l4 = {l4:.9g}, Soddy l0 = {l0:.9g}):"
            " the three spheres do not intersect"
        )
    apex = pair[1] if mirror else pair[0]
    try:
        return Tetra.from_points(a1, a2, a3, apex)
    except DegenerateInput as exc:
        raise ApexDegenerate(
            f"apex collapses into the face plane (l4 = {l4:.9g}, Soddy l0 = {l0:.9g})"
        ) from exc


def d3_profile(a: float, b: float, c: float, k: float) -> float:
    """D3 of the sextuple (a, b, c, k-a, k-b, k-c); quadratic in k."""
    if k <= max(a, b, c):
        raise OutOfDomain(f"k = {k} must exceed max(a, b, c) = {max(a, b, c)}")
    return cayley_menger_blumenthal(EdgeSextuple(a, b, c, k - a, k - b, k - c))


def _cone_residuals(ls: np.ndarray, cos_angles: tuple[float, float, float]) -> np.ndarray:
    """Squared-edge mismatch for the cone system, one entry per leg pair."""
    l2, l3, l4 = ls
    c23, c24, c34 = cos_angles
    out = np.empty(3)
    for row, (li, lj, cij) in enumerate(((l2, l3, c23), (l2, l4, c24), (l3, l4, c34))):
        ri, rj = 1.0 + li, 1.0 + lj
        out[row] = ri * ri + rj * rj - 2.0 * ri * rj * cij - (li + lj) ** 2
    return out


def _cone_jacobian(ls: np.ndarray, cos_angles: tuple[float, float, float]) -> np.ndarray:
    l2, l3, l4 = ls
    c23, c24, c34 = cos_angles
    jac = np.zeros((3, 3))
    for row, (i, j, cij) in enumerate(((0, 1, c23), (0, 2, c24), (1, 2, c34))):
        li, lj = ls[i], ls[j]
        jac[row, i] = 2.0 * (1.0 + li) - 2.0 * (1.0 + lj) * cij - 2.0 * (li + lj)
        jac[row, j] = 2.0 * (1.0 + lj) - 2.0 * (1.0 + li) * cij - 2.0 * (li + lj)
    return jac


def fourball_from_cone(
    u2,
    u3,
    u4,
    tol: Tolerance = DEFAULT_TOL,
    initial: tuple[float, float, float] = (1.0, 1.0, 1.0),
    max_iter: int = 200,
) -> Tetra:
    """The unique (up to scaling) 4-ball tetrahedron inscribed in a cone.

    The apex sits at the origin with unit tangent length, and the remaining
    vertices lie on the given edge directions at distances 1 + l_i.  The
    tangent lengths (l2, l3, l4) solve the three pairwise edge equations
    |P_i - P_j| = l_i + l_j; this solves them by damped Newton with the step
    clamped to keep every l_i positive.
    """
    units = [normalize(as_point(u), tol) for u in (u2, u3, u4)]
    if abs(float(np.linalg.det(np.array(units)))) <= tol.gap(1.0):
        raise DegenerateInput("cone edge directions are coplanar")
    cos_angles = (
        dot(units[0], units[1]),
        dot(units[0], units[2]),
        dot(units[1], units[2]),
    )

    ls = np.asarray(initial, dtype=float)
    if ls.shape != (3,) or ls.min() <= 0:
        raise ValueError("initial tangent lengths must be three positive numbers")

    converged = False
    lam = 0.0  # Levenberg-Marquardt shift, raised only when the Newton step stalls
    nudges = 0  # symmetric inputs can start on a critical point of the residual norm
    for _ in range(max_iter):
        res = _cone_residuals(ls, cos_angles)
        res_norm = float(np.max(np.abs(res)))
        if res_norm <= 1e-13 * max(1.0, (1.0 + ls.max()) ** 2):
            converged = True
            break
        jac = _cone_jacobian(ls, cos_angles)
        accepted = False
        for _attempt in range(12):
            try:
                if lam == 0.0:
                    step = np.linalg.solve(jac, -res)
                else:
                    step = np.linalg.solve(jac.T @ jac + lam * np.eye(3), -jac.T @ res)
            except np.linalg.LinAlgError:
                lam = max(10.0 * lam, 1e-8)
                continue
            damping = 1.0
            while damping > 1e-8:
                trial = ls + damping * step
                if trial.min() > 1e-12:
                    trial_norm = float(np.max(np.abs(_cone_residuals(trial, cos_angles))))
                    if trial_norm < res_norm:
                        break
                damping *= 0.5
            else:
                lam = max(10.0 * lam, 1e-8)
                continue
            ls = ls + damping * step
            lam = 0.0 if lam < 1e-7 else lam / 10.0
            accepted = True
            break
        if not accepted:
            if nudges < 3:
                ls = ls * np.array([1.13, 0.91, 1.05])
                lam = 0.0
                nudges += 1
                continue
            break
    if not converged:
        res = _cone_residuals(ls, cos_angles)
        if float(np.max(np.abs(res))) > 1e-10 * max(1.0, (1.0 + ls.max()) ** 2):
            raise ConvergenceError("cone solver did not converge to positive tangent lengths")

    verts = np.vstack([np.zeros(3)] + [(1.0 + l) * u for l, u in zip(ls, units)])
    return Tetra(verts)
