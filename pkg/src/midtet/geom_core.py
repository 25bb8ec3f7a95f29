"""Low-level 3D primitives: tolerance policy, vector algebra, line distances,
and the three-sphere intersection (trilateration) used by the builders."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput

Array = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """Comparison policy used across the package.

    Scalar equality holds at ``max(abs, rel * scale)`` where ``scale`` is the
    largest magnitude involved; angles compare against ``angle_abs`` radians.
    """

    rel: float = 1e-9
    abs: float = 1e-12
    angle_abs: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.rel > 0 and self.abs > 0 and self.angle_abs > 0):
            raise ValueError("all tolerances must be positive")

    def gap(self, scale: float = 1.0) -> float:
        """Admissible absolute deviation at the given magnitude."""
        return max(self.abs, self.rel * abs(scale))

    def eq(self, x: float, y: float, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(x), abs(y))
        return abs(x - y) <= self.gap(scale)

    def is_zero(self, x: float, scale: float = 1.0) -> bool:
        return abs(x) <= self.gap(scale)

    def angle_eq(self, x: float, y: float) -> bool:
        return abs(x - y) <= self.angle_abs


DEFAULT_TOL = Tolerance()


def as_point(p) -> Array:
    """Coerce to a finite (3,) float array; reject NaN/Inf and wrong shapes."""
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected 3 coordinates, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coordinates must be finite")
    return a


def dot(u, v) -> float:
    return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


def cross(u, v) -> Array:
    return np.array(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )


def norm(u) -> float:
    return math.sqrt(dot(u, u))


def normalize(u, tol: Tolerance = DEFAULT_TOL) -> Array:
    n = norm(u)
    if n <= tol.abs:
        raise DegenerateInput(f"cannot normalize near-zero vector (|u|={n:g})")
    return np.asarray(u, dtype=float) / n


def point_line_distance(p, base, direction, tol: Tolerance = DEFAULT_TOL) -> float:
    """Euclidean distance from ``p`` to the infinite line ``base + t*direction``."""
    d = np.asarray(direction, dtype=float)
    dd = dot(d, d)
    if dd <= tol.abs * tol.abs:
        raise DegenerateInput("line direction is degenerate")
    w = np.asarray(p, dtype=float) - np.asarray(base, dtype=float)
    perp = w - (dot(w, d) / dd) * d
    return norm(perp)


def line_foot(p, base, direction) -> Array:
    """Foot of the perpendicular from ``p`` on the line ``base + t*direction``."""
    d = np.asarray(direction, dtype=float)
    w = np.asarray(p, dtype=float) - np.asarray(base, dtype=float)
    return np.asarray(base, dtype=float) + (dot(w, d) / dot(d, d)) * d


@dataclass(frozen=True)
class Plane:
    """Oriented plane {x : normal . x = offset} with unit normal."""

    normal: Array
    offset: float

    def __post_init__(self) -> None:
        n = as_point(self.normal)
        if abs(norm(n) - 1.0) > 1e-9:
            raise ValueError("plane normal must be a unit vector")
        object.__setattr__(self, "normal", n)

    @classmethod
    def from_points(cls, p, q, r, tol: Tolerance = DEFAULT_TOL) -> "Plane":
        p = as_point(p)
        n = normalize(cross(np.asarray(q, float) - p, np.asarray(r, float) - p), tol)
        return cls(n, dot(n, p))

    def signed_distance(self, x) -> float:
        return dot(self.normal, x) - self.offset


def trilaterate(
    c1,
    c2,
    c3,
    r1: float,
    r2: float,
    r3: float,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[Array, Array] | None:
    """Intersect three spheres (centers ``ci``, radii ``ri``).

    Returns the mirror pair of intersection points, ordered (+side, -side) of
    the plane through the centers with normal ex x ey of the local frame, or
    None when the spheres have no common point.  The squared height is clamped
    to zero when within ``tol.abs`` of it (tangency) and declared empty below
    ``-tol.abs``.
    """
    if min(r1, r2, r3) <= 0:
        raise ValueError("radii must be positive")
    p1, p2, p3 = as_point(c1), as_point(c2), as_point(c3)

    u = p2 - p1
    d = norm(u)
    if d <= tol.abs:
        raise DegenerateInput("sphere centers coincide")
    ex = u / d
    v = p3 - p1
    i = dot(ex, v)
    ey_raw = v - i * ex
    j = norm(ey_raw)
    span = max(d, norm(v))
    if j <= tol.gap(span):
        raise DegenerateInput("sphere centers are collinear")
    ey = ey_raw / j
    ez = cross(ex, ey)

    x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    y = (r1 * r1 - r3 * r3 + i * i + j * j) / (2.0 * j) - (i / j) * x
    z_sq = r1 * r1 - x * x - y * y
    if z_sq < -tol.abs:
        return None
    z = math.sqrt(max(z_sq, 0.0))
    mid = p1 + x * ex + y * ey
    return mid + z * ez, mid - z * ez
