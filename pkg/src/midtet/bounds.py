"""Angle-sum bounds: closed forms, parameterized tetrahedron families,
sweep/certification engines, and the spherical-trigonometry solvers that
certify the 4-ball lower bound 6 arccos(1/3).

All bound verdicts here are numerical certifications on the sampled grids,
not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    ApexDegenerate,
    ConvergenceError,
    DegenerateInput,
    NotConstructible,
    OutOfDomain,
)
from .fourball import fourball_from_face, soddy_radius
from .geom_core import DEFAULT_TOL, Tolerance, dot, norm
from .tet_metrics import Tetra, dihedral_angles

TWO_PI = 2.0 * math.pi
THREE_PI = 3.0 * math.pi
SIGMA_UPPER_PATH = 2.5 * math.pi
SIGMA_LOWER_FOURBALL = 6.0 * math.acos(1.0 / 3.0)
SIGMA_LOWER_CUBE_CORNER = 1.5 * math.pi + 3.0 * math.acos(math.sqrt(3.0) / 3.0)
K_MAX_THEORY = 2.0 * math.acos(-1.0 / 3.0)
EQ_PYRAMID_H0 = math.sqrt(2.0 / 3.0)  # regular height for unit base edge


def sigma_path_closed(a: float) -> float:
    """Closed-form dihedral angle sum of the path tetrahedron
    O, (a,0,0), (a,1,0), (a,1,a):  3pi/2 + 2 arctan a + arccos(a^2/(a^2+1))."""
    if a <= 0:
        raise OutOfDomain("path parameter must be positive")
    return 1.5 * math.pi + 2.0 * math.atan(a) + math.acos(a * a / (a * a + 1.0))


def sigma_cube_corner(a: float, b: float, c: float) -> float:
    """Dihedral angle sum of the trirectangular corner tetrahedron with legs a, b, c."""
    return dihedral_angles(make_cube_corner(a, b, c)).sigma


def make_path_diag(a: float) -> Tetra:
    if a <= 0:
        raise OutOfDomain("path parameter must be positive")
    return Tetra(np.array([[0.0, 0.0, 0.0], [a, 0.0, 0.0], [a, 1.0, 0.0], [a, 1.0, a]]))


def make_cube_corner(a: float, b: float, c: float) -> Tetra:
    if min(a, b, c) <= 0:
        raise OutOfDomain("cube corner legs must be positive")
    return Tetra(np.array([[0.0, 0.0, 0.0], [a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]]))


def make_eq_pyramid(h: float) -> Tetra:
    """Equilateral base (side 1), apex over the base centroid at height h.
    Every member is 4-ball: each base edge is opposite a lateral edge."""
    if h <= 0:
        raise OutOfDomain("pyramid height must be positive")
    s3 = math.sqrt(3.0)
    return Tetra(
        np.array(
            [
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.5, s3 / 2.0, 0.0],
                [0.5, s3 / 6.0, h],
            ]
        )
    )


def make_equifacial_box(p: float, q: float, r: float) -> Tetra:
    """Tetrahedron inscribed in the box (p,q,r); opposite edges are equal."""
    if min(p, q, r) <= 0:
        raise OutOfDomain("box dimensions must be positive")
    return Tetra(np.array([[0.0, 0.0, 0.0], [p, q, 0.0], [p, 0.0, r], [0.0, q, r]]))


def sample_fourball(rng: np.random.Generator) -> tuple[Tetra, tuple[float, float, float, float]]:
    """One random 4-ball tetrahedron.

    Face tangent lengths l1..l3 are log-uniform in [0.1, 10]; the apex tangent
    length is uniform in (l0, l0 + 10] above the face's inner Soddy radius.
    Samples in the infeasible regime (kissing position does not exist) are
    rejected and redrawn.
    """
    for _ in range(500):
        l1, l2, l3 = (float(x) for x in 10.0 ** rng.uniform(-1.0, 1.0, size=3))
        a12, a13, a23 = l1 + l2, l1 + l3, l2 + l3
        x3 = (a12 * a12 + a13 * a13 - a23 * a23) / (2.0 * a12)
        y3 = math.sqrt(max(a13 * a13 - x3 * x3, 0.0))
        tri = (np.zeros(3), np.array([a12, 0.0, 0.0]), np.array([x3, y3, 0.0]))
        l4 = soddy_radius(l1, l2, l3) + 10.0 * (1.0 - float(rng.uniform()))
        try:
            return fourball_from_face(tri, l4), (l1, l2, l3, l4)
        except (NotConstructible, ApexDegenerate, DegenerateInput):
            continue
    raise ConvergenceError("could not draw a feasible random 4-ball tetrahedron")


@dataclass(frozen=True)
class Family:
    """A parameterized family of tetrahedra used by the sweep engine."""

    name: str
    domain: str
    arity: int  # parameters per sample; 0 means seeded-random
    generator: Callable[..., Tetra]


FAMILIES: dict[str, Family] = {
    "path_diag": Family("path_diag", "a > 0 (diagonal path family, b = 1, c = a)", 1, make_path_diag),
    "cube_corner": Family("cube_corner", "legs a, b, c > 0", 3, make_cube_corner),
    "eq_pyramid": Family("eq_pyramid", "height h > 0 over a unit equilateral base", 1, make_eq_pyramid),
    "equifacial_box": Family("equifacial_box", "box dimensions p, q, r > 0", 3, make_equifacial_box),
    "random_fourball": Family("random_fourball", "seeded random tangent lengths", 0, sample_fourball),
}


def generate_family(family: str | Family, parameter) -> Tetra:
    """Instantiate one family member; random_fourball takes an integer seed."""
    fam = FAMILIES[family] if isinstance(family, str) else family
    if fam.arity == 0:
        tet, _ = sample_fourball(np.random.default_rng(int(parameter)))
        return tet
    if fam.arity == 1:
        return fam.generator(float(parameter))
    return fam.generator(*(float(x) for x in parameter))


@dataclass(frozen=True)
class SweepSample:
    params: tuple[float, ...]
    sigma: float
    flags: dict[str, bool]


@dataclass(frozen=True)
class SweepResult:
    family: str
    samples: tuple[SweepSample, ...]
    sigma_min: float
    sigma_max: float
    argmin: tuple[float, ...]
    argmax: tuple[float, ...]
    verdicts: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


def default_grid(family: str, n: int = 200) -> list:
    """Grid used by the certification sweeps; eq_pyramid includes h0 exactly
    and equifacial_box includes the cube point."""
    if family == "path_diag":
        return list(np.logspace(-3.0, 3.0, n))
    if family == "cube_corner":
        per_axis = max(2, round(n ** (1.0 / 3.0)))
        axis = np.linspace(0.5, 2.0, per_axis)
        return [(x, y, z) for x in axis for y in axis for z in axis]
    if family == "eq_pyramid":
        hs = set(np.geomspace(EQ_PYRAMID_H0 / 16.0, EQ_PYRAMID_H0 * 16.0, max(2, n - 1)))
        hs.add(EQ_PYRAMID_H0)
        return sorted(hs)
    if family == "equifacial_box":
        per_axis = max(2, round(n ** (1.0 / 3.0)))
        axis = sorted(set(np.linspace(0.5, 2.0, per_axis)) | {1.0})
        return [(x, y, z) for x in axis for y in axis for z in axis]
    if family == "random_fourball":
        return list(range(n))
    raise KeyError(f"unknown family {family!r}")


def _sweep_verdicts(family: str, samples: Sequence[SweepSample]) -> dict[str, bool]:
    eps = 1e-9
    sigmas = np.array([s.sigma for s in samples])
    lo, hi = float(sigmas.min()), float(sigmas.max())
    v: dict[str, bool] = {}
    if family == "path_diag":
        v["inside_open_(2pi,2.5pi)"] = bool(np.all(sigmas > TWO_PI) and np.all(sigmas < SIGMA_UPPER_PATH))
        v["infimum_2pi_within_0.01"] = lo - TWO_PI <= 0.01
        v["supremum_2.5pi_within_0.01"] = SIGMA_UPPER_PATH - hi <= 0.01
    elif family == "cube_corner":
        v["above_cube_corner_bound"] = bool(np.all(sigmas >= SIGMA_LOWER_CUBE_CORNER - eps))
        v["below_2.5pi"] = bool(np.all(sigmas < SIGMA_UPPER_PATH))
        mn = samples[int(sigmas.argmin())].params
        v["min_at_equal_legs"] = max(mn) - min(mn) <= 1e-12
        v["min_is_434.2deg_within_0.1deg"] = abs(lo - SIGMA_LOWER_CUBE_CORNER) <= 0.1 * math.pi / 180.0
    elif family == "eq_pyramid":
        v["above_fourball_bound"] = bool(np.all(sigmas >= SIGMA_LOWER_FOURBALL - eps))
        v["below_3pi"] = bool(np.all(sigmas < THREE_PI))
        k = int(sigmas.argmin())
        diffs = np.diff(sigmas)
        v["unimodal_min_then_rise"] = bool(np.all(diffs[:k] <= eps) and np.all(diffs[k:] >= -eps))
        v["min_at_h0"] = abs(samples[k].params[0] - EQ_PYRAMID_H0) <= 1e-12
        v["min_reaches_bound_1e-9"] = abs(lo - SIGMA_LOWER_FOURBALL) <= eps
    elif family == "equifacial_box":
        v["above_2pi_strict"] = bool(np.all(sigmas > TWO_PI))
        v["at_most_fourball_bound"] = bool(np.all(sigmas <= SIGMA_LOWER_FOURBALL + eps))
        at_bound = [s for s in samples if s.sigma >= SIGMA_LOWER_FOURBALL - eps]
        v["bound_attained_only_at_cube"] = all(max(s.params) - min(s.params) <= 1e-12 for s in at_bound) and bool(
            at_bound
        )
    elif family == "random_fourball":
        v["above_fourball_bound"] = bool(np.all(sigmas >= SIGMA_LOWER_FOURBALL - eps))
        v["below_3pi"] = bool(np.all(sigmas < THREE_PI))
    return v


def sweep(
    family: str,
    grid: Iterable | int | None = None,
    seed: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> SweepResult:
    """Evaluate the angle sum over a family grid and certify its claimed bounds.

    ``grid`` is a list of parameters (scalars or tuples), or for the
    random_fourball family the number of samples (seeded by ``seed``).
    Samples are reported sorted by parameter so results are order-independent.
    """
    fam = FAMILIES[family]
    samples: list[SweepSample] = []
    if fam.arity == 0:
        n = int(grid) if grid is not None else 10_000
        rng = np.random.default_rng(seed)
        for _ in range(n):
            tet, drawn = sample_fourball(rng)
            report = dihedral_angles(tet, tol)
            samples.append(SweepSample(drawn, report.sigma, _flags(report)))
    else:
        if grid is None:
            grid = default_grid(family)
        for params in grid:
            tup = (float(params),) if np.isscalar(params) else tuple(float(x) for x in params)
            report = dihedral_angles(fam.generator(*tup), tol)
            samples.append(SweepSample(tup, report.sigma, _flags(report)))
    samples.sort(key=lambda s: s.params)

    sigmas = [s.sigma for s in samples]
    i_min = int(np.argmin(sigmas))
    i_max = int(np.argmax(sigmas))
    return SweepResult(
        family=family,
        samples=tuple(samples),
        sigma_min=sigmas[i_min],
        sigma_max=sigmas[i_max],
        argmin=samples[i_min].params,
        argmax=samples[i_max].params,
        verdicts=_sweep_verdicts(family, samples),
    )


def _flags(report) -> dict[str, bool]:
    return {
        "fourball": report.fourball,
        "path": report.path,
        "equifacial": report.equifacial,
        "nonobtuse": report.nonobtuse,
    }


# ---------------------------------------------------------------------------
# Spherical machinery behind the 4-ball lower bound.


@dataclass(frozen=True)
class SphericalTriple:
    """Geodesic side lengths of the normal triangle on the unit sphere."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        for side in self.as_tuple():
            if not 0.0 < side < TWO_PI:
                raise ValueError(f"spherical side {side} outside (0, 2pi)")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


def spherical_cos_side(b: float, c: float, alpha: float) -> float:
    """Spherical law of cosines: side a from sides b, c and included angle alpha."""
    val = math.cos(b) * math.cos(c) + math.sin(b) * math.sin(c) * math.cos(alpha)
    return math.acos(min(1.0, max(-1.0, val)))


def _place_spherical_triangle(a: float, b: float, c: float) -> tuple[np.ndarray, ...] | None:
    """Three unit vectors with pairwise geodesic distances a (m1,m2),
    b (m1,m3), c (m2,m3); None if no such triangle exists."""
    if not all(0.0 < s < math.pi for s in (a, b, c)):
        return None
    m1 = np.array([0.0, 0.0, 1.0])
    m2 = np.array([math.sin(a), 0.0, math.cos(a)])
    sa, sb = math.sin(a), math.sin(b)
    cos_phi = (math.cos(c) - math.cos(a) * math.cos(b)) / (sa * sb)
    if abs(cos_phi) > 1.0 + 1e-12:
        return None
    phi = math.acos(min(1.0, max(-1.0, cos_phi)))
    m3 = np.array([sb * math.cos(phi), sb * math.sin(phi), math.cos(b)])
    return m1, m2, m3


def _symmetric_config_exists(a: float, b: float, k: float, tol_abs: float = 1e-8) -> bool:
    """Closed-form check that four normals realize the isosceles configuration
    (sides a, b, b and opposite sides k-a, k-b, k-b)."""
    ca2 = math.cos(0.5 * a)
    if abs(ca2) < 1e-12:
        return False
    ct = math.cos(b) / ca2
    cu = math.cos(k - b) / ca2
    if max(abs(ct), abs(cu)) > 1.0 + 1e-12:
        return False
    t = math.acos(min(1.0, max(-1.0, ct)))
    u = math.acos(min(1.0, max(-1.0, cu)))
    target = k - a
    d_same = abs(t - u)
    d_mirror = min(t + u, TWO_PI - (t + u))
    return min(abs(d_same - target), abs(d_mirror - target)) <= tol_abs


def k_isosceles(a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Common opposite-pair sum k for the symmetric (b = c) configuration.

    Uses the closed-form arctangent expression; the scalar arctan is
    branch-ambiguous, so the quadrant comes from the two-argument arctangent
    and the branch is pinned by k > max(a,b), realizability of the sides
    k-a and k-b, and an explicit placement check of the fourth normal.
    """
    sb = math.sin(b)
    if abs(sb) < 1e-12:
        raise OutOfDomain("b must not be a multiple of pi")
    cos_alpha = (math.cos(a) - math.cos(b) ** 2) / (sb * sb)
    if abs(cos_alpha) > 1.0 + 1e-12:
        raise OutOfDomain(f"(a, b) = ({a}, {b}) inadmissible: |cos alpha| = {abs(cos_alpha):.6g} > 1")

    big_c, big_s = math.cos(a), math.sin(a)
    big_b, big_d = math.cos(b), sb
    big_a = math.cos(0.5 * math.acos(min(1.0, max(-1.0, cos_alpha))))
    num = big_b - big_b * big_c - big_a * big_d * big_s
    den = big_b * big_s - big_d - big_a * big_c * big_d
    base = math.atan2(num, den)

    lo, hi = max(a, b), min(a, b) + math.pi
    for m in range(-2, 5):
        k = base + m * math.pi
        if lo < k < hi and _symmetric_config_exists(a, b, k):
            return k
    raise OutOfDomain(f"no realizable symmetric configuration for (a, b) = ({a}, {b})")


def solve_k_general(s: SphericalTriple, tol: Tolerance = DEFAULT_TOL) -> float | None:
    """Common opposite-pair sum k for a general normal triangle.

    Places three unit normals at pairwise distances (a, b, c) and solves for
    the fourth normal position and k with distances (k-a, k-b, k-c) to the
    complementary pairs, by damped Newton on (m4, k) with the unit-length
    constraint; multistart over 8 seeds.  Returns None when no admissible
    root exists.
    """
    a, b, c = s.as_tuple()
    placed = _place_spherical_triangle(a, b, c)
    if placed is None:
        return None
    m1, m2, m3 = placed
    # Complementary pairing: d(m3,m4) = k-a, d(m2,m4) = k-b, d(m1,m4) = k-c.
    partners = (m3, m2, m1)
    sides = (a, b, c)
    k_floor = max(sides)

    centroid = m1 + m2 + m3
    seed_dirs = [-centroid, centroid, np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])]
    seeds = []
    for d in seed_dirs:
        n = norm(d)
        d = d / n if n > 1e-9 else np.array([0.0, 0.0, -1.0])
        for dk in (0.8, 1.6):
            seeds.append((d, k_floor + dk))

    for m4_0, k_0 in seeds:
        x = np.array([*m4_0, k_0])
        ok = False
        for _ in range(80):
            m4, k = x[:3], x[3]
            f = np.array(
                [
                    dot(m4, partners[0]) - math.cos(k - sides[0]),
                    dot(m4, partners[1]) - math.cos(k - sides[1]),
                    dot(m4, partners[2]) - math.cos(k - sides[2]),
                    dot(m4, m4) - 1.0,
                ]
            )
            fn = float(np.max(np.abs(f)))
            if fn <= 1e-13:
                ok = True
                break
            jac = np.zeros((4, 4))
            for row in range(3):
                jac[row, :3] = partners[row]
                jac[row, 3] = math.sin(k - sides[row])
            jac[3, :3] = 2.0 * m4
            try:
                step = np.linalg.solve(jac, -f)
            except np.linalg.LinAlgError:
                break
            damping = 1.0
            while damping > 1e-6:
                trial = x + damping * step
                tm4, tk = trial[:3], trial[3]
                tf = np.array(
                    [
                        dot(tm4, partners[0]) - math.cos(tk - sides[0]),
                        dot(tm4, partners[1]) - math.cos(tk - sides[1]),
                        dot(tm4, partners[2]) - math.cos(tk - sides[2]),
                        dot(tm4, tm4) - 1.0,
                    ]
                )
                if float(np.max(np.abs(tf))) < fn:
                    break
                damping *= 0.5
            else:
                break
            x = x + damping * step
        if not ok:
            continue
        k = float(x[3])
        if k <= k_floor + 1e-12:
            continue
        if all(1e-9 < k - side < math.pi - 1e-9 for side in sides):
            return k
    return None


@dataclass(frozen=True)
class KmaxReport:
    argmax: tuple[float, float, float]
    k_max: float
    gap_to_theory: float
    sigma_lower_bound: float  # implied 6*pi - 3*k_max, radians
    grid_resolution: int
    isosceles_gap: float  # |k_isosceles - solve_k_general| at the argmax slice


def certify_kmax(resolution: int = 40, tol: Tolerance = DEFAULT_TOL) -> KmaxReport:
    """Maximize the opposite-pair sum k over the (0, 2pi)^3 side cube.

    Grid search (restricted to sorted triples; k is symmetric in the sides)
    followed by Nelder-Mead refinement.  Raises ConvergenceError if the
    certified maximum strays more than 1e-4 from 2 arccos(-1/3).
    """
    if resolution < 20:
        raise OutOfDomain("resolution must be at least 20 per axis")
    axis = (np.arange(resolution) + 0.5) * (TWO_PI / resolution)
    axis = axis[axis < math.pi]  # realizable geodesic distances only
    best_k, best_abc = -math.inf, None
    for ia, av in enumerate(axis):
        for ib in range(ia, len(axis)):
            bv = axis[ib]
            for ic in range(ib, len(axis)):
                cv = axis[ic]
                k = solve_k_general(SphericalTriple(av, bv, cv), tol)
                if k is not None and k > best_k:
                    best_k, best_abc = k, (av, bv, cv)
    if best_abc is None:
        raise ConvergenceError("no feasible spherical triple found on the grid")

    from scipy.optimize import minimize

    def negative_k(x: np.ndarray) -> float:
        if np.any(x <= 0.0) or np.any(x >= math.pi):
            return math.inf
        k = solve_k_general(SphericalTriple(*x), tol)
        return -k if k is not None else math.inf

    res = minimize(
        negative_k,
        x0=np.array(best_abc),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
    )
    k_max = -float(res.fun)
    argmax = tuple(float(x) for x in res.x)
    gap = abs(k_max - K_MAX_THEORY)
    if gap > 1e-4:
        raise ConvergenceError(f"certified k_max {k_max:.9f} deviates {gap:.2e} from theory")

    a_star = sum(argmax) / 3.0
    iso_gap = abs(k_isosceles(a_star, a_star, tol) - k_max)
    return KmaxReport(
        argmax=argmax,
        k_max=k_max,
        gap_to_theory=gap,
        sigma_lower_bound=6.0 * math.pi - 3.0 * k_max,
        grid_resolution=resolution,
        isosceles_gap=iso_gap,
    )


def gamma_of(t: Tetra) -> float:
    """Sum of the six geodesic distances between outward unit face normals;
    complements the dihedral angle sum to 6 pi."""
    try:
        normals = [t.outward_normal(m) for m in range(4)]
    except DegenerateInput as exc:
        raise DegenerateInput(f"cannot compute normal distances: {exc}") from exc
    total = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            total += math.acos(min(1.0, max(-1.0, dot(normals[i], normals[j]))))
    return total
