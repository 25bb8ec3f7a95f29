"""midtet: dihedral angle sums, midspheres, and path partitions of tetrahedra.

A tetrahedron is *4-ball* when a sphere (the midsphere) touches all six of
its edges, and a *path* tetrahedron when three mutually orthogonal edges form
a vertex path.  This package measures tetrahedra (volume, Cayley-Menger
determinants, dihedral angles, classical spheres), detects and constructs
4-ball tetrahedra, partitions them face-to-face into path tetrahedra, and
numerically certifies the two-sided dihedral-angle-sum bounds of those
classes.
"""

from .bounds import (
    EQ_PYRAMID_H0,
    FAMILIES,
    K_MAX_THEORY,
    SIGMA_LOWER_CUBE_CORNER,
    SIGMA_LOWER_FOURBALL,
    SIGMA_UPPER_PATH,
    Family,
    KmaxReport,
    SphericalTriple,
    SweepResult,
    SweepSample,
    certify_kmax,
    default_grid,
    gamma_of,
    generate_family,
    k_isosceles,
    sample_fourball,
    sigma_cube_corner,
    sigma_path_closed,
    solve_k_general,
    spherical_cos_side,
    sweep,
)
from .errors import (
    ApexDegenerate,
    BadConfiguration,
    CenterNotInterior,
    ConvergenceError,
    DegenerateInput,
    GeometryError,
    NoTriangle,
    NotConstructible,
    NotFourBall,
    NotPath,
    NotRealizable,
    OutOfDomain,
)
from .fourball import (
    FourBallReport,
    MidSphere,
    SoddyCircle,
    TangentLengths3,
    TangentLengths4,
    d3_profile,
    edge_tangency_points,
    face_incircle,
    fourball_checks,
    fourball_from_cone,
    fourball_from_face,
    fourball_tangents,
    is_fourball,
    kissing_feasible,
    midsphere,
    soddy_inner,
    soddy_radius,
    tangents_to_triangle,
    triangle_to_tangents,
)
from .geom_core import (
    DEFAULT_TOL,
    Plane,
    Tolerance,
    cross,
    dot,
    norm,
    normalize,
    point_line_distance,
    trilaterate,
)
from .io_formats import (
    DocumentError,
    MeshDocument,
    TetraDocument,
    mesh_from_partition,
    parse_tetra_document,
    sweep_csv,
)
from .partition import (
    ConformityReport,
    Partition,
    partition_fourball_24,
    red_refine_path,
    validate_conformity,
)
from .tet_metrics import (
    AngleReport,
    EdgeSextuple,
    Existence,
    ExistenceReport,
    Tetra,
    cayley_menger_blumenthal,
    cayley_menger_d3,
    circumsphere,
    dihedral_angles,
    edge_sextuple,
    insphere,
    is_equifacial,
    is_path,
    realize,
    tetra_exists,
    volume,
)

__version__ = "0.1.0"
