"""Numerical certificates for strong convexity of compact bodies.

Each certificate samples one of the equivalent characterizations of a
strongly convex body and reports pass/fail with the worst witness found:

- the quadratic-growth subgradient inequality for functions (id "eq39"),
- the rolling enclosing ball of common radius at every boundary point
  (id "ball_support_b"),
- the equal-radius ball-family representation itself (id "ball_family_c"),
- the curvature floor 1/(2 R^2) of the squared gauge (id
  "gauge_sq_hessian_d"),
- sublevel sets of coercive strongly convex functions via the radius
  L/eta (id "level_set_e"),
- reconstruction of the body from sampled supporting halfspaces
  (reported as "halfspace_reconstruction").

All certificates are sample-based, not exhaustive; every report carries
its sample count and minimum margin so failures are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import HalfspaceIntersection

from . import grids
from .bodies import BallBody, Body, contains, outward_normal
from .errors import DomainViolation, InsufficientData, NotBallBody
from .gauge import ball_gauge_derivatives, body_gauge, body_gauge_values
from .project import project_body

# Absolute margin below which a sampled inequality counts as violated.
# Closed forms are accurate to ~1e-12, leaving headroom.
CERT_TOL = 1e-9


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of one sampled certificate.

    ``constant`` is the quantitative constant the condition was tested
    with (an enclosing radius, a curvature floor, ...); ``worst_witness``
    records the point(s) and margin achieving the minimum margin, so a
    failure can be replayed.
    """

    condition: str
    passed: bool
    constant: float
    worst_witness: dict
    samples: int

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "passed": self.passed,
            "constant": self.constant,
            "worst_witness": self.worst_witness,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class PatchParams:
    """Measured constants of a family of strongly convex graph patches.

    ``lipschitz`` bounds every patch's slope, ``eta`` is the worst
    strong-convexity modulus, ``r`` and ``r0`` are the largest and
    smallest patch radii, and ``diam`` bounds the diameter of the body the
    patches cover.
    """

    lipschitz: float
    eta: float
    r: float
    r0: float
    diam: float

    def __post_init__(self):
        for name in ("lipschitz", "eta", "r", "r0", "diam"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.r0 > self.r:
            raise ValueError("r0 must not exceed r")


def enclosing_radius(p: PatchParams) -> float:
    """Radius of balls that enclose the body while touching each boundary point.

    sqrt(1 + L^2) * max{ (1 + (eta r)^2/4 + L^2 + eta L r)/eta,
                         diam, diam^2/(eta r0^2) }
    evaluated exactly; each term is nondecreasing in L, r and diam, so
    overestimated inputs are safe.
    """
    L, eta, r, r0, diam = p.lipschitz, p.eta, p.r, p.r0, p.diam
    return math.sqrt(1.0 + L * L) * max(
        (1.0 + 0.25 * eta * eta * r * r + L * L + eta * L * r) / eta,
        diam,
        diam * diam / (eta * r0 * r0),
    )


def subgradient_certificate(points, eta: float, tol: float = CERT_TOL) -> CertificateReport:
    """Check the quadratic-growth subgradient inequality on sampled data.

    ``points`` is a sequence of (x, value, subgradient) triples; the
    certificate requires value(y) >= value(x) + <g(x), y - x> +
    (eta/2)|y - x|^2 for every ordered pair. One subgradient per point
    suffices: if the inequality holds for some subgradient at each point
    it holds for all of them.
    """
    pts = list(points)
    if len(pts) < 2:
        raise InsufficientData("need at least 2 sample points")
    X = np.array([np.asarray(p[0], dtype=float).ravel() for p in pts])
    U = np.array([float(p[1]) for p in pts])
    G = np.array([np.asarray(p[2], dtype=float).ravel() for p in pts])

    diff = X[None, :, :] - X[:, None, :]  # diff[i, j] = x_j - x_i
    lin = np.einsum("ik,ijk->ij", G, diff)
    sqn = np.einsum("ijk,ijk->ij", diff, diff)
    margins = U[None, :] - U[:, None] - lin - 0.5 * eta * sqn
    np.fill_diagonal(margins, np.inf)
    i, j = np.unravel_index(np.argmin(margins), margins.shape)
    worst = float(margins[i, j])
    return CertificateReport(
        condition="eq39",
        passed=worst >= -tol,
        constant=float(eta),
        worst_witness={
            "x": X[i].tolist(),
            "y": X[j].tolist(),
            "margin": worst,
        },
        samples=len(pts),
    )


def _boundary_samples(body: Body, samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Boundary points via ray casting and a normal-cone selection at each.

    Star-shapedness about the origin makes ray casting exhaustive; ridge
    and corner points take the normalized average of their active
    constraints' normals, which is a valid selection in the normal cone.
    """
    if body.dim == 2:
        dirs = grids.circle_directions(max(int(samples), 4))
    else:
        dirs, _ = grids.icosphere(grids.icosphere_level_for(int(samples)))
    if isinstance(body, BallBody):
        radii = 1.0 / body_gauge_values(body, dirs)
    else:
        denom = dirs @ body.normals.T
        with np.errstate(divide="ignore"):
            cand = np.where(denom > 1e-14, body.offsets / denom, np.inf)
        radii = np.min(cand, axis=1)
        if not np.all(np.isfinite(radii)):
            raise ValueError("halfspace body is unbounded along some ray")
    pts = radii[:, None] * dirs
    normals = np.array([outward_normal(body, y) for y in pts])
    return pts, normals


def ball_support_check(body: Body, R: float, samples: int) -> CertificateReport:
    """Sampled check of the enclosing-ball condition at radius R.

    For each sampled boundary point y with outward normal v, the ball of
    radius R centered at y - R v must contain every sampled body point.
    Bodies with a flat face fail for every R: points along the face leave
    the ball by about s^2/(2R) at arc offset s.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    if samples < 8:
        raise ValueError("samples must be >= 8")
    pts, normals = _boundary_samples(body, samples)
    centers = pts - R * normals
    d = np.linalg.norm(pts[None, :, :] - centers[:, None, :], axis=2)
    margins = d - R  # margins[j, k]: point k against the ball at boundary point j
    j, k = np.unravel_index(np.argmax(margins), margins.shape)
    worst = float(margins[j, k])
    return CertificateReport(
        condition="ball_support_b",
        passed=worst <= CERT_TOL,
        constant=float(R),
        worst_witness={
            "boundary_point": pts[j].tolist(),
            "tested_point": pts[k].tolist(),
            "margin": worst,
        },
        samples=len(pts),
    )


def ball_family_check(body: BallBody, samples: int) -> CertificateReport:
    """Consistency of the equal-radius family with its own boundary.

    Every sampled boundary point must lie on at least one generating
    sphere and inside all of them; the margin is the worse of those two
    defects.
    """
    pts, _ = _boundary_samples(body, samples)
    d = np.linalg.norm(pts[:, None, :] - body.centers[None, :, :], axis=2)
    on_sphere = np.min(np.abs(d - body.radius), axis=1)
    inside = np.max(d - body.radius, axis=1)
    margins = np.maximum(on_sphere, inside)
    k = int(np.argmax(margins))
    worst = float(margins[k])
    return CertificateReport(
        condition="ball_family_c",
        passed=worst <= CERT_TOL,
        constant=float(body.radius),
        worst_witness={"boundary_point": pts[k].tolist(), "margin": worst},
        samples=len(pts),
    )


def gauge_sq_hessian_check(
    body: Body, samples: int, seed: int = 0
) -> CertificateReport:
    """Sampled minimum eigenvalue of the squared-gauge Hessian.

    At ridge-free points the body gauge locally equals one member gauge,
    whose squared Hessian must stay at or above the floor 1/(2 R^2).
    Raises :class:`NotBallBody` for polyhedral bodies, which have no ball
    gauge to differentiate.
    """
    if not isinstance(body, BallBody):
        raise NotBallBody("squared-gauge curvature needs a BallBody")
    if samples < 8:
        raise ValueError("samples must be >= 8")
    rng = np.random.default_rng(seed)
    floor = 1.0 / (2.0 * body.radius**2)
    balls = body.balls()

    worst = np.inf
    witness: dict = {}
    accepted = 0
    while accepted < samples:
        u = rng.standard_normal(body.dim)
        u /= np.linalg.norm(u)
        x = u * rng.uniform(0.2, 2.0) * body.radius
        value, argmax = body_gauge(body, x)
        if len(argmax) != 1:
            continue  # ridge point: the one-member Hessian is not the body's
        accepted += 1
        ev = ball_gauge_derivatives(balls[argmax[0]], x)
        lam = float(np.linalg.eigvalsh(ev.hess_sq)[0])
        if lam < worst:
            worst = lam
            witness = {"x": x.tolist(), "min_eigenvalue": lam, "margin": lam - floor}
    return CertificateReport(
        condition="gauge_sq_hessian_d",
        passed=worst >= floor - CERT_TOL,
        constant=floor,
        worst_witness=witness,
        samples=samples,
    )


def level_set_radius(lipschitz: float, eta: float) -> float:
    """Enclosing-ball radius for sublevel sets: L/eta.

    Any sublevel set of a coercive, eta-strongly convex, L-Lipschitz
    function admits enclosing balls of this radius at every boundary
    point.
    """
    if lipschitz <= 0 or eta <= 0:
        raise ValueError("lipschitz and eta must be positive")
    return lipschitz / eta


def cap_graph_height(R: float, xi_y, z) -> float:
    """Height of the spherical-cap graph touching the origin with slope data xi_y.

    In graph coordinates anchored at the touching point, the enclosing
    sphere of radius R is locally the graph of
        f(z) = R sqrt(1 - |xi|^2) - sqrt(R^2 - |z + R xi|^2),
    which vanishes at z = 0.
    """
    xi = np.asarray(xi_y, dtype=float)
    z = np.asarray(z, dtype=float)
    xin = float(xi @ xi)
    if xin >= 1.0:
        raise DomainViolation("|xi_y| must be < 1")
    w = z + R * xi
    rad = R * R - float(w @ w)
    if rad <= 0.0:
        raise DomainViolation("offset leaves the open cap |z + R xi| < R")
    return R * math.sqrt(1.0 - xin) - math.sqrt(rad)


def cap_graph_hessian(R: float, xi_y, z) -> np.ndarray:
    """Closed-form Hessian of the spherical-cap graph at offset z."""
    xi = np.asarray(xi_y, dtype=float)
    z = np.asarray(z, dtype=float)
    w = z + R * xi
    rad = R * R - float(w @ w)
    if rad <= 0.0:
        raise DomainViolation("offset leaves the open cap |z + R xi| < R")
    n = len(w)
    return (np.outer(w, w) + rad * np.eye(n)) / rad**1.5


def cap_graph_hessian_check(R: float, xi_y, z_offsets) -> CertificateReport:
    """Curvature floor 1/R of spherical-cap graphs at the given offsets.

    Uses the two closed-form eigenvalue families of the cap Hessian,
    R^2/(R^2 - |w|^2)^{3/2} along w = z + R xi and (R^2 - |w|^2)^{-1/2}
    orthogonally; both stay at or above 1/R on the open cap.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    xi = np.asarray(xi_y, dtype=float)
    if float(xi @ xi) >= 1.0:
        raise DomainViolation("|xi_y| must be < 1")
    floor = 1.0 / R
    worst = np.inf
    witness: dict = {}
    offsets = [np.asarray(z, dtype=float) for z in z_offsets]
    for z in offsets:
        w = z + R * xi
        rad = R * R - float(w @ w)
        if rad <= 0.0:
            raise DomainViolation("offset leaves the open cap |z + R xi| < R")
        radial = R * R / rad**1.5
        tangential = 1.0 / math.sqrt(rad)
        lam = min(radial, tangential) if len(w) > 1 else radial
        if lam < worst:
            worst = lam
            witness = {
                "offset": z.tolist(),
                "min_eigenvalue": lam,
                "margin": lam - floor,
            }
    return CertificateReport(
        condition="cap_graph_a",
        passed=worst >= floor - CERT_TOL,
        constant=floor,
        worst_witness=witness,
        samples=len(offsets),
    )


def halfspace_reconstruction_gap(body: BallBody, normal_samples: int) -> float:
    """One-sided Hausdorff gap from a sampled-halfspace hull back to the body.

    The body always sits inside the intersection of its sampled supporting
    halfspaces; the gap is how far that intersection's farthest point is
    from the body, and it shrinks to zero as the samples densify (for a
    unit ball it is the circumscribed-polygon excess sec(pi/m) - 1).
    """
    if normal_samples < 4:
        raise ValueError("normal_samples must be >= 4")
    pts, normals = _boundary_samples(body, normal_samples)
    offsets = np.einsum("ij,ij->i", normals, pts)
    halfspaces = np.column_stack([normals, -offsets])
    hs = HalfspaceIntersection(halfspaces, np.zeros(body.dim))
    gap = 0.0
    for v in hs.intersections:
        if contains(body, v):
            continue
        p = project_body(body, v, tol=1e-10)
        gap = max(gap, float(np.linalg.norm(v - p)))
    return gap
