"""Metric projections onto a body and onto its boundary.

Projection onto the body itself uses Dykstra's scheme over the ball
family: plain alternating projections converge to *a* point of the
intersection, Dykstra's correction terms make the limit the nearest one.
Projection onto the boundary is only guaranteed well defined on a tube
whose width is set by the Lipschitz constant of the boundary normal
field; inside that tube (and everywhere outside the body) it is
2-Lipschitz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import grids
from .bodies import Ball, BallBody, _as_vector, contains, outward_normal
from .errors import NonConvergence, OutsideDomain, RayMiss
from .gauge import body_gauge
from .measure import BoundaryMesh, boundary_mesh

ITERATION_CAP = 100_000


@dataclass(frozen=True)
class ProjectionDomain:
    """Neighborhood of the boundary where boundary projection is safe.

    ``width`` = 1 / (2 * lip_normal); boundary projection is well defined
    and 2-Lipschitz on points closer to the boundary than ``width`` plus
    the whole exterior.
    """

    width: float
    lip_normal: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")


def project_ball(ball: Ball, x) -> np.ndarray:
    """Nearest point of a closed ball; the identity inside."""
    x = _as_vector(x, ball.dim)
    v = x - ball.center
    d = np.linalg.norm(v)
    if d <= ball.radius:
        return x.copy()
    return ball.center + (ball.radius / d) * v


def project_body(body: BallBody, x, tol: float = 1e-9) -> np.ndarray:
    """Nearest point of the ball intersection, by Dykstra's algorithm.

    Stops when consecutive full sweeps differ by less than tol/10; raises
    :class:`NonConvergence` at the iteration cap. The result is inside the
    body up to tol and within tol of the true projection.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = _as_vector(x, body.dim)
    if contains(body, x):
        return x.copy()
    balls = body.balls()
    p = x.copy()
    corrections = np.zeros((len(balls), body.dim))
    for _ in range(ITERATION_CAP):
        p_prev = p.copy()
        for i, ball in enumerate(balls):
            y = p + corrections[i]
            p = project_ball(ball, y)
            corrections[i] = y - p
        if np.linalg.norm(p - p_prev) < 0.1 * tol:
            return p
    raise NonConvergence(
        f"Dykstra did not reach tol={tol:g} within {ITERATION_CAP} sweeps"
    )


def normal_lipschitz_estimate(mesh: BoundaryMesh) -> float:
    """Estimated Lipschitz constant of the outward normal field.

    Maximum of |normal difference| / |centroid difference| over adjacent
    facet pairs, inflated by 10% as a discretization guard. Corners blow
    the estimate up (the true constant is infinite there), which correctly
    shrinks the safe projection tube.
    """
    if len(mesh.facets) < 8:
        raise ValueError("mesh needs at least 8 facets")
    pairs = mesh.adjacent_facet_pairs
    dn = np.linalg.norm(
        mesh.facet_normals[pairs[:, 0]] - mesh.facet_normals[pairs[:, 1]], axis=1
    )
    dc = np.linalg.norm(
        mesh.facet_centroids[pairs[:, 0]] - mesh.facet_centroids[pairs[:, 1]], axis=1
    )
    return 1.1 * float(np.max(dn / dc))


def projection_domain(mesh: BoundaryMesh) -> ProjectionDomain:
    lip = normal_lipschitz_estimate(mesh)
    return ProjectionDomain(width=1.0 / (2.0 * lip), lip_normal=lip)


def _radial_boundary(body: BallBody, u: np.ndarray) -> np.ndarray:
    """Exact boundary point along direction u (gauge homogeneity)."""
    return u / body_gauge(body, u).value


def _golden_min(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section minimizer of a unimodal scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def boundary_projection(
    body: BallBody, mesh: BoundaryMesh, x, tol: float = 1e-9
) -> np.ndarray:
    """Nearest boundary point, on the domain where that is guaranteed.

    Exterior points delegate to the body projection (which lands on the
    boundary). Interior points must be closer to the boundary than the
    mesh-estimated safe width, else :class:`OutsideDomain` is raised -- a
    violated hypothesis, not a numerical failure. The interior search is a
    golden-section refinement over ray directions, seeded by the nearest
    mesh facet; star-shapedness brackets the minimizer.
    """
    x = _as_vector(x, body.dim)
    if not contains(body, x):
        return project_body(body, x, tol)

    domain = projection_domain(mesh)
    dist_to_boundary = float(np.min(np.linalg.norm(mesh.points - x, axis=1)))
    if dist_to_boundary >= domain.width:
        raise OutsideDomain(
            f"interior point at boundary distance {dist_to_boundary:.6g} >= "
            f"safe width {domain.width:.6g}"
        )

    seed = int(np.argmin(np.linalg.norm(mesh.points - x, axis=1)))
    if body.dim == 2:
        theta_seed = math.atan2(mesh.directions[seed, 1], mesh.directions[seed, 0])
        span = 2.0 * (2.0 * math.pi / len(mesh.directions)) + 1e-3

        def objective(theta: float) -> float:
            u = np.array([math.cos(theta), math.sin(theta)])
            return float(np.linalg.norm(x - _radial_boundary(body, u)))

        theta = _golden_min(objective, theta_seed - span, theta_seed + span, tol=1e-13)
        u = np.array([math.cos(theta), math.sin(theta)])
        return _radial_boundary(body, u)

    u0 = mesh.directions[seed]
    e1 = np.cross(u0, [0.0, 0.0, 1.0])
    if np.linalg.norm(e1) < 1e-9:
        e1 = np.cross(u0, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u0, e1)

    def objective3(t) -> float:
        u = u0 + t[0] * e1 + t[1] * e2
        u /= np.linalg.norm(u)
        return float(np.linalg.norm(x - _radial_boundary(body, u)))

    res = minimize(
        objective3,
        np.zeros(2),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 500},
    )
    u = u0 + res.x[0] * e1 + res.x[1] * e2
    u /= np.linalg.norm(u)
    return _radial_boundary(body, u)


def _ray_segments_2d(origin, direction, mesh: BoundaryMesh) -> float:
    """Smallest positive ray parameter crossing a 2D polyline mesh."""
    p1 = mesh.points[mesh.facets[:, 0]]
    p2 = mesh.points[mesh.facets[:, 1]]
    e = p2 - p1
    q = p1 - origin

    def cross2(a, b):
        return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]

    denom = cross2(direction, e)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross2(q, e) / denom
        s = cross2(q, direction) / denom
        valid = (
            (np.abs(denom) > 1e-300)
            & (s >= -1e-12)
            & (s <= 1.0 + 1e-12)
            & (t > 1e-9)
        )
    if not np.any(valid):
        return np.nan
    return float(np.min(t[valid]))


def _ray_triangles_3d(origin, direction, mesh: BoundaryMesh) -> float:
    """Smallest positive ray parameter crossing a triangle mesh."""
    tri = mesh.points[mesh.facets]
    v0, v1, v2 = tri[:, 0], tri[:, 1], tri[:, 2]
    e1, e2 = v1 - v0, v2 - v0
    h = np.cross(direction[None, :], e2)
    a = np.einsum("ij,ij->i", e1, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = 1.0 / a
        s = origin[None, :] - v0
        u = f * np.einsum("ij,ij->i", s, h)
        q = np.cross(s, e1)
        v = f * (q @ direction)
        t = f * np.einsum("ij,ij->i", e2, q)
        valid = (
            (np.abs(a) > 1e-300)
            & (u >= -1e-12)
            & (v >= -1e-12)
            & (u + v <= 1.0 + 1e-12)
            & (t > 1e-9)
        )
    if not np.any(valid):
        return np.nan
    return float(np.min(t[valid]))


def boundary_surjectivity_probe(
    inner: BallBody,
    outer_mesh: BoundaryMesh,
    samples: int,
    tol: float = 1e-9,
) -> tuple[float, dict]:
    """Check that projecting the outer boundary covers the inner boundary.

    For each sampled inner boundary point x with outward normal v, the ray
    x + t v crosses the outer mesh at some z; projecting z back must
    return (numerically) x. The report's max gap certifies desk-scale
    surjectivity. Raises :class:`RayMiss` when an outer-mesh vertex lies
    inside the body or a ray fails to cross the outer mesh; both signal
    that the outer body does not enclose the inner one (or the mesh has a
    hole).
    """
    inside = [contains(inner, v) for v in outer_mesh.points]
    if any(inside):
        k = inside.index(True)
        raise RayMiss(
            f"outer mesh vertex {outer_mesh.points[k].tolist()} lies inside the body"
        )

    if inner.dim == 2:
        resolution = max(int(samples), 16)
    else:
        resolution = grids.icosphere_level_for(int(samples))
    inner_mesh = boundary_mesh(inner, resolution)
    cross = _ray_segments_2d if inner.dim == 2 else _ray_triangles_3d

    gaps = np.empty(len(inner_mesh.points))
    for k, x in enumerate(inner_mesh.points):
        nu = outward_normal(inner, x)
        t = cross(x, nu, outer_mesh)
        if not np.isfinite(t):
            raise RayMiss(f"ray from {x.tolist()} missed the outer mesh")
        z = x + t * nu
        back = project_body(inner, z, tol)
        gaps[k] = np.linalg.norm(back - x)

    worst = int(np.argmax(gaps))
    report = {
        "rays": len(gaps),
        "hits": len(gaps),
        "max_gap": float(gaps[worst]),
        "mean_gap": float(np.mean(gaps)),
        "worst_point": inner_mesh.points[worst].tolist(),
    }
    return float(gaps[worst]), report
