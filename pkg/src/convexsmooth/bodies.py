"""Body representations and containment/diameter primitives.

The central type is :class:`BallBody`, a compact body given as the
intersection of finitely many closed balls of one common radius, with the
origin in its interior. :class:`HalfspaceBody` is the polyhedral
counterpart used as a negative fixture: its flat faces violate the
rolling-ball property that the certificates check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import minimize

from . import grids
from .errors import InvalidBody

# Absolute slack on |x - a_i| - R for membership tests. Boundary points
# produced by bisection land within solver tolerance of the sphere.
MEMBERSHIP_SLACK = 1e-12


def _as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got {v.shape[0]}")
    return v


def _frozen_array(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Ball:
    """Closed ball with a given center and positive radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen_array(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.center.ndim != 1:
            raise InvalidBody("ball center must be a vector")
        if not self.radius > 0:
            raise InvalidBody("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]


@dataclass(frozen=True)
class BallBody:
    """Intersection of closed balls of common radius, with 0 interior.

    Invariants checked at construction:

    - every center satisfies |a_i| < radius, so the origin is interior;
    - the interior radius rho = radius - max_i |a_i| is positive, and the
      open ball B(0, rho) is contained in the body.

    The number of balls is unrestricted; gauge evaluations cost O(m) in the
    number of centers.
    """

    radius: float
    centers: np.ndarray
    dim: int

    def __post_init__(self):
        centers = np.atleast_2d(np.array(self.centers, dtype=float))
        object.__setattr__(self, "centers", _frozen_array(centers))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "dim", int(self.dim))
        if self.dim < 2:
            raise InvalidBody("dim must be at least 2")
        if not self.radius > 0:
            raise InvalidBody("radius must be positive")
        if centers.size == 0:
            raise InvalidBody("centers must be a nonempty list")
        if centers.shape[1] != self.dim:
            raise InvalidBody(
                f"centers have length {centers.shape[1]}, expected dim={self.dim}"
            )
        norms = np.linalg.norm(centers, axis=1)
        if not np.all(norms < self.radius):
            raise InvalidBody(
                "max|center| < radius violated (origin must be interior)"
            )

    @property
    def num_balls(self) -> int:
        return self.centers.shape[0]

    @property
    def interior_radius(self) -> float:
        """rho = R - max_i |a_i|; B(0, rho) is inside the body."""
        return self.radius - float(np.max(np.linalg.norm(self.centers, axis=1)))

    def balls(self) -> list[Ball]:
        return [Ball(c, self.radius) for c in self.centers]


@dataclass(frozen=True)
class HalfspaceBody:
    """Intersection of halfspaces {x : <normal, x> <= offset}.

    Normals must be unit vectors and every offset positive, so an open ball
    around the origin is contained in the body. Used as a negative-test
    fixture: flat faces cannot satisfy the enclosing-ball condition.
    """

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        normals = np.atleast_2d(np.array(self.normals, dtype=float))
        offsets = np.atleast_1d(np.array(self.offsets, dtype=float))
        object.__setattr__(self, "normals", _frozen_array(normals))
        object.__setattr__(self, "offsets", _frozen_array(offsets))
        if normals.shape[0] != offsets.shape[0]:
            raise InvalidBody("normals and offsets must have equal length")
        if normals.shape[0] == 0:
            raise InvalidBody("halfspace list must be nonempty")
        lengths = np.linalg.norm(normals, axis=1)
        if np.any(np.abs(lengths - 1.0) > 1e-9):
            raise InvalidBody("halfspace normals must be unit vectors")
        if not np.all(offsets > 0):
            raise InvalidBody(
                "offsets must be positive (origin must be interior)"
            )

    @property
    def dim(self) -> int:
        return self.normals.shape[1]


Body = Union[BallBody, HalfspaceBody]


@dataclass(frozen=True)
class NormalLift:
    """Unit outward normal (xi, -1)/sqrt(1+|xi|^2) to an epigraph."""

    xi: np.ndarray
    lift: np.ndarray


def normal_lift(xi) -> NormalLift:
    """Lift a subgradient to the unit outward epigraph normal.

    The lift is (xi, -1)/sqrt(1 + |xi|^2): a unit vector whose last
    coordinate is strictly negative.
    """
    xi = _as_vector(xi)
    scale = 1.0 / np.sqrt(1.0 + float(xi @ xi))
    lift = np.append(xi, -1.0) * scale
    return NormalLift(xi=xi, lift=lift)


def contains(body: Body, x) -> bool:
    """Membership test with absolute slack ``MEMBERSHIP_SLACK``."""
    x = _as_vector(x, body.dim)
    if isinstance(body, BallBody):
        d = np.linalg.norm(x[None, :] - body.centers, axis=1)
        return bool(np.all(d <= body.radius + MEMBERSHIP_SLACK))
    slack = np.max(body.normals @ x - body.offsets)
    return bool(slack <= MEMBERSHIP_SLACK)


def contains_many(body: Body, points: np.ndarray) -> np.ndarray:
    """Vectorized membership for an (N, dim) array of points."""
    pts = np.asarray(points, dtype=float)
    if isinstance(body, BallBody):
        d = np.linalg.norm(pts[:, None, :] - body.centers[None, :, :], axis=2)
        return np.all(d <= body.radius + MEMBERSHIP_SLACK, axis=1)
    return np.all(pts @ body.normals.T - body.offsets <= MEMBERSHIP_SLACK, axis=1)


def outward_normal(body: Body, y, atol: float = 1e-7) -> np.ndarray:
    """Outward unit normal at a boundary point.

    At smooth points this is the active constraint's normal. At ridge
    points (several constraints active within `atol`) it is the normalized
    average of the active normals, which lies in the normal cone; any such
    selection supports the body.
    """
    y = _as_vector(y, body.dim)
    if isinstance(body, BallBody):
        d = np.linalg.norm(y[None, :] - body.centers, axis=1)
        active = np.abs(d - body.radius) <= atol * body.radius
        if not np.any(active):
            active = d >= np.max(d) - atol * body.radius
        n = np.sum((y[None, :] - body.centers[active]) / body.radius, axis=0)
    else:
        slack = body.offsets - body.normals @ y
        active = np.abs(slack) <= atol * np.max(body.offsets)
        if not np.any(active):
            active = slack <= np.min(slack) + atol * np.max(body.offsets)
        n = np.sum(body.normals[active], axis=0)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("degenerate normal cone selection")
    return n / norm


def support_value(body: BallBody, direction) -> float:
    """Support function max{<u, x> : x in body} for a unit direction.

    Closed forms handle the generic cases (support attained on a single
    sphere or on the intersection circle of two spheres); a constrained
    solve covers the remaining corner configurations. The result carries a
    tiny additive guard so it can be used as a certified upper bound.
    """
    u = _as_vector(direction, body.dim)
    u = u / np.linalg.norm(u)
    R, A = body.radius, body.centers

    # single active sphere: x = a_i + R u
    cand = A + R * u[None, :]
    ok = contains_many(body, cand)
    if np.any(ok):
        return float(np.max(cand[ok] @ u)) + 1e-12 * R

    # two active spheres: maximize over the intersection (n-2)-sphere
    best = -np.inf
    m = body.num_balls
    for i in range(m):
        for j in range(i + 1, m):
            d = A[j] - A[i]
            dd = float(d @ d)
            if dd >= (2 * R) ** 2 or dd == 0.0:
                continue
            c = 0.5 * (A[i] + A[j])
            r = np.sqrt(R * R - 0.25 * dd)
            w = u - (float(u @ d) / dd) * d
            wn = np.linalg.norm(w)
            x = c + (r / wn) * w if wn > 1e-14 else c
            d_all = np.linalg.norm(x[None, :] - A, axis=1)
            if np.all(d_all <= R + 1e-9 * R):
                best = max(best, float(x @ u))
    if best > -np.inf:
        return best + 1e-9 * R

    # corner case (three or more active spheres): constrained solve
    x0 = u * (0.9 * body.interior_radius)
    cons = [
        {
            "type": "ineq",
            "fun": (lambda x, a=a: R * R - float((x - a) @ (x - a))),
            "jac": (lambda x, a=a: -2.0 * (x - a)),
        }
        for a in A
    ]
    res = minimize(
        lambda x: -float(x @ u),
        x0,
        jac=lambda x: -u,
        constraints=cons,
        method="SLSQP",
        options={"maxiter": 200, "ftol": 1e-14},
    )
    violation = max(0.0, float(np.max(np.linalg.norm(res.x[None, :] - A, axis=1))) - R)
    return float(res.x @ u) + violation + 1e-9 * R


def diameter(body: BallBody, *, directions_2d: int = 256, icosphere_level: int = 3) -> float:
    """Certified upper bound on the diameter of the body.

    Scans antipodal support values over a direction grid, inflates the grid
    maximum by the covering-angle secant (which dominates the true diameter
    for any convex set), and caps at 2R, an unconditional bound since the
    body sits inside each generating ball.
    """
    if body.dim == 2:
        dirs = grids.circle_directions(directions_2d)
        cover = grids.circle_covering_angle(directions_2d)
    elif body.dim == 3:
        dirs, _ = grids.icosphere(icosphere_level)
        cover = grids.icosphere_covering_angle(icosphere_level)
    else:
        dirs = _random_directions(body.dim, 4096)
        cover = 0.35  # loose cover for n > 3; the 2R cap still applies
    breadth = max(
        support_value(body, u) + support_value(body, -u) for u in dirs
    )
    return float(min(breadth / np.cos(cover), 2.0 * body.radius))


def _random_directions(dim: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(0)
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# JSON schemas
#
#   BallBody:      {"dim": n, "radius": R, "centers": [[...], ...]}
#   HalfspaceBody: {"halfspaces": [{"normal": [...], "offset": o}, ...]}
# ---------------------------------------------------------------------------

def body_from_json(data: Union[str, dict]) -> Body:
    """Parse a body from its JSON object (or JSON text).

    Parsing is strict: any violated invariant raises :class:`InvalidBody`
    with a diagnostic naming the invariant.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise InvalidBody(f"not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InvalidBody("body JSON must be an object")

    if "halfspaces" in data:
        hs = data["halfspaces"]
        if not isinstance(hs, list) or not hs:
            raise InvalidBody("halfspaces must be a nonempty list")
        try:
            normals = [h["normal"] for h in hs]
            offsets = [h["offset"] for h in hs]
        except (TypeError, KeyError) as e:
            raise InvalidBody("each halfspace needs 'normal' and 'offset'") from e
        return HalfspaceBody(normals=normals, offsets=offsets)

    missing = {"dim", "radius", "centers"} - set(data)
    if missing:
        raise InvalidBody(f"body JSON missing fields: {sorted(missing)}")
    return BallBody(radius=data["radius"], centers=data["centers"], dim=data["dim"])


def body_to_json(body: Body) -> dict:
    if isinstance(body, BallBody):
        return {
            "dim": body.dim,
            "radius": body.radius,
            "centers": body.centers.tolist(),
        }
    return {
        "halfspaces": [
            {"normal": n.tolist(), "offset": float(o)}
            for n, o in zip(body.normals, body.offsets)
        ]
    }
