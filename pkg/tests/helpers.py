"""Shared oracles and fixture builders for the test suite.

Everything here is deliberately independent of the code paths it checks:
the gauge oracle runs a membership bisection, the projection oracle scans
a dense boundary cloud, and derivatives come from finite differences.
"""

from __future__ import annotations

import math

import numpy as np

from convexsmooth import Ball, BallBody, contains
from convexsmooth.gauge import body_gauge_values


def gauge_by_bisection(ball: Ball, x, rel_tol: float = 1e-13) -> float:
    """Gauge via bisection on the membership predicate |x/lam - a| <= R."""
    x = np.asarray(x, dtype=float)
    if float(x @ x) == 0.0:
        return 0.0

    def member(lam: float) -> bool:
        return np.linalg.norm(x / lam - ball.center) <= ball.radius

    hi = 1.0
    while not member(hi):
        hi *= 2.0
    lo = hi / 2.0
    while lo > 1e-300 and member(lo):
        lo /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)


def random_ball_body(
    rng: np.random.Generator,
    dim: int,
    num_balls: int,
    radius_range=(0.8, 1.3),
    center_frac: float = 0.35,
    min_sep_frac: float = 0.15,
) -> BallBody:
    """Random body with well-separated centers (keeps ridge tubes thin)."""
    radius = rng.uniform(*radius_range)
    centers: list[np.ndarray] = []
    attempts = 0
    while len(centers) < num_balls:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("could not place separated centers")
        c = rng.uniform(-1.0, 1.0, size=dim) * center_frac * radius
        if np.linalg.norm(c) > center_frac * radius:
            continue
        if any(np.linalg.norm(c - o) < min_sep_frac * radius for o in centers):
            continue
        centers.append(c)
    return BallBody(radius=radius, centers=np.array(centers), dim=dim)


def fd_gradient(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    g = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def fd_jacobian(vf, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a vector function (rows d(vf)/dx_i)."""
    cols = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((vf(x + e) - vf(x - e)) / (2.0 * h))
    return np.array(cols).T


def boundary_cloud(body: BallBody, count: int) -> np.ndarray:
    """Dense boundary points via the exact radial gauge (2D only)."""
    theta = 2.0 * np.pi * np.arange(count) / count
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    return dirs / body_gauge_values(body, dirs)[:, None]


def brute_distance(body: BallBody, cloud: np.ndarray, x: np.ndarray) -> float:
    """Distance oracle: zero inside, else nearest dense boundary point."""
    if contains(body, x):
        return 0.0
    return float(np.min(np.linalg.norm(cloud - x[None, :], axis=1)))


class QuadraticPatch:
    """Strongly convex graph patch: (eta/2)|t|^2 + <tilt, t> on |t| < r.

    Carries exact values for its slope bound, value range and a certified
    diameter bound of the graph piece.
    """

    def __init__(self, rng: np.random.Generator, domain_dim: int):
        self.eta = float(rng.uniform(0.4, 3.0))
        self.r = float(rng.uniform(0.4, 1.2))
        tilt = rng.standard_normal(domain_dim)
        norm = np.linalg.norm(tilt)
        scale = rng.uniform(0.0, 1.5)
        self.tilt = tilt / norm * scale if norm > 0 else tilt
        self.domain_dim = domain_dim

    def value(self, t: np.ndarray) -> float:
        t = np.asarray(t, dtype=float)
        return 0.5 * self.eta * float(t @ t) + float(self.tilt @ t)

    def grad(self, t: np.ndarray) -> np.ndarray:
        return self.eta * np.asarray(t, dtype=float) + self.tilt

    @property
    def lipschitz(self) -> float:
        return self.eta * self.r + float(np.linalg.norm(self.tilt))

    @property
    def diam_bound(self) -> float:
        b = float(np.linalg.norm(self.tilt))
        umax = 0.5 * self.eta * self.r**2 + b * self.r
        if b / self.eta <= self.r:
            umin = -(b * b) / (2.0 * self.eta)
        else:
            umin = 0.5 * self.eta * self.r**2 - b * self.r
        return math.hypot(2.0 * self.r, umax - umin)

    def sample_domain(self, rng: np.random.Generator, count: int) -> np.ndarray:
        pts = []
        while len(pts) < count:
            t = rng.uniform(-self.r, self.r, size=self.domain_dim)
            if np.linalg.norm(t) < self.r * 0.999:
                pts.append(t)
        return np.array(pts)


def unit_square(half: float = 0.5):
    from convexsmooth import HalfspaceBody

    return HalfspaceBody(
        normals=[[1, 0], [-1, 0], [0, 1], [0, -1]],
        offsets=[half] * 4,
    )
