"""Closed-form gauge of a ball about the origin, and the body gauge.

For a ball B(a, R) with |a| < R and k = R^2 - |a|^2 > 0, the gauge
(Minkowski functional with respect to the origin) is

    mu(x) = (-<x, a> + sqrt(<x, a>^2 + k |x|^2)) / k,

a nonnegative, 1-homogeneous convex function with mu <= 1 exactly on the
ball. Its gradient is mu'(x) = s(x) (x - mu(x) a) with
s(x) = 1/sqrt(<x, a>^2 + k |x|^2), and the Hessian of mu^2 has minimum
eigenvalue at least 1/(2 R^2) everywhere, which is the strong-convexity
constant the certificates rely on.

The body gauge of an intersection of balls is the pointwise maximum of the
member gauges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bodies import Ball, BallBody, _as_vector
from .errors import DegenerateBall

# Absolute tolerance on squared gauge values when listing the attaining
# members: distinguishes exact ridge points from near-ridge points under
# double-precision noise.
GAP_TOL = 1e-10


@dataclass(frozen=True)
class GaugeEval:
    """Gauge value with first and second derivative data at one point.

    ``grad`` is the gauge gradient (undefined direction at x = 0, returned
    as the zero vector there since the squared gauge is C^1 with vanishing
    gradient at the origin). ``hess_sq`` is the Hessian of the squared
    gauge; at x = 0 it is the symmetric matrix whose quadratic form is the
    average of the forward/backward second directional derivatives of the
    2-homogeneous extension, (4 a a^T + 2 k I) / k^2. ``grad_scale`` is the
    scalar s(x) multiplying (x - value * center) in the gradient.
    """

    value: float
    grad: np.ndarray
    hess_sq: np.ndarray
    grad_scale: float


def _ball_k(ball: Ball) -> float:
    k = ball.radius**2 - float(ball.center @ ball.center)
    if k <= 0.0:
        raise DegenerateBall(
            "radius^2 - |center|^2 must be positive (origin interior to ball)"
        )
    return k


def ball_gauge(ball: Ball, x) -> float | np.ndarray:
    """Gauge of a single ball at x; broadcasts over leading axes of x.

    Evaluated in a cancellation-free arrangement: for <x, a> >= 0 the
    equivalent form |x|^2 / (sqrt(<x,a>^2 + k|x|^2) + <x,a>) is used.
    """
    k = _ball_k(ball)
    a = ball.center
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 1
    xa = xs @ a
    xx = np.einsum("...i,...i->...", xs, xs)
    s = np.sqrt(xa * xa + k * xx)
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = xx / (s + xa)
        neg = (s - xa) / k
    val = np.where(xa >= 0.0, pos, neg)
    val = np.where(xx == 0.0, 0.0, val)
    return float(val) if scalar else val


def ball_gauge_derivatives(ball: Ball, x) -> GaugeEval:
    """Gauge value, gradient, and Hessian of the squared gauge at x.

    The gradient of the gauge itself is only defined for x != 0; the
    squared gauge is differentiable everywhere and its Hessian here is
    symmetric with minimum eigenvalue >= 1/(2 R^2).
    """
    k = _ball_k(ball)
    a = ball.center
    x = _as_vector(x, ball.dim)
    n = ball.dim
    xx = float(x @ x)
    if xx == 0.0:
        hess0 = (4.0 * np.outer(a, a) + 2.0 * k * np.eye(n)) / (k * k)
        return GaugeEval(
            value=0.0, grad=np.zeros(n), hess_sq=hess0, grad_scale=np.inf
        )
    xa = float(x @ a)
    s = np.sqrt(xa * xa + k * xx)
    value = xx / (s + xa) if xa >= 0.0 else (s - xa) / k
    scale = 1.0 / s
    grad = scale * (x - value * a)

    dscale = -(scale**3) * (xa * a + k * x)
    hess_mu = np.outer(dscale, x - value * a) + scale * (
        np.eye(n) - np.outer(a, grad)
    )
    hess_mu = 0.5 * (hess_mu + hess_mu.T)
    hess_sq = 2.0 * np.outer(grad, grad) + 2.0 * value * hess_mu
    hess_sq = 0.5 * (hess_sq + hess_sq.T)
    return GaugeEval(value=float(value), grad=grad, hess_sq=hess_sq, grad_scale=float(scale))


class BodyGauge(NamedTuple):
    value: float
    argmax_set: list[int]


def member_gauges(body: BallBody, x) -> np.ndarray:
    """Gauge values of every member ball; shape (..., m) for x of shape (..., n)."""
    xs = np.asarray(x, dtype=float)
    vals = [ball_gauge(Ball(c, body.radius), xs) for c in body.centers]
    return np.stack(np.broadcast_arrays(*vals), axis=-1) if body.num_balls > 1 else np.asarray(vals[0])[..., None]


def body_gauge(body: BallBody, x) -> BodyGauge:
    """Body gauge value and the list of members attaining it.

    The attaining set lists every member whose squared gauge is within
    ``GAP_TOL`` (absolute) of the maximum; more than one entry means x sits
    on a ridge.
    """
    x = _as_vector(x, body.dim)
    vals = member_gauges(body, x).ravel()
    value = float(np.max(vals))
    sq = vals * vals
    argmax = np.flatnonzero(sq >= value * value - GAP_TOL)
    return BodyGauge(value=value, argmax_set=argmax.tolist())


def body_gauge_values(body: BallBody, points: np.ndarray) -> np.ndarray:
    """Batched body gauge over an (N, dim) array; returns (N,) values."""
    return np.max(member_gauges(body, points), axis=-1)


def gauge_lipschitz_bound(body: BallBody) -> float:
    """A valid Lipschitz constant for the body gauge: 2/rho.

    rho is the interior radius; the bound follows from B(0, rho) sitting
    inside the body. It is generally not tight (a centered unit ball has
    true constant 1 but bound 2).
    """
    return 2.0 / body.interior_radius
