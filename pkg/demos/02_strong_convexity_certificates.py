#!/usr/bin/env python3
# Certifying strong convexity: round bodies pass, flat faces fail.
#
# A compact body is strongly convex exactly when, at every boundary
# point, a ball of one fixed radius encloses the whole body while
# touching there. The toolkit checks this and several equivalent
# conditions on samples. Run with:
# python demos/02_strong_convexity_certificates.py

import json

import numpy as np

from convexsmooth import (
    BallBody,
    HalfspaceBody,
    PatchParams,
    ball_gauge_derivatives,
    ball_support_check,
    body_gauge,
    enclosing_radius,
    gauge_sq_hessian_check,
    halfspace_reconstruction_gap,
    level_set_radius,
    subgradient_certificate,
)

lens = BallBody(radius=1.0, centers=[[0.5, 0.0], [-0.5, 0.0]], dim=2)
square = HalfspaceBody(
    normals=[[1, 0], [-1, 0], [0, 1], [0, -1]], offsets=[0.5] * 4
)

# --- the rolling-ball condition --------------------------------------------
report = ball_support_check(lens, R=1.0, samples=720)
print("lens, enclosing balls of radius 1:", "PASS" if report.passed else "FAIL")

# the square fails for EVERY radius: moving distance s along a flat face
# exits the rolled ball by about s^2/(2R), which no finite R fixes
for R in (1.0, 10.0, 100.0):
    report = ball_support_check(square, R, samples=360)
    witness = report.worst_witness
    print(
        f"square, radius {R:5.0f}: {'PASS' if report.passed else 'FAIL'}"
        f"  (worst violation {witness['margin']:.2e})"
    )

# reports serialize for batch runs
print("\nreport JSON:", json.dumps(ball_support_check(lens, 1.0, 64).to_json())[:96], "...")

# --- curvature of the squared gauge ----------------------------------------
report = gauge_sq_hessian_check(lens, samples=500)
print(
    "\nsquared-gauge curvature floor:",
    report.constant,
    "-> worst sampled eigenvalue",
    report.worst_witness["min_eigenvalue"],
)

# --- the subgradient inequality --------------------------------------------
# strong convexity of a function is quadratic growth above every tangent;
# realize it for the squared body gauge with its curvature floor
rng = np.random.default_rng(0)
pts = []
while len(pts) < 40:
    x = rng.standard_normal(2) * rng.uniform(0.3, 1.5)
    value, argmax = body_gauge(lens, x)
    ev = ball_gauge_derivatives(lens.balls()[argmax[0]], x)
    pts.append((x, value**2, 2 * ev.value * ev.grad))
print("subgradient inequality at eta = 0.5:", subgradient_certificate(pts, 0.5).passed)
print("                  ... at eta = 3.0:", subgradient_certificate(pts, 3.0).passed)

# --- quantitative radii -----------------------------------------------------
# for graphs of strongly convex patches the enclosing radius is explicit
params = PatchParams(lipschitz=1.0, eta=1.0, r=1.0, r0=1.0, diam=2.0)
print("\nenclosing radius for a worked patch family:", enclosing_radius(params))
print("sublevel-set radius L/eta for L=2, eta=0.5:", level_set_radius(2.0, 0.5))

# --- reconstruction from supporting halfspaces ------------------------------
# sampling supporting halfspaces and intersecting them recovers the body;
# the one-sided gap decays quadratically in the angular resolution
ball = BallBody(radius=1.0, centers=[[0.0, 0.0]], dim=2)
for m in (8, 32, 128):
    print(f"halfspace reconstruction gap at {m:3d} samples:",
          f"{halfspace_reconstruction_gap(ball, m):.3e}")
