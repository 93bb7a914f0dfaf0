"""Batch front end: parse body files, run pipelines, emit JSON reports.

Commands::

    convexsmooth certify --input body.json --output outdir [--resolution N --seed N]
    convexsmooth smooth  --input body.json --output outdir --epsilon F --delta F
                         --order c11|c2 [--resolution N --scan N --seed N]
    convexsmooth measure --input body.json --output outdir [--resolution N]
    convexsmooth probe   --input probe.json --output outdir [--resolution N]

Exit codes: 0 all-pass/success, 1 failed certificate or unmet epsilon
bound, 2 input or validation errors. ``CONVEXSMOOTH_THREADS`` caps the
internal data parallelism (the level scan); all sampling is driven by the
single --seed stream, so identical configurations produce byte-identical
reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import certify as cert
from . import measure as meas
from . import project as proj
from . import smooth as smth
from .bodies import BallBody, HalfspaceBody, body_from_json
from .errors import ConvexSmoothError, InvalidBody
from .gauge import ball_gauge_derivatives, body_gauge, gauge_lipschitz_bound

PROBE_GAP_THRESHOLD = 1e-6


@dataclass
class RunConfig:
    command: str
    input: str
    output: str
    epsilon: float = 0.05
    delta: float | None = None
    order: str = "c2"
    resolution: int | None = None
    seed: int = 0
    scan: int = 64
    threads: int = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexsmooth",
        description="certify, smooth, measure and probe ball-intersection bodies",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("certify", "smooth", "measure", "probe"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="body (or probe pair) JSON file")
        p.add_argument("--output", required=True, help="output directory")
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--order", choices=("c11", "c2"), default="c2")
        p.add_argument("--resolution", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--scan", type=int, default=64)
    return parser


def _default_resolution(dim: int, resolution: int | None) -> int:
    if resolution is not None:
        return resolution
    return 1024 if dim == 2 else 4


def _config_echo(config: RunConfig) -> dict:
    return {
        "command": config.command,
        "input": config.input,
        "output": config.output,
        "epsilon": config.epsilon,
        "delta": config.delta,
        "order": config.order,
        "resolution": config.resolution,
        "seed": config.seed,
        "scan": config.scan,
    }


def _write_report(config: RunConfig, report: dict) -> None:
    outdir = Path(config.output)
    outdir.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    (outdir / "report.json").write_text(text)


def _write_mesh(config: RunConfig, mesh: meas.BoundaryMesh) -> str:
    outdir = Path(config.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if mesh.dim == 2:
        path = outdir / "mesh.json"
        path.write_text(json.dumps(meas.polyline_json(mesh)) + "\n")
    else:
        path = outdir / "mesh.off"
        path.write_text(meas.off_text(mesh))
    return path.name


def _certify_ball_body(body: BallBody, config: RunConfig) -> list[cert.CertificateReport]:
    samples = config.resolution or 360
    floor = 1.0 / (2.0 * body.radius**2)

    rng = np.random.default_rng(config.seed)
    pts = []
    balls = body.balls()
    while len(pts) < 48:
        u = rng.standard_normal(body.dim)
        u /= np.linalg.norm(u)
        x = u * rng.uniform(0.3, 1.6) * body.radius
        value, argmax = body_gauge(body, x)
        ev = ball_gauge_derivatives(balls[argmax[0]], x)
        pts.append((x, value**2, 2.0 * ev.value * ev.grad))
    reports = [cert.subgradient_certificate(pts, eta=floor)]

    reports.append(cert.ball_support_check(body, body.radius, samples))
    reports.append(cert.ball_family_check(body, samples))
    reports.append(cert.gauge_sq_hessian_check(body, min(samples, 512), seed=config.seed))

    # sublevel realization: the squared gauge at level 1 gives back the
    # body; its slope where the gauge stays below 2 is at most 4/rho
    lip = 2.0 * 2.0 * gauge_lipschitz_bound(body)
    radius_e = cert.level_set_radius(lip, floor)
    report_e = cert.ball_support_check(body, radius_e, samples)
    reports.append(
        cert.CertificateReport(
            condition="level_set_e",
            passed=report_e.passed,
            constant=radius_e,
            worst_witness=report_e.worst_witness,
            samples=report_e.samples,
        )
    )

    gap = cert.halfspace_reconstruction_gap(body, samples)
    if body.dim == 2:
        cover = math.pi / samples
    else:
        from . import grids

        cover = grids.icosphere_covering_angle(grids.icosphere_level_for(samples))
    bound = 4.0 * body.radius**2 * cover**2 / body.interior_radius
    reports.append(
        cert.CertificateReport(
            condition="halfspace_reconstruction",
            passed=gap <= bound,
            constant=gap,
            worst_witness={"gap": gap, "discretization_bound": bound},
            samples=samples,
        )
    )
    return reports


def _run_certify(config: RunConfig) -> int:
    body = body_from_json(json.loads(Path(config.input).read_text()))
    if isinstance(body, HalfspaceBody):
        samples = config.resolution or 360
        reports = [
            cert.ball_support_check(body, R, samples) for R in (1.0, 10.0, 100.0)
        ]
    else:
        reports = _certify_ball_body(body, config)
    passed = all(r.passed for r in reports)
    _write_report(
        config,
        {
            "command": "certify",
            "config": _config_echo(config),
            "reports": [r.to_json() for r in reports],
            "passed": passed,
        },
    )
    return 0 if passed else 1


def _run_smooth(config: RunConfig) -> int:
    body = body_from_json(json.loads(Path(config.input).read_text()))
    if not isinstance(body, BallBody):
        raise InvalidBody("the smoothing pipeline needs a BallBody input")
    delta = config.delta
    if delta is None:
        delta = smth.DEFAULT_DELTA_FACTOR * body.radius**2
    order = "C2" if config.order == "c2" else "C11"
    resolution = _default_resolution(body.dim, config.resolution)

    smoothed = smth.extract_smoothed_body(
        body,
        delta=delta,
        epsilon=config.epsilon,
        order=order,
        scan=config.scan,
        resolution=resolution,
        seed=config.seed,
        workers=config.threads,
    )
    w_mesh = meas.boundary_mesh(body, resolution)
    we_mesh = meas.boundary_mesh(smoothed, resolution)
    breakdown = meas.symmetric_difference_breakdown(w_mesh, we_mesh)
    symdiff = breakdown["combined"]
    boundary = meas.hausdorff_measure(w_mesh)
    checks = smoothed.checks
    summary = {
        "t0": smoothed.t0,
        "delta": delta,
        "symdiff_measure": symdiff,
        "boundary_measure": boundary,
        "hessian_min_eig": checks["hessian_min_eig"],
        "contained": checks["contained"],
        "tube_ok": checks["tube_ok"],
    }
    if abs(breakdown["radius_based"] - breakdown["flag_based"]) > 0.01 * max(symdiff, 1e-300):
        summary["symdiff_breakdown"] = breakdown
    mesh_file = _write_mesh(config, we_mesh)
    _write_report(
        config,
        {
            "command": "smooth",
            "config": _config_echo(config),
            "summary": summary,
            "smoothed_body": smoothed.to_json(),
            "mesh_file": mesh_file,
        },
    )
    ok = (
        symdiff < config.epsilon * boundary
        and checks["contained"]
        and checks["tube_ok"]
    )
    return 0 if ok else 1


def _run_measure(config: RunConfig) -> int:
    body = body_from_json(json.loads(Path(config.input).read_text()))
    resolution = _default_resolution(body.dim, config.resolution)
    mesh = meas.boundary_mesh(body, resolution)
    mesh_file = _write_mesh(config, mesh)
    _write_report(
        config,
        {
            "command": "measure",
            "config": _config_echo(config),
            "summary": {
                "boundary_measure": meas.hausdorff_measure(mesh),
                "directions": len(mesh.points),
                "facets": len(mesh.facets),
            },
            "mesh_file": mesh_file,
        },
    )
    return 0


def _run_probe(config: RunConfig) -> int:
    data = json.loads(Path(config.input).read_text())
    if not isinstance(data, dict) or "inner" not in data or "outer" not in data:
        raise InvalidBody('probe input must be {"inner": <body>, "outer": <body>}')
    inner = body_from_json(data["inner"])
    outer = body_from_json(data["outer"])
    if not isinstance(inner, BallBody):
        raise InvalidBody("probe inner body must be a BallBody")
    rays = config.resolution or 360
    # 3D outer meshes use a fixed icosphere level; --resolution counts rays
    outer_res = rays if outer.dim == 2 else 4
    outer_mesh = meas.boundary_mesh(outer, outer_res)
    max_gap, report = proj.boundary_surjectivity_probe(inner, outer_mesh, rays)
    passed = max_gap <= PROBE_GAP_THRESHOLD
    _write_report(
        config,
        {
            "command": "probe",
            "config": _config_echo(config),
            "summary": {**report, "threshold": PROBE_GAP_THRESHOLD, "passed": passed},
        },
    )
    return 0 if passed else 1


_RUNNERS = {
    "certify": _run_certify,
    "smooth": _run_smooth,
    "measure": _run_measure,
    "probe": _run_probe,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    if config.command == "smooth" and not (0.0 < config.epsilon < 0.25):
        print("error: --epsilon must lie in (0, 1/4)", file=sys.stderr)
        return 2
    try:
        return _RUNNERS[config.command](config)
    except (ConvexSmoothError, OSError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = int(os.environ.get("CONVEXSMOOTH_THREADS", "1") or "1")
    config = RunConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        epsilon=args.epsilon,
        delta=args.delta,
        order=args.order,
        resolution=args.resolution,
        seed=args.seed,
        scan=args.scan,
        threads=max(1, threads),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
