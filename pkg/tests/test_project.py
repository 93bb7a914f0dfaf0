import numpy as np
import pytest

from convexsmooth import (
    Ball,
    BallBody,
    BoundaryMesh,
    HalfspaceBody,
    OutsideDomain,
    RayMiss,
    boundary_mesh,
    boundary_projection,
    boundary_surjectivity_probe,
    contains,
    normal_lipschitz_estimate,
    project_ball,
    project_body,
    projection_domain,
)
from helpers import boundary_cloud, brute_distance


def lens():
    return BallBody(radius=1.0, centers=[[0.5, 0.0], [-0.5, 0.0]], dim=2)


def unit_ball():
    return BallBody(radius=1.0, centers=[[0.0, 0.0]], dim=2)


class TestProjectBall:
    def test_radial(self):
        p = project_ball(Ball([1.0, 0.0], 1.0), [3.0, 0.0])
        assert np.allclose(p, [2.0, 0.0])

    def test_identity_inside(self):
        x = np.array([1.2, 0.3])
        assert np.array_equal(project_ball(Ball([1.0, 0.0], 1.0), x), x)

    def test_one_lipschitz(self):
        ball = Ball([0.3, -0.1], 0.8)
        rng = np.random.default_rng(0)
        xs = rng.uniform(-3, 3, size=(10_000, 2))
        ys = rng.uniform(-3, 3, size=(10_000, 2))
        for x, y in zip(xs[:500], ys[:500]):
            d = np.linalg.norm(project_ball(ball, x) - project_ball(ball, y))
            assert d <= np.linalg.norm(x - y) + 1e-12


class TestProjectBody:
    def test_single_ball_reduces_to_closed_form(self):
        body = BallBody(radius=1.0, centers=[[0.2, -0.3]], dim=2)
        x = np.array([2.0, 1.0])
        assert np.allclose(
            project_body(body, x), project_ball(Ball([0.2, -0.3], 1.0), x)
        )

    def test_lens_tip(self):
        p = project_body(lens(), np.array([0.0, 2.0]), tol=1e-9)
        assert np.linalg.norm(p - [0.0, np.sqrt(0.75)]) <= 1e-6

    def test_fixed_inside(self):
        x = np.array([0.1, -0.2])
        assert np.array_equal(project_body(lens(), x), x)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        body = lens()
        for _ in range(20):
            x = rng.uniform(-2, 2, size=2)
            p = project_body(body, x, tol=1e-10)
            q = project_body(body, p, tol=1e-10)
            assert np.linalg.norm(p - q) <= 1e-9

    def test_one_lipschitz_with_tolerance(self):
        body = lens()
        rng = np.random.default_rng(2)
        pts = rng.uniform(-2, 2, size=(60, 2))
        proj = [project_body(body, x, tol=1e-10) for x in pts]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                lhs = np.linalg.norm(proj[i] - proj[j])
                assert lhs <= np.linalg.norm(pts[i] - pts[j]) + 2e-10

    def test_matches_brute_force(self):
        body = lens()
        cloud = boundary_cloud(body, 20_000)
        rng = np.random.default_rng(3)
        for _ in range(30):
            x = rng.uniform(-2, 2, size=2)
            p = project_body(body, x, tol=1e-9)
            assert contains(body, p) or np.linalg.norm(p - project_body(body, p)) < 1e-8
            assert abs(np.linalg.norm(x - p) - brute_distance(body, cloud, x)) <= 2e-3


class TestNormalLipschitz:
    def test_unit_circle(self):
        est = normal_lipschitz_estimate(boundary_mesh(unit_ball(), 720))
        assert 1.0 <= est <= 1.1 * 1.005

    def test_scales_inversely_with_radius(self):
        body = BallBody(radius=2.0, centers=[[0.0, 0.0]], dim=2)
        est = normal_lipschitz_estimate(boundary_mesh(body, 720))
        assert est == pytest.approx(0.5 * 1.1, rel=1e-3)

    def test_collinear_facets_give_zero(self):
        # points on a straight line: all facet normals equal
        theta = np.linspace(-0.3, 0.3, 16)
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        radii = 1.0 / np.cos(theta)  # x = 1 line
        mesh = BoundaryMesh(
            dim=2,
            directions=dirs,
            radii=radii,
            facets=np.column_stack([np.arange(16), (np.arange(16) + 1) % 16]),
        )
        assert normal_lipschitz_estimate(mesh) == pytest.approx(0.0, abs=1e-10)

    def test_domain_width(self):
        mesh = boundary_mesh(unit_ball(), 720)
        dom = projection_domain(mesh)
        assert dom.width == pytest.approx(1.0 / (2.0 * dom.lip_normal))


class TestBoundaryProjection:
    def test_interior_point_projects_radially(self):
        mesh = boundary_mesh(unit_ball(), 720)
        p = boundary_projection(unit_ball(), mesh, np.array([0.6, 0.0]))
        assert np.linalg.norm(p - [1.0, 0.0]) <= 1e-7

    def test_exterior_point(self):
        mesh = boundary_mesh(unit_ball(), 720)
        p = boundary_projection(unit_ball(), mesh, np.array([2.0, 0.0]))
        assert np.linalg.norm(p - [1.0, 0.0]) <= 1e-9

    def test_deep_interior_raises(self):
        mesh = boundary_mesh(unit_ball(), 720)
        with pytest.raises(OutsideDomain):
            boundary_projection(unit_ball(), mesh, np.array([0.3, 0.0]))

    def test_two_lipschitz_on_domain(self):
        body = unit_ball()
        mesh = boundary_mesh(body, 720)
        width = projection_domain(mesh).width
        rng = np.random.default_rng(4)
        pts, projs = [], []
        for _ in range(120):
            u = rng.standard_normal(2)
            u /= np.linalg.norm(u)
            if rng.random() < 0.5:
                x = (1.0 - rng.uniform(0.01, 0.95) * width) * u
            else:
                x = rng.uniform(1.01, 2.0) * u
            pts.append(x)
            projs.append(boundary_projection(body, mesh, x, tol=1e-10))
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                sep = np.linalg.norm(pts[i] - pts[j])
                if sep < 0.01:
                    continue
                ratio = np.linalg.norm(projs[i] - projs[j]) / sep
                assert ratio <= 2.0 + 1e-6

    def test_interior_3d(self):
        body = BallBody(radius=1.0, centers=[[0.0, 0.0, 0.0]], dim=3)
        mesh = boundary_mesh(body, 4)
        p = boundary_projection(body, mesh, np.array([0.0, 0.0, 0.7]))
        assert np.linalg.norm(p - [0.0, 0.0, 1.0]) <= 1e-6


class TestSurjectivityProbe:
    def test_ball_in_ball(self):
        outer = boundary_mesh(BallBody(radius=2.0, centers=[[0.0, 0.0]], dim=2), 360)
        gap, report = boundary_surjectivity_probe(unit_ball(), outer, 360)
        assert gap <= 1e-6
        assert report["hits"] == report["rays"] == 360

    def test_ball_in_square(self):
        square = HalfspaceBody(
            normals=[[1, 0], [-1, 0], [0, 1], [0, -1]], offsets=[2.0] * 4
        )
        outer = boundary_mesh(square, 360)
        gap, _ = boundary_surjectivity_probe(unit_ball(), outer, 360)
        assert gap <= 1e-6

    def test_outer_not_containing_inner_detected(self):
        small = boundary_mesh(BallBody(radius=0.5, centers=[[0.0, 0.0]], dim=2), 64)
        with pytest.raises(RayMiss):
            boundary_surjectivity_probe(unit_ball(), small, 64)
