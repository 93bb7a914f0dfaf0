import json

import numpy as np
import pytest

from convexsmooth import (
    BallBody,
    HalfspaceBody,
    InvalidBody,
    body_from_json,
    body_to_json,
    contains,
    diameter,
    normal_lift,
)
from helpers import boundary_cloud, random_ball_body


def lens():
    return BallBody(radius=1.0, centers=[[0.5, 0.0], [-0.5, 0.0]], dim=2)


class TestInvariants:
    def test_radius_must_be_positive(self):
        with pytest.raises(InvalidBody, match="radius"):
            BallBody(radius=-1.0, centers=[[0.0, 0.0]], dim=2)

    def test_center_inside_radius(self):
        with pytest.raises(InvalidBody, match="interior"):
            BallBody(radius=1.0, centers=[[1.5, 0.0]], dim=2)

    def test_empty_centers_rejected(self):
        with pytest.raises(InvalidBody):
            BallBody(radius=1.0, centers=np.empty((0, 2)), dim=2)

    def test_halfspace_normals_must_be_unit(self):
        with pytest.raises(InvalidBody, match="unit"):
            HalfspaceBody(normals=[[2.0, 0.0]], offsets=[1.0])

    def test_halfspace_offsets_positive(self):
        with pytest.raises(InvalidBody, match="interior"):
            HalfspaceBody(normals=[[1.0, 0.0], [-1.0, 0.0]], offsets=[1.0, -0.5])

    def test_interior_ball_is_contained(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            body = random_ball_body(rng, 2, 4)
            rho = body.interior_radius
            dirs = rng.standard_normal((200, 2))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            for u in dirs[:50]:
                assert contains(body, rho * (1 - 1e-9) * u)


class TestContains:
    def test_unit_ball(self):
        body = BallBody(radius=1.0, centers=[[0.0, 0.0]], dim=2)
        assert contains(body, [0.5, 0.0])

    def test_outside_one_member(self):
        assert not contains(lens(), [1.2, 0.0])

    def test_origin_always_inside(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            body = random_ball_body(rng, 2, 5)
            assert contains(body, np.zeros(2))


class TestDiameter:
    def test_single_ball(self):
        body = BallBody(radius=1.0, centers=[[0.0, 0.0]], dim=2)
        assert abs(diameter(body) - 2.0) <= 1e-6

    def test_lens_matches_brute_force(self):
        body = lens()
        cloud = boundary_cloud(body, 4000)
        brute = 0.0
        for k in range(0, len(cloud), 40):
            brute = max(brute, float(np.max(np.linalg.norm(cloud - cloud[k], axis=1))))
        d = diameter(body)
        assert d >= brute - 1e-12  # certified upper bound
        assert abs(d - 2.0 * np.sqrt(0.75)) <= 1e-3

    def test_never_exceeds_twice_radius(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            body = random_ball_body(rng, 2, 3)
            assert diameter(body) <= 2.0 * body.radius + 1e-12

    def test_monotone_under_extra_center(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            body = random_ball_body(rng, 2, 3)
            extra = rng.uniform(-0.3, 0.3, size=2) * body.radius
            bigger = BallBody(
                radius=body.radius,
                centers=np.vstack([body.centers, extra]),
                dim=2,
            )
            assert diameter(bigger) <= diameter(body) + 1e-9


class TestNormalLift:
    def test_zero_slope(self):
        lift = normal_lift(np.zeros(3)).lift
        assert np.allclose(lift, [0, 0, 0, -1])

    def test_unit_slope_1d(self):
        lift = normal_lift([1.0]).lift
        assert np.allclose(lift, np.array([1.0, -1.0]) / np.sqrt(2))

    def test_always_unit(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            xi = rng.standard_normal(rng.integers(1, 5)) * rng.uniform(0, 10)
            lift = normal_lift(xi).lift
            assert abs(np.linalg.norm(lift) - 1.0) <= 1e-12
            assert lift[-1] < 0


class TestJson:
    def test_ball_body_round_trip(self):
        body = lens()
        again = body_from_json(body_to_json(body))
        assert isinstance(again, BallBody)
        assert np.array_equal(again.centers, body.centers)
        assert again.radius == body.radius

    def test_halfspace_round_trip(self):
        body = HalfspaceBody(
            normals=[[1, 0], [-1, 0], [0, 1], [0, -1]], offsets=[0.5] * 4
        )
        again = body_from_json(body_to_json(body))
        assert isinstance(again, HalfspaceBody)
        assert np.allclose(again.normals, body.normals)

    def test_text_input(self):
        text = json.dumps({"dim": 2, "radius": 1.0, "centers": [[0.0, 0.0]]})
        assert isinstance(body_from_json(text), BallBody)

    def test_rejects_with_diagnostic(self):
        with pytest.raises(InvalidBody, match="interior"):
            body_from_json({"dim": 2, "radius": 1.0, "centers": [[2.0, 0.0]]})
        with pytest.raises(InvalidBody, match="missing"):
            body_from_json({"dim": 2, "radius": 1.0})
        with pytest.raises(InvalidBody, match="JSON"):
            body_from_json("not json at all {")
