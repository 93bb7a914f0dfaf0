"""Direction grids on the unit circle and unit sphere.

2D grids are evenly spaced angles; 3D grids are subdivided icosahedra
(quasi-uniform, no polar clustering). Both come with a certified covering
angle: every unit vector lies within that angle of some grid direction.
"""

from __future__ import annotations

import math

import numpy as np


def circle_directions(count: int) -> np.ndarray:
    """`count` unit vectors at evenly spaced angles, starting at (1, 0)."""
    if count < 3:
        raise ValueError("need at least 3 directions")
    theta = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(theta), np.sin(theta)])


def circle_covering_angle(count: int) -> float:
    """Max angle from any unit vector to the nearest of `count` grid directions."""
    return math.pi / count


def circle_facets(count: int) -> np.ndarray:
    """Consecutive index pairs closing the loop."""
    i = np.arange(count)
    return np.column_stack([i, (i + 1) % count])


_ICO_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def icosphere(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit icosphere at subdivision `level`.

    Returns (vertices, faces) with 10*4**level + 2 unit vertices and
    20*4**level triangles. Level 0 is the icosahedron itself.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if level in _ICO_CACHE:
        return _ICO_CACHE[level]

    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
            (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
            (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = np.array(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ],
        dtype=np.int64,
    )

    for _ in range(level):
        verts, faces = _subdivide(verts, faces)

    verts.setflags(write=False)
    faces.setflags(write=False)
    _ICO_CACHE[level] = (verts, faces)
    return verts, faces


def _subdivide(verts: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vlist = [v for v in verts]
    midpoint: dict[tuple[int, int], int] = {}

    def mid(i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        idx = midpoint.get(key)
        if idx is None:
            m = vlist[i] + vlist[j]
            m /= np.linalg.norm(m)
            idx = len(vlist)
            vlist.append(m)
            midpoint[key] = idx
        return idx

    new_faces = []
    for a, b, c in faces:
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        new_faces.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
    return np.array(vlist), np.array(new_faces, dtype=np.int64)


def icosphere_covering_angle(level: int) -> float:
    """Covering angle of the level-`level` icosphere vertex set.

    Computed as the largest spherical circumradius over all faces: any unit
    vector lies inside some face, whose vertices are within the face
    circumradius of it.
    """
    verts, faces = icosphere(level)
    tri = verts[faces]
    # circumcenter direction: equidistant from the three vertices
    n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    # orient toward the face
    flip = np.einsum("ij,ij->i", n, tri[:, 0]) < 0
    n[flip] *= -1.0
    cosr = np.einsum("ij,ij->i", n, tri[:, 0])
    return float(np.max(np.arccos(np.clip(cosr, -1.0, 1.0))))


def icosphere_level_for(min_vertices: int) -> int:
    """Smallest subdivision level whose vertex count is >= `min_vertices`."""
    level = 0
    while 10 * 4**level + 2 < min_vertices:
        level += 1
    return level
