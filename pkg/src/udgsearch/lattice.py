"""Exact integer arithmetic on the Moser lattice.

Points are integer 4-vectors (a, b, c, d) of coefficients over the basis
{1, w1, w3, w1*w3}, where w1 = exp(i*pi/3) and w3 = 5/6 + i*sqrt(11)/6.
Squared length of a point is p + (bc - ad)*sqrt(33)/6 with p rational, so
"distance exactly 1" is the pair of integer conditions 6p == 6 and ad == bc.
All predicates here are exact; the floating-point embedding exists only for
rendering and as a cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache

import numpy as np

COORD_DTYPE = np.int16

#: Coefficient bound used when sampling random points; graphs themselves are
#: constrained by the canonical coefficient box (see the canonical module).
COEF_BOUND = 10

OMEGA1 = complex(0.5, math.sqrt(3.0) / 2.0)
OMEGA3 = complex(5.0 / 6.0, math.sqrt(11.0) / 6.0)
OMEGA13 = OMEGA1 * OMEGA3


@dataclass(frozen=True)
class BasisConstants:
    """The three non-trivial basis generators as complex doubles."""

    omega1: complex = OMEGA1
    omega3: complex = OMEGA3
    omega13: complex = OMEGA13


BASIS = BasisConstants()

#: The eight single-generator offsets {+-1, +-w1, +-w3, +-w1w3}.
GENERATOR_OFFSETS = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [-1, 0, 0, 0],
        [0, -1, 0, 0],
        [0, 0, -1, 0],
        [0, 0, 0, -1],
    ],
    dtype=COORD_DTYPE,
)
GENERATOR_OFFSETS.setflags(write=False)

#: 7 vertices, 11 edges; the search's default starting graph.
MOSER_SPINDLE = np.array(
    [
        [0, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
    ],
    dtype=COORD_DTYPE,
)
MOSER_SPINDLE.setflags(write=False)

SINGLE_VERTEX = np.array([[0, 0, 0, 0]], dtype=COORD_DTYPE)
SINGLE_VERTEX.setflags(write=False)

UNIT_EDGE = np.array([[0, 0, 0, 0], [1, 0, 0, 0]], dtype=COORD_DTYPE)
UNIT_EDGE.setflags(write=False)

#: Two unit triangles spanning different generator pairs.  Their Minkowski
#: sum is the densest known 9-vertex graph.
UNIT_TRIANGLE = np.array(
    [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=COORD_DTYPE
)
UNIT_TRIANGLE.setflags(write=False)

UNIT_TRIANGLE_ALT = np.array(
    [[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=COORD_DTYPE
)
UNIT_TRIANGLE_ALT.setflags(write=False)


def quad_form_x6(p) -> int | np.ndarray:
    """Six times the squared-length quadratic form of a lattice point.

    Works on a single point (shape ``(4,)``) or any batch ``(..., 4)``.
    Arithmetic is carried out in int64, so no overflow is possible for any
    coefficients below ~2**29.
    """
    p = np.asarray(p, dtype=np.int64)
    a, b, c, d = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    q = (
        6 * a * a + 6 * a * b + 10 * a * c + 5 * a * d
        + 6 * b * b + 5 * b * c + 10 * b * d
        + 6 * c * c + 6 * c * d + 6 * d * d
    )
    return int(q) if q.ndim == 0 else q


def is_unit(p) -> bool | np.ndarray:
    """True iff the point has length exactly 1 (6p == 6 and ad == bc)."""
    p = np.asarray(p, dtype=np.int64)
    a, b, c, d = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    res = (quad_form_x6(p) == 6) & (a * d == b * c)
    return bool(res) if np.ndim(res) == 0 else res


def is_unit_distance(p, q) -> bool | np.ndarray:
    """True iff two points are at distance exactly 1."""
    diff = np.asarray(p, dtype=np.int64) - np.asarray(q, dtype=np.int64)
    return is_unit(diff)


@cache
def enumerate_units() -> np.ndarray:
    """The 18 unit vectors of the lattice, sorted lexicographically.

    Brute force over the box [-4, 4]^4, which is known to contain every
    unit vector.  Computed once and cached.
    """
    r = np.arange(-4, 5)
    grid = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    units = grid[is_unit(grid)]
    order = np.lexsort((units[:, 3], units[:, 2], units[:, 1], units[:, 0]))
    units = units[order].astype(COORD_DTYPE)
    units.setflags(write=False)
    return units


def embed(p) -> complex | np.ndarray:
    """Complex-plane embedding a + b*w1 + c*w3 + d*w1w3 (double precision)."""
    p = np.asarray(p, dtype=np.float64)
    z = p[..., 0] + p[..., 1] * OMEGA1 + p[..., 2] * OMEGA3 + p[..., 3] * OMEGA13
    return complex(z) if np.ndim(z) == 0 else z
