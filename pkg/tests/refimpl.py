"""Slow, obviously-correct reference implementations used as test oracles.

Everything here is deliberately independent of the package's vectorized
paths: edge predicates go through the floating-point embedding, enumeration
is plain Python over sets, and canonization is a direct transcription of the
definition using the symmetry matrices.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

SQ3 = math.sqrt(3.0)
SQ11 = math.sqrt(11.0)
W1 = complex(0.5, SQ3 / 2)
W3 = complex(5 / 6, SQ11 / 6)
W13 = W1 * W3

FLOAT_TOL = 1e-8


def ref_embed(p) -> complex:
    a, b, c, d = (int(x) for x in p)
    return a + b * W1 + c * W3 + d * W13


def ref_is_unit_distance(p, q) -> bool:
    return abs(abs(ref_embed(p) - ref_embed(q)) - 1.0) < FLOAT_TOL


def ref_edge_count(mats) -> int:
    pts = [tuple(int(x) for x in row) for row in np.asarray(mats)]
    return sum(
        ref_is_unit_distance(p, q) for p, q in itertools.combinations(pts, 2)
    )


def ref_adjacency(mats) -> np.ndarray:
    pts = [tuple(int(x) for x in row) for row in np.asarray(mats)]
    n = len(pts)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            adj[i, j] = adj[j, i] = ref_is_unit_distance(pts[i], pts[j])
    return adj


# --- genealogy ----------------------------------------------------------

_RO = ((0, 1, 0, 0), (-1, 1, 0, 0), (0, 0, 0, 1), (0, 0, -1, 1))
_OFFSETS = [
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
    (-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1),
]


def _rot(p):
    return tuple(sum(p[k] * _RO[k][l] for k in range(4)) for l in range(4))


def _add(p, q):
    return tuple(x + y for x, y in zip(p, q))


def _sub(p, q):
    return tuple(x - y for x, y in zip(p, q))


def ref_child_sets(mats) -> set[frozenset]:
    """All distinct child vertex sets by the three operations (raw sets)."""
    pts = [tuple(int(x) for x in row) for row in np.asarray(mats)]
    vs = set(pts)
    out = set()

    def emit(v):
        if v not in vs:
            out.add(frozenset(pts + [v]))

    for v in pts:
        for off in _OFFSETS:
            emit(_add(v, off))
    for u, v in itertools.permutations(pts, 2):
        if ref_is_unit_distance(u, v):
            emit(_add(u, _rot(_sub(v, u))))
    for v in pts:
        nbrs = [u for u in pts if ref_is_unit_distance(u, v)]
        for u, w in itertools.combinations(nbrs, 2):
            emit(_sub(_add(u, w), v))
    return out


def ref_parent_sets(mats) -> set[frozenset]:
    """All distinct connected single-deletion vertex sets."""
    pts = [tuple(int(x) for x in row) for row in np.asarray(mats)]
    out = set()
    for v in pts:
        rest = [p for p in pts if p != v]
        if rest and _connected(rest):
            out.add(frozenset(rest))
    return out


def _connected(pts) -> bool:
    seen = {pts[0]}
    frontier = [pts[0]]
    while frontier:
        p = frontier.pop()
        for q in pts:
            if q not in seen and ref_is_unit_distance(p, q):
                seen.add(q)
                frontier.append(q)
    return len(seen) == len(pts)


# --- canonization -------------------------------------------------------


def ref_canonize(mat, keys, symmetries, max_coef=20):
    """Direct transcription of the canonization definition.

    Returns (canonical matrix, hash) or None when every symmetry image
    overflows the box.
    """
    mat = np.asarray(mat, dtype=np.int64)
    base = max_coef + 1
    weights = np.array([1, base, base**2, base**3], dtype=np.int64)
    best = None
    for t in range(12):
        img = mat @ np.asarray(symmetries[t], dtype=np.int64)
        img = img - img.min(axis=0, keepdims=True)
        if img.max() > max_coef:
            continue
        codes = img @ weights
        h = np.uint64(0)
        for c in codes:
            h ^= keys[int(c)]
        if best is None or h > best[0]:
            order = np.argsort(codes, kind="stable")
            best = (h, img[order])
    if best is None:
        return None
    return best[1], int(best[0])


def random_connected_graph(rng, n, units) -> np.ndarray:
    """Grow a connected n-vertex graph by random unit steps (box-safe)."""
    while True:
        pts = [(0, 0, 0, 0)]
        guard = 0
        while len(pts) < n and guard < 200:
            guard += 1
            base = pts[rng.integers(0, len(pts))]
            step = units[rng.integers(0, len(units))]
            cand = _add(base, tuple(int(x) for x in step))
            if cand in pts:
                continue
            trial = np.array(pts + [cand])
            if (trial.max(0) - trial.min(0)).max() > 20:
                continue
            pts.append(cand)
        if len(pts) == n:
            return np.array(pts, dtype=np.int16)
