"""Canonical forms for lattice-embedded graphs.

A graph is an ordered n x 4 integer matrix of lattice points.  Two matrices
represent the same embedded graph up to the 12 lattice symmetries (rotations
by pi/3 and a reflection), translations, and row order.  Canonization picks
one representative: translation-normalise all 12 symmetry images, Zobrist-hash
each, keep the image with the largest hash, and sort its rows by point code.
The hash doubles as a permutation-invariant 64-bit fingerprint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import COORD_DTYPE

#: Canonical coefficients live in [0, MAX_COEF]; point codes are base-21.
MAX_COEF = 20
CODE_BASE = MAX_COEF + 1
KEY_COUNT = CODE_BASE**4
CODE_WEIGHTS = np.array([1, CODE_BASE, CODE_BASE**2, CODE_BASE**3], dtype=np.int64)

DEFAULT_SEED = 42

#: pi/3 rotation: multiplication by w1, expressed on coefficient row vectors.
ROTATION = np.array(
    [[0, 1, 0, 0], [-1, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 1]], dtype=COORD_DTYPE
)
ROTATION.setflags(write=False)

#: Reflection swapping the generator pairs (1, w1w3) and (w1, w3).
REFLECTION = np.array(
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=COORD_DTYPE
)
REFLECTION.setflags(write=False)


def _build_symmetries() -> np.ndarray:
    mats = []
    m = np.eye(4, dtype=np.int64)
    for _ in range(6):
        mats.append(m.copy())
        m = m @ ROTATION
    m = REFLECTION.astype(np.int64)
    for _ in range(6):
        mats.append(m.copy())
        m = m @ ROTATION
    out = np.stack(mats).astype(COORD_DTYPE)
    out.setflags(write=False)
    return out


#: The order-12 symmetry group: [I, Ro..Ro^5, Re, ReRo..ReRo^5].
SYMMETRIES = _build_symmetries()


class OutOfBoundsError(ValueError):
    """A normalized coefficient exceeds the canonical box [0, MAX_COEF]."""


def apply_symmetry(g, t: int) -> np.ndarray:
    """Image of a graph (or batch) under symmetry index t in [0, 11]."""
    if not 0 <= t < 12:
        raise IndexError(f"symmetry index {t} not in [0, 11]")
    g = np.asarray(g)
    return (g.astype(np.int64) @ SYMMETRIES[t].astype(np.int64)).astype(g.dtype)


def normalize_translation(g) -> np.ndarray:
    """Subtract the columnwise minimum; raise if the result leaves the box."""
    g = np.asarray(g, dtype=np.int64)
    out = g - g.min(axis=-2, keepdims=True)
    if out.size and out.max() > MAX_COEF:
        raise OutOfBoundsError(
            f"normalized coefficient {int(out.max())} exceeds {MAX_COEF}"
        )
    return out.astype(COORD_DTYPE)


def point_code(p) -> int:
    """Bijective base-21 encoding of a point with coefficients in [0, 20]."""
    p = np.asarray(p, dtype=np.int64)
    assert p.min() >= 0 and p.max() <= MAX_COEF, "point outside canonical box"
    return int(p @ CODE_WEIGHTS)


def point_codes(mats) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    assert mats.size == 0 or (mats.min() >= 0 and mats.max() <= MAX_COEF)
    return mats @ CODE_WEIGHTS


@dataclass(frozen=True)
class ZobristTable:
    """21^4 pseudo-random 64-bit keys, one per canonical point code."""

    seed: int
    keys: np.ndarray

    @classmethod
    def from_seed(cls, seed: int = DEFAULT_SEED) -> "ZobristTable":
        keys = np.empty(KEY_COUNT, dtype=np.uint64)
        _kernels.splitmix64_fill(np.uint64(seed & 0xFFFFFFFFFFFFFFFF), keys)
        keys.setflags(write=False)
        return cls(seed=seed, keys=keys)


def zobrist_hash(g, table: ZobristTable) -> int:
    """XOR of the keys of a graph's rows (rows must be in the box)."""
    g = np.asarray(g, dtype=np.int64)
    if g.size == 0:
        return 0
    return int(np.bitwise_xor.reduce(table.keys[point_codes(g)], axis=-1))


@dataclass
class CanonResult:
    """Canonized survivors of a batch, aligned by the ``kept`` mask.

    ``mats[k]`` / ``hashes[k]`` correspond to the k-th input whose ``kept``
    flag is True.  Inputs where every symmetry image overflows the box are
    dropped and only counted.
    """

    mats: np.ndarray  # (k, n, 4) int16, canonical
    hashes: np.ndarray  # (k,) uint64
    kept: np.ndarray  # (m,) bool

    @property
    def dropped(self) -> int:
        return int(self.kept.size - self.kept.sum())

    def __len__(self) -> int:
        return self.mats.shape[0]


def canonize_batch(gs, table: ZobristTable) -> CanonResult:
    """Canonize a batch of same-size graphs (list of (n,4) arrays or (m,n,4))."""
    mats = np.ascontiguousarray(np.asarray(gs), dtype=COORD_DTYPE)
    if mats.ndim == 2:
        mats = mats[None]
    m, n, _ = mats.shape
    if m == 0:
        return CanonResult(
            mats=np.empty((0, n, 4), COORD_DTYPE),
            hashes=np.empty(0, np.uint64),
            kept=np.empty(0, bool),
        )
    out_mats = np.empty((m, n, 4), COORD_DTYPE)
    out_hash = np.empty(m, np.uint64)
    out_ok = np.empty(m, bool)
    _kernels.canonize_kernel(mats, table.keys, MAX_COEF, out_mats, out_hash, out_ok)
    if out_ok.all():
        return CanonResult(mats=out_mats, hashes=out_hash, kept=out_ok)
    return CanonResult(mats=out_mats[out_ok], hashes=out_hash[out_ok], kept=out_ok)


def canonize_one(g, table: ZobristTable) -> tuple[np.ndarray, int]:
    """Canonize a single graph; raise OutOfBoundsError if it cannot fit."""
    res = canonize_batch(g, table)
    if res.dropped:
        raise OutOfBoundsError("graph does not fit the canonical box in any symmetry")
    return res.mats[0], int(res.hashes[0])
