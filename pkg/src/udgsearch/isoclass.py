"""Abstract-graph isomorphism classes and Minkowski sums.

Lattice canonization distinguishes congruence classes of embeddings, which
over-counts: the same abstract graph often has several canonical embeddings.
Counting isomorphism classes needs an embedding-free canonical label.  The
label here is the lexicographically smallest adjacency-matrix bit string over
all vertex orderings consistent with an equitable colouring, found by color
refinement plus individualization backtracking.  Dense unit-distance graphs
are small and nearly regular, so this stays fast without automorphism
machinery.
"""

from __future__ import annotations

import numpy as np

from .canonical import normalize_translation
from .genealogy import unit_adjacency
from .lattice import COORD_DTYPE


def to_abstract(g) -> np.ndarray:
    """Forget the embedding: symmetric boolean unit-distance adjacency."""
    g = np.asarray(g)
    adj, _ = unit_adjacency(g[None] if g.ndim == 2 else g)
    return adj[0]


def _refine(neigh: list[np.ndarray], colors: list[int]) -> list[int]:
    # Iterated equitable refinement; colour ranks are assigned by sorted
    # signature, so they are isomorphism-invariant.
    n = len(colors)
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in neigh[v]))) for v in range(n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _cells(colors: list[int]) -> list[list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def _prefix_bits(adj, prefix: list[int]) -> tuple[int, ...]:
    # Adjacency bits in new-vertex-major order: vertex j contributes its
    # edges to all earlier vertices.  Pairs within the first k ordered
    # vertices therefore occupy exactly the first k*(k-1)/2 positions, so a
    # partial order determines a prefix of the final bit string.
    bits: list[int] = []
    for j in range(1, len(prefix)):
        row = adj[prefix[j]]
        bits.extend(int(row[prefix[i]]) for i in range(j))
    return tuple(bits)


def canonical_label(adj) -> bytes:
    """Isomorphism-invariant label: minimal adjacency bits over consistent orders."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 0:
        return b""
    if n > 128:
        raise ValueError("canonical_label supports at most 128 vertices")
    neigh = [np.flatnonzero(adj[v]) for v in range(n)]
    best: tuple[int, ...] | None = None

    def descend(colors: list[int]) -> None:
        nonlocal best
        colors = _refine(neigh, colors)
        cells = _cells(colors)
        prefix: list[int] = []
        target = None
        for cell in cells:
            if len(cell) == 1:
                prefix.append(cell[0])
            else:
                target = cell
                break
        bits = _prefix_bits(adj, prefix)
        if best is not None and bits > best[: len(bits)]:
            return
        if target is None:
            if best is None or bits < best:
                best = bits
            return
        # Individualize each vertex of the first non-singleton cell in turn,
        # placing it ahead of its cellmates.
        c = colors[target[0]]
        for v in target:
            child = [
                col + (2 if col > c else (1 if col == c and u != v else 0))
                for u, col in enumerate(colors)
            ]
            descend(child)

    descend([0] * n)
    assert best is not None
    packed = np.packbits(np.array(best, dtype=np.uint8)).tobytes() if best else b""
    return bytes([n]) + packed


def count_iso_classes(graphs) -> int:
    """Number of distinct isomorphism classes among embedded graphs."""
    labels = {canonical_label(to_abstract(g)) for g in graphs}
    return len(labels)


def minkowski_sum(a, b) -> np.ndarray:
    """Pairwise vertex-set sum, deduplicated and translation-normalized.

    Raises OutOfBoundsError when the normalized sum leaves the canonical
    coefficient box.  Disjointness holds iff the result has |a|*|b| rows.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("minkowski_sum requires nonempty point sets")
    sums = (a[:, None, :] + b[None, :, :]).reshape(-1, 4)
    uniq = np.unique(sums, axis=0)
    return normalize_translation(uniq).astype(COORD_DTYPE)
