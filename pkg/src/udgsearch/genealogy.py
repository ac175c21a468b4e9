"""Children (n -> n+1) and parents (n -> n-1) of embedded graphs.

Children are generated by three vectorized operations on a batch of parent
graphs: (1) add a generator offset to a vertex, (2) complete a unit triangle
over an adjacent pair, (3) complete a parallelogram over a path of two edges.
Every new vertex lands at unit distance from at least one existing vertex, so
children of connected graphs stay connected.  Results are canonized and
deduplicated by hash; the output is sorted by hash, which makes it
independent of chunking.

Parents are the connected single-vertex deletions, likewise canonized and
deduplicated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .canonical import ROTATION, ZobristTable, canonize_batch
from .lattice import COORD_DTYPE, GENERATOR_OFFSETS

#: Upper bound on rows per internal work chunk (graphs per chunk = limit // n).
DEFAULT_CHUNK_LIMIT = 1 << 16

#: Candidate child matrices are canonized in slices of this many graphs.
_CAND_CHUNK = 1 << 16


@dataclass
class GraphSet:
    """A batch of canonical same-size graphs with hashes and edge counts."""

    mats: np.ndarray  # (m, n, 4) int16, canonical rows
    hashes: np.ndarray  # (m,) uint64
    edges: np.ndarray  # (m,) int32

    @property
    def n(self) -> int:
        return self.mats.shape[1]

    def __len__(self) -> int:
        return self.mats.shape[0]

    def take(self, idx) -> "GraphSet":
        return GraphSet(self.mats[idx], self.hashes[idx], self.edges[idx])

    @classmethod
    def empty(cls, n: int) -> "GraphSet":
        return cls(
            np.empty((0, n, 4), COORD_DTYPE),
            np.empty(0, np.uint64),
            np.empty(0, np.int32),
        )


@dataclass
class GenStats:
    """Bookkeeping for one children()/parents() call."""

    raw_candidates: int = 0
    unique_candidates: int = 0
    prefiltered: int = 0
    dropped_oob: int = 0
    disconnected: int = 0
    max_edges: int = -1


def unit_adjacency(mats) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise unit-distance adjacency and edge counts for a batch."""
    mats = np.ascontiguousarray(np.asarray(mats), dtype=COORD_DTYPE)
    if mats.ndim == 2:
        mats = mats[None]
    m, n, _ = mats.shape
    adj = np.empty((m, n, n), dtype=bool)
    edges = np.empty(m, dtype=np.int32)
    if m:
        _kernels.adjacency_kernel(mats, adj, edges)
    return adj, edges


def edge_count(g) -> int:
    """Number of unordered vertex pairs at distance exactly 1."""
    _, e = unit_adjacency(np.asarray(g)[None] if np.asarray(g).ndim == 2 else g)
    return int(e[0])


def edge_counts(mats) -> np.ndarray:
    _, e = unit_adjacency(mats)
    return e


def graph_set(mats, table: ZobristTable) -> GraphSet:
    """Canonize a batch (no dedup) and attach edge counts."""
    mats = np.asarray(mats, dtype=COORD_DTYPE)
    if mats.ndim == 2:
        mats = mats[None]
    res = canonize_batch(mats, table)
    if res.dropped:
        raise ValueError(f"{res.dropped} graphs do not fit the canonical box")
    _, edges = unit_adjacency(res.mats)
    return GraphSet(res.mats, res.hashes, edges)


# ---------------------------------------------------------------------------
# candidate enumeration


def _op1_raw(mats) -> tuple[np.ndarray, np.ndarray]:
    m, n, _ = mats.shape
    cand = mats[:, :, None, :] + GENERATOR_OFFSETS[None, None, :, :]
    pi = np.repeat(np.arange(m, dtype=np.int64), n * 8)
    return pi, cand.reshape(-1, 4)


def _op2_raw(mats, adj) -> tuple[np.ndarray, np.ndarray]:
    g, u, v = np.nonzero(adj)  # ordered pairs: both orientations present
    if g.size == 0:
        return np.empty(0, np.int64), np.empty((0, 4), COORD_DTYPE)
    delta = mats[g, v] - mats[g, u]
    nv = mats[g, u] + delta @ ROTATION
    return g.astype(np.int64), nv


def _op3_raw(mats, adj) -> tuple[np.ndarray, np.ndarray]:
    m, n, _ = mats.shape
    deg = adj.sum(axis=2)
    dmax = int(deg.max()) if deg.size else 0
    if dmax < 2:
        return np.empty(0, np.int64), np.empty((0, 4), COORD_DTYPE)
    # Packed neighbour lists: for each centre vertex the first deg entries of
    # `nbr` are its neighbours in ascending index order.
    nbr = np.argsort(~adj, axis=2, kind="stable")[:, :, :dmax]
    s_idx, t_idx = np.triu_indices(dmax, k=1)
    valid = t_idx[None, None, :] < deg[:, :, None]
    g, v, p = np.nonzero(valid)
    if g.size == 0:
        return np.empty(0, np.int64), np.empty((0, 4), COORD_DTYPE)
    u = nbr[g, v, s_idx[p]]
    w = nbr[g, v, t_idx[p]]
    nv = mats[g, u] + mats[g, w] - mats[g, v]
    return g.astype(np.int64), nv


def _enumerate_ops(mats, adj) -> tuple[np.ndarray, np.ndarray]:
    parts = [_op1_raw(mats), _op2_raw(mats, adj), _op3_raw(mats, adj)]
    pi = np.concatenate([p for p, _ in parts])
    nv = np.concatenate([v for _, v in parts]).astype(COORD_DTYPE)
    return pi, nv


def _materialize(mats, pi, nv) -> np.ndarray:
    return np.concatenate([mats[pi], nv[:, None, :]], axis=1)


def _filtered_op(mats, pi, nv) -> tuple[np.ndarray, np.ndarray]:
    # Drop candidates whose new vertex coincides with an existing vertex.
    dup = (mats[pi] == nv[:, None, :]).all(axis=-1).any(axis=-1)
    return pi[~dup], nv[~dup]


def _op_surface(mats, raw) -> tuple[np.ndarray, np.ndarray]:
    mats = np.ascontiguousarray(np.asarray(mats), dtype=COORD_DTYPE)
    if mats.ndim == 2:
        mats = mats[None]
    adj, _ = unit_adjacency(mats)
    pi, nv = raw(mats, adj)
    pi, nv = _filtered_op(mats, pi, nv)
    return _materialize(mats, pi, nv), pi


def children_op1(mats) -> tuple[np.ndarray, np.ndarray]:
    """Single-edge addition candidates: (child matrices, parent indices)."""
    return _op_surface(mats, lambda m, a: _op1_raw(m))


def children_op2(mats) -> tuple[np.ndarray, np.ndarray]:
    """Unit-triangle completion candidates over adjacent pairs."""
    return _op_surface(mats, _op2_raw)


def children_op3(mats) -> tuple[np.ndarray, np.ndarray]:
    """Parallelogram completion candidates over two-edge paths."""
    return _op_surface(mats, _op3_raw)


# ---------------------------------------------------------------------------
# batch children / parents


def _graphs_per_chunk(n: int, chunk_limit: int) -> int:
    return max(1, chunk_limit // max(1, n))


def children(
    gs: GraphSet,
    table: ZobristTable,
    *,
    chunk_limit: int = DEFAULT_CHUNK_LIMIT,
    keep_top: int | None = None,
    visit_slack: int = 0,
) -> tuple[GraphSet, GenStats]:
    """All distinct canonical children of a batch, sorted by hash.

    With ``keep_top`` set, candidates whose edge count provably cannot reach
    the top ``keep_top`` scores after a visitation penalty of at most
    ``visit_slack`` are skipped before canonization.  The maximum edge count
    is never filtered, so ``stats.max_edges`` is exact either way.
    """
    stats = GenStats()
    m, n, _ = gs.mats.shape
    if m == 0:
        return GraphSet.empty(n + 1), stats
    per = _graphs_per_chunk(n, chunk_limit)
    pis, nvs, fps, degs = [], [], [], []
    for s in range(0, m, per):
        sub = np.ascontiguousarray(gs.mats[s : s + per])
        adj, _ = unit_adjacency(sub)
        pi, nv = _enumerate_ops(sub, adj)
        stats.raw_candidates += len(pi)
        deg = np.empty(len(pi), np.int32)
        dup = np.empty(len(pi), bool)
        fp = np.empty(len(pi), np.uint64)
        if len(pi):
            _kernels.candidate_scan_kernel(sub, pi, np.ascontiguousarray(nv), deg, dup, fp)
        keep = ~dup
        pis.append(pi[keep] + s)
        nvs.append(nv[keep])
        fps.append(fp[keep])
        degs.append(deg[keep])
    pi = np.concatenate(pis)
    nv = np.concatenate(nvs)
    fp = np.concatenate(fps)
    deg = np.concatenate(degs)
    if len(pi) == 0:
        return GraphSet.empty(n + 1), stats
    # Collapse identical child vertex sets (first occurrence wins; the
    # concatenation order is chunk-invariant up to set identity).
    _, first = np.unique(fp, return_index=True)
    first.sort()
    pi, nv, deg = pi[first], nv[first], deg[first]
    cedges = gs.edges[pi].astype(np.int32) + deg
    stats.unique_candidates = len(pi)
    if keep_top is not None and len(cedges) > keep_top:
        kth = np.partition(cedges, len(cedges) - keep_top)[len(cedges) - keep_top]
        thresh = int(kth) - int(visit_slack) - 2
        mask = cedges >= thresh
        stats.prefiltered = int(len(mask) - mask.sum())
        pi, nv, cedges = pi[mask], nv[mask], cedges[mask]
    out_m, out_h, out_e = [], [], []
    for s in range(0, len(pi), _CAND_CHUNK):
        sl = slice(s, s + _CAND_CHUNK)
        cand = _materialize(gs.mats, pi[sl], nv[sl])
        res = canonize_batch(cand, table)
        stats.dropped_oob += res.dropped
        out_m.append(res.mats)
        out_h.append(res.hashes)
        out_e.append(cedges[sl][res.kept])
    mats = np.concatenate(out_m)
    hashes = np.concatenate(out_h)
    edges = np.concatenate(out_e)
    if len(hashes) == 0:
        return GraphSet.empty(n + 1), stats
    uniq, idx = np.unique(hashes, return_index=True)
    out = GraphSet(mats[idx], uniq, edges[idx])
    stats.max_edges = int(out.edges.max())
    return out, stats


def parents(
    gs: GraphSet,
    table: ZobristTable,
    *,
    chunk_limit: int = DEFAULT_CHUNK_LIMIT,
) -> tuple[GraphSet, GenStats]:
    """All distinct canonical connected single-vertex deletions."""
    stats = GenStats()
    m, n, _ = gs.mats.shape
    if n < 2:
        raise ValueError("parents require at least 2 vertices")
    if m == 0:
        return GraphSet.empty(n - 1), stats
    per = _graphs_per_chunk(n, chunk_limit)
    keep_rows = np.stack([np.delete(np.arange(n), v) for v in range(n)])  # (n, n-1)
    out_m, out_h, out_e = [], [], []
    for s in range(0, m, per):
        sub = np.ascontiguousarray(gs.mats[s : s + per])
        k = sub.shape[0]
        adj, _ = unit_adjacency(sub)
        conn = np.empty((k, n), bool)
        _kernels.deletion_connectivity_kernel(adj, conn)
        deg = adj.sum(axis=2, dtype=np.int32)
        cand = sub[:, keep_rows, :].reshape(k * n, n - 1, 4)
        pedges = (gs.edges[s : s + per, None] - deg).reshape(k * n)
        mask = conn.reshape(k * n)
        stats.raw_candidates += k * n
        stats.disconnected += int(len(mask) - mask.sum())
        if not mask.any():
            continue
        res = canonize_batch(cand[mask], table)
        stats.dropped_oob += res.dropped
        out_m.append(res.mats)
        out_h.append(res.hashes)
        out_e.append(pedges[mask][res.kept].astype(np.int32))
    if not out_m:
        return GraphSet.empty(n - 1), stats
    mats = np.concatenate(out_m)
    hashes = np.concatenate(out_h)
    edges = np.concatenate(out_e)
    uniq, idx = np.unique(hashes, return_index=True)
    out = GraphSet(mats[idx], uniq, edges[idx])
    stats.unique_candidates = len(out)
    stats.max_edges = int(out.edges.max())
    return out, stats


def concat_sets(sets: list[GraphSet]) -> GraphSet:
    """Concatenate same-size GraphSets (no dedup)."""
    sets = [s for s in sets if len(s)]
    if not sets:
        raise ValueError("nothing to concatenate")
    return GraphSet(
        np.concatenate([s.mats for s in sets]),
        np.concatenate([s.hashes for s in sets]),
        np.concatenate([s.edges for s in sets]),
    )
