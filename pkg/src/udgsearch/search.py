"""Diverse backtracking beam search over graph sizes.

The outer loop runs the beam forward from the start graph (Moser spindle by
default), one vertex per step, pruning each children set to the beam width by
a diversity-adjusted score: edge count minus the graph's visitation count.
Visitation counters live in a flat array indexed by the top bits of the
Zobrist hash and persist across runs, so repeated runs are pushed toward
unexplored regions of the search tree.

Whenever a forward step retains a never-visited graph that attains the best
known edge count at its size, the backward procedure kicks in: it ascends
through parent levels while their leaders are fresh and at-record, then
descends again, regenerating children of each stored level, recursing on
promising children sets, and merging parents with regenerated children at an
edge-count threshold (the width-th largest of the merged counts, ties kept).
This is what lets the search leave the cone of supergraphs of its start graph
and recover dense graphs whose ancestors are sub-optimal.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .canonical import DEFAULT_SEED, ZobristTable
from .genealogy import (
    DEFAULT_CHUNK_LIMIT,
    GraphSet,
    children,
    concat_sets,
    graph_set,
    parents,
)
from .lattice import MOSER_SPINDLE
from .store import GraphStore

CHECKPOINT_MAGIC = b"UDGV"
CHECKPOINT_VERSION = 1

#: Backward never descends to graphs this small (ascent floor).
MIN_BACKWARD_VERTICES = 4

#: Start graphs up to this size are seeded with their full connected
#: induced-subgraph closure (fills the trivial rows V=1..4).
ANCESTRY_CLOSURE_LIMIT = 10


class EmptyFrontier(Exception):
    """A forward step produced no children; the search cannot continue."""


def score(edges, visits):
    """Diversity-adjusted score: edge count minus visitation count."""
    return np.asarray(edges, dtype=np.int64) - np.asarray(visits, dtype=np.int64)


@dataclass
class Beam:
    """A pruned frontier: canonical graphs plus their scores at prune time."""

    gs: GraphSet
    scores: np.ndarray  # (m,) int64

    @property
    def n(self) -> int:
        return self.gs.n

    def __len__(self) -> int:
        return len(self.gs)

    @property
    def max_score(self) -> int:
        return int(self.scores.max())

    @property
    def leaders(self) -> np.ndarray:
        """Indices of all graphs attaining the maximum score."""
        return np.flatnonzero(self.scores == self.scores.max())


def prune(beam: Beam, width: int) -> Beam:
    """Keep the ``width`` highest-score graphs; ties break by hash ascending."""
    if width < 1:
        raise ValueError("width must be >= 1")
    if len(beam) <= width:
        return beam
    order = np.lexsort((beam.gs.hashes, -beam.scores))[:width]
    return Beam(beam.gs.take(order), beam.scores[order])


class VisitationStore:
    """2**head_bits saturating visit counters indexed by the hash head."""

    def __init__(self, head_bits: int = 28):
        self.head_bits = head_bits
        self.counts = np.zeros(1 << head_bits, dtype=np.uint32)
        self._shift = np.uint64(64 - head_bits)
        self.max_seen = 0

    def index(self, hashes) -> np.ndarray:
        return (np.asarray(hashes, dtype=np.uint64) >> self._shift).astype(np.int64)

    def get(self, hashes) -> np.ndarray:
        return self.counts[self.index(hashes)].astype(np.int64)

    def increment(self, hashes) -> None:
        idx = self.index(hashes)
        sat = self.counts[idx] != np.iinfo(np.uint32).max
        np.add.at(self.counts, idx[sat], 1)
        if len(idx):
            self.max_seen = max(self.max_seen, int(self.counts[idx].max()))

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(CHECKPOINT_MAGIC)
            fh.write(struct.pack("<II", CHECKPOINT_VERSION, self.head_bits))
            self.counts.astype("<u4").tofile(fh)

    @classmethod
    def load(cls, path) -> "VisitationStore":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != CHECKPOINT_MAGIC:
                raise ValueError(f"{path}: bad checkpoint magic {magic!r}")
            version, head_bits = struct.unpack("<II", fh.read(8))
            if version != CHECKPOINT_VERSION:
                raise ValueError(f"{path}: unsupported version {version}")
            store = cls.__new__(cls)
            store.head_bits = head_bits
            store._shift = np.uint64(64 - head_bits)
            store.counts = np.fromfile(fh, dtype="<u4", count=1 << head_bits).astype(
                np.uint32
            )
        if store.counts.size != 1 << head_bits:
            raise ValueError(f"{path}: truncated counter array")
        store.max_seen = int(store.counts.max())
        return store


class BestTable:
    """Highest edge count seen at each vertex count (monotone)."""

    def __init__(self):
        self._best: dict[int, int] = {}

    def get(self, n: int) -> int:
        return self._best.get(n, -1)

    def update(self, n: int, e: int) -> bool:
        """Record an edge count; returns True when this improves the entry."""
        if e > self._best.get(n, -1):
            self._best[n] = int(e)
            return True
        return False

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self._best.items())

    def as_dict(self) -> dict[int, int]:
        return dict(self._best)

    def save(self, path) -> None:
        rows = self.rows()
        with open(path, "wb") as fh:
            fh.write(CHECKPOINT_MAGIC)
            fh.write(struct.pack("<II", CHECKPOINT_VERSION, len(rows)))
            for n, e in rows:
                fh.write(struct.pack("<II", n, e))

    @classmethod
    def load(cls, path) -> "BestTable":
        table = cls()
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != CHECKPOINT_MAGIC:
                raise ValueError(f"{path}: bad checkpoint magic {magic!r}")
            version, count = struct.unpack("<II", fh.read(8))
            if version != CHECKPOINT_VERSION:
                raise ValueError(f"{path}: unsupported version {version}")
            for _ in range(count):
                n, e = struct.unpack("<II", fh.read(8))
                table._best[n] = e
        return table


@dataclass
class SearchConfig:
    beam_width: int = 100
    max_vertices: int = 30
    num_runs: int = 1
    chunk_limit: int = DEFAULT_CHUNK_LIMIT
    seed: int = DEFAULT_SEED
    start: np.ndarray | None = None  # defaults to the Moser spindle
    enable_backward: bool = True
    head_bits: int = 28
    width_table: dict[int, int] | None = None

    def width(self, n: int) -> int:
        if self.width_table and n in self.width_table:
            return self.width_table[n]
        return self.beam_width


@dataclass
class SearchState:
    config: SearchConfig
    table: ZobristTable
    visits: VisitationStore
    best: BestTable
    store: GraphStore | None = None
    counters: Counter = field(default_factory=Counter)
    log_lines: list[str] = field(default_factory=list)
    run: int = -1  # -1 until the first run starts (seeding phase)

    @classmethod
    def fresh(cls, config: SearchConfig, store: GraphStore | None = None) -> "SearchState":
        return cls(
            config=config,
            table=ZobristTable.from_seed(config.seed),
            visits=VisitationStore(config.head_bits),
            best=BestTable(),
            store=store,
        )

    def width(self, n: int) -> int:
        return self.config.width(n)

    def log(self, msg: str) -> None:
        self.log_lines.append(msg)

    def record(self, gs: GraphSet, idx=None) -> None:
        if self.store is None or len(gs) == 0:
            return
        sel = gs if idx is None else gs.take(idx)
        self.store.add_graphs(sel.n, sel.mats, sel.hashes, sel.edges)

    def note_best(self, n: int, e: int) -> bool:
        improved = self.best.update(n, e)
        if improved:
            where = "seed" if self.run < 0 else f"run {self.run}"
            self.log(f"{where}: best[{n}] = {e}")
        return improved


def chunked_map(batch, op, limit: int):
    """Apply ``op`` to consecutive sub-batches of at most ``limit`` rows.

    ``batch`` is an (m, n, ...) array or a GraphSet; ``limit`` counts matrix
    rows, so each call receives at most max(1, limit // n) graphs.  Results
    are concatenated; for a batch-size-agnostic op this equals the unchunked
    application.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if isinstance(batch, GraphSet):
        m, n = len(batch), batch.n
        take = lambda s, e: batch.take(np.arange(s, e))
    else:
        batch = np.asarray(batch)
        m, n = batch.shape[0], batch.shape[1]
        take = lambda s, e: batch[s:e]
    per = max(1, limit // max(1, n))
    outs = [op(take(s, min(s + per, m))) for s in range(0, m, per)]
    if not outs:
        return op(take(0, 0))
    if isinstance(outs[0], GraphSet):
        return concat_sets([o for o in outs if len(o)]) if any(len(o) for o in outs) else outs[0]
    if isinstance(outs[0], tuple):
        return tuple(np.concatenate(parts) for parts in zip(*outs))
    return np.concatenate(outs)


def _make_beam(gs: GraphSet, state: SearchState) -> Beam:
    return Beam(gs, score(gs.edges, state.visits.get(gs.hashes)))


def forward_step(beam: Beam, state: SearchState) -> tuple[Beam, bool]:
    """One beam-search round: children, diversity scores, prune, bookkeeping.

    Returns the pruned next beam and whether it retained a zero-visitation
    graph attaining the best known edge count at its size (the trigger for a
    backward pass).  Raises EmptyFrontier when there are no children.
    """
    cfg = state.config
    width = state.width(beam.n + 1)
    kids, stats = children(
        beam.gs,
        state.table,
        chunk_limit=cfg.chunk_limit,
        keep_top=width,
        visit_slack=state.visits.max_seen,
    )
    state.counters["children_dropped_oob"] += stats.dropped_oob
    if len(kids) == 0:
        raise EmptyFrontier(f"no children at {beam.n + 1} vertices")
    state.note_best(kids.n, stats.max_edges)
    visits = state.visits.get(kids.hashes)
    scores = score(kids.edges, visits)
    order = np.lexsort((kids.hashes, -scores))[:width]
    retained = kids.take(order)
    pre_visits = visits[order]
    state.visits.increment(retained.hashes)
    best_e = state.best.get(kids.n)
    fresh = bool(np.any((pre_visits == 0) & (retained.edges == best_e)))
    state.record(retained)
    # Record-attaining children always reach the database even when the
    # diversity ordering prunes them out of the beam.
    attain = np.flatnonzero(kids.edges == best_e)
    if len(attain):
        state.record(kids, attain)
    return Beam(retained, scores[order]), fresh


def _parent_level(beam: Beam, state: SearchState) -> tuple[Beam, np.ndarray] | None:
    """Pruned parent level of a beam, or None when empty.

    Returns the level and the pre-prune visitation counts of its retained
    graphs (the ascent's freshness check must read counters *before* any
    increments; ascent does not increment).
    """
    pg, stats = parents(beam.gs, state.table, chunk_limit=state.config.chunk_limit)
    state.counters["parents_disconnected"] += stats.disconnected
    if len(pg) == 0:
        return None
    state.note_best(pg.n, stats.max_edges)
    visits = state.visits.get(pg.hashes)
    scores = score(pg.edges, visits)
    width = state.width(pg.n)
    if len(pg) > width:
        order = np.lexsort((pg.hashes, -scores))[:width]
        level, vis = Beam(pg.take(order), scores[order]), visits[order]
    else:
        level, vis = Beam(pg, scores), visits
    state.record(level.gs)
    attain = np.flatnonzero(pg.edges == state.best.get(pg.n))
    if len(attain):
        state.record(pg, attain)
    return level, vis


def _merge_level(target: Beam, kids: GraphSet, kid_scores: np.ndarray,
                 gb: Beam | None, state: SearchState) -> Beam:
    """Merge a level with regenerated children (and recursion output).

    Threshold t is the width-th largest of the concatenated raw edge counts;
    every graph with edge count >= t survives (ties kept), then duplicates
    collapse by hash.  Retained graphs are visitation-incremented and
    recorded.
    """
    width = state.width(target.n)
    parts = [target.gs, kids] + ([gb.gs] if gb is not None and len(gb) else [])
    all_edges = np.concatenate([p.edges for p in parts])
    k = min(width, len(all_edges))
    t = np.partition(all_edges, len(all_edges) - k)[len(all_edges) - k]
    merged = concat_sets([p.take(np.flatnonzero(p.edges >= t)) for p in parts])
    uniq, idx = np.unique(merged.hashes, return_index=True)
    merged = GraphSet(merged.mats[idx], uniq, merged.edges[idx])
    visits = state.visits.get(merged.hashes)
    state.visits.increment(merged.hashes)
    state.record(merged)
    return Beam(merged, score(merged.edges, visits))


def backward(beam: Beam, state: SearchState, depth: int = 0) -> Beam:
    """The multi-level backward pass (ascend to parents, re-descend).

    Ascent stops when parents are empty or would have <= 4 vertices, when the
    parent leaders' score falls below the best table, or when every leader
    has been visited before.  The descent then walks the stored levels from
    the deepest up, regenerating children, recursing when they set or
    freshly attain a record, and merging them into the next level.  Returns
    a beam at the input's vertex count.
    """
    cfg = state.config
    levels: list[Beam] = [beam]
    cur = beam
    while cur.n - 1 > MIN_BACKWARD_VERTICES:
        got = _parent_level(cur, state)
        if got is None:
            break
        level, pre_visits = got
        levels.append(level)
        if level.max_score < state.best.get(level.n):
            break
        leader_visits = pre_visits[level.leaders]
        if np.all(leader_visits > 0):
            break
        cur = level
    if len(levels) == 1:
        return beam
    for i in range(len(levels) - 1, 0, -1):
        lower = levels[i]
        kids, stats = children(
            lower.gs,
            state.table,
            chunk_limit=cfg.chunk_limit,
            keep_top=state.width(lower.n + 1),
            visit_slack=state.visits.max_seen,
        )
        state.counters["children_dropped_oob"] += stats.dropped_oob
        if len(kids) == 0 or kids.n <= 6:
            continue
        improved = state.note_best(kids.n, stats.max_edges)
        kid_visits = state.visits.get(kids.hashes)
        kid_scores = score(kids.edges, kid_visits)
        check = improved or bool(
            np.any((kid_visits == 0) & (kids.edges == state.best.get(kids.n)))
        )
        gb = None
        if check and depth < cfg.max_vertices:
            staged = prune(Beam(kids, kid_scores), state.width(kids.n))
            gb = backward(staged, state, depth + 1)
        levels[i - 1] = _merge_level(levels[i - 1], kids, kid_scores, gb, state)
    return levels[0]


def _seed_start(state: SearchState, start_gs: GraphSet) -> None:
    """Record the start graph and (for small starts) its ancestry closure."""
    state.note_best(start_gs.n, int(start_gs.edges.max()))
    state.record(start_gs)
    if start_gs.n > ANCESTRY_CLOSURE_LIMIT:
        return
    level = start_gs
    while level.n > 1:
        level, stats = parents(level, state.table, chunk_limit=state.config.chunk_limit)
        if len(level) == 0:
            break
        state.note_best(level.n, stats.max_edges)
        state.record(level)


def run_search(config: SearchConfig, store: GraphStore | None = None,
               state: SearchState | None = None) -> SearchState:
    """Run the configured number of diversity runs; returns the final state."""
    if state is None:
        state = SearchState.fresh(config, store)
    elif store is not None:
        state.store = store
    start = config.start if config.start is not None else MOSER_SPINDLE
    start_gs = graph_set(np.asarray(start), state.table)
    _seed_start(state, start_gs)
    for run in range(config.num_runs):
        state.run = run
        beam = _make_beam(start_gs, state)
        while beam.n < config.max_vertices:
            try:
                beam, _fresh = forward_step(beam, state)
            except EmptyFrontier:
                state.log(f"run {run}: empty frontier at {beam.n + 1} vertices")
                break
            # Every forward step is followed by a backward pass: its merges
            # re-inject top-edge graphs into the beam (the raw-edge threshold
            # ignores the diversity penalty), balancing the forward prune's
            # exploration.  Without this the search plateaus below the known
            # optima at 27/29/30 vertices.
            if config.enable_backward:
                beam = backward(beam, state)
        state.log(f"run {run}: reached {beam.n} vertices")
    return state


def save_checkpoints(state: SearchState, out_dir) -> None:
    out = Path(out_dir)
    state.visits.save(out / "visitation.ckpt")
    state.best.save(out / "best_table.ckpt")


def load_checkpoints(state: SearchState, out_dir) -> bool:
    """Load visitation/best-table checkpoints when present; True if loaded."""
    out = Path(out_dir)
    vpath = out / "visitation.ckpt"
    bpath = out / "best_table.ckpt"
    loaded = False
    if vpath.exists():
        state.visits = VisitationStore.load(vpath)
        loaded = True
    if bpath.exists():
        state.best = BestTable.load(bpath)
        loaded = True
    return loaded
