"""Persistent database of discovered graphs.

Graphs are stored in one text shard per vertex count (``udg_<n>.txt``),
record format::

    G <n> <m> <hash as 16 hex digits>
    a b c d            (n rows, canonical order)
    <blank line>

Appends are deduplicated by (vertex count, hash).  The summary table derives,
per vertex count, the maximum edge count and the number of abstract
isomorphism classes among the max-edge graphs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .genealogy import edge_counts
from .isoclass import canonical_label, to_abstract
from .lattice import COORD_DTYPE


class StoreError(ValueError):
    """A record failed validation or a shard is malformed."""


_HEADER = re.compile(r"^G (\d+) (\d+) ([0-9a-f]{16})$")


@dataclass
class GraphRecord:
    vertex_count: int
    edge_count: int
    hash: int
    matrix: np.ndarray

    @classmethod
    def from_graph(cls, matrix, hash_: int, edge_count_: int | None = None):
        matrix = np.asarray(matrix, dtype=COORD_DTYPE)
        if edge_count_ is None:
            edge_count_ = int(edge_counts(matrix[None])[0])
        return cls(
            vertex_count=matrix.shape[0],
            edge_count=int(edge_count_),
            hash=int(hash_),
            matrix=matrix,
        )


def format_record(rec: GraphRecord) -> str:
    lines = [f"G {rec.vertex_count} {rec.edge_count} {rec.hash & (2**64 - 1):016x}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in rec.matrix)
    lines.append("")
    return "\n".join(lines) + "\n"


def parse_records(text: str, path: str = "<string>") -> list[GraphRecord]:
    """Parse a stream of records; reports 1-based line numbers on errors."""
    records = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        m = _HEADER.match(lines[i])
        if not m:
            raise StoreError(f"{path}:{i + 1}: bad record header {lines[i]!r}")
        n, e, h = int(m.group(1)), int(m.group(2)), int(m.group(3), 16)
        if i + n >= len(lines) + 1:
            raise StoreError(f"{path}:{i + 1}: truncated record")
        rows = []
        for j in range(n):
            parts = lines[i + 1 + j].split()
            if len(parts) != 4:
                raise StoreError(f"{path}:{i + 2 + j}: expected 4 coefficients")
            try:
                rows.append([int(p) for p in parts])
            except ValueError as exc:
                raise StoreError(f"{path}:{i + 2 + j}: {exc}") from exc
        records.append(
            GraphRecord(n, e, h, np.array(rows, dtype=COORD_DTYPE))
        )
        i += n + 1
    return records


def parse_graph_file(path) -> np.ndarray:
    """Read the first record of a graph file; returns just the matrix.

    Input files for CLI commands are parsed leniently: the header's edge
    count and hash are ignored (they depend on the Zobrist seed).
    """
    text = Path(path).read_text()
    records = parse_records(text, str(path))
    if not records:
        raise StoreError(f"{path}: no graph records found")
    return records[0].matrix


class GraphStore:
    """Sharded on-disk store with per-shard hash dedup."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._hashes: dict[int, set[int]] = {}
        for shard in self.directory.glob("udg_*.txt"):
            n = int(shard.stem.split("_")[1])
            self._hashes[n] = set()
            with open(shard) as fh:
                for line in fh:
                    if line.startswith("G "):
                        self._hashes[n].add(int(line.split()[3], 16))

    def shard_path(self, n: int) -> Path:
        return self.directory / f"udg_{n}.txt"

    def known_hashes(self, n: int) -> set[int]:
        return self._hashes.setdefault(n, set())

    def append(self, rec: GraphRecord) -> bool:
        """Validate and append one record; False when already stored."""
        actual = int(edge_counts(rec.matrix[None])[0])
        if actual != rec.edge_count:
            raise StoreError(
                f"edge count {rec.edge_count} does not match recomputed {actual}"
            )
        if rec.matrix.shape[0] != rec.vertex_count:
            raise StoreError("vertex count does not match matrix")
        known = self.known_hashes(rec.vertex_count)
        if rec.hash in known:
            return False
        try:
            with open(self.shard_path(rec.vertex_count), "a") as fh:
                fh.write(format_record(rec))
        except OSError as exc:
            raise StoreError(f"{self.shard_path(rec.vertex_count)}: {exc}") from exc
        known.add(rec.hash)
        return True

    def add_graphs(self, n: int, mats, hashes, edges) -> int:
        """Bulk append of canonical graphs; returns how many were new."""
        known = self.known_hashes(n)
        new_chunks = []
        for mat, h, e in zip(mats, hashes, edges):
            h = int(h)
            if h in known:
                continue
            known.add(h)
            new_chunks.append(
                format_record(GraphRecord(n, int(e), h, mat))
            )
        if not new_chunks:
            return 0
        try:
            with open(self.shard_path(n), "a") as fh:
                fh.write("".join(new_chunks))
        except OSError as exc:
            raise StoreError(f"{self.shard_path(n)}: {exc}") from exc
        return len(new_chunks)

    def vertex_counts(self) -> list[int]:
        return sorted(
            int(p.stem.split("_")[1]) for p in self.directory.glob("udg_*.txt")
        )

    def iter_records(self, n: int):
        path = self.shard_path(n)
        if not path.exists():
            return
        yield from parse_records(path.read_text(), str(path))

    def max_edges(self, n: int) -> int:
        """Max edge count in a shard, from headers only."""
        best = -1
        path = self.shard_path(n)
        if not path.exists():
            return best
        with open(path) as fh:
            for line in fh:
                if line.startswith("G "):
                    best = max(best, int(line.split()[2]))
        return best

    def summary(self) -> list[tuple[int, int, int]]:
        """Rows (V, E_max, I): per size, best edge count and the number of
        isomorphism classes among the graphs attaining it."""
        rows = []
        for n in self.vertex_counts():
            e_max = self.max_edges(n)
            if e_max < 0:
                continue
            labels = set()
            for rec in self.iter_records(n):
                if rec.edge_count != e_max:
                    continue
                actual = int(edge_counts(rec.matrix[None])[0])
                if actual != rec.edge_count:
                    raise StoreError(
                        f"udg_{n}.txt: stored edge count {rec.edge_count} != {actual}"
                    )
                labels.add(canonical_label(to_abstract(rec.matrix)))
            rows.append((n, e_max, len(labels)))
        return rows


def summary_csv(rows) -> str:
    return "V,E,I\n" + "".join(f"{v},{e},{i}\n" for v, e, i in rows)
