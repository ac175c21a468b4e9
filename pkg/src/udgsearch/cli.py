"""Command-line driver.

Subcommands: ``search`` (run the beam search campaign), ``render`` (SVG of an
embedding), ``stats`` (summary CSV of a database directory), ``minkowski``
(sum two graph files), ``canon`` (canonize a graph file), and ``children`` /
``parents`` (one genealogy step, for desk checking).

Exit codes: 0 success, 1 I/O or data errors, 2 bad flags (argparse default).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .canonical import DEFAULT_SEED, OutOfBoundsError, ZobristTable, canonize_one
from .genealogy import (
    DEFAULT_CHUNK_LIMIT,
    children,
    graph_set,
    parents,
    unit_adjacency,
)
from .lattice import embed
from .search import (
    SearchConfig,
    load_checkpoints,
    run_search,
    save_checkpoints,
    SearchState,
)
from .store import (
    GraphRecord,
    GraphStore,
    StoreError,
    format_record,
    parse_graph_file,
    summary_csv,
)

CONFIG_KEYS = {"beam_width", "max_vertices", "runs", "seed", "chunk_limit", "start"}


def read_config(path) -> dict:
    """Key-value config file: one ``key = value`` per line, # comments."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


@dataclass
class RenderSpec:
    scale: float = 100.0
    vertex_radius: float = 6.0
    stroke_width: float = 2.0
    margin: float = 20.0


def render_svg(matrix, spec: RenderSpec) -> str:
    """SVG with one circle per vertex and one line per unit-distance pair."""
    if spec.scale <= 0:
        raise ValueError("scale must be positive")
    pts = embed(matrix)
    pts = np.atleast_1d(pts)
    xs = pts.real * spec.scale
    ys = -pts.imag * spec.scale  # SVG y grows downward
    pad = spec.margin + spec.vertex_radius
    x0, y0 = xs.min() - pad, ys.min() - pad
    w = xs.max() - xs.min() + 2 * pad
    h = ys.max() - ys.min() + 2 * pad
    adj, _ = unit_adjacency(np.asarray(matrix)[None])
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.3f} {y0:.3f} {w:.3f} {h:.3f}" '
        f'width="{w:.0f}" height="{h:.0f}">'
    ]
    iu, ju = np.nonzero(np.triu(adj[0], k=1))
    for i, j in zip(iu, ju):
        out.append(
            f'<line x1="{xs[i]:.3f}" y1="{ys[i]:.3f}" '
            f'x2="{xs[j]:.3f}" y2="{ys[j]:.3f}" '
            f'stroke="black" stroke-width="{spec.stroke_width:.3f}"/>'
        )
    for x, y in zip(xs, ys):
        out.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{spec.vertex_radius:.3f}" '
            f'fill="steelblue"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _add_search_parser(sub):
    p = sub.add_parser("search", help="run the beam search campaign")
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--beam-width", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=os.environ.get("UDG_OUT_DIR"),
                   help="output directory (or set UDG_OUT_DIR)")
    p.add_argument("--chunk-limit", type=int, default=None)
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--start", default=None, help="start graph file")
    p.add_argument("--no-backward", action="store_true",
                   help="disable the backward step (for comparison runs)")
    return p


def cmd_search(args) -> int:
    if not args.out:
        print("error: --out is required (or set UDG_OUT_DIR)", file=sys.stderr)
        return 2
    # Precedence: built-in defaults < config file < flags.
    cfg_file: dict = {}
    if args.config:
        try:
            cfg_file = read_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    def pick(flag, key, cast, default):
        if flag is not None:
            return flag
        if key in cfg_file:
            return cast(cfg_file[key])
        return default

    start_path = args.start if args.start is not None else cfg_file.get("start")
    try:
        start = parse_graph_file(start_path) if start_path else None
        config = SearchConfig(
            beam_width=pick(args.beam_width, "beam_width", int, 100),
            max_vertices=pick(args.max_vertices, "max_vertices", int, 30),
            num_runs=pick(args.runs, "runs", int, 1),
            seed=pick(args.seed, "seed", int, DEFAULT_SEED),
            chunk_limit=pick(args.chunk_limit, "chunk_limit", int, DEFAULT_CHUNK_LIMIT),
            start=start,
            enable_backward=not args.no_backward,
        )
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        store = GraphStore(out)
        state = SearchState.fresh(config, store)
        load_checkpoints(state, out)
        t0 = time.time()
        run_search(config, store=store, state=state)
        elapsed = time.time() - t0
        save_checkpoints(state, out)
        rows = store.summary()
        (out / "summary.csv").write_text(summary_csv(rows))
        log = list(state.log_lines)
        log.append("final best table:")
        log.extend(f"  V={n} E={e}" for n, e in state.best.rows())
        (out / "search_log.txt").write_text("\n".join(log) + "\n")
    except (OSError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"search finished in {elapsed:.1f}s; "
          f"best table entries: {len(state.best.rows())}", file=sys.stderr)
    for n, e in state.best.rows():
        print(f"{n},{e}")
    return 0


def cmd_render(args) -> int:
    try:
        matrix = parse_graph_file(args.graph)
        spec = RenderSpec(
            scale=args.scale,
            vertex_radius=args.vertex_radius,
            stroke_width=args.stroke_width,
            margin=args.margin,
        )
        svg = render_svg(matrix, spec)
        Path(args.out).write_text(svg)
    except (OSError, StoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_stats(args) -> int:
    directory = Path(args.database)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return 1
    try:
        rows = GraphStore(directory).summary()
    except (OSError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(summary_csv(rows))
    return 0


def cmd_minkowski(args) -> int:
    from .isoclass import minkowski_sum

    try:
        a = parse_graph_file(args.graph_a)
        b = parse_graph_file(args.graph_b)
        total = minkowski_sum(a, b)
        table = ZobristTable.from_seed(args.seed)
        gs = graph_set(total, table)
    except OutOfBoundsError as exc:
        print(f"error: sum does not fit the coefficient box: {exc}", file=sys.stderr)
        return 1
    except (OSError, StoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rec = GraphRecord.from_graph(gs.mats[0], int(gs.hashes[0]), int(gs.edges[0]))
    sys.stdout.write(format_record(rec))
    disjoint = len(total) == len(a) * len(b)
    print(f"disjoint: {'yes' if disjoint else 'no'}")
    return 0


def cmd_canon(args) -> int:
    try:
        matrix = parse_graph_file(args.graph)
        table = ZobristTable.from_seed(args.seed)
        mat, h = canonize_one(matrix, table)
    except OutOfBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rec = GraphRecord.from_graph(mat, h)
    sys.stdout.write(format_record(rec))
    return 0


def _cmd_genealogy(args, op) -> int:
    try:
        matrix = parse_graph_file(args.graph)
        table = ZobristTable.from_seed(args.seed)
        gs = graph_set(matrix, table)
        out, _ = op(gs, table)
    except (OSError, StoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for mat, h, e in zip(out.mats, out.hashes, out.edges):
        sys.stdout.write(format_record(GraphRecord.from_graph(mat, int(h), int(e))))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="udgsearch",
        description="Search for edge-dense unit-distance graphs on the Moser lattice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_search_parser(sub)

    p = sub.add_parser("render", help="render a graph file to SVG")
    p.add_argument("graph")
    p.add_argument("--out", required=True)
    p.add_argument("--scale", type=float, default=100.0)
    p.add_argument("--vertex-radius", type=float, default=6.0)
    p.add_argument("--stroke-width", type=float, default=2.0)
    p.add_argument("--margin", type=float, default=20.0)

    p = sub.add_parser("stats", help="print the summary CSV of a database dir")
    p.add_argument("database")

    p = sub.add_parser("minkowski", help="Minkowski sum of two graph files")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("canon", help="canonize a graph file")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("children", help="print all children of a graph file")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("parents", help="print all parents of a graph file")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    args = parser.parse_args(argv)
    if args.command == "search":
        return cmd_search(args)
    if args.command == "render":
        return cmd_render(args)
    if args.command == "stats":
        return cmd_stats(args)
    if args.command == "minkowski":
        return cmd_minkowski(args)
    if args.command == "canon":
        return cmd_canon(args)
    if args.command == "children":
        return _cmd_genealogy(args, children)
    if args.command == "parents":
        return _cmd_genealogy(args, parents)
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
