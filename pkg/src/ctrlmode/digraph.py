"""Directed graphs with dense integer node ids and an edge-list text format.

Edge ``u -> v`` corresponds to the bipartite edge ``(u+, v-)``: the in-edges of
a node live on its ``-`` copy and the out-edges on its ``+`` copy. Nothing here
builds the bipartite graph explicitly; :attr:`DiGraph.in_adj` and
:attr:`DiGraph.out_adj` are the two sides of it.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

Edge = tuple[int, int]

__all__ = [
    "DiGraph",
    "Edge",
    "EdgeListError",
    "parse_edge_list",
    "read_edge_list",
    "remove_edges",
    "write_edge_list",
]


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass(frozen=True, eq=False)
class DiGraph:
    """Simple directed graph on nodes ``0 .. n-1``.

    Self-loops are allowed. Values are immutable; every mutation returns a new
    graph.
    """

    n: int
    edges: frozenset[Edge]
    labels: Optional[tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("labels must have exactly n entries")
            if len(set(self.labels)) != self.n:
                raise ValueError("labels must be unique")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], labels=None) -> "DiGraph":
        es = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in es:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        return cls(n, es, tuple(labels) if labels is not None else None)

    def __eq__(self, other):
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges and self.labels == other.labels

    def __hash__(self):
        return hash((self.n, self.edges, self.labels))

    def __repr__(self):
        return f"DiGraph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def _pairs(self):
        flat = np.fromiter(itertools.chain.from_iterable(self.edges), dtype=np.int64, count=2 * len(self.edges))
        return flat.reshape(-1, 2)

    def _grouped(self, keys, vals) -> list[list[int]]:
        # sort by (key, val) through the packed code key * n + val
        n = self.n
        codes = np.sort(keys * n + vals)
        flat = (codes % n).tolist() if n else []
        bounds = np.searchsorted(codes, np.arange(n + 1) * n).tolist()
        return [flat[bounds[i] : bounds[i + 1]] for i in range(n)]

    @cached_property
    def out_adj(self) -> list[list[int]]:
        """Ascending out-neighbour lists (the ``+`` side of the bipartite split)."""
        return self._grouped(self._pairs[:, 0], self._pairs[:, 1])

    @cached_property
    def in_adj(self) -> list[list[int]]:
        """Ascending in-neighbour lists (the ``-`` side of the bipartite split)."""
        return self._grouped(self._pairs[:, 1], self._pairs[:, 0])

    def in_edges(self, v: int) -> list[Edge]:
        return [(u, v) for u in self.in_adj[v]]

    def out_edges(self, u: int) -> list[Edge]:
        return [(u, v) for v in self.out_adj[u]]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    @property
    def average_degree(self) -> float:
        """Total-degree convention, ``2L / n``."""
        return 2.0 * len(self.edges) / self.n if self.n else 0.0


def remove_edges(g: DiGraph, removed: Iterable[Edge]) -> DiGraph:
    """Return ``g`` without ``removed``; nodes are never deleted."""
    r = set(removed)
    missing = r - g.edges
    if missing:
        raise KeyError(f"edges not in graph: {sorted(missing)[:5]}")
    if not r:
        return g
    return DiGraph(g.n, g.edges - r, g.labels)


def parse_edge_list(text, source: Optional[str] = None) -> DiGraph:
    """Parse whitespace-separated edge-list text (bytes or str).

    Tokens are arbitrary labels, mapped to dense ids in order of first
    appearance. A single-token line declares a (possibly isolated) node.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    ids: dict[str, int] = {}
    edges: set[Edge] = set()

    def node(tok: str) -> int:
        i = ids.get(tok)
        if i is None:
            i = ids[tok] = len(ids)
        return i

    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if len(toks) == 1:
            node(toks[0])
        elif len(toks) == 2:
            edges.add((node(toks[0]), node(toks[1])))
        else:
            raise EdgeListError(f"expected 1 or 2 tokens, got {len(toks)}", lineno, source)
    return DiGraph(len(ids), frozenset(edges), tuple(ids))


def read_edge_list(path) -> DiGraph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read(), source=str(path))


def write_edge_list(g: DiGraph) -> bytes:
    """Serialize ``g``; edges sorted by id pair, then isolated nodes by id."""
    lab = g.label
    lines = [f"{lab(u)}\t{lab(v)}\n" for u, v in g.sorted_edges]
    touched = bytearray(g.n)
    for u, v in g.edges:
        touched[u] = 1
        touched[v] = 1
    lines.extend(f"{lab(v)}\n" for v in range(g.n) if not touched[v])
    return "".join(lines).encode("utf-8")
