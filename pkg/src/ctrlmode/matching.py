"""Maximum matching of the bipartite split of a digraph.

A matched edge ``(u, v)`` occupies ``u+`` and ``v-``. ``mate_out[u] == v`` and
``mate_in[v] == u``; ``-1`` marks an unmatched copy.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .digraph import DiGraph, Edge

__all__ = ["Matching", "MatchingError", "maximum_matching", "has_augmenting_path", "find_augmenting_path"]

ASCENDING = "ascending"
DESCENDING = "descending"


class MatchingError(ValueError):
    """A matching that does not fit its graph."""


@dataclass(frozen=True, eq=False)
class Matching:
    mate_out: tuple[int, ...]
    mate_in: tuple[int, ...]
    nu: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Matching":
        mate_out = [-1] * n
        mate_in = [-1] * n
        count = 0
        for u, v in edges:
            if mate_out[u] != -1 or mate_in[v] != -1:
                raise MatchingError(f"edge ({u}, {v}) shares an endpoint with another matched edge")
            mate_out[u] = v
            mate_in[v] = u
            count += 1
        return cls(tuple(mate_out), tuple(mate_in), count)

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return self.mate_out == other.mate_out

    def __hash__(self):
        return hash(self.mate_out)

    @property
    def n(self) -> int:
        return len(self.mate_out)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset((u, v) for u, v in enumerate(self.mate_out) if v != -1)

    def matched_in(self, v: int):
        """Matched in-edge of ``v`` (the edge at ``v-``), or None."""
        u = self.mate_in[v]
        return None if u == -1 else (u, v)

    def matched_out(self, u: int):
        """Matched out-edge of ``u`` (the edge at ``u+``), or None."""
        v = self.mate_out[u]
        return None if v == -1 else (u, v)

    def is_matched(self, e: Edge) -> bool:
        return self.mate_out[e[0]] == e[1]

    def without(self, edges: Iterable[Edge]) -> "Matching":
        mate_out = list(self.mate_out)
        mate_in = list(self.mate_in)
        count = self.nu
        for u, v in edges:
            if mate_out[u] == v:
                mate_out[u] = -1
                mate_in[v] = -1
                count -= 1
        return Matching(tuple(mate_out), tuple(mate_in), count)


def maximum_matching(g: DiGraph, order: str = ASCENDING) -> Matching:
    """Hopcroft-Karp on the bipartite split of ``g``.

    Nodes and adjacency lists are scanned in ``order`` (ascending by default),
    which makes the result a deterministic function of the graph. The
    descending order exists to produce a second, generally different, maximum
    matching for invariance checks.
    """
    n = g.n
    if order == ASCENDING:
        nodes = range(n)
        adj = g.out_adj
    elif order == DESCENDING:
        nodes = range(n - 1, -1, -1)
        adj = [a[::-1] for a in g.out_adj]
    else:
        raise ValueError(f"unknown order {order!r}")

    mate_out = [-1] * n
    mate_in = [-1] * n

    # greedy warm start
    for u in nodes:
        for v in adj[u]:
            if mate_in[v] == -1:
                mate_out[u] = v
                mate_in[v] = u
                break

    inf = n + 1
    dist = [inf] * n
    while True:
        # BFS layering from free + copies
        q = deque()
        for u in nodes:
            if mate_out[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = inf
        limit = inf
        while q:
            u = q.popleft()
            du = dist[u]
            if du >= limit:
                continue
            for v in adj[u]:
                w = mate_in[v]
                if w == -1:
                    if limit == inf:
                        limit = du + 1
                elif dist[w] == inf:
                    dist[w] = du + 1
                    q.append(w)
        if limit == inf:
            break

        # layered DFS, iterative; ptr[u] is the next adjacency index to try
        ptr = [0] * n
        for root in nodes:
            if mate_out[root] != -1:
                continue
            stack = [root]
            found = False
            while stack:
                u = stack[-1]
                au = adj[u]
                i = ptr[u]
                advanced = False
                while i < len(au):
                    v = au[i]
                    i += 1
                    w = mate_in[v]
                    if w == -1:
                        if dist[u] + 1 == limit:
                            ptr[u] = i
                            found = True
                            # augment along the stack, top down
                            for x in reversed(stack):
                                nxt = mate_out[x]
                                mate_out[x] = v
                                mate_in[v] = x
                                v = nxt
                            break
                    elif dist[w] == dist[u] + 1:
                        ptr[u] = i
                        stack.append(w)
                        advanced = True
                        break
                if found:
                    break
                if not advanced:
                    ptr[u] = i
                    dist[u] = inf
                    stack.pop()
    nu = sum(1 for v in mate_out if v != -1)
    return Matching(tuple(mate_out), tuple(mate_in), nu)


def _check_consistent(g: DiGraph, m: Matching) -> None:
    if m.n != g.n:
        raise MatchingError(f"matching is over {m.n} nodes, graph has {g.n}")
    for u, v in enumerate(m.mate_out):
        if v == -1:
            continue
        if (u, v) not in g.edges:
            raise MatchingError(f"matched edge ({u}, {v}) is not in the graph")
        if m.mate_in[v] != u:
            raise MatchingError(f"mate tables disagree at edge ({u}, {v})")
    for v, u in enumerate(m.mate_in):
        if u != -1 and m.mate_out[u] != v:
            raise MatchingError(f"mate tables disagree at edge ({u}, {v})")


def find_augmenting_path(g: DiGraph, m: Matching):
    """Return an augmenting path as a list of edges, or None.

    The search runs from every unsaturated ``+`` copy along unmatched edges to
    ``-`` copies and back along matched edges.
    """
    _check_consistent(g, m)
    n = g.n
    parent = [-2] * n  # + copy -> + copy it was reached from (-1 for roots)
    via = [-1] * n  # + copy -> the - copy through which it was reached
    q = deque()
    for u in range(n):
        if m.mate_out[u] == -1:
            parent[u] = -1
            q.append(u)
    seen_minus = bytearray(n)
    while q:
        u = q.popleft()
        for v in g.out_adj[u]:
            if seen_minus[v] or m.mate_out[u] == v:
                continue
            seen_minus[v] = 1
            w = m.mate_in[v]
            if w == -1:
                path = [(u, v)]
                x = u
                while parent[x] != -1:
                    path.append((x, via[x]))
                    path.append((parent[x], via[x]))
                    x = parent[x]
                path.reverse()
                return path
            if parent[w] == -2:
                parent[w] = u
                via[w] = v
                q.append(w)
    return None


def has_augmenting_path(g: DiGraph, m: Matching) -> bool:
    """True iff ``m`` can be enlarged; False certifies ``m`` is maximum."""
    return find_augmenting_path(g, m) is not None
