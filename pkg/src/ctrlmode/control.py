"""Input/redundant node classification and control components.

Everything here walks one relation on nodes, the *alternating step*: from a
node ``x`` (standing at ``x-``) take an unmatched in-edge ``u -> x`` to ``u+``
and then ``u``'s matched edge to ``mate_out[u]-``. A node is an input node iff
its ``-`` copy is reachable this way from some driver.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .digraph import DiGraph
from .matching import Matching, MatchingError, has_augmenting_path

__all__ = [
    "CENTRALIZED",
    "DISTRIBUTED",
    "Classification",
    "ControlComponents",
    "ControlError",
    "alternating_successors",
    "classify",
    "components",
    "driver_reach",
    "mode_of",
]

INPUT = "input"
REDUNDANT = "redundant"
CENTRALIZED = "centralized"
DISTRIBUTED = "distributed"


class ControlError(ValueError):
    pass


def mode_of(i_d: float) -> str:
    """Majority reading of the control mode: distributed iff ``i_d > 0.5``."""
    return DISTRIBUTED if i_d > 0.5 else CENTRALIZED


@dataclass(frozen=True)
class Classification:
    n: int
    nu: int
    drivers: frozenset[int]
    unsaturated: frozenset[int]
    is_input: tuple[bool, ...]

    @property
    def n_d(self) -> float:
        return len(self.drivers) / self.n if self.n else 0.0

    @property
    def n_input(self) -> int:
        return sum(self.is_input)

    @property
    def i_d(self) -> float:
        return self.n_input / self.n if self.n else 0.0

    @property
    def perfect_matching(self) -> bool:
        # with no drivers every node comes out redundant; callers should know
        return self.n > 0 and not self.drivers

    @property
    def mode(self) -> str:
        return mode_of(self.i_d)

    def kind(self, v: int) -> str:
        return INPUT if self.is_input[v] else REDUNDANT

    @property
    def input_nodes(self) -> frozenset[int]:
        return frozenset(v for v, f in enumerate(self.is_input) if f)

    @property
    def redundant_nodes(self) -> frozenset[int]:
        return frozenset(v for v, f in enumerate(self.is_input) if not f)


@dataclass(frozen=True)
class ControlComponents:
    components: tuple[frozenset[int], ...]
    side: tuple[str, ...]
    largest_input: Optional[int]
    largest_redundant: Optional[int]

    def largest(self, side: str) -> frozenset[int]:
        idx = self.largest_input if side == INPUT else self.largest_redundant
        return self.components[idx] if idx is not None else frozenset()

    def of_side(self, side: str) -> list[frozenset[int]]:
        return [c for c, s in zip(self.components, self.side) if s == side]


def alternating_successors(g: DiGraph, m: Matching, x: int) -> list[int]:
    mate_out = m.mate_out
    out = []
    for u in g.in_adj[x]:
        y = mate_out[u]
        if y != -1 and y != x:
            out.append(y)
    return out


def _reach(g: DiGraph, m: Matching, sources) -> bytearray:
    seen = bytearray(g.n)
    q = deque()
    for s in sources:
        if not seen[s]:
            seen[s] = 1
            q.append(s)
    in_adj = g.in_adj
    mate_out = m.mate_out
    while q:
        x = q.popleft()
        for u in in_adj[x]:
            y = mate_out[u]
            if y != -1 and not seen[y]:
                seen[y] = 1
                q.append(y)
    return seen


def driver_reach(g: DiGraph, m: Matching, d: int) -> frozenset[int]:
    """Nodes whose ``-`` copy is reachable from ``d-`` by an alternating path."""
    if m.mate_in[d] != -1:
        raise ControlError(f"node {d} is not a driver under this matching")
    seen = _reach(g, m, [d])
    return frozenset(v for v in range(g.n) if seen[v])


def classify(g: DiGraph, m: Matching) -> Classification:
    if has_augmenting_path(g, m):
        raise MatchingError("matching is not maximum")
    drivers = [v for v in range(g.n) if m.mate_in[v] == -1]
    unsat = frozenset(u for u in range(g.n) if m.mate_out[u] == -1)
    seen = _reach(g, m, drivers)
    return Classification(
        n=g.n,
        nu=m.nu,
        drivers=frozenset(drivers),
        unsaturated=unsat,
        is_input=tuple(bool(s) for s in seen),
    )


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _input_components(g: DiGraph, m: Matching, drivers) -> list[set[int]]:
    # Merged driver-reach sets. Each node is expanded only by the first driver
    # to label it; a later driver that runs into a labelled node is merged with
    # its labeller, since the reach set below that node is shared.
    n = g.n
    owner = [-1] * n
    ds = _DisjointSet(n)
    in_adj = g.in_adj
    mate_out = m.mate_out
    for d in drivers:
        if owner[d] != -1:
            ds.union(d, owner[d])
            continue
        owner[d] = d
        q = deque([d])
        while q:
            x = q.popleft()
            for u in in_adj[x]:
                y = mate_out[u]
                if y == -1:
                    continue
                o = owner[y]
                if o == -1:
                    owner[y] = d
                    q.append(y)
                elif o != d:
                    ds.union(d, o)
    groups: dict[int, set[int]] = {}
    for v in range(n):
        if owner[v] != -1:
            groups.setdefault(ds.find(owner[v]), set()).add(v)
    return list(groups.values())


def redundant_components(g: DiGraph, m: Matching, c: Classification) -> list[set[int]]:
    """Weakly connected pieces of the alternating-step relation on redundant nodes."""
    ds = _DisjointSet(g.n)
    is_input = c.is_input
    in_adj = g.in_adj
    mate_out = m.mate_out
    for x in range(g.n):
        if is_input[x]:
            continue
        for u in in_adj[x]:
            y = mate_out[u]
            if y != -1 and y != x and not is_input[y]:
                ds.union(x, y)
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        if not is_input[v]:
            groups.setdefault(ds.find(v), set()).add(v)
    return list(groups.values())


def _largest(sets: list[frozenset[int]], idxs: list[int]) -> Optional[int]:
    if not idxs:
        return None
    return min(idxs, key=lambda i: (-len(sets[i]), min(sets[i])))


def components(g: DiGraph, m: Matching, c: Classification) -> ControlComponents:
    """Partition input and redundant nodes into control components.

    Components are listed input-first, each side ordered by smallest member.
    Ties for the largest component go to the one with the smallest node id.
    """
    drivers = sorted(c.drivers)
    inp = sorted((frozenset(s) for s in _input_components(g, m, drivers)), key=min)
    red = sorted((frozenset(s) for s in redundant_components(g, m, c)), key=min)
    comps = tuple(inp + red)
    side = tuple([INPUT] * len(inp) + [REDUNDANT] * len(red))
    return ControlComponents(
        components=comps,
        side=side,
        largest_input=_largest(list(comps), list(range(len(inp)))),
        largest_redundant=_largest(list(comps), list(range(len(inp), len(comps)))),
    )
