"""Edge-removal plans that switch a network between control modes.

``to_centralized`` detaches the drivers of the largest input component from
their in-edges, which turns the rest of that component redundant while keeping
the original matching maximum.

``to_distributed`` works on the largest redundant component ``C*`` and ends by
deleting one matched edge ``(a, b)`` so that ``b`` becomes a new driver and
every ``C*`` node alternating-reachable from ``b`` becomes an input node. Two
kinds of structure would undo that by re-augmenting the matching, and are cut
first: unsaturated nodes adjacent to ``b``'s reach, and alternating cycles
through ``(a, b)``.

Alternating cycles are cycles of the alternating-step relation (see
:mod:`ctrlmode.control`): supernodes are matched edges, arcs are unmatched
edges between them. They are found through strongly connected components.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, field
from typing import Optional

from .control import (
    CENTRALIZED,
    DISTRIBUTED,
    INPUT,
    REDUNDANT,
    Classification,
    classify,
    components,
    mode_of,
)
from .digraph import DiGraph, Edge, EdgeListError, remove_edges
from .matching import Matching, has_augmenting_path, maximum_matching

__all__ = [
    "AlterReport",
    "RemovalPlan",
    "Summary",
    "VerificationError",
    "alter_iterated",
    "apply_and_verify",
    "find_alternating_cycles",
    "plan_for",
    "read_plan",
    "to_centralized",
    "to_distributed",
    "write_plan",
]

DETACH_DRIVER_INEDGES = "detach_driver_inedges"
DETACH_UNSATURATED_OUTEDGES = "detach_unsaturated_outedges"
BREAK_CYCLE = "break_cycle"
CREATE_DRIVER = "create_driver"
STAGES = (DETACH_DRIVER_INEDGES, DETACH_UNSATURATED_OUTEDGES, BREAK_CYCLE, CREATE_DRIVER)

# no-op reason codes
NO_DRIVERS = "no-drivers"
NO_REDUNDANT_COMPONENT = "no-redundant-component"
DRIVER_HAS_NO_IN_EDGES = "driver-has-no-in-edges"


class VerificationError(AssertionError):
    """A plan's guarantee did not hold on the mutated graph."""

    def __init__(self, message: str, nodes=()):
        self.nodes = frozenset(nodes)
        if self.nodes:
            message = f"{message}; nodes {sorted(self.nodes)[:20]}"
        super().__init__(message)


@dataclass(frozen=True)
class Summary:
    n: int
    m: int
    nu: int
    n_drivers: int
    n_input: int

    @classmethod
    def of(cls, g: DiGraph, c: Classification) -> "Summary":
        return cls(g.n, g.m, c.nu, len(c.drivers), c.n_input)

    @property
    def n_d(self) -> float:
        return self.n_drivers / self.n if self.n else 0.0

    @property
    def i_d(self) -> float:
        return self.n_input / self.n if self.n else 0.0

    @property
    def mode(self) -> str:
        return mode_of(self.i_d)


@dataclass(frozen=True)
class RemovalPlan:
    target_mode: str
    removals: tuple[tuple[Edge, str], ...]
    matching: Matching
    before: Classification
    target: frozenset[int] = frozenset()
    flipped: frozenset[int] = frozenset()
    reason: Optional[str] = None

    @property
    def edges(self) -> list[Edge]:
        return [e for e, _ in self.removals]

    @property
    def is_noop(self) -> bool:
        return not self.removals

    @property
    def predicted(self) -> dict:
        """Expected post-removal ``n_d``, ``i_d`` and flipped fraction."""
        c = self.before
        n = c.n or 1
        if self.target_mode == CENTRALIZED:
            n_drivers = len(c.drivers)
            n_input = c.n_input - len(self.flipped)
        else:
            n_drivers = len(c.drivers) + (0 if self.is_noop else 1)
            n_input = c.n_input + len(self.flipped)
        return {
            "n_d": n_drivers / n,
            "i_d": n_input / n,
            "delta_nd": len(self.flipped) / n,
        }


@dataclass(frozen=True)
class AlterReport:
    before: Summary
    after: Summary
    n_removed: int
    flipped: int
    reason: Optional[str] = None
    plans: tuple[RemovalPlan, ...] = field(default=(), repr=False, compare=False)

    @property
    def p(self) -> float:
        return self.n_removed / self.before.m if self.before.m else 0.0

    @property
    def delta_nd(self) -> float:
        return self.flipped / self.before.n if self.before.n else 0.0

    @property
    def mode_before(self) -> str:
        return self.before.mode

    @property
    def mode_after(self) -> str:
        return self.after.mode

    def as_dict(self) -> dict:
        return {
            "n": self.before.n,
            "m_before": self.before.m,
            "m_after": self.after.m,
            "nu_before": self.before.nu,
            "nu_after": self.after.nu,
            "n_d_before": self.before.n_d,
            "n_d_after": self.after.n_d,
            "i_d_before": self.before.i_d,
            "i_d_after": self.after.i_d,
            "removed": self.n_removed,
            "p": self.p,
            "flipped": self.flipped,
            "delta_nd": self.delta_nd,
            "mode_before": self.mode_before,
            "mode_after": self.mode_after,
            "reason": self.reason or "",
        }

    def to_kv(self) -> str:
        lines = []
        for k, v in self.as_dict().items():
            if isinstance(v, float):
                v = f"{v:.6g}"
            lines.append(f"{k}={v}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def csv_header() -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow(AlterReport._fields())
        return buf.getvalue()

    @staticmethod
    def _fields() -> list[str]:
        return list(AlterReport(Summary(0, 0, 0, 0, 0), Summary(0, 0, 0, 0, 0), 0, 0).as_dict())

    def to_csv_row(self) -> str:
        buf = io.StringIO()
        row = [f"{v:.6g}" if isinstance(v, float) else v for v in self.as_dict().values()]
        csv.writer(buf, lineterminator="\n").writerow(row)
        return buf.getvalue()


def _noop(target_mode: str, m: Matching, c: Classification, reason: str, target=frozenset()) -> RemovalPlan:
    return RemovalPlan(target_mode, (), m, c, frozenset(target), frozenset(), reason)


# -- distributed -> centralized ------------------------------------------------


def to_centralized(g: DiGraph) -> RemovalPlan:
    m = maximum_matching(g)
    c = classify(g, m)
    if not c.drivers:
        return _noop(CENTRALIZED, m, c, NO_DRIVERS)
    cc = components(g, m, c)
    p_max = cc.largest(INPUT)
    d_p = sorted(p_max & c.drivers)
    removals = tuple(((u, d), DETACH_DRIVER_INEDGES) for d in d_p for u in g.in_adj[d])
    if not removals:
        return _noop(CENTRALIZED, m, c, DRIVER_HAS_NO_IN_EDGES, p_max)
    return RemovalPlan(CENTRALIZED, removals, m, c, p_max, p_max - frozenset(d_p))


# -- centralized -> distributed ------------------------------------------------


class _Alternating:
    """Mutable alternating-step structure restricted to a node set."""

    def __init__(self, g: DiGraph, m: Matching, scope):
        self.scope = frozenset(scope)
        self.mate_out = list(m.mate_out)
        self.mate_in = list(m.mate_in)
        self.in_adj = {x: list(g.in_adj[x]) for x in sorted(self.scope)}

    def succ(self, x: int, within=None):
        # yields (next node, the + copy stepped through)
        within = self.scope if within is None else within
        mate_out = self.mate_out
        for u in self.in_adj[x]:
            y = mate_out[u]
            if y != -1 and y != x and y in within:
                yield y, u

    def remove_in_edge(self, u: int, x: int) -> None:
        if x in self.in_adj:
            self.in_adj[x].remove(u)

    def sccs(self, nodes) -> list[list[int]]:
        """Tarjan, iterative; returns components in reverse topological order."""
        nodes = sorted(nodes)
        within = frozenset(nodes)
        index: dict[int, int] = {}
        low: dict[int, int] = {}
        on_stack: set[int] = set()
        stack: list[int] = []
        out: list[list[int]] = []
        counter = 0
        for root in nodes:
            if root in index:
                continue
            work = [(root, iter(sorted(y for y, _ in self.succ(root, within))))]
            index[root] = low[root] = counter
            counter += 1
            stack.append(root)
            on_stack.add(root)
            while work:
                x, it = work[-1]
                pushed = False
                for y in it:
                    if y not in index:
                        index[y] = low[y] = counter
                        counter += 1
                        stack.append(y)
                        on_stack.add(y)
                        work.append((y, iter(sorted(z for z, _ in self.succ(y, within)))))
                        pushed = True
                        break
                    elif y in on_stack:
                        low[x] = min(low[x], index[y])
                if pushed:
                    continue
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[x])
                if low[x] == index[x]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == x:
                            break
                    out.append(sorted(comp))
        return out

    def cycle_through(self, s: int, within) -> list[tuple[int, int]]:
        """Shortest alternating cycle through ``s`` as [(node, + copy), ...].

        Entry ``(y_i, u_i)`` is the step ``y_i -> y_{i+1}`` through ``u_i``:
        ``(u_i, y_i)`` unmatched, ``(u_i, y_{i+1})`` matched.
        """
        from collections import deque

        pred: dict[int, tuple[int, int]] = {}
        q = deque([s])
        seen = {s}
        while q:
            x = q.popleft()
            for y, u in sorted(self.succ(x, within)):
                if y == s:
                    cyc = [(x, u)]
                    while x != s:
                        px, pu = pred[x]
                        cyc.append((px, pu))
                        x = px
                    cyc.reverse()
                    return cyc
                if y not in seen:
                    seen.add(y)
                    pred[y] = (x, u)
                    q.append(y)
        return []

    def matched_edges_of(self, cyc) -> list[Edge]:
        return [(u, self.mate_out[u]) for _, u in cyc]

    def swap(self, cyc) -> None:
        # every + copy on the cycle moves from its matched edge to its unmatched one
        for y, u in cyc:
            self.mate_out[u] = y
            self.mate_in[y] = u

    def matching(self) -> Matching:
        nu = sum(1 for v in self.mate_out if v != -1)
        return Matching(tuple(self.mate_out), tuple(self.mate_in), nu)


def find_alternating_cycles(g: DiGraph, m: Matching, scope) -> list[list[Edge]]:
    """One alternating cycle per nontrivial strongly connected piece of ``scope``.

    Each cycle is returned as its bipartite edge sequence, alternating
    unmatched and matched edges. An empty list certifies the matched structure
    of ``scope`` is acyclic.
    """
    alt = _Alternating(g, m, scope)
    out = []
    for comp in alt.sccs(alt.scope):
        if len(comp) < 2:
            continue
        cyc = alt.cycle_through(comp[0], frozenset(comp))
        edges = []
        for i, (y, u) in enumerate(cyc):
            edges.append((u, y))
            edges.append((u, cyc[(i + 1) % len(cyc)][0]))
        out.append(edges)
    return out


def _reach_bits(alt: _Alternating, nodes):
    """Alternating reach of every node as a bitset over ``sorted(nodes)``.

    Works on the condensation, so cycles are fine; all members of one strongly
    connected piece share the same reach. Returns ``(order, reach, piece)``
    where ``piece[x]`` is the index of ``x``'s piece.
    """
    order = sorted(nodes)
    pos = {x: i for i, x in enumerate(order)}
    pieces = alt.sccs(order)  # sinks first
    piece = {}
    for i, comp in enumerate(pieces):
        for x in comp:
            piece[x] = i
    bits_of = []
    for i, comp in enumerate(pieces):
        bits = 0
        for x in comp:
            bits |= 1 << pos[x]
            for y, _ in alt.succ(x):
                j = piece[y]
                if j != i:
                    bits |= bits_of[j]
        bits_of.append(bits)
    reach = {x: bits_of[piece[x]] for x in order}
    return order, reach, piece


def _members(bits: int, order) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(order[low.bit_length() - 1])
        bits ^= low
    return out


def _break_all_cycles(alt: _Alternating, target, removals) -> None:
    # splitting a strongly connected piece never adds arcs between pieces, so
    # each piece is handled on its own
    pending = [comp for comp in alt.sccs(target) if len(comp) > 1]
    while pending:
        comp = pending.pop()
        cyc = alt.cycle_through(comp[0], frozenset(comp))
        e = min(alt.matched_edges_of(cyc))
        removals.append((e, BREAK_CYCLE))
        alt.swap(cyc)
        alt.remove_in_edge(*e)
        pending.extend(sub for sub in alt.sccs(comp) if len(sub) > 1)


def to_distributed(g: DiGraph, break_all_cycles: bool = False) -> RemovalPlan:
    """Plan the removals that turn part of the largest redundant component input.

    By default only the obstacles in front of the chosen new driver ``b`` are
    removed: unmatched edges from unsaturated nodes into ``b``'s alternating
    reach (stage ``detach_unsaturated_outedges``) and the unmatched edges from
    ``b``'s matched partner ``a`` that close an alternating cycle through
    ``(a, b)`` (stage ``break_cycle``). ``b`` maximises its reach; ties go to
    the cheaper plan, then to the smaller ``(a, b)``.

    With ``break_all_cycles`` the whole component is first detached from every
    adjacent unsaturated node and made free of alternating cycles by deleting
    one matched edge per cycle, as in the textbook three-stage procedure. That
    variant can cost more edges than nodes on dense graphs.
    """
    m = maximum_matching(g)
    c = classify(g, m)
    cc = components(g, m, c)
    target = cc.largest(REDUNDANT)
    if not target:
        return _noop(DISTRIBUTED, m, c, NO_REDUNDANT_COMPONENT)

    alt = _Alternating(g, m, target)
    removals: list[tuple[Edge, str]] = []

    if break_all_cycles:
        for u in sorted(c.unsaturated):
            if any(v in target for v in g.out_adj[u]):
                for v in g.out_adj[u]:
                    removals.append(((u, v), DETACH_UNSATURATED_OUTEDGES))
                    alt.remove_in_edge(u, v)
        _break_all_cycles(alt, target, removals)
        order, reach, _ = _reach_bits(alt, target)
        best = min(target, key=lambda b: (-reach[b].bit_count(), alt.mate_in[b], b))
        a = alt.mate_in[best]
    else:
        order, reach, piece = _reach_bits(alt, target)
        pos = {x: i for i, x in enumerate(order)}
        top = max(r.bit_count() for r in reach.values())
        # unsaturated in-edges per node; an unsaturated + copy adjacent to the
        # reach would re-augment once the new driver appears
        unsat_in = {}
        for x in order:
            k = sum(1 for u in g.in_adj[x] if m.mate_out[u] == -1)
            if k:
                unsat_in[x] = k
        detach_cost = {}
        best_key = None
        for b in order:
            bits = reach[b]
            if bits.bit_count() != top:
                continue
            i = piece[b]
            if i not in detach_cost:
                detach_cost[i] = sum(unsat_in.get(z, 0) for z in _members(bits, order)) if unsat_in else 0
            a = m.mate_in[b]
            closing = sum(1 for y in g.out_adj[a] if y != b and y in pos and (bits >> pos[y]) & 1)
            key = (detach_cost[i] + closing, a, b)
            if best_key is None or key < best_key:
                best_key = key
        _, a, best = best_key
        members = set(_members(reach[best], order))
        for u in sorted(c.unsaturated):
            for v in g.out_adj[u]:
                if v in members:
                    removals.append(((u, v), DETACH_UNSATURATED_OUTEDGES))
        for y in g.out_adj[a]:
            if y != best and y in members:
                removals.append(((a, y), BREAK_CYCLE))

    removals.append(((a, best), CREATE_DRIVER))
    flipped = frozenset(_members(reach[best], order))
    final = alt.matching().without([(a, best)])
    return RemovalPlan(DISTRIBUTED, tuple(removals), final, c, target, flipped)


def plan_for(g: DiGraph, target_mode: str, break_all_cycles: bool = False) -> RemovalPlan:
    if target_mode == CENTRALIZED:
        return to_centralized(g)
    if target_mode == DISTRIBUTED:
        return to_distributed(g, break_all_cycles)
    raise ValueError(f"unknown target mode {target_mode!r}")


# -- verification ---------------------------------------------------------------


def _check_plan_shape(g: DiGraph, plan: RemovalPlan) -> None:
    edges = plan.edges
    if len(set(edges)) != len(edges):
        raise VerificationError("plan removes an edge twice")
    absent = [e for e in edges if e not in g.edges]
    if absent:
        raise VerificationError(f"plan edges absent from graph: {absent[:5]}")
    stages = [s for _, s in plan.removals]
    if plan.target_mode == CENTRALIZED:
        if any(s != DETACH_DRIVER_INEDGES for s in stages):
            raise VerificationError("centralized plan contains a foreign stage")
        matched = [e for e in edges if plan.matching.is_matched(e)]
        if matched:
            raise VerificationError(f"centralized plan removes matched edges {matched[:5]}")
    elif stages:
        if stages.count(CREATE_DRIVER) != 1 or stages[-1] != CREATE_DRIVER:
            raise VerificationError("distributed plan must end with exactly one create_driver")
        rank = [STAGES.index(s) for s in stages]
        if rank != sorted(rank) or DETACH_DRIVER_INEDGES in stages:
            raise VerificationError("distributed plan stages out of order")


def apply_and_verify(g: DiGraph, plan: RemovalPlan):
    """Apply ``plan`` to a copy of ``g``, reclassify from scratch and check it.

    Returns ``(report, mutated graph)``. Raises :class:`VerificationError` if a
    guarantee of the plan fails on the mutated graph.
    """
    _check_plan_shape(g, plan)
    m0 = maximum_matching(g)
    c0 = classify(g, m0)
    g2 = remove_edges(g, plan.edges)
    m2 = maximum_matching(g2)
    c2 = classify(g2, m2)

    if plan.removals:
        if plan.target_mode == CENTRALIZED:
            if c2.nu != c0.nu:
                raise VerificationError(f"matching number changed {c0.nu} -> {c2.nu}")
            if has_augmenting_path(g2, plan.matching):
                raise VerificationError("original matching is no longer maximum")
            still_input = [v for v in plan.flipped if c2.is_input[v]]
            if still_input:
                raise VerificationError("component nodes still input after detaching drivers", still_input)
        else:
            if c2.nu != c0.nu - 1:
                raise VerificationError(f"matching number {c0.nu} -> {c2.nu}, expected a drop of 1")
            if c2.n_input <= c0.n_input:
                raise VerificationError(f"input count did not grow ({c0.n_input} -> {c2.n_input})")
            if has_augmenting_path(g2, plan.matching):
                raise VerificationError("plan matching is not maximum on the mutated graph")
            missed = [v for v in plan.flipped if not c2.is_input[v]]
            if missed:
                raise VerificationError("reach set of the new driver did not become input", missed)

    flipped = sum(1 for a, b in zip(c0.is_input, c2.is_input) if a != b)
    report = AlterReport(
        before=Summary.of(g, c0),
        after=Summary.of(g2, c2),
        n_removed=len(plan.removals),
        flipped=flipped,
        reason=plan.reason,
        plans=(plan,),
    )
    return report, g2


def alter_iterated(
    g: DiGraph,
    target_mode: str,
    iterations: int = 1,
    break_all_cycles: bool = False,
    skip_if_already: bool = False,
):
    """Re-plan on the mutated graph up to ``iterations`` times or until a no-op.

    Returns ``(report, final graph)``; the report compares the original graph
    with the final one. With ``skip_if_already`` a graph already in
    ``target_mode`` is left alone (reason ``already-<mode>``).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    c0 = classify(g, maximum_matching(g))
    cur = g
    plans = []
    reason = None
    if skip_if_already and c0.mode == target_mode:
        iterations = 0
        reason = f"already-{target_mode}"
    for _ in range(iterations):
        plan = plan_for(cur, target_mode, break_all_cycles)
        if plan.is_noop:
            reason = plan.reason
            if not plans:
                plans.append(plan)
            break
        _, cur = apply_and_verify(cur, plan)
        plans.append(plan)
    c2 = classify(cur, maximum_matching(cur))
    n_removed = sum(len(p.removals) for p in plans)
    flipped = sum(1 for a, b in zip(c0.is_input, c2.is_input) if a != b)
    return (
        AlterReport(
            before=Summary.of(g, c0),
            after=Summary.of(cur, c2),
            n_removed=n_removed,
            flipped=flipped,
            reason=reason if n_removed == 0 else None,
            plans=tuple(plans),
        ),
        cur,
    )


# -- plan files -------------------------------------------------------------------


def write_plan(g: DiGraph, plans) -> bytes:
    """Edge-list lines with a third column carrying the stage tag."""
    if isinstance(plans, RemovalPlan):
        plans = [plans]
    lines = []
    for i, plan in enumerate(plans):
        lines.append(f"# target={plan.target_mode} round={i + 1}")
        if plan.reason:
            lines.append(f"# reason={plan.reason}")
        for (u, v), stage in plan.removals:
            lines.append(f"{g.label(u)}\t{g.label(v)}\t{stage}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def read_plan(text, g: DiGraph) -> list[tuple[Edge, str]]:
    """Parse a plan file back into ``[(edge, stage), ...]`` against ``g``'s labels."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    ids = {g.label(v): v for v in range(g.n)}
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if len(toks) != 3:
            raise EdgeListError(f"expected 3 tokens, got {len(toks)}", lineno)
        a, b, stage = toks
        if stage not in STAGES:
            raise EdgeListError(f"unknown stage {stage!r}", lineno)
        if a not in ids or b not in ids:
            raise EdgeListError("unknown node label", lineno)
        out.append(((ids[a], ids[b]), stage))
    return out
