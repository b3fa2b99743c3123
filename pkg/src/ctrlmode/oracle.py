"""Exhaustive ground truth for tiny graphs.

Enumerates every matching of the bipartite split by backtracking over the
``+`` copies in id order (each either stays unmatched or takes one free ``-``
copy). Sub-results are memoised on ``(position, used - copies)``, so the
enumeration is complete but each state is expanded once. No alternating-path
reasoning is involved; a node counts as an input node exactly when its ``-``
copy is free in at least one maximum matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .digraph import DiGraph

__all__ = ["MAX_NODES", "OracleResult", "OracleRefused", "enumerate_matchings"]

MAX_NODES = 12


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    nu: int
    count: int
    ever_unmatched: tuple[bool, ...]

    @property
    def input_nodes(self) -> frozenset[int]:
        return frozenset(v for v, f in enumerate(self.ever_unmatched) if f)


def enumerate_matchings(g: DiGraph) -> OracleResult:
    n = g.n
    if n > MAX_NODES:
        raise OracleRefused(f"oracle is limited to {MAX_NODES} nodes, got {n}")
    adj = [tuple(1 << v for v in g.out_adj[u]) for u in range(n)]
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(i: int, used: int):
        # -> (max extra edges, number of ways, AND of final used-masks over those ways)
        if i == n:
            return 0, 1, used
        size, count, always = best(i + 1, used)
        for bit in adj[i]:
            if used & bit:
                continue
            s, c, a = best(i + 1, used | bit)
            s += 1
            if s > size:
                size, count, always = s, c, a
            elif s == size:
                count += c
                always &= a
        return size, count, always

    nu, count, always = best(0, 0)
    best.cache_clear()
    never_free = always & full
    return OracleResult(
        nu=nu,
        count=count,
        ever_unmatched=tuple(not (never_free >> v) & 1 for v in range(n)),
    )
