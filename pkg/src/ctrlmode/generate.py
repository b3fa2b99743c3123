"""Synthetic digraphs: the static scale-free model and uniform random digraphs.

Average degree follows the total-degree convention ``<k> = 2L / n``, so a
target ``k_avg`` asks for ``L = round(n * k_avg / 2)`` edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import DiGraph

__all__ = ["GenParams", "GeneratorError", "generate", "static_model", "uniform_random"]

SF = "sf"
ER = "er"
ATTEMPT_FACTOR = 100


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int
    k_avg: float
    gamma_in: float = 3.0
    gamma_out: float = 3.0
    seed: int = 0
    model: str = SF

    @property
    def n_edges(self) -> int:
        return int(round(self.n * self.k_avg / 2))

    def validate(self) -> None:
        if self.n < 1:
            raise GeneratorError("n must be >= 1")
        if not self.k_avg > 0:
            raise GeneratorError("k_avg must be > 0")
        if self.model not in (SF, ER):
            raise GeneratorError(f"unknown model {self.model!r}")
        if self.model == SF and not (self.gamma_in > 2 and self.gamma_out > 2):
            raise GeneratorError("static model needs gamma_in, gamma_out > 2")
        if self.n_edges > self.n * (self.n - 1):
            raise GeneratorError(f"{self.n_edges} edges do not fit a simple digraph on {self.n} nodes")
        if not 0 <= self.seed < 2**64:
            raise GeneratorError("seed must be a 64-bit unsigned integer")


def _sample_edges(n: int, n_edges: int, w_out, w_in, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Draw endpoint pairs until ``n_edges`` distinct non-loop edges exist."""
    edges: list[tuple[int, int]] = []
    seen: set[int] = set()
    budget = ATTEMPT_FACTOR * n_edges
    attempts = 0
    while len(edges) < n_edges:
        if attempts >= budget:
            raise GeneratorError(
                f"rejection sampling stalled: {len(edges)}/{n_edges} edges after {attempts} draws"
            )
        batch = min(budget - attempts, max(64, 2 * (n_edges - len(edges))))
        if w_out is None:
            src = rng.integers(0, n, size=batch)
            dst = rng.integers(0, n, size=batch)
        else:
            src = rng.choice(n, size=batch, p=w_out)
            dst = rng.choice(n, size=batch, p=w_in)
        codes = (src * n + dst).tolist()
        loops = (src == dst).tolist()
        for i, code in enumerate(codes):
            attempts += 1
            if loops[i] or code in seen:
                continue
            seen.add(code)
            edges.append(divmod(code, n))
            if len(edges) == n_edges:
                break
    return edges


def static_model(n: int, n_edges: int, gamma_in: float, gamma_out: float, rng) -> list[tuple[int, int]]:
    # node i (1-based) carries weight i**-alpha, alpha = 1 / (gamma - 1)
    ranks = np.arange(1, n + 1, dtype=float)
    w_out = ranks ** (-1.0 / (gamma_out - 1.0))
    w_in = ranks ** (-1.0 / (gamma_in - 1.0))
    return _sample_edges(n, n_edges, w_out / w_out.sum(), w_in / w_in.sum(), rng)


def uniform_random(n: int, n_edges: int, rng) -> list[tuple[int, int]]:
    return _sample_edges(n, n_edges, None, None, rng)


def generate(p: GenParams) -> DiGraph:
    p.validate()
    rng = np.random.Generator(np.random.PCG64(p.seed))
    if p.model == SF:
        edges = static_model(p.n, p.n_edges, p.gamma_in, p.gamma_out, rng)
    else:
        edges = uniform_random(p.n, p.n_edges, rng)
    return DiGraph(p.n, frozenset(edges))
