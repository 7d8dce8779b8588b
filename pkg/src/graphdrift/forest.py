"""Maximum-weight spanning forests under the mixed-model path constraint.

Edges are ranked by penalized MI and added greedily (Kruskal) while they
join distinct components, carry positive penalized weight, and do not
create a path between two non-adjacent discrete nodes that passes
through continuous nodes (a forbidden path).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dataset import VariableSpec
from .mi import (
    DegenerateVarianceError,
    MiConfig,
    mi_continuous,
    mi_discrete,
    mi_mixed_heterogeneous,
    mi_mixed_homogeneous,
)


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric penalized-MI weight matrix plus node kinds and degeneracy flags."""

    v: int
    weights: np.ndarray            # (v, v) float, -inf marks degenerate pairs
    kinds: tuple[str, ...]         # per node: 'discrete' | 'continuous'
    flags: np.ndarray = field(default=None)  # (v, v) bool, degenerate or clamped pairs

    def __post_init__(self):
        if self.flags is None:
            object.__setattr__(self, "flags", np.zeros((self.v, self.v), dtype=bool))


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric binary forest indicator for one time window."""

    v: int
    bits: np.ndarray               # (v, v) int8, zero diagonal
    window_index: int

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.v) for j in range(i + 1, self.v)
                if self.bits[i, j]]

    def to_json_dict(self) -> dict:
        return {"v": self.v, "window_index": self.window_index,
                "edges": [[i, j] for i, j in self.edges()]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AdjacencyMatrix":
        bits = np.zeros((d["v"], d["v"]), dtype=np.int8)
        for i, j in d["edges"]:
            bits[i, j] = bits[j, i] = 1
        return cls(v=d["v"], bits=bits, window_index=d["window_index"])


def weight_matrix(values: np.ndarray, schema: list[VariableSpec],
                  cfg: MiConfig) -> WeightedGraph:
    """Evaluate all p(p-1)/2 pair weights for one window.

    Degenerate pairs (zero variance where a variance is required) are
    flagged and weighted -inf so Kruskal never selects them; the window
    itself always produces a graph.
    """
    values = np.asarray(values, dtype=np.float64)
    p = values.shape[1]
    if p < 2:
        raise ValueError("need at least 2 variables")
    if values.shape[0] == 0:
        raise ValueError("empty window")
    kinds = tuple(s.kind for s in schema)
    names = [s.name for s in schema]
    weights = np.zeros((p, p), dtype=np.float64)
    flags = np.zeros((p, p), dtype=bool)
    for i, j in itertools.combinations(range(p), 2):
        pair = (names[i], names[j])
        try:
            ew = _pair_weight(values[:, i], values[:, j], kinds[i], kinds[j], cfg, pair)
            w = ew.penalized
            flags[i, j] = flags[j, i] = ew.clamped
        except DegenerateVarianceError:
            w = -np.inf
            flags[i, j] = flags[j, i] = True
        weights[i, j] = weights[j, i] = w
    return WeightedGraph(v=p, weights=weights, kinds=kinds, flags=flags)


def _pair_weight(a, b, kind_a, kind_b, cfg: MiConfig, pair):
    if kind_a == "discrete" and kind_b == "discrete":
        return mi_discrete(a, b, criterion=cfg.criterion)
    if kind_a == "continuous" and kind_b == "continuous":
        return mi_continuous(a, b, criterion=cfg.criterion, pair=pair)
    z, y = (a, b) if kind_a == "discrete" else (b, a)
    if cfg.mixed_mode == "heterogeneous":
        try:
            return mi_mixed_heterogeneous(z, y, criterion=cfg.criterion, pair=pair)
        except DegenerateVarianceError:
            if not cfg.fallback_to_homogeneous:
                raise
            return mi_mixed_homogeneous(z, y, criterion=cfg.criterion, pair=pair)
    return mi_mixed_homogeneous(z, y, criterion=cfg.criterion, pair=pair)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def has_forbidden_path(bits: np.ndarray, kinds: tuple[str, ...]) -> bool:
    """Exhaustive scan: any two discrete nodes joined only through continuous ones?

    O(V^2) BFS over a forest; V is small in every intended use, so
    clarity wins over asymptotics.
    """
    v = bits.shape[0]
    discrete = [i for i in range(v) if kinds[i] == "discrete"]
    for a in discrete:
        # BFS recording parents; forests have unique paths
        parent = {a: None}
        queue = [a]
        while queue:
            u = queue.pop()
            for w in range(v):
                if bits[u, w] and w not in parent:
                    parent[w] = u
                    queue.append(w)
        for b in discrete:
            if b <= a or b not in parent:
                continue
            node = parent[b]
            while node is not None and node != a:
                if kinds[node] == "continuous":
                    return True
                node = parent[node]
    return False


def creates_forbidden_path(bits: np.ndarray, kinds: tuple[str, ...],
                           edge: tuple[int, int]) -> bool:
    """Would adding `edge` to the partial forest create a forbidden path?"""
    i, j = edge
    trial = bits.copy()
    trial[i, j] = trial[j, i] = 1
    return has_forbidden_path(trial, kinds)


def kruskal_max_forest(g: WeightedGraph, window_index: int = 0) -> AdjacencyMatrix:
    """Greedy maximum-weight forest over positive penalized weights.

    Ties are broken by (min node index, max node index) ascending so
    identical inputs always give identical forests.
    """
    order = sorted(
        ((i, j) for i, j in itertools.combinations(range(g.v), 2)),
        key=lambda e: (-g.weights[e[0], e[1]], e[0], e[1]),
    )
    bits = np.zeros((g.v, g.v), dtype=np.int8)
    uf = _UnionFind(g.v)
    for i, j in order:
        w = g.weights[i, j]
        if not w > 0.0:
            break  # sorted descending: nothing positive remains
        if uf.find(i) == uf.find(j):
            continue
        if creates_forbidden_path(bits, g.kinds, (i, j)):
            continue
        uf.union(i, j)
        bits[i, j] = bits[j, i] = 1
    return AdjacencyMatrix(v=g.v, bits=bits, window_index=window_index)


def forest_total_weight(am: AdjacencyMatrix, g: WeightedGraph) -> float:
    """Sum of penalized weights over the selected edges."""
    if am.v != g.v:
        raise ValueError("dimension mismatch")
    return float(sum(g.weights[i, j] for i, j in am.edges()))
