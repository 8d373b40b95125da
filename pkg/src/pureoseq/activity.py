"""Internal activity of spanning trees and the h-vector of a graphic matroid."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from pureoseq.errors import DisconnectedGraphError, NotASpanningTreeError
from pureoseq.graph_core import (
    DEFAULT_CAP,
    DisjointSet,
    EdgeSet,
    Graph,
    is_spanning_tree,
    spanning_trees,
)


@dataclass(frozen=True)
class EdgeOrder:
    """Total order on edge indices; ``sequence[0]`` is the smallest edge."""

    sequence: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sequence) != list(range(len(self.sequence))):
            raise ValueError("edge order must be a permutation of the edge indices")

    @classmethod
    def natural(cls, m: int) -> "EdgeOrder":
        return cls(tuple(range(m)))

    @classmethod
    def shuffled(cls, m: int, rng: random.Random) -> "EdgeOrder":
        seq = list(range(m))
        rng.shuffle(seq)
        return cls(tuple(seq))

    @cached_property
    def rank(self) -> tuple[int, ...]:
        r = [0] * len(self.sequence)
        for pos, e in enumerate(self.sequence):
            r[e] = pos
        return tuple(r)

    def sort(self, edges: Iterable[int]) -> list[int]:
        rank = self.rank
        return sorted(edges, key=rank.__getitem__)


def lex_min_basis(g: Graph, order: EdgeOrder) -> EdgeSet:
    """Kruskal scan in increasing order; the unique tree with no passive edge."""
    ds = DisjointSet(g.n)
    taken = []
    for e in order.sequence:
        u, v = g.edges[e]
        if ds.union(u, v):
            taken.append(e)
    if ds.count != 1:
        raise DisconnectedGraphError("graph is not connected")
    return frozenset(taken)


def passive_set(g: Graph, order: EdgeOrder, b: Iterable[int], *, check: bool = True) -> EdgeSet:
    """Edges ``i`` of ``b`` for which some smaller ``j`` outside ``b`` makes ``b - i + j`` a tree.

    ``b - i`` has exactly two components, so ``b - i + j`` is a spanning tree
    precisely when ``j`` has one endpoint on each side.
    """
    b = frozenset(b)
    if check and not is_spanning_tree(g, b):
        raise NotASpanningTreeError("not a spanning tree")
    rank = order.rank
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in b:
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    outside = sorted((e for e in range(g.m) if e not in b and not g.is_loop(e)), key=rank.__getitem__)
    passive = set()
    for i in b:
        ri = rank[i]
        smaller = [j for j in outside if rank[j] < ri]
        if not smaller:
            continue
        # side of b - i containing the first endpoint of i
        start = g.edges[i][0]
        side = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                if e != i and y not in side:
                    side.add(y)
                    stack.append(y)
        for j in smaller:
            u, v = g.edges[j]
            if (u in side) != (v in side):
                passive.add(i)
                break
    return frozenset(passive)


def h_vector(
    g: Graph,
    order: EdgeOrder | None = None,
    *,
    trees: list[EdgeSet] | None = None,
    cap: int = DEFAULT_CAP,
) -> tuple[int, ...]:
    """Histogram of passivity over all spanning trees, of length ``n`` (rank + 1)."""
    if order is None:
        order = EdgeOrder.natural(g.m)
    if trees is None:
        trees = spanning_trees(g, cap)
    counts = [0] * g.n
    for t in trees:
        counts[len(passive_set(g, order, t, check=False))] += 1
    return tuple(counts)


def trim(seq) -> tuple[int, ...]:
    """Drop trailing zeros, keeping at least one entry."""
    seq = list(seq)
    while len(seq) > 1 and seq[-1] == 0:
        seq.pop()
    return tuple(seq)
