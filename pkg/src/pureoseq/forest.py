"""Small tree utilities over an edge subset of a graph: components, paths, Steiner subtrees."""

from __future__ import annotations

from typing import Iterable

from pureoseq.graph_core import DisjointSet, Graph

Adjacency = dict[int, list[tuple[int, int]]]


def adjacency(g: Graph, vertices: Iterable[int], edges: Iterable[int]) -> Adjacency:
    adj: Adjacency = {v: [] for v in vertices}
    for e in sorted(edges):
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    return adj


def is_forest(g: Graph, edges: Iterable[int]) -> bool:
    ds = DisjointSet(g.n)
    for e in edges:
        u, v = g.edges[e]
        if u == v or not ds.union(u, v):
            return False
    return True


def components(adj: Adjacency, key=None) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Connected components as ``(vertices, edges)`` pairs.

    Components are listed by their smallest vertex under ``key``; with no
    key the insertion order of ``adj`` is used as the vertex order.
    """
    seen: set[int] = set()
    out = []
    for start in (adj if key is None else sorted(adj, key=key)):
        if start in seen:
            continue
        verts = {start}
        es: set[int] = set()
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                es.add(e)
                if y not in seen:
                    seen.add(y)
                    verts.add(y)
                    stack.append(y)
        out.append((frozenset(verts), frozenset(es)))
    return out


def tree_path(adj: Adjacency, a: int, b: int) -> tuple[list[int], list[int]]:
    """Vertices and edges of the unique path from ``a`` to ``b``."""
    if a == b:
        return [a], []
    parent: dict[int, tuple[int, int] | None] = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for y, e in adj[x]:
            if y not in parent:
                parent[y] = (x, e)
                stack.append(y)
    if b not in parent:
        raise ValueError("vertices lie in different components")
    verts, es = [b], []
    x = b
    while parent[x] is not None:
        p, e = parent[x]
        es.append(e)
        verts.append(p)
        x = p
    verts.reverse()
    es.reverse()
    return verts, es


def steiner(adj: Adjacency, terminals: Iterable[int]) -> tuple[set[int], set[int]]:
    """Minimal subtree containing ``terminals`` (which must share a component)."""
    terminals = set(terminals)
    if len(terminals) <= 1:
        return set(terminals), set()
    root = next(iter(terminals))
    verts: set[int] = {root}
    es: set[int] = set()
    for t in terminals:
        pv, pe = tree_path(adj, root, t)
        verts.update(pv)
        es.update(pe)
    return verts, es


def leaves(adj: Adjacency, verts: set[int], es: set[int]) -> list[int]:
    if len(verts) == 1:
        return list(verts)
    return [v for v in verts if sum(1 for _, e in adj[v] if e in es) == 1]
