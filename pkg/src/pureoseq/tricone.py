"""Triconed graphs: special triples and the derived labeling.

A graph is triconed when some vertex ``v0`` has two neighbours ``v1`` and
``v2`` such that every other vertex is adjacent to one of the three, and no
parallel edges touch any of them.  The labeling fixes a vertex ranking, an
edge order whose lexicographically smallest tree ``b0`` is the staged
breadth-first tree from ``v0``, and the reduced graph ``g_red`` obtained by
deleting ``b0`` and ``v0``.

All vertex and edge identifiers stored here are indices of the base graph.
``g_red`` is provided as a separate :class:`Graph` together with
``edge_map`` for callers that want a standalone object, but the marked and
weighted forests keep base-graph indices throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from pureoseq.activity import EdgeOrder, lex_min_basis
from pureoseq.errors import InvalidTripleError, NotReducedError
from pureoseq.graph_core import EdgeSet, Graph, coloops, loops, parallel_classes


def _triple_violation(g: Graph, triple: tuple[int, int, int]) -> tuple[str, str] | None:
    a, b, c = triple
    if len({a, b, c}) != 3:
        return "distinct", "the three special vertices must be distinct"
    if loops(g):
        return "loop", "the graph has self-loops; reduce it first"
    nb = g.neighbors(a)
    if b not in nb or c not in nb:
        return "adjacency", f"{g.vertices[b]} and {g.vertices[c]} must both be adjacent to {g.vertices[a]}"
    special = {a, b, c}
    for cls in parallel_classes(g):
        if len(cls) > 1:
            u, v = g.edges[cls[0]]
            if u in special or v in special:
                return "parallel", f"parallel edges {g.vertices[u]}-{g.vertices[v]} touch a special vertex"
    reach = nb | g.neighbors(b) | g.neighbors(c) | special
    missing = [g.vertices[v] for v in range(g.n) if v not in reach]
    if missing:
        return "domination", f"vertices {', '.join(missing)} are not adjacent to the triple"
    return None


def find_special_triples(g: Graph) -> list[tuple[int, int, int]]:
    """Every valid ordered triple ``(v0, v1, v2)``, in lexicographic index order.

    ``g`` must already be reduced: a loop or a coloop raises
    :class:`NotReducedError`.
    """
    if loops(g) or coloops(g):
        raise NotReducedError("the graph has loops or coloops; run reduce_to_core first")
    if g.n < 3:
        return []
    return [t for t in permutations(range(g.n), 3) if _triple_violation(g, t) is None]


def validate_triple(g: Graph, triple: tuple[int, int, int]) -> None:
    bad = _triple_violation(g, triple)
    if bad is not None:
        raise InvalidTripleError(*bad)


def _pair_key(rank: dict[int, int], g: Graph, e: int) -> tuple[int, int, int]:
    u, v = g.edges[e]
    ru, rv = rank[u], rank[v]
    return (min(ru, rv), max(ru, rv), e)


@dataclass(frozen=True)
class TriconeLabeling:
    graph: Graph
    special: tuple[int, int, int]
    vertex_rank: dict[int, int]
    height: dict[int, int]
    vtype: dict[int, int]
    edge_order: EdgeOrder
    b0: EdgeSet
    cone_child: dict[int, int]  # b0 edge -> child vertex
    cone_edge: dict[int, int]  # non-root vertex -> b0 edge
    red_edges: tuple[int, ...]  # base edges outside b0, in edge order
    g_red: Graph
    edge_map: tuple[int, ...]  # g_red edge index -> base edge index

    @property
    def v0(self) -> int:
        return self.special[0]

    @property
    def v1(self) -> int:
        return self.special[1]

    @property
    def v2(self) -> int:
        return self.special[2]

    @cached_property
    def e01(self) -> int:
        return self.cone_edge[self.v1]

    @cached_property
    def e02(self) -> int:
        return self.cone_edge[self.v2]

    @cached_property
    def red_vertices(self) -> tuple[int, ...]:
        return tuple(sorted((v for v in range(self.graph.n) if v != self.v0), key=self.vertex_rank.__getitem__))

    @cached_property
    def red_adj(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Vertex -> ((neighbour, edge), ...) over g_red, edges in edge order."""
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.red_vertices}
        for e in self.red_edges:
            u, v = self.graph.edges[e]
            adj[u].append((v, e))
            adj[v].append((u, e))
        return {v: tuple(x) for v, x in adj.items()}

    @cached_property
    def _forest_cache(self) -> dict:
        return {}

    def forest_structure(self, edges: frozenset[int]):
        """``(adjacency, components)`` of an edge subset of ``g_red``, memoised."""
        hit = self._forest_cache.get(edges)
        if hit is None:
            from pureoseq.forest import adjacency, components

            adj = adjacency(self.graph, self.red_vertices, edges)
            hit = (adj, components(adj))
            self._forest_cache[edges] = hit
        return hit

    def is_special(self, v: int) -> bool:
        return v == self.v1 or v == self.v2

    def label(self, v: int) -> str:
        return self.graph.vertices[v]

    def ends(self, e: int) -> tuple[int, int]:
        """Endpoints of ``e`` with the lower-ranked vertex first."""
        u, v = self.graph.edges[e]
        return (u, v) if self.vertex_rank[u] <= self.vertex_rank[v] else (v, u)

    def edge_label(self, e: int, sep: str = "-") -> str:
        u, v = self.ends(e)
        return f"{self.label(u)}{sep}{self.label(v)}"

    @cached_property
    def _parallel_position(self) -> dict[int, tuple[int, int]]:
        """Edge -> (1-based position in its parallel class by edge order, class size)."""
        classes: dict[tuple[int, int], list[int]] = {}
        for e in self.edge_order.sequence:
            u, v = self.graph.edges[e]
            classes.setdefault((min(u, v), max(u, v)), []).append(e)
        return {e: (i + 1, len(cls)) for cls in classes.values() for i, e in enumerate(cls)}

    def edge_name(self, e: int) -> str:
        """``u-v`` in rank order, with a ``#k`` suffix when ``e`` has parallel copies."""
        pos, size = self._parallel_position[e]
        base = self.edge_label(e)
        return base if size == 1 else f"{base}#{pos}"

    @cached_property
    def name_index(self) -> dict[str, int]:
        """Every accepted spelling of an edge name, both endpoint orders."""
        out: dict[str, int] = {}
        for e in range(self.graph.m):
            pos, size = self._parallel_position[e]
            u, v = self.ends(e)
            for a, b in ((u, v), (v, u)):
                stem = f"{self.label(a)}-{self.label(b)}"
                out[f"{stem}#{pos}"] = e
                if size == 1:
                    out[stem] = e
        return out

    def edge_by_name(self, name: str) -> int:
        try:
            return self.name_index[name.strip()]
        except KeyError:
            raise ValueError(f"unknown edge {name!r}") from None

    def sort_vertices(self, vs) -> list[int]:
        return sorted(vs, key=self.vertex_rank.__getitem__)

    def sort_edges(self, es) -> list[int]:
        return self.edge_order.sort(es)

    def summary(self) -> dict:
        lab = self.label
        return {
            "special": [lab(v) for v in self.special],
            "vertex_order": [lab(v) for v in sorted(self.vertex_rank, key=self.vertex_rank.__getitem__)],
            "height": {lab(v): h for v, h in sorted(self.height.items(), key=lambda kv: self.vertex_rank[kv[0]])},
            "type": {lab(v): t for v, t in sorted(self.vtype.items(), key=lambda kv: self.vertex_rank[kv[0]])},
            "edge_order": [self.edge_name(e) for e in self.edge_order.sequence],
            "b0": [self.edge_name(e) for e in self.sort_edges(self.b0)],
            "g_red_edges": [self.edge_name(e) for e in self.red_edges],
        }


def build_labeling(g: Graph, triple: tuple[int, int, int]) -> TriconeLabeling:
    validate_triple(g, triple)
    v0, v1, v2 = triple

    ranked = [v0, v1, v2]
    seen = set(ranked)
    for centre in (v0, v1, v2):
        for u in sorted(g.neighbors(centre)):
            if u not in seen:
                seen.add(u)
                ranked.append(u)
    rank = {v: i for i, v in enumerate(ranked)}

    n0 = g.neighbors(v0)
    n1 = g.neighbors(v1)
    height = {v: 0 if v == v0 else 1 if v in n0 else 2 for v in range(g.n)}

    group_i, group_ii, group_iii, group_iv = [], [], [], []
    for e, (a, b) in enumerate(g.edges):
        if v0 in (a, b):
            group_i.append(e)
            continue
        other1 = g.other(e, v1) if v1 in (a, b) else None
        other2 = g.other(e, v2) if v2 in (a, b) else None
        if other1 is not None and height[other1] == 2:
            group_ii.append(e)
        elif other2 is not None and height[other2] == 2 and other2 not in n1:
            group_iii.append(e)
        else:
            group_iv.append(e)
    key = lambda e: _pair_key(rank, g, e)  # noqa: E731
    sequence = []
    for group in (group_i, group_ii, group_iii, group_iv):
        sequence += sorted(group, key=key)
    order = EdgeOrder(tuple(sequence))

    b0 = lex_min_basis(g, order)

    # root b0 at v0
    cone_child: dict[int, int] = {}
    cone_edge: dict[int, int] = {}
    tree_adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.n)}
    for e in b0:
        a, b = g.edges[e]
        tree_adj[a].append((b, e))
        tree_adj[b].append((a, e))
    parent = {v0: None}
    stack = [v0]
    while stack:
        x = stack.pop()
        for y, e in tree_adj[x]:
            if y not in parent:
                parent[y] = x
                cone_child[e] = y
                cone_edge[y] = e
                stack.append(y)

    vtype = {}
    for v in range(g.n):
        if v == v1 or parent.get(v) == v1:
            vtype[v] = 1
        elif v == v2 or parent.get(v) == v2:
            vtype[v] = 2
        else:
            vtype[v] = 0

    red_edges = tuple(e for e in sequence if e not in b0)
    red_labels = [g.vertices[v] for v in range(g.n) if v != v0]
    g_red = Graph.from_pairs(
        [(g.vertices[g.edges[e][0]], g.vertices[g.edges[e][1]]) for e in red_edges],
        red_labels,
    )
    return TriconeLabeling(
        graph=g,
        special=(v0, v1, v2),
        vertex_rank=rank,
        height=height,
        vtype=vtype,
        edge_order=order,
        b0=b0,
        cone_child=cone_child,
        cone_edge=cone_edge,
        red_edges=red_edges,
        g_red=g_red,
        edge_map=red_edges,
    )


def cone_edge_of(lab: TriconeLabeling, v: int) -> int:
    if v == lab.v0:
        raise ValueError("the root has no cone edge")
    return lab.cone_edge[v]


def staged_bfs_tree(lab: TriconeLabeling) -> EdgeSet:
    """Breadth-first tree grown from v0, then v1, then v2, then height-1 vertices.

    Used only as an independent cross-check of ``lab.b0``; within each stage
    the edge smallest in edge order wins.
    """
    g = lab.graph
    rank = lab.edge_order.rank
    reached = {lab.v0}
    tree = []
    height1 = lab.sort_vertices(v for v, h in lab.height.items() if h == 1 and not lab.is_special(v))
    for centre in [lab.v0, lab.v1, lab.v2, *height1]:
        for e in sorted(g.incident[centre], key=rank.__getitem__):
            w = g.other(e, centre)
            if w not in reached:
                reached.add(w)
                tree.append(e)
    return frozenset(tree)


def vertex_id(g: Graph, token) -> int:
    """Resolve a label (or an int index) to a vertex index."""
    if isinstance(token, int):
        return token
    try:
        return g.index[str(token)]
    except KeyError:
        raise ValueError(f"unknown vertex {token!r}") from None
