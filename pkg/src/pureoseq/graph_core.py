"""Multigraphs with indexed edges, loop/coloop reduction and tree enumeration.

Vertices are arbitrary string labels; internally every algorithm works on the
dense index of a vertex in ``Graph.vertices``.  Edge ``i`` is ``Graph.edges[i]``,
an (unordered) pair of vertex indices.  Self-loops and parallel edges are
allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from pureoseq.errors import (
    DisconnectedGraphError,
    EmptyGraphError,
    EnumerationLimitError,
    GraphParseError,
)

DEFAULT_CAP = 10**7

EdgeSet = frozenset  # frozenset[int] of edge indices


class DisjointSet:
    """Union-find over ``range(n)`` with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.count -= 1
        return True


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ValueError("vertex labels must be unique")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i} has an endpoint outside the vertex set")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], vertices: Sequence | None = None) -> "Graph":
        """Build a graph from label pairs; vertices default to first-appearance order."""
        pairs = [(str(a), str(b)) for a, b in pairs]
        if vertices is None:
            seen: dict[str, None] = {}
            for a, b in pairs:
                seen.setdefault(a)
                seen.setdefault(b)
            labels = tuple(seen)
        else:
            labels = tuple(str(v) for v in vertices)
        index = {lab: i for i, lab in enumerate(labels)}
        try:
            edges = tuple((index[a], index[b]) for a, b in pairs)
        except KeyError as exc:
            raise ValueError(f"edge endpoint {exc.args[0]!r} is not a declared vertex") from None
        return cls(labels, edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.vertices)}

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            if v != u:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def is_loop(self, e: int) -> bool:
        a, b = self.edges[e]
        return a == b

    def neighbors(self, v: int) -> set[int]:
        return {self.other(e, v) for e in self.incident[v] if not self.is_loop(e)}

    def edge_label(self, e: int) -> str:
        a, b = self.edges[e]
        return f"{self.vertices[a]}-{self.vertices[b]}"

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        ds = DisjointSet(self.n)
        for u, v in self.edges:
            ds.union(u, v)
        return ds.count == 1

    def to_text(self) -> str:
        """Serialize to the edge-list format accepted by :func:`parse_graph`."""
        lines = [f"p {self.n} {self.m}"]
        if self.n >= 2:
            lines.append("v " + " ".join(self.vertices))
        lines += [f"{self.vertices[u]} {self.vertices[v]}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str, *, require_connected: bool = True) -> Graph:
    """Parse the edge-list format.

    One edge per line as two whitespace-separated vertex tokens.  Blank lines
    and lines starting with ``#`` are ignored.  An optional ``p <n> <m>`` line
    (before any edge) declares the counts and is validated; optional ``v``
    lines enumerate the vertex labels in order, which also admits isolated
    vertices.
    """
    declared: tuple[int, int] | None = None
    header_vertices: list[str] = []
    pairs: list[tuple[str, str]] = []
    header_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "p" and len(tokens) == 3 and not pairs:
            if declared is not None:
                raise GraphParseError("duplicate 'p' header", lineno)
            try:
                declared = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise GraphParseError(f"malformed header {line!r}", lineno) from None
            header_line = lineno
            continue
        if tokens[0] == "v" and len(tokens) != 2 and not pairs:
            header_vertices.extend(tokens[1:])
            continue
        if len(tokens) != 2:
            raise GraphParseError(f"expected two vertex tokens, got {len(tokens)}", lineno)
        pairs.append((tokens[0], tokens[1]))

    if header_vertices:
        if len(set(header_vertices)) != len(header_vertices):
            raise GraphParseError("duplicate label in 'v' header")
        known = set(header_vertices)
        for a, b in pairs:
            for tok in (a, b):
                if tok not in known:
                    raise GraphParseError(f"vertex {tok!r} not listed in 'v' header")
        g = Graph.from_pairs(pairs, header_vertices)
    else:
        g = Graph.from_pairs(pairs)
    if g.n < 1:
        raise EmptyGraphError("graph has no vertices")
    if declared is not None and declared != (g.n, g.m):
        raise GraphParseError(
            f"header declares {declared[0]} vertices and {declared[1]} edges, "
            f"found {g.n} and {g.m}",
            header_line,
        )
    if require_connected and not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")
    return g


# ---------------------------------------------------------------------------
# structural queries


def loops(g: Graph) -> EdgeSet:
    return frozenset(i for i in range(g.m) if g.is_loop(i))


def coloops(g: Graph) -> EdgeSet:
    """Bridges of ``g`` by iterative DFS low-link (parallel edges respected)."""
    if not g.is_connected():
        raise DisconnectedGraphError("coloops are only defined here for connected graphs")
    n = g.n
    pre = [-1] * n
    low = [0] * n
    bridges: set[int] = set()
    counter = 0
    for root in range(n):
        if pre[root] != -1:
            continue
        pre[root] = low[root] = counter
        counter += 1
        # frames: (vertex, edge used to enter it, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, via, pos = stack[-1]
            inc = g.incident[v]
            if pos < len(inc):
                stack[-1] = (v, via, pos + 1)
                e = inc[pos]
                if e == via or g.is_loop(e):
                    continue
                w = g.other(e, v)
                if pre[w] == -1:
                    pre[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, 0))
                else:
                    low[v] = min(low[v], pre[w])
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > pre[parent]:
                        bridges.add(via)
    return frozenset(bridges)


def parallel_classes(g: Graph) -> list[list[int]]:
    """Non-loop edges grouped by endpoint pair, classes in first-edge order."""
    classes: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        classes.setdefault((min(u, v), max(u, v)), []).append(i)
    return list(classes.values())


# ---------------------------------------------------------------------------
# loop deletion / coloop contraction


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # "delete-loop" | "contract-coloop"
    edge: int  # index in the original graph
    merged: tuple[str, str] | None = None  # (kept label, absorbed label)


@dataclass(frozen=True)
class ReductionLog:
    steps: tuple[ReductionStep, ...] = ()
    # core edge index -> original edge index
    edge_origin: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self, g: Graph) -> Graph:
        """Apply the recorded steps to ``g`` (the original graph)."""
        current, origin = g, list(range(g.m))
        for step in self.steps:
            e = origin.index(step.edge)
            if step.kind == "delete-loop":
                current, keep = _delete_edge(current, e)
            else:
                current, keep = _contract_edge(current, e)
            origin = [origin[i] for i in keep]
        return current


def _delete_edge(g: Graph, e: int) -> tuple[Graph, list[int]]:
    keep = [i for i in range(g.m) if i != e]
    return Graph(g.vertices, tuple(g.edges[i] for i in keep)), keep


def _contract_edge(g: Graph, e: int) -> tuple[Graph, list[int]]:
    a, b = g.edges[e]
    kept, gone = min(a, b), max(a, b)
    remap = []
    for v in range(g.n):
        w = kept if v == gone else v
        remap.append(w if w < gone else w - 1)
    vertices = tuple(lab for v, lab in enumerate(g.vertices) if v != gone)
    keep = [i for i in range(g.m) if i != e]
    edges = tuple((remap[g.edges[i][0]], remap[g.edges[i][1]]) for i in keep)
    return Graph(vertices, edges), keep


def reduce_to_core(g: Graph) -> tuple[Graph, ReductionLog]:
    """Delete self-loops and contract bridges until neither remains.

    Contraction keeps the label of the endpoint that appears first.  A graph
    that collapses completely is returned as a single isolated vertex.
    """
    current, origin = g, list(range(g.m))
    steps: list[ReductionStep] = []
    while True:
        lp = sorted(loops(current))
        if lp:
            e = lp[0]
            steps.append(ReductionStep("delete-loop", origin[e]))
            current, keep = _delete_edge(current, e)
            origin = [origin[i] for i in keep]
            continue
        br = sorted(coloops(current))
        if br:
            e = br[0]
            a, b = current.edges[e]
            kept, gone = min(a, b), max(a, b)
            steps.append(
                ReductionStep(
                    "contract-coloop",
                    origin[e],
                    (current.vertices[kept], current.vertices[gone]),
                )
            )
            current, keep = _contract_edge(current, e)
            origin = [origin[i] for i in keep]
            continue
        break
    return current, ReductionLog(tuple(steps), tuple(origin))


# ---------------------------------------------------------------------------
# spanning trees


def is_spanning_tree(g: Graph, s: Iterable[int]) -> bool:
    s = set(s)
    if len(s) != g.n - 1 or any(not 0 <= e < g.m for e in s):
        return False
    ds = DisjointSet(g.n)
    for e in s:
        u, v = g.edges[e]
        if not ds.union(u, v):
            return False
    return ds.count == 1


def spanning_trees(g: Graph, cap: int = DEFAULT_CAP) -> list[EdgeSet]:
    """All spanning trees, by contraction-deletion on edges in index order.

    An undecided edge is forced out when it would close a cycle among the
    chosen edges, forced in when it is a bridge of the chosen+undecided
    graph, and branched on (include first) otherwise.  Every branch therefore
    ends in a tree, and the output order is a deterministic function of ``g``.
    """
    if not g.is_connected():
        raise DisconnectedGraphError("spanning trees need a connected graph")
    n, m = g.n, g.m
    edges = g.edges
    out: list[EdgeSet] = []

    def find(comp: list[int], x: int) -> int:
        while comp[x] != x:
            x = comp[x]
        return x

    def connected_without(comp: list[int], start: int, skip: int) -> bool:
        # chosen edges are already merged in ``comp``; test the undecided rest
        ds = DisjointSet(n)
        for v in range(n):
            ds.union(v, find(comp, v))
        for e in range(start, m):
            if e != skip:
                ds.union(*edges[e])
        return ds.count == 1

    def rec(start: int, comp: list[int], chosen: list[int]) -> None:
        if len(chosen) == n - 1:
            out.append(frozenset(chosen))
            if len(out) > cap:
                raise EnumerationLimitError(cap)
            return
        e = start
        while e < m:
            u, v = edges[e]
            ru, rv = find(comp, u), find(comp, v)
            if ru != rv:
                break
            e += 1
        else:
            return
        must_take = not connected_without(comp, e + 1, -1)
        new = list(comp)
        new[rv] = ru
        chosen.append(e)
        rec(e + 1, new, chosen)
        chosen.pop()
        if not must_take:
            rec(e + 1, comp, chosen)

    if n == 1:
        return [frozenset()]
    rec(0, list(range(n)), [])
    return out


def matrix_tree_count(g: Graph) -> int:
    """Spanning-tree count as a Laplacian cofactor (fraction-free Bareiss)."""
    n = g.n
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        if u == v:
            continue
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    a = [row[1:] for row in lap[1:]]
    size = n - 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[size - 1][size - 1]


# ---------------------------------------------------------------------------
# edge names


def parallel_position(g: Graph) -> dict[int, tuple[int, int]]:
    """Edge -> (1-based position in its parallel class by index, class size)."""
    out = {}
    for cls in parallel_classes(g):
        for i, e in enumerate(cls):
            out[e] = (i + 1, len(cls))
    for e in loops(g):
        out[e] = (1, 1)
    return out


def resolve_edge(g: Graph, name: str) -> int:
    """Look up ``u-v`` (either orientation) or ``u-v#k`` for the k-th parallel copy."""
    name = name.strip()
    stem, _, suffix = name.partition("#")
    candidates = []
    for e, (u, v) in enumerate(g.edges):
        a, b = g.vertices[u], g.vertices[v]
        if stem in (f"{a}-{b}", f"{b}-{a}"):
            candidates.append(e)
    if not candidates:
        raise ValueError(f"unknown edge {name!r}")
    if suffix:
        try:
            k = int(suffix)
        except ValueError:
            raise ValueError(f"bad parallel suffix in {name!r}") from None
        if not 1 <= k <= len(candidates):
            raise ValueError(f"edge {stem!r} has {len(candidates)} parallel copies")
        return candidates[k - 1]
    if len(candidates) > 1:
        raise ValueError(f"edge {stem!r} is parallel; add a #k suffix")
    return candidates[0]
