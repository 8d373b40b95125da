"""Trirooted forests of the reduced graph and the bijection with spanning trees.

A spanning tree ``b`` becomes the forest ``b - b0`` on ``g_red`` together
with marks: the child of every ``b0`` edge kept by ``b`` (other than the
cone edges of ``v1`` and ``v2``), the two special vertices, and possibly a
double mark recording a passive ``v0 v2`` edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from pureoseq.errors import Check, MaximalError, NotASpanningTreeError, NotTrirootedError
from pureoseq.forest import adjacency, components, is_forest, tree_path
from pureoseq.graph_core import DisjointSet, EdgeSet, is_spanning_tree
from pureoseq.tricone import TriconeLabeling

BlueprintEdge = tuple[int, int]
Blueprint = tuple[BlueprintEdge, ...]


@dataclass(frozen=True)
class MarkedForest:
    edges: EdgeSet
    marks: frozenset[int]
    double: int | None = None

    def components(self, lab: TriconeLabeling):
        return lab.forest_structure(frozenset(self.edges))

    def describe(self, lab: TriconeLabeling) -> dict:
        return {
            "edges": [lab.edge_name(e) for e in lab.sort_edges(self.edges)],
            "marks": [lab.label(v) + ("*" if v == self.double else "") for v in lab.sort_vertices(self.marks)],
            "double_mark": None if self.double is None else lab.label(self.double),
        }


# ---------------------------------------------------------------------------
# phi1 and its inverse


def phi1(lab: TriconeLabeling, b) -> MarkedForest:
    b = frozenset(b)
    g = lab.graph
    if not is_spanning_tree(g, b):
        raise NotASpanningTreeError("not a spanning tree of the base graph")
    e01, e02 = lab.e01, lab.e02
    kept = b & lab.b0
    marks = {lab.cone_child[e] for e in kept if e not in (e01, e02)}
    marks |= {lab.v1, lab.v2}
    double = None
    if e02 in b:
        adj = adjacency(g, range(g.n), b)
        verts, es = tree_path(adj, lab.v2, lab.v1)
        if e02 not in es:
            for i, e in enumerate(es):
                if e not in lab.b0:
                    double = verts[i]
                    break
    return MarkedForest(b - lab.b0, frozenset(marks), double)


def phi1_inv(lab: TriconeLabeling, f: MarkedForest, *, check: bool = True) -> EdgeSet:
    if check:
        verdict = is_trirooted(lab, f)
        if not verdict:
            raise NotTrirootedError("; ".join(verdict.reasons))
    tree = set(f.edges)
    tree |= {lab.cone_edge[v] for v in f.marks if not lab.is_special(v)}
    if f.double is not None:
        tree.add(lab.e02)
    if not blueprint_connects(blueprint_of(lab, f), 0, 1):
        tree.add(lab.e01)
    if not is_spanning_tree(lab.graph, tree):
        tree.add(lab.e02)
    tree = frozenset(tree)
    if not is_spanning_tree(lab.graph, tree):
        raise NotTrirootedError("reconstruction did not produce a spanning tree")
    return tree


# ---------------------------------------------------------------------------
# blueprints and validity


def mark_types(lab: TriconeLabeling, marks, double) -> list[int]:
    types = [lab.vtype[v] for v in marks]
    if double is not None and double in marks:
        types.append(0)
    return types


def component_degree(marks, double) -> int:
    return len(marks) + (1 if double is not None and double in marks else 0)


def _blueprint_from(lab, comps, marks, double) -> Blueprint:
    out: list[BlueprintEdge] = []
    for verts, _ in comps:
        cm = marks & verts
        d = double if double in verts else None
        deg = component_degree(cm, d)
        if deg == 0:
            raise NotTrirootedError("a component carries no mark")
        if deg == 2:
            a, b = sorted(mark_types(lab, cm, d))
            out.append((a, b))
        elif deg >= 3:
            out += [(0, 1), (0, 2)]
    return tuple(sorted(out))


def blueprint_of(lab: TriconeLabeling, f: MarkedForest) -> Blueprint:
    _, comps = f.components(lab)
    return _blueprint_from(lab, comps, f.marks, f.double)


def blueprint_acyclic(bp: Blueprint) -> bool:
    ds = DisjointSet(3)
    return all(ds.union(a, b) for a, b in bp)


def blueprint_connects(bp: Blueprint, a: int, b: int) -> bool:
    ds = DisjointSet(3)
    for x, y in bp:
        ds.union(x, y)
    return ds.find(a) == ds.find(b)


def blueprint_spanning(bp: Blueprint) -> bool:
    ds = DisjointSet(3)
    for x, y in bp:
        ds.union(x, y)
    return ds.count == 1


def render_blueprint(bp: Blueprint) -> list[str]:
    return [f"{a}{b}" for a, b in bp]


def is_correctly_marked(lab: TriconeLabeling, verts, marks, double=None) -> Check:
    verts = frozenset(verts)
    marks = frozenset(marks) & verts
    if double is not None and double not in verts:
        double = None
    reasons = []
    if not marks:
        reasons.append("no-mark")
    for s in (lab.v1, lab.v2):
        if s in verts and s not in marks:
            reasons.append(f"special-unmarked:{lab.label(s)}")
    types = mark_types(lab, marks, double)
    if len(set(types)) != len(types):
        reasons.append("repeated-type")
    if double is not None:
        if double not in marks:
            reasons.append("double-not-marked")
        if lab.vtype[double] != 2:
            reasons.append("double-not-type-2")
        if len(marks) < 2:
            reasons.append("double-alone")
    return Check.of(reasons)


def is_trirooted(lab: TriconeLabeling, f: MarkedForest) -> Check:
    red = set(lab.red_edges)
    if not f.edges <= red:
        return Check.of(["edge-outside-g_red"])
    if not is_forest(lab.graph, f.edges):
        return Check.of(["not-a-forest"])
    if not f.marks <= set(lab.red_vertices):
        return Check.of(["mark-outside-g_red"])
    if f.double is not None and f.double not in f.marks:
        return Check.of(["double-not-marked"])
    _, comps = f.components(lab)
    reasons = []
    for verts, _ in comps:
        verdict = is_correctly_marked(lab, verts, f.marks, f.double)
        if not verdict:
            name = lab.label(lab.sort_vertices(verts)[0])
            reasons += [f"component {name}: {r}" for r in verdict.reasons]
    if reasons:
        return Check.of(reasons)
    if not blueprint_acyclic(_blueprint_from(lab, comps, f.marks, f.double)):
        return Check.of(["blueprint-cyclic"])
    return Check(True)


# ---------------------------------------------------------------------------
# activity of marks


@dataclass(frozen=True)
class MarkReport:
    active: frozenset[int]  # normal marks whose cone edge is active
    passive: frozenset[int]  # normal marks whose cone edge is passive
    has01: bool
    has02: bool
    passive02: bool  # true exactly when a double mark is present
    forest_size: int

    @property
    def passivity(self) -> int:
        return self.forest_size + len(self.passive) + int(self.passive02)

    def passive_edges(self, lab: TriconeLabeling, f: MarkedForest) -> EdgeSet:
        out = set(f.edges) | {lab.cone_edge[v] for v in self.passive}
        if self.passive02:
            out.add(lab.e02)
        return frozenset(out)


def mark_activity(lab: TriconeLabeling, f: MarkedForest, tree: EdgeSet | None = None) -> MarkReport:
    """Classify the marks of ``f``; ``tree`` may supply ``phi1_inv(f)`` if already known."""
    _, comps = f.components(lab)
    active, passive = set(), set()
    for verts, _ in comps:
        cm = f.marks & verts
        deg = component_degree(cm, f.double if f.double in verts else None)
        smallest = lab.sort_vertices(verts)[0]
        for v in cm:
            if lab.is_special(v):
                continue
            if deg == 1 and v == smallest:
                active.add(v)
            else:
                passive.add(v)
    if tree is None:
        tree = phi1_inv(lab, f, check=False)
    return MarkReport(
        active=frozenset(active),
        passive=frozenset(passive),
        has01=lab.e01 in tree,
        has02=lab.e02 in tree,
        passive02=f.double is not None,
        forest_size=len(f.edges),
    )


def is_maximal(lab: TriconeLabeling, f: MarkedForest) -> bool:
    """All normal marks passive and a spanning blueprint: every tree edge is passive."""
    rep = mark_activity(lab, f)
    return not rep.active and blueprint_spanning(blueprint_of(lab, f))


# ---------------------------------------------------------------------------
# constructive purity


@dataclass(frozen=True)
class AugmentResult:
    forest: MarkedForest
    case: str


def augment_step(lab: TriconeLabeling, f: MarkedForest) -> MarkedForest:
    return augment_step_traced(lab, f).forest


def augment_step_traced(
    lab: TriconeLabeling, f: MarkedForest, *, check: bool = True, tree: EdgeSet | None = None
) -> AugmentResult:
    """One step of the purity construction; see the case ladder below.

    Every candidate is checked to be a 3-weighted forest whose monomial is
    the old monomial times one variable, so the result is valid whichever
    rung produced it.  ``case`` names the rung that fired.  ``tree`` may
    pass in ``phi1_inv(f)`` when the caller already has it.
    """
    from pureoseq import weighted as W

    if check:
        verdict = is_trirooted(lab, f)
        if not verdict:
            raise NotTrirootedError("; ".join(verdict.reasons))
    if tree is None:
        tree = phi1_inv(lab, f, check=False)
    rep = mark_activity(lab, f, tree)
    bp = blueprint_of(lab, f)
    if not rep.active and blueprint_spanning(bp):
        raise MaximalError("every edge of the corresponding tree is already passive")

    mono = W.phi2(lab, f, check=False)

    def accept(cand: "W.Monomial") -> MarkedForest | None:
        # the 3-weighted check already confirms that the preimage is trirooted
        ok, pre = W.checked_preimage(lab, cand)
        if not ok:
            return None
        return pre if W.phi2(lab, pre, check=False) == cand else None

    def first(case: str, edges) -> AugmentResult | None:
        for e in edges:
            pre = accept(mono.times(e))
            if pre is not None:
                return AugmentResult(pre, case)
        return None

    adj, comps = f.components(lab)

    # (1) an active normal mark: grow its component by one edge or one power
    if rep.active:
        v = max(rep.active, key=lab.vertex_rank.__getitem__)
        verts, es = next(c for c in comps if v in c[0])
        if not es:
            cands = lab.sort_edges(e for _, e in lab.red_adj[v])
            res = first("active-singleton", reversed(cands))
        else:
            res = first("active-component", reversed(lab.sort_edges(es)))
        if res is not None:
            return res

    # (2) 01 in the tree and a 1-2 path avoiding it: swap 01 for 02
    if rep.has01 and (1, 2) in bp:
        swapped = (tree - {lab.e01}) | {lab.e02}
        if is_spanning_tree(lab.graph, swapped):
            pre = phi1(lab, swapped)
            cand = W.phi2(lab, pre)
            if cand.degree == mono.degree + 1 and mono.divides(cand):
                return AugmentResult(pre, "swap-01-02")

    # (3) remaining 01 cases, then an active 02: the guided ladder
    if rep.has01:
        t, label = 1, "01"
    elif rep.has02 and not rep.passive02:
        t, label = 2, "02"
    else:  # pragma: no cover - excluded by is_maximal
        raise MaximalError("no active edge left")
    for case, edges in _guided_candidates(lab, f, mono, adj, comps, t):
        res = first(f"{label}-{case}", edges)
        if res is not None:
            return res
    res = first(f"{label}-scan", lab.red_edges)
    if res is not None:
        return res
    raise MaximalError("no augmenting edge found")  # would refute purity


def _guided_candidates(lab, f, mono, adj, comps, t):
    """Candidate edges for the 01 (t=1) or 02 (t=2) rungs, cheapest guess first."""
    vtype = lab.vtype
    special_t = lab.v1 if t == 1 else lab.v2
    weights = mono.as_dict()

    # (i) a component whose only mark has type t but which holds another type
    for verts, es in comps:
        cm = f.marks & verts
        if component_degree(cm, f.double if f.double in verts else None) != 1:
            continue
        (mark,) = cm
        if vtype[mark] != t or all(vtype[x] == t for x in verts):
            continue
        surplus = [e for e in es if weights.get(e, 0) >= 2]
        foreign = [x for x in verts if vtype[x] != t]
        cands = []
        if surplus:
            fe = surplus[0]
            a, b = lab.graph.edges[fe]
            if vtype[a] != t or vtype[b] != t:
                cands.append(fe)
            anchor = a
        else:
            anchor = mark
        # nearest foreign vertex to the anchor, and the first edge from it
        best = min(foreign, key=lambda x: (len(tree_path(adj, x, anchor)[1]), lab.vertex_rank[x]))
        _, pe = tree_path(adj, best, anchor)
        if pe:
            cands.append(pe[0])
        yield "spread", cands

    # (ii) a component without a type-t mark that contains a type-t vertex
    for verts, es in comps:
        cm = f.marks & verts
        types = mark_types(lab, cm, f.double if f.double in verts else None)
        if t in types or special_t in verts:
            continue
        holders = lab.sort_vertices(x for x in verts if vtype[x] == t)
        if holders:
            yield "mark", [e for x in holders for _, e in adj[x]]

    # (iii) the replacing edge of 01 / 02: join an all-type-t component to one without type t
    pure_t = [verts for verts, _ in comps if all(vtype[x] == t for x in verts)]
    free_t = [verts for verts, _ in comps if all(vtype[x] != t for x in verts)]
    merge = []
    for e in lab.red_edges:
        if e in weights:
            continue
        a, b = lab.graph.edges[e]
        for p in pure_t:
            for q in free_t:
                if (a in p and b in q) or (a in q and b in p):
                    merge.append(e)
    yield "merge", merge


# ---------------------------------------------------------------------------
# brute-force enumeration (small reduced graphs only)


def _mark_options(lab: TriconeLabeling, verts: frozenset[int]) -> list[tuple[frozenset[int], int | None]]:
    verts_sorted = lab.sort_vertices(verts)
    opts = []
    for k in (1, 2, 3):
        for chosen in combinations(verts_sorted, k):
            cm = frozenset(chosen)
            if is_correctly_marked(lab, verts, cm, None):
                opts.append((cm, None))
            for d in chosen:
                if lab.vtype[d] == 2 and is_correctly_marked(lab, verts, cm, d):
                    opts.append((cm, d))
    return opts


def enumerate_forests(lab: TriconeLabeling) -> Iterator[frozenset[int]]:
    red = lab.red_edges
    g = lab.graph

    def rec(i: int, chosen: list[int], ds_parent: list[int]):
        if i == len(red):
            yield frozenset(chosen)
            return
        yield from rec(i + 1, chosen, ds_parent)
        e = red[i]
        u, v = g.edges[e]
        ru, rv = _find(ds_parent, u), _find(ds_parent, v)
        if ru != rv:
            nxt = list(ds_parent)
            nxt[rv] = ru
            chosen.append(e)
            yield from rec(i + 1, chosen, nxt)
            chosen.pop()

    yield from rec(0, [], list(range(g.n)))


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        x = parent[x]
    return x


def enumerate_trirooted(lab: TriconeLabeling, max_edges: int = 12) -> Iterator[MarkedForest]:
    """All trirooted forests of ``g_red`` by exhaustive search."""
    if len(lab.red_edges) > max_edges:
        raise ValueError(f"g_red has more than {max_edges} edges")
    for es in enumerate_forests(lab):
        adj = adjacency(lab.graph, lab.red_vertices, es)
        comps = components(adj)
        per_comp = [_mark_options(lab, verts) for verts, _ in comps]
        for combo in product(*per_comp):
            marks = frozenset().union(*(cm for cm, _ in combo))
            doubles = [d for _, d in combo if d is not None]
            if len(doubles) > 1:
                continue
            double = doubles[0] if doubles else None
            if blueprint_acyclic(_blueprint_from(lab, comps, marks, double)):
                yield MarkedForest(es, marks, double)
