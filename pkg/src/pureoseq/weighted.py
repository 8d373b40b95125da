"""Edge-weighted forests of the reduced graph and their monomials.

A weighted forest is stored as a :class:`Monomial`: the exponent of the
variable of an edge is that edge's weight, and the support is the forest.
``phi2`` turns the marks of a trirooted forest into extra weight on its
edges; ``phi2_inv`` recovers the marks from the weights.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterator, Mapping

from pureoseq.errors import Check, MonomialError, NotTrirootedError, NotWeightedError
from pureoseq.forest import adjacency, components, is_forest, leaves, steiner, tree_path
from pureoseq.marked import (
    Blueprint,
    MarkedForest,
    blueprint_acyclic,
    blueprint_of,
    is_correctly_marked,
    is_trirooted,
)
from pureoseq.tricone import TriconeLabeling


@dataclass(frozen=True)
class Monomial:
    """Exponent vector keyed by base-graph edge index; all exponents positive."""

    exps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for e, k in self.exps:
            if k < 1:
                raise MonomialError(f"exponent of edge {e} must be positive")

    @classmethod
    def from_dict(cls, weights: Mapping[int, int]) -> "Monomial":
        return cls(tuple(sorted((e, k) for e, k in weights.items() if k)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    @cached_property
    def degree(self) -> int:
        return sum(k for _, k in self.exps)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.exps)

    def __getitem__(self, e: int) -> int:
        return self.as_dict().get(e, 0)

    def times(self, e: int) -> "Monomial":
        out = []
        done = False
        for f, k in self.exps:
            if f == e:
                out.append((f, k + 1))
                done = True
            else:
                if not done and f > e:
                    out.append((e, 1))
                    done = True
                out.append((f, k))
        if not done:
            out.append((e, 1))
        return Monomial(tuple(out))

    def divide(self, e: int) -> "Monomial":
        out = []
        found = False
        for f, k in self.exps:
            if f == e:
                found = True
                if k > 1:
                    out.append((f, k - 1))
            else:
                out.append((f, k))
        if not found:
            raise MonomialError(f"edge {e} is not in the support")
        return Monomial(tuple(out))

    def divides(self, other: "Monomial") -> bool:
        o = other.as_dict()
        return all(o.get(e, 0) >= k for e, k in self.exps)

    def render(self, lab: TriconeLabeling) -> str:
        if not self.exps:
            return "1"
        w = self.as_dict()
        parts = []
        for e in lab.sort_edges(w):
            k = w[e]
            parts.append(f"x[{lab.edge_name(e)}]" + (f"^{k}" if k > 1 else ""))
        return " * ".join(parts)

    @classmethod
    def parse(cls, lab: TriconeLabeling, text: str) -> "Monomial":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        w: dict[int, int] = {}
        for factor in re.split(r"\s*\*\s*", text):
            m = re.fullmatch(r"x\[([^\]]+)\](?:\^(\d+))?", factor)
            if not m:
                raise MonomialError(f"cannot read factor {factor!r}")
            e = lab.edge_by_name(m.group(1))
            w[e] = w.get(e, 0) + int(m.group(2) or 1)
        return cls.from_dict(w)


WeightedForest = Monomial


def divide(m: Monomial, e: int) -> Monomial:
    return m.divide(e)


# ---------------------------------------------------------------------------
# components, objects and the correctness clauses


@dataclass(frozen=True)
class WeightedComponent:
    vertices: frozenset[int]
    edges: frozenset[int]
    weights: dict[int, int]
    adj: dict


def weighted_components(lab: TriconeLabeling, m: Monomial) -> list[WeightedComponent]:
    adj, comps = lab.forest_structure(m.support)
    w = m.as_dict()
    return [WeightedComponent(vs, es, {e: w[e] for e in es}, adj) for vs, es in comps]


def excess_weight(lab: TriconeLabeling, comp: WeightedComponent) -> int:
    return (
        int(lab.v1 in comp.vertices)
        + int(lab.v2 in comp.vertices)
        + sum(k - 1 for k in comp.weights.values())
    )


# An object is ("v", vertex) or ("e", edge, copy).
Obj = tuple


def weighted_objects(lab: TriconeLabeling, comp: WeightedComponent) -> list[Obj]:
    objs: list[Obj] = [("v", s) for s in (lab.v1, lab.v2) if s in comp.vertices]
    for e in lab.sort_edges(comp.weights):
        objs += [("e", e, i) for i in range(comp.weights[e] - 1)]
    return objs


def _obj_vertices(lab: TriconeLabeling, o: Obj) -> set[int]:
    return {o[1]} if o[0] == "v" else set(lab.graph.edges[o[1]])


def spanning_path_ends(lab: TriconeLabeling, comp: WeightedComponent, objs) -> tuple[int, int]:
    """Endpoints of the shortest path containing every object in ``objs``."""
    if len(objs) == 2 and objs[0][0] == objs[1][0] == "e" and objs[0][1] == objs[1][1]:
        return lab.ends(objs[0][1])
    terminals = set().union(*(_obj_vertices(lab, o) for o in objs))
    verts, es = steiner(comp.adj, terminals)
    ends = leaves(comp.adj, verts, es)
    if len(ends) == 1:
        return ends[0], ends[0]
    if len(ends) != 2:
        raise NotWeightedError("objects do not lie on a common path")
    a, b = lab.sort_vertices(ends)
    return a, b


def compatible(lab: TriconeLabeling, comp: WeightedComponent, o1: Obj, o2: Obj) -> bool:
    a, b = spanning_path_ends(lab, comp, [o1, o2])
    return lab.vtype[a] != lab.vtype[b]


def is_correctly_weighted(lab: TriconeLabeling, comp: WeightedComponent) -> Check:
    reasons = []
    excess = excess_weight(lab, comp)
    if excess > 3:
        reasons.append("C1:excess>3")
    if excess >= 2:
        objs = weighted_objects(lab, comp)
        for o1, o2 in combinations(objs, 2):
            if not compatible(lab, comp, o1, o2):
                reasons.append("C2:incompatible")
                break
    h = lab.height
    caps = {e: h[lab.graph.edges[e][0]] + h[lab.graph.edges[e][1]] for e in comp.weights}
    if any(k > caps[e] for e, k in comp.weights.items()):
        reasons.append("C3:over-height")
    maximal = [e for e, k in comp.weights.items() if k == caps[e]]
    if any(k > 2 and any(f != e for f in maximal) for e, k in comp.weights.items()):
        reasons.append("C4:second-heavy-edge")
    return Check.of(reasons)


# ---------------------------------------------------------------------------
# phi2


def find_sandwich_edge(lab: TriconeLabeling, adj, v: int, w: int, z: int) -> int:
    """First edge on the walk from ``z`` to ``v`` whose ends suit ``w`` and ``v``.

    For an edge ``(p, q)`` with ``q`` nearer to ``v`` the requirement is
    ``type(q) != type(w)`` and ``type(p) != type(v)``.
    """
    t = lab.vtype
    if t[v] >= t[w]:
        raise NotTrirootedError("sandwich endpoints must satisfy type(v) < type(w)")
    verts, es = tree_path(adj, z, v)
    for i, e in enumerate(es):
        p, q = verts[i], verts[i + 1]
        if t[q] != t[w] and t[p] != t[v]:
            return e
    raise NotTrirootedError("no edge compatible with the sandwich path")


def phi2(lab: TriconeLabeling, f: MarkedForest, *, check: bool = True) -> Monomial:
    if check:
        verdict = is_trirooted(lab, f)
        if not verdict:
            raise NotTrirootedError("; ".join(verdict.reasons))
    adj, comps = f.components(lab)
    weights = {e: 1 for e in f.edges}
    rank = lab.vertex_rank.__getitem__
    t = lab.vtype

    def empower(mark: int, e: int, extra: bool = False) -> None:
        if extra or not lab.is_special(mark):
            weights[e] += 1

    for verts, es in comps:
        cm = sorted(f.marks & verts, key=rank)
        d = f.double if f.double in verts else None
        if d is None and len(cm) == 1:
            (v,) = cm
            s = min(verts, key=rank)
            if v != s:
                empower(v, tree_path(adj, v, s)[1][0])
        elif d is None and len(cm) == 2:
            v, w = cm
            _, pe = tree_path(adj, v, w)
            empower(v, pe[0])
            empower(w, pe[-1])
        elif d is None and len(cm) == 3:
            sv, se = steiner(adj, cm)
            lv = leaves(adj, sv, se)
            if all(x in lv for x in cm):
                for x in cm:
                    (e,) = [e for _, e in adj[x] if e in se]
                    empower(x, e)
            else:
                z = next(x for x in cm if x not in lv)
                v, w = sorted((x for x in cm if x != z), key=t.__getitem__)
                _, pe = tree_path(adj, v, w)
                empower(v, pe[0])
                empower(w, pe[-1])
                empower(z, find_sandwich_edge(lab, adj, v, w, z))
        elif d is not None and len(cm) == 2:
            w = d
            (v,) = [x for x in cm if x != d]
            _, pe = tree_path(adj, v, w)
            empower(v, pe[0])
            empower(w, pe[-1])
            empower(w, find_sandwich_edge(lab, adj, v, w, w), extra=True)
        else:
            raise NotTrirootedError("component is not correctly marked")
    return Monomial.from_dict(weights)


# ---------------------------------------------------------------------------
# inverse


def _path_position(lab, pos: dict[int, int], o: Obj) -> float:
    if o[0] == "v":
        return pos[o[1]]
    a, b = lab.graph.edges[o[1]]
    return min(pos[a], pos[b]) + 0.5


def _invert_component(lab: TriconeLabeling, comp: WeightedComponent) -> tuple[set[int], int | None]:
    rank = lab.vertex_rank.__getitem__
    t = lab.vtype
    objs = weighted_objects(lab, comp)
    c = len(objs)
    adj = comp.adj
    smallest = min(comp.vertices, key=rank)
    if c == 0:
        return {smallest}, None
    if c == 1:
        o = objs[0]
        if o[0] == "v":
            return {o[1]}, None
        a, b = lab.graph.edges[o[1]]
        da = len(tree_path(adj, smallest, a)[1])
        db = len(tree_path(adj, smallest, b)[1])
        return {a if da > db else b}, None
    if c == 2:
        return set(spanning_path_ends(lab, comp, objs)), None
    if c > 3:
        raise NotWeightedError("more than three weighted objects")
    terminals = set().union(*(_obj_vertices(lab, o) for o in objs))
    sv, se = steiner(adj, terminals)
    lv = leaves(adj, sv, se)
    if len(lv) == 3:
        return set(lv), None
    a, b = sorted(spanning_path_ends(lab, comp, objs), key=lambda x: (t[x], rank(x)))
    if t[a] == t[b]:
        raise NotWeightedError("sandwich path endpoints share a type")
    pv, _ = tree_path(adj, a, b)
    pos = {x: i for i, x in enumerate(pv)}
    middle = sorted(objs, key=lambda o: _path_position(lab, pos, o))[1]
    if middle[0] == "v":
        return {a, middle[1], b}, None
    x, y = lab.graph.edges[middle[1]]
    start = max(pos[x], pos[y])
    for x in pv[start:-1]:
        if t[x] not in (t[a], t[b]):
            return {a, x, b}, None
    if t[b] != 2:
        raise NotWeightedError("degenerate sandwich path ends at a vertex that is not of type 2")
    return {a, b}, b


def phi2_inv(lab: TriconeLabeling, m: Monomial, *, check: bool = True) -> MarkedForest:
    if check:
        for comp in _components_checked(lab, m):
            verdict = is_correctly_weighted(lab, comp)
            if not verdict:
                raise NotWeightedError("; ".join(verdict.reasons))
    marks: set[int] = set()
    double = None
    for comp in weighted_components(lab, m):
        cm, d = _invert_component(lab, comp)
        marks |= cm
        if d is not None:
            if double is not None:
                raise NotWeightedError("two doubly marked vertices")
            double = d
    return MarkedForest(m.support, frozenset(marks), double)


def _components_checked(lab: TriconeLabeling, m: Monomial) -> list[WeightedComponent]:
    if not m.support <= set(lab.red_edges):
        raise NotWeightedError("support leaves g_red")
    if not is_forest(lab.graph, m.support):
        raise NotWeightedError("support is not a forest")
    return weighted_components(lab, m)


def weighted_blueprint(lab: TriconeLabeling, m: Monomial) -> Blueprint:
    return blueprint_of(lab, phi2_inv(lab, m))


def is_3weighted(lab: TriconeLabeling, m: Monomial) -> Check:
    return checked_preimage(lab, m)[0]


def checked_preimage(lab: TriconeLabeling, m: Monomial) -> tuple[Check, MarkedForest | None]:
    """The 3-weighted verdict for ``m`` together with its preimage when it passes."""
    try:
        comps = _components_checked(lab, m)
    except NotWeightedError as exc:
        return Check.of([str(exc)]), None
    reasons = []
    for comp in comps:
        verdict = is_correctly_weighted(lab, comp)
        if not verdict:
            name = lab.label(lab.sort_vertices(comp.vertices)[0])
            reasons += [f"component {name}: {r}" for r in verdict.reasons]
    if reasons:
        return Check.of(reasons), None
    try:
        pre = phi2_inv(lab, m, check=False)
    except NotWeightedError as exc:
        return Check.of([f"preimage: {exc}"]), None
    _, pcomps = pre.components(lab)
    for verts, _ in pcomps:
        if not is_correctly_marked(lab, verts, pre.marks, pre.double):
            return Check.of(["preimage-not-correctly-marked"]), None
    if not blueprint_acyclic(blueprint_of(lab, pre)):
        return Check.of(["blueprint-cyclic"]), None
    return Check(True), pre


# ---------------------------------------------------------------------------
# brute-force enumeration


def _surplus_splits(k: int, total: int) -> Iterator[tuple[int, ...]]:
    """All ways to hand out at most ``total`` surplus units to ``k`` edges."""
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _surplus_splits(k - 1, total - first):
            yield (first, *rest)


def enumerate_3weighted(lab: TriconeLabeling, max_edges: int = 12) -> Iterator[Monomial]:
    """Every 3-weighted forest, by trying all forests and every weighting of excess at most 3."""
    from pureoseq.marked import enumerate_forests

    if len(lab.red_edges) > max_edges:
        raise ValueError(f"g_red has more than {max_edges} edges")
    for es in enumerate_forests(lab):
        adj = adjacency(lab.graph, lab.red_vertices, es)
        per_comp = []
        for verts, ces in components(adj):
            ces = sorted(ces)
            budget = 3 - int(lab.v1 in verts) - int(lab.v2 in verts)
            per_comp.append([tuple(zip(ces, (1 + s for s in split))) for split in _surplus_splits(len(ces), budget)])
        for combo in product(*per_comp):
            m = Monomial(tuple(sorted(x for part in combo for x in part)))
            if is_3weighted(lab, m):
                yield m
