"""The image of the spanning-tree map and the pure O-sequence verdicts."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from pureoseq.activity import h_vector, passive_set, trim
from pureoseq.errors import EnumerationLimitError, MaximalError, PureOSeqError
from pureoseq.graph_core import DEFAULT_CAP, EdgeSet, Graph, ReductionLog, reduce_to_core, spanning_trees
from pureoseq.marked import augment_step_traced, phi1
from pureoseq.tricone import TriconeLabeling, build_labeling, find_special_triples, validate_triple
from pureoseq.weighted import Monomial, phi2, phi2_inv


@dataclass
class Image:
    """Monomials of every tree together with where each one came from."""

    provenance: dict[Monomial, list[EdgeSet]] = field(default_factory=dict)
    pairs: list[tuple[EdgeSet, Monomial]] = field(default_factory=list)

    @property
    def monomials(self) -> set[Monomial]:
        return set(self.provenance)

    def collisions(self) -> list[tuple[Monomial, list[EdgeSet]]]:
        return [(m, ts) for m, ts in self.provenance.items() if len(ts) > 1]


def phi(lab: TriconeLabeling, b) -> Monomial:
    return phi2(lab, phi1(lab, b), check=False)


def image_of(lab: TriconeLabeling, trees: Iterable[EdgeSet] | None = None, *, cap: int = DEFAULT_CAP) -> Image:
    if trees is None:
        trees = spanning_trees(lab.graph, cap)
    img = Image()
    for b in trees:
        m = phi(lab, b)
        img.pairs.append((b, m))
        img.provenance.setdefault(m, []).append(b)
    return img


def divisor_witness(s: set[Monomial]) -> tuple[Monomial, Monomial] | None:
    """A pair ``(m, m / x_e)`` with the quotient missing from ``s``, if any."""
    for m in sorted(s, key=lambda x: (x.degree, x.exps)):
        for e in sorted(m.support):
            q = m.divide(e)
            if q not in s:
                return m, q
    return None


def is_divisor_closed(s: set[Monomial]) -> tuple[bool, tuple[Monomial, Monomial] | None]:
    w = divisor_witness(s)
    return w is None, w


def maximal_monomials(s: set[Monomial], *, closed: bool | None = None) -> set[Monomial]:
    s = set(s)
    if closed is None:
        closed = divisor_witness(s) is None
    if closed:
        # In an order ideal a proper multiple exists iff a one-variable multiple does.
        universe = sorted({e for m in s for e in m.support})
        return {m for m in s if not any(m.times(e) in s for e in universe)}
    by_degree = sorted(s, key=lambda x: x.degree)
    return {m for m in s if not any(n.degree > m.degree and m.divides(n) for n in by_degree)}


def is_pure(s: set[Monomial]) -> bool:
    return len({m.degree for m in maximal_monomials(s)}) <= 1


def o_sequence(s: Iterable[Monomial]) -> tuple[int, ...]:
    counts = Counter(m.degree for m in s)
    if not counts:
        return ()
    return tuple(counts.get(d, 0) for d in range(max(counts) + 1))


# ---------------------------------------------------------------------------
# the report


@dataclass
class VerificationReport:
    graph: dict
    reduction: list[dict]
    triconed: bool
    triple: list[str] | None
    candidate_triples: int
    h_vector: list[int] | None
    o_sequence: list[int] | None
    tree_count: int | None
    injective: bool = False
    divisor_closed: bool = False
    pure: bool = False
    degree_match: bool = False
    augment_ok: bool | None = None
    sequences_equal: bool = False
    incomplete: bool = False
    maximal: list[str] = field(default_factory=list)
    counterexamples: dict = field(default_factory=dict)
    augment_cases: dict = field(default_factory=dict)
    message: str | None = None
    timings: dict | None = None

    @property
    def verified(self) -> bool:
        return self.sequences_equal

    def to_dict(self) -> dict:
        d = {
            "graph": self.graph,
            "reduction": self.reduction,
            "triconed": self.triconed,
            "triple": self.triple,
            "candidate_triples": self.candidate_triples,
            "tree_count": self.tree_count,
            "h_vector": self.h_vector,
            "o_sequence": self.o_sequence,
            "flags": {
                "injective": self.injective,
                "divisor_closed": self.divisor_closed,
                "pure": self.pure,
                "degree_match": self.degree_match,
                "augment_ok": self.augment_ok,
                "sequences_equal": self.sequences_equal,
            },
            "incomplete": self.incomplete,
            "maximal_monomials": self.maximal,
            "augment_cases": self.augment_cases,
            "counterexamples": self.counterexamples,
            "message": self.message,
        }
        if self.timings is not None:
            d["timings"] = self.timings
        return d


def _reduction_rows(log: ReductionLog, g: Graph) -> list[dict]:
    rows = []
    for step in log.steps:
        row = {"kind": step.kind, "edge": g.edge_label(step.edge)}
        if step.merged is not None:
            row["merged"] = list(step.merged)
        rows.append(row)
    return rows


def resolve_triple(core: Graph, triple) -> tuple[int, int, int]:
    ids = []
    for tok in triple:
        tok = str(tok)
        if tok not in core.index:
            raise PureOSeqError(f"vertex {tok!r} is not in the reduced graph")
        ids.append(core.index[tok])
    t = tuple(ids)
    validate_triple(core, t)
    return t


def verify_stanley(
    g: Graph,
    triple=None,
    *,
    cap: int = DEFAULT_CAP,
    constructive: bool = True,
    timings: bool = False,
) -> VerificationReport:
    """Run the whole pipeline on ``g`` and collect every verdict.

    ``triple`` holds vertex labels.  ``constructive`` additionally runs one
    augmentation step from every non-maximal image monomial.
    """
    clock: dict[str, float] = {}
    t0 = time.perf_counter()

    def lap(name: str) -> None:
        nonlocal t0
        now = time.perf_counter()
        clock[name] = round(now - t0, 6)
        t0 = now

    core, log = reduce_to_core(g)
    report = VerificationReport(
        graph={"vertices": g.n, "edges": g.m, "core_vertices": core.n, "core_edges": core.m},
        reduction=_reduction_rows(log, g),
        triconed=False,
        triple=None,
        candidate_triples=0,
        h_vector=None,
        o_sequence=None,
        tree_count=None,
    )
    if timings:
        report.timings = clock
    try:
        trees = spanning_trees(core, cap)
    except EnumerationLimitError as exc:
        report.incomplete = True
        report.message = str(exc)
        return report
    lap("enumerate")
    report.tree_count = len(trees)

    if triple is None:
        triples = find_special_triples(core)
        report.candidate_triples = len(triples)
        if not triples:
            report.h_vector = list(h_vector(core, trees=trees))
            report.message = "the reduced graph is not triconed"
            return report
        chosen = triples[0]
    else:
        chosen = resolve_triple(core, triple)
        report.candidate_triples = len(find_special_triples(core))
    lab = build_labeling(core, chosen)
    report.triconed = True
    report.triple = [core.vertices[v] for v in chosen]
    lap("label")

    passivity = [len(passive_set(core, lab.edge_order, b, check=False)) for b in trees]
    counts = [0] * core.n
    for p in passivity:
        counts[p] += 1
    report.h_vector = counts
    lap("h_vector")

    img = image_of(lab, trees)
    mons = img.monomials
    lap("image")

    report.injective = len(mons) == len(trees)
    if not report.injective:
        m, ts = img.collisions()[0]
        report.counterexamples["injective"] = {
            "monomial": m.render(lab),
            "trees": [[lab.edge_name(e) for e in lab.sort_edges(t)] for t in ts[:2]],
        }

    bad = [(b, m, p) for (b, m), p in zip(img.pairs, passivity) if m.degree != p]
    report.degree_match = not bad
    if bad:
        b, m, p = bad[0]
        report.counterexamples["degree_match"] = {
            "tree": [lab.edge_name(e) for e in lab.sort_edges(b)],
            "monomial": m.render(lab),
            "passivity": p,
        }

    closed, witness = is_divisor_closed(mons)
    report.divisor_closed = closed
    if witness is not None:
        report.counterexamples["divisor_closed"] = {
            "monomial": witness[0].render(lab),
            "missing_divisor": witness[1].render(lab),
        }
    maxi = maximal_monomials(mons, closed=closed)
    report.pure = len({m.degree for m in maxi}) <= 1
    report.maximal = sorted(m.render(lab) for m in maxi)
    if not report.pure:
        degs = sorted({m.degree for m in maxi})
        low = min((m for m in maxi if m.degree == degs[0]), key=lambda m: m.exps)
        report.counterexamples["pure"] = {"maximal_degrees": degs, "low_maximal": low.render(lab)}
    o = list(o_sequence(mons))
    report.o_sequence = o
    lap("checks")

    if constructive:
        trees_of = {m: ts[0] for m, ts in img.provenance.items()}
        report.augment_ok, report.augment_cases, fail = constructive_purity(lab, mons, maxi, trees_of)
        if fail is not None:
            report.counterexamples["augment"] = fail
        lap("augment")

    padded = o + [0] * (len(counts) - len(o))
    report.sequences_equal = (
        list(trim(counts)) == list(trim(padded))
        and report.injective
        and report.divisor_closed
        and report.pure
        and report.degree_match
        and report.augment_ok is not False
    )
    return report


def constructive_purity(lab: TriconeLabeling, mons: set[Monomial], maximal: set[Monomial], trees_of=None):
    """One augmentation step from every non-maximal monomial must stay in the image.

    ``trees_of`` optionally maps each monomial to a spanning tree it came
    from, which saves reconstructing the trirooted forest.
    """
    cases: Counter[str] = Counter()
    for m in sorted(mons, key=lambda x: (x.degree, x.exps)):
        if m in maximal:
            continue
        if trees_of is not None:
            tree = trees_of[m]
            f = phi1(lab, tree)
        else:
            f = phi2_inv(lab, m, check=False)
            tree = None
        try:
            res = augment_step_traced(lab, f, check=False, tree=tree)
        except MaximalError as exc:
            return False, dict(sorted(cases.items())), {"monomial": m.render(lab), "error": str(exc)}
        n = phi2(lab, res.forest, check=False)
        if n not in mons or n.degree != m.degree + 1 or not m.divides(n):
            return False, dict(sorted(cases.items())), {"monomial": m.render(lab), "result": n.render(lab)}
        cases[res.case] += 1
    return True, dict(sorted(cases.items())), None
