"""Command-line interface: ``pureoseq <command> GRAPH [options]``.

Exit status is 0 on success, 2 when a verification or cross-check fails,
and 1 on usage, input or enumeration-cap errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from pureoseq.activity import EdgeOrder, h_vector
from pureoseq.errors import EnumerationLimitError, PureOSeqError
from pureoseq.graph_core import (
    DEFAULT_CAP,
    Graph,
    matrix_tree_count,
    parse_graph,
    reduce_to_core,
    resolve_edge,
    spanning_trees,
)
from pureoseq.marked import MarkedForest, blueprint_of, mark_activity, phi1, phi1_inv, render_blueprint
from pureoseq.multicomplex import image_of, resolve_triple, verify_stanley
from pureoseq.tricone import TriconeLabeling, build_labeling, find_special_triples
from pureoseq.weighted import Monomial, is_3weighted, phi2, phi2_inv

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# DOT export


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(lab: TriconeLabeling, obj: MarkedForest | Monomial, name: str = "G") -> str:
    """Graphviz text for a marked or a weighted forest of ``g_red``.

    Marked vertices are hollow circles and a double mark a double circle.
    An edge of weight ``k`` is drawn as ``k`` parallel strokes.
    """
    lines = [f"graph {_q(name)} {{", "  node [shape=circle, style=filled, fillcolor=black, fontcolor=white];"]
    if isinstance(obj, MarkedForest):
        weights = {e: 1 for e in obj.edges}
        marks, double = obj.marks, obj.double
    else:
        weights = obj.as_dict()
        marks, double = frozenset(), None
    for v in lab.red_vertices:
        attrs = []
        if v == double:
            attrs = ["shape=doublecircle", "style=solid", "fontcolor=black"]
        elif v in marks:
            attrs = ["style=solid", "fontcolor=black"]
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_q(lab.label(v))}{suffix};")
    for e in lab.sort_edges(weights):
        u, v = lab.ends(e)
        k = weights[e]
        color = ":invis:".join(["black"] * k)
        lines.append(f'  {_q(lab.label(u))} -- {_q(lab.label(v))} [multiplicity={k}, color="{color}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# helpers


def _load(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _triple_arg(s: str | None) -> list[str] | None:
    if s is None:
        return None
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != 3 or not all(parts):
        raise UsageError("--special expects three comma-separated vertex labels")
    return parts


def _labeling(core: Graph, special: list[str] | None) -> TriconeLabeling:
    if special is not None:
        return build_labeling(core, resolve_triple(core, special))
    triples = find_special_triples(core)
    if not triples:
        raise PureOSeqError("the reduced graph is not triconed")
    return build_labeling(core, triples[0])


def _tuple(xs) -> str:
    return "(" + ",".join(str(x) for x in xs) + ")"


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print("\n".join(text_lines))


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    g = _load(args.graph)
    core, log = reduce_to_core(g)
    triples = find_special_triples(core)
    payload = {
        "triconed": bool(triples),
        "reduction_steps": len(log),
        "core": {"vertices": core.n, "edges": core.m},
        "candidate_triples": [[core.vertices[v] for v in t] for t in triples],
        "labeling": None,
    }
    lines = [f"triconed: {'yes' if triples else 'no'}", f"reduction steps: {len(log)}"]
    if triples or args.special:
        lab = _labeling(core, _triple_arg(args.special))
        payload["labeling"] = lab.summary()
        s = lab.summary()
        lines += [
            f"candidate triples: {len(triples)}",
            f"special: {','.join(s['special'])}",
            f"vertex order: {' '.join(s['vertex_order'])}",
            f"edge order: {','.join(s['edge_order'])}",
            f"b0: {','.join(s['b0'])}",
            f"g_red edges: {','.join(s['g_red_edges'])}",
        ]
    _emit(args, payload, lines)
    return EXIT_OK if triples else EXIT_FAIL


def cmd_hvector(args) -> int:
    g = _load(args.graph)
    trees = spanning_trees(g, args.cap)
    h = h_vector(g, trees=trees)
    payload = {"h_vector": list(h), "tree_count": len(trees)}
    lines = [_tuple(h)]
    ok = True
    if args.orders:
        rng = random.Random(args.seed)
        others = [h_vector(g, EdgeOrder.shuffled(g.m, rng), trees=trees) for _ in range(args.orders)]
        ok = all(o == h for o in others)
        payload["random_orders"] = {"count": args.orders, "seed": args.seed, "agree": ok}
        lines.append(f"random orders: {args.orders} (seed {args.seed}), {'all agree' if ok else 'MISMATCH'}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_witness(args) -> int:
    g = _load(args.graph)
    core, _ = reduce_to_core(g)
    lab = _labeling(core, _triple_arg(args.special))
    img = image_of(lab, cap=args.cap)
    rows = sorted(
        ((m, b) for b, m in img.pairs),
        key=lambda mb: (mb[0].degree, mb[0].render(lab)),
    )
    payload = {
        "triple": [lab.label(v) for v in lab.special],
        "monomials": [
            {"monomial": m.render(lab), "degree": m.degree, "tree": [lab.edge_name(e) for e in lab.sort_edges(b)]}
            for m, b in rows
        ],
    }
    lines = [f"{m.degree}  {m.render(lab)}  <-  {','.join(lab.edge_name(e) for e in lab.sort_edges(b))}" for m, b in rows]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args.graph)
    rep = verify_stanley(
        g,
        _triple_arg(args.special),
        cap=args.cap,
        constructive=not args.skip_augment,
        timings=args.timings,
    )
    d = rep.to_dict()
    lines = [
        f"triconed: {'yes' if rep.triconed else 'no'}",
        f"triple: {','.join(rep.triple) if rep.triple else '-'}",
        f"trees: {rep.tree_count if rep.tree_count is not None else '-'}",
        f"h-vector: {_tuple(rep.h_vector) if rep.h_vector is not None else '-'}",
        f"o-sequence: {_tuple(rep.o_sequence) if rep.o_sequence is not None else '-'}",
    ]
    for k, v in d["flags"].items():
        lines.append(f"{k}: {'-' if v is None else 'yes' if v else 'no'}")
    if rep.incomplete:
        lines.append("incomplete: yes")
    if rep.message:
        lines.append(f"note: {rep.message}")
    for k, v in rep.counterexamples.items():
        lines.append(f"counterexample[{k}]: {json.dumps(v)}")
    if rep.timings is not None:
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in rep.timings.items()))
    _emit(args, d, lines)
    return EXIT_OK if rep.sequences_equal else EXIT_FAIL


def cmd_map(args) -> int:
    if (args.tree is None) == (args.monomial is None):
        raise UsageError("map needs exactly one of --tree or --monomial")
    g = _load(args.graph)
    core, log = reduce_to_core(g)
    lab = _labeling(core, _triple_arg(args.special))
    origin = {o: c for c, o in enumerate(log.edge_origin)}
    if args.tree is not None:
        names = [x for x in args.tree.split(",") if x.strip()]
        picked = {resolve_edge(g, x) for x in names}
        tree = frozenset(origin[e] for e in picked if e in origin)
        f = phi1(lab, tree)
        m = phi2(lab, f)
    else:
        m = Monomial.parse(lab, args.monomial)
        verdict = is_3weighted(lab, m)
        if not verdict:
            raise PureOSeqError("not a 3-weighted forest: " + "; ".join(verdict.reasons))
        f = phi2_inv(lab, m)
        tree = phi1_inv(lab, f)
    rep = mark_activity(lab, f, tree)
    bp = blueprint_of(lab, f)
    tree_orig = sorted(log.edge_origin[c] for c in tree)
    payload = {
        "tree": [lab.edge_name(e) for e in lab.sort_edges(tree)],
        "tree_input_edges": [g.edge_label(e) for e in tree_orig],
        "passivity": rep.passivity,
        "trirooted": f.describe(lab),
        "blueprint": render_blueprint(bp),
        "active_marks": [lab.label(v) for v in lab.sort_vertices(rep.active)],
        "passive_marks": [lab.label(v) for v in lab.sort_vertices(rep.passive)],
        "weights": {lab.edge_name(e): k for e, k in sorted(m.as_dict().items(), key=lambda ek: lab.edge_order.rank[ek[0]])},
        "monomial": m.render(lab),
        "degree": m.degree,
    }
    desc = f.describe(lab)
    lines = [
        f"tree: {','.join(payload['tree'])}",
        f"forest: {','.join(desc['edges']) or '-'}",
        f"marks: {','.join(desc['marks'])}",
        f"blueprint: {','.join(payload['blueprint']) or '-'}",
        f"passive marks: {','.join(payload['passive_marks']) or '-'}",
        f"monomial: {payload['monomial']}",
        f"degree: {m.degree}",
        f"passivity: {rep.passivity}",
    ]
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        (out / "trirooted.dot").write_text(export_dot(lab, f, "trirooted"))
        (out / "weighted.dot").write_text(export_dot(lab, m, "weighted"))
        lines.append(f"dot: {out / 'trirooted.dot'}, {out / 'weighted.dot'}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load(args.graph)
    trees = spanning_trees(g, args.cap)
    det = matrix_tree_count(g)
    ok = det == len(trees)
    payload = {"enumerated": len(trees), "matrix_tree": det, "agree": ok}
    lines = [f"enumerated: {len(trees)}", f"matrix-tree: {det}", f"agree: {'yes' if ok else 'no'}"]
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pureoseq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, special=True):
        sp.add_argument("graph", help="edge-list file")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="spanning-tree enumeration cap")
        if special:
            sp.add_argument("--special", metavar="A,B,C", help="force the special triple (v0,v1,v2)")

    sp = sub.add_parser("check", help="triconed verdict and labeling summary")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("hvector", help="h-vector by brute-force activity")
    common(sp, special=False)
    sp.add_argument("--orders", type=int, default=0, help="also recompute under K random edge orders")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_hvector)

    sp = sub.add_parser("witness", help="every monomial with the tree it came from")
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("verify", help="full verification report")
    common(sp)
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
    sp.add_argument("--skip-augment", action="store_true", help="skip the constructive purity pass")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("map", help="map one tree (or one monomial) through the bijections")
    common(sp)
    sp.add_argument("--tree", help="comma-separated edges u-v, with #k for parallel copies")
    sp.add_argument("--monomial", help='monomial such as "x[3-6]^2 * x[9-A]"')
    sp.add_argument("--dot", metavar="DIR", help="write Graphviz files into DIR")
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("oracle", help="tree count against the matrix-tree determinant")
    common(sp, special=False)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except EnumerationLimitError as exc:
        print(f"pureoseq: enumeration cap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"pureoseq: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PureOSeqError, ValueError) as exc:
        print(f"pureoseq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
