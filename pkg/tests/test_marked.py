import pytest

from conftest import edges, verts
from corpus import exhaustive_corpus, random_corpus
from pureoseq.activity import passive_set
from pureoseq.errors import MaximalError, NotASpanningTreeError, NotTrirootedError
from pureoseq.graph_core import spanning_trees
from pureoseq.marked import (
    MarkedForest,
    augment_step,
    augment_step_traced,
    blueprint_of,
    enumerate_trirooted,
    is_correctly_marked,
    is_maximal,
    is_trirooted,
    mark_activity,
    phi1,
    phi1_inv,
    render_blueprint,
)
from pureoseq.tricone import build_labeling, find_special_triples
from pureoseq.weighted import phi2

TRIEX = "0-2,1-5,1-6,2-8,2-A,3-6,3-8,4-7,7-8,9-A"
PURITY = "0-1,1-5,1-6,2-8,2-9,3-6,3-8,4-7,7-8,9-A"


def forest(g, lab, es, marks, double=None):
    return MarkedForest(edges(g, es) if es else frozenset(), verts(g, marks), None if double is None else g.index[double])


def test_phi1_g11_example(g11, glab):
    f = phi1(glab, edges(g11, TRIEX))
    assert f.edges == edges(g11, "3-6,3-8,4-7,7-8,9-A")
    assert f.marks == verts(g11, "12568A")
    assert f.double == g11.index["8"]
    assert f.describe(glab)["marks"] == ["1", "2", "5", "6", "8*", "A"]


def test_phi1_of_b0(glab, g11):
    f = phi1(glab, glab.b0)
    assert f.edges == frozenset() and f.double is None
    assert f.marks == verts(g11, "123456789A")


def test_phi1_w_example(w, wlab):
    f = phi1(wlab, edges(w, "0-1,0-2,0-3,2-5,4-5"))
    assert f == forest(w, wlab, "4-5", "1235")


def test_phi1_rejects_non_tree(wlab):
    with pytest.raises(NotASpanningTreeError):
        phi1(wlab, {0, 1})


def test_phi1_inv_examples(g11, glab):
    b = edges(g11, TRIEX)
    assert phi1_inv(glab, phi1(glab, b)) == b
    assert phi1_inv(glab, MarkedForest(frozenset(), verts(g11, "123456789A"))) == glab.b0


def test_phi1_inv_w_double_mark(w, wlab):
    f = forest(w, wlab, "4-5", "12345", double="5")
    b = phi1_inv(wlab, f)
    assert phi1(wlab, b) == f
    assert wlab.e02 in b


def test_phi1_round_trip_w(w, wlab):
    trees = spanning_trees(w)
    images = {phi1(wlab, b) for b in trees}
    assert len(images) == 16
    for b in trees:
        f = phi1(wlab, b)
        assert is_trirooted(wlab, f)
        assert phi1_inv(wlab, f) == b


def test_phi1_is_a_bijection_onto_trirooted_forests(w, wlab):
    assert set(enumerate_trirooted(wlab)) == {phi1(wlab, b) for b in spanning_trees(w)}


def test_blueprints(g11, glab, w, wlab):
    assert blueprint_of(glab, phi1(glab, edges(g11, TRIEX))) == ((0, 1), (0, 2))
    assert render_blueprint(blueprint_of(glab, phi1(glab, edges(g11, TRIEX)))) == ["01", "02"]
    assert blueprint_of(glab, phi1(glab, glab.b0)) == ()
    assert blueprint_of(wlab, forest(w, wlab, "3-5", "12345")) == ((0, 2),)


def test_correctly_marked(g11, glab):
    assert is_correctly_marked(glab, verts(g11, "5"), verts(g11, "5"))
    bad = is_correctly_marked(glab, verts(g11, "156"), verts(g11, "5"))
    assert not bad and "special-unmarked:1" in bad.reasons
    assert is_correctly_marked(glab, verts(g11, "34678"), verts(g11, "68"), g11.index["8"])
    assert not is_correctly_marked(glab, verts(g11, "34678"), verts(g11, "67"))


def test_trirooted_rejects_cyclic_blueprints(g11, glab):
    # two components of type {1,2}
    doubled = MarkedForest(edges(g11, "2-5,7-8"), verts(g11, "123456789A"))
    assert not is_trirooted(glab, doubled)
    # components of types {0,1}, {1,2}, {0,2}
    triangle = MarkedForest(edges(g11, "3-6,2-5,4-9"), verts(g11, "123456789A"))
    verdict = is_trirooted(glab, triangle)
    assert not verdict and "blueprint-cyclic" in verdict.reasons


def test_trirooted_rejects_bad_shapes(g11, glab):
    assert not is_trirooted(glab, MarkedForest(edges(g11, "0-1"), verts(g11, "123456789A")))
    assert not is_trirooted(glab, MarkedForest(frozenset(), verts(g11, "12345678")))


def test_mark_activity_g11(g11, glab):
    f = forest(g11, glab, "3-6,3-8,4-7,7-8,9-A", "124568A")
    rep = mark_activity(glab, f)
    assert rep.active == verts(g11, "5")
    assert rep.passive == verts(g11, "468A")
    assert not rep.has01 and not rep.has02


def test_mark_activity_b0_all_active(g11, glab):
    rep = mark_activity(glab, phi1(glab, glab.b0))
    assert rep.active == verts(g11, "3456789A") and not rep.passive


def test_mark_activity_w(w, wlab):
    rep = mark_activity(wlab, forest(w, wlab, "4-5", "1235"))
    assert rep.passive == verts(w, "5") and rep.active == verts(w, "3")


@pytest.mark.parametrize("corpus", [exhaustive_corpus, random_corpus])
def test_mark_activity_matches_passive_set(corpus):
    for g in corpus():
        lab = build_labeling(g, find_special_triples(g)[0])
        for b in spanning_trees(g):
            f = phi1(lab, b)
            rep = mark_activity(lab, f, b)
            assert rep.passive_edges(lab, f) == passive_set(g, lab.edge_order, b)
            assert rep.passivity == len(passive_set(g, lab.edge_order, b))


def test_purity_walkthrough(g11, glab):
    f = phi1(glab, edges(g11, PURITY))
    assert f.marks == verts(g11, "125689")
    m = phi2(glab, f)
    assert m.render(glab) == "x[3-6]^2 * x[3-8]^2 * x[4-7] * x[7-8] * x[9-A]"

    s1 = augment_step_traced(glab, f)
    assert s1.case == "active-component"
    assert s1.forest.edges == f.edges and s1.forest.marks == verts(g11, "12568A")

    s2 = augment_step_traced(glab, s1.forest)
    assert s2.case == "active-singleton"
    assert s2.forest.edges == f.edges | edges(g11, "5-6")
    assert s2.forest.marks == verts(g11, "1268A")

    s3 = augment_step_traced(glab, s2.forest)
    assert s3.case == "swap-01-02"
    m3 = phi2(glab, s3.forest)
    assert m3.degree == 10 and m3[resolve(g11, "3-8")] == 3

    prev = m
    for step in (s1, s2, s3):
        cur = phi2(glab, step.forest)
        assert cur.degree == prev.degree + 1 and prev.divides(cur)
        prev = cur


def resolve(g, name):
    (e,) = edges(g, [name])
    return e


def test_augment_on_maximal_raises(w, wlab):
    for b in spanning_trees(w):
        f = phi1(wlab, b)
        if is_maximal(wlab, f):
            with pytest.raises(MaximalError):
                augment_step(wlab, f)


def test_augment_rejects_invalid_input(g11, glab):
    with pytest.raises(NotTrirootedError):
        augment_step(glab, MarkedForest(frozenset(), verts(g11, "1")))


def test_enumerate_trirooted_counts():
    for g in exhaustive_corpus()[::10]:
        lab = build_labeling(g, find_special_triples(g)[0])
        assert sum(1 for _ in enumerate_trirooted(lab)) == len(spanning_trees(g))
