from fractions import Fraction

import pytest

from frozenqp.quiver import build_quiver, freeze, full_subquiver
from frozenqp.paths import Path, PathElement, path_of
from frozenqp.potential import FrozenQP, Potential, cyclically_equivalent, cyclic_derivative
from frozenqp.subalgebra import (
    bar_jacobian_qp,
    bar_quotient_presentation,
    degree_zero_presentation,
    presentation_from_json,
    presentation_to_json,
)
from frozenqp.birs import build_birs_qp
from frozenqp.ratlin import Echelon


def six_vertex_qp():
    q = build_quiver(
        range(1, 7),
        [(1, 1, 3, "a"), (2, 3, 2, "b"), (3, 2, 1, "c"), (4, 2, 5, "d"),
         (5, 5, 3, "e"), (6, 5, 6, "f"), (7, 6, 4, "g"), (8, 4, 2, "h")],
    )
    W = Potential([(1, path_of(q, ["a", "c", "b"])), (1, path_of(q, ["d", "b", "e"])),
                   (1, path_of(q, ["d", "h", "g", "f"]))])
    phi = {q.arrow_by_name(n).id: (1 if n in ("a", "d") else 0) for n in "abcdefgh"}
    return FrozenQP(q, W, freeze(q, {3, 5, 6}), phi)


def word_qp_51():
    tri = build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3), (3, 1, 3)])
    return build_birs_qp(tri, (1, 2, 3, 1, 3, 2, 1)).qp


def test_degree_zero_six_vertex():
    qp = six_vertex_qp()
    pres = degree_zero_presentation(qp)
    assert len(pres.quiver.vertices) == 6
    assert sorted(a.name for a in pres.quiver.arrows.values()) == list("bcefgh")
    words = []
    for r in pres.relations:
        words.append(sorted("".join(qp.quiver.arrows[a].name for a in p.arrows) for p in r.terms))
    assert sorted(words) == [["be", "hgf"], ["cb"]]


def test_degree_zero_trivial():
    q = build_quiver([1, 2], [(1, 1, 2, "x")])
    qp = FrozenQP(q, Potential(), freeze(q, set()), {1: 0})
    pres = degree_zero_presentation(qp)
    assert len(pres.quiver.arrows) == 1 and not pres.relations


def test_degree_zero_word_quiver():
    qp = word_qp_51()
    pres = degree_zero_presentation(qp)
    # relations along every non-frozen degree-1 arrow, from the built figure
    deg1 = {(a.src, a.tgt) for a in qp.quiver.arrows.values()
            if qp.phi[a.id] == 1 and a.id not in qp.frozen.frozen_arrows}
    assert deg1 == {(1, 2), (1, 3), (2, 5), (4, 6), (4, 5)}
    assert len(pres.relations) == len(deg1) == 5
    assert len(pres.quiver.arrows) == 14 - 5
    # every relation only mentions degree-0 arrows
    for r in pres.relations:
        for p in r.terms:
            assert all(qp.phi[a] == 0 for a in p.arrows)


def test_bar_jacobian_51():
    qp = word_qp_51()
    bar = bar_jacobian_qp(qp)
    assert bar.quiver.vertices == (1, 2, 3, 4)
    assert not bar.frozen.frozen_vertices
    by_pair = {(a.src, a.tgt): a for a in bar.quiver.arrows.values()}
    ref = Potential([
        (1, Path((by_pair[(2, 4)].id, by_pair[(1, 2)].id, by_pair[(4, 1)].id), 4, 4)),
        (1, Path((by_pair[(3, 4)].id, by_pair[(1, 3)].id, by_pair[(4, 1)].id), 4, 4)),
    ])
    assert cyclically_equivalent(bar.potential, ref, bar.quiver)


def test_bar_jacobian_identity_and_zero():
    qp = six_vertex_qp()
    nothing_frozen = FrozenQP(qp.quiver, qp.potential, freeze(qp.quiver, set()), qp.phi)
    same = bar_jacobian_qp(nothing_frozen)
    assert same.quiver == qp.quiver and same.potential == qp.potential
    bar = bar_jacobian_qp(qp)
    assert bar.potential.is_zero()
    assert bar.quiver.vertices == (1, 2, 4)


def test_bar_quotient_51():
    qp = word_qp_51()
    pres = bar_quotient_presentation(qp)
    assert pres.quiver.vertices == (1, 2, 3, 4)
    assert sorted((a.src, a.tgt) for a in pres.quiver.arrows.values()) == [(2, 4), (3, 4), (4, 1)]
    assert len(pres.relations) == 2
    endpoints = sorted((next(iter(r.terms)).src, next(iter(r.terms)).tgt) for r in pres.relations)
    assert endpoints == [(2, 1), (3, 1)]


def test_bar_quotient_52_hereditary():
    pres = bar_quotient_presentation(six_vertex_qp())
    assert pres.quiver.vertices == (1, 2, 4)
    assert sorted((a.src, a.tgt) for a in pres.quiver.arrows.values()) == [(2, 1), (4, 2)]
    assert not pres.relations


def test_bar_quotient_empty():
    q = build_quiver([1, 2], [(1, 1, 2, "x")])
    qp = FrozenQP(q, Potential(), freeze(q, {1, 2}), {1: 0})
    pres = bar_quotient_presentation(qp)
    assert not pres.quiver.vertices and not pres.relations


def test_bar_relations_live_on_bar_quiver():
    for qp in (six_vertex_qp(), word_qp_51()):
        pres = bar_quotient_presentation(qp)
        ids = set(pres.quiver.arrows)
        for r in pres.relations:
            for p in r.terms:
                assert set(p.arrows) <= ids


def test_two_construction_paths_agree():
    # deleting the frozen vertices from the degree-zero presentation gives
    # the quotient presentation
    for qp in (six_vertex_qp(), word_qp_51()):
        A = degree_zero_presentation(qp)
        bar = bar_quotient_presentation(qp)
        down = full_subquiver(A.quiver, qp.frozen.frozen_vertices)
        assert down == bar.quiver
        f0 = qp.frozen.frozen_vertices
        surviving = []
        for r in A.relations:
            keep = [(p, c) for p, c in r.terms.items()
                    if not ({p.src, p.tgt} | {qp.quiver.src(a) for a in p.arrows}
                            | {qp.quiver.tgt(a) for a in p.arrows}) & f0]
            e = PathElement(keep)
            if not e.is_zero():
                surviving.append(e)
        def key(elem):
            return sorted((p.arrows for p in elem.terms))
        assert sorted(map(key, surviving)) == sorted(map(key, bar.relations))


def test_bar_relations_linearly_independent_on_words():
    tri = build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3), (3, 1, 3)])
    a3 = build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3)])
    words = [
        (tri, (1, 2, 3, 1, 3, 2, 1)),
        (a3, (1, 2, 3, 1, 2, 1)),
        (a3, (2, 1, 3, 2, 1, 2)),
        (tri, (1, 2, 1, 3, 1, 2)),
    ]
    from frozenqp.coxeter import coxeter_system, is_reduced

    for graph, word in words:
        if not is_reduced(coxeter_system(graph), word):
            continue
        qp = build_birs_qp(graph, word).qp
        pres = bar_quotient_presentation(qp)
        ech = Echelon()
        keys = {}
        for r in pres.relations:
            vec = {}
            for p, c in r.terms.items():
                keys.setdefault(p, len(keys))
                vec[keys[p]] = c
            assert ech.add(vec) is not None


def test_bar_potential_homogeneous():
    for qp in (six_vertex_qp(), word_qp_51()):
        bar = bar_jacobian_qp(qp)
        for p, _c in bar.potential.items():
            assert sum(bar.phi[a] for a in p.arrows) == 1


def test_presentation_json_roundtrip():
    pres = bar_quotient_presentation(word_qp_51())
    data = presentation_to_json(pres)
    back = presentation_from_json(data)
    assert back.quiver == pres.quiver
    assert sorted(sorted(p.arrows for p in r.terms) for r in back.relations) == \
        sorted(sorted(p.arrows for p in r.terms) for r in pres.relations)
