import pytest

from frozenqp.quiver import build_quiver
from frozenqp.coxeter import NotReduced, coxeter_system, is_reduced, reduced_words_up_to
from frozenqp.potential import check_hypotheses, cyclic_derivative
from frozenqp.birs import (
    UnusedVertex,
    admissible_orientation,
    build_birs_qp,
    last_occurrences,
)


def triangle_graph():
    return build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3), (3, 1, 3)])


def a3_graph():
    return build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3)])


def edge_graph():
    return build_quiver([1, 2], [(1, 1, 2)])


def test_last_occurrences():
    assert last_occurrences((1, 2, 3, 1, 3, 2, 1)) == {1: 7, 2: 6, 3: 5}
    assert last_occurrences((1,)) == {1: 1}
    assert last_occurrences((1, 2, 3, 1, 2, 1)) == {1: 6, 2: 5, 3: 3}


def test_admissible_orientation_triangle():
    q = admissible_orientation(triangle_graph(), (1, 2, 3, 1, 3, 2, 1))
    assert sorted((a.src, a.tgt) for a in q.arrows.values()) == [(2, 1), (3, 1), (3, 2)]


def test_admissible_orientation_edge():
    q = admissible_orientation(edge_graph(), (1, 2))
    assert [(a.src, a.tgt) for a in q.arrows.values()] == [(1, 2)]


def test_admissible_orientation_a3():
    q = admissible_orientation(a3_graph(), (1, 2, 3, 1, 2, 1))
    assert sorted((a.src, a.tgt) for a in q.arrows.values()) == [(2, 1), (3, 2)]


def test_admissible_orientation_errors():
    with pytest.raises(NotReduced):
        admissible_orientation(edge_graph(), (1, 1))
    with pytest.raises(UnusedVertex):
        admissible_orientation(a3_graph(), (1, 2, 1))


def clause_oracle(graph, word):
    """Independent literal transcription of the arrow clauses."""
    word = tuple(word)
    l = len(word)
    t = {}
    for p, u in enumerate(word, start=1):
        t[u] = p
    # orient
    edges = []
    for a in graph.arrows.values():
        i, j = (a.src, a.tgt) if t[a.src] < t[a.tgt] else (a.tgt, a.src)
        edges.append((a.id, i, j))
    pos = {u: [p for p, x in enumerate(word, start=1) if x == u] for u in set(word)}
    left = set()
    for u, ps in pos.items():
        for r, s in zip(ps, ps[1:]):
            left.add((s, r))
    plain = set()
    star = set()
    for eid, i, j in edges:
        for t0 in pos[i]:
            later_i = [p for p in pos[i] if p > t0]
            nxt = later_i[0] if later_i else l + 1
            cands = [s for s in pos[j] if t0 < s < nxt]
            if cands:
                plain.add((eid, t0, max(cands)))
        for t0 in pos[j]:
            later_j = [p for p in pos[j] if p > t0]
            nxt = later_j[0] if later_j else l + 1
            cands = [s for s in pos[i] if t0 < s < nxt]
            if cands:
                star.add((eid, t0, max(cands)))
    return left, plain, star


WORDS = [
    (triangle_graph, (1, 2, 3, 1, 3, 2, 1)),
    (a3_graph, (1, 2, 3, 1, 2, 1)),
    (a3_graph, (3, 2, 1, 3, 2, 3)),
    (edge_graph, (1, 2, 1)),
    (edge_graph, (2, 1)),
    (triangle_graph, (1, 2, 1, 3, 1, 2)),
]


def test_arrows_match_clause_oracle():
    for mk, word in WORDS:
        graph = mk()
        if not is_reduced(coxeter_system(graph), word):
            continue
        b = build_birs_qp(graph, word)
        got_left = {(a.src, a.tgt) for a in b.qp.quiver.arrows.values() if b.kinds[a.id] == "left"}
        got_plain = {(b.underlying[a.id], a.src, a.tgt)
                     for a in b.qp.quiver.arrows.values() if b.kinds[a.id] == "Q"}
        got_star = {(b.underlying[a.id], a.src, a.tgt)
                    for a in b.qp.quiver.arrows.values() if b.kinds[a.id] == "Qstar"}
        left, plain, star = clause_oracle(graph, word)
        assert got_left == left, word
        assert got_plain == plain, word
        assert got_star == star, word


def test_build_edge_word_s1s2s1():
    b = build_birs_qp(edge_graph(), (1, 2, 1))
    q = b.qp.quiver
    assert q.vertices == (1, 2, 3)
    kinds = sorted(b.kinds.values())
    assert kinds == ["Q", "Qstar", "left"]
    left = [(a.src, a.tgt) for a in q.arrows.values() if b.kinds[a.id] == "left"]
    assert left == [(3, 1)]
    # single potential term: the plain cycle; the star arrow has no companion
    assert len(b.qp.potential.terms) == 1


def test_build_single_letter():
    b = build_birs_qp(build_quiver([1], []), (1,))
    assert b.qp.quiver.vertices == (1,)
    assert not b.qp.quiver.arrows
    assert b.qp.potential.is_zero()
    assert b.qp.frozen.frozen_vertices == frozenset({1})


def test_build_seven_word():
    b = build_birs_qp(triangle_graph(), (1, 2, 3, 1, 3, 2, 1))
    qp = b.qp
    assert len(qp.quiver.vertices) == 7
    assert qp.frozen.frozen_vertices == frozenset({5, 6, 7})
    left = sorted((a.src, a.tgt) for a in qp.quiver.arrows.values() if b.kinds[a.id] == "left")
    assert left == [(4, 1), (5, 3), (6, 2), (7, 4)]
    signs = sorted(c for _p, c in qp.potential.items())
    assert signs == [-1, -1, 1, 1, 1, 1, 1]


def test_invariants_across_words():
    for mk, word in WORDS:
        graph = mk()
        if not is_reduced(coxeter_system(graph), word):
            continue
        b = build_birs_qp(graph, word)
        qp = b.qp
        l = len(word)
        assert len(qp.quiver.vertices) == l
        assert len(qp.frozen.frozen_vertices) == len(set(word))
        nleft = sum(1 for k in b.kinds.values() if k == "left")
        assert nleft == l - len(set(word))
        assert all(a.src != a.tgt for a in qp.quiver.arrows.values())
        for a in qp.quiver.arrows.values():
            if a.id in qp.frozen.frozen_arrows:
                continue
            assert not cyclic_derivative(qp.potential, qp.quiver, a.id).is_zero(), (word, a)
        assert check_hypotheses(qp, qp.frozen.frozen_vertices).all_pass()
        # each plain-arrow cycle passes through exactly one star arrow
        for p, c in qp.potential.items():
            stars = [x for x in p.arrows if b.kinds[x] == "Qstar"]
            assert len(stars) == 1


def test_determinism():
    g1 = triangle_graph()
    b1 = build_birs_qp(g1, (1, 2, 3, 1, 3, 2, 1))
    b2 = build_birs_qp(triangle_graph(), (1, 2, 3, 1, 3, 2, 1))
    assert [(a.id, a.src, a.tgt, a.name) for a in b1.qp.quiver.arrows.values()] == \
        [(a.id, a.src, a.tgt, a.name) for a in b2.qp.quiver.arrows.values()]
    assert b1.qp.potential == b2.qp.potential
    assert b1.kinds == b2.kinds


def test_hypotheses_hold_for_all_short_words():
    # every reduced word of length <= 5 whose support is the whole graph
    for mk in (a3_graph, triangle_graph):
        graph = mk()
        sys = coxeter_system(graph)
        for word in reduced_words_up_to(sys, 5):
            if set(word) != set(graph.vertices):
                continue
            b = build_birs_qp(graph, word)
            assert check_hypotheses(b.qp, b.qp.frozen.frozen_vertices).all_pass(), word
