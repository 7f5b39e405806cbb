import random
from fractions import Fraction

import pytest

from frozenqp.quiver import build_quiver, freeze
from frozenqp.paths import Path, PathElement, path_of, stationary
from frozenqp.potential import (
    FrozenQP,
    MissingDegreeMap,
    Potential,
    check_hypotheses,
    cyclic_derivative,
    cyclically_equivalent,
    is_reduced_qp,
    jacobian_relations,
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


def bar_qp_51():
    q = build_quiver(
        [1, 2, 3, 4],
        [(1, 1, 2, "a"), (2, 2, 4, "b"), (3, 1, 3, "c"), (4, 3, 4, "d"), (5, 4, 1, "e")],
    )
    W = Potential([(1, path_of(q, ["b", "a", "e"])), (1, path_of(q, ["d", "c", "e"]))])
    return q, W


def rotation_derivative(W: Potential, quiver, arrow_id):
    """Independent oracle: rotate each cycle so the chosen arrow is first
    and strip it, once per occurrence."""
    out = PathElement.zero()
    for p, c in W.terms.items():
        w = p.arrows
        for j in range(len(w)):
            rot = w[j:] + w[:j]
            if rot[0] != arrow_id:
                continue
            rest = rot[1:]
            if rest:
                piece = Path(rest, quiver.src(rot[-1]), quiver.tgt(rot[1]))
            else:
                piece = stationary(quiver.tgt(arrow_id))
            out = out + PathElement.of(piece, c)
    return out


def word_names(quiver, elem):
    return sorted("".join(quiver.arrows[a].name for a in p.arrows) for p in elem.terms)


def test_derivative_first_arrow():
    qp = six_vertex_qp()
    d = cyclic_derivative(qp.potential, qp.quiver, qp.quiver.arrow_by_name("a").id)
    assert word_names(qp.quiver, d) == ["cb"]


def test_derivative_absent_arrow():
    q, W = bar_qp_51()
    q2 = build_quiver([1, 2, 3, 4, 5], [(1, 1, 2, "a"), (2, 2, 4, "b"), (3, 1, 3, "c"),
                                        (4, 3, 4, "d"), (5, 4, 1, "e"), (6, 4, 5, "x")])
    W2 = Potential([(c, Path(p.arrows, p.src, p.tgt)) for p, c in W.terms.items()])
    d = cyclic_derivative(W2, q2, q2.arrow_by_name("x").id)
    assert d.is_zero()


def test_derivative_matches_rotation_oracle():
    q, W = bar_qp_51()
    da = cyclic_derivative(W, q, q.arrow_by_name("a").id)
    dc = cyclic_derivative(W, q, q.arrow_by_name("c").id)
    assert word_names(q, da) == ["eb"]
    assert word_names(q, dc) == ["ed"]
    for name in "abcde":
        aid = q.arrow_by_name(name).id
        assert cyclic_derivative(W, q, aid) == rotation_derivative(W, q, aid)


def test_cyclic_equivalence_rotation():
    q, W = bar_qp_51()
    bae = path_of(q, ["b", "a", "e"])
    aeb = path_of(q, ["a", "e", "b"])
    assert cyclically_equivalent(Potential([(1, bae)]), Potential([(1, aeb)]), q)


def test_cyclic_equivalence_sum():
    q, W = bar_qp_51()
    other = Potential([(1, path_of(q, ["a", "e", "b"])), (1, path_of(q, ["c", "e", "d"]))])
    assert cyclically_equivalent(W, other, q)


def test_cyclic_equivalence_coefficient_mismatch():
    q, W = bar_qp_51()
    bae = Potential([(1, path_of(q, ["b", "a", "e"]))])
    twice = bae.scale(2)
    assert not cyclically_equivalent(bae, twice, q)


def test_cyclic_equivalence_is_equivalence():
    q, _ = bar_qp_51()
    cycles = [path_of(q, ["b", "a", "e"]), path_of(q, ["a", "e", "b"]),
              path_of(q, ["d", "c", "e"]), path_of(q, ["e", "d", "c"])]
    rng = random.Random(3)
    pots = []
    for _ in range(12):
        pots.append(Potential([(Fraction(rng.randint(-2, 2)), rng.choice(cycles)) for _ in range(2)]))
    for w in pots:
        assert cyclically_equivalent(w, w, q)
    for w1 in pots:
        for w2 in pots:
            assert cyclically_equivalent(w1, w2, q) == cyclically_equivalent(w2, w1, q)
    for w1 in pots:
        for w2 in pots:
            for w3 in pots:
                if cyclically_equivalent(w1, w2, q) and cyclically_equivalent(w2, w3, q):
                    assert cyclically_equivalent(w1, w3, q)


def test_is_reduced():
    qp = six_vertex_qp()
    ok, reasons = is_reduced_qp(qp)
    assert ok and not reasons


def test_is_reduced_short_cycle():
    q = build_quiver([1, 2], [(1, 1, 2, "x"), (2, 2, 1, "y")])
    W = Potential([(1, path_of(q, ["x", "y"]))])
    qp = FrozenQP(q, W, freeze(q, set()), {1: 0, 2: 1})
    ok, reasons = is_reduced_qp(qp)
    assert not ok and reasons[0][0] == "length<3"


def test_is_reduced_all_frozen():
    q = build_quiver([1, 2, 3], [(1, 1, 2, "x"), (2, 2, 3, "y"), (3, 3, 1, "z")])
    W = Potential([(1, path_of(q, ["z", "y", "x"]))])
    qp = FrozenQP(q, W, freeze(q, {1, 2, 3}), {1: 0, 2: 0, 3: 1})
    ok, reasons = is_reduced_qp(qp)
    assert not ok and reasons[0][0] == "all arrows frozen"


def test_jacobian_relations_six_vertex():
    qp = six_vertex_qp()
    q = qp.quiver
    rels = dict(jacobian_relations(qp))
    assert sorted(q.arrows[a].name for a in rels) == list("abcdgh")
    expect = {"a": ["cb"], "b": ["ac", "ed"], "c": ["ba"], "d": ["be", "hgf"],
              "g": ["fdh"], "h": ["gfd"]}
    for aid, d in rels.items():
        assert word_names(q, d) == expect[q.arrows[aid].name]
        assert d == rotation_derivative(qp.potential, q, aid)


def test_jacobian_relations_empty_potential():
    q = build_quiver([1, 2], [(1, 1, 2, "x")])
    qp = FrozenQP(q, Potential(), freeze(q, set()), {1: 0})
    rels = jacobian_relations(qp)
    assert len(rels) == 1 and rels[0][1].is_zero()


def test_jacobian_relations_bar_51():
    q, W = bar_qp_51()
    qp = FrozenQP(q, W, freeze(q, set()), {1: 1, 2: 0, 3: 1, 4: 0, 5: 0})
    rels = {q.arrows[a].name: d for a, d in jacobian_relations(qp)}
    assert word_names(q, rels["a"]) == ["eb"]
    assert word_names(q, rels["b"]) == ["ae"]
    assert word_names(q, rels["c"]) == ["ed"]
    assert word_names(q, rels["d"]) == ["ce"]
    assert word_names(q, rels["e"]) == ["ba", "dc"]


def test_hypotheses_six_vertex():
    qp = six_vertex_qp()
    rep = check_hypotheses(qp, {3, 5, 6})
    assert rep.all_pass() and rep.h2_leading_terms_distinct


def test_hypotheses_h3_failure_witness():
    qp = six_vertex_qp()
    phi = dict(qp.phi)
    phi[qp.quiver.arrow_by_name("a").id] = 0
    bad = FrozenQP(qp.quiver, qp.potential, qp.frozen, phi)
    rep = check_hypotheses(bad, {3, 5, 6})
    assert not rep.h3
    witnesses = rep.witnesses["H3"]
    assert any("".join(qp.quiver.arrows[x].name for x in p.arrows) == "acb" for p in witnesses)


def test_hypotheses_word_quiver():
    tri = build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3), (3, 1, 3)])
    b = build_birs_qp(tri, (1, 2, 3, 1, 3, 2, 1))
    rep = check_hypotheses(b.qp, b.qp.frozen.frozen_vertices)
    assert rep.all_pass()


def test_hypotheses_need_degree_map():
    qp = six_vertex_qp()
    bare = FrozenQP(qp.quiver, qp.potential, qp.frozen, None)
    with pytest.raises(MissingDegreeMap):
        check_hypotheses(bare, {3, 5, 6})


def _random_cycles(quiver, rng, count, max_len=6):
    cycles = []
    verts = list(quiver.vertices)
    attempts = 0
    while len(cycles) < count and attempts < count * 200:
        attempts += 1
        v = rng.choice(verts)
        word = []
        cur = v
        for _ in range(rng.randint(2, max_len)):
            outs = [a for a in quiver.arrows.values() if a.src == cur]
            if not outs:
                break
            a = rng.choice(outs)
            word.append(a.id)
            cur = a.tgt
            if cur == v and len(word) >= 2:
                break
        if cur == v and len(word) >= 2:
            cycles.append(Path(tuple(reversed(word)), v, v))
    return cycles


def test_derivative_linearity_and_rotation_invariance():
    qp = six_vertex_qp()
    q = qp.quiver
    rng = random.Random(11)
    cycles = _random_cycles(q, rng, 30)
    for _ in range(60):
        c1, c2 = rng.choice(cycles), rng.choice(cycles)
        x, y = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
        W1 = Potential([(x, c1)])
        W2 = Potential([(y, c2)])
        Wsum = W1 + W2
        for a in q.arrows:
            lhs = cyclic_derivative(Wsum, q, a)
            rhs = cyclic_derivative(W1, q, a) + cyclic_derivative(W2, q, a)
            assert lhs == rhs
        # rotating a term does not change any derivative
        w = c1.arrows
        j = rng.randrange(len(w))
        rot = Path(w[j:] + w[:j], q.src(w[j - 1]) if j else c1.src, q.src(w[j - 1]) if j else c1.src)
        Wrot = Potential([(x, rot)])
        for a in q.arrows:
            assert cyclic_derivative(W1, q, a) == cyclic_derivative(Wrot, q, a)


def test_euler_identity_for_cycles():
    # sum over arrows of a * d_a(c) is cyclically equivalent to len(c) * c
    qp = six_vertex_qp()
    q = qp.quiver
    rng = random.Random(13)
    for c in _random_cycles(q, rng, 15):
        W = Potential([(1, c)])
        total = PathElement.zero()
        for a in q.arrows.values():
            da = cyclic_derivative(W, q, a.id)
            total = total + PathElement.of(Path((a.id,), a.src, a.tgt)) * da
        as_pot = Potential([(coef, p) for p, coef in total.terms.items()])
        assert cyclically_equivalent(as_pot, Potential([(len(c), c)]), q)


def test_h2_implies_bar_relations_independent():
    tri = build_quiver([1, 2, 3], [(1, 1, 2), (2, 2, 3), (3, 1, 3)])
    b = build_birs_qp(tri, (1, 2, 3, 1, 3, 2, 1))
    from frozenqp.subalgebra import bar_jacobian_qp

    bar = bar_jacobian_qp(b.qp)
    ech = Echelon()
    keys = {}
    for a in bar.quiver.arrows.values():
        if bar.phi[a.id] != 1:
            continue
        d = cyclic_derivative(bar.potential, bar.quiver, a.id)
        assert not d.is_zero()
        vec = {}
        for p, c in d.terms.items():
            keys.setdefault(p, len(keys))
            vec[keys[p]] = c
        assert ech.add(vec) is not None
