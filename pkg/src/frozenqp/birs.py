"""The quiver, potential, frozen data and grading of a reduced word.

Given a graph and a reduced word u_1...u_l in its Coxeter group, the word
quiver has the positions 1..l as vertices and three kinds of arrows:

  left arrows   t <- s between consecutive positions of the same letter,
  plain arrows  one per oriented graph arrow i->j, from a position of type
                i to the last position of type j before the next position
                of type i,
  star arrows   the symmetric clause with i and j exchanged.

Each plain arrow a contributes the cycle a a* p (p a chain of left arrows)
to the potential when the matching star arrow exists, each star arrow
contributes its cycle with a minus sign, star arrows get degree 1, and the
frozen vertices are the last occurrences of each letter.  The boundary
reading of "before the next position of type i" when no later position of
that type exists is "before the end of the word"; this is the reading that
matches the worked seven-letter example shipped with the tests.
"""

from dataclasses import dataclass

from .quiver import Quiver, Arrow, UnknownVertex
from .paths import Path
from .potential import Potential, FrozenQP, check_hypotheses, HypothesisViolated
from .quiver import freeze
from .coxeter import coxeter_system, is_reduced, NotReduced


class BirsError(Exception):
    pass


class UnusedVertex(BirsError):
    pass


def last_occurrences(word):
    """letter -> largest 1-based position carrying it."""
    if not word:
        raise BirsError("word must be nonempty")
    out = {}
    for p, u in enumerate(word, start=1):
        out[u] = p
    return dict(sorted(out.items()))


def admissible_orientation(graph: Quiver, word) -> Quiver:
    """Orient each graph edge i--j as i->j iff the last occurrence of i
    precedes the last occurrence of j.  Acyclic since the last-occurrence
    positions are distinct."""
    sys = coxeter_system(graph)
    if not is_reduced(sys, word):
        raise NotReduced("word %r is not reduced" % (word,))
    t = last_occurrences(word)
    for v in graph.vertices:
        if v not in t:
            raise UnusedVertex("vertex %r does not occur in the word" % (v,))
    arrows = []
    for a in graph.arrows.values():
        if t[a.src] < t[a.tgt]:
            arrows.append(a)
        else:
            arrows.append(Arrow(a.id, a.tgt, a.src, a.name))
    return Quiver(graph.vertices, arrows)


@dataclass
class BirsQP:
    qp: FrozenQP
    kinds: dict          # arrow id -> "left" | "Q" | "Qstar"
    positions: dict      # vertex (position) -> letter
    word: tuple
    graph: Quiver
    orientation: Quiver
    underlying: dict     # arrow id -> graph arrow id (None for left arrows)


def _next_of_type(positions_of, letter, after, l):
    for p in positions_of[letter]:
        if p > after:
            return p
    return l + 1


def build_birs_qp(graph: Quiver, word) -> BirsQP:
    """Assemble the word quiver with potential, frozen data and grading.

    The result always satisfies the four grading hypotheses with the frozen
    vertices as the projective-injective set; a failure is an internal
    consistency error, not user error.
    """
    word = tuple(word)
    orient = admissible_orientation(graph, word)  # validates reduced + used
    l = len(word)
    positions_of = {}
    for p, u in enumerate(word, start=1):
        positions_of.setdefault(u, []).append(p)
    t = last_occurrences(word)

    arrows = []
    kinds = {}
    underlying = {}
    next_id = 1

    def add(src, tgt, name, kind, under=None):
        nonlocal next_id
        arrows.append(Arrow(next_id, src, tgt, name))
        kinds[next_id] = kind
        underlying[next_id] = under
        next_id += 1
        return next_id - 1

    # left arrows: later position -> earlier, consecutive same letter
    left_step = {}  # source position -> arrow id (unique: consecutive pairs)
    for u in sorted(positions_of):
        ps = positions_of[u]
        for r, s in zip(ps, ps[1:]):
            aid = add(s, r, "l%d[%d>%d]" % (u, s, r), "left")
            left_step[s] = aid

    # plain arrows: for a: i->j, from each type-i position t0 to the last
    # type-j position strictly before the next type-i position
    q_arrow_at = {}      # (graph arrow id, target position) -> arrow id
    for g in orient.arrows.values():
        i, j = g.src, g.tgt
        for t0 in positions_of[i]:
            nxt = _next_of_type(positions_of, i, t0, l)
            cands = [s for s in positions_of[j] if t0 < s < nxt]
            if cands:
                s0 = max(cands)
                name = (g.name or "g%d" % g.id) + "[%d>%d]" % (t0, s0)
                aid = add(t0, s0, name, "Q", g.id)
                q_arrow_at[(g.id, s0)] = aid

    qstar_arrow_at = {}
    for g in orient.arrows.values():
        i, j = g.src, g.tgt
        for t0 in positions_of[j]:
            nxt = _next_of_type(positions_of, j, t0, l)
            cands = [s for s in positions_of[i] if t0 < s < nxt]
            if cands:
                s0 = max(cands)
                name = (g.name or "g%d" % g.id) + "*[%d>%d]" % (t0, s0)
                aid = add(t0, s0, name, "Qstar", g.id)
                qstar_arrow_at[(g.id, s0)] = aid

    quiver = Quiver(range(1, l + 1), arrows)

    def left_chain(frm, dn):
        """Word of left arrows frm -> ... -> dn (frm > dn, same letter)."""
        wordbits = []
        cur = frm
        while cur != dn:
            aid = left_step[cur]
            wordbits.append(aid)
            cur = quiver.tgt(aid)
        return tuple(wordbits)

    terms = []
    for (gid, s0), aid in sorted(q_arrow_at.items()):
        # cycle a a* p at s0: star arrow r -> t0 with the same underlying
        # arrow and u_r = u_{s0}, then left arrows s0 -> ... -> r
        t0 = quiver.src(aid)
        star_cands = [a2 for (g2, s2), a2 in qstar_arrow_at.items()
                      if g2 == gid and s2 == t0 and word[quiver.src(a2) - 1] == word[s0 - 1]]
        if not star_cands:
            continue
        assert len(star_cands) == 1, "star companion is not unique"
        star = star_cands[0]
        r = quiver.src(star)
        p = left_chain(s0, r)
        cyc = (aid, star) + p
        terms.append((1, Path(cyc, s0, s0)))
    for (gid, s0), aid in sorted(qstar_arrow_at.items()):
        t0 = quiver.src(aid)
        plain_cands = [a2 for (g2, s2), a2 in q_arrow_at.items()
                       if g2 == gid and s2 == t0 and word[quiver.src(a2) - 1] == word[s0 - 1]]
        if not plain_cands:
            continue
        assert len(plain_cands) == 1, "plain companion is not unique"
        plain = plain_cands[0]
        s_pl = quiver.src(plain)
        p = left_chain(s0, s_pl)
        cyc = (aid, plain) + p
        terms.append((-1, Path(cyc, s0, s0)))

    phi = {a.id: (1 if kinds[a.id] == "Qstar" else 0) for a in arrows}
    f0 = set(t.values())
    qp = FrozenQP(quiver, Potential(terms), freeze(quiver, f0), phi)
    positions = {p: u for p, u in enumerate(word, start=1)}

    rep = check_hypotheses(qp, f0)
    if not rep.all_pass():
        raise HypothesisViolated("internal", witness=rep.witnesses)

    return BirsQP(qp, kinds, positions, word, graph, orient, underlying)


def birs_to_json(b: BirsQP) -> dict:
    from .potential import qp_to_json

    out = qp_to_json(b.qp)
    out["kinds"] = {str(aid): k for aid, k in sorted(b.kinds.items())}
    out["positions"] = {str(v): u for v, u in sorted(b.positions.items())}
    return out
