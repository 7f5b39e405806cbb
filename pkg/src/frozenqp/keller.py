"""Quiver-with-potential reconstruction from a presented algebra.

For an algebra of global dimension at most 2 presented by minimal relations
r_i, the extended quiver adds one arrow t(r_i) -> s(r_i) per relation and
carries the potential sum of a_i * r_i.  verify_endomorphism_match runs the
reconstruction against the frozen-vertex deletion of a graded QP and checks
that the two sides agree up to the canonical renaming of added arrows.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .quiver import Quiver, Arrow
from .paths import AlgebraPresentation, Path, PathElement
from .potential import Potential, FrozenQP, cyclically_equivalent, check_hypotheses
from .subalgebra import bar_quotient_presentation, bar_jacobian_qp


class KellerError(Exception):
    pass


class NonHomogeneousRelation(KellerError):
    pass


@dataclass
class KellerExtension:
    extended_quiver: Quiver
    added_arrows: list          # arrow ids, one per relation, in relation order
    potential: Potential
    presentation: AlgebraPresentation

    def added_phi(self):
        """Grading with the base arrows in degree 0, added arrows degree 1."""
        phi = {aid: 0 for aid in self.presentation.quiver.arrows}
        for aid in self.added_arrows:
            phi[aid] = 1
        return phi


def _relation_endpoints(r: PathElement):
    srcs = {p.src for p in r.terms}
    tgts = {p.tgt for p in r.terms}
    if len(srcs) != 1 or len(tgts) != 1:
        raise NonHomogeneousRelation("relation %r mixes endpoints" % (r,))
    return next(iter(srcs)), next(iter(tgts))


def keller_extend(pres: AlgebraPresentation) -> KellerExtension:
    """Add one arrow per designated minimal relation and assemble the
    potential.  An empty relation list is allowed and yields the identity
    extension with zero potential."""
    base = pres.quiver
    next_id = max(base.arrows, default=0) + 1
    arrows = list(base.arrows.values())
    added = []
    pot_terms = []
    for k, r in enumerate(pres.relations):
        if r.is_zero():
            raise NonHomogeneousRelation("zero relation cannot be minimal")
        s_r, t_r = _relation_endpoints(r)
        aid = next_id + k
        arrows.append(Arrow(aid, t_r, s_r, "rel%d" % k))
        added.append(aid)
        for p, c in r.terms.items():
            cyc = Path((aid,) + p.arrows, p.src, s_r)
            pot_terms.append((c, cyc))
    ext = Quiver(base.vertices, arrows)
    return KellerExtension(ext, added, Potential(pot_terms), pres)


@dataclass
class EndomorphismMatchReport:
    quiver_match: bool
    potential_match: bool
    ambiguities: list
    renaming: dict                      # added arrow id -> matched degree-1 arrow id
    hypothesis_report: object = None
    gldim: int = None
    gldim_warning: bool = False

    def ok(self):
        return self.quiver_match and self.potential_match

    def to_json(self):
        return {
            "quiver_match": self.quiver_match,
            "potential_match": self.potential_match,
            "ambiguities": [list(a) for a in self.ambiguities],
            "renaming": {str(k): v for k, v in sorted(self.renaming.items())},
            "gldim": self.gldim,
        }


def _match_added_arrows(ext: KellerExtension, bar_qp: FrozenQP, sources):
    """Pair added arrows with the degree-1 arrows of the deleted QP.

    When relation provenance is available the pairing is canonical; it is
    still checked against endpoints.  Without provenance, fall back to
    endpoint multisets and report any ambiguity."""
    deg1 = [a for a in bar_qp.quiver.arrows.values() if bar_qp.phi[a.id] == 1]
    renaming = {}
    ambiguities = []
    if sources is not None:
        by_id = {a.id: a for a in deg1}
        for added, src_arrow in zip(ext.added_arrows, sources):
            if src_arrow not in by_id:
                return None, [("missing degree-1 arrow", src_arrow)]
            a = by_id[src_arrow]
            e = ext.extended_quiver.arrows[added]
            if (e.src, e.tgt) != (a.src, a.tgt):
                return None, [("endpoint mismatch", added, src_arrow)]
            renaming[added] = a.id
        if len(set(renaming.values())) != len(renaming) or len(renaming) != len(deg1):
            return None, [("count mismatch", len(renaming), len(deg1))]
        return renaming, ambiguities

    remaining = {a.id: a for a in deg1}
    for added in ext.added_arrows:
        e = ext.extended_quiver.arrows[added]
        cands = [aid for aid, a in remaining.items() if (a.src, a.tgt) == (e.src, e.tgt)]
        if not cands:
            return None, [("no candidate", added)]
        if len(cands) > 1:
            ambiguities.append(("parallel candidates", added, tuple(sorted(cands))))
        pick = min(cands)
        renaming[added] = pick
        del remaining[pick]
    if remaining:
        return None, [("unmatched degree-1 arrows", tuple(sorted(remaining)))]
    return renaming, ambiguities


def verify_endomorphism_match(qp: FrozenQP, projective_injective_vertices=None,
                              max_len=32) -> EndomorphismMatchReport:
    """Reconstruct from the degree-zero quotient presentation and compare
    with the frozen-vertex deletion of the QP: the quivers must agree as
    directed multigraphs and the potentials up to cyclic equivalence."""
    pi = projective_injective_vertices
    if pi is None:
        pi = qp.frozen.frozen_vertices
    hrep = check_hypotheses(qp, pi)
    if not hrep.all_pass():
        from .potential import HypothesisViolated

        failing = [n for n, ok in zip(("H1", "H2", "H3", "H4"), (hrep.h1, hrep.h2, hrep.h3, hrep.h4)) if not ok]
        raise HypothesisViolated(",".join(failing), witness=hrep.witnesses)

    res = bar_quotient_presentation(qp, report_dropped=True)
    pres = res.presentation
    ext = keller_extend(pres)
    bar = bar_jacobian_qp(qp)

    gldim = None
    warn = False
    try:
        from .modrep import global_dimension

        gldim = global_dimension(pres, bound=6, max_len=max_len)
        warn = not (gldim is not None and gldim <= 2)
    except Exception:
        warn = True

    renaming, ambiguities = _match_added_arrows(ext, bar, pres.relation_sources)
    if renaming is None:
        return EndomorphismMatchReport(False, False, ambiguities, {}, hrep, gldim, warn)

    # base degree-0 arrows must agree on the nose
    base_ids = {a.id for a in pres.quiver.arrows.values()}
    bar_deg0 = {a.id for a in bar.quiver.arrows.values() if bar.phi[a.id] == 0}
    quiver_match = base_ids == bar_deg0

    terms = []
    for p, c in ext.potential.terms.items():
        word = tuple(renaming.get(a, a) for a in p.arrows)
        terms.append((c, Path(word, p.src, p.tgt)))
    renamed = Potential(terms)
    potential_match = cyclically_equivalent(renamed, bar.potential, bar.quiver)

    return EndomorphismMatchReport(quiver_match, potential_match, ambiguities,
                                   renaming, hrep, gldim, warn)
