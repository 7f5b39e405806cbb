"""Degree-zero subalgebra and its quotient by the frozen part.

From a graded frozen QP this builds three presented objects: the degree-zero
subalgebra on the degree-0 arrows, its quotient by the frozen vertices, and
the plain QP obtained by deleting the frozen vertices.
"""

from dataclasses import dataclass

from .quiver import full_subquiver
from .paths import AlgebraPresentation, PathElement
from .potential import (
    FrozenQP,
    Potential,
    HypothesisViolated,
    MissingDegreeMap,
    cyclic_derivative,
)
from .quiver import freeze


@dataclass
class BarQuotientResult:
    presentation: AlgebraPresentation
    dropped_zero_relations: list  # arrow ids whose derivative vanished


def _degree_zero_quiver(qp: FrozenQP, delete=frozenset()):
    keep = [a for a in qp.quiver.arrows.values()
            if qp.phi[a.id] == 0 and a.src not in delete and a.tgt not in delete]
    verts = [v for v in qp.quiver.vertices if v not in delete]
    from .quiver import Quiver

    return Quiver(verts, keep)


def degree_zero_presentation(qp: FrozenQP) -> AlgebraPresentation:
    """Quiver of degree-0 arrows, relations = derivatives along the
    non-frozen degree-1 arrows.  Each relation is checked to involve only
    degree-0 arrows, which is what degree-1 homogeneity of the potential
    guarantees."""
    if qp.phi is None:
        raise MissingDegreeMap("degree_zero_presentation needs a degree map")
    sub = _degree_zero_quiver(qp)
    relations = []
    sources = []
    for a in qp.quiver.arrows.values():
        if qp.phi[a.id] != 1 or a.id in qp.frozen.frozen_arrows:
            continue
        d = cyclic_derivative(qp.potential, qp.quiver, a.id)
        for p in d.terms:
            for b in p.arrows:
                if qp.phi[b] != 0:
                    raise HypothesisViolated("H3", witness=(a.id, p))
        relations.append(d)
        sources.append(a.id)
    phi0 = {a.id: 0 for a in sub.arrows.values()}
    return AlgebraPresentation(sub, relations, phi=phi0, relation_sources=sources)


def bar_jacobian_qp(qp: FrozenQP) -> FrozenQP:
    """Delete the frozen vertices: full subquiver, image of the potential
    (terms meeting a frozen vertex drop), no frozen data, restricted phi."""
    f0 = qp.frozen.frozen_vertices
    sub = full_subquiver(qp.quiver, f0)
    terms = []
    for p, c in qp.potential.items():
        verts = {p.src} | {qp.quiver.tgt(a) for a in p.arrows} | {qp.quiver.src(a) for a in p.arrows}
        if verts & f0:
            continue
        terms.append((c, p))
    phi = None
    if qp.phi is not None:
        phi = {aid: qp.phi[aid] for aid in sub.arrows}
    return FrozenQP(sub, Potential(terms), freeze(sub, ()), phi)


def bar_quotient_presentation(qp: FrozenQP, report_dropped=False):
    """Quotient presentation: degree-0 arrows minus the frozen vertices,
    relations = derivatives of the projected potential along its degree-1
    arrows.  Zero derivatives are dropped from the relation list (they
    signal bad input when the hypotheses hold) but reported on request."""
    if qp.phi is None:
        raise MissingDegreeMap("bar_quotient_presentation needs a degree map")
    bar = bar_jacobian_qp(qp)
    sub = _degree_zero_quiver(qp, delete=qp.frozen.frozen_vertices)
    relations = []
    sources = []
    dropped = []
    for a in bar.quiver.arrows.values():
        if qp.phi[a.id] != 1:
            continue
        d = cyclic_derivative(bar.potential, bar.quiver, a.id)
        if d.is_zero():
            dropped.append(a.id)
            continue
        for p in d.terms:
            for b in p.arrows:
                if qp.phi[b] != 0:
                    raise HypothesisViolated("H3", witness=(a.id, p))
        relations.append(d)
        sources.append(a.id)
    phi0 = {a.id: 0 for a in sub.arrows.values()}
    pres = AlgebraPresentation(sub, relations, phi=phi0, relation_sources=sources)
    if report_dropped:
        return BarQuotientResult(pres, dropped)
    return pres


def presentation_to_json(pres: AlgebraPresentation) -> dict:
    from .quiver import quiver_to_json
    from .paths import path_element_to_json

    return {
        "quiver": quiver_to_json(pres.quiver),
        "relations": [path_element_to_json(r) for r in pres.relations],
    }


def presentation_from_json(data) -> AlgebraPresentation:
    from .quiver import quiver_from_json, SchemaViolation
    from .paths import path_element_from_json

    if not isinstance(data, dict) or "quiver" not in data or "relations" not in data:
        raise SchemaViolation("presentation JSON needs 'quiver' and 'relations'")
    quiver = quiver_from_json(data["quiver"])
    rels = [path_element_from_json(r, quiver) for r in data["relations"]]
    return AlgebraPresentation(quiver, rels)
