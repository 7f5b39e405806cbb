"""Potentials on quivers, cyclic derivatives, and the grading hypotheses.

A potential is a rational combination of cycles.  The four hypotheses
checked here gate the degree-zero subalgebra constructions:

  H1  the frozen vertices are exactly the supplied projective-injective set
  H2  the derivatives along non-frozen arrows are nonzero, pairwise
      distinct and linearly independent
  H3  every potential term has total degree 1 under the arrow grading
  H4  arrows entering the frozen part from outside have degree 1
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .quiver import (
    Quiver,
    FrozenData,
    freeze,
    quiver_from_json,
    quiver_to_json,
    SchemaViolation,
    UnknownArrow,
)
from .paths import Path, PathElement, path_of, stationary
from .ratlin import Echelon, ZERO, ONE


class PotentialError(Exception):
    pass


class MissingDegreeMap(PotentialError):
    pass


class HypothesisViolated(PotentialError):
    def __init__(self, name, witness=None):
        self.name = name
        self.witness = witness
        super().__init__("hypothesis %s fails%s" % (name, " (witness: %r)" % (witness,) if witness is not None else ""))


class Potential:
    """Finite list of (coefficient, cycle) terms; equal cycles merged."""

    def __init__(self, terms=()):
        self.terms = {}
        for c, p in terms:
            if not p.is_cycle():
                raise PotentialError("potential term %r is not a cycle" % (p,))
            c = Fraction(c)
            if not c:
                continue
            s = self.terms.get(p, ZERO) + c
            if s:
                self.terms[p] = s
            else:
                del self.terms[p]

    @staticmethod
    def zero():
        return Potential()

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].deglex_key())

    def __add__(self, other):
        return Potential([(c, p) for p, c in self.terms.items()] + [(c, p) for p, c in other.terms.items()])

    def scale(self, x):
        return Potential([(c * Fraction(x), p) for p, c in self.terms.items()])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, Potential) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "Potential(0)"
        return "Potential(%s)" % " + ".join("%s*%r" % (c, p) for p, c in self.items())


@dataclass
class FrozenQP:
    """A quiver with potential, frozen data, and an optional 0/1 grading."""

    quiver: Quiver
    potential: Potential
    frozen: FrozenData
    phi: dict = None

    def __post_init__(self):
        for p in self.potential.terms:
            for a in p.arrows:
                self.quiver.arrow(a)
        if self.phi is not None:
            for aid in self.quiver.arrows:
                if aid not in self.phi:
                    raise MissingDegreeMap("degree map misses arrow %r" % (aid,))

    def term_degree(self, path: Path):
        if self.phi is None:
            raise MissingDegreeMap("no degree map attached")
        return sum(self.phi[a] for a in path.arrows)


def cyclic_derivative(potential: Potential, quiver: Quiver, arrow_id) -> PathElement:
    """Sum of v*u over all decompositions term = u*a*v, per occurrence."""
    quiver.arrow(arrow_id)
    out = PathElement.zero()
    s_a, t_a = quiver.src(arrow_id), quiver.tgt(arrow_id)
    for p, c in potential.terms.items():
        w = p.arrows
        for j, a in enumerate(w):
            if a != arrow_id:
                continue
            vu = w[j + 1:] + w[:j]
            # vu runs t(a) -> s(a); cycle composability makes this exact
            piece = Path(vu, t_a, s_a) if vu else stationary(t_a)
            out = out + PathElement.of(piece, c)
    return out


def _rotations(p: Path):
    w = p.arrows
    for j in range(len(w)):
        yield w[j:] + w[:j]


def min_rotation(p: Path, quiver: Quiver) -> Path:
    """Deglex-minimal rotation of a cycle (lexicographic on the word)."""
    if not p.arrows:
        return p
    best = min(_rotations(p))
    v = quiver.src(best[-1])
    return Path(best, v, quiver.tgt(best[0]))


def cyclically_equivalent(w1: Potential, w2: Potential, quiver: Quiver) -> bool:
    """True iff w1 - w2 is a span of c - rot(c): rotate every cycle to its
    minimal form and compare coefficient maps."""

    def normalize(w):
        out = {}
        for p, c in w.terms.items():
            q = min_rotation(p, quiver)
            s = out.get(q, ZERO) + c
            if s:
                out[q] = s
            else:
                out.pop(q, None)
        return out

    return normalize(w1) == normalize(w2)


def is_reduced_qp(qp: FrozenQP):
    """Every term has length >= 3 and at least one non-frozen arrow.
    Returns (bool, reasons)."""
    reasons = []
    f1 = qp.frozen.frozen_arrows
    for p, _c in qp.potential.items():
        if len(p) < 3:
            reasons.append(("length<3", p))
        elif all(a in f1 for a in p.arrows):
            reasons.append(("all arrows frozen", p))
    return (not reasons), reasons


def jacobian_relations(qp: FrozenQP):
    """Pairs (arrow id, derivative) over all non-frozen arrows; zero
    derivatives are included so callers can flag them."""
    out = []
    for aid in qp.quiver.arrows:
        if aid in qp.frozen.frozen_arrows:
            continue
        out.append((aid, cyclic_derivative(qp.potential, qp.quiver, aid)))
    return out


@dataclass
class HypothesisReport:
    h1: bool
    h2: bool
    h3: bool
    h4: bool
    witnesses: dict
    h2_leading_terms_distinct: bool = True

    def all_pass(self):
        return self.h1 and self.h2 and self.h3 and self.h4

    def to_json(self):
        return {
            "H1": self.h1,
            "H2": self.h2,
            "H3": self.h3,
            "H4": self.h4,
            "h2_leading_terms_distinct": self.h2_leading_terms_distinct,
            "witnesses": {k: repr(v) for k, v in sorted(self.witnesses.items())},
        }


def check_hypotheses(qp: FrozenQP, projective_injective_vertices) -> HypothesisReport:
    """Check H1-H4 against a caller-supplied projective-injective vertex set.

    H2 is tested in the vector space spanned by paths (pairwise distinct,
    none vanishing, linearly independent); leading-term distinctness is
    reported separately.
    """
    if qp.phi is None:
        raise MissingDegreeMap("check_hypotheses needs a degree map")
    wit = {}

    pi = frozenset(projective_injective_vertices)
    h1 = pi == qp.frozen.frozen_vertices
    if not h1:
        wit["H1"] = sorted(pi.symmetric_difference(qp.frozen.frozen_vertices))

    rels = jacobian_relations(qp)
    h2 = True
    seen = {}
    ech = Echelon()
    key_of = {}
    counter = 0
    leading = set()
    leading_distinct = True
    for aid, d in rels:
        if d.is_zero():
            h2 = False
            wit.setdefault("H2", []).append(("zero derivative", aid))
            continue
        frozen_terms = tuple(sorted(d.terms.items(), key=lambda kv: kv[0].deglex_key()))
        if frozen_terms in seen:
            h2 = False
            wit.setdefault("H2", []).append(("duplicate derivative", aid, seen[frozen_terms]))
        seen.setdefault(frozen_terms, aid)
        vec = {}
        for p, c in d.terms.items():
            if p not in key_of:
                key_of[p] = counter
                counter += 1
            vec[key_of[p]] = c
        if ech.add(vec) is None:
            h2 = False
            wit.setdefault("H2", []).append(("linearly dependent", aid))
        lead = max(d.terms, key=Path.deglex_key)
        if lead in leading:
            leading_distinct = False
        leading.add(lead)

    h3 = True
    for p, _c in qp.potential.items():
        if qp.term_degree(p) != 1:
            h3 = False
            wit.setdefault("H3", []).append(p)

    h4 = True
    f0 = qp.frozen.frozen_vertices
    for a in qp.quiver.arrows.values():
        if a.src not in f0 and a.tgt in f0 and qp.phi[a.id] != 1:
            h4 = False
            wit.setdefault("H4", []).append(a.id)

    return HypothesisReport(h1, h2, h3, h4, wit, leading_distinct)


# ---------------------------------------------------------------------------
# JSON: {"quiver":..., "potential":[{"coef":"p/q","cycle":[arrowIds]}],
#        "frozen_vertices":[...], "phi":{arrowId: 0|1}?}


def qp_to_json(qp: FrozenQP) -> dict:
    pot = []
    for p, c in qp.potential.items():
        cs = "%d/%d" % (c.numerator, c.denominator) if c.denominator != 1 else str(c.numerator)
        pot.append({"coef": cs, "cycle": list(p.arrows)})
    out = {
        "quiver": quiver_to_json(qp.quiver),
        "potential": pot,
        "frozen_vertices": sorted(qp.frozen.frozen_vertices),
    }
    if qp.phi is not None:
        out["phi"] = {str(aid): int(d) for aid, d in sorted(qp.phi.items())}
    return out


def qp_from_json(data) -> FrozenQP:
    if not isinstance(data, dict):
        raise SchemaViolation("QP JSON must be an object")
    for field in ("quiver", "potential", "frozen_vertices"):
        if field not in data:
            raise SchemaViolation("QP JSON missing %r" % field)
    quiver = quiver_from_json(data["quiver"])
    terms = []
    for t in data["potential"]:
        if not isinstance(t, dict) or "coef" not in t or "cycle" not in t:
            raise SchemaViolation("potential terms need 'coef' and 'cycle'")
        try:
            c = Fraction(t["coef"])
        except (ValueError, ZeroDivisionError):
            raise SchemaViolation("bad coefficient %r" % (t["coef"],))
        try:
            p = path_of(quiver, t["cycle"], allow_names=False)
        except Exception as e:
            raise SchemaViolation("bad cycle: %s" % e)
        if not p.is_cycle():
            raise SchemaViolation("potential term %r is not a cycle" % (t["cycle"],))
        terms.append((c, p))
    frozen = freeze(quiver, data["frozen_vertices"])
    phi = None
    if "phi" in data and data["phi"] is not None:
        phi = {}
        for k, v in data["phi"].items():
            try:
                aid = int(k)
            except ValueError:
                raise SchemaViolation("phi keys must be arrow ids")
            if v not in (0, 1):
                raise SchemaViolation("phi values must be 0 or 1")
            if aid not in quiver.arrows:
                raise SchemaViolation("phi mentions unknown arrow %r" % aid)
            phi[aid] = v
    try:
        return FrozenQP(quiver, Potential(terms), frozen, phi)
    except (PotentialError, UnknownArrow) as e:
        raise SchemaViolation(str(e))


def qp_roundtrip(qp: FrozenQP) -> FrozenQP:
    return qp_from_json(json.loads(json.dumps(qp_to_json(qp))))
