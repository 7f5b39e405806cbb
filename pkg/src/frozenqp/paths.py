"""Paths, exact-rational path elements, and finite-dimensional quotients.

Composition convention: in a written word (a1, a2, ..., ak) the rightmost
arrow acts first, so the word denotes a1 o a2 o ... o ak.  A product x*y is
the concatenation of words and is defined iff source(x) == target(y).

The quotient engine eliminates the two-sided ideal generated by the
relations inside a length window of the free path space, layer by layer,
with the deglex term order (length first, then lexicographic on arrow-id
sequences).  An algebra is accepted only with a certificate:

  * some layer consists entirely of leading terms (every path of that
    length reduces to strictly shorter normal forms), which bounds the
    quotient, and
  * the resulting multiplication table is associative, unital, fixes the
    basis monomials and kills every relation.

Together these pin the dimension exactly, so no Groebner completion is
needed.  Length-graded presentations may instead be truncated at the
window, which is the honest object Lambda/(ideal + paths beyond the
window).
"""

from fractions import Fraction

from .quiver import Quiver, UnknownVertex
from .ratlin import Echelon, ZERO, ONE

import heapq
import itertools


class PathAlgebraError(Exception):
    pass


class InvalidRelation(PathAlgebraError):
    pass


class NotStabilized(PathAlgebraError):
    def __init__(self, max_len, msg=None):
        self.max_len = max_len
        super().__init__(msg or "quotient not proven finite dimensional within length %d" % max_len)


class Path:
    """A composable word of arrows, or a stationary path at a vertex."""

    __slots__ = ("arrows", "src", "tgt", "_hash")

    def __init__(self, arrows, src, tgt):
        self.arrows = tuple(arrows)
        self.src = src
        self.tgt = tgt
        self._hash = hash((self.arrows, src, tgt))

    def __len__(self):
        return len(self.arrows)

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.arrows == other.arrows
            and self.src == other.src
            and self.tgt == other.tgt
        )

    def __hash__(self):
        return self._hash

    def deglex_key(self):
        return (len(self.arrows), self.arrows, self.src)

    def is_cycle(self):
        return self.src == self.tgt

    def __repr__(self):
        if not self.arrows:
            return "e_%s" % (self.src,)
        return "Path(%s: %s->%s)" % ("*".join(map(str, self.arrows)), self.src, self.tgt)


def stationary(vertex) -> Path:
    return Path((), vertex, vertex)


def path_of(quiver: Quiver, arrow_ids, allow_names=True) -> Path:
    """Path from a word of arrow ids (names accepted), validated."""
    ids = []
    for a in arrow_ids:
        if allow_names and isinstance(a, str):
            ids.append(quiver.arrow_by_name(a).id)
        else:
            quiver.arrow(a)
            ids.append(a)
    if not ids:
        raise PathAlgebraError("empty word needs a vertex; use stationary(v)")
    for x, y in zip(ids, ids[1:]):
        if quiver.src(x) != quiver.tgt(y):
            raise PathAlgebraError("word not composable at %r*%r" % (x, y))
    return Path(ids, quiver.src(ids[-1]), quiver.tgt(ids[0]))


def compose(p: Path, q: Path):
    """Concatenation p*q, or None (the zero of the path algebra) when the
    endpoints do not match."""
    if p.src != q.tgt:
        return None
    if not p.arrows:
        return q
    if not q.arrows:
        return p
    return Path(p.arrows + q.arrows, q.src, p.tgt)


class PathElement:
    """Finite rational linear combination of paths; zero coefficients are
    never stored.  Paths in one element may mix sources and targets."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for p, c in (terms.items() if isinstance(terms, dict) else terms):
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
        return PathElement()

    @staticmethod
    def of(path, coef=ONE):
        return PathElement([(path, coef)])

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            s = out.get(p, ZERO) + c
            if s:
                out[p] = s
            else:
                del out[p]
        e = PathElement()
        e.terms = out
        return e

    def __sub__(self, other):
        return self + other.scale(-ONE)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return PathElement()
        e = PathElement()
        e.terms = {p: c * x for p, x in self.terms.items()}
        return e

    def __mul__(self, other):
        if isinstance(other, Path):
            other = PathElement.of(other)
        out = {}
        for p, cp in self.terms.items():
            for q, cq in other.terms.items():
                pq = compose(p, q)
                if pq is None:
                    continue
                s = out.get(pq, ZERO) + cp * cq
                if s:
                    out[pq] = s
                else:
                    del out[pq]
        e = PathElement()
        e.terms = out
        return e

    def component(self, i, j):
        """The (i,j) block e_i * x * e_j: terms with target i and source j."""
        e = PathElement()
        e.terms = {p: c for p, c in self.terms.items() if p.tgt == i and p.src == j}
        return e

    def blocks(self):
        """Split into nonzero (target, source) components."""
        out = {}
        for p, c in self.terms.items():
            out.setdefault((p.tgt, p.src), {})[p] = c
        result = []
        for (i, j), terms in sorted(out.items()):
            e = PathElement()
            e.terms = terms
            result.append(((i, j), e))
        return result

    def max_length(self):
        return max((len(p) for p in self.terms), default=0)

    def min_length(self):
        return min((len(p) for p in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, PathElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p in sorted(self.terms, key=Path.deglex_key):
            bits.append("%s*%r" % (self.terms[p], p))
        return " + ".join(bits)


class AlgebraPresentation:
    """A quiver with a finite list of relation elements.

    relation_sources optionally records where each relation came from (for
    the reconstruction bookkeeping); phi is an optional arrow degree map.
    """

    def __init__(self, quiver: Quiver, relations, phi=None, relation_sources=None):
        self.quiver = quiver
        self.relations = list(relations)
        self.phi = dict(phi) if phi is not None else None
        self.relation_sources = list(relation_sources) if relation_sources is not None else None

    def validate_relations(self):
        for r in self.relations:
            if r.is_zero():
                raise InvalidRelation("zero relation supplied")
            for (i, j), comp in r.blocks():
                for p in comp.terms:
                    if len(p) < 2:
                        raise InvalidRelation("relation term %r has length < 2" % (p,))

    def opposite(self):
        """Reversed quiver with every relation word reversed (same arrow ids)."""
        qop = self.quiver.opposite()
        rels = []
        for r in self.relations:
            terms = []
            for p, c in r.terms.items():
                terms.append((Path(tuple(reversed(p.arrows)), p.tgt, p.src), c))
            rels.append(PathElement(terms))
        return AlgebraPresentation(qop, rels, phi=self.phi, relation_sources=self.relation_sources)

    def is_phi_homogeneous(self):
        if self.phi is None:
            return False
        for r in self.relations:
            degs = {sum(self.phi[a] for a in p.arrows) for p in r.terms}
            if len(degs) > 1:
                return False
        return True

    def is_length_homogeneous(self):
        for r in self.relations:
            for (_ij, comp) in r.blocks():
                if len({len(p) for p in comp.terms}) > 1:
                    return False
        return True


# ---------------------------------------------------------------------------
# quotient engine


class _PathRegistry:
    """Paths of a quiver enumerated layer by layer in deglex order, so that
    the integer id order is exactly the deglex order."""

    def __init__(self, quiver: Quiver):
        self.quiver = quiver
        self.paths = []
        self.ids = {}
        self.layer_start = []  # layer l occupies ids [layer_start[l], layer_start[l+1])
        self._gen_layer0()

    def _register(self, p):
        self.ids[p] = len(self.paths)
        self.paths.append(p)

    def _gen_layer0(self):
        self.layer_start.append(0)
        for v in self.quiver.vertices:
            self._register(stationary(v))
        self.layer_start.append(len(self.paths))

    @property
    def depth(self):
        return len(self.layer_start) - 2

    def extend_to(self, depth):
        by_src = {}
        for a in self.quiver.arrows.values():
            by_src.setdefault(a.src, []).append(a)
        while self.depth < depth:
            lo, hi = self.layer_start[-2], self.layer_start[-1]
            new = []
            for idx in range(lo, hi):
                p = self.paths[idx]
                for a in by_src.get(p.tgt, ()):
                    new.append(Path((a.id,) + p.arrows, p.src, a.tgt))
            new.sort(key=lambda q: q.arrows)
            for q in new:
                self._register(q)
            self.layer_start.append(len(self.paths))

    def layer_range(self, l):
        return self.layer_start[l], self.layer_start[l + 1]

    def layer_size(self, l):
        return self.layer_start[l + 1] - self.layer_start[l]

    def layer_of(self, pid):
        return len(self.paths[pid])


class TableAlgebra:
    """Finite-dimensional quotient of a path algebra with a monomial basis.

    basis[i] is a Path; mult is computed by stepwise arrow action against
    the eliminated ideal and memoized.  truncated_at is set when the object
    is a length truncation rather than the full quotient.
    """

    def __init__(self, quiver, basis, right_arrow_act, left_arrow_act, phi=None,
                 stabilization_layer=None, truncated_at=None, presentation=None):
        self.quiver = quiver
        self.basis = list(basis)
        self.index = {p: i for i, p in enumerate(self.basis)}
        self.src = [p.src for p in self.basis]
        self.tgt = [p.tgt for p in self.basis]
        self.length = [len(p) for p in self.basis]
        self.phi = phi
        self.degree = None
        if phi is not None:
            self.degree = [sum(phi[a] for a in p.arrows) for p in self.basis]
        self.unit_index = {}
        for i, p in enumerate(self.basis):
            if len(p) == 0:
                self.unit_index[p.src] = i
        self._right = right_arrow_act  # arrow id -> {basis index -> sparse coords}
        self._left = left_arrow_act
        self.stabilization_layer = stabilization_layer
        self.truncated_at = truncated_at
        self.presentation = presentation
        self._mult = {}

    @property
    def dim(self):
        return len(self.basis)

    def right_arrow(self, vec, aid):
        """(sparse coords) * arrow."""
        act = self._right[aid]
        out = {}
        for i, c in vec.items():
            row = act.get(i)
            if not row:
                continue
            for k, d in row.items():
                s = out.get(k, ZERO) + c * d
                if s:
                    out[k] = s
                else:
                    del out[k]
        return out

    def left_arrow(self, vec, aid):
        act = self._left[aid]
        out = {}
        for i, c in vec.items():
            row = act.get(i)
            if not row:
                continue
            for k, d in row.items():
                s = out.get(k, ZERO) + c * d
                if s:
                    out[k] = s
                else:
                    del out[k]
        return out

    def right_word(self, vec, word):
        """vec * (word of arrows), evaluated left to right through the word."""
        for a in word:
            if not vec:
                return {}
            vec = self.right_arrow(vec, a)
        return vec

    def mult(self, i, j):
        """Coordinates of basis[i] * basis[j]."""
        key = (i, j)
        hit = self._mult.get(key)
        if hit is not None:
            return hit
        bi, bj = self.basis[i], self.basis[j]
        if bi.src != bj.tgt:
            out = {}
        elif not bj.arrows:
            out = {i: ONE}
        else:
            out = self.right_word({i: ONE}, bj.arrows)
        self._mult[key] = out
        return out

    def elem_mult(self, u, v):
        out = {}
        for i, c in u.items():
            for j, d in v.items():
                for k, e in self.mult(i, j).items():
                    s = out.get(k, ZERO) + c * d * e
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def unit(self):
        return {i: ONE for i in self.unit_index.values()}

    def idempotent(self, v):
        if v not in self.unit_index:
            raise UnknownVertex("vertex %r not in algebra" % (v,))
        return {self.unit_index[v]: ONE}

    def element_of(self, pe: PathElement):
        """Coordinates of a free path element's image in the algebra."""
        out = {}
        for p, c in pe.terms.items():
            if len(p) == 0:
                img = {self.unit_index[p.src]: ONE}
            else:
                img = self.right_word({self.unit_index[p.tgt]: ONE}, p.arrows)
            for k, d in img.items():
                s = out.get(k, ZERO) + c * d
                if s:
                    out[k] = s
                else:
                    del out[k]
        return out

    def coords_to_element(self, vec) -> PathElement:
        return PathElement([(self.basis[i], c) for i, c in vec.items()])

    def trace_of_left_mult(self, vec):
        t = ZERO
        for j in range(self.dim):
            prod = self.elem_mult(vec, {j: ONE})
            t += prod.get(j, ZERO)
        return t

    def verify_associative_on_arrows(self):
        """(b_i * b_j) * a == b_i * (b_j * a) for all basis pairs and arrows;
        with the stepwise table this implies associativity on all triples."""
        for j in range(self.dim):
            for aid in self.quiver.arrows:
                ja = self.right_arrow({j: ONE}, aid)
                for i in range(self.dim):
                    if self.src[i] != self.tgt[j]:
                        continue
                    lhs = self.right_arrow(self.mult(i, j), aid)
                    rhs = {}
                    for k, c in ja.items():
                        for t, d in self.mult(i, k).items():
                            s = rhs.get(t, ZERO) + c * d
                            if s:
                                rhs[t] = s
                            else:
                                del rhs[t]
                    if lhs != rhs:
                        return False
        return True

    def verify_units(self):
        for i in range(self.dim):
            if self.mult(self.unit_index[self.tgt[i]], i) != {i: ONE}:
                return False
            if self.mult(i, self.unit_index[self.src[i]]) != {i: ONE}:
                return False
        return True

    def verify_basis_fixed(self):
        for i, p in enumerate(self.basis):
            if len(p) == 0:
                continue
            got = self.right_word({self.unit_index[p.tgt]: ONE}, p.arrows)
            if got != {i: ONE}:
                return False
        return True

    def verify_relations_vanish(self, relations):
        for r in relations:
            if self.element_of(r):
                return False
        return True


def _window_eliminate(pres: AlgebraPresentation, depth_limit, want_stabilization):
    """Run the layered elimination.

    Returns (registry, echelon, stabilization_layer, drained_depth) where
    stabilization_layer is None in truncated mode.  The echelon is over path
    ids; its pivot set is upward closed through the drained depth.
    """
    quiver = pres.quiver
    reg = _PathRegistry(quiver)
    ech = Echelon()

    comps = []  # (top length, vector-as-PathElement)
    for r in pres.relations:
        for (_ij, comp) in r.blocks():
            comps.append((comp.max_length(), comp))
    max_rel_len = max((t for t, _ in comps), default=0)

    counter = itertools.count()
    pending = []  # heap of (toplen, tiebreak, tag); products are materialized lazily
    hard_cap = depth_limit + 1

    def vec_of(comp):
        return {reg.ids[p]: c for p, c in comp.terms.items()}

    def push(toplen, tag):
        heapq.heappush(pending, (toplen, next(counter), tag))

    arrows = list(quiver.arrows.values())

    def schedule_products(row, toplen):
        if toplen + 1 > hard_cap:
            return
        pid0 = max(row)
        p0 = reg.paths[pid0]
        for a in arrows:
            if a.src == p0.tgt:
                push(toplen + 1, ("L", a.id, pid0))
            if a.tgt == p0.src:
                push(toplen + 1, ("R", a.id, pid0))

    def materialize(tag):
        kind = tag[0]
        if kind == "V":
            return tag[1]
        _, aid, piv = tag
        row = ech.rows[piv]
        a = quiver.arrows[aid]
        vec = {}
        if kind == "L":
            for pid, c in row.items():
                p = reg.paths[pid]
                vec[reg.ids[Path((a.id,) + p.arrows, p.src, a.tgt)]] = c
        else:
            for pid, c in row.items():
                p = reg.paths[pid]
                vec[reg.ids[Path(p.arrows + (a.id,), a.src, p.tgt)]] = c
        return vec

    def drain(upto):
        reg.extend_to(min(upto, hard_cap))
        while pending and pending[0][0] <= upto:
            _t, _c, tag = heapq.heappop(pending)
            r = ech.reduce(materialize(tag))
            if not r:
                continue
            piv = max(r)
            inv = ONE / r[piv]
            ech.rows[piv] = {k: c * inv for k, c in r.items()}
            schedule_products(ech.rows[piv], reg.layer_of(piv))

    def layer_full(l):
        lo, hi = reg.layer_range(l)
        return all(pid in ech.rows for pid in range(lo, hi))

    stab = None
    L = 0
    while True:
        reg.extend_to(max(L, 1))
        for toplen, comp in comps:
            if toplen == L:
                push(toplen, ("V", vec_of(comp)))
        drain(L)
        if want_stabilization and L >= 1 and L >= max_rel_len and layer_full(L):
            stab = L
            break
        if L >= depth_limit:
            if want_stabilization:
                raise NotStabilized(depth_limit)
            break
        L += 1

    if stab is not None:
        # one more layer of closure so leading terms stay upward closed
        reg.extend_to(stab + 1)
        drain(stab + 1)
        if not layer_full(stab):  # cancellations may only add pivots
            raise NotStabilized(depth_limit, "stabilization layer lost after closure")
    return reg, ech, stab, (stab + 1 if stab is not None else depth_limit)


def _build_algebra(pres, reg, ech, stab, drained, truncated):
    cutoff = stab if stab is not None else drained + 1
    basis = []
    for pid in range(reg.layer_start[min(cutoff, reg.depth + 1)]):
        if pid not in ech.rows:
            basis.append(pid)
    index = {pid: i for i, pid in enumerate(basis)}

    def nf_coords(vec):
        r = ech.reduce(vec)
        return {index[pid]: c for pid, c in r.items()}

    right = {}
    left = {}
    for a in pres.quiver.arrows.values():
        ra = {}
        la = {}
        for i, pid in enumerate(basis):
            p = reg.paths[pid]
            if p.src == a.tgt:
                q = Path(p.arrows + (a.id,), a.src, p.tgt)
                if len(q) > drained and truncated:
                    ra[i] = {}
                else:
                    ra[i] = nf_coords({reg.ids[q]: ONE})
            if p.tgt == a.src:
                q = Path((a.id,) + p.arrows, p.src, a.tgt)
                if len(q) > drained and truncated:
                    la[i] = {}
                else:
                    la[i] = nf_coords({reg.ids[q]: ONE})
        right[a.id] = ra
        left[a.id] = la

    return TableAlgebra(
        pres.quiver,
        [reg.paths[pid] for pid in basis],
        right,
        left,
        phi=pres.phi,
        stabilization_layer=stab,
        truncated_at=(drained if truncated else None),
        presentation=pres,
    )


def quotient_basis(pres: AlgebraPresentation, max_len=32) -> TableAlgebra:
    """Basis and multiplication table of kQ / <relations>.

    Succeeds iff some length layer <= max_len reduces entirely to shorter
    normal forms; the returned table carries the certificate (associativity,
    unit laws, fixed basis, vanishing relations are all verified here).
    Raises NotStabilized otherwise.
    """
    pres.validate_relations()
    reg, ech, stab, drained = _window_eliminate(pres, max_len, want_stabilization=True)
    alg = _build_algebra(pres, reg, ech, stab, drained, truncated=False)
    if not (alg.verify_units() and alg.verify_basis_fixed()):
        raise NotStabilized(max_len, "window reduction is inconsistent on the basis")
    if not alg.verify_associative_on_arrows():
        raise NotStabilized(max_len, "multiplication table failed associativity")
    if not alg.verify_relations_vanish(pres.relations):
        raise NotStabilized(max_len, "a relation does not vanish in the computed quotient")
    return alg


def truncated_algebra(pres: AlgebraPresentation, window) -> TableAlgebra:
    """kQ / (<relations> + all paths longer than the window).

    Only valid for length-homogeneous relations, where the long-path ideal
    is compatible with the grading; used for infinite-dimensional graded
    algebras such as preprojective algebras of non-Dynkin graphs.
    """
    pres.validate_relations()
    if not pres.is_length_homogeneous():
        raise InvalidRelation("length truncation needs length-homogeneous relations")
    reg, ech, stab, drained = _window_eliminate(pres, window, want_stabilization=False)
    alg = _build_algebra(pres, reg, ech, stab, drained, truncated=(stab is None))
    return alg


def algebra_dimension(pres: AlgebraPresentation, max_len=32) -> int:
    return quotient_basis(pres, max_len).dim


def quotient_by_ideal(alg: TableAlgebra, ideal: Echelon) -> TableAlgebra:
    """Quotient of a table algebra by a two-sided ideal given as an echelon
    over the algebra coordinates (pivots on the largest, i.e. deglex-top,
    basis index)."""
    basis = [i for i in range(alg.dim) if i not in ideal.rows]
    index = {i: k for k, i in enumerate(basis)}

    def project(vec):
        r = ideal.reduce(vec)
        return {index[i]: c for i, c in r.items()}

    right = {}
    left = {}
    for aid in alg.quiver.arrows:
        ra = {}
        la = {}
        for k, i in enumerate(basis):
            r = alg._right[aid].get(i)
            if r is not None:
                ra[k] = project(r)
            l = alg._left[aid].get(i)
            if l is not None:
                la[k] = project(l)
        right[aid] = ra
        left[aid] = la

    return TableAlgebra(
        alg.quiver,
        [alg.basis[i] for i in basis],
        right,
        left,
        phi=alg.phi,
        stabilization_layer=None,
        truncated_at=alg.truncated_at,
        presentation=alg.presentation,
    )


# ---------------------------------------------------------------------------
# JSON wire format for path elements:
# [{"coef":"p/q","path":[arrowIds]}] with stationary terms given as
# {"coef":"p/q","vertex":i}.

def path_element_to_json(pe: PathElement):
    out = []
    for p in sorted(pe.terms, key=Path.deglex_key):
        c = pe.terms[p]
        cs = "%d/%d" % (c.numerator, c.denominator) if c.denominator != 1 else str(c.numerator)
        if len(p) == 0:
            out.append({"coef": cs, "vertex": p.src})
        else:
            out.append({"coef": cs, "path": list(p.arrows)})
    return out


def path_element_from_json(data, quiver: Quiver) -> PathElement:
    from .quiver import SchemaViolation

    if not isinstance(data, list):
        raise SchemaViolation("path element JSON must be a list of terms")
    terms = []
    for d in data:
        if not isinstance(d, dict) or "coef" not in d:
            raise SchemaViolation("path element term needs 'coef'")
        try:
            c = Fraction(d["coef"])
        except (ValueError, ZeroDivisionError):
            raise SchemaViolation("bad coefficient %r" % (d.get("coef"),))
        if "vertex" in d:
            if not quiver.has_vertex(d["vertex"]):
                raise SchemaViolation("unknown vertex %r" % (d["vertex"],))
            terms.append((stationary(d["vertex"]), c))
        elif "path" in d:
            try:
                terms.append((path_of(quiver, d["path"], allow_names=False), c))
            except PathAlgebraError as e:
                raise SchemaViolation(str(e))
        else:
            raise SchemaViolation("path element term needs 'path' or 'vertex'")
    return PathElement(terms)


def left_divide(elem: PathElement, arrow_id, quiver) -> PathElement:
    """a^{-1} x: keep the terms whose word starts with the arrow and strip
    it, drop everything else."""
    out = []
    for p, c in elem.terms.items():
        if p.arrows and p.arrows[0] == arrow_id:
            w = p.arrows[1:]
            if w:
                out.append((Path(w, p.src, quiver.src(arrow_id)), c))
            else:
                out.append((Path((), p.src, p.src), c))
    return PathElement(out)
