"""Finite-dimensional modules: preprojective algebras, word ideals, the
summands of the standard rigid module, Hom spaces, endomorphism quivers,
resolutions and exactness checks.

Modules are stored as covariant representations: the matrix of an arrow maps
the source component to the target component (shape target-dim x source-dim),
and words act rightmost first.  Right modules over an algebra presented on a
quiver are the covariant representations of the *opposite* presentation, so
the word-ideal machinery returns its modules together with that opposite
presentation; Hom conditions, endomorphism quivers and exactness checks are
convention-free once everything lives over one presentation.
"""

from dataclasses import dataclass
from fractions import Fraction

from .quiver import Quiver, Arrow
from .paths import (
    AlgebraPresentation,
    Path,
    PathElement,
    TableAlgebra,
    NotStabilized,
    quotient_basis,
    truncated_algebra,
    quotient_by_ideal,
    stationary,
)
from .potential import Potential
from .coxeter import coxeter_system, is_reduced, NotReduced
from .ratlin import Echelon, ZERO, ONE, mat_mul, nullspace, rank, rref, solve, zeros, identity


class ModRepError(Exception):
    pass


class OrientedCycle(ModRepError):
    pass


class NotAComplex(ModRepError):
    def __init__(self, position):
        self.position = position
        super().__init__("maps at position %d do not compose to zero" % position)


class NotLocal(ModRepError):
    def __init__(self, i):
        self.summand = i
        super().__init__("summand %d does not have a local endomorphism ring" % i)


class IsomorphicSummands(ModRepError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__("summands %d and %d are isomorphic" % (i, j))


class AboveBound(ModRepError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__("projective dimension exceeds bound %d" % bound)


# ---------------------------------------------------------------------------
# modules


class FDModule:
    """Dimension vector plus one exact matrix per arrow (target x source),
    with an optional integer grading of the basis vectors per vertex."""

    def __init__(self, quiver: Quiver, dims, mats=None, grading=None):
        self.quiver = quiver
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        self.mats = {}
        mats = mats or {}
        for a in quiver.arrows.values():
            m = mats.get(a.id)
            if m is None:
                m = zeros(self.dims[a.tgt], self.dims[a.src])
            if len(m) != self.dims[a.tgt] or (m and len(m[0]) != self.dims[a.src]):
                raise ModRepError("matrix shape mismatch on arrow %r" % (a.id,))
            self.mats[a.id] = [[Fraction(x) for x in row] for row in m]
        self.grading = None
        if grading is not None:
            self.grading = {v: list(grading.get(v, [])) for v in quiver.vertices}
            for v in quiver.vertices:
                if len(self.grading[v]) != self.dims[v]:
                    raise ModRepError("grading length mismatch at vertex %r" % (v,))

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return self.total_dim == 0

    def act_word(self, word, src_vertex):
        """Matrix of a word of arrows acting component(src) -> component(tgt)."""
        q = self.quiver
        if not word:
            return identity(self.dims[src_vertex])
        # a vanishing intermediate component kills the composite
        verts = [src_vertex] + [q.tgt(aid) for aid in reversed(word)]
        if any(self.dims[v] == 0 for v in verts):
            return zeros(self.dims[q.tgt(word[0])], self.dims[src_vertex])
        mat = None
        for aid in reversed(word):
            mat = self.mats[aid] if mat is None else mat_mul(self.mats[aid], mat)
        return mat

    def evaluates_relations_to_zero(self, relations):
        for r in relations:
            for (tgt, src), comp in r.blocks():
                if self.dims[src] == 0 or self.dims[tgt] == 0:
                    continue
                acc = zeros(self.dims[tgt], self.dims[src])
                for p, c in comp.terms.items():
                    m = self.act_word(p.arrows, src)
                    for i in range(len(acc)):
                        for j in range(len(acc[0])):
                            acc[i][j] += c * m[i][j]
                if any(any(x for x in row) for row in acc):
                    return False
        return True

    def graded_matrices_ok(self, arrow_degrees):
        """Each arrow matrix homogeneous of the arrow's declared degree."""
        if self.grading is None:
            return True
        for a in self.quiver.arrows.values():
            d = arrow_degrees[a.id]
            gs, gt = self.grading[a.src], self.grading[a.tgt]
            m = self.mats[a.id]
            for i in range(len(m)):
                for j in range(len(m[0]) if m else 0):
                    if m[i][j] and gt[i] != gs[j] + d:
                        return False
        return True


def direct_sum(modules):
    if not modules:
        raise ModRepError("empty direct sum")
    q = modules[0].quiver
    dims = {v: sum(m.dims[v] for m in modules) for v in q.vertices}
    grading = None
    if all(m.grading is not None for m in modules):
        grading = {v: sum((m.grading[v] for m in modules), []) for v in q.vertices}
    mats = {}
    for a in q.arrows.values():
        big = zeros(dims[a.tgt], dims[a.src])
        ro = co = 0
        for m in modules:
            sub = m.mats[a.id]
            for i in range(m.dims[a.tgt]):
                for j in range(m.dims[a.src]):
                    big[ro + i][co + j] = sub[i][j]
            ro += m.dims[a.tgt]
            co += m.dims[a.src]
        mats[a.id] = big
    return FDModule(q, dims, mats, grading)


def simple_module(quiver: Quiver, v) -> FDModule:
    return FDModule(quiver, {v: 1})


def zero_module(quiver: Quiver) -> FDModule:
    return FDModule(quiver, {})


# ---------------------------------------------------------------------------
# projectives over a computed table algebra


def left_projective_module(alg: TableAlgebra, v) -> FDModule:
    """A e_v as a covariant representation of the algebra's quiver: basis
    elements starting at v, arrows acting by left multiplication."""
    idx = [i for i in range(alg.dim) if alg.src[i] == v]
    comp = {}
    for k, i in enumerate(idx):
        comp.setdefault(alg.tgt[i], []).append(i)
    pos = {}
    for vert, members in comp.items():
        for r, i in enumerate(members):
            pos[i] = r
    dims = {vert: len(members) for vert, members in comp.items()}
    mats = {}
    for a in alg.quiver.arrows.values():
        m = zeros(dims.get(a.tgt, 0), dims.get(a.src, 0))
        for i in comp.get(a.src, []):
            out = alg._left[a.id].get(i)
            if not out:
                continue
            for k, c in out.items():
                m[pos[k]][pos[i]] = c
        mats[a.id] = m
    grading = None
    if alg.degree is not None:
        grading = {vert: [alg.degree[i] for i in members] for vert, members in comp.items()}
    mod = FDModule(alg.quiver, dims, mats, grading)
    mod.basis_elements = {vert: list(members) for vert, members in comp.items()}
    return mod


def right_projective_module(alg: TableAlgebra, v):
    """e_v A as a covariant representation of the opposite quiver (a right
    module); returns (module, opposite quiver)."""
    qop = alg.quiver.opposite()
    idx = [i for i in range(alg.dim) if alg.tgt[i] == v]
    comp = {}
    for i in idx:
        comp.setdefault(alg.src[i], []).append(i)
    pos = {}
    for vert, members in comp.items():
        for r, i in enumerate(members):
            pos[i] = r
    dims = {vert: len(members) for vert, members in comp.items()}
    mats = {}
    for a in alg.quiver.arrows.values():
        # over qop, arrow a runs tgt(a) -> src(a); action is right mult by a
        m = zeros(dims.get(a.src, 0), dims.get(a.tgt, 0))
        for i in comp.get(a.tgt, []):
            out = alg._right[a.id].get(i)
            if not out:
                continue
            for k, c in out.items():
                m[pos[k]][pos[i]] = c
        mats[a.id] = m
    grading = None
    if alg.degree is not None:
        grading = {vert: [alg.degree[i] for i in members] for vert, members in comp.items()}
    mod = FDModule(qop, dims, mats, grading)
    mod.basis_elements = {vert: list(members) for vert, members in comp.items()}
    return mod


def left_multiplication_hom(alg: TableAlgebra, elem_coords, src_vertex, tgt_vertex):
    """Left multiplication by an element of e_tgt A e_src, as a map of right
    projectives e_src A -> e_tgt A (both over the opposite quiver)."""
    P = right_projective_module(alg, src_vertex)
    Q = right_projective_module(alg, tgt_vertex)
    fam = {}
    for vert in alg.quiver.vertices:
        m = zeros(Q.dims.get(vert, 0), P.dims.get(vert, 0))
        members_p = P.basis_elements.get(vert, [])
        members_q = Q.basis_elements.get(vert, [])
        qpos = {i: r for r, i in enumerate(members_q)}
        for cidx, i in enumerate(members_p):
            out = alg.elem_mult(elem_coords, {i: ONE})
            for k, c in out.items():
                m[qpos[k]][cidx] = c
        fam[vert] = m
    return fam, P, Q


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass
class HomElement:
    mats: dict         # vertex -> matrix (N-dim x M-dim)
    degree: int = None


def _vectorize(fam, verts, dimsM, dimsN):
    out = []
    for v in verts:
        m = fam.get(v)
        for i in range(dimsN[v]):
            for j in range(dimsM[v]):
                out.append(m[i][j] if m else ZERO)
    return out


def hom_space(pres, M: FDModule, N: FDModule):
    """Basis of the intertwiner space Hom(M, N): families f_v with
    f_tgt(a) . M_a = N_a . f_src(a) for every arrow, solved exactly.  When
    both modules are graded the basis splits by degree shift and each basis
    element carries its shift."""
    quiver = pres.quiver if isinstance(pres, AlgebraPresentation) else pres
    unknowns = []       # (v, i, j)
    for v in quiver.vertices:
        for i in range(N.dims[v]):
            for j in range(M.dims[v]):
                unknowns.append((v, i, j))
    index = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for a in quiver.arrows.values():
        s, t = a.src, a.tgt
        Ma, Na = M.mats[a.id], N.mats[a.id]
        for i in range(N.dims[t]):
            for j in range(M.dims[s]):
                row = [ZERO] * len(unknowns)
                # (f_t . M_a)_{i,j} = sum_k f_t[i,k] Ma[k,j]
                for k in range(M.dims[t]):
                    if Ma[k][j]:
                        row[index[(t, i, k)]] += Ma[k][j]
                # (N_a . f_s)_{i,j} = sum_k Na[i,k] f_s[k,j]
                for k in range(N.dims[s]):
                    if Na[i][k]:
                        row[index[(s, k, j)]] -= Na[i][k]
                if any(row):
                    rows.append(row)
    graded = M.grading is not None and N.grading is not None

    def family_of(vec):
        fam = {v: zeros(N.dims[v], M.dims[v]) for v in quiver.vertices}
        for k, (v, i, j) in enumerate(unknowns):
            if vec[k]:
                fam[v][i][j] = vec[k]
        return fam

    if not graded:
        return [HomElement(family_of(vec)) for vec in nullspace(rows, len(unknowns))]

    shifts = set()
    for v in quiver.vertices:
        for i in range(N.dims[v]):
            for j in range(M.dims[v]):
                shifts.add(N.grading[v][i] - M.grading[v][j])
    out = []
    for d in sorted(shifts):
        keep = [k for k, (v, i, j) in enumerate(unknowns)
                if N.grading[v][i] - M.grading[v][j] == d]
        if not keep:
            continue
        sub_rows = [[row[k] for k in keep] for row in rows]
        for vec in nullspace(sub_rows, len(keep)):
            full = [ZERO] * len(unknowns)
            for pos, k in enumerate(keep):
                full[k] = vec[pos]
            out.append(HomElement(family_of(full), degree=d))
    return out


def hom_dim(pres, M, N):
    return len(hom_space(pres, M, N))


def compose_homs(g: HomElement, f: HomElement, quiver, M: FDModule, N: FDModule, P: FDModule):
    """g after f for f: M -> N and g: N -> P; shapes tracked explicitly so
    zero components compose correctly."""
    from .ratlin import shaped_mul

    mats = {v: shaped_mul(g.mats[v], f.mats[v], P.dims[v], N.dims[v], M.dims[v])
            for v in quiver.vertices}
    d = None
    if g.degree is not None and f.degree is not None:
        d = g.degree + f.degree
    return HomElement(mats, d)


# ---------------------------------------------------------------------------
# endomorphism algebra of a list of summands


class EndAlgebra:
    """End of a direct sum, assembled from Hom blocks with exact structure
    constants.  Radical by the characteristic-zero trace form."""

    def __init__(self, pres, summands):
        self.quiver = pres.quiver if isinstance(pres, AlgebraPresentation) else pres
        self.summands = list(summands)
        n = len(summands)
        self.blocks = {}
        self.basis = []     # (i, j, k): k-th basis hom T_i -> T_j
        for i, Ti in enumerate(summands):
            for j, Tj in enumerate(summands):
                homs = hom_space(self.quiver, Ti, Tj)
                self.blocks[(i, j)] = homs
                for k in range(len(homs)):
                    self.basis.append((i, j, k))
        self.index = {b: t for t, b in enumerate(self.basis)}
        self._block_mat = {}
        for (i, j), homs in self.blocks.items():
            verts = self.quiver.vertices
            cols = [_vectorize(h.mats, verts, summands[i].dims, summands[j].dims) for h in homs]
            self._block_mat[(i, j)] = cols
        self._sc = {}

    @property
    def dim(self):
        return len(self.basis)

    def coords_of(self, i, j, hom: HomElement):
        cols = self._block_mat[(i, j)]
        if not cols:
            return []
        vec = _vectorize(hom.mats, self.quiver.vertices, self.summands[i].dims, self.summands[j].dims)
        mat = [[cols[c][r] for c in range(len(cols))] for r in range(len(cols[0]))]
        sol = solve(mat, vec)
        if sol is None:
            raise ModRepError("composite left the computed Hom block")
        return sol

    def struct(self, x, y):
        """Coordinates of basis[x] . basis[y] (composition: y first)."""
        key = (x, y)
        hit = self._sc.get(key)
        if hit is not None:
            return hit
        (i1, j1, k1) = self.basis[x]
        (i2, j2, k2) = self.basis[y]
        out = {}
        if j2 == i1:
            g = self.blocks[(i1, j1)][k1]
            f = self.blocks[(i2, j2)][k2]
            comp = compose_homs(g, f, self.quiver,
                                self.summands[i2], self.summands[j2], self.summands[j1])
            coords = self.coords_of(i2, j1, comp)
            for k, c in enumerate(coords):
                if c:
                    out[self.index[(i2, j1, k)]] = c
        self._sc[key] = out
        return out

    def radical(self):
        """Basis of the radical: nullspace of the trace form of left
        multiplication."""
        n = self.dim
        tracevec = [ZERO] * n
        for x in range(n):
            t = ZERO
            for y in range(n):
                t += self.struct(x, y).get(y, ZERO)
            tracevec[x] = t
        gram = [[ZERO] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                g = ZERO
                for k, c in self.struct(x, y).items():
                    g += c * tracevec[k]
                gram[x][y] = g
        return nullspace(gram, n)

    def _mult_vecs(self, u, v):
        out = {}
        for x, cx in enumerate(u):
            if not cx:
                continue
            for y, cy in enumerate(v):
                if not cy:
                    continue
                for k, c in self.struct(x, y).items():
                    s = out.get(k, ZERO) + cx * cy * c
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def block_of_coord(self, t):
        i, j, _k = self.basis[t]
        return (i, j)

    def degree_of_coord(self, t):
        i, j, k = self.basis[t]
        return self.blocks[(i, j)][k].degree


@dataclass
class EndQuiverReport:
    quiver: Quiver
    arrow_counts: dict          # (i, j) -> number of arrows i -> j
    arrow_degrees: dict         # (i, j) -> sorted degree list or None
    rad_dim: int
    end_dim: int


def end_gabriel_quiver(pres, summands, names=None):
    """Gabriel quiver of End(T_1 + ... + T_n): vertices 1..n, arrows i -> j
    counted by the (i, j) block of rad/rad^2, the block of irreducible maps
    T_i -> T_j.  Raises NotLocal / IsomorphicSummands when the summands are
    not pairwise distinct indecomposables with split endomorphism rings."""
    E = EndAlgebra(pres, summands)
    n = len(summands)
    rad_vecs = E.radical()

    # split blocks: the radical is stable under the idempotent sandwich
    def block_split(vecs):
        per = {}
        for v in vecs:
            seen = {}
            for t, c in enumerate(v):
                if c:
                    seen.setdefault(E.block_of_coord(t), {})[t] = c
            for blk, sv in seen.items():
                per.setdefault(blk, []).append(sv)
        out = {}
        for blk, rows in per.items():
            ech = Echelon()
            for r in rows:
                ech.add(r)
            out[blk] = ech
        return out

    rad_blocks = block_split(rad_vecs)

    for i in range(n):
        e_dim = len(E.blocks[(i, i)])
        r_dim = rad_blocks.get((i, i), Echelon()).dim
        if e_dim - r_dim != 1:
            raise NotLocal(i + 1)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            e_dim = len(E.blocks[(i, j)])
            r_dim = rad_blocks.get((i, j), Echelon()).dim
            if e_dim != r_dim:
                raise IsomorphicSummands(i + 1, j + 1)

    rad_list = [dict(r) for blk in sorted(rad_blocks) for r in rad_blocks[blk].basis()]
    radsq = []
    for u in rad_list:
        uv = [ZERO] * E.dim
        for t, c in u.items():
            uv[t] = c
        for w in rad_list:
            wv = [ZERO] * E.dim
            for t, c in w.items():
                wv[t] = c
            prod = E._mult_vecs(uv, wv)
            if prod:
                radsq.append([prod.get(t, ZERO) for t in range(E.dim)])
    radsq_blocks = block_split(radsq)

    graded = all(h.degree is not None for homs in E.blocks.values() for h in homs)

    arrow_counts = {}
    arrow_degrees = {}
    arrows = []
    next_id = 1
    for i in range(n):
        for j in range(n):
            r = rad_blocks.get((i, j), Echelon()).dim
            r2 = radsq_blocks.get((i, j), Echelon()).dim
            cnt = r - r2
            if cnt <= 0:
                continue
            arrow_counts[(i + 1, j + 1)] = cnt
            if graded:
                degs = _graded_block_dims(E, rad_blocks.get((i, j)), radsq_blocks.get((i, j)), (i, j))
                arrow_degrees[(i + 1, j + 1)] = degs
            for k in range(cnt):
                arrows.append(Arrow(next_id, i + 1, j + 1, "m%d_%d_%d" % (i + 1, j + 1, k)))
                next_id += 1
    q = Quiver(range(1, n + 1), arrows)
    rad_dim = sum(b.dim for b in rad_blocks.values())
    return EndQuiverReport(q, arrow_counts, arrow_degrees if graded else None, rad_dim, E.dim)


def _graded_block_dims(E, rad_block, radsq_block, blk):
    """Degrees of the irreducible maps in one block: per-degree dimensions
    of rad minus rad^2.  Both spaces are graded, so the dimension in degree
    d is the number of independent combinations supported on the degree-d
    coordinates; a total mismatch would mean an arithmetic bug."""
    degrees = sorted({E.degree_of_coord(t) for t in range(E.dim)
                      if E.block_of_coord(t) == blk})

    def graded_dims(ech):
        if ech is None:
            return {}
        rows = ech.basis()
        if not rows:
            return {}
        per = {}
        coords = sorted({t for r in rows for t in r})
        for d in degrees:
            off = [t for t in coords if E.degree_of_coord(t) != d]
            mat = [[r.get(t, ZERO) for r in rows] for t in off]
            k = len(rows) if not mat else len(nullspace(mat, len(rows)))
            if k:
                per[d] = k
        if sum(per.values()) != len(rows):
            raise ModRepError("radical block is not graded; arithmetic bug")
        return per

    per_rad = graded_dims(rad_block)
    per_sq = graded_dims(radsq_block)
    out = []
    for d in sorted(per_rad):
        out.extend([d] * (per_rad[d] - per_sq.get(d, 0)))
    return sorted(out)


# ---------------------------------------------------------------------------
# preprojective algebras and word ideals


def _has_oriented_cycle(quiver: Quiver):
    indeg = {v: 0 for v in quiver.vertices}
    for a in quiver.arrows.values():
        indeg[a.tgt] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for a in quiver.arrows.values():
            if a.src == v:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    queue.append(a.tgt)
    return seen != len(quiver.vertices)


def star_arrow_id(quiver: Quiver, aid):
    return aid + max(quiver.arrows, default=0) + 1


def preprojective_presentation(orientation: Quiver) -> AlgebraPresentation:
    """Double quiver modulo the vertex components of sum(a a* - a* a),
    graded by deg(a) = 0 and deg(a*) = 1."""
    if _has_oriented_cycle(orientation):
        raise OrientedCycle("preprojective presentation needs an acyclic orientation")
    offset = max(orientation.arrows, default=0) + 1
    arrows = list(orientation.arrows.values())
    for a in orientation.arrows.values():
        arrows.append(Arrow(a.id + offset, a.tgt, a.src, (a.name or "a%d" % a.id) + "*"))
    dq = Quiver(orientation.vertices, arrows)
    phi = {}
    for a in orientation.arrows.values():
        phi[a.id] = 0
        phi[a.id + offset] = 1
    relations = []
    for v in orientation.vertices:
        terms = []
        for a in orientation.arrows.values():
            star = a.id + offset
            # a a* is a cycle at t(a); a* a is a cycle at s(a)
            if a.tgt == v:
                terms.append((Path((a.id, star), v, v), Fraction(1)))
            if a.src == v:
                terms.append((Path((star, a.id), v, v), Fraction(-1)))
        r = PathElement(terms)
        if not r.is_zero():
            relations.append(r)
    return AlgebraPresentation(dq, relations, phi=phi)


def _left_ideal_closure(alg: TableAlgebra, seed_rows):
    """Echelon of the left ideal generated by the given coordinate vectors,
    closed under left multiplication by arrows.  Every row of the result is
    block-pure, so vectors keep a single target vertex."""
    ech = Echelon()
    work = []
    for r in seed_rows:
        p = ech.add(r)
        if p is not None:
            work.append(ech.rows[p])
    while work:
        row = work.pop()
        tgt = alg.tgt[max(row)]
        for a in alg.quiver.arrows.values():
            if a.src != tgt:
                continue
            prod = alg.left_arrow(row, a.id)
            if not prod:
                continue
            p = ech.add(prod)
            if p is not None:
                work.append(ech.rows[p])
    return ech


def vertex_annihilating_ideal(alg: TableAlgebra, v) -> Echelon:
    """Image of the two-sided ideal generated by the idempotents away from
    v: the span of all basis elements passing through a vertex other than v,
    as left-closure of the basis elements not ending at v."""
    seeds = [{i: ONE} for i in range(alg.dim) if alg.tgt[i] != v]
    return _left_ideal_closure(alg, seeds)


def word_ideal_chain(alg: TableAlgebra, word):
    """Echelons of the images of the word ideals I_{u_p} ... I_{u_1} for
    every prefix, computed by I_{w_p} = Lambda (1 - e_{u_p}) I_{w_{p-1}}."""
    chain = []
    prev = None
    for u in word:
        if prev is None:
            ech = vertex_annihilating_ideal(alg, u)
        else:
            seeds = [dict(row) for piv, row in prev.rows.items() if alg.tgt[piv] != u]
            ech = _left_ideal_closure(alg, seeds)
        chain.append(ech)
        prev = ech
    return chain


def _quotient_layer_dims(alg: TableAlgebra, ideal: Echelon):
    out = {}
    for i in range(alg.dim):
        if i not in ideal.rows:
            out[alg.length[i]] = out.get(alg.length[i], 0) + 1
    return out


@dataclass
class LambdaWResult:
    algebra: TableAlgebra          # Lambda / I_w with its table
    window_algebra: TableAlgebra   # the length-truncated ambient algebra
    ideal_chain: list              # per-prefix ideal echelons in the window
    word: tuple
    orientation: Quiver
    presentation: AlgebraPresentation
    dim: int
    layer_dims: dict
    window: int


def _admissible_reorient(graph: Quiver, word):
    """Orient every edge whose endpoints both occur in the word by the
    last-occurrence rule (earlier last occurrence is the source); edges
    touching unused vertices keep their input direction.  The algebra does
    not depend on the orientation, but the degree map does, and only this
    orientation makes the module gradings match the word-quiver grading."""
    t = {}
    for p, u in enumerate(word, start=1):
        t[u] = p
    arrows = []
    for a in graph.arrows.values():
        if a.src in t and a.tgt in t and t[a.src] > t[a.tgt]:
            arrows.append(Arrow(a.id, a.tgt, a.src, a.name))
        else:
            arrows.append(a)
    return Quiver(graph.vertices, arrows)


def lambda_w_algebra(orientation: Quiver, word, max_len=32, start_window=6) -> LambdaWResult:
    """The finite-dimensional quotient of the preprojective algebra by the
    word ideal, with a stabilization certificate.

    The input orientation is replaced by the admissible one for the word
    (the quotient itself is orientation independent; the grading is not).
    The preprojective relations are length homogeneous, so the quotient is
    length graded and one empty layer inside the window proves that all the
    higher layers vanish; we ask for the top two layers of the window to be
    empty before trusting the answer, and grow the window otherwise."""
    word = tuple(word)
    sys = coxeter_system(orientation)
    if not is_reduced(sys, word):
        raise NotReduced("word %r is not reduced" % (word,))
    orientation = _admissible_reorient(orientation, word)
    pres = preprojective_presentation(orientation)
    window = min(start_window, max_len)
    while True:
        alg = truncated_algebra(pres, window)
        chain = word_ideal_chain(alg, word)
        layers = _quotient_layer_dims(alg, chain[-1])
        top = max(layers) if layers else 0
        effective = alg.stabilization_layer
        if effective is not None:
            # the ambient algebra itself is finite dimensional: exact
            ok = True
        else:
            ok = layers.get(window, 0) == 0 and layers.get(window - 1, 0) == 0
        if ok:
            quot = quotient_by_ideal(alg, chain[-1])
            return LambdaWResult(quot, alg, chain, word, orientation, pres,
                                 quot.dim, layers, window)
        if window >= max_len:
            raise NotStabilized(max_len, "word-ideal quotient did not close inside the window")
        window = min(window + 2, max_len)


@dataclass
class TwBundle:
    modules: list                    # T_p in word order (covariant reps)
    action_presentation: AlgebraPresentation   # opposite double quiver
    lam: LambdaWResult
    dims: list

    def summand(self, p):
        return self.modules[p - 1]


def _row_module(alg: TableAlgebra, ideal: Echelon, v) -> FDModule:
    """e_v (A / ideal) as a right module: covariant rep of the opposite
    quiver with the right arrow action."""
    qop = alg.quiver.opposite()
    members = [i for i in range(alg.dim) if alg.tgt[i] == v and i not in ideal.rows]
    comp = {}
    for i in members:
        comp.setdefault(alg.src[i], []).append(i)
    pos = {}
    for vert, ms in comp.items():
        for r, i in enumerate(ms):
            pos[i] = r
    dims = {vert: len(ms) for vert, ms in comp.items()}
    mats = {}
    for a in alg.quiver.arrows.values():
        m = zeros(dims.get(a.src, 0), dims.get(a.tgt, 0))
        for i in comp.get(a.tgt, []):
            out = alg._right[a.id].get(i)
            if out is None:
                continue
            out = ideal.reduce(out)
            for k, c in out.items():
                m[pos[k]][pos[i]] = c
        mats[a.id] = m
    grading = None
    if alg.degree is not None:
        grading = {vert: [alg.degree[i] for i in ms] for vert, ms in comp.items()}
    mod = FDModule(qop, dims, mats, grading)
    mod.basis_elements = comp
    return mod


def tw_summands(orientation: Quiver, word, max_len=32) -> TwBundle:
    """The summands T_p = e_{u_p}(Lambda / I_{w_p}) as graded right modules
    (covariant representations of the opposite double quiver)."""
    lam = lambda_w_algebra(orientation, word, max_len=max_len)
    alg = lam.window_algebra
    mods = []
    for p, u in enumerate(lam.word, start=1):
        mods.append(_row_module(alg, lam.ideal_chain[p - 1], u))
    action = lam.presentation.opposite()
    for m in mods:
        if not m.evaluates_relations_to_zero(action.relations):
            raise ModRepError("summand fails the preprojective relations; arithmetic bug")
    return TwBundle(mods, action, lam, [m.total_dim for m in mods])


# ---------------------------------------------------------------------------
# radical, resolutions, global dimension


def table_radical(alg: TableAlgebra) -> Echelon:
    """Radical by the trace form: x is radical iff trace(L_{xy}) = 0 for
    every y, over the rationals."""
    n = alg.dim
    tracevec = [ZERO] * n
    for x in range(n):
        t = ZERO
        for y in range(n):
            t += alg.mult(x, y).get(y, ZERO)
        tracevec[x] = t
    gram = []
    for x in range(n):
        row = [ZERO] * n
        for y in range(n):
            g = ZERO
            for k, c in alg.mult(x, y).items():
                g += c * tracevec[k]
            row[y] = g
        gram.append(row)
    ech = Echelon()
    for vec in nullspace(gram, n):
        ech.add({i: c for i, c in enumerate(vec) if c})
    return ech


def _components_of_vec(alg, vec):
    per = {}
    for i, c in vec.items():
        per.setdefault((alg.tgt[i], alg.src[i]), {})[i] = c
    return per


def module_radical_subspace(alg: TableAlgebra, rad: Echelon, M: FDModule):
    """rad . M as per-vertex echelons of column vectors."""
    per_block = {}
    for row in rad.basis():
        for blk, sv in _components_of_vec(alg, row).items():
            per_block.setdefault(blk, []).append(sv)
    out = {v: Echelon() for v in alg.quiver.vertices}
    for (tv, sv_vert), elems in per_block.items():
        if M.dims.get(sv_vert, 0) == 0 or M.dims.get(tv, 0) == 0:
            continue
        for elem in elems:
            # action of the algebra element: sum of monomial word actions
            act = zeros(M.dims[tv], M.dims[sv_vert])
            for i, c in elem.items():
                w = alg.basis[i].arrows
                m = M.act_word(w, sv_vert)
                for r in range(len(act)):
                    for s in range(len(act[0])):
                        act[r][s] += c * m[r][s]
            for col in range(M.dims[sv_vert]):
                vec = {r: act[r][col] for r in range(M.dims[tv]) if act[r][col]}
                if vec:
                    out[tv].add(vec)
    return out


def projective_cover_data(alg: TableAlgebra, rad: Echelon, M: FDModule):
    """Top multiplicities and lifted generators: returns (mults, lifts)
    where lifts[v] is a list of column vectors of M_v spanning a complement
    of (rad M)_v."""
    radM = module_radical_subspace(alg, rad, M)
    mults = {}
    lifts = {}
    for v in alg.quiver.vertices:
        d = M.dims[v]
        sub = radM[v]
        mults[v] = d - sub.dim
        picks = []
        probe = Echelon()
        for piv, row in sub.rows.items():
            probe.add(dict(row))
        for j in range(d):
            vec = {j: ONE}
            if probe.add(vec) is not None:
                picks.append([ONE if r == j else ZERO for r in range(d)])
        lifts[v] = picks[: mults[v]]
        if len(lifts[v]) != mults[v]:
            raise ModRepError("projective cover lift failed; arithmetic bug")
    return mults, lifts


def _hom_from_projective(alg: TableAlgebra, P: FDModule, gen_vertex, target_vec_by_vertex, M: FDModule):
    """The module map P = A e_v -> M sending the generator to the given
    element of M_v: basis element b (a path class) goes to b . m."""
    fam = {}
    for vert in alg.quiver.vertices:
        cols = P.basis_elements.get(vert, [])
        m = zeros(M.dims[vert], len(cols))
        for cidx, i in enumerate(cols):
            w = alg.basis[i].arrows
            act = M.act_word(w, gen_vertex)
            col = [sum((act[r][s] * target_vec_by_vertex[s] for s in range(M.dims[gen_vertex])), ZERO)
                   for r in range(M.dims[vert])]
            for r in range(M.dims[vert]):
                m[r][cidx] = col[r]
        fam[vert] = m
    return fam


def kernel_module(quiver: Quiver, M: FDModule, fam, N: FDModule):
    """Kernel of a module map M -> N as a representation, with the
    inclusion matrices."""
    kbasis = {}
    for v in quiver.vertices:
        mat = fam.get(v) if fam.get(v) is not None else zeros(N.dims[v], M.dims[v])
        if M.dims[v] == 0:
            kbasis[v] = []
            continue
        if N.dims[v] == 0:
            kbasis[v] = [[ONE if r == j else ZERO for r in range(M.dims[v])] for j in range(M.dims[v])]
            continue
        kbasis[v] = nullspace(mat, M.dims[v])
    dims = {v: len(kbasis[v]) for v in quiver.vertices}
    incl = {v: [[kbasis[v][j][r] for j in range(dims[v])] for r in range(M.dims[v])]
            for v in quiver.vertices}
    mats = {}
    for a in quiver.arrows.values():
        s, t = a.src, a.tgt
        m = zeros(dims[t], dims[s])
        if dims[s] and M.dims[t]:
            img = mat_mul(M.mats[a.id], incl[s])   # M_t x dims[s]
            # solve incl_t . X = img
            if dims[t]:
                for col in range(dims[s]):
                    rhs = [img[r][col] for r in range(M.dims[t])]
                    x = solve(incl[t], rhs)
                    if x is None:
                        raise ModRepError("kernel is not a submodule; arithmetic bug")
                    for r in range(dims[t]):
                        m[r][col] = x[r]
            else:
                if any(img[r][col] for r in range(M.dims[t]) for col in range(dims[s])):
                    raise ModRepError("kernel is not a submodule; arithmetic bug")
        mats[a.id] = m
    grading = None
    return FDModule(quiver, dims, mats, grading), incl


@dataclass
class Resolution:
    steps: list        # list of (projective multiplicities dict)
    length: int


def projective_resolution(alg: TableAlgebra, vertex, bound=12, rad=None) -> Resolution:
    """Minimal projective resolution of the simple at a vertex, by iterated
    radical covers and exact kernels.  Raises AboveBound past the bound."""
    if rad is None:
        rad = table_radical(alg)
    if alg.dim - rad.dim != len(alg.quiver.vertices):
        raise ModRepError("algebra is not split basic over its radical")
    M = simple_module(alg.quiver, vertex)
    steps = []
    for step in range(bound + 1):
        if M.is_zero():
            return Resolution(steps, len(steps) - 1)
        mults, lifts = projective_cover_data(alg, rad, M)
        steps.append({v: m for v, m in sorted(mults.items()) if m})
        projs = []
        fams = []
        for v in alg.quiver.vertices:
            for vec in lifts[v]:
                P = left_projective_module(alg, v)
                projs.append(P)
                fams.append(_hom_from_projective(alg, P, v, vec, M))
        if not projs:
            raise ModRepError("nonzero module with zero cover; radical is wrong")
        big = direct_sum(projs)
        # assemble the block row of the cover map
        fam = {}
        for v in alg.quiver.vertices:
            m = zeros(M.dims[v], big.dims[v])
            off = 0
            for P, f in zip(projs, fams):
                piece = f[v]
                w = P.dims[v]
                for r in range(M.dims[v]):
                    for c in range(w):
                        m[r][off + c] = piece[r][c]
                off += w
            fam[v] = m
        K, _incl = kernel_module(alg.quiver, big, fam, M)
        M = K
    raise AboveBound(bound)


def global_dimension(pres_or_alg, bound=12, max_len=32):
    """Max projective dimension of the simples; AboveBound is raised when
    some simple resolves past the bound."""
    alg = pres_or_alg
    if isinstance(pres_or_alg, AlgebraPresentation):
        alg = quotient_basis(pres_or_alg, max_len=max_len)
    rad = table_radical(alg)
    best = 0
    for v in alg.quiver.vertices:
        res = projective_resolution(alg, v, bound=bound, rad=rad)
        best = max(best, res.length)
    return best


# ---------------------------------------------------------------------------
# complexes


def _fam_matrix(fam, v, rows, cols):
    m = fam.get(v)
    if m is None:
        return zeros(rows, cols)
    return m


def check_complex_exact(modules, maps, quiver=None):
    """Homology of a chain M_0 -> M_1 -> ... -> M_n.

    maps[i] sends modules[i] to modules[i+1] (vertex-indexed matrix
    families).  Consecutive composites must vanish (NotAComplex otherwise).
    Returns (exact, homology) with homology[i] the total homology dimension
    at position i; `exact` means every interior position is zero.  Pad with
    zero modules to check exactness at the ends.
    """
    n = len(modules)
    if len(maps) != n - 1:
        raise ModRepError("need one map between consecutive modules")
    q = quiver or modules[0].quiver
    ranks = []
    for i, fam in enumerate(maps):
        src, tgt = modules[i], modules[i + 1]
        r = 0
        for v in q.vertices:
            m = _fam_matrix(fam, v, tgt.dims[v], src.dims[v])
            if src.dims[v] and tgt.dims[v]:
                r += rank(m)
        ranks.append(r)
    # composite zero
    for i in range(len(maps) - 1):
        a, b = maps[i], maps[i + 1]
        mid, out = modules[i + 1], modules[i + 2]
        for v in q.vertices:
            if not (modules[i].dims[v] and out.dims[v] and mid.dims[v]):
                continue
            comp = mat_mul(_fam_matrix(b, v, out.dims[v], mid.dims[v]),
                           _fam_matrix(a, v, mid.dims[v], modules[i].dims[v]))
            if any(any(x for x in row) for row in comp):
                raise NotAComplex(i + 1)
    homology = []
    for i in range(n):
        into = ranks[i - 1] if i > 0 else 0
        outof = ranks[i] if i < n - 1 else 0
        homology.append(modules[i].total_dim - into - outof)
    exact = all(h == 0 for h in homology[1:-1]) if n > 2 else True
    return exact, homology


def intertwiner_is_module_map(quiver, M, N, fam):
    from .ratlin import shaped_mul

    for a in quiver.arrows.values():
        s, t = a.src, a.tgt
        lhs = shaped_mul(_fam_matrix(fam, t, N.dims[t], M.dims[t]), M.mats[a.id],
                         N.dims[t], M.dims[t], M.dims[s])
        rhs = shaped_mul(N.mats[a.id], _fam_matrix(fam, s, N.dims[s], M.dims[s]),
                         N.dims[t], N.dims[s], M.dims[s])
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# FDModule JSON: {"dims":{v:int}, "mats":{arrowId:[["p/q",...]]},
#                 "grading":{v:[int]}?}


def module_to_json(M: FDModule) -> dict:
    from .ratlin import frac_str

    out = {
        "dims": {str(v): M.dims[v] for v in M.quiver.vertices},
        "mats": {str(a): [[frac_str(x) for x in row] for row in M.mats[a]] for a in sorted(M.mats)},
    }
    if M.grading is not None:
        out["grading"] = {str(v): list(M.grading[v]) for v in M.quiver.vertices}
    return out


def module_from_json(data, quiver: Quiver) -> FDModule:
    from .quiver import SchemaViolation

    if not isinstance(data, dict) or "dims" not in data or "mats" not in data:
        raise SchemaViolation("module JSON needs 'dims' and 'mats'")
    try:
        dims = {int(k): int(v) for k, v in data["dims"].items()}
        mats = {int(k): [[Fraction(x) for x in row] for row in m] for k, m in data["mats"].items()}
        grading = None
        if "grading" in data and data["grading"] is not None:
            grading = {int(k): [int(x) for x in v] for k, v in data["grading"].items()}
        return FDModule(quiver, dims, mats, grading)
    except (ValueError, ZeroDivisionError, ModRepError) as e:
        raise SchemaViolation(str(e))


def block_map(quiver, row_modules, col_modules, entries):
    """Assemble a map of direct sums from a sparse dict of block families:
    entries[(r, c)] maps col_modules[c] -> row_modules[r]."""
    fam = {}
    for v in quiver.vertices:
        rows = sum(m.dims[v] for m in row_modules)
        cols = sum(m.dims[v] for m in col_modules)
        big = zeros(rows, cols)
        ro = 0
        for r, rm in enumerate(row_modules):
            co = 0
            for c, cm in enumerate(col_modules):
                e = entries.get((r, c))
                if e is not None:
                    sub = e[v] if not isinstance(e, HomElement) else e.mats[v]
                    for x in range(rm.dims[v]):
                        for y in range(cm.dims[v]):
                            big[ro + x][co + y] = sub[x][y]
                co += cm.dims[v]
            ro += rm.dims[v]
        fam[v] = big
    return fam


def top_projection(alg: TableAlgebra, P: FDModule, vertex):
    """The projection e_v A -> S_v killing the positive-length part;
    the positive-length span is a submodule since relations have no
    length-zero or length-one terms."""
    qop = P.quiver
    S = simple_module(qop, vertex)
    fam = {}
    for v in qop.vertices:
        m = zeros(S.dims[v], P.dims[v])
        if v == vertex:
            for cidx, bidx in enumerate(P.basis_elements.get(v, [])):
                if alg.length[bidx] == 0:
                    m[0][cidx] = ONE
        fam[v] = m
    return S, fam


def simple_projective_complex(alg: TableAlgebra, qp, vertex):
    """The five-term complex of right projectives over a frozen Jacobian
    algebra whose exactness expresses that the simple at a non-frozen
    vertex has the standard four-term resolution:

        0 -> e_i B -> + e_{t(b)} B -> + e_{s(a)} B -> e_i B -> S_i -> 0

    with the middle map given on the (a, b) block by left multiplication
    with the left quotient of the derivative along b by a.  Returns
    (modules, maps, opposite quiver) ready for check_complex_exact.
    """
    from .paths import left_divide, path_of
    from .potential import cyclic_derivative

    q = qp.quiver
    qop = q.opposite()
    i = vertex
    outs = sorted(q.arrows_from(i), key=lambda a: a.id)
    ins = sorted(q.arrows_to(i), key=lambda a: a.id)
    Pi = right_projective_module(alg, i)
    mid1 = [right_projective_module(alg, b.tgt) for b in outs]
    mid2 = [right_projective_module(alg, a.src) for a in ins]
    M1 = direct_sum(mid1) if mid1 else zero_module(qop)
    M2 = direct_sum(mid2) if mid2 else zero_module(qop)

    def lm(elem, src_v, tgt_v):
        fam, _P, _Q = left_multiplication_hom(alg, alg.element_of(elem), src_v, tgt_v)
        return fam

    ent3 = {}
    for r, barr in enumerate(outs):
        ent3[(r, 0)] = lm(PathElement.of(path_of(q, [barr.id], allow_names=False)), i, barr.tgt)
    d3 = block_map(q, mid1, [Pi], ent3)

    ent2 = {}
    for r, aarr in enumerate(ins):
        for c, barr in enumerate(outs):
            el = left_divide(cyclic_derivative(qp.potential, q, barr.id), aarr.id, q)
            if not el.is_zero():
                ent2[(r, c)] = lm(el, barr.tgt, aarr.src)
    d2 = block_map(q, mid2, mid1, ent2)

    ent1 = {}
    for c, aarr in enumerate(ins):
        ent1[(0, c)] = lm(PathElement.of(path_of(q, [aarr.id], allow_names=False)), aarr.src, i)
    d1 = block_map(q, [Pi], mid2, ent1)

    Si, top = top_projection(alg, Pi, i)
    Z = zero_module(qop)
    zero_in = {v: zeros(Pi.dims[v], 0) for v in q.vertices}
    zero_out = {v: zeros(0, Si.dims[v]) for v in q.vertices}
    modules = [Z, Pi, M1, M2, Pi, Si, Z]
    maps = [zero_in, d3, d2, d1, top, zero_out]
    return modules, maps, qop
