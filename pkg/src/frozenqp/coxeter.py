"""Coxeter groups of underlying graphs, via the exact geometric representation.

Edge counts determine the Coxeter matrix: no edge gives m=2 (commuting),
one edge m=3 (braid), two or more edges m=infinity (no relation).  The
bilinear form values -cos(pi/m) are then the exact rationals 0, -1/2, -1,
so reduced-word testing, element equality and group enumeration all run in
exact arithmetic.  Infinity is stored as m=0.
"""

from fractions import Fraction

from .quiver import Quiver
from .ratlin import mat_mul, identity, ZERO, ONE

INF = 0  # sentinel for an infinite bond order

_FORM = {1: Fraction(-1), 2: Fraction(0), 3: Fraction(-1, 2), INF: Fraction(-1)}


class CoxeterError(Exception):
    pass


class GroupTooLarge(CoxeterError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__("group enumeration exceeded cap %d" % cap)


class NotReduced(CoxeterError):
    pass


class CoxeterSystem:
    """Coxeter data of a finite graph: matrix m, exact bilinear form B, and
    the simple reflections as rational matrices."""

    def __init__(self, vertices, edge_counts):
        self.vertices = tuple(sorted(vertices))
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        self.m = {}
        self.B = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for i, u in enumerate(self.vertices):
            for j, v in enumerate(self.vertices):
                if i == j:
                    self.m[(u, v)] = 1
                    continue
                cnt = edge_counts.get(frozenset((u, v)), 0)
                m = 2 if cnt == 0 else 3 if cnt == 1 else INF
                self.m[(u, v)] = m
                self.B[i][j] = _FORM[m]
        self.reflections = {v: self._reflection(v) for v in self.vertices}

    def _reflection(self, v):
        # sigma_i(alpha_j) = alpha_j - 2 B(alpha_i, alpha_j) alpha_i
        n = len(self.vertices)
        i = self.pos[v]
        mat = identity(n)
        for j in range(n):
            mat[i][j] -= 2 * self.B[i][j]
        return mat

    def check_word(self, word):
        for u in word:
            if u not in self.pos:
                raise CoxeterError("letter %r is not a vertex" % (u,))

    def word_matrix(self, word):
        """Matrix of s_{u_1} ... s_{u_l} in the geometric representation
        (rightmost generator acts first on column vectors)."""
        self.check_word(word)
        n = len(self.vertices)
        mat = identity(n)
        for u in word:
            mat = mat_mul(mat, self.reflections[u])
        return mat

    def simple_root(self, v):
        n = len(self.vertices)
        e = [ZERO] * n
        e[self.pos[v]] = ONE
        return e


def coxeter_system(graph: Quiver) -> CoxeterSystem:
    """Coxeter system of the underlying graph of a quiver.  Orientation is
    ignored, loops are rejected, parallel edges mean no braid relation."""
    counts = {}
    for a in graph.arrows.values():
        if a.src == a.tgt:
            raise CoxeterError("graph has a loop at %r" % (a.src,))
        key = frozenset((a.src, a.tgt))
        counts[key] = counts.get(key, 0) + 1
    return CoxeterSystem(graph.vertices, counts)


def _apply(mat, vec):
    return [sum((c * x for c, x in zip(row, vec) if c), ZERO) for row in mat]


def prefix_roots(sys: CoxeterSystem, word):
    """The root sequence prefix_p(alpha_{u_p}) for p = 1..l, exact."""
    sys.check_word(word)
    roots = []
    prefix = identity(len(sys.vertices))
    for u in word:
        roots.append(_apply(prefix, sys.simple_root(u)))
        prefix = mat_mul(prefix, sys.reflections[u])
    return roots


def _is_positive(vec):
    return all(x >= 0 for x in vec)


def _is_negative(vec):
    return all(x <= 0 for x in vec)


def root_dichotomy_holds(vec):
    return _is_positive(vec) or _is_negative(vec)


def is_reduced(sys: CoxeterSystem, word) -> bool:
    """Root criterion: the word is reduced iff every prefix sends the next
    simple root to a positive root."""
    for r in prefix_roots(sys, word):
        assert root_dichotomy_holds(r), "root dichotomy violated; arithmetic bug"
        if not _is_positive(r):
            return False
    return True


def reduce_word(sys: CoxeterSystem, word):
    """A reduced word for the same element, by the deletion condition.

    When the root criterion fails at position p, scan gamma_j =
    s_{u_j}...s_{u_{p-1}}(alpha_{u_p}) downward for the simple root it
    crosses, and delete that pair of letters.
    """
    word = list(word)
    sys.check_word(word)
    while True:
        roots = prefix_roots(sys, word)
        bad = None
        for p, r in enumerate(roots):
            if not _is_positive(r):
                bad = p
                break
        if bad is None:
            return tuple(word)
        gamma = sys.simple_root(word[bad])
        q = None
        for j in range(bad - 1, -1, -1):
            if gamma == sys.simple_root(word[j]):
                q = j
                break
            gamma = _apply(sys.reflections[word[j]], gamma)
        assert q is not None, "exchange condition failed; arithmetic bug"
        del word[bad]
        del word[q]


def elements_equal(sys: CoxeterSystem, w1, w2) -> bool:
    """Equality in the group: the geometric representation is faithful, so
    compare exact matrices."""
    return sys.word_matrix(w1) == sys.word_matrix(w2)


def _matrix_key(mat):
    return tuple(tuple(row) for row in mat)


def enumerate_group(sys: CoxeterSystem, cap) -> list:
    """Canonical reduced words for all elements, BFS over generator
    multiplication with matrices as canonical keys.  Raises GroupTooLarge
    past the cap."""
    ident = identity(len(sys.vertices))
    seen = {_matrix_key(ident): ()}
    queue = [((), ident)]
    while queue:
        nxt = []
        for word, mat in queue:
            for v in sys.vertices:
                m2 = mat_mul(mat, sys.reflections[v])
                k = _matrix_key(m2)
                if k in seen:
                    continue
                if len(seen) >= cap:
                    raise GroupTooLarge(cap)
                w2 = word + (v,)
                seen[k] = w2
                nxt.append((w2, m2))
        queue = nxt
    return sorted(seen.values(), key=lambda w: (len(w), w))


def braid_moves(sys: CoxeterSystem, word):
    """All words obtainable from `word` by one braid move (m=2 swap or
    m=3 substitution)."""
    word = tuple(word)
    out = []
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a != b and sys.m[(a, b)] == 2:
            out.append(word[:i] + (b, a) + word[i + 2:])
    for i in range(len(word) - 2):
        a, b, c = word[i], word[i + 1], word[i + 2]
        if a == c and a != b and sys.m[(a, b)] == 3:
            out.append(word[:i] + (b, a, b) + word[i + 3:])
    return out


def all_reduced_words(sys: CoxeterSystem, word):
    """Every reduced word of the element, as the braid-move closure of one
    reduced expression (Matsumoto: braid moves connect them all)."""
    start = tuple(word)
    if not is_reduced(sys, start):
        raise NotReduced("seed word is not reduced")
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for w2 in braid_moves(sys, w):
            if w2 not in seen:
                seen.add(w2)
                stack.append(w2)
    return sorted(seen)


def reduced_words_up_to(sys: CoxeterSystem, max_length):
    """All reduced words of length <= max_length (not one per element:
    every reduced expression), by depth-first extension with the root
    criterion pruning."""
    out = []

    def extend(word, prefix_mat):
        if word:
            out.append(tuple(word))
        if len(word) == max_length:
            return
        for v in sys.vertices:
            root = _apply(prefix_mat, sys.simple_root(v))
            if _is_positive(root):
                extend(word + [v], mat_mul(prefix_mat, sys.reflections[v]))

    extend([], identity(len(sys.vertices)))
    return out


def word_to_json(graph: Quiver, word) -> dict:
    from .quiver import quiver_to_json

    return {"graph": quiver_to_json(graph), "letters": list(word)}


def word_from_json(data):
    from .quiver import quiver_from_json, SchemaViolation

    if not isinstance(data, dict) or "graph" not in data or "letters" not in data:
        raise SchemaViolation("word JSON needs 'graph' and 'letters'")
    graph = quiver_from_json(data["graph"])
    letters = data["letters"]
    if not isinstance(letters, list) or not all(isinstance(x, int) for x in letters):
        raise SchemaViolation("'letters' must be a list of ints")
    return graph, tuple(letters)
