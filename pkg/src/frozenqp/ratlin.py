"""Exact rational linear algebra kernels.

Everything in this package runs over Fraction; no floating point anywhere.
Sparse vectors are dicts {coordinate: Fraction}, dense matrices are lists of
lists.  Echelon keeps its pivot on the *largest* coordinate so that, with
deglex-ordered path coordinates, canonical remainders are supported on
order-smaller monomials.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_add(u, v, scale=ONE):
    """u + scale*v for sparse dicts, zero entries pruned."""
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, ZERO) + scale * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v, scale):
    if not scale:
        return {}
    return {k: scale * c for k, c in v.items()}


class Echelon:
    """A growing row space in echelon form with max-coordinate pivots.

    reduce() returns the canonical remainder of a vector modulo the row
    space: no pivot coordinate survives, so remainders are supported on the
    complement of the pivot set.  Rows are kept monic.
    """

    def __init__(self):
        self.rows = {}  # pivot coordinate -> monic sparse row

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self):
        return len(self.rows)

    def pivots(self):
        return self.rows.keys()

    def reduce(self, vec):
        v = dict(vec)
        rows = self.rows
        while True:
            hit = -1
            for k in v:
                if k > hit and k in rows:
                    hit = k
            if hit < 0:
                return v
            row = rows[hit]
            c = v[hit]
            for k2, c2 in row.items():
                s = v.get(k2, ZERO) - c * c2
                if s:
                    v[k2] = s
                else:
                    v.pop(k2, None)

    def add(self, vec):
        """Insert vec's residue; returns the new pivot or None if dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        p = max(r)
        inv = ONE / r[p]
        self.rows[p] = {k: c * inv for k, c in r.items()}
        return p

    def contains(self, vec):
        return not self.reduce(vec)

    def basis(self):
        return [dict(r) for _, r in sorted(self.rows.items())]


def mat_mul(a, b):
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def shaped_mul(a, b, rows, mid, cols):
    """Matrix product with explicit shapes, so zero-dimensional middle
    spaces still produce a (rows x cols) zero matrix."""
    if rows == 0 or cols == 0 or mid == 0:
        return [[ZERO] * cols for _ in range(rows)]
    return mat_mul(a, b)


def mat_vec(a, v):
    return [sum((c * x for c, x in zip(row, v) if c), ZERO) for row in a]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(n, m):
    return [[ZERO] * m for _ in range(n)]


def rref(mat):
    """In-place reduced row echelon form; returns the pivot column list."""
    if not mat:
        return []
    rows, cols = len(mat), len(mat[0])
    piv_cols = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    return piv_cols


def rank(mat):
    work = [row[:] for row in mat]
    return len(rref(work))


def nullspace(mat, ncols=None):
    """Basis of the right kernel of a dense matrix (list of column vectors)."""
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    work = [row[:] for row in mat]
    piv = rref(work)
    piv_set = set(piv)
    free = [c for c in range(ncols) if c not in piv_set]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, c in enumerate(piv):
            v[c] = -work[r][f]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One exact solution of mat*x = rhs, or None if inconsistent."""
    n = len(mat)
    m = len(mat[0]) if mat else 0
    aug = [mat[i][:] + [rhs[i]] for i in range(n)]
    piv = rref(aug)
    x = [ZERO] * m
    for r, c in enumerate(piv):
        if c == m:
            return None
        x[c] = aug[r][m]
    return x


def frac_str(x):
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else str(x.numerator)


def parse_frac(s):
    return Fraction(s)
