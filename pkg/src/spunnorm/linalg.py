"""Exact integer/rational linear algebra used throughout the package.

Everything here works on lists of Python ints (or Fractions) so that ranks
and kernels are exact.
"""
from fractions import Fraction
from itertools import combinations
from math import gcd


def primitive(vec):
    """Scale a rational vector to the primitive integer vector on its ray.

    The sign is kept, so (4, 0, 2) -> (2, 0, 1) and (-2, 4) -> (-1, 2).
    """
    if all(isinstance(x, int) for x in vec):
        g = 0
        for x in vec:
            g = gcd(g, x)
        if g == 0:
            raise ValueError("zero vector has no primitive representative")
        return tuple(x // g for x in vec)
    vec = [Fraction(x) for x in vec]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def row_echelon(rows, ncols):
    """Fraction-free (Bareiss) elimination.

    Returns (echelon rows, pivot columns).  Pivots are chosen as the first
    nonzero entry found scanning the remaining rows in order, column by
    column, which keeps the result deterministic.
    """
    m = [list(map(int, r)) for r in rows]
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r >= len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            a = m[i][c]
            if a == 0:
                if p != prev:
                    m[i] = [p * x // prev for x in m[i]]
                continue
            m[i] = [(p * m[i][j] - a * m[r][j]) // prev for j in range(ncols)]
        prev = p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, ncols=None):
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(row_echelon(rows, ncols)[1])


def _reduce_int(rows, ncols):
    """Integer Gauss-Jordan: rows scaled so each pivot column is zero
    outside its pivot row; every row divided by its content."""
    ech, pivots = row_echelon(rows, ncols)
    m = [_content_free(r) for r in ech]
    for i in range(len(m) - 1, -1, -1):
        c = pivots[i]
        p = m[i][c]
        for k in range(i):
            f = m[k][c]
            if f:
                m[k] = _content_free([p * a - f * b for a, b in zip(m[k], m[i])])
    return m, pivots


def _content_free(row):
    g = 0
    for x in row:
        g = gcd(g, x)
    return [x // g for x in row] if g > 1 else list(row)


def rref(rows, ncols):
    """Reduced row echelon form over Q."""
    m, pivots = _reduce_int(rows, ncols)
    out = []
    for row, c in zip(m, pivots):
        p = row[c]
        out.append([Fraction(x, p) for x in row])
    return out, pivots


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0} as primitive integer vectors, sorted."""
    rows = [r for r in rows]
    if not rows:
        basis = [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
        return sorted(basis)
    m, pivots = _reduce_int(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    L = 1
    for row, c in zip(m, pivots):
        L = L * abs(row[c]) // gcd(L, abs(row[c]))
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = L
        for row, c in zip(m, pivots):
            v[c] = -row[f] * (L // row[c])
        basis.append(primitive(v))
    return sorted(basis)


def mat_vec(rows, vec):
    return tuple(sum(a * b for a, b in zip(row, vec)) for row in rows)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def in_span(vectors, v):
    """True if v lies in the rational span of the given vectors."""
    vectors = list(vectors)
    if not any(v):
        return True
    if not vectors:
        return False
    n = len(v)
    return rank(vectors + [v], n) == rank(vectors, n)


def solve_unimodular(gram, rhs):
    """Solve gram . x = rhs exactly; raises if the solution is not integral."""
    n = len(gram)
    aug = [list(gram[i]) + [rhs[i]] for i in range(n)]
    m, pivots = rref(aug, n + 1)
    if len(pivots) != n or pivots[-1] == n:
        raise ValueError("singular system")
    x = [m[i][n] for i in range(n)]
    if any(xi.denominator != 1 for xi in x):
        raise ValueError("non-integral solution")
    return [int(xi) for xi in x]


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    out = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if m[r][i] != 0), None)
        if p is None:
            return 0
        if p != i:
            m[i], m[p] = m[p], m[i]
            out = -out
        out *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return int(out)


def minor_gcd(vectors):
    """gcd of the maximal minors; 1 iff the vectors span a saturated lattice."""
    vectors = [list(v) for v in vectors]
    k = len(vectors)
    if not k:
        return 1
    g = 0
    for cols in combinations(range(len(vectors[0])), k):
        g = gcd(g, det([[v[c] for c in cols] for v in vectors]))
        if g == 1:
            break
    return abs(g)
