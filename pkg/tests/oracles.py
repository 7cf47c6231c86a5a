"""Brute-force reference implementations.

Nothing here shares code with the package beyond the BinaryMatrix container:
permutations come from itertools, dimensions from exact rank computations,
facets from enumerating every cell.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from birkhoff.matrix import BinaryMatrix


def perms_in(g):
    n = g.n
    return [p for p in permutations(range(n)) if all(g[i, p[i]] for i in range(n))]


def closure(g):
    n = g.n
    rows = [[0] * n for _ in range(n)]
    for p in perms_in(g):
        for i in range(n):
            rows[i][p[i]] = 1
    return BinaryMatrix.from_rows(rows)


def rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def affine_dim(f):
    """Dimension of the convex hull of the permutation matrices inside f."""
    n = f.n
    pts = [[1 if p[i] == j else 0 for i in range(n) for j in range(n)] for p in perms_in(f)]
    if not pts:
        return -1
    return rank([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) if len(pts) > 1 else 0


def facets(f):
    """All facets of the face f: intersections with a coordinate facet of dim d - 1."""
    d = affine_dim(f)
    out = set()
    for i, j in f.cells():
        h = closure(BinaryMatrix(f.n, f.bits & ~(1 << (i * f.n + j))))
        if h.bits and affine_dim(h) == d - 1:
            out.add(h)
    return out


def perm_bits(n, p):
    return sum(1 << (i * n + p[i]) for i in range(n))


def triangulation_volume(f, choose=None):
    """Number of simplices of a standard triangulation, no canonicalization."""
    n = f.n

    @lru_cache(maxsize=None)
    def vol(bits):
        face = BinaryMatrix(n, bits)
        ps = perms_in(face)
        if len(ps) == 1:
            return 1
        v = ps[0] if choose is None else choose(ps)
        vb = perm_bits(n, v)
        return sum(vol(g.bits) for g in facets(face) if vb & ~g.bits)

    return vol(f.bits)


def compositions(total, bounds):
    if not bounds:
        if total == 0:
            yield ()
        return
    for v in range(min(total, bounds[0]) + 1):
        for rest in compositions(total - v, bounds[1:]):
            yield (v,) + rest


def count_tables(r, c):
    """Nonnegative integer matrices with row sums r and column sums c, by enumeration.

    Rows are filled one at a time within the remaining column sums, so every
    table is visited exactly once.
    """
    if sum(r) != sum(c):
        return 0

    def fill(i, rest):
        if i == len(r):
            return 1 if not any(rest) else 0
        return sum(
            fill(i + 1, tuple(a - b for a, b in zip(rest, row)))
            for row in compositions(r[i], rest)
        )

    return fill(0, tuple(c))


def count_magic(n, t):
    """n x n magic squares of line sum t: enumerate n - 1 rows, the last is forced."""
    if n == 1:
        return 1
    comps = list(compositions(t, (t,) * n))
    count = 0
    for rows in product(comps, repeat=n - 1):
        last = [t - sum(r[j] for r in rows) for j in range(n)]
        if all(x >= 0 for x in last) and sum(last) == t:
            count += 1
    return count
