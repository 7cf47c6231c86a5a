"""Explicit simplices: standard triangulations, lattice volumes, the B_4 census.

Points of the affine span of B_n are determined by their upper-left
(n-1) x (n-1) block, and integer points map onto Z^((n-1)^2).  Lattice
volumes are therefore computed on those blocks.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd
from typing import Callable, Iterator, Sequence

import numpy as np

from .matrix import (
    BinaryMatrix,
    UsageError,
    _dimension_bits,
    _perm_bits,
    permutations_in,
)
from .triangulate import _opposite_facets_bits

Perm = tuple[int, ...]


def block_coords(perm: Sequence[int]) -> list[int]:
    """Upper-left (n-1) x (n-1) block of a permutation matrix, row-major."""
    n = len(perm)
    return [1 if perm[i] == j else 0 for i in range(n - 1) for j in range(n - 1)]


def det_int(m: list[list[int]]) -> int:
    """Exact integer determinant (Bareiss elimination)."""
    a = [row[:] for row in m]
    k = len(a)
    sign, prev = 1, 1
    for i in range(k):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i]:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1] if k else 1


def lattice_volume(vertices: Sequence[Perm]) -> int:
    """Volume of a simplex on permutation matrices in units of a minimal simplex.

    This is the index of the lattice spanned by the edge vectors inside the
    integer points of their span: the gcd of the maximal minors of the edge
    matrix, which is |det| for a full-dimensional simplex.  Returns 0 for a
    degenerate vertex set.
    """
    pts = [block_coords(v) for v in vertices]
    edges = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    d = len(edges)
    if d == 0:
        return 1
    dim = len(edges[0])
    g = 0
    for cols in itertools.combinations(range(dim), d):
        g = gcd(g, det_int([[e[c] for c in cols] for e in edges]))
        if g == 1:
            break
    return g


def standard_triangulation(
    f: BinaryMatrix, choose: Callable[[BinaryMatrix], Perm] | None = None
) -> Iterator[tuple[Perm, ...]]:
    """Simplices of a standard triangulation of the face ``f``.

    ``choose(face)`` picks the apex vertex of each face; by default the
    first-fit permutation.  No canonicalization: every face is handled as
    itself, so this is only practical for small faces.
    """
    n = f.n
    if choose is None:
        choose = lambda g: next(iter(permutations_in(g))).perm  # noqa: E731

    def rec(bits):
        face = BinaryMatrix(n, bits)
        if _dimension_bits(n, bits) == 0:
            yield (next(iter(permutations_in(face))).perm,)
            return
        v = tuple(choose(face))
        for g in _opposite_facets_bits(n, bits, v):
            for s in rec(g):
                yield (v,) + s

    return rec(f.bits)


def all_standard_simplices(f: BinaryMatrix) -> set[frozenset]:
    """Union of the simplices of every standard triangulation of ``f``."""
    n = f.n

    @lru_cache(maxsize=None)
    def rec(bits) -> frozenset:
        face = BinaryMatrix(n, bits)
        verts = [p.perm for p in permutations_in(face)]
        if len(verts) == 1:
            return frozenset({frozenset(verts)})
        out = set()
        for v in verts:
            for g in _opposite_facets_bits(n, bits, v):
                for s in rec(g):
                    out.add(s | {v})
        return frozenset(out)

    return set(rec(f.bits))


class _Membership:
    """Does a vertex set belong to some standard triangulation of its span?"""

    def __init__(self, perms: Sequence[Perm]):
        n = len(perms[0])
        self.n = n
        self.bits = [_perm_bits(n, p) for p in perms]
        self.memo: dict[int, bool] = {}

    def union(self, mask: int) -> int:
        u = 0
        while mask:
            low = mask & -mask
            u |= self.bits[low.bit_length() - 1]
            mask ^= low
        return u

    def __call__(self, mask: int) -> bool:
        size = mask.bit_count()
        if size == 1:
            return True
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        result = False
        m = mask
        while m and not result:
            low = m & -m
            m ^= low
            rest = mask ^ low
            face = self.union(rest)
            # the rest must span a facet of the current face that misses the apex
            if self.bits[low.bit_length() - 1] & ~face and (
                _dimension_bits(self.n, face) == size - 2
            ):
                result = self(rest)
        self.memo[mask] = result
        return result


def in_some_standard_triangulation(simplex: Sequence[Perm]) -> bool:
    """Whether the simplex belongs to at least one standard triangulation.

    True when some vertex v of the simplex is the apex: the other vertices
    span a facet of the current face not containing v, and recursively
    belong to a standard triangulation of that facet.
    """
    simplex = list(simplex)
    return _Membership(simplex)((1 << len(simplex)) - 1)


def census_minimal_simplices(n: int = 4, chunk: int = 200_000) -> tuple[int, int]:
    """(number of minimal-volume simplices on vertices of B_n, how many are standard).

    Only n = 4 is supported: it enumerates all C(24, 10) vertex subsets.
    """
    if n != 4:
        raise UsageError("the census is only supported for n = 4")
    perms = [tuple(p) for p in itertools.permutations(range(n))]
    coords = np.array([block_coords(p) for p in perms], dtype=np.float64)
    d = (n - 1) ** 2
    member = _Membership(perms)
    total = in_std = 0
    combos = itertools.combinations(range(len(perms)), d + 1)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if len(block) == 0:
            break
        pts = coords[block]
        dets = np.rint(np.linalg.det(pts[:, 1:, :] - pts[:, :1, :])).astype(np.int64)
        for idx in np.flatnonzero(np.abs(dets) == 1):
            total += 1
            mask = 0
            for v in block[idx]:
                mask |= 1 << int(v)
            in_std += member(mask)
    return total, in_std
