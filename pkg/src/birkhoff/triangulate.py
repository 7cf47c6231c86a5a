"""Relative volumes of faces of B_n via standard triangulations.

The relative volume of a face equals the sum of the relative volumes of its
facets opposite any one vertex, and every vertex has volume 1.  We build the
leveled face lattice top-down, keeping only one representative per
symmetry class (row/column permutations and transposition), then accumulate
volumes bottom-up along the saved parent pointers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

import numpy as np

from .matrix import (
    BinaryMatrix,
    InvalidFaceError,
    PermutationMatrix,
    UsageError,
    _closure_bits,
    _dimension_bits,
    _join_rows,
    _search,
    _split_rows,
    _transpose_bits,
    find_permutation,
)

log = logging.getLogger(__name__)

DEFAULT_MEMORY_CAP = 2**28


class BudgetExceededError(RuntimeError):
    """The lattice grew past the record budget.

    ``level_sizes`` holds the number of records of every level completed
    before the abort, top level first.
    """

    def __init__(self, cap: int, level_sizes: list[int]):
        self.cap = cap
        self.level_sizes = list(level_sizes)
        super().__init__(
            f"face lattice exceeded the budget of {cap} records "
            f"(levels so far: {self.level_sizes})"
        )


# --------------------------------------------------------------------------
# vertices and opposite facets
# --------------------------------------------------------------------------


def choose_vertex(f: BinaryMatrix) -> PermutationMatrix:
    v = find_permutation(f)
    if v is None:
        raise InvalidFaceError("matrix contains no permutation matrix")
    return v


def _opposite_facets_bits(n: int, bits: int, perm: Sequence[int]) -> list[int]:
    rows = _split_rows(n, bits)
    cells = [i * n + perm[i] for i in range(n)]
    cands = set()
    for i in range(n):
        # zero one cell of the vertex, then only the other vertex cells can be forced
        g_rows = list(rows)
        g_rows[i] &= ~(1 << perm[i])
        cand = bits & ~(1 << cells[i])
        for j in range(n):
            if j != i and _search(g_rows, n, j, perm[j]) is None:
                cand &= ~(1 << cells[j])
        cands.add(cand)
    # facets are the candidates maximal under inclusion
    out = [c for c in cands if not any(c != o and c & ~o == 0 for o in cands)]
    out.sort()
    return out


def opposite_facets(f: BinaryMatrix, v: PermutationMatrix) -> list[BinaryMatrix]:
    """Facets of the face ``f`` that do not contain the vertex ``v``."""
    if v.n != f.n:
        raise UsageError(f"order mismatch: {f.n} vs {v.n}")
    if v.matrix.bits & ~f.bits:
        raise UsageError("v is not a vertex of f")
    return [BinaryMatrix(f.n, b) for b in _opposite_facets_bits(f.n, f.bits, v.perm)]


# --------------------------------------------------------------------------
# scores and canonical forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScorePair:
    row_scores: tuple[int, ...]
    col_scores: tuple[int, ...]


@lru_cache(maxsize=None)
def _reverse_table(n: int) -> tuple[int, ...]:
    # row value read with column 0 as the most significant bit
    return tuple(int(format(r, f"0{n}b")[::-1], 2) if n else 0 for r in range(1 << n))


@lru_cache(maxsize=None)
def _ones_table(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(j for j in range(n) if r >> j & 1) for r in range(1 << n))


@lru_cache(maxsize=None)
def _score_bases(n: int) -> tuple[int, int]:
    bound = n
    bases = []
    for _ in range(2):
        base = n * bound + 1
        bases.append(base)
        bound = bound * base + n * bound
    return tuple(bases)


def _scores(n: int, rows: Sequence[int], cols: Sequence[int]):
    ones = _ones_table(n)
    rs = [r.bit_count() for r in rows]
    cs = [c.bit_count() for c in cols]
    for base in _score_bases(n):
        nrs = [rs[i] * base + sum(cs[j] for j in ones[rows[i]]) for i in range(n)]
        ncs = [cs[j] * base + sum(rs[i] for i in ones[cols[j]]) for j in range(n)]
        rs, cs = nrs, ncs
    return rs, cs


def compute_scores(f: BinaryMatrix) -> ScorePair:
    """Row and column scores from two refinement rounds.

    Round zero uses row and column sums.  Each round replaces a row score by
    the pair (old score, sum of the column scores at the row's 1's), packed
    into one integer, and symmetrically for columns.
    """
    n = f.n
    rows = _split_rows(n, f.bits)
    cols = _split_rows(n, _transpose_bits(n, f.bits))
    rs, cs = _scores(n, rows, cols)
    return ScorePair(tuple(rs), tuple(cs))


def _standard_form(n: int, rows, rs, cs) -> int:
    order = sorted(range(n), key=cs.__getitem__)
    if order != list(range(n)):
        moved = []
        for r in rows:
            nr = 0
            for k, j in enumerate(order):
                if r >> j & 1:
                    nr |= 1 << k
            moved.append(nr)
    else:
        moved = rows
    rev = _reverse_table(n)
    idx = sorted(range(n), key=lambda i: (rs[i], rev[moved[i]]))
    return _join_rows(n, [moved[i] for i in idx])


def _canonical_bits(n: int, bits: int) -> int:
    while True:
        rows = _split_rows(n, bits)
        cols = _split_rows(n, _transpose_bits(n, bits))
        rs, cs = _scores(n, rows, cols)
        best = min(_standard_form(n, rows, rs, cs), _standard_form(n, cols, cs, rs))
        if best == bits:
            return bits
        bits = best


def canonicalize(f: BinaryMatrix) -> BinaryMatrix:
    """Score-based, approximately canonical representative of ``f``.

    ``f`` and its transpose are put into standard form (columns by score,
    rows by score then by bit string) and the smaller packed word is kept.
    The step is repeated until it is stable, which makes the result
    idempotent.  Equivalent faces can still, rarely, map to different
    representatives; volumes are unaffected.
    """
    return BinaryMatrix(f.n, _canonical_bits(f.n, f.bits))


def _exact_canonical_bits(n: int, bits: int) -> int:
    best = None
    for b in (bits, _transpose_bits(n, bits)):
        rows = _split_rows(n, b)
        for cperm in itertools.permutations(range(n)):
            moved = []
            for r in rows:
                nr = 0
                for k, j in enumerate(cperm):
                    if r >> j & 1:
                        nr |= 1 << k
                moved.append(nr)
            # for fixed columns the least word has the largest row first
            w = _join_rows(n, sorted(moved, reverse=True))
            if best is None or w < best:
                best = w
    return best


def exact_canonicalize(f: BinaryMatrix) -> BinaryMatrix:
    """True orbit minimum over all row/column permutations and transposition."""
    if f.n > 6:
        raise UsageError("exact canonicalization is limited to n <= 6")
    return BinaryMatrix(f.n, _exact_canonical_bits(f.n, f.bits))


_CANONICALIZERS: dict[str, Callable[[int, int], int]] = {
    "score": _canonical_bits,
    "exact": _exact_canonical_bits,
    "none": lambda n, bits: bits,
}


# --------------------------------------------------------------------------
# the face lattice
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceRecord:
    face: BinaryMatrix
    parents: tuple[tuple[int, int], ...]  # (index into the level above, multiplicity)


@dataclass
class Level:
    dim: int
    faces: list[int]
    parents: list[tuple[tuple[int, int], ...]]

    def __len__(self):
        return len(self.faces)


@dataclass
class FaceLattice:
    n: int
    levels: list[Level] = field(default_factory=list)

    def records(self, k: int) -> list[FaceRecord]:
        lev = self.levels[k]
        return [
            FaceRecord(BinaryMatrix(self.n, w), p) for w, p in zip(lev.faces, lev.parents)
        ]

    def level_sizes(self) -> list[int]:
        return [len(lev) for lev in self.levels]

    def pointer_count(self) -> int:
        return sum(m for lev in self.levels for ps in lev.parents for _, m in ps)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "levels": [
                {
                    "dim": lev.dim,
                    "faces": [
                        {
                            "bits": BinaryMatrix(self.n, w).to_text(),
                            "parents": [[p, m] for p, m in ps],
                        }
                        for w, ps in zip(lev.faces, lev.parents)
                    ],
                }
                for lev in self.levels
            ],
        }


def _check_top(top: BinaryMatrix) -> int:
    if top.bits == 0 or _closure_bits(top.n, top.bits) != top.bits:
        raise InvalidFaceError("input matrix is not a face (not closed under face_closure)")
    return _dimension_bits(top.n, top.bits)


def _expand_python(n, words, canon):
    children, parents = [], []
    for p, w in enumerate(words):
        w = int(w)
        perm = _search(_split_rows(n, w), n)
        for g in _opposite_facets_bits(n, w, perm):
            children.append(canon(n, g))
            parents.append(p)
    return (
        np.array(children, dtype=np.uint64 if n == 8 else np.int64),
        np.array(parents, dtype=np.int64),
    )


def _expand_numba(n, words, canonical, threads):
    from . import _kernels
    import numba

    if threads:
        numba.set_num_threads(threads)
    base1, base2 = _score_bases(n)
    w = np.asarray(words, dtype=np.int64)
    out = _kernels.expand_level(n, w, base1, base2, canonical == "score")
    keep = np.flatnonzero(out)
    return out[keep], keep // n


def _resolve_backend(n, canonical, backend):
    if backend == "auto":
        return "numba" if n <= 7 and canonical != "exact" and _have_numba() else "python"
    if backend == "numba" and (n > 7 or canonical == "exact"):
        raise UsageError("the numba backend supports n <= 7 with score or no canonicalization")
    return backend


@lru_cache(maxsize=None)
def _have_numba() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _expand(n, words, canonical, backend, threads=None):
    """Canonical opposite facets of every word: flat (child, parent index) arrays."""
    if backend == "numba":
        return _expand_numba(n, words, canonical, threads)
    return _expand_python(n, words, _CANONICALIZERS[canonical])


def build_lattice(
    top: BinaryMatrix,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    canonical: str = "score",
    backend: str = "auto",
    threads: int | None = None,
) -> FaceLattice:
    """Phase one: the leveled lattice of canonical faces below ``top``.

    Level k holds faces of dimension ``dim(top) - k``; every record keeps the
    indices of the faces one level up it was produced from, with
    multiplicity.  ``canonical`` selects the representative map: "score"
    (default), "exact" (orbit minimum, small n only) or "none".
    """
    dim = _check_top(top)
    n = top.n
    backend = _resolve_backend(n, canonical, backend)
    top_word = _CANONICALIZERS[canonical](n, top.bits)
    lattice = FaceLattice(n, [Level(dim, [top_word], [()])])
    total = 1
    for d in range(dim, 0, -1):
        above = lattice.levels[-1].faces
        children, parents = _expand(n, above, canonical, backend, threads)
        uniq, inv = np.unique(children, return_inverse=True)
        total += len(uniq)
        if total > memory_cap:
            raise BudgetExceededError(memory_cap, lattice.level_sizes() + [len(uniq)])
        pairs, mult = np.unique(inv * len(above) + parents, return_counts=True)
        grouped: list[list[tuple[int, int]]] = [[] for _ in range(len(uniq))]
        for key, m in zip(pairs.tolist(), mult.tolist()):
            c, p = divmod(key, len(above))
            grouped[c].append((p, m))
        lattice.levels.append(
            Level(d - 1, [int(x) for x in uniq], [tuple(g) for g in grouped])
        )
        log.debug("n=%d dim %d: %d faces", n, d - 1, len(uniq))
    return lattice


def accumulate_volumes(lattice: FaceLattice) -> list[list[int]]:
    """Phase two: relative volume of every record, levels in lattice order."""
    vols = [[1] * len(lattice.levels[-1])]
    for k in range(len(lattice.levels) - 1, 0, -1):
        above = [0] * len(lattice.levels[k - 1])
        for v, ps in zip(vols[0], lattice.levels[k].parents):
            for p, m in ps:
                above[p] += m * v
        vols.insert(0, above)
    return vols


def relative_volume(
    top: BinaryMatrix,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    canonical: str = "score",
    backend: str = "auto",
    threads: int | None = None,
) -> int:
    """Number of simplices in a standard triangulation of the face ``top``."""
    lattice = build_lattice(
        top, memory_cap=memory_cap, canonical=canonical, backend=backend, threads=threads
    )
    return accumulate_volumes(lattice)[0][0]


def relative_volume_streaming(
    top: BinaryMatrix,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    canonical: str = "score",
    backend: str = "auto",
    threads: int | None = None,
    stats: list | None = None,
) -> int:
    """Same value as :func:`relative_volume`, holding one level at a time.

    Instead of saving parent pointers, every face carries the weighted number
    of lattice paths reaching it from the top; the volume is the total weight
    arriving at dimension zero.  ``memory_cap`` bounds the size of a single
    level.  Level sizes are appended to ``stats`` when given.
    """
    dim = _check_top(top)
    n = top.n
    backend = _resolve_backend(n, canonical, backend)
    words = [_CANONICALIZERS[canonical](n, top.bits)]
    weights = np.array([1], dtype=object)
    sizes = [1]
    for d in range(dim, 0, -1):
        children, parents = _expand(n, words, canonical, backend, threads)
        uniq, inv = np.unique(children, return_inverse=True)
        if len(uniq) > memory_cap:
            raise BudgetExceededError(memory_cap, sizes + [len(uniq)])
        acc = np.zeros(len(uniq), dtype=object)
        np.add.at(acc, inv, weights[parents])
        words, weights = uniq, acc
        sizes.append(len(uniq))
        log.debug("n=%d dim %d: %d faces", n, d - 1, len(uniq))
    if stats is not None:
        stats.extend(sizes)
    return int(sum(weights))


def birkhoff(n: int) -> BinaryMatrix:
    """The all-ones matrix, i.e. B_n itself."""
    return BinaryMatrix.ones(n)


def true_volume(n: int, relvol: int) -> Fraction:
    """Euclidean (n-1)^2-volume of B_n from its relative volume.

    A minimal lattice simplex of B_n has volume n^(n-1) / ((n-1)^2)!.
    """
    if n < 1:
        raise UsageError("n must be positive")
    return Fraction(relvol * n ** (n - 1), factorial((n - 1) ** 2))
