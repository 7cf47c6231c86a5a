"""Packed 0-1 matrices, permutation search and face closure.

A face of the Birkhoff polytope B_n is identified with the 0-1 matrix that is
the union of its vertices (permutation matrices).  Matrices are stored as a
single integer with bit (i, j) at position ``i*n + j``, which fits one 64-bit
word for n <= 8.

The functions prefixed with an underscore work directly on ``(n, bits)``
integers and are the hot path used by the triangulation code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_ORDER = 8


class UsageError(ValueError):
    """Raised for malformed arguments (order mismatch, bad permutation, ...)."""


class InvalidFaceError(ValueError):
    """Raised when a matrix that must be a face is not one."""


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_ORDER:
        raise UsageError(f"matrix order must be in 1..{MAX_ORDER}, got {n!r}")


@lru_cache(maxsize=None)
def _row_mask(n: int) -> int:
    return (1 << n) - 1


@lru_cache(maxsize=None)
def _full_mask(n: int) -> int:
    return (1 << (n * n)) - 1


def _split_rows(n: int, bits: int) -> list[int]:
    m = (1 << n) - 1
    return [(bits >> (i * n)) & m for i in range(n)]


def _join_rows(n: int, rows: Sequence[int]) -> int:
    bits = 0
    for i, r in enumerate(rows):
        bits |= r << (i * n)
    return bits


def _transpose_bits(n: int, bits: int) -> int:
    out = 0
    for i in range(n):
        row = (bits >> (i * n)) & ((1 << n) - 1)
        while row:
            low = row & -row
            j = low.bit_length() - 1
            out |= 1 << (j * n + i)
            row ^= low
    return out


def _perm_bits(n: int, perm: Sequence[int]) -> int:
    bits = 0
    for i, j in enumerate(perm):
        bits |= 1 << (i * n + j)
    return bits


def _search(rows: Sequence[int], n: int, req_row: int = -1, req_col: int = -1):
    """First-fit backtracking search for a permutation inside ``rows``.

    Rows are assigned in index order, columns tried in ascending order.  If
    ``req_row`` is given, that row is pinned to ``req_col``.  Returns the
    permutation as a tuple or None.
    """
    if req_row >= 0:
        if not (rows[req_row] >> req_col) & 1:
            return None
        pinned = 1 << req_col
        avail = [pinned if i == req_row else r & ~pinned for i, r in enumerate(rows)]
    else:
        avail = list(rows)
    for r in avail:
        if not r:
            return None

    perm = [0] * n
    # iterative backtracking: choice[i] holds the remaining candidate columns
    choice = [0] * n
    used = 0
    i = 0
    choice[0] = avail[0]
    while True:
        opts = choice[i] & ~used
        if opts:
            low = opts & -opts
            choice[i] = choice[i] & ~low
            perm[i] = low.bit_length() - 1
            used |= low
            i += 1
            if i == n:
                return tuple(perm)
            choice[i] = avail[i]
        else:
            i -= 1
            if i < 0:
                return None
            used &= ~(1 << perm[i])


def _closure_bits(n: int, bits: int) -> int:
    rows = _split_rows(n, bits)
    usable = 0
    pending = bits
    while pending:
        low = pending & -pending
        pos = low.bit_length() - 1
        perm = _search(rows, n, pos // n, pos % n)
        if perm is None:
            pending ^= low
        else:
            pb = _perm_bits(n, perm)
            usable |= pb
            pending &= ~pb
    return usable


def _dimension_bits(n: int, bits: int) -> int:
    # union-find over rows 0..n-1 and columns n..2n-1
    parent = list(range(2 * n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    e = 0
    k = 2 * n
    b = bits
    while b:
        low = b & -b
        pos = low.bit_length() - 1
        b ^= low
        e += 1
        ra, rb = find(pos // n), find(n + pos % n)
        if ra != rb:
            parent[ra] = rb
            k -= 1
    return e + k - 2 * n


@dataclass(frozen=True, order=True)
class BinaryMatrix:
    """An n x n 0-1 matrix packed into one integer, bit (i, j) at ``i*n + j``."""

    n: int
    bits: int

    def __post_init__(self):
        _check_order(self.n)
        if self.bits < 0 or self.bits >> (self.n * self.n):
            raise UsageError(f"bits outside the {self.n}x{self.n} range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        n = len(rows)
        _check_order(n)
        bits = 0
        for i, row in enumerate(rows):
            if len(row) != n:
                raise UsageError("matrix must be square")
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise UsageError(f"entry ({i},{j}) is not 0 or 1: {v!r}")
                if v:
                    bits |= 1 << (i * n + j)
        return cls(n, bits)

    @classmethod
    def from_text(cls, text: str) -> "BinaryMatrix":
        """Parse ``n`` lines of ``n`` characters from {0, 1}."""
        lines = [ln.strip() for ln in text.strip().splitlines()]
        lines = [ln for ln in lines if ln]
        n = len(lines)
        if n == 0:
            raise UsageError("empty face text")
        if n > MAX_ORDER:
            raise UsageError(f"order {n} exceeds the maximum of {MAX_ORDER}")
        for ln in lines:
            if len(ln) != n:
                raise UsageError(f"ragged line {ln!r}: expected {n} characters")
            if set(ln) - {"0", "1"}:
                raise UsageError(f"line {ln!r} contains characters outside {{0,1}}")
        return cls.from_rows([[int(ch) for ch in ln] for ln in lines])

    @classmethod
    def zeros(cls, n: int) -> "BinaryMatrix":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BinaryMatrix":
        _check_order(n)
        return cls(n, _full_mask(n))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        _check_order(n)
        return cls(n, _perm_bits(n, range(n)))

    def __getitem__(self, cell: tuple[int, int]) -> int:
        i, j = cell
        return (self.bits >> (i * self.n + j)) & 1

    def __or__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        return union(self, other)

    def rows(self) -> list[list[int]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def to_text(self) -> str:
        return "".join("".join(map(str, r)) + "\n" for r in self.rows())

    def count(self) -> int:
        return self.bits.bit_count()

    def cells(self) -> Iterator[tuple[int, int]]:
        b = self.bits
        while b:
            low = b & -b
            pos = low.bit_length() - 1
            yield divmod(pos, self.n)
            b ^= low

    def __str__(self):
        return self.to_text().rstrip("\n")


@dataclass(frozen=True)
class PermutationMatrix:
    """Permutation matrix with a single 1 at (i, perm[i]) in each row i."""

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise UsageError(f"not a permutation: {self.perm!r}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def matrix(self) -> BinaryMatrix:
        return BinaryMatrix(self.n, _perm_bits(self.n, self.perm))

    def cells(self) -> list[tuple[int, int]]:
        return list(enumerate(self.perm))


def _same_order(a: BinaryMatrix, b: BinaryMatrix) -> None:
    if a.n != b.n:
        raise UsageError(f"order mismatch: {a.n} vs {b.n}")


def contains(a: BinaryMatrix, b: BinaryMatrix) -> bool:
    """True iff every 1 of ``b`` is a 1 of ``a``."""
    _same_order(a, b)
    return b.bits & ~a.bits == 0


def union(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    _same_order(a, b)
    return BinaryMatrix(a.n, a.bits | b.bits)


def transpose(f: BinaryMatrix) -> BinaryMatrix:
    return BinaryMatrix(f.n, _transpose_bits(f.n, f.bits))


def _check_perm(n: int, perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(n)):
        raise UsageError(f"not a permutation of 0..{n - 1}: {perm!r}")


def permute_rows(f: BinaryMatrix, perm: Sequence[int]) -> BinaryMatrix:
    """Move row ``i`` of ``f`` to row ``perm[i]``."""
    _check_perm(f.n, perm)
    rows = _split_rows(f.n, f.bits)
    out = [0] * f.n
    for i, p in enumerate(perm):
        out[p] = rows[i]
    return BinaryMatrix(f.n, _join_rows(f.n, out))


def permute_cols(f: BinaryMatrix, perm: Sequence[int]) -> BinaryMatrix:
    """Move column ``j`` of ``f`` to column ``perm[j]``."""
    _check_perm(f.n, perm)
    return transpose(permute_rows(transpose(f), perm))


def find_permutation(
    g: BinaryMatrix, required: tuple[int, int] | None = None
) -> PermutationMatrix | None:
    """Backtracking search for a permutation matrix contained in ``g``.

    Rows are filled in index order and columns tried in ascending order, so the
    witness is deterministic.  With ``required=(i, j)`` only permutations
    sending row i to column j are accepted.
    """
    rows = _split_rows(g.n, g.bits)
    if required is None:
        perm = _search(rows, g.n)
    else:
        i, j = required
        if not (0 <= i < g.n and 0 <= j < g.n):
            raise UsageError(f"cell {required!r} outside a {g.n}x{g.n} matrix")
        perm = _search(rows, g.n, i, j)
    return None if perm is None else PermutationMatrix(perm)


def face_closure(g: BinaryMatrix) -> BinaryMatrix:
    """Largest face contained in ``g``: the union of its permutation matrices."""
    return BinaryMatrix(g.n, _closure_bits(g.n, g.bits))


def is_face(g: BinaryMatrix) -> bool:
    return g.bits != 0 and _closure_bits(g.n, g.bits) == g.bits


def dimension(f: BinaryMatrix) -> int:
    """Dimension of the face ``f`` as e + k - 2n.

    e is the number of 1's and k the number of connected components of the
    bipartite row/column graph.  Only meaningful when ``f`` is a face.
    """
    return _dimension_bits(f.n, f.bits)


def permutations_in(g: BinaryMatrix) -> Iterable[PermutationMatrix]:
    """All permutation matrices contained in ``g``, in lexicographic order."""
    n = g.n
    rows = _split_rows(n, g.bits)
    perm = [0] * n

    def rec(i, used):
        if i == n:
            yield PermutationMatrix(tuple(perm))
            return
        opts = rows[i] & ~used
        while opts:
            low = opts & -opts
            opts ^= low
            perm[i] = low.bit_length() - 1
            yield from rec(i + 1, used | low)

    return rec(0, 0)
