"""Magic-square counts and the Ehrhart polynomial of B_n.

``e(B_n, t)`` is the number of n x n nonnegative integer matrices with all
line sums equal to t.  Counts of matrices with prescribed margins are built
from the split recursion

    N(r, c) = sum_x N(r[:k], x) * N(r[k:], c - x)

where x runs over the possible column sums of the top k rows.  The Ehrhart
polynomial is written in the basis ``C(t + n - 1 + k, n - 1 + 2k)``, which
is unitriangular on t = 0, 1, 2, ..., so its coefficients follow by forward
substitution from ``e(B_n, t)`` for t <= C(n-1, 2).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Sequence

from .matrix import UsageError

MAX_ORDER = 8


# --------------------------------------------------------------------------
# tuples
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SumVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(v) for v in self.entries))
        if any(v < 0 for v in self.entries):
            raise UsageError(f"negative entry in {self.entries!r}")

    @property
    def total(self) -> int:
        return sum(self.entries)

    def normalized(self) -> "SumVector":
        return SumVector(tuple(sorted(self.entries)))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _entries(v) -> tuple[int, ...]:
    if isinstance(v, SumVector):
        return v.entries
    out = tuple(int(x) for x in v)
    if any(x < 0 for x in out):
        raise UsageError(f"negative entry in {out!r}")
    return out


def multiplicity(y: Sequence[int]) -> int:
    """Number of distinct tuples obtained by permuting ``y``."""
    y = _entries(y)
    out = factorial(len(y))
    for k in Counter(y).values():
        out //= factorial(k)
    return out


def sorted_tuples(length: int, total: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Weakly increasing tuples of ``length`` entries in [0, cap] summing to ``total``."""

    def rec(prefix, k, rest, lo):
        if k == 0:
            if rest == 0:
                yield tuple(prefix)
            return
        # remaining k entries are all >= lo and <= cap
        for v in range(lo, min(cap, rest // k) + 1):
            if rest - v > (k - 1) * cap:
                continue
            prefix.append(v)
            yield from rec(prefix, k - 1, rest - v, v)
            prefix.pop()

    return rec([], length, total, 0)


def bounded_vectors(bounds: Sequence[int], total: int) -> Iterator[tuple[int, ...]]:
    """All vectors x with 0 <= x_i <= bounds[i] and sum ``total``."""
    k = len(bounds)
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + bounds[i]
    x = [0] * k

    def rec(i, rest):
        if i == k - 1:
            if rest <= bounds[i]:
                x[i] = rest
                yield tuple(x)
            return
        for v in range(max(0, rest - suffix[i + 1]), min(bounds[i], rest) + 1):
            x[i] = v
            yield from rec(i + 1, rest - v)

    if k == 0:
        if total == 0:
            yield ()
        return
    if 0 <= total <= suffix[0]:
        yield from rec(0, total)


# --------------------------------------------------------------------------
# contingency tables
# --------------------------------------------------------------------------


def count_2x2(x: Sequence[int], y: Sequence[int]) -> int:
    """2 x 2 tables with row sums x and column sums y: min(x1, x2, y1, y2) + 1."""
    x, y = _entries(x), _entries(y)
    if len(x) != 2 or len(y) != 2:
        raise UsageError("count_2x2 needs two row sums and two column sums")
    if sum(x) != sum(y):
        return 0
    return min(*x, *y) + 1


def _norm(v) -> tuple[int, ...]:
    return tuple(sorted(a for a in v if a))


def _split_sum(r, c, k, count) -> int:
    """Sum over the column sums x of the first k rows of r."""
    head, tail = r[:k], r[k:]
    total = 0
    for x in bounded_vectors(c, sum(head)):
        a = count(_norm(head), _norm(x))
        if a:
            total += a * count(_norm(tail), _norm(ci - xi for ci, xi in zip(c, x)))
    return total


def _count(r: tuple[int, ...], c: tuple[int, ...], count) -> int:
    # r, c normalized with equal sums; split the longer side in half
    if len(r) < len(c):
        r, c = c, r
    if len(c) <= 1:
        return 1
    if len(r) == 2:
        return min(*r, *c) + 1
    return _split_sum(r, c, len(r) // 2, count)


@lru_cache(maxsize=None)
def _count_memo(r, c) -> int:
    return _count(r, c, _count_memo)


def _count_plain(r, c) -> int:
    return _count(r, c, _count_plain)


def count_contingency(r, c, split: int | None = None, memo: bool = True) -> int:
    """Number of nonnegative integer matrices with row sums r and column sums c.

    ``split`` forces the first step of the recursion to separate the first
    ``split`` rows of ``r`` from the rest; deeper steps always halve the
    longer side.  Zero margins are dropped and the rest sorted before
    memoization, since the count is invariant under permuting either tuple.
    """
    r, c = _entries(r), _entries(c)
    if sum(r) != sum(c):
        return 0
    count = _count_memo if memo else _count_plain
    if split is None:
        return count(_norm(r), _norm(c))
    if not 1 <= split < len(r):
        raise UsageError(f"split point must be in 1..{len(r) - 1}")
    return _split_sum(r, c, split, count)


class CountTable:
    """Lookup of N(x, y) under normalized (sorted) keys, computed on first use."""

    def __init__(self):
        self._data: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}

    def __len__(self):
        return len(self._data)

    def __getitem__(self, key) -> int:
        x, y = key
        k = (tuple(sorted(x)), tuple(sorted(y)))
        v = self._data.get(k)
        if v is None:
            v = self._data[k] = count_contingency(k[0], k[1])
        return v

    def items(self):
        return self._data.items()


# --------------------------------------------------------------------------
# magic squares
# --------------------------------------------------------------------------


def _block_counts(rows: int, n: int, t: int, table: CountTable) -> dict[tuple, int]:
    """N(R, y) for every weakly increasing n-tuple y, R = (t,) * rows.

    The columns of y are split into a left part of ceil(n/2) columns and the
    rest; x is the tuple of row sums of the left block, summed over weakly
    increasing x with weight M(x).
    """
    p = (n + 1) // 2
    out = {}
    for y in sorted_tuples(n, rows * t, t):
        left, right = y[:p], y[p:]
        s = 0
        for x in sorted_tuples(rows, sum(left), t):
            a = table[x, left]
            if a:
                s += multiplicity(x) * a * table[tuple(t - v for v in x), right]
        if s:
            out[y] = s
    return out


def magic_count(n: int, t: int, table: CountTable | None = None) -> int:
    """Number of n x n nonnegative integer matrices with all line sums t.

    Splits the rows into a top block of ceil(n/2) rows and a bottom block,
    classifying matrices by the column sums y of the top block:
    ``e = sum_y M(y) N(R_top, y) N(R_bottom, T - y)`` over weakly increasing
    y.  For even n both blocks have the same shape and the bottom factors are
    looked up among the top ones.
    """
    if not 1 <= n <= MAX_ORDER:
        raise UsageError(f"n must be in 1..{MAX_ORDER}")
    if t < 0:
        raise UsageError("t must be nonnegative")
    if n == 1 or t == 0:
        return 1
    if table is None:
        table = CountTable()
    a = (n + 1) // 2
    b = n - a
    top = _block_counts(a, n, t, table)
    bottom = top if a == b else _block_counts(b, n, t, table)
    total = 0
    for y, count in top.items():
        other = bottom.get(tuple(sorted(t - v for v in y)))
        if other:
            total += multiplicity(y) * count * other
    return total


# --------------------------------------------------------------------------
# the Ehrhart polynomial
# --------------------------------------------------------------------------


def binomial(a: int, k: int) -> int:
    """C(a, k) as a polynomial in a, so negative ``a`` is allowed."""
    if k < 0:
        return 0
    if a >= 0:
        return comb(a, k)
    num = 1
    for i in range(k):
        num *= a - i
    return num // factorial(k)


def basis(n: int, k: int, t: int) -> int:
    return binomial(t + n - 1 + k, n - 1 + 2 * k)


@dataclass(frozen=True)
class EhrhartPoly:
    """e(B_n, t) = sum_k coeffs[k] * C(t + n - 1 + k, n - 1 + 2k)."""

    n: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return (self.n - 1) ** 2

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, t: int) -> int:
        return evaluate(self, t)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "basis": "C(t+n-1+k, n-1+2k)",
            "coeffs": [str(a) for a in self.coeffs],
        }

    def __str__(self):
        n = self.n
        terms = []
        for k, a in enumerate(self.coeffs):
            b = f"C(t+{n - 1 + k},{n - 1 + 2 * k})" if n - 1 + k else f"C(t,{n - 1 + 2 * k})"
            terms.append(b if a == 1 else f"{a}{b}")
        return " + ".join(terms)


def evaluate(p: EhrhartPoly, t: int) -> int:
    return sum(a * basis(p.n, k, t) for k, a in enumerate(p.coeffs))


def solve_coefficients(n: int, values: Sequence[int]) -> tuple[int, ...]:
    """Forward substitution: basis coefficients from e(B_n, 0..len(values)-1)."""
    coeffs: list[int] = []
    for k, v in enumerate(values):
        coeffs.append(v - sum(a * basis(n, j, k) for j, a in enumerate(coeffs)))
    return tuple(coeffs)


def magic_counts(n: int, ts) -> list[int]:
    table = CountTable()
    return [magic_count(n, t, table) for t in ts]


def ehrhart_polynomial(n: int, counter=None) -> EhrhartPoly:
    """Ehrhart polynomial of B_n from e(B_n, t), t = 0..C(n-1, 2).

    ``counter(n, ts)`` may replace the default magic-square counter; it must
    return the list of counts for the given t values.
    """
    if not 1 <= n <= MAX_ORDER:
        raise UsageError(f"n must be in 1..{MAX_ORDER}")
    ts = range(comb(n - 1, 2) + 1)
    values = (counter or magic_counts)(n, ts)
    return EhrhartPoly(n, solve_coefficients(n, values))


def interpolate_with_symmetry(n: int, values: dict[int, int]) -> list[Fraction]:
    """Monomial coefficients of e(B_n, t), lowest degree first.

    Uses e = 0 at t = -1..-(n-1), the given values for t >= 0, and
    e(-n-t) = (-1)^(n-1) e(t) to reach (n-1)^2 + 1 points, then plain
    Lagrange interpolation.  Independent of the binomial basis; kept as a
    cross-check.
    """
    pts: dict[int, int] = {-i: 0 for i in range(1, n)}
    sign = -1 if (n - 1) % 2 else 1
    for t, v in values.items():
        pts[t] = v
        pts[-n - t] = sign * v
    need = (n - 1) ** 2 + 1
    if len(pts) < need:
        raise UsageError(f"need {need} points, have {len(pts)}")
    xs = sorted(pts)[:need] if len(pts) > need else sorted(pts)
    coeffs = [Fraction(0)] * need
    for i, xi in enumerate(xs):
        # basis polynomial prod_{j != i} (t - xj) / (xi - xj)
        poly = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            poly = [Fraction(0)] + poly
            for d in range(len(poly) - 1):
                poly[d] -= xj * poly[d + 1]
            denom *= xi - xj
        for d in range(need):
            coeffs[d] += Fraction(pts[xi], denom) * poly[d]
    return coeffs


def eval_monomial(coeffs: Sequence[Fraction], t: int) -> Fraction:
    out = Fraction(0)
    for a in reversed(coeffs):
        out = out * t + a
    return out
