"""numpy backend for magic-square counts at n = 7, 8.

Same sums as :func:`birkhoff.ehrhart.magic_count`, with two changes that
matter for speed:

* The table N(x, u) (x: row sums of a block, u: weakly increasing column
  sums) is built one column at a time for *all* x at once.  Appending a
  column of sum s to the array F[x] = N(x, u) is the split recursion with a
  one-column block: G[x] = sum over z <= x with |x - z| = s of F[z], i.e. a
  cumulative sum along every axis restricted to the slice |x| = |u| + s.
  Column tuples share prefixes, so they are visited depth first.
* The weighted sums over x run as int64 vector operations.  Table entries
  stay below 2**31.5, so a product of two fits in int64; products are split
  into 32-bit limbs before summing so nothing overflows.
"""

from __future__ import annotations

import logging
from math import comb

import numpy as np

from .ehrhart import multiplicity, sorted_tuples

log = logging.getLogger(__name__)

_PRODUCT_LIMIT = 3_037_000_499  # floor(sqrt(2**63 - 1))


class _Group:
    """Weakly increasing ``rows``-tuples with a fixed sum, entries <= cap."""

    def __init__(self, rows, total, cap):
        self.tuples = list(sorted_tuples(rows, total, cap))
        self.index = {x: i for i, x in enumerate(self.tuples)}
        arr = np.array(self.tuples, dtype=np.int64).reshape(len(self.tuples), rows)
        self.flat = np.ravel_multi_index(arr.T, (cap + 1,) * rows)
        self.mult = np.array([multiplicity(x) for x in self.tuples], dtype=np.int64)
        self.maxentry = arr.max(axis=1) if len(arr) else np.zeros(0, np.int64)


class BlockTable:
    """N(x, u) for x, u weakly increasing with entries <= cap and len(x) == rows.

    ``values[u]`` is the vector over ``groups[sum(u)].tuples``.
    """

    def __init__(self, rows: int, cap: int, lengths):
        self.rows = rows
        self.cap = cap
        self.groups = {s: _Group(rows, s, cap) for s in range(rows * cap + 1)}
        self.values: dict[tuple, np.ndarray] = {}
        shape = (cap + 1,) * rows
        tot = np.zeros(shape, dtype=np.int64)
        for ax in range(rows):
            idx = [None] * rows
            idx[ax] = slice(None)
            tot = tot + np.arange(cap + 1)[tuple(idx)]
        lengths = set(lengths)
        depth = max(lengths)
        start = np.zeros(shape, dtype=np.int64)
        start[(0,) * rows] = 1
        peak = 0

        def visit(F, prefix, degree, lo):
            nonlocal peak
            for v in range(lo, cap + 1):
                if degree + v > rows * cap:
                    # no row sums within the cap can reach this total
                    break
                G = F
                for ax in range(rows):
                    G = np.cumsum(G, axis=ax)
                G = np.where(tot == degree + v, G, 0)
                u = prefix + (v,)
                if len(u) in lengths:
                    vec = G.ravel()[self.groups[degree + v].flat]
                    peak = max(peak, int(vec.max(initial=0)))
                    self.values[u] = vec
                if len(u) < depth:
                    visit(G, u, degree + v, v)

        visit(start, (), 0, 0)
        if peak > _PRODUCT_LIMIT:
            raise OverflowError(f"table entry {peak} too large for int64 products")

    def block_counts(self, n: int, t: int, p: int) -> dict[tuple, int]:
        """N(R, y) for weakly increasing n-tuples y, R = (t,) * rows."""
        rows = self.rows
        out = {}
        comp_cache = {}
        for y in sorted_tuples(n, rows * t, t):
            left, right = y[:p], y[p:]
            s = sum(left)
            hit = comp_cache.get(s)
            if hit is None:
                g = self.groups[s]
                ok = np.flatnonzero(g.maxentry <= t)
                h = self.groups[rows * t - s]
                comp = np.array(
                    [h.index[tuple(t - v for v in reversed(g.tuples[i]))] for i in ok],
                    dtype=np.int64,
                )
                hit = comp_cache[s] = (ok, comp, g.mult[ok])
            ok, comp, mult = hit
            if len(ok) == 0:
                continue
            prod = self.values[left][ok] * self.values[right][comp]
            lo = int(np.dot(mult, prod & 0xFFFFFFFF))
            hi = int(np.dot(mult, prod >> 32))
            val = (hi << 32) + lo
            if val:
                out[y] = val
        return out


def magic_counts(n: int, ts) -> list[int]:
    """e(B_n, t) for every t in ``ts`` sharing one precomputed table."""
    ts = list(ts)
    if n < 2:
        return [1] * len(ts)
    cap = max(max(ts), 1)
    a = (n + 1) // 2
    b = n - a
    p = (n + 1) // 2
    lengths = {p, n - p}
    tables = {a: BlockTable(a, cap, lengths)}
    if b != a:
        tables[b] = BlockTable(b, cap, lengths)
    log.debug("n=%d tables ready for cap %d", n, cap)
    out = []
    for t in ts:
        if t == 0:
            out.append(1)
            continue
        top = tables[a].block_counts(n, t, p)
        bottom = top if a == b else tables[b].block_counts(n, t, p)
        total = 0
        for y, count in top.items():
            other = bottom.get(tuple(sorted(t - v for v in y)))
            if other:
                total += multiplicity(y) * count * other
        out.append(total)
        log.debug("n=%d t=%d: %d", n, t, total)
    return out


def default_ts(n: int) -> range:
    return range(comb(n - 1, 2) + 1)
