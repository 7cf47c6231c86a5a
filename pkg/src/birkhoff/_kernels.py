"""Compiled versions of the lattice inner loop.

These mirror ``matrix._search``, ``triangulate._opposite_facets_bits`` and
``triangulate._canonical_bits`` bit for bit, so a level expanded here holds
exactly the same words as one expanded by the pure Python code.
"""

import numba
import numpy as np
from numba import njit, prange

# the TBB found on some systems is too old and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def _search(rows, n, req_row, req_col, perm):
    avail = np.empty(n, np.int64)
    for i in range(n):
        r = rows[i]
        if req_row >= 0:
            if i == req_row:
                if not (r >> req_col) & 1:
                    return False
                r = np.int64(1) << req_col
            else:
                r = r & ~(np.int64(1) << req_col)
        if r == 0:
            return False
        avail[i] = r
    choice = np.empty(n, np.int64)
    used = np.int64(0)
    i = 0
    choice[0] = avail[0]
    while True:
        opts = choice[i] & ~used
        if opts != 0:
            low = opts & -opts
            choice[i] = choice[i] & ~low
            j = 0
            while (low >> j) != 1:
                j += 1
            perm[i] = j
            used |= low
            i += 1
            if i == n:
                return True
            choice[i] = avail[i]
        else:
            i -= 1
            if i < 0:
                return False
            used &= ~(np.int64(1) << perm[i])


@njit(cache=True)
def _split(n, bits, rows):
    m = (np.int64(1) << n) - 1
    for i in range(n):
        rows[i] = (bits >> (i * n)) & m


@njit(cache=True)
def _join(n, rows):
    b = np.int64(0)
    for i in range(n):
        b |= rows[i] << (i * n)
    return b


@njit(cache=True)
def _transpose_rows(n, rows, cols):
    for j in range(n):
        c = np.int64(0)
        for i in range(n):
            c |= ((rows[i] >> j) & 1) << i
        cols[j] = c


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _reverse(n, r):
    out = 0
    for j in range(n):
        if (r >> j) & 1:
            out |= 1 << (n - 1 - j)
    return out


@njit(cache=True)
def _scores(n, rows, cols, base1, base2, rs, cs):
    nrs = np.empty(n, np.int64)
    ncs = np.empty(n, np.int64)
    for i in range(n):
        rs[i] = _popcount(rows[i])
        cs[i] = _popcount(cols[i])
    for rnd in range(2):
        base = base1 if rnd == 0 else base2
        for i in range(n):
            s = 0
            for j in range(n):
                if (rows[i] >> j) & 1:
                    s += cs[j]
            nrs[i] = rs[i] * base + s
        for j in range(n):
            s = 0
            for i in range(n):
                if (cols[j] >> i) & 1:
                    s += rs[i]
            ncs[j] = cs[j] * base + s
        for i in range(n):
            rs[i] = nrs[i]
            cs[i] = ncs[i]


@njit(cache=True)
def _standard_form(n, rows, rs, cs):
    # stable insertion sort of columns by score
    order = np.arange(n)
    for a in range(1, n):
        x = order[a]
        b = a - 1
        while b >= 0 and cs[order[b]] > cs[x]:
            order[b + 1] = order[b]
            b -= 1
        order[b + 1] = x
    moved = np.empty(n, np.int64)
    for i in range(n):
        nr = 0
        for k in range(n):
            if (rows[i] >> order[k]) & 1:
                nr |= 1 << k
        moved[i] = nr
    keys = np.empty(n, np.int64)
    for i in range(n):
        keys[i] = rs[i] * 256 + _reverse(n, moved[i])
    idx = np.arange(n)
    for a in range(1, n):
        x = idx[a]
        b = a - 1
        while b >= 0 and keys[idx[b]] > keys[x]:
            idx[b + 1] = idx[b]
            b -= 1
        idx[b + 1] = x
    out = np.int64(0)
    for i in range(n):
        out |= moved[idx[i]] << (i * n)
    return out


@njit(cache=True)
def canonical(n, bits, base1, base2):
    rows = np.empty(n, np.int64)
    cols = np.empty(n, np.int64)
    rs = np.empty(n, np.int64)
    cs = np.empty(n, np.int64)
    while True:
        _split(n, bits, rows)
        _transpose_rows(n, rows, cols)
        _scores(n, rows, cols, base1, base2, rs, cs)
        a = _standard_form(n, rows, rs, cs)
        b = _standard_form(n, cols, cs, rs)
        best = a if a < b else b
        if best == bits:
            return bits
        bits = best


@njit(cache=True)
def _expand_one(n, w, base1, base2, out, off, do_canon):
    rows = np.empty(n, np.int64)
    g = np.empty(n, np.int64)
    perm = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    cands = np.empty(n, np.int64)
    _split(n, w, rows)
    _search(rows, n, -1, -1, perm)
    for i in range(n):
        for r in range(n):
            g[r] = rows[r]
        g[i] &= ~(np.int64(1) << perm[i])
        cand = w & ~(np.int64(1) << (i * n + perm[i]))
        for j in range(n):
            if j != i and not _search(g, n, j, perm[j], tmp):
                cand &= ~(np.int64(1) << (j * n + perm[j]))
        cands[i] = cand
    for i in range(n):
        c = cands[i]
        keep = True
        for j in range(n):
            o = cands[j]
            if o == c:
                if j < i:  # duplicate, first copy wins
                    keep = False
                    break
            elif (c & ~o) == 0:
                keep = False
                break
        if keep:
            out[off + i] = canonical(n, c, base1, base2) if do_canon else c
        else:
            out[off + i] = 0


@njit(cache=True, parallel=True)
def expand_level(n, words, base1, base2, do_canon):
    """Canonical opposite facets of each word; slot ``i*n + k`` is 0 when unused."""
    out = np.empty(words.shape[0] * n, np.int64)
    for p in prange(words.shape[0]):
        _expand_one(n, words[p], base1, base2, out, p * n, do_canon)
    return out
