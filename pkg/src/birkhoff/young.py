"""Staircase faces F_n and the Catalan-product volume check.

F_n has a 1 at (i, j) exactly when j <= i + 1, so its zeros form a
staircase in the upper right corner.  Its relative volume appears to be the
product of the first n - 1 Catalan numbers; this module only checks that
numerically.
"""

from __future__ import annotations

from math import comb

from .matrix import BinaryMatrix, UsageError
from .triangulate import relative_volume


def staircase_face(n: int) -> BinaryMatrix:
    if not 2 <= n <= 8:
        raise UsageError(f"staircase faces need 2 <= n <= 8, got {n}")
    return BinaryMatrix.from_rows([[1 if j <= i + 1 else 0 for j in range(n)] for i in range(n)])


def catalan(i: int) -> int:
    return comb(2 * i, i) // (i + 1)


def catalan_product(n: int) -> int:
    """Product of the Catalan numbers C_0 .. C_{n-2}."""
    if n < 2:
        raise UsageError("n must be at least 2")
    out = 1
    for i in range(n - 1):
        out *= catalan(i)
    return out


def staircase_volume(n: int, **kwargs) -> int:
    return relative_volume(staircase_face(n), **kwargs)


def verify_conjecture(n: int, **kwargs) -> bool:
    return staircase_volume(n, **kwargs) == catalan_product(n)
