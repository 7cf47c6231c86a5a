"""Monte Carlo estimate of vol(A_n) / vol(C_n).

A_n is the set of upper-left (n-1) x (n-1) blocks of doubly stochastic
matrices: nonnegative, row and column sums <= 1, total >= n - 2.  C_n drops
the column condition and the total, which makes it a product of n - 1 solid
unit simplices and easy to sample uniformly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .matrix import UsageError

RNG_NAME = "numpy PCG64, SeedSequence.spawn per partition"
BATCH = 1 << 16


@dataclass(frozen=True)
class SampleReport:
    n: int
    trials: int
    hits: int
    seed: int
    partitions: int
    rng: str = RNG_NAME

    @property
    def alpha_hat(self) -> Fraction:
        return Fraction(self.hits, self.trials)

    @property
    def stderr(self) -> float:
        a = self.hits / self.trials
        return math.sqrt(a * (1 - a) / self.trials)

    def to_json(self) -> dict:
        out = asdict(self)
        out["alpha_hat"] = self.hits / self.trials
        out["stderr"] = self.stderr
        return out


def sample_row_stochastic(n: int, rng: np.random.Generator, size: int | None = None):
    """Uniform point(s) of C_n: each row uniform on {x >= 0, sum(x) <= 1}.

    Rows are the first n - 1 spacings of n - 1 sorted uniforms.  Returns an
    (n-1, n-1) array, or (size, n-1, n-1) when ``size`` is given.
    """
    if n < 2:
        raise UsageError("n must be at least 2")
    k = n - 1
    shape = (1 if size is None else size, k, k)
    u = np.sort(rng.random(shape), axis=-1)
    x = np.diff(u, axis=-1, prepend=0.0)
    return x[0] if size is None else x


def in_A(m: np.ndarray, n: int) -> np.ndarray:
    """Membership in A_n for a stack of row-substochastic matrices."""
    cols = m.sum(axis=-2)
    total = m.sum(axis=(-2, -1))
    return np.all(cols <= 1.0, axis=-1) & (total >= n - 2)


def is_in_A(m, n: int) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (n - 1, n - 1):
        raise UsageError(f"expected a {n - 1}x{n - 1} matrix")
    return bool(in_A(m, n))


def _count_hits(n, trials, seed_seq):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    hits = 0
    left = trials
    while left:
        b = min(left, BATCH)
        hits += int(in_A(sample_row_stochastic(n, rng, b), n).sum())
        left -= b
    return hits


def estimate_alpha(
    n: int, trials: int, seed: int = 0, partitions: int = 1, threads: int = 1
) -> SampleReport:
    """Fraction of uniform points of C_n that land in A_n.

    Trials are split over ``partitions`` independent streams spawned from
    ``seed``; the result depends on (seed, trials, partitions) only, not on
    ``threads``.
    """
    if trials < 1:
        raise UsageError("trials must be positive")
    if partitions < 1:
        raise UsageError("partitions must be positive")
    streams = np.random.SeedSequence(seed).spawn(partitions)
    sizes = [trials // partitions + (i < trials % partitions) for i in range(partitions)]
    jobs = [(n, s, ss) for s, ss in zip(sizes, streams) if s]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda a: _count_hits(*a), jobs))
    else:
        hits = sum(_count_hits(*a) for a in jobs)
    return SampleReport(n, trials, hits, seed, partitions)


def simplex_product_volume(n: int) -> Fraction:
    """vol(C_n) = 1 / ((n-1)!)^(n-1)."""
    return Fraction(1, math.factorial(n - 1) ** (n - 1))


def exact_alpha(n: int, relvol: int) -> Fraction:
    """vol(A_n) / vol(C_n) with vol(A_n) = relvol / ((n-1)^2)!."""
    return Fraction(relvol * math.factorial(n - 1) ** (n - 1), math.factorial((n - 1) ** 2))
