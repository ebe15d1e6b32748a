"""Distribution-function reconstruction from a finite moment prefix.

Row ``n`` of the triangular array ``c_{n,m} = C(n,m) (I-S)^{n-m} c_m`` holds
the masses a measure on ``[0, 1]`` gives to the Bernstein cells around
``m/n``; their partial sums form a step-function estimate of the
distribution function.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable

from .seqcore import (EXACT, Sequence, as_sequence, check_dilated_hausdorff,
                      diaconis_freedman_array, scalar_kind, to_scalar)


class NotAMomentSequence(ValueError):
    """A triangular-array entry came out negative."""

    def __init__(self, message: str, witness: tuple):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class DistributionEstimate:
    """Step-function CDF estimate on ``x_m = tau m / n``.

    ``cdf[m]`` is the value on ``[x_m, x_{m+1})`` (right-continuous).
    """

    grid: tuple
    cdf: tuple
    order: int
    tau: float

    def __call__(self, x: float) -> float:
        if x < 0:
            return 0.0
        i = bisect_right(self.grid, x) - 1
        return self.cdf[min(i, len(self.cdf) - 1)]

    def left_limit(self, x: float) -> float:
        """``F(x-)``."""
        if x <= 0:
            return 0.0
        i = bisect_right(self.grid, x) - 1
        if i >= 0 and self.grid[i] == x:
            i -= 1
        return self.cdf[i] if i >= 0 else 0.0

    def sup_distance(self, F: Callable[[float], float]) -> float:
        """``sup_x |F_hat(x) - F(x)|`` for a continuous ``F``.

        For a step function against a continuous nondecreasing ``F`` the
        supremum is attained at a jump, from one side or the other.
        """
        worst = 0.0
        for i, x in enumerate(self.grid):
            fx = F(x)
            worst = max(worst, abs(self.cdf[i] - fx), abs(self.left_limit(x) - fx))
        return worst

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "cdf"])
        for x, f in zip(self.grid, self.cdf):
            w.writerow([repr(float(x)), repr(float(f))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, tau: float | None = None) -> "DistributionEstimate":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and r[0] != "x"]
        grid = tuple(float(r[0]) for r in rows)
        cdf = tuple(float(r[1]) for r in rows)
        return cls(grid, cdf, len(grid) - 1, grid[-1] if tau is None else tau)


def reconstruct_cdf(c, n: int, tau=1) -> DistributionEstimate:
    """Estimate the distribution function of a measure on ``[0, tau]``.

    The prefix is rescaled to ``[0, 1]`` by ``c_j tau^-j`` (exactly when
    possible), row ``n`` of the triangular array is formed, and
    ``F_hat(x) = sum_{m <= n x / tau} c_{n,m} / c_0``.  Raises
    :class:`NotAMomentSequence` when a row entry is negative.
    """
    c = as_sequence(c)
    if n > c.N:
        raise IndexError(f"order {n} needs {n + 1} terms, have {len(c)}")
    tau_s = to_scalar(tau)
    if tau_s <= 0:
        raise ValueError("tau must be positive")
    if c.exact and scalar_kind(tau_s) == EXACT:
        scaled = c.truncate(n + 1).scaled_powers(1 / tau_s)
    else:
        scaled = c.truncate(n + 1).scaled_powers(1.0 / float(tau_s))
    row = diaconis_freedman_array(scaled, n)
    tol = 0 if scaled.exact else 1e-12 * max(1.0, abs(float(scaled[0])))
    for m, v in enumerate(row):
        if v < -tol:
            raise NotAMomentSequence(
                f"array entry c[{n},{m}] = {float(v):.3g} < 0: not a moment sequence on "
                f"[0, {tau}] to order {n}", (n, m, v))
    total = scaled[0]
    if total == 0:
        raise ValueError("c_0 = 0 carries no mass")
    acc, cdf = 0, []
    for v in row:
        acc = acc + v
        cdf.append(float(acc / total))
    tf = float(tau_s)
    grid = tuple(tf * m / n for m in range(n + 1)) if n else (tf,)
    return DistributionEstimate(grid, tuple(cdf), n, tf)


def reflect(est: DistributionEstimate) -> DistributionEstimate:
    """Distribution of ``tau - X``: ``x -> 1 - F((tau - x)-)`` on the same grid."""
    # tau - x_m is grid point n - m, so F((tau - x_m)-) = cdf[n - m - 1]
    n = len(est.cdf) - 1
    cdf = tuple(1.0 - (est.cdf[n - m - 1] if m < n else 0.0) for m in range(n + 1))
    return DistributionEstimate(est.grid, cdf, est.order, est.tau)
