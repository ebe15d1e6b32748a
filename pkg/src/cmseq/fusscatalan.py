"""Fuss-Catalan (Raney) numbers, binomial sequences and their support radii.

Everything is computed from falling-factorial products, so rational ``p``
and ``r`` give exact Fractions; real parameters fall back to floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .seqcore import EXACT, FLOAT, Scalar, Sequence, scalar_kind, to_scalar


def _kind(*xs) -> str:
    return FLOAT if any(scalar_kind(x) == FLOAT for x in xs) else EXACT


def tau(p) -> Scalar:
    """Minimal support radius ``p^p / (p-1)^(p-1)`` (1 at ``p = 1``).

    Exact for integer ``p``; a float otherwise.
    """
    p = to_scalar(p)
    if p < 1:
        raise ValueError("tau_p is defined for p >= 1")
    if p == 1:
        return Fraction(1)
    if isinstance(p, Fraction) and p.denominator == 1:
        n = p.numerator
        return Fraction(n ** n, (n - 1) ** (n - 1))
    pf = float(p)
    return math.exp(pf * math.log(pf) - (pf - 1) * math.log(pf - 1))


@dataclass(frozen=True)
class FcParams:
    """Parameter pair ``(p, r)`` of the Raney numbers ``A_n(p, r)``."""

    p: Scalar
    r: Scalar = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "p", to_scalar(self.p))
        object.__setattr__(self, "r", to_scalar(self.r))
        if self.p <= 0:
            raise ValueError("p must be positive")

    @property
    def kind(self) -> str:
        return _kind(self.p, self.r)

    @property
    def tau_p(self) -> Scalar:
        return tau(self.p)

    @property
    def z_p(self) -> Scalar:
        t = self.tau_p
        return 1 / t


def fc_number(params: FcParams, n: int) -> Scalar:
    """``A_n(p,r) = (r/n!) prod_{j=1}^{n-1} (pn + r - j)``, ``A_0 = 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    kind = params.kind
    p, r = to_scalar(params.p, kind), to_scalar(params.r, kind)
    if n == 0:
        return to_scalar(1, kind)
    prod = r
    for j in range(1, n):
        prod = prod * (p * n + r - j)
    return prod / math.factorial(n)


def fc_sequence(params: FcParams, N: int) -> Sequence:
    """``(A_n(p,r))_{n=0..N}``."""
    return Sequence(tuple(fc_number(params, n) for n in range(N + 1)), params.kind)


def falling_binomial(x, n: int) -> Scalar:
    """``C(x, n)`` for real ``x`` via the falling factorial; never gamma."""
    if n < 0:
        return to_scalar(0, scalar_kind(x))
    prod = to_scalar(1, scalar_kind(x))
    for i in range(n):
        prod = prod * (x - i)
    return prod / math.factorial(n)


def binomial_sequence(params: FcParams, N: int) -> Sequence:
    """``(C(pn + r - 1, n))_{n=0..N}``."""
    kind = params.kind
    p, r = to_scalar(params.p, kind), to_scalar(params.r, kind)
    return Sequence(tuple(falling_binomial(p * n + r - 1, n) for n in range(N + 1)), kind)


def fc_canonical_sequence(p, N: int) -> Sequence:
    """Canonical sequence of ``A_n(p,1)``: ``b_{n-1} = C(pn - 1, n - 1)``.

    Returns ``b_0..b_N``.
    """
    p = to_scalar(p)
    if p < 1:
        raise ValueError("canonical Fuss-Catalan sequence needs p >= 1")
    return Sequence(tuple(falling_binomial(p * n - 1, n - 1) for n in range(1, N + 2)),
                    scalar_kind(p))


def fc_alternating_identity(p, n: int) -> tuple:
    """Both sides of the canonical-sequence identity for ``A_n(p, .)``.

    ``lhs = n sum_{k=1}^n (-1)^(k-1)/k C(n,k) A_n(p,k)``, computed from
    :func:`fc_number`; ``rhs = C(pn - 1, n - 1)``.  The alternating sum
    cancels heavily, so it is only meaningful in exact arithmetic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = to_scalar(p)
    if scalar_kind(p) != EXACT:
        raise ValueError("the alternating identity is an exact check; pass a rational p")
    lhs = Fraction(0)
    for k in range(1, n + 1):
        term = Fraction(math.comb(n, k), k) * fc_number(FcParams(p, k), n)
        lhs += term if k % 2 else -term
    lhs *= n
    return lhs, falling_binomial(p * n - 1, n - 1)
