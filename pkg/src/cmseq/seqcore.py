"""Exact-arithmetic sequence engine.

Sequences are finite prefixes ``c_0..c_N`` carried either as exact rationals
(:class:`fractions.Fraction`) or as binary floats.  All monotonicity tests are
truncated: a passing report certifies ``(I-S)^k c_j >= 0`` for every
``j + k <= N`` and nothing beyond.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

VERIFIED = "verified-to-order"
VIOLATED = "violated"


class TailBoundError(ValueError):
    """Raised when a compounding series cannot be truncated within tolerance."""


def to_scalar(x, kind: Optional[str] = None) -> Scalar:
    """Coerce ``x`` to a Fraction (exact) or float.

    Integers, Fractions and strings like ``"3/7"`` become exact unless
    ``kind == "float"``.  Floats stay floats unless ``kind == "exact"``, in
    which case the binary value is converted exactly.
    """
    if isinstance(x, str):
        x = x.strip()
        if kind == FLOAT:
            if "/" in x:
                return float(Fraction(x))
            return float(x)
        return Fraction(x)
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, Rational):
        return float(x) if kind == FLOAT else Fraction(x)
    if isinstance(x, float):
        return Fraction(x) if kind == EXACT else x
    # numpy scalars and friends
    if hasattr(x, "is_integer") or hasattr(x, "__float__"):
        if hasattr(x, "dtype") and x.dtype.kind in "iu":
            return float(x) if kind == FLOAT else Fraction(int(x))
        return Fraction(float(x)) if kind == EXACT else float(x)
    raise TypeError(f"cannot interpret {x!r} as a real scalar")


def scalar_kind(x) -> str:
    return EXACT if isinstance(x, (Fraction, int)) and not isinstance(x, bool) else FLOAT


@dataclass(frozen=True)
class Sequence:
    """Finite sequence prefix with a homogeneous scalar kind."""

    terms: tuple
    kind: str = field(default=EXACT)

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("a sequence needs at least one term")
        if self.kind not in (EXACT, FLOAT):
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        conv = tuple(to_scalar(t, self.kind) for t in self.terms)
        object.__setattr__(self, "terms", conv)

    @classmethod
    def of(cls, values: Iterable, kind: Optional[str] = None) -> "Sequence":
        """Build a sequence, inferring the kind: any float makes it float."""
        values = list(values)
        if kind is None:
            kind = FLOAT if any(isinstance(v, float) or
                                (hasattr(v, "dtype") and v.dtype.kind == "f")
                                for v in values) else EXACT
        return cls(tuple(values), kind)

    @property
    def N(self) -> int:
        """Highest index carried (length minus one)."""
        return len(self.terms) - 1

    @property
    def exact(self) -> bool:
        return self.kind == EXACT

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __iter__(self):
        return iter(self.terms)

    def to_float(self) -> "Sequence":
        return Sequence(self.terms, FLOAT)

    def truncate(self, n_terms: int) -> "Sequence":
        return Sequence(self.terms[:n_terms], self.kind)

    def scaled_powers(self, ratio) -> "Sequence":
        """Return ``(c_j * ratio**j)``; exact when both sides are exact."""
        kind = self.kind if scalar_kind(ratio) == EXACT else FLOAT
        ratio = to_scalar(ratio, kind)
        out, w = [], to_scalar(1, kind)
        for c in self.terms:
            out.append(to_scalar(c, kind) * w)
            w = w * ratio
        return Sequence(tuple(out), kind)


def as_sequence(c) -> Sequence:
    if isinstance(c, Sequence):
        return c
    return Sequence.of(c)


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of a truncated complete-monotonicity test.

    ``max_order`` is the largest K such that every cell with ``j + k <= K``
    was checked and found nonnegative.  ``witness`` is ``(j, k, value)`` for
    the first violation in lexicographic ``(k, j)`` order.
    """

    verdict: str
    max_order: int
    witness: Optional[tuple] = None

    def __post_init__(self):
        if (self.verdict == VIOLATED) != (self.witness is not None):
            raise ValueError("witness must be present exactly when violated")

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "max_order": self.max_order}
        if self.witness is not None:
            j, k, v = self.witness
            out["witness"] = {"j": j, "k": k, "value": v}
        return out


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic measure on ``[0, tau]``, used as a mixing distribution."""

    atoms: tuple
    tau: Scalar = Fraction(1)

    def __post_init__(self):
        tau = to_scalar(self.tau)
        if tau <= 0:
            raise ValueError("tau must be positive")
        atoms = []
        for loc, mass in self.atoms:
            loc, mass = to_scalar(loc), to_scalar(mass)
            if mass < 0:
                raise ValueError(f"negative mass {mass} at {loc}")
            if not 0 <= loc <= tau:
                raise ValueError(f"atom {loc} outside [0, {tau}]")
            atoms.append((loc, mass))
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "tau", tau)

    @classmethod
    def point(cls, t) -> "DiscreteMeasure":
        t = to_scalar(t)
        return cls(((t, 1),), tau=max(t, to_scalar(1)))

    def moments(self, N: int) -> Sequence:
        """Moments ``int t^j dnu`` for ``j = 0..N`` (``0**0 == 1``)."""
        kinds = {scalar_kind(x) for a in self.atoms for x in a}
        kind = FLOAT if FLOAT in kinds else EXACT
        zero = to_scalar(0, kind)
        out = []
        for j in range(N + 1):
            s = zero
            for loc, mass in self.atoms:
                s += to_scalar(mass, kind) * to_scalar(loc, kind) ** j
            out.append(s)
        return Sequence(tuple(out), kind)


def _common_denominator(terms):
    """Integers ``n_j`` and ``D`` with ``c_j = n_j / D`` for exact terms."""
    D = 1
    for t in terms:
        D = D * t.denominator // math.gcd(D, t.denominator)
    return [t.numerator * (D // t.denominator) for t in terms], D


def difference_table(c) -> list:
    """Rows ``k = 0..N`` of ``(I-S)^k c_j`` for ``j = 0..N-k``.

    Exact input is processed on a common integer denominator, which is much
    faster than repeated Fraction normalisation for long prefixes.
    """
    c = as_sequence(c)
    if c.exact:
        ints, D = _common_denominator(c.terms)
        rows = [ints]
        while len(rows[-1]) > 1:
            prev = rows[-1]
            rows.append([prev[j] - prev[j + 1] for j in range(len(prev) - 1)])
        return [[Fraction(v, D) for v in row] for row in rows]
    rows = [list(c.terms)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([prev[j] - prev[j + 1] for j in range(len(prev) - 1)])
    return rows


def finite_difference(c, k: int, j: int) -> Scalar:
    """``(I-S)^k c_j = sum_n (-1)^n C(k,n) c_{n+j}``."""
    c = as_sequence(c)
    if k < 0 or j < 0:
        raise IndexError("k and j must be nonnegative")
    if j + k > c.N:
        raise IndexError(f"j + k = {j + k} exceeds N = {c.N}")
    total = to_scalar(0, c.kind)
    for n in range(k + 1):
        term = math.comb(k, n) * c[n + j]
        total = total - term if n % 2 else total + term
    return total


def _default_tol(c: Sequence) -> float:
    return 1e-12 * max(1.0, max(abs(float(t)) for t in c.terms))


def check_completely_monotone(c, tol: Optional[float] = None) -> MonotonicityReport:
    """Truncated test of ``(I-S)^k c_j >= 0`` for all ``j + k <= N``.

    Exact sequences are compared against zero exactly.  Float sequences use
    the threshold ``-tol`` (default ``1e-12 * max(1, max|c_j|)``).
    """
    c = as_sequence(c)
    if c.exact:
        threshold = 0
    else:
        threshold = -(_default_tol(c) if tol is None else tol)
    rows = difference_table(c)
    first = None
    min_bad_order = None
    for k, row in enumerate(rows):
        for j, v in enumerate(row):
            if v < threshold:
                if first is None:
                    first = (j, k, v)
                if min_bad_order is None or j + k < min_bad_order:
                    min_bad_order = j + k
    if first is None:
        return MonotonicityReport(VERIFIED, c.N)
    return MonotonicityReport(VIOLATED, min_bad_order - 1, first)


def check_completely_alternating(a, tol: Optional[float] = None) -> MonotonicityReport:
    """A sequence is completely alternating when its increments are CM."""
    a = as_sequence(a)
    if len(a) < 2:
        raise ValueError("need at least two terms to form increments")
    inc = Sequence(tuple(a[n + 1] - a[n] for n in range(a.N)), a.kind)
    return check_completely_monotone(inc, tol)


def check_dilated_hausdorff(c, tau, tol: Optional[float] = None) -> MonotonicityReport:
    """Test ``(c_j tau^-j)`` for complete monotonicity (moments on ``[0, tau]``)."""
    c = as_sequence(c)
    tau_s = to_scalar(tau)
    if tau_s <= 0:
        raise ValueError("tau must be positive")
    if c.exact and scalar_kind(tau_s) == EXACT:
        ratio = 1 / tau_s
    else:
        ratio = 1.0 / float(tau_s)
    return check_completely_monotone(c.scaled_powers(ratio), tol)


def convex_alternating_sequence(c) -> Sequence:
    """``a_0 = 0, a_n = n c_{n-1}``."""
    c = as_sequence(c)
    zero = to_scalar(0, c.kind)
    return Sequence((zero,) + tuple(n * c[n - 1] for n in range(1, len(c) + 1)), c.kind)


def check_convex_moments(c, tol: Optional[float] = None) -> MonotonicityReport:
    """Moments of a convex distribution function iff ``a_n = n c_{n-1}`` is
    completely alternating.  The report's orders refer to the increment
    sequence ``((n+1) c_n - n c_{n-1})``, which has the same length as ``c``.
    """
    c = as_sequence(c)
    if c[0] != 1:
        warnings.warn("c_0 != 1: convexity criterion assumes a probability distribution")
    return check_completely_alternating(convex_alternating_sequence(c), tol)


def check_concave_moments(c, tol: Optional[float] = None) -> MonotonicityReport:
    """Moments of a concave distribution function iff ``((n+1) c_n)`` is CM."""
    c = as_sequence(c)
    return check_completely_monotone(
        Sequence(tuple((n + 1) * t for n, t in enumerate(c)), c.kind), tol)


def _tail_sum(k: int, N: int, q: float, t_pow: float, envelope, decay):
    """Upper bound on ``sum_{j>N} env_j C(j,k) q^{j-k} * t_pow``.

    ``envelope`` bounds ``|c_j|`` for ``j > N``: a constant, or
    ``envelope * decay**(j-N)`` when ``decay`` is given.  Terms are summed
    explicitly until the term ratio drops below one, then closed with a
    geometric remainder.
    """
    if t_pow == 0 or envelope == 0:
        return 0.0
    rate = q if decay is None else q * decay
    if rate == 0:
        return 0.0
    if rate >= 1:
        return math.inf
    total = 0.0
    j = N + 1
    # term_j = envelope * decay^(j-N) * C(j,k) q^(j-k) t_pow
    log_term = (math.log(envelope) + math.log(t_pow)
                + math.lgamma(j + 1) - math.lgamma(k + 1) - math.lgamma(j - k + 1)
                + (j - k) * math.log(q)
                + (0.0 if decay is None else math.log(decay)))
    for _ in range(100000):
        term = math.exp(log_term)
        total += term
        ratio = rate * (j + 1) / (j + 1 - k)
        if ratio < 1:
            # all later ratios are smaller, so the remainder is geometric
            rest = term * ratio / (1 - ratio)
            if rest <= 1e-3 * total or term < 1e-300:
                return total + rest
        log_term += math.log(ratio)
        j += 1
    return math.inf


def _compound_weights(c: Sequence, weights: list, tail_tol: float, decay):
    """Shared engine for the two compounding transforms.

    ``weights`` is a list of ``(mass, t)`` atoms; the output term is
    ``b_k = sum_j c_j C(j,k) sum_atoms mass (1-t)^(j-k) t^k``.
    """
    if decay is not None and decay < 0:
        raise ValueError("decay must be nonnegative")
    N = c.N
    kinds = {c.kind} | {scalar_kind(m) for m, _ in weights} | {scalar_kind(t) for _, t in weights}
    kind = FLOAT if FLOAT in kinds else EXACT
    one = to_scalar(1, kind)
    if decay is None:
        envelope = max(abs(float(x)) for x in c.terms)
    else:
        envelope = abs(float(c[N]))
    out = []
    for k in range(N + 1):
        bound = 0.0
        for mass, t in weights:
            tf = float(t)
            t_pow = float(mass) * (tf ** k if k else 1.0)
            bound += _tail_sum(k, N, abs(1 - tf), t_pow, envelope, decay)
        if not bound < tail_tol:
            break
        s = to_scalar(0, kind)
        for mass, t in weights:
            mass, t = to_scalar(mass, kind), to_scalar(t, kind)
            tk = t ** k if k else one
            if tk == 0 or mass == 0:
                continue
            q = one - t
            acc = to_scalar(0, kind)
            qp = one  # q^(j-k), with 0**0 == 1
            for j in range(k, N + 1):
                acc += to_scalar(c[j], kind) * math.comb(j, k) * qp
                qp = qp * q
            s += mass * tk * acc
        out.append(s)
    if not out:
        raise TailBoundError(
            f"tail bound exceeds {tail_tol} already at k = 0; supply more terms or a decay envelope")
    return Sequence(tuple(out), kind)


def dilate_compound(c, p, tail_tol: float = 1e-12, decay: Optional[float] = None) -> Sequence:
    """Coefficients of ``F(p z + 1 - p)`` for ``0 < p < 2``.

    ``b_k = sum_{j>=k} c_j C(j,k) (1-p)^(j-k) p^k``.  The infinite sum is cut
    at ``N``; the returned prefix stops at the last ``k`` whose tail bound
    is below ``tail_tol``.  By default ``|c_j| <= max|c|`` is assumed beyond
    the prefix; ``decay=rho`` asserts ``|c_j| <= |c_N| rho^(j-N)`` instead,
    and ``decay=0`` declares the sequence finitely supported.
    """
    c = as_sequence(c)
    p = to_scalar(p)
    if not 0 < p < 2:
        raise ValueError("p must lie in (0, 2)")
    return _compound_weights(c, [(to_scalar(1, scalar_kind(p)), p)], tail_tol, decay)


def exchangeable_compound(c, nu: DiscreteMeasure, tail_tol: float = 1e-12,
                          decay: Optional[float] = None) -> Sequence:
    """Success-count law when the number of trials has law ``c`` and the
    success probability is drawn from ``nu``.  ``0**0`` is taken as 1 at
    atoms ``t = 0`` and ``t = 1``.  See :func:`dilate_compound` for the
    truncation contract.
    """
    c = as_sequence(c)
    for loc, _ in nu.atoms:
        if not 0 <= loc < 2:
            raise ValueError(f"atom {loc} outside [0, 2)")
    return _compound_weights(c, [(m, t) for t, m in nu.atoms], tail_tol, decay)


def convolve(b, c) -> Sequence:
    """Cauchy product truncated to the shorter length."""
    b, c = as_sequence(b), as_sequence(c)
    kind = EXACT if b.exact and c.exact else FLOAT
    n = min(len(b), len(c))
    bt = [to_scalar(x, kind) for x in b.terms[:n]]
    ct = [to_scalar(x, kind) for x in c.terms[:n]]
    out = []
    for k in range(n):
        s = to_scalar(0, kind)
        for i in range(k + 1):
            s += bt[i] * ct[k - i]
        out.append(s)
    return Sequence(tuple(out), kind)


def compound_compose(b, c) -> Sequence:
    """Coefficients of ``G(F(z))``: ``a_k = sum_j b_j (c^{*j})_k``.

    When ``c_0 = 0`` only ``j <= k`` contribute and the result is exact up to
    ``min(len b, len c)`` terms.  Otherwise the outer sum is cut at
    ``len(b)`` and the result has ``len(c)`` terms; for probability vectors
    the error in every term is at most ``1 - sum(b)`` (see
    :func:`compound_truncation_bound`).
    """
    b, c = as_sequence(b), as_sequence(c)
    kind = EXACT if b.exact and c.exact else FLOAT
    n_out = min(len(b), len(c)) if c[0] == 0 else len(c)
    ct = Sequence(tuple(c.terms[:n_out]), kind)
    power = Sequence((to_scalar(1, kind),) + (to_scalar(0, kind),) * (n_out - 1), kind)
    acc = [to_scalar(0, kind)] * n_out
    for j in range(len(b)):
        bj = to_scalar(b[j], kind)
        if bj != 0:
            acc = [a + bj * pw for a, pw in zip(acc, power.terms)]
        if j + 1 < len(b):
            power = convolve(power, ct)
    return Sequence(tuple(acc), kind)


def compound_truncation_bound(b) -> float:
    """Mass of the outer law beyond the supplied prefix, ``1 - sum(b)``."""
    b = as_sequence(b)
    return max(0.0, float(1 - sum(b.terms)))


def leading_differences(c) -> Sequence:
    """``hat c_k = (I-S)^k c_0``: moments of the reflected measure."""
    c = as_sequence(c)
    rows = difference_table(c)
    return Sequence(tuple(row[0] for row in rows), c.kind)


def diaconis_freedman_array(c, n: int) -> list:
    """Row ``n`` of the triangular array ``c_{n,m} = C(n,m) (I-S)^{n-m} c_m``.

    For moments of a measure on ``[0,1]`` the entries are the masses the
    measure assigns to binomial-weighted cells; they are nonnegative and sum
    to ``c_0``.
    """
    c = as_sequence(c)
    if n < 0 or n > c.N:
        raise IndexError(f"row {n} needs terms up to index {n}, have N = {c.N}")
    rows = difference_table(c.truncate(n + 1))
    return [math.comb(n, m) * rows[n - m][m] for m in range(n + 1)]
