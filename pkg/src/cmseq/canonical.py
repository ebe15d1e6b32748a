"""Canonical sequences, convolution powers and the canonical-density bound.

For a sequence with ``c_0 = 1`` and generating function ``F`` the canonical
sequence ``b`` has generating function ``F'/F``; the convolution power
``a^(r)`` has generating function ``F^r`` and is produced by the same
first-order recursion scaled by ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .seqcore import (EXACT, FLOAT, Scalar, Sequence, as_sequence, convolve,
                      scalar_kind, to_scalar)


def _require_normalized(c: Sequence):
    if c[0] != 1:
        raise ValueError(f"expected c_0 = 1, got {c[0]}; normalise the sequence first")


@dataclass(frozen=True)
class ConvGroupElement:
    """Convolution power ``a^(r)`` of a normalised sequence."""

    r: Scalar
    terms: Sequence


def canonical_from_moments(c) -> Sequence:
    """Solve ``(n+1) c_{n+1} = sum_{k<=n} c_{n-k} b_k`` for ``b_0..b_{N-1}``."""
    c = as_sequence(c)
    _require_normalized(c)
    b = []
    for n in range(c.N):
        s = (n + 1) * c[n + 1]
        for k in range(n):
            s -= c[n - k] * b[k]
        b.append(s)  # c_0 == 1
    if not b:
        raise ValueError("need at least two terms to determine a canonical sequence")
    return Sequence(tuple(b), c.kind)


def _power_from_canonical(b: Sequence, r, n_terms: int, kind: str) -> Sequence:
    r = to_scalar(r, kind)
    a = [to_scalar(1, kind)]
    for n in range(n_terms - 1):
        s = to_scalar(0, kind)
        for k in range(n + 1):
            s += a[n - k] * b[k]
        a.append(r * s / (n + 1))
    return Sequence(tuple(a), kind)


def conv_group_power(c, r) -> ConvGroupElement:
    """Coefficients of ``F(z)^r`` via ``(n+1) a_{n+1} = r sum a_{n-k} b_k``.

    Any real ``r`` is accepted, negative included.  Exact when ``c`` and
    ``r`` are both exact.
    """
    c = as_sequence(c)
    _require_normalized(c)
    kind = EXACT if c.exact and scalar_kind(to_scalar(r)) == EXACT else FLOAT
    r = to_scalar(r, kind)
    b = canonical_from_moments(c) if c.N else Sequence((0,), c.kind)
    b = Sequence(b.terms, kind)
    return ConvGroupElement(r, _power_from_canonical(b, r, len(c), kind))


def group_law_check(c, r, s, tol: float = 1e-12) -> bool:
    """``a^(r) * a^(s) == a^(r+s)`` termwise (exactly, or within ``tol``)."""
    c = as_sequence(c)
    ar = conv_group_power(c, r).terms
    as_ = conv_group_power(c, s).terms
    ars = conv_group_power(c, to_scalar(r) + to_scalar(s)).terms
    prod = convolve(ar, as_)
    if prod.exact and ars.exact:
        return prod.terms == ars.terms
    scale = max(1.0, max(abs(float(x)) for x in ars.terms))
    return all(abs(float(x) - float(y)) <= tol * scale for x, y in zip(prod, ars))


def bn_alternating_crosscheck(c, n: int) -> tuple:
    """Return ``(b_{n-1}/n, sum_k (-1)^(k-1)/k C(n,k) a^(k)_n)``.

    The left side comes from the canonical recursion, the right side from
    integer convolution powers only; they agree exactly for exact input.
    """
    c = as_sequence(c)
    _require_normalized(c)
    if not 1 <= n <= c.N:
        raise IndexError(f"n must be in [1, {c.N}]")
    b = canonical_from_moments(c)
    lhs = b[n - 1] / n
    prefix = c.truncate(n + 1)
    rhs = to_scalar(0, c.kind)
    power = Sequence((1,) + (0,) * n, c.kind)
    for k in range(1, n + 1):
        power = convolve(power, prefix)  # F^k by repeated products
        term = math.comb(n, k) * power[n] / k
        rhs = rhs + term if k % 2 else rhs - term
    return lhs, rhs


def series_exp_identity(c) -> Scalar:
    """Max coefficient defect between ``c`` and ``exp(sum b_n z^(n+1)/(n+1))``.

    The exponential is formed as ``sum_m g^m / m!`` with explicit powers of
    ``g`` (``g`` has no constant term, so ``m <= N`` suffices); this path
    shares nothing with the canonical recursion beyond ``b`` itself.
    """
    c = as_sequence(c)
    _require_normalized(c)
    N = c.N
    zero, one = to_scalar(0, c.kind), to_scalar(1, c.kind)
    if N == 0:
        return abs(c[0] - one)
    b = canonical_from_moments(c)
    g = Sequence((zero,) + tuple(b[n] / (n + 1) for n in range(N)), c.kind)
    total = [one] + [zero] * N
    power = Sequence((one,) + (zero,) * N, c.kind)
    fact = 1
    for m in range(1, N + 1):
        power = convolve(power, g)
        fact *= m
        total = [t + x / fact for t, x in zip(total, power.terms)]
    return max(abs(x - y) for x, y in zip(total, c.terms))


def _disc_map_coefficients(g: list) -> list:
    """Re-expand ``sum g_n z^n`` in ``zeta`` with ``z = 4 zeta / (1+zeta)^2``.

    The map sends the unit disc onto the plane cut along ``[1, inf)``, so the
    re-expanded series continues a function analytic off that cut.
    ``z^n = 4^n zeta^n (1+zeta)^(-2n)`` and
    ``(1+zeta)^(-2n) = sum_i C(-2n, i) zeta^i``.
    """
    M = len(g)
    out = [Fraction(0)] * M if all(isinstance(x, Fraction) for x in g) else [0.0] * M
    for n, gn in enumerate(g):
        if gn == 0:
            continue
        base = gn * 4 ** n
        for i in range(M - n):
            if n == 0:
                coef = 1 if i == 0 else 0
            else:
                coef = (-1) ** i * math.comb(2 * n + i - 1, i)
            out[n + i] += base * coef
    return out


def _safe_radius(coeffs, target: float = 1e-3) -> float:
    """Largest sampled radius whose truncation error estimate is below ``target``.

    The neglected tail is bounded by ``A r^M / (1 - r)`` with ``A`` the
    largest coefficient magnitude over the last half of the expansion.
    """
    M = len(coeffs)
    A = float(np.max(np.abs(coeffs[M // 2:]))) if M > 1 else 0.0
    if A == 0.0:
        return 0.995
    best = 0.05
    for r in np.linspace(0.05, 0.995, 190):
        if A * r ** M / (1 - r) <= target:
            best = float(r)
    return best


def canonical_density_bound(c, tau, n_radii: int = 12, n_angles: int = 720,
                            max_radius: Optional[float] = None) -> float:
    """Grid lower bound for the ess sup of the canonical density.

    The canonical series of the dilated sequence ``c_j tau^-j`` gives
    ``Log F(z) = sum b_n z^(n+1)/(n+1)`` whose argument maps the upper half
    plane onto ``(0, pi * rho)``.  The series only converges for ``|z| < 1``,
    so it is first re-expanded through the disc map ``z = 4 zeta/(1+zeta)^2``
    and then sampled on polar ``zeta`` grids in the upper half disc (all of
    which land in the upper half plane).  Returns ``max Im Log F / pi``.
    """
    c = as_sequence(c)
    _require_normalized(c)
    tau_s = to_scalar(tau)
    if tau_s <= 0:
        raise ValueError("tau must be positive")
    ratio = 1 / tau_s if c.exact and scalar_kind(tau_s) == EXACT else 1.0 / float(tau_s)
    b = canonical_from_moments(c.scaled_powers(ratio))
    g = [to_scalar(0, b.kind)] + [b[n] / (n + 1) for n in range(len(b))]
    coeffs = _disc_map_coefficients(g)
    coeffs = np.array([float(x) for x in coeffs])
    M = len(coeffs)
    if max_radius is None:
        max_radius = _safe_radius(coeffs)
    radii = np.linspace(max_radius / n_radii, max_radius, n_radii)
    phis = np.linspace(0, np.pi, n_angles + 2)[1:-1]
    zeta = (radii[:, None] * np.exp(1j * phis[None, :])).ravel()
    powers = zeta[:, None] ** np.arange(M)[None, :]
    vals = powers @ coeffs
    finite = np.isfinite(vals)
    if not finite.any():
        return math.nan
    return float(np.max(vals[finite].imag) / math.pi)
