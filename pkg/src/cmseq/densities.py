"""Fuss-Catalan densities, canonical densities and endpoint-singular moments.

Moments on ``[0, tau]`` are computed after the substitution
``t = tau sin^2(theta)``, which turns inverse-square-root endpoint behaviour
into smooth integrands for Gauss-Legendre quadrature.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .fusscatalan import tau as tau_of

DEFAULT_NQUAD = 512


def mp_density(t: float) -> float:
    """Marchenko-Pastur density ``sqrt((4 - t)/t) / (2 pi)`` on ``(0, 4)``."""
    if not 0 < t < 4:
        raise ValueError("Marchenko-Pastur density lives on (0, 4)")
    return math.sqrt((4 - t) / t) / (2 * math.pi)


def w2(t: float) -> float:
    """Canonical density of the Catalan numbers, ``arccos(sqrt(t/4)) / pi``."""
    if not 0 <= t <= 4:
        raise ValueError("w2 is defined on [0, 4]")
    return math.acos(math.sqrt(t / 4)) / math.pi


def _log_sinc(x: float) -> float:
    """``log(sin x / x)``; three-term series for small ``x``."""
    if abs(x) < 1e-3:
        x2 = x * x
        return -x2 / 6 - x2 * x2 / 180 - x2 * x2 * x2 / 2835
    return math.log(math.sin(x) / x)


def _sin_pi(u: float) -> float:
    # sin(pi u) without losing digits as u -> 1
    return math.sin(math.pi * (1 - u)) if u > 0.5 else math.sin(math.pi * u)


def f_p(p: float, u: float) -> float:
    """``sin^p(pi u) / (sin(pi u / p) sin^(p-1)((1 - 1/p) pi u))``.

    Decreases from ``tau_p`` at ``u = 0`` to 0 at ``u = 1``.
    """
    p = float(p)
    if p <= 1:
        raise ValueError("f_p needs p > 1")
    if u <= 0:
        return float(tau_of(p))
    if u >= 1:
        return 0.0
    x = math.pi * u
    if u < 1e-2:
        # tau_p * exp(log-sinc corrections) avoids the 0/0 ratio
        lt = p * math.log(p) - (p - 1) * math.log(p - 1)
        return math.exp(lt + p * _log_sinc(x) - _log_sinc(x / p)
                        - (p - 1) * _log_sinc((1 - 1 / p) * x))
    return _sin_pi(u) ** p / (math.sin(x / p) * math.sin((1 - 1 / p) * x) ** (p - 1))


def _dlog_f_p(p: float, u: float) -> float:
    x = math.pi * u
    a = (1 - 1 / p)
    cot = lambda y: math.cos(y) / math.sin(y)
    return math.pi * (p * cot(x) - cot(x / p) / p - (p - 1) * a * cot(a * x))


def w_p(p: float, t: float, tol: float = 1e-14) -> float:
    """Canonical density of ``A_n(p, 1)`` via ``p w_p(t) = f_p^{-1}(t)``.

    Bisection on the decreasing ``f_p`` followed by Newton polishing.
    """
    p = float(p)
    if p <= 1:
        raise ValueError("w_p needs p > 1")
    tp = float(tau_of(p))
    if not 0 < t < tp:
        raise ValueError(f"t must lie in (0, {tp})")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f_p(p, mid) > t:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9:
            break
    u = 0.5 * (lo + hi)
    for _ in range(30):
        fu = f_p(p, u)
        if abs(fu - t) <= tol * max(1.0, t):
            break
        d = fu * _dlog_f_p(p, u)
        if d == 0:
            break
        u_new = u - (fu - t) / d
        if not lo <= u_new <= hi:
            u_new = 0.5 * (lo + hi)
        if f_p(p, u_new) > t:
            lo = u_new
        else:
            hi = u_new
        if u_new == u:
            break
        u = u_new
    if abs(f_p(p, u) - t) > 1e-9 * max(1.0, t):
        raise ArithmeticError(f"w_p inversion did not converge at t = {t}")
    return u / p


def binom_integral(r: float, k: int, n_quad: int = DEFAULT_NQUAD) -> float:
    """``C(r, k)`` as ``(1/pi) int_0^pi (sin x / (sin^a(a x) sin^(1-a)((1-a) x)))^r dx``
    with ``a = k / r``.
    """
    if k <= 0 or int(k) != k:
        raise ValueError("k must be a positive integer")
    if r < k:
        raise ValueError("need r >= k")
    theta = k / r
    if theta == 1:
        return 1.0
    x, wts = _gl_nodes(n_quad)
    x = 0.5 * math.pi * (x + 1)
    wts = 0.5 * math.pi * wts
    # log of the bracket; the x -> 0 limit is -a log a - (1-a) log(1-a)
    sx = np.where(x > 0.5 * math.pi, np.sin(math.pi - x), np.sin(x))
    lb = (np.log(sx) - theta * np.log(np.sin(theta * x))
          - (1 - theta) * np.log(np.sin((1 - theta) * x)))
    vals = np.exp(r * lb)
    return float(np.dot(wts, vals) / math.pi)


@lru_cache(maxsize=32)
def _gl_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)


# ------------------------------------------------------------ DensitySpec

@dataclass
class DensitySpec:
    """A measure on ``[0, tau]`` described by kind.

    Kinds:

    * ``marchenko_pastur``: ``dmu_{2,1}``.
    * ``mu_pp``: ``t dmu_{p,1}``; only ``p = 2`` has a closed form here.
    * ``w2_closed``: the canonical density ``w_2`` as a weight.
    * ``wp_inverse``: the distribution ``1 - p w_p`` with ``w_p`` obtained by
      numerical inversion of ``f_p``; moments are ``C(pn, n)``.
    * ``arcsine_binomial``: the same distribution for ``p = 2`` through its
      density ``1 / (pi sqrt(t (4 - t)))``; other ``p`` fall back to the
      inversion route.
    * ``custom``: piecewise-linear density through CSV grid points.
    """

    kind: str
    p: float = 2.0
    grid: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    singularity: tuple = (0.0, 0.0)
    probability: bool = True
    support: tuple = field(init=False)

    def __post_init__(self):
        if self.kind in ("marchenko_pastur", "w2_closed"):
            self.p = 2.0
        if self.kind == "mu_pp" and self.p != 2:
            raise NotImplementedError("t dmu_{p,1} has a closed form here only for p = 2")
        if self.kind == "custom":
            if self.grid is None or self.values is None:
                raise ValueError("custom densities need grid and values")
            self.grid = np.asarray(self.grid, dtype=float)
            self.values = np.asarray(self.values, dtype=float)
            if np.any(np.diff(self.grid) <= 0):
                raise ValueError("custom grid must be strictly increasing")
            self.support = (float(self.grid[0]), float(self.grid[-1]))
        elif self.kind in ("marchenko_pastur", "mu_pp", "w2_closed", "wp_inverse",
                           "arcsine_binomial"):
            self.support = (0.0, float(tau_of(self.p)))
        else:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "marchenko_pastur":
            self.singularity = (-0.5, 0.5)
        elif self.kind == "mu_pp":
            self.singularity = (0.5, 0.5)
        elif self.kind == "arcsine_binomial":
            self.singularity = (-0.5, -0.5)
        if min(self.singularity) <= -1:
            raise ValueError("endpoint exponents must exceed -1 for integrability")

    @property
    def tau(self) -> float:
        return self.support[1]

    @classmethod
    def from_csv(cls, path: str) -> "DensitySpec":
        """Two-column ``t, w(t)`` file with strictly increasing ``t``."""
        ts, ws = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    t, w = float(row[0]), float(row[1])
                except ValueError:
                    continue  # header line
                ts.append(t)
                ws.append(w)
        return cls("custom", grid=np.array(ts), values=np.array(ws), probability=False)


def _theta_rule(n_quad: int):
    """Gauss-Legendre nodes on ``theta in [0, pi/2]``."""
    x, w = _gl_nodes(n_quad)
    return 0.25 * math.pi * (x + 1), 0.25 * math.pi * w


def density_moment(spec: DensitySpec, n: int, n_quad: int = DEFAULT_NQUAD) -> float:
    """``int t^n dmu`` for the measure described by ``spec``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    kind = spec.kind
    if kind == "custom":
        return _custom_moment(spec.grid, spec.values, n)
    tau = spec.tau
    th, wt = _theta_rule(n_quad)
    s, c = np.sin(th), np.cos(th)
    tn = (tau * s * s) ** n
    if kind == "marchenko_pastur":
        # (1/2pi) sqrt((4-t)/t) dt = (4/pi) cos^2 dtheta
        return float(np.dot(wt, tn * (4 / math.pi) * c * c))
    if kind == "mu_pp":
        # t dmu_{2,1} = (1/2pi) sqrt(t (4-t)) dt = (16/pi) sin^2 cos^2 dtheta
        return float(np.dot(wt, tn * (16 / math.pi) * s * s * c * c))
    if kind == "w2_closed":
        # w2(4 sin^2) = (pi/2 - theta)/pi ; dt = 8 sin cos dtheta
        return float(np.dot(wt, tn * (0.5 - th / math.pi) * 8 * s * c))
    if kind == "arcsine_binomial" and spec.p == 2:
        # dt / (pi sqrt(t(4-t))) = (2/pi) dtheta
        return float(np.dot(wt, tn * (2 / math.pi)))
    if kind in ("wp_inverse", "arcsine_binomial"):
        p = float(spec.p)
        if n == 0:
            return 1.0
        # parts: int t^n d(1 - p w_p) = tau^n - n int t^(n-1) (1 - p w_p) dt
        t, dt, g = _wp_inverse_nodes(p, n_quad)
        return float(tau ** n - n * np.dot(dt, t ** (n - 1) * g))
    raise ValueError(f"unknown density kind {kind!r}")


@lru_cache(maxsize=16)
def _wp_inverse_nodes(p: float, n_quad: int) -> tuple:
    """``(t_i, dt_i, 1 - p w_p(t_i))`` on the ``sin^2`` grid; ``w_p`` always
    comes from numerical inversion, even for ``p = 2``."""
    th, wt = _theta_rule(n_quad)
    tp = float(tau_of(p))
    t = tp * np.sin(th) ** 2
    dt = wt * 2 * tp * np.sin(th) * np.cos(th)
    g = np.array([1 - p * w_p(p, ti) for ti in t])
    return t, dt, g


def _custom_moment(t: np.ndarray, w: np.ndarray, n: int) -> float:
    """Exact moment of the piecewise-linear interpolant of ``(t, w)``."""
    total = 0.0
    for a, b, wa, wb in zip(t[:-1], t[1:], w[:-1], w[1:]):
        slope = (wb - wa) / (b - a)
        # int_a^b t^n (wa + slope (t - a)) dt
        i_n = (b ** (n + 1) - a ** (n + 1)) / (n + 1)
        i_n1 = (b ** (n + 2) - a ** (n + 2)) / (n + 2)
        total += (wa - slope * a) * i_n + slope * i_n1
    return total


def mp_cdf(x: float, n_quad: int = 256) -> float:
    """Marchenko-Pastur distribution function by quadrature on ``[0, x]``."""
    if x <= 0:
        return 0.0
    if x >= 4:
        return 1.0
    th_max = math.asin(math.sqrt(x / 4))
    xg, wg = _gl_nodes(n_quad)
    th = 0.5 * th_max * (xg + 1)
    return float(0.5 * th_max * np.dot(wg, (4 / math.pi) * np.cos(th) ** 2))
