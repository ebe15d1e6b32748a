"""Generating functions off their cut, Pick-property scans and atom masses.

``B_p`` is the branch of ``psi_p(B) = (B-1)/B^p = z`` with ``B_p(0) = 1``.
It is evaluated by Newton's method continued along a path from 0 to ``z``,
with one step of the ODE ``B' = B(B-1) / (z (p - (p-1) B))`` as predictor.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .fusscatalan import tau as tau_of
from .seqcore import Sequence, as_sequence


class ContinuationError(RuntimeError):
    """Newton continuation could not reach the target point."""


MAX_NEWTON = 8
MIN_STEP = 1e-12


def psi(p: float, c: complex) -> complex:
    """``(c - 1) / c^p`` on the principal branch."""
    if c == 0:
        raise ZeroDivisionError("psi_p is singular at 0")
    return (c - 1) / complex(c) ** p


def _dpsi(p: float, c: complex) -> complex:
    # psi'(c) = c^(-p-1) (p - (p-1) c)
    return (p - (p - 1) * c) / complex(c) ** (p + 1)


def z_cut(p: float) -> float:
    """Branch point ``z_p = (p-1)^(p-1) / p^p`` (1 for ``p = 1``)."""
    return 1.0 / float(tau_of(p))


def _newton(p: float, z: complex, guess: complex, tol: float) -> Optional[complex]:
    try:
        return _newton_raw(p, z, guess, tol)
    except (OverflowError, ZeroDivisionError):
        return None


def _newton_raw(p: float, z: complex, guess: complex, tol: float) -> Optional[complex]:
    B = complex(guess)
    target = tol * max(1.0, abs(z))
    for _ in range(MAX_NEWTON):
        if B == 0:
            return None
        res = psi(p, B) - z
        if abs(res) <= target:
            return B
        d = _dpsi(p, B)
        if d == 0:
            return None
        B_new = B - res / d
        # stay on the principal sheet: never cross the negative real axis
        if B_new.real <= 0 and abs(B_new.imag) < 1e-300:
            return None
        B = B_new
    if abs(psi(p, B) - z) <= target:
        return B
    return None


def _path(p: float, z: complex) -> list:
    """Waypoints from 0 to ``z``; detour around the cut tip when needed."""
    zp = z_cut(p)
    # distance from the tip to the segment [0, z]
    if z == 0:
        return [0j]
    t = max(0.0, min(1.0, (zp * z.conjugate()).real / abs(z) ** 2))
    dist = abs(t * z - zp)
    if dist < 0.05 * zp and abs(z - zp) > 1e-300:
        side = 1.0 if z.imag >= 0 else -1.0
        return [0j, complex(0.0, side * zp), z]
    return [0j, z]


def eval_Bp(p: float, z: complex, tol: float = 1e-13) -> complex:
    """Evaluate ``B_p(z)`` off the cut ``[z_p, inf)``.

    The returned value satisfies ``|psi_p(B) - z| <= tol * max(1, |z|)``.
    Real ``z < z_p`` give real results in ``(0, p/(p-1))``.
    """
    p = float(p)
    if p < 1:
        raise ValueError("eval_Bp needs p >= 1")
    z = complex(z)
    zp = z_cut(p)
    if z.imag == 0 and z.real >= zp:
        raise ContinuationError(f"z = {z.real} lies on the cut [{zp}, inf)")
    if p == 1:
        return 1 / (1 - z)
    if z == 0:
        return 1 + 0j
    waypoints = _path(p, z)
    B = 1 + 0j
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        B = _continue(p, a, b, B, tol)
    if z.imag == 0:
        B = complex(B.real, 0.0)
    return B


def _continue(p: float, a: complex, b: complex, B: complex, tol: float) -> complex:
    length = abs(b - a)
    s, h = 0.0, min(1.0, 0.25 * z_cut(p) / max(length, 1e-300))
    h = max(h, 1e-3)
    zcur = a
    while s < 1.0:
        h = min(h, 1.0 - s)
        znew = a + (s + h) * (b - a)
        # ODE predictor, except at the origin where it is 0/0
        if abs(zcur) > 1e-14:
            denom = zcur * (p - (p - 1) * B)
            guess = B + (znew - zcur) * B * (B - 1) / denom if denom != 0 else B
        else:
            guess = 1 + znew  # B_p(z) = 1 + z + O(z^2)
        Bn = _newton(p, znew, guess, tol)
        if Bn is None or abs(Bn - guess) > 0.5 * abs(B):
            h *= 0.5
            if h * length < MIN_STEP:
                raise ContinuationError(f"step underflow continuing B_{p} towards {b}")
            continue
        s += h
        zcur, B = znew, Bn
        h *= 1.5
    return B


def eval_Bpr(p: float, r: float, z: complex, tol: float = 1e-13) -> complex:
    """``B_p(z)^r = exp(r Log B_p(z))``."""
    if r == 0:
        return 1 + 0j
    B = eval_Bp(p, z, tol)
    if r == 1:
        return B
    return cmath.exp(r * cmath.log(B))


def eval_Epr(p: float, r: float, z: complex, tol: float = 1e-13) -> complex:
    """``E_{p,r}(z) = B_p^r / (p - (p-1) B_p)``, generating function of
    ``C(pn + r - 1, n)``."""
    B = eval_Bp(p, z, tol)
    denom = p - (p - 1) * B
    if abs(denom) < 1e-10:
        raise ContinuationError(f"E_{p},{r} blows up near the branch point at z = {z}")
    num = 1 + 0j if r == 0 else cmath.exp(r * cmath.log(B))
    return num / denom


@dataclass
class GenFun:
    """A generating function with a declared real cut ``[cut, inf)``.

    ``kind`` is one of ``fc_B``, ``fc_Bpr``, ``fc_Epr``, ``truncated_series``
    or ``closed_form``.
    """

    kind: str
    p: float = 2.0
    r: float = 1.0
    series: Optional[Sequence] = None
    radius: float = math.inf
    func: Optional[Callable[[complex], complex]] = None
    cut: float = math.inf
    tol: float = 1e-13
    label: str = ""

    @classmethod
    def fc_B(cls, p: float) -> "GenFun":
        return cls("fc_B", p=float(p), cut=z_cut(p), label=f"B_{p}")

    @classmethod
    def fc_Bpr(cls, p: float, r: float) -> "GenFun":
        return cls("fc_Bpr", p=float(p), r=float(r), cut=z_cut(p), label=f"B_{p}^{r}")

    @classmethod
    def fc_Epr(cls, p: float, r: float) -> "GenFun":
        return cls("fc_Epr", p=float(p), r=float(r), cut=z_cut(p), label=f"E_{p},{r}")

    @classmethod
    def fc_zBpr(cls, p: float, r: float) -> "GenFun":
        return cls("fc_zBpr", p=float(p), r=float(r), cut=z_cut(p), label=f"z B_{p}^{r}")

    @classmethod
    def truncated_series(cls, c, radius: float) -> "GenFun":
        """Polynomial ``sum c_j z^j``; ``radius`` is the convergence radius
        of the full series (``1/tau`` for moments on ``[0, tau]``)."""
        c = as_sequence(c)
        return cls("truncated_series", series=c, radius=float(radius), cut=float(radius),
                   label="series")

    @classmethod
    def closed_form(cls, func: Callable[[complex], complex], cut: float = math.inf,
                    label: str = "closed") -> "GenFun":
        return cls("closed_form", func=func, cut=cut, label=label)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if self.kind == "fc_B":
            return eval_Bp(self.p, z, self.tol)
        if self.kind == "fc_Bpr":
            return eval_Bpr(self.p, self.r, z, self.tol)
        if self.kind == "fc_Epr":
            return eval_Epr(self.p, self.r, z, self.tol)
        if self.kind == "fc_zBpr":
            return z * eval_Bpr(self.p, self.r, z, self.tol)
        if self.kind == "truncated_series":
            if abs(z) > 0.9 * self.radius:
                raise ValueError(f"|z| = {abs(z):.3g} beyond 0.9 x radius {self.radius}")
            coeffs = [float(x) for x in self.series.terms]
            return complex(np.polyval(coeffs[::-1], z))
        if self.kind == "closed_form":
            return complex(self.func(z))
        raise ValueError(f"unknown generating-function kind {self.kind!r}")

    def _seeded(self, z: complex, B_prev: Optional[complex]) -> tuple:
        """Evaluate with ``B_p`` continued from a neighbouring value.

        Returns ``(f(z), B_p(z))``.  Only for the Fuss-Catalan kinds.
        """
        p = self.p
        if B_prev is None or p == 1:
            B = eval_Bp(p, z, self.tol)
        else:
            B = _newton(p, z, B_prev, self.tol)
            if B is None or abs(B - B_prev) > 0.25 * abs(B_prev):
                B = eval_Bp(p, z, self.tol)
        return self._from_B(z, B), B

    def _from_B(self, z: complex, B: complex) -> complex:
        if self.kind == "fc_B":
            return B
        powr = 1 + 0j if self.r == 0 else cmath.exp(self.r * cmath.log(B))
        if self.kind == "fc_Bpr":
            return powr
        if self.kind == "fc_zBpr":
            return z * powr
        denom = self.p - (self.p - 1) * B
        if abs(denom) < 1e-10:
            raise ContinuationError("E blows up near the branch point")
        return powr / denom

    @property
    def fuss_catalan(self) -> bool:
        return self.kind in ("fc_B", "fc_Bpr", "fc_Epr", "fc_zBpr")


# ---------------------------------------------------------------- Pick scans

@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[re0, re1] x [im0, im1]``."""

    re0: float
    re1: float
    im0: float
    im1: float

    def points(self, nx: int, ny: int) -> np.ndarray:
        xs = np.linspace(self.re0, self.re1, nx)
        ys = np.linspace(self.im0, self.im1, ny)
        return xs[None, :] + 1j * ys[:, None]  # rows share Im z

    def describe(self) -> dict:
        return {"type": "rect", "re": [self.re0, self.re1], "im": [self.im0, self.im1]}


@dataclass(frozen=True)
class Arc:
    """Upper half-circle ``radius * exp(i theta)``, ``theta`` in ``(th0, th1)``."""

    radius: float = 1.0
    th0: float = 0.0
    th1: float = math.pi

    def points(self, nx: int, ny: int = 1) -> np.ndarray:
        th = np.linspace(self.th0, self.th1, nx + 2)[1:-1]
        radii = np.linspace(self.radius, self.radius, 1) if ny <= 1 else \
            np.linspace(self.radius * 0.95, self.radius * 1.05, ny)
        return radii[:, None] * np.exp(1j * th[None, :])

    def describe(self) -> dict:
        return {"type": "arc", "radius": self.radius, "theta": [self.th0, self.th1]}


def standard_rect(p: float) -> Rect:
    """``[-3 z_p, 0.8 z_p] x [0.02, 3 z_p]``."""
    zp = z_cut(p)
    return Rect(-3 * zp, 0.8 * zp, 0.02, 3 * zp)


@dataclass
class PickScanReport:
    """Samples of ``Im f`` on an upper-half-plane grid."""

    region: dict
    resolution: tuple
    min_im_value: float
    violations: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    samples_checked: int = 0
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "region": self.region,
            "resolution": list(self.resolution),
            "tol": self.tol,
            "samples_checked": self.samples_checked,
            "min_im_value": self.min_im_value,
            "violations": [{"re": z.real, "im": z.imag, "value": v} for z, v in self.violations],
            "failures": [{"re": z.real, "im": z.imag, "error": e} for z, e in self.failures],
        }


def pick_scan(f: GenFun, rect: Union[Rect, Arc], nx: int = 128, ny: int = 128,
              tol: float = 1e-12) -> PickScanReport:
    """Sample ``f`` on an ``nx x ny`` grid and flag ``Im f(z) < -tol``.

    Violations are listed in row-major order.  Evaluation failures are
    recorded per point and do not abort the scan.  Fuss-Catalan kinds
    continue ``B_p`` from the previous grid point along each row.
    """
    Z = rect.points(nx, ny)
    if np.any(Z.imag <= 0):
        raise ValueError("scan region must lie in the open upper half plane")
    violations, failures = [], []
    min_im = math.inf
    checked = 0
    for row in Z:
        B_prev = None
        for z in row:
            z = complex(z)
            try:
                if f.fuss_catalan:
                    val, B_prev = f._seeded(z, B_prev)
                else:
                    val = f(z)
            except (ContinuationError, ValueError, ZeroDivisionError, OverflowError) as exc:
                failures.append((z, str(exc)))
                B_prev = None
                continue
            checked += 1
            im = val.imag
            min_im = min(min_im, im)
            if im < -tol:
                violations.append((z, im))
    return PickScanReport(rect.describe(), (nx, ny), min_im, violations, failures, checked, tol)


def pick_scan_power(p: float, r: float, rect: Optional[Union[Rect, Arc]] = None,
                    nx: int = 128, ny: int = 128, tol: float = 1e-12) -> PickScanReport:
    """Scan ``z B_p(z)^r``; Pick for ``0 <= r <= p``, not for ``r > p``."""
    if rect is None:
        rect = standard_rect(p)
    return pick_scan(GenFun.fc_zBpr(p, r), rect, nx, ny, tol)


def arc_search(p: float, r: float, radius: float = 1.0, n: int = 2000,
               tol: float = 1e-12) -> PickScanReport:
    """Scan ``z B_p(z)^r`` along ``|z| = radius`` in the upper half plane.

    For ``r > p`` the argument of ``z B_p^r`` exceeds ``pi`` somewhere on the
    arc, which shows up as ``Im < 0``.
    """
    return pick_scan_power(p, r, Arc(radius), n, 1, tol)


# -------------------------------------------------------------- atom masses

def _aitken(v0: float, v1: float, v2: float) -> float:
    d1, d2 = v1 - v0, v2 - v1
    den = d2 - d1
    if den == 0 or not math.isfinite(den):
        return v2
    return v2 - d2 * d2 / den


def _extrapolate(values: list) -> tuple:
    """Aitken on the last three values; error proxy from the last two
    accelerated iterates."""
    if len(values) < 3:
        raise ValueError("need at least three points to extrapolate")
    acc = [_aitken(*values[i:i + 3]) for i in range(len(values) - 2)]
    err = abs(acc[-1] - acc[-2]) if len(acc) > 1 else abs(values[-1] - values[-2])
    return acc[-1], err


def default_right_sequence(tau: float, n: int = 24) -> list:
    return [(1 - 2.0 ** -i) / tau for i in range(1, n + 1)]


def default_left_sequence(n: int = 30) -> list:
    return [-(2.0 ** i) for i in range(n)]


def atom_mass_right(f: GenFun, tau: float, x_sequence: Optional[list] = None) -> tuple:
    """Estimate ``mu{tau} = lim_{x -> 1/tau} (1 - tau x) F(x)``.

    Returns ``(estimate, error_proxy)``.  For a truncated series the
    polynomial cannot be evaluated near ``1/tau``; the limit is instead taken
    on the coefficients, ``mu{tau} = lim c_j tau^-j``, which is the same
    number for moment sequences on ``[0, tau]``.
    """
    tau = float(tau)
    if x_sequence is None:
        x_sequence = default_right_sequence(tau)
    xs = list(map(float, x_sequence))
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x_sequence must increase")
    if xs and xs[-1] >= 1 / tau:
        raise ValueError("x_sequence must stay below 1/tau")
    if f.kind == "truncated_series":
        vals = [float(c) * tau ** -j for j, c in enumerate(f.series.terms)]
        return _extrapolate(vals)
    vals = [((1 - tau * x) * f(x)).real for x in xs]
    return _extrapolate(vals)


def atom_mass_left(f: GenFun, x_sequence: Optional[list] = None) -> tuple:
    """Estimate ``mu{0} = lim_{x -> -inf} F(x)``; returns ``(estimate, error)``.

    Raises :class:`ArithmeticError` when the sampled values grow instead of
    settling.
    """
    if x_sequence is None:
        x_sequence = default_left_sequence()
    xs = list(map(float, x_sequence))
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x_sequence must decrease")
    vals = [f(x).real for x in xs]
    steps = [abs(b - a) for a, b in zip(vals, vals[1:])]
    if len(steps) >= 2 and steps[-1] > steps[-2] > 0:
        raise ArithmeticError("F(x) does not settle as x -> -inf")
    if abs(vals[-1]) > 1e6 * max(1.0, abs(vals[0])):
        raise ArithmeticError("F(x) grows as x -> -inf")
    return _extrapolate(vals)
