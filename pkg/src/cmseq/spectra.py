"""Monte Carlo moments of products of complex Gaussian matrices.

For ``m`` independent ``N x N`` matrices with i.i.d. standard complex
Gaussian entries, ``W = P P^* / N^m`` with ``P = X_1 ... X_m`` has spectral
moments ``(1/N) tr W^n`` that converge to ``A_n(m+1, 1)``.  Traces of matrix
powers are used directly; no eigen- or singular-value decomposition.

Random numbers come from Philox4x64-10 (Salmon et al., Random123 constants
``0xD2E7470EE14C6C93``, ``0xCA5A826395121157`` and Weyl keys
``0x9E3779B97F4A7C15``, ``0xBB67AE8584CAA73B``) as shipped in numpy.  Trial
``i`` uses key ``(seed, i)`` and counter 0, so every trial is an
independent, reproducible stream regardless of execution order.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .fusscatalan import FcParams, fc_number

MASK64 = (1 << 64) - 1
MAX_MOMENT = 12


@dataclass(frozen=True)
class SpectraConfig:
    m: int = 1
    N: int = 200
    n_max: int = 5
    trials: int = 20
    seed: int = 20240601

    def __post_init__(self):
        if self.m < 1 or self.N < 1 or self.n_max < 1 or self.trials < 0:
            raise ValueError("m, N, n_max must be positive and trials nonnegative")
        if self.n_max > MAX_MOMENT:
            raise ValueError(f"n_max <= {MAX_MOMENT}: higher moments have unusable variance")


@dataclass(frozen=True)
class MomentEstimate:
    n: int
    mean: float
    stderr: float
    target: float


def trial_stream(seed: int, trial: int) -> np.random.Philox:
    return np.random.Philox(key=np.array([seed & MASK64, trial & MASK64], dtype=np.uint64),
                            counter=0)


def complex_gaussians(bitgen: np.random.Philox, size: int) -> np.ndarray:
    """Standard complex normals (``E|X|^2 = 1``) by Box-Muller.

    Two 53-bit uniforms per sample: ``u1`` in ``(0, 1]``, ``u2`` in ``[0, 1)``.
    """
    raw = bitgen.random_raw(2 * size)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    u1 = 1.0 - u[0::2]
    u2 = u[1::2]
    radius = np.sqrt(-np.log(u1))  # variance 1/2 per real component
    return radius * np.exp(2j * np.pi * u2)


def trace_moments(cfg: SpectraConfig, trial: int) -> np.ndarray:
    """``(1/N) tr W^n`` for ``n = 1..n_max`` in one trial."""
    N, m = cfg.N, cfg.m
    gen = trial_stream(cfg.seed, trial)
    P = complex_gaussians(gen, N * N).reshape(N, N)
    for _ in range(m - 1):
        P = P @ complex_gaussians(gen, N * N).reshape(N, N)
    W = (P @ P.conj().T) / float(N) ** m
    W = 0.5 * (W + W.conj().T)
    out = np.empty(cfg.n_max)
    Wk = W
    for n in range(1, cfg.n_max + 1):
        tr = np.trace(Wk) / N
        if abs(tr.imag) > 1e-10 * max(1.0, abs(tr.real)):
            raise ArithmeticError(f"trace of W^{n} has imaginary part {tr.imag}")
        out[n - 1] = tr.real
        if n < cfg.n_max:
            Wk = Wk @ W
    return out


def sample_product_moments(cfg: SpectraConfig) -> list:
    """Across-trial mean and standard error of each trace moment."""
    if cfg.trials == 0:
        return []
    samples = np.array([trace_moments(cfg, i) for i in range(cfg.trials)])
    mean = samples.mean(axis=0)
    if cfg.trials > 1:
        stderr = samples.std(axis=0, ddof=1) / math.sqrt(cfg.trials)
    else:
        stderr = np.zeros_like(mean)
    params = FcParams(cfg.m + 1, 1)
    return [MomentEstimate(n, float(mean[n - 1]), float(stderr[n - 1]),
                           float(fc_number(params, n)))
            for n in range(1, cfg.n_max + 1)]


def compare_to_fc(estimates, rel_tol: float = 0.05) -> list:
    """Estimates with ``|mean - target| > max(rel_tol * target, 3 stderr)``."""
    flagged = []
    for e in estimates:
        if abs(e.mean - e.target) > max(rel_tol * abs(e.target), 3 * e.stderr):
            flagged.append(e)
    return flagged


def to_json(cfg: SpectraConfig, estimates) -> str:
    return json.dumps({
        "m": cfg.m, "N": cfg.N, "trials": cfg.trials, "seed": cfg.seed,
        "moments": [asdict(e) for e in estimates],
    })


def from_json(text: str) -> tuple:
    d = json.loads(text)
    cfg = SpectraConfig(m=d["m"], N=d["N"], trials=d["trials"], seed=d["seed"],
                        n_max=max(1, len(d["moments"])))
    return cfg, [MomentEstimate(**e) for e in d["moments"]]
