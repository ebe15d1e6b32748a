"""Default numerical settings shared by the CLI and scripts.

Every value here can be overridden by a command-line flag.  The only
environment hook is ``CMSEQ_PRECISION`` (``exact`` or ``float``), which sets
the default scalar kind for parsed sequences.
"""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Defaults:
    precision: str = "exact"
    float_tol: float | None = None       # None -> 1e-12 * max(1, max|c_j|)
    tail_tol: float = 1e-12
    newton_tol: float = 1e-13
    pick_tol: float = 1e-12
    scan_nx: int = 128
    scan_ny: int = 128
    arc_points: int = 2000
    n_quad: int = 512
    wp_tol: float = 1e-14
    reconstruct_order: int = 200
    spectra_m: int = 1
    spectra_N: int = 200
    spectra_n_max: int = 5
    spectra_trials: int = 20
    spectra_seed: int = 20240601
    spectra_rel_tol: float = 0.05


def load_defaults() -> Defaults:
    mode = os.environ.get("CMSEQ_PRECISION", "exact").strip().lower()
    if mode not in ("exact", "float"):
        raise ValueError(f"CMSEQ_PRECISION must be 'exact' or 'float', got {mode!r}")
    return Defaults(precision=mode)
