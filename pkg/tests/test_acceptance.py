"""Acceptance criteria 1-10.

Each criterion is a plain function returning ``(ok, detail)``; the pytest
wrappers time it against its runtime budget and record a PASS/FAIL line that
the terminal summary prints.  ``python tests/test_acceptance.py`` prints the
same lines without pytest.
"""
import math
import random
import sys
import time
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from cmseq.canonical import canonical_from_moments, conv_group_power, group_law_check, \
    series_exp_identity
from cmseq.densities import DensitySpec, binom_integral, density_moment, mp_cdf, w2, w_p
from cmseq.fusscatalan import (FcParams, fc_alternating_identity, fc_canonical_sequence,
                               fc_number, fc_sequence)
from cmseq.genfun import GenFun, arc_search, eval_Bp, pick_scan, standard_rect
from cmseq.hausdorff import reconstruct_cdf
from cmseq.seqcore import (DiscreteMeasure, Sequence, check_completely_monotone,
                           check_concave_moments, check_convex_moments,
                           check_dilated_hausdorff, convolve, leading_differences)
from cmseq.spectra import SpectraConfig, compare_to_fc, sample_product_moments

RESULTS = {}


def c1_fuss_catalan_identities():
    cat = [1, 1, 2, 5, 14, 42, 132, 429]
    ok = [fc_number(FcParams(2), n) for n in range(8)] == cat
    ok &= all(fc_number(FcParams(p, p), n) == fc_number(FcParams(p, 1), n + 1)
              for p in (2, 3) for n in range(21))
    ok &= all(l == r for p in (2, 3, 4) for n in range(1, 16)
              for l, r in [fc_alternating_identity(p, n)])
    return ok, "Catalan, shift identity, alternating identity"


def c2_fc_monotonicity():
    cat = fc_sequence(FcParams(2), 30)
    good = check_completely_monotone(cat.scaled_powers(F(1, 4)))
    bad = check_dilated_hausdorff(cat, 3)
    bad_r = check_dilated_hausdorff(fc_sequence(FcParams(2, 3), 30), 4)
    ok = (good.ok and good.max_order == 30 and not bad.ok and bad.witness[2] < 0
          and not bad_r.ok and bad_r.witness[2] < 0)
    return ok, (f"order {good.max_order}; tau=3 witness {bad.witness[:2]}; "
                f"r=3 witness {bad_r.witness[:2]}")


def c3_canonical():
    b = canonical_from_moments(fc_sequence(FcParams(2), 21))
    ok = b.terms == tuple(math.comb(2 * n - 1, n - 1) for n in range(1, 22))
    rep = check_completely_monotone(fc_canonical_sequence(2, 30).scaled_powers(F(1, 4)))
    return ok and rep.max_order == 30 and rep.ok, f"b_n match to n=20; CM order {rep.max_order}"


def _test_points():
    rng = np.random.default_rng(20240601)
    pts = rng.uniform(-3, 3, 50) + 1j * rng.uniform(-3, 3, 50)
    pts[np.abs(pts.imag) < 0.05] += 0.1j
    return pts


def c4_closed_form():
    worst = worst_res = 0.0
    for z in _test_points():
        B = eval_Bp(2, z)
        worst = max(worst, abs(B - (1 - np.sqrt(1 - 4 * z + 0j)) / (2 * z)))
        worst_res = max(worst_res, abs(B - 1 - z * B * B))
    return worst <= 1e-10 and worst_res <= 1e-10, f"max err {worst:.1e}, residual {worst_res:.1e}"


def c5_pick_scans():
    rect = standard_rect(2)
    reps = [pick_scan(f, rect, 128, 128, 1e-12)
            for f in (GenFun.fc_B(2), GenFun.fc_Bpr(2, 2), GenFun.fc_Epr(2, 2))]
    arc = arc_search(2, 5, radius=1.0, n=2000)
    ok = all(r.ok and not r.failures for r in reps) and not arc.ok
    return ok, (f"violations {[len(r.violations) for r in reps]}; "
                f"z B_2^5 arc witnesses {len(arc.violations)}")


def c6_densities():
    mp = DensitySpec("marchenko_pastur")
    e_mp = max(abs(density_moment(mp, n) - float(fc_number(FcParams(2), n))) for n in range(11))
    arc = DensitySpec("wp_inverse", p=2)
    e_arc = max(abs(density_moment(arc, n) - math.comb(2 * n, n)) for n in range(9))
    ts = np.linspace(0, 4, 1002)[1:-1]
    e_w = max(abs(w_p(2, t) - w2(t)) for t in ts)
    e_b = max(abs(binom_integral(r, k) - math.comb(r, k))
              for r in range(1, 13) for k in range(1, r + 1))
    ok = e_mp <= 1e-8 and e_arc <= 1e-8 and e_w <= 1e-10 and e_b <= 1e-8
    return ok, f"MP {e_mp:.1e}, 1-2w_2 {e_arc:.1e}, w_p {e_w:.1e}, binom {e_b:.1e}"


def c7_group_law():
    c = Sequence.of([F(1, 2 ** j) for j in range(26)])
    h = conv_group_power(c, F(1, 2)).terms
    ok = convolve(h, h).terms == c.terms
    cat = fc_sequence(FcParams(2), 20).scaled_powers(F(1, 4))
    pairs = [(F(1, 2), F(1, 2)), (F(1, 3), F(2, 5)), (2, -1), (F(-3, 4), F(7, 3))]
    ok &= all(group_law_check(s, r, q) for s in (c, cat) for r, q in pairs)
    seqs = [[1] * 12, [1, 0, 0, 0, 0], list(cat.terms), list(c.terms),
            [F(1, j + 1) for j in range(15)]]
    defects = [series_exp_identity(s) for s in seqs]
    return ok and all(d == 0 for d in defects), f"exp defects {[str(d) for d in defects]}"


def c8_reconstruction():
    u = reconstruct_cdf([F(1, j + 1) for j in range(201)], 200)
    e_u = u.sup_distance(lambda x: x)
    m = reconstruct_cdf(fc_sequence(FcParams(2), 200), 200, tau=4)
    e_m = m.sup_distance(mp_cdf)
    return e_u <= 0.06 and e_m <= 0.08, f"uniform {e_u:.4f}, Marchenko-Pastur {e_m:.4f}"


def c9_spectra():
    cfg = SpectraConfig(m=1, N=200, n_max=5, trials=20, seed=20240601)
    est = sample_product_moments(cfg)
    again = sample_product_moments(cfg)
    same = [(e.mean, e.stderr) for e in est] == [(e.mean, e.stderr) for e in again]
    flagged = compare_to_fc(est, 0.05)
    means = ", ".join(f"{e.mean:.3f}" for e in est)
    return same and not flagged and len(est) == 5, f"means {means}; bit-identical {same}"


def c10_duality():
    c = Sequence.of([F(random.Random(k).randint(-9, 9), random.Random(-k).randint(1, 9))
                     for k in range(26)])
    ok = leading_differences(leading_differences(c)).terms == c.terms
    rng = random.Random(20240601)
    agree = 0
    for _ in range(20):
        n = rng.randint(1, 4)
        masses = [rng.randint(1, 6) for _ in range(n)]
        nu = DiscreteMeasure(tuple((F(rng.randint(0, 10), 10), F(w, sum(masses)))
                                   for w in masses))
        s = nu.moments(20)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = check_convex_moments(s)
        b = check_concave_moments(leading_differences(s))
        agree += (a.verdict, a.max_order) == (b.verdict, b.max_order)
    # also the nontrivial positive case: density 2t reflects to 2(1 - t)
    lin = [F(2, n + 2) for n in range(21)]
    ok &= check_convex_moments(lin).ok and check_concave_moments(leading_differences(lin)).ok
    return ok and agree == 20, f"involution exact; {agree}/20 agree"


CRITERIA = [
    (1, "exact Fuss-Catalan identities", c1_fuss_catalan_identities, 1.0),
    (2, "Fuss-Catalan monotonicity and witnesses", c2_fc_monotonicity, 5.0),
    (3, "canonical sequence of the Catalan numbers", c3_canonical, None),
    (4, "closed-form oracle for B_2", c4_closed_form, None),
    (5, "Pick scans and arc witness", c5_pick_scans, 30.0),
    (6, "densities and moment integrals", c6_densities, None),
    (7, "convolution group law", c7_group_law, None),
    (8, "distribution reconstruction", c8_reconstruction, 10.0),
    (9, "Monte Carlo spectra", c9_spectra, 60.0),
    (10, "reflection duality", c10_duality, None),
]


def evaluate(number, name, fn, budget):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        ok, detail = False, f"{detail}; {dt:.2f}s exceeds {budget}s"
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} [{dt:6.2f}s] {name}: {detail}"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number,name,fn,budget", CRITERIA, ids=[f"c{n}" for n, *_ in CRITERIA])
def test_criterion(number, name, fn, budget):
    ok, line = evaluate(number, name, fn, budget)
    print(line)
    assert ok, line


if __name__ == "__main__":
    status = [evaluate(*c) for c in CRITERIA]
    for _, line in status:
        print(line)
    sys.exit(0 if all(ok for ok, _ in status) else 1)
