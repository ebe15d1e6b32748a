"""Pick-property survey of z B_p(z)^r over a grid of (p, r).

For r <= p the scan should be clean; for r > p an arc search on |z| = 1
finds points where Im(z B_p^r) < 0.  Writes one JSON line per pair.
"""
import argparse
import json
from dataclasses import asdict, dataclass, field

from cmseq.genfun import arc_search, pick_scan_power


@dataclass
class SurveyConfig:
    ps: list = field(default_factory=lambda: [1.5, 2.0, 3.0])
    rs: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 3.0, 5.0])
    nx: int = 96
    ny: int = 96
    arc_points: int = 2000
    tol: float = 1e-12


def run(cfg: SurveyConfig):
    for p in cfg.ps:
        for r in cfg.rs:
            rect = pick_scan_power(p, r, nx=cfg.nx, ny=cfg.ny, tol=cfg.tol)
            arc = arc_search(p, r, radius=1.0, n=cfg.arc_points, tol=cfg.tol)
            yield {"p": p, "r": r, "expected_pick": r <= p,
                   "rect_violations": len(rect.violations), "arc_violations": len(arc.violations),
                   "min_im": min(rect.min_im_value, arc.min_im_value)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, default=SurveyConfig.nx)
    ap.add_argument("--ny", type=int, default=SurveyConfig.ny)
    args = ap.parse_args()
    cfg = SurveyConfig(nx=args.nx, ny=args.ny)
    print(json.dumps({"config": asdict(cfg)}))
    for row in run(cfg):
        print(json.dumps(row))


if __name__ == "__main__":
    main()
