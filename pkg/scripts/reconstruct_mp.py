"""Recover the Marchenko-Pastur distribution from Catalan moments.

Prints the sup distance to the quadrature CDF for several orders and
optionally writes the highest-order estimate as CSV.
"""
import argparse
from dataclasses import dataclass

from cmseq.densities import mp_cdf
from cmseq.fusscatalan import FcParams, fc_sequence
from cmseq.hausdorff import reconstruct_cdf


@dataclass
class ReconstructionConfig:
    orders: tuple = (25, 50, 100, 200, 400)
    csv_path: str = ""


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", default="", help="write the last estimate here")
    cfg = ReconstructionConfig(csv_path=ap.parse_args().csv)
    moments = fc_sequence(FcParams(2), max(cfg.orders))
    est = None
    print("order,sup_error")
    for n in cfg.orders:
        est = reconstruct_cdf(moments, n, tau=4)
        print(f"{n},{est.sup_distance(mp_cdf):.5f}")
    if cfg.csv_path:
        with open(cfg.csv_path, "w") as fh:
            fh.write(est.to_csv())


if __name__ == "__main__":
    main()
