"""Canonical sequences and square roots in the convolution group for Fuss-Catalan moments."""
from dataclasses import dataclass
from fractions import Fraction

from cmseq.canonical import canonical_from_moments, conv_group_power
from cmseq.fusscatalan import FcParams, fc_sequence, tau
from cmseq.seqcore import check_completely_monotone


@dataclass
class TableConfig:
    ps: tuple = (2, 3, 4)
    N: int = 12


def main(cfg: TableConfig = TableConfig()):
    for p in cfg.ps:
        c = fc_sequence(FcParams(p), cfg.N)
        b = canonical_from_moments(c)
        root = conv_group_power(c.scaled_powers(1 / tau(p)), Fraction(1, 2)).terms
        rep = check_completely_monotone(root)
        print(f"p={p}: b = {[str(x) for x in b.terms]}")
        print(f"      square root of scaled moments: {rep.verdict} {rep.max_order}")


if __name__ == "__main__":
    main()
