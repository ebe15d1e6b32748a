"""Monte Carlo moments of products of Gaussian matrices against Fuss-Catalan targets."""
import argparse
from dataclasses import dataclass

from cmseq.spectra import SpectraConfig, compare_to_fc, sample_product_moments


@dataclass
class Experiment:
    ms: tuple = (1, 2, 3)
    sizes: tuple = (50, 100, 200)
    n_max: int = 4
    trials: int = 20
    seed: int = 20240601
    rel_tol: float = 0.05


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=Experiment.trials)
    ap.add_argument("--seed", type=int, default=Experiment.seed)
    args = ap.parse_args()
    exp = Experiment(trials=args.trials, seed=args.seed)
    print("m,N,n,mean,stderr,target,flagged")
    for m in exp.ms:
        for N in exp.sizes:
            cfg = SpectraConfig(m=m, N=N, n_max=exp.n_max, trials=exp.trials, seed=exp.seed)
            est = sample_product_moments(cfg)
            flagged = {e.n for e in compare_to_fc(est, exp.rel_tol)}
            for e in est:
                print(f"{m},{N},{e.n},{e.mean:.6f},{e.stderr:.6f},{e.target:g},{e.n in flagged}")


if __name__ == "__main__":
    main()
