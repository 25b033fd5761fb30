"""Compare annealing success through the Chimera embedding and on the logical model."""
import argparse

import numpy as np

from qlinsolve.anneal import Annealer, SamplerConfig
from qlinsolve.benchmarks import WELL_CONDITIONED_2X2
from qlinsolve.chimera import BrokenChainError
from qlinsolve.fixtures import get_fixture
from qlinsolve.linear_system import build_linear_qubo
from qlinsolve.qubo_core import brute_force_solve


def failures(model, make, seeds):
    target = brute_force_solve(model).ground_state
    bad = 0
    for s in range(seeds):
        try:
            bad += not np.array_equal(make(s)(model).state, target)
        except BrokenChainError:
            bad += 1
    return bad


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--reads", type=int, default=100)
    ap.add_argument("--alpha-factor", type=float, default=1.0, help="chain strength as a multiple of max|coefficient|")
    args = ap.parse_args()
    print(f"fixture,alpha,embedded_failures,logical_failures (of {args.seeds})")
    for name in WELL_CONDITIONED_2X2:
        model = build_linear_qubo(get_fixture(name).problem())
        alpha = args.alpha_factor * model.max_abs_coefficient()
        emb = failures(model, lambda s: Annealer(SamplerConfig(reads=args.reads, seed=s), alpha=alpha), args.seeds)
        log = failures(model, lambda s: Annealer(SamplerConfig(reads=args.reads, seed=s), embed=False), args.seeds)
        print(f"{name},{alpha:.4g},{emb},{log}")
