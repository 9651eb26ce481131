"""Angles vs trace-kernel cosines for x -> (1+eps) x, x -> x and x -> (1-eps) x.

The angle collapses towards 0 as T grows while the trace-kernel cosine stays
close to 1.
"""

import argparse
import itertools
from dataclasses import dataclass, field

from dsmetric import KernelSpec, estimate_Am, geometric_schedule, linear_simulate
from dsmetric.linear import LinearSystem, binet_cauchy_cosine


@dataclass
class Config:
    eps: float = 0.01
    horizons: list = field(default_factory=lambda: [10**3, 10**4, 10**5, 10**6])
    lam: float = 1.0
    bc_horizon: int = 2000


def run(cfg: Config):
    coeffs = (1 + cfg.eps, 1.0, 1 - cfg.eps)
    T_max = max(cfg.horizons)
    sets = [linear_simulate([[a]], [[1.0]], [1.0], T_max) for a in coeffs]
    print(f"{'pair':>12} {'T':>8} {'A1':>12} {'trace cos':>10}")
    for i, j in itertools.combinations(range(3), 2):
        cos = binet_cauchy_cosine(
            LinearSystem([[coeffs[i]]], [[1.0]]), LinearSystem([[coeffs[j]]], [[1.0]]), [1.0], [1.0], cfg.lam, cfg.bc_horizon
        )
        for T in cfg.horizons:
            r = estimate_Am(sets[i], sets[j], 1, geometric_schedule(T, min(1000, T)), KernelSpec("linear"))
            print(f"{coeffs[i]:>5}/{coeffs[j]:<6} {T:>8} {r.final:>12.3e} {cos:>10.5f}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", type=float, default=Config.eps)
    p.add_argument("--horizons", nargs="+", type=int, default=Config().horizons)
    p.add_argument("--lam", type=float, default=Config.lam)
    a = p.parse_args(argv)
    run(Config(a.eps, a.horizons, a.lam))


if __name__ == "__main__":
    main()
