"""Trajectory-based degree-q angles against subspace-angle closed forms on random stable systems."""

import argparse
from dataclasses import dataclass

import numpy as np

from dsmetric.linear import LinearSystem, angle_vs_closed_form_check


@dataclass
class Config:
    pairs: int = 20
    max_q: int = 3
    max_rho: float = 0.9
    r: int = 1
    T: int = 2000
    seed: int = 0


def random_system(rng, q, r, max_rho):
    A = rng.normal(size=(q, q))
    A *= rng.uniform(0.2, max_rho) / max(abs(np.linalg.eigvals(A)))
    return LinearSystem(A, rng.normal(size=(r, q)))


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    gaps = []
    print(f"{'q':>2} {'estimate':>12} {'prod cos^2':>12} {'gap':>9}")
    for _ in range(cfg.pairs):
        q = int(rng.integers(1, cfg.max_q + 1))
        rep = angle_vs_closed_form_check(random_system(rng, q, cfg.r, cfg.max_rho), random_system(rng, q, cfg.r, cfg.max_rho), cfg.T)
        gaps.append(rep.gap)
        print(f"{q:>2} {rep.estimate:>12.8f} {rep.closed_form:>12.8f} {rep.gap:>9.1e}")
    print(f"max gap {max(gaps):.2e}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    run(Config(**vars(p.parse_args(argv))))


if __name__ == "__main__":
    main()
