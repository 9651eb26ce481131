import itertools

import numpy as np

from dsmetric.kernels import KernelSpec, kernel_values
from dsmetric.trajectories import TrajectorySet


def random_dataset(rng, N, T, d, kind, scale=1.0):
    z = rng.normal(size=(N, T, d)) + 1j * rng.normal(size=(N, T, d))
    if kind == "szego":
        z = 0.95 * z / (1 + np.abs(z))
    return TrajectorySet(scale * z)


def spec_for(kind):
    return KernelSpec(kind, 0.9 if kind == "gaussian" else None)


def abs_term_sum(D1, D2, m, T, spec, pairing="cross-time"):
    """Sum of |products| over every permutation term: the natural scale for relative errors."""
    X, Y = D1.values, D2.values
    total = 0.0
    for ts in itertools.product(range(T), repeat=m):
        for S in itertools.combinations(range(D1.n_seq), m):
            for p in itertools.permutations(range(m)):
                prod = 1.0
                for a in range(m):
                    u = ts[p[a]] if pairing == "cross-time" else ts[a]
                    prod *= abs(kernel_values(spec, X[S[a], ts[a]], Y[S[p[a]], u]))
                total += prod
    return total
