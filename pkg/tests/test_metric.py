import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmetric.angles import Angle
from dsmetric.errors import IncompatibleDataError, PreconditionError
from dsmetric.kernels import KernelSpec
from dsmetric.metric import (
    AngleSchedule,
    _scaled_cumsum,
    angle_AmT,
    estimate_Am,
    geometric_schedule,
    kernel_KmT,
    kernel_KmT_prefix,
    kernel_KmT_scaled,
    metric_distance,
    pairwise_angles,
    pairwise_gram,
    wedge_oracle_KmT,
)
from dsmetric.trajectories import RotationSpec, TrajectorySet, linear_simulate, rotation_orbit

from helpers import abs_term_sum, random_dataset, spec_for

LIN = KernelSpec("linear")
SZ = KernelSpec("szego")


def scalar(*xs):
    return TrajectorySet(np.array([xs], dtype=float))


def test_kernel_examples():
    D = scalar(1, 2)
    assert kernel_KmT(D, D, 1, 2, LIN) == 5
    assert kernel_KmT(D, scalar(1, 3), 1, 2, LIN) == 7
    E = TrajectorySet(np.array([[[1, 0]], [[0, 1]]], dtype=float))
    assert kernel_KmT(E, E, 2, 1, LIN) == 1


def test_pairings_on_integer_data():
    # brute-force sums over the 3 x 3 time grid, computed by hand-checked enumeration
    X = np.array([[(1, 0), (1, 1), (2, -1)], [(0, 1), (2, 0), (1, 3)]], dtype=float)
    Y = np.array([[(1, 2), (0, 1), (1, 1)], [(3, 0), (1, -1), (0, 2)]], dtype=float)
    D1, D2 = TrajectorySet(X), TrajectorySet(Y)
    assert kernel_KmT(D1, D2, 2, 3, LIN) == pytest.approx(3, abs=1e-12)
    assert kernel_KmT(D1, D2, 2, 3, LIN, pairing="same-time") == pytest.approx(18, abs=1e-12)


def test_szego_periodic_orbit_value():
    # sum_{t<8} 1 / (1 - 0.81 i^t), evaluated in 40-digit arithmetic
    D1 = rotation_orbit(RotationSpec(1.0, Angle.rational(1, 4), 0.9), 8)
    D2 = rotation_orbit(RotationSpec(1.0, Angle(), 0.9), 8)
    assert kernel_KmT(D1, D2, 1, 8, SZ) == pytest.approx(14.046601250122929709, rel=1e-14)
    assert angle_AmT(D1, D2, 1, 8, SZ) == pytest.approx(0.11129348345541214635, rel=1e-13)


def test_oracle_examples():
    rng = np.random.default_rng(3)
    D1 = random_dataset(rng, 2, 3, 2, "linear")
    D2 = random_dataset(rng, 2, 3, 2, "linear")
    # m = 1 is a plain double sum of kernel values over matching sequences
    direct = sum(np.vdot(D2.values[l, t], D1.values[l, t]) for l in range(2) for t in range(3))
    assert wedge_oracle_KmT(D1, D2, 1, 3, LIN) == pytest.approx(direct, rel=1e-13)
    # with a single time step every term is one determinant, so a row swap negates it
    swapped = TrajectorySet(D1.values[::-1].copy())
    assert wedge_oracle_KmT(swapped, D2, 2, 1, LIN) == pytest.approx(-wedge_oracle_KmT(D1, D2, 2, 1, LIN), rel=1e-12)
    with pytest.raises(PreconditionError):
        wedge_oracle_KmT(random_dataset(rng, 2, 7, 1, "linear"), random_dataset(rng, 2, 7, 1, "linear"), 1, 7, LIN)


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(["linear", "gaussian", "szego"]),
    st.sampled_from(["cross-time", "same-time"]),
    st.integers(1, 4),
    st.integers(1, 3),
    st.integers(1, 5),
    st.integers(1, 3),
    st.integers(0, 2**32 - 1),
)
def test_oracle_equivalence(kind, pairing, N, m, T, d, seed):
    m = min(m, N)
    d = 1 if kind == "szego" else d
    rng = np.random.default_rng(seed)
    D1, D2 = random_dataset(rng, N, T, d, kind), random_dataset(rng, N, T, d, kind)
    spec = spec_for(kind)
    k = kernel_KmT(D1, D2, m, T, spec, pairing)
    o = wedge_oracle_KmT(D1, D2, m, T, spec, pairing)
    scale = max(abs(o), abs_term_sum(D1, D2, m, T, spec, pairing))
    assert abs(k - o) <= 1e-10 * scale


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["linear", "gaussian", "szego"]), st.sampled_from(["cross-time", "same-time"]), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_monotone_and_hermitian(kind, pairing, m, seed):
    rng = np.random.default_rng(seed)
    N, T = 3, 12
    d = 1 if kind == "szego" else 2
    D1, D2 = random_dataset(rng, N, T, d, kind), random_dataset(rng, N, T, d, kind)
    spec = spec_for(kind)
    pre = kernel_KmT_prefix(D1, D1, m, T, spec, pairing).real
    # Hadamard-type bound on every prefix value; rank-deficient cases are pure rounding noise
    bound = kernel_KmT(D1, D1, 1, T, spec).real ** m
    tol = 1e-9 * bound
    assert pre.min() >= -tol
    assert np.all(np.diff(pre) >= -tol)
    k12 = kernel_KmT(D1, D2, m, T, spec, pairing)
    k21 = kernel_KmT(D2, D1, m, T, spec, pairing)
    bound2 = kernel_KmT(D2, D2, 1, T, spec).real ** m
    assert abs(k12 - np.conj(k21)) <= 1e-10 * max(bound, bound2)
    k11 = pre[-1]
    k22 = kernel_KmT(D2, D2, m, T, spec, pairing).real
    assert abs(k12) ** 2 <= k11 * k22 * (1 + 1e-9) + 1e-18 * bound * bound2
    A = angle_AmT(D1, D2, m, T, spec, pairing=pairing)
    assert 0 <= A <= 1
    assert A == pytest.approx(angle_AmT(D2, D1, m, T, spec, pairing=pairing), abs=1e-12)


def test_angle_examples():
    rng = np.random.default_rng(0)
    D = random_dataset(rng, 2, 6, 2, "linear")
    assert angle_AmT(D, D, 2, 6, LIN) == pytest.approx(1, abs=1e-14)
    Z = TrajectorySet(np.zeros((2, 4, 2)))
    assert angle_AmT(Z, Z, 1, 4, LIN) == 1
    assert angle_AmT(Z, D, 1, 4, LIN) == 0
    ex = TrajectorySet(np.array([[[1, 0], [2, 0]]], dtype=float))
    ey = TrajectorySet(np.array([[[0, 1], [0, 3]]], dtype=float))
    assert angle_AmT(ex, ey, 1, 2, LIN) == 0


def test_metric_distance():
    assert metric_distance(1) == 0
    assert metric_distance(0) == 1
    assert metric_distance(0.75) == 0.5
    assert metric_distance(1 + 5e-10) == 0
    with pytest.raises(ValueError):
        metric_distance(1.1)
    with pytest.raises(ValueError):
        metric_distance(-0.01)


def test_errors():
    rng = np.random.default_rng(1)
    a = random_dataset(rng, 2, 5, 1, "linear")
    b = random_dataset(rng, 3, 5, 1, "linear")
    with pytest.raises(IncompatibleDataError, match="numbers of sequences"):
        kernel_KmT(a, b, 1, 5, LIN)
    with pytest.raises(IncompatibleDataError, match="exceeds the number"):
        kernel_KmT(a, a, 3, 5, LIN)
    with pytest.raises(IncompatibleDataError, match="time steps"):
        kernel_KmT(a, a, 1, 6, LIN)
    with pytest.raises(ValueError, match="not supported"):
        kernel_KmT(b, b, 4, 5, LIN)
    with pytest.raises(ValueError):
        AngleSchedule((4, 2))
    with pytest.raises(ValueError):
        AngleSchedule((4,), "abel")


def test_scaled_cumsum_matches_high_precision(rng):
    n = 3000
    logs = np.cumsum(rng.uniform(0, 1.0, n))
    mant = rng.normal(size=n) + 1j * rng.normal(size=n)
    got = _scaled_cumsum(mant, logs)
    mp.mp.dps = 30
    for j in (0, 10, 299, 650, 1800, n - 1):
        s = mp.fsum(mp.mpc(complex(mant[i])) * mp.exp(logs[i] - logs[j]) for i in range(j + 1))
        assert abs(complex(s) - got[j]) <= 1e-12 * max(abs(complex(s)), 1e-300) + 1e-14 * abs(mant[: j + 1]).max()


def test_scaled_data_agrees_with_plain():
    A = np.array([[0.95, 0.2], [-0.1, 0.9]])
    C = np.eye(2)
    plain = linear_simulate(A, C, np.eye(2), 300)
    sc = linear_simulate(A, C, np.eye(2), 300, scaled=True)
    for m in (1, 2):
        for pairing in ("cross-time", "same-time"):
            want = kernel_KmT(plain, plain, m, 300, LIN, pairing)
            mant, lg = kernel_KmT_scaled(sc, sc, m, 300, LIN, pairing)
            assert mant * math.exp(lg) == pytest.approx(want, rel=1e-10)
    B = linear_simulate([[0.9, 0.3], [0.0, 0.8]], C, np.eye(2), 300, scaled=True)
    Bp = linear_simulate([[0.9, 0.3], [0.0, 0.8]], C, np.eye(2), 300)
    assert angle_AmT(sc, B, 2, 300, LIN) == pytest.approx(angle_AmT(plain, Bp, 2, 300, LIN), rel=1e-10)
    assert angle_AmT(sc, B, 3 - 1, 40, LIN, pairing="same-time") == pytest.approx(
        angle_AmT(plain, Bp, 2, 40, LIN, pairing="same-time"), rel=1e-10
    )


def test_scaled_rejects_nonlinear_kernels():
    sc = linear_simulate([[0.5]], [[1]], [0.1], 10, scaled=True)
    with pytest.raises(IncompatibleDataError, match="linear kernel"):
        kernel_KmT(sc, sc, 1, 10, KernelSpec("gaussian", 1.0))


def test_growth_pair_closed_form():
    # geometric sums: K12 = ((1+e)^T - 1)/e, K11 = ((1+e)^{2T} - 1)/((1+e)^2 - 1), K22 = T
    T = 10**6
    a = linear_simulate([[1.01]], [[1]], [1], T)
    b = linear_simulate([[1.0]], [[1]], [1], T)
    assert angle_AmT(a, b, 1, T, LIN) == pytest.approx(0.000201, rel=1e-9)
    with pytest.raises(OverflowError):
        kernel_KmT(a, a, 1, T, LIN)


def test_estimate_identical_and_schedule():
    rng = np.random.default_rng(2)
    D = random_dataset(rng, 2, 64, 1, "szego")
    for mode in ("direct", "cesaro"):
        r = estimate_Am(D, D, 1, geometric_schedule(64, 8, mode), SZ)
        assert r.final == pytest.approx(1, abs=1e-12) and r.converged
    s = geometric_schedule(100, 16)
    assert s.T_values == (16, 32, 64, 100)
    assert geometric_schedule(5, 16).T_values == (5,)


def test_cesaro_is_running_mean():
    rng = np.random.default_rng(5)
    D1, D2 = random_dataset(rng, 1, 20, 1, "szego"), random_dataset(rng, 1, 20, 1, "szego")
    r = estimate_Am(D1, D2, 1, AngleSchedule((5, 20), "cesaro"), SZ)
    vals = [angle_AmT(D1, D2, 1, T, SZ) for T in range(1, 21)]
    assert r.trace[0][1] == pytest.approx(np.mean(vals[:5]), rel=1e-12)
    assert r.final == pytest.approx(np.mean(vals), rel=1e-12)


def _triples(rng, kind, n=3):
    d = 1 if kind == "szego" else 2
    return [random_dataset(rng, 2, 6, d, kind) for _ in range(n)]


@pytest.mark.parametrize("kind", ["linear", "gaussian", "szego"])
@pytest.mark.parametrize("m", [1, 2])
def test_pseudo_metric_and_psd(kind, m):
    rng = np.random.default_rng(7 + m)
    spec = spec_for(kind)
    for _ in range(40):
        ds = _triples(rng, kind)
        A = pairwise_angles(ds, m, 6, spec)
        dm = np.sqrt(1 - A)
        assert np.all(np.diag(dm) == 0)
        assert np.array_equal(dm, dm.T)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    assert dm[i, j] <= dm[i, k] + dm[k, j] + 1e-8
        G = pairwise_gram(ds, m, 6, spec)
        ev = np.linalg.eigvalsh(G)
        assert ev.min() >= -1e-8 * ev.max()


def test_pairwise_single_and_deterministic_across_jobs():
    rng = np.random.default_rng(11)
    ds = [random_dataset(rng, 2, 30, 1, "szego") for _ in range(5)]
    one = pairwise_angles(ds[:1], 2, 30, SZ)
    assert one.shape == (1, 1) and one[0, 0] == 1
    a = pairwise_angles(ds, 2, 30, SZ, jobs=1)
    b = pairwise_angles(ds, 2, 30, SZ, jobs=4)
    assert np.array_equal(a, b)
    assert np.array_equal(pairwise_gram(ds, 1, 30, SZ, jobs=1), pairwise_gram(ds, 1, 30, SZ, jobs=3))
