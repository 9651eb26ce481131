"""Exterior-power kernels between trajectory data sets and the angles they define.

For two data sets with N sequences each, horizon T and degree m the kernel is
a sum of m x m kernel determinants over sequence subsets ``s_1 < ... < s_m``
and time tuples.  Two pairings of the time tuples are supported:

``"cross-time"``
    every sequence in a determinant carries its own time index, entry
    ``(a, b) = k(x^{s_a}_{t_a}, y^{s_b}_{t_b})``, summed over all of
    ``{0..T-1}^m``.
``"same-time"``
    entry ``(a, b) = k(x^{s_a}_{t_a}, y^{s_b}_{t_a})``, which is the trace of
    the m-th exterior power of ``sum_t G_t`` with ``G_t[a, b] = k(x^a_t, y^b_t)``.
    For linear systems observed from a basis of initial states this is the
    quantity whose limit equals the product of squared cosines of the
    subspace angles.

Both are evaluated for every prefix horizon ``1..T`` at once.  Cross-time
determinants are expanded over permutations; each permutation factors into
cycle traces ``tr(B^{ab} B^{bc} ...)`` of T x T kernel blocks, so the cost is
O(T^k) for cycles of length k instead of O(T^m) per subset.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, IncompatibleDataError, PreconditionError
from .kernels import KernelSpec, check_points, kernel_values, resolve_bandwidth
from .trajectories import TrajectorySet

log = logging.getLogger(__name__)

PAIRINGS = ("cross-time", "same-time")
MODES = ("direct", "cesaro")
MAX_M = 3


@dataclass(frozen=True)
class AngleSchedule:
    """Horizons at which the angle is recorded and how it is averaged."""

    T_values: Tuple[int, ...]
    mode: str = "direct"
    rel_tol: float = 1e-4
    zero_tol: float = 1e-12

    def __post_init__(self):
        Ts = tuple(int(t) for t in self.T_values)
        if not Ts:
            raise ValueError("schedule needs at least one horizon")
        if Ts[0] < 1 or any(b <= a for a, b in zip(Ts, Ts[1:])):
            raise ValueError(f"schedule horizons must be positive and strictly increasing, got {Ts}")
        object.__setattr__(self, "T_values", Ts)
        mode = self.mode.lower().replace("à", "a")
        if mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "mode", mode)
        if not (self.rel_tol > 0 and self.zero_tol > 0):
            raise ValueError("tolerances must be positive")

    @property
    def T_max(self) -> int:
        return self.T_values[-1]

    def to_dict(self) -> dict:
        return {"T_values": list(self.T_values), "mode": self.mode, "rel_tol": self.rel_tol, "zero_tol": self.zero_tol}


def geometric_schedule(T_max: int, T0: int = 16, mode: str = "direct", **kw) -> AngleSchedule:
    """Horizons ``T0, 2 T0, 4 T0, ...`` capped by and ending at ``T_max``."""
    if T_max < 1 or T0 < 1:
        raise ValueError("T_max and T0 must be positive")
    Ts = []
    t = min(T0, T_max)
    while t < T_max:
        Ts.append(t)
        t *= 2
    Ts.append(T_max)
    return AngleSchedule(tuple(Ts), mode, **kw)


@dataclass(frozen=True)
class AngleResult:
    m: int
    trace: Tuple[Tuple[int, float], ...]
    final: float
    converged: bool
    mode: str = "direct"

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "mode": self.mode,
            "trace": [[T, a] for T, a in self.trace],
            "final": self.final,
            "converged": self.converged,
        }


# ---------------------------------------------------------------------------
# validation


def _check_pair(D1: TrajectorySet, D2: TrajectorySet, m: int, T: int, spec: KernelSpec, pairing: str):
    if pairing not in PAIRINGS:
        raise ValueError(f"unknown pairing {pairing!r}; expected one of {PAIRINGS}")
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if m > MAX_M:
        raise ValueError(f"m = {m} is not supported (cost grows like T^m); use m <= {MAX_M}")
    if D1.n_seq != D2.n_seq:
        raise IncompatibleDataError(f"data sets have different numbers of sequences ({D1.n_seq} vs {D2.n_seq})")
    if m > D1.n_seq:
        raise IncompatibleDataError(f"m = {m} exceeds the number of sequences N = {D1.n_seq}")
    if D1.dim != D2.dim:
        raise IncompatibleDataError(f"observable dimensions differ ({D1.dim} vs {D2.dim})")
    if T < 1:
        raise ValueError("T must be >= 1")
    for D, which in ((D1, "first"), (D2, "second")):
        if D.length < T:
            raise IncompatibleDataError(f"T = {T} exceeds the {D.length} time steps of the {which} data set")
        if D.is_scaled and not spec.homogeneous:
            raise IncompatibleDataError(f"log-scaled data needs the linear kernel, not {spec.kind!r}")
        check_points(spec, D.values[:, :T], f"{which} data set")


def _resolve(spec: KernelSpec, datasets) -> KernelSpec:
    if spec.is_resolved:
        return spec
    return resolve_bandwidth(spec, datasets)


# ---------------------------------------------------------------------------
# prefix engine


def _scaled_cumsum(mant: np.ndarray, logs: np.ndarray) -> np.ndarray:
    """Prefix sums ``S_j = sum_{i<=j} mant_i e^{logs_i}`` returned as ``S_j e^{-logs_j}``.

    ``logs`` must be non-decreasing.  Works along axis 0; extra axes of
    ``mant`` are carried along.  Chunks are chosen so no rescale factor
    overflows.
    """
    n = logs.shape[0]
    out = np.empty_like(mant)
    if n == 0:
        return out
    if logs[-1] - logs[0] <= 300.0:
        ref = logs[-1]
        w = np.exp(logs - ref).reshape((-1,) + (1,) * (mant.ndim - 1))
        c = np.cumsum(mant * w, axis=0)
        return c * np.exp(ref - logs).reshape(w.shape)
    carry = np.zeros_like(mant[0])
    carry_log = logs[0]
    start = 0
    while start < n:
        end = int(np.searchsorted(logs, logs[start] + 300.0, side="right"))
        end = max(end, start + 1)
        ref = logs[end - 1]
        shape = (-1,) + (1,) * (mant.ndim - 1)
        w = np.exp(logs[start:end] - ref).reshape(shape)
        c = np.cumsum(mant[start:end] * w, axis=0) + carry * math.exp(carry_log - ref)
        out[start:end] = c * np.exp(ref - logs[start:end]).reshape(shape)
        carry = c[-1]
        carry_log = ref
        start = end
    return out


@dataclass
class _Prefix:
    """K(tau) for tau = 1..T as ``mant * exp(m * R)``; ``bound`` shares the scale."""

    mant: np.ndarray
    R: np.ndarray
    bound: np.ndarray
    m: int

    def value(self, tau: int) -> complex:
        with np.errstate(over="raise"):
            try:
                return complex(self.mant[tau - 1] * math.exp(self.m * self.R[tau - 1]))
            except (OverflowError, FloatingPointError):
                raise OverflowError(
                    "kernel value exceeds the floating point range; use kernel_KmT_scaled"
                ) from None

    def log_abs(self, tau: int) -> float:
        a = abs(self.mant[tau - 1])
        return (math.log(a) if a > 0 else -math.inf) + self.m * self.R[tau - 1]


class _Engine:
    """Kernel blocks between two data sets, with row weights for log-scaled data."""

    def __init__(self, D1: TrajectorySet, D2: TrajectorySet, T: int, spec: KernelSpec):
        self.X = D1.values[:, :T]
        self.Y = D2.values[:, :T]
        self.T = T
        self.spec = spec
        s1 = np.zeros(T) if D1.log_scale is None else D1.log_scale[:T]
        s2 = np.zeros(T) if D2.log_scale is None else D2.log_scale[:T]
        self.scaled = D1.is_scaled or D2.is_scaled
        self.sigma = s1 + s2
        self.R = np.maximum.accumulate(self.sigma)
        self._blocks: Dict[Tuple[int, int], np.ndarray] = {}

    def diag(self, a: int, b: int) -> np.ndarray:
        # same-time values k(x^a_t, y^b_t), unweighted
        return kernel_values(self.spec, self.X[a], self.Y[b])

    def block(self, a: int, b: int) -> np.ndarray:
        key = (a, b)
        B = self._blocks.get(key)
        if B is None:
            B = kernel_values(self.spec, self.X[a][:, None, :], self.Y[b][None, :, :])
            self._blocks[key] = B
        return B

    def drop_blocks(self):
        self._blocks.clear()

    # one-cycles: sum_{t<tau} e^{sigma_t} k(x^a_t, y^a_t), scale e^{R_tau}
    def one_cycle(self, a: int) -> np.ndarray:
        d = self.diag(a, a)
        if not self.scaled:
            return np.cumsum(d)
        return _scaled_cumsum(d * np.exp(self.sigma - self.R), self.R)

    def two_cycle(self, a: int, b: int) -> np.ndarray:
        """Prefix traces of ``B^{ab} B^{ba}``, scale ``e^{2 R_tau}``."""
        H = self.block(a, b) * self.block(b, a).T
        if self.scaled:
            # entry (t, u) carries e^{sigma_t + sigma_u}; refer it to R at max(t, u)
            idx = np.arange(self.T)
            jmax = np.maximum(idx[:, None], idx[None, :])
            H = H * np.exp(self.sigma[:, None] + self.sigma[None, :] - 2 * self.R[jmax])
        inc = np.tril(H).sum(axis=1) + np.triu(H, 1).sum(axis=0)
        if not self.scaled:
            return np.cumsum(inc)
        return _scaled_cumsum(inc, 2 * self.R)

    def three_cycle(self, a: int, b: int, c: int) -> np.ndarray:
        """Prefix traces of ``B^{ab} B^{bc} B^{ca}``, scale ``e^{3 R_tau}``."""
        B1, B2, B3 = self.block(a, b), self.block(b, c), self.block(c, a)
        T = self.T
        if self.scaled:
            inc = np.empty(T, dtype=complex)
            for j in range(T):
                w = np.exp(self.sigma[: j + 1] - self.R[j])
                b1, b2, b3 = B1[: j + 1, : j + 1] * w[:, None], B2[: j + 1, : j + 1] * w[:, None], B3[: j + 1, : j + 1] * w[:, None]
                inc[j] = _three_inc(b1, b2, b3, j)
            return _scaled_cumsum(inc, 3 * self.R)
        inc = np.empty(T, dtype=complex)
        for j in range(T):
            inc[j] = _three_inc(B1[: j + 1, : j + 1], B2[: j + 1, : j + 1], B3[: j + 1, : j + 1], j)
        return np.cumsum(inc)

    def same_time_sums(self, idx: Sequence[int]) -> np.ndarray:
        """Prefix sums of ``G_t`` restricted to ``idx``, shape (T, m, m), scale ``e^{R_tau}``."""
        X = self.X[list(idx)]
        Y = self.Y[list(idx)]
        G = kernel_values(self.spec, X[:, None, :, :], Y[None, :, :, :])  # (m, m, T)
        G = np.moveaxis(G, -1, 0)
        if not self.scaled:
            return np.cumsum(G, axis=0)
        return _scaled_cumsum(G * np.exp(self.sigma - self.R)[:, None, None], self.R)


def _three_inc(b1, b2, b3, j):
    # terms of sum_{t,u,v<=j} b1[t,u] b2[u,v] b3[v,t] with max(t,u,v) = j
    r = b1[j] @ b2 @ b3[:, j]
    if j:
        r += np.sum(b1[:j, j] * (b2[j] @ b3[:, :j]))
        r += np.sum(b3[j, :j] * (b1[:j, :j] @ b2[:j, j]))
    return r


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _cycles(p: Sequence[int]) -> List[Tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def _prefix_kernel(D1, D2, m: int, T: int, spec: KernelSpec, pairing: str, bound: bool = False) -> _Prefix:
    eng = _Engine(D1, D2, T, spec)
    N = D1.n_seq
    subsets = list(itertools.combinations(range(N), m))
    ones = None
    if bound or m == 1 or pairing == "cross-time":
        ones = [eng.one_cycle(a) for a in range(N)]
    total = np.zeros(T, dtype=complex)
    if m == 1:
        for a in range(N):
            total += ones[a]
    elif pairing == "same-time":
        for S in subsets:
            total += np.linalg.det(eng.same_time_sums(S))
    else:
        cache: Dict[Tuple[int, ...], np.ndarray] = {}
        perms = list(itertools.permutations(range(m)))
        for S in subsets:
            for p in perms:
                term = np.full(T, _perm_sign(p), dtype=complex)
                for cyc in _cycles(p):
                    seqs = tuple(S[i] for i in cyc)
                    # rotate so the smallest index leads; traces are cyclic
                    k = seqs.index(min(seqs))
                    key = seqs[k:] + seqs[:k]
                    if key not in cache:
                        if len(key) == 1:
                            cache[key] = ones[key[0]]
                        elif len(key) == 2:
                            cache[key] = eng.two_cycle(*key)
                        else:
                            cache[key] = eng.three_cycle(*key)
                    term = term * cache[key]
                total += term
            if m == 2:
                eng.drop_blocks()
    hb = np.zeros(T)
    if bound:
        for S in subsets:
            prod = np.ones(T)
            for a in S:
                prod = prod * ones[a].real
            hb += prod
    return _Prefix(total, eng.R, hb, m)


# ---------------------------------------------------------------------------
# public kernel and angle API


def kernel_KmT(D1, D2, m: int, T: int, spec: KernelSpec, pairing: str = "cross-time") -> complex:
    """Degree-m kernel between two data sets over the horizon ``0..T-1``."""
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, T, spec, pairing)
    return _prefix_kernel(D1, D2, m, T, spec, pairing).value(T)


def kernel_KmT_scaled(D1, D2, m: int, T: int, spec: KernelSpec, pairing: str = "cross-time") -> Tuple[complex, float]:
    """Like :func:`kernel_KmT` but returns ``(mantissa, log_scale)`` with value ``mantissa * e^log_scale``."""
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, T, spec, pairing)
    p = _prefix_kernel(D1, D2, m, T, spec, pairing)
    return complex(p.mant[T - 1]), float(m * p.R[T - 1])


def kernel_KmT_prefix(D1, D2, m: int, T: int, spec: KernelSpec, pairing: str = "cross-time") -> np.ndarray:
    """Kernel values for every horizon ``1..T`` (plain data only)."""
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, T, spec, pairing)
    p = _prefix_kernel(D1, D2, m, T, spec, pairing)
    if D1.is_scaled or D2.is_scaled:
        raise OverflowError("prefix values of log-scaled data are not representable; use kernel_KmT_scaled")
    return p.mant.copy()


def wedge_oracle_KmT(D1, D2, m: int, T: int, spec: KernelSpec, pairing: str = "cross-time") -> complex:
    """Brute-force kernel: every determinant expanded over all m! permutations.

    Only for small inputs (m <= 3, T <= 6, N <= 4); used to check
    :func:`kernel_KmT`.
    """
    if m > 3 or T > 6 or D1.n_seq > 4:
        raise PreconditionError(f"oracle is limited to m <= 3, T <= 6, N <= 4 (got m={m}, T={T}, N={D1.n_seq})")
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, T, spec, pairing)
    from .kernels import eval_kernel

    X, Y = D1.dense(), D2.dense()
    perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(m))]
    total = 0j
    for ts in itertools.product(range(T), repeat=m):
        for S in itertools.combinations(range(D1.n_seq), m):
            for p, sgn in perms:
                prod = complex(sgn)
                for a in range(m):
                    b = p[a]
                    u = ts[b] if pairing == "cross-time" else ts[a]
                    prod *= eval_kernel(spec, X[S[a], ts[a]], Y[S[b], u])
                total += prod
    return total


def _angle_from_prefix(p12: _Prefix, p11: _Prefix, p22: _Prefix, tau: int, zero_tol: float) -> float:
    k11 = p11.mant[tau - 1].real
    k22 = p22.mant[tau - 1].real
    # zero test against the Hadamard bound of the same diagonal term
    z1 = k11 <= zero_tol * p11.bound[tau - 1]
    z2 = k22 <= zero_tol * p22.bound[tau - 1]
    if z1 and z2:
        return 1.0
    if z1 or z2:
        return 0.0
    k12 = abs(p12.mant[tau - 1])
    if k12 == 0.0:
        return 0.0
    m = p12.m
    logA = (
        2 * math.log(k12)
        - math.log(k11)
        - math.log(k22)
        + m * (2 * p12.R[tau - 1] - p11.R[tau - 1] - p22.R[tau - 1])
    )
    A = math.exp(min(logA, 1.0))
    if A > 1.0 + 1e-9:
        raise ArithmeticError(f"angle value {A!r} exceeds 1 beyond rounding; kernel is not positive definite here")
    return min(max(A, 0.0), 1.0)


def _angle_trace(D1, D2, m, T, spec, pairing, zero_tol, self1=None, self2=None):
    """Angle at every horizon 1..T.  ``self1``/``self2`` are cached diagonal prefixes."""
    p12 = _prefix_kernel(D1, D2, m, T, spec, pairing)
    p11 = self1 if self1 is not None else _prefix_kernel(D1, D1, m, T, spec, pairing, bound=True)
    p22 = self2 if self2 is not None else _prefix_kernel(D2, D2, m, T, spec, pairing, bound=True)
    return p12, p11, p22


def angle_AmT(D1, D2, m: int, T: int, spec: KernelSpec, zero_tol: float = 1e-12, pairing: str = "cross-time") -> float:
    """Normalised angle ``|K12|^2 / (K11 K22)`` at horizon T, in [0, 1]."""
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, T, spec, pairing)
    p12, p11, p22 = _angle_trace(D1, D2, m, T, spec, pairing, zero_tol)
    return _angle_from_prefix(p12, p11, p22, T, zero_tol)


def _estimate(p12, p11, p22, m, schedule: AngleSchedule) -> AngleResult:
    Ts = schedule.T_values
    if schedule.mode == "direct":
        vals = [_angle_from_prefix(p12, p11, p22, T, schedule.zero_tol) for T in Ts]
    else:
        all_A = np.array([_angle_from_prefix(p12, p11, p22, T, schedule.zero_tol) for T in range(1, schedule.T_max + 1)])
        means = np.cumsum(all_A) / np.arange(1, schedule.T_max + 1)
        vals = [float(min(max(means[T - 1], 0.0), 1.0)) for T in Ts]
    trace = tuple((T, float(v)) for T, v in zip(Ts, vals))
    if len(vals) >= 2:
        prev = vals[-2]
    elif Ts[0] > 1:
        # a single horizon is compared with the one just before it
        T = Ts[0] - 1
        if schedule.mode == "direct":
            prev = _angle_from_prefix(p12, p11, p22, T, schedule.zero_tol)
        else:
            prev = float(means[T - 1])
    else:
        prev = math.nan
    converged = abs(vals[-1] - prev) < schedule.rel_tol
    return AngleResult(m, trace, float(vals[-1]), bool(converged), schedule.mode)


def estimate_Am(D1, D2, m: int, schedule: AngleSchedule, spec: KernelSpec, pairing: str = "cross-time") -> AngleResult:
    """Angle over a schedule of horizons, with a convergence verdict.

    Direct mode records the angle itself; Cesàro mode records running means
    of the angle over every horizon ``1..T``.  Converged means the last two
    recorded values differ by less than ``rel_tol``.
    """
    spec = _resolve(spec, (D1, D2))
    _check_pair(D1, D2, m, schedule.T_max, spec, pairing)
    p12, p11, p22 = _angle_trace(D1, D2, m, schedule.T_max, spec, pairing, schedule.zero_tol)
    return _estimate(p12, p11, p22, m, schedule)


def metric_distance(A_value: float) -> float:
    """Pseudo-metric ``sqrt(1 - A)``."""
    A = float(A_value)
    if not (-1e-9 <= A <= 1 + 1e-9) or math.isnan(A):
        raise ValueError(f"angle value must lie in [0, 1], got {A!r}")
    return math.sqrt(1.0 - min(max(A, 0.0), 1.0))


# ---------------------------------------------------------------------------
# collections


def _check_collection(datasets, m, T, spec, pairing):
    if not datasets:
        raise ValueError("need at least one data set")
    for i, D in enumerate(datasets):
        try:
            _check_pair(datasets[0], D, m, T, spec, pairing)
        except (IncompatibleDataError, ValueError) as exc:
            raise type(exc)(f"data set {i} vs data set 0: {exc}") from None


def _map_pairs(fn, pairs, jobs: int):
    if jobs is None or jobs <= 1 or len(pairs) <= 1:
        return [fn(p) for p in pairs]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, pairs))


def pairwise_gram(datasets: Sequence[TrajectorySet], m: int, T: int, spec: KernelSpec, pairing: str = "cross-time", jobs: int = 1) -> np.ndarray:
    """Matrix of kernel values between all data sets (upper triangle mirrored)."""
    datasets = list(datasets)
    spec = _resolve(spec, datasets)
    _check_collection(datasets, m, T, spec, pairing)
    n = len(datasets)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]

    def one(ij):
        i, j = ij
        return _prefix_kernel(datasets[i], datasets[j], m, T, spec, pairing).value(T)

    vals = _map_pairs(one, pairs, jobs)
    G = np.zeros((n, n), dtype=complex)
    for (i, j), v in zip(pairs, vals):
        G[i, j] = v
        G[j, i] = np.conj(v)
    for i in range(n):
        G[i, i] = G[i, i].real
    return G


@dataclass
class PairwiseResult:
    """Angles and convergence results for all pairs of a collection."""

    angles: np.ndarray
    results: Dict[Tuple[int, int], AngleResult] = field(default_factory=dict)
    spec: Optional[KernelSpec] = None


def pairwise_estimates(
    datasets: Sequence[TrajectorySet],
    m: int,
    schedule: AngleSchedule,
    spec: KernelSpec,
    pairing: str = "cross-time",
    jobs: int = 1,
) -> PairwiseResult:
    """:func:`estimate_Am` for every pair ``i < j``; the diagonal is exactly 1."""
    datasets = list(datasets)
    spec = _resolve(spec, datasets)
    _check_collection(datasets, m, schedule.T_max, spec, pairing)
    n = len(datasets)
    T = schedule.T_max
    selfs = _map_pairs(lambda i: _prefix_kernel(datasets[i], datasets[i], m, T, spec, pairing, bound=True), list(range(n)), jobs)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def one(ij):
        i, j = ij
        p12 = _prefix_kernel(datasets[i], datasets[j], m, T, spec, pairing)
        return _estimate(p12, selfs[i], selfs[j], m, schedule)

    res = _map_pairs(one, pairs, jobs)
    A = np.eye(n)
    out = {}
    for (i, j), r in zip(pairs, res):
        A[i, j] = A[j, i] = r.final
        out[(i, j)] = r
    return PairwiseResult(A, out, spec)


def pairwise_angles(
    datasets: Sequence[TrajectorySet],
    m: int,
    T: int,
    spec: KernelSpec,
    zero_tol: float = 1e-12,
    pairing: str = "cross-time",
    jobs: int = 1,
) -> np.ndarray:
    """Angle matrix at horizon T; symmetric with unit diagonal."""
    sched = AngleSchedule((T,), "direct", zero_tol=zero_tol)
    return pairwise_estimates(datasets, m, sched, spec, pairing, jobs).angles
