"""Positive-definite kernels on observables.

Observables are finite vectors of complex numbers.  Three kernels are
available:

* ``linear``   -- ``k(x, y) = sum_i x_i * conj(y_i)``
* ``gaussian`` -- ``k(x, y) = exp(-||x - y||^2 / (2 h^2))``
* ``szego``    -- ``k(z, w) = 1 / (1 - z * conj(w))`` on the open unit disk

All values are returned as complex numbers, even when they happen to be real,
so that every downstream computation uses one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegenerateBandwidthError, KernelDomainError

KINDS = ("linear", "gaussian", "szego")


@dataclass(frozen=True)
class KernelSpec:
    """A kernel choice.

    ``bandwidth`` is only meaningful for the Gaussian kernel.  ``None`` means
    "not resolved yet"; see :func:`resolve_bandwidth`.
    """

    kind: str = "linear"
    bandwidth: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {KINDS}")
        if self.bandwidth is not None:
            if self.kind != "gaussian":
                raise ValueError(f"bandwidth only applies to the gaussian kernel, not {self.kind!r}")
            if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
                raise ValueError(f"gaussian bandwidth must be a positive finite number, got {self.bandwidth!r}")

    @property
    def is_resolved(self) -> bool:
        return self.kind != "gaussian" or self.bandwidth is not None

    @property
    def homogeneous(self) -> bool:
        """True when ``k(a x, b y) = a * conj(b) * k(x, y)`` for real a, b > 0."""
        return self.kind == "linear"

    def with_bandwidth(self, bandwidth: float) -> "KernelSpec":
        return KernelSpec(self.kind, float(bandwidth))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "bandwidth": self.bandwidth}


def as_observable(x) -> np.ndarray:
    """Coerce ``x`` to a non-empty, finite, 1-d complex array."""
    arr = np.atleast_1d(np.asarray(x, dtype=complex))
    if arr.ndim != 1 or arr.size == 0:
        raise KernelDomainError(f"an observable must be a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise KernelDomainError("observable contains NaN or infinite entries")
    return arr


def check_points(spec: KernelSpec, points: np.ndarray, what: str = "points") -> None:
    """Validate an array of observables of shape ``(..., d)`` against ``spec``.

    Raises :class:`KernelDomainError` naming the first offending index.
    """
    if not np.all(np.isfinite(points)):
        bad = np.argwhere(~np.isfinite(points))[0]
        raise KernelDomainError(f"non-finite entry in {what} at index {tuple(int(i) for i in bad)}")
    if spec.kind == "szego":
        if points.shape[-1] != 1:
            raise KernelDomainError(f"the Szego kernel needs 1-dimensional observables, got dimension {points.shape[-1]}")
        outside = np.abs(points[..., 0]) >= 1.0
        if np.any(outside):
            bad = tuple(int(i) for i in np.argwhere(outside)[0])
            raise KernelDomainError(f"Szego kernel point on or outside the unit circle in {what} at index {bad}")
    if not spec.is_resolved:
        raise ValueError("gaussian kernel bandwidth is unresolved; call resolve_bandwidth first")


def kernel_values(spec: KernelSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Broadcasting kernel evaluation over the last axis.

    ``x`` and ``y`` have shapes ``(..., d)`` that broadcast against each other;
    the result has the broadcast shape without the last axis.  No validation
    is done here, callers use :func:`check_points` once per dataset.
    """
    if spec.kind == "linear":
        return np.sum(x * np.conj(y), axis=-1)
    if spec.kind == "gaussian":
        diff = x - y
        sq = np.sum(diff.real**2 + diff.imag**2, axis=-1)
        return np.exp(-sq / (2.0 * spec.bandwidth**2)).astype(complex)
    return 1.0 / (1.0 - x[..., 0] * np.conj(y[..., 0]))


def eval_kernel(spec: KernelSpec, x, y) -> complex:
    """Evaluate ``k(x, y)`` for two observables."""
    x = as_observable(x)
    y = as_observable(y)
    if x.shape != y.shape:
        raise KernelDomainError(f"dimension mismatch: {x.size} vs {y.size}")
    check_points(spec, x[None, :], "x")
    check_points(spec, y[None, :], "y")
    return complex(kernel_values(spec, x, y))


def _stack(points: Iterable) -> np.ndarray:
    rows = [as_observable(p) for p in points]
    if not rows:
        return np.zeros((0, 1), dtype=complex)
    dims = {r.size for r in rows}
    if len(dims) != 1:
        raise KernelDomainError(f"observables have mixed dimensions {sorted(dims)}")
    return np.stack(rows)


def gram_block(spec: KernelSpec, xs: Sequence, ys: Sequence) -> np.ndarray:
    """Matrix of kernel values, entry ``(i, j) = k(xs[i], ys[j])``."""
    X = _stack(xs)
    Y = _stack(ys)
    if X.shape[1] != Y.shape[1] and len(xs) and len(ys):
        raise KernelDomainError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    try:
        check_points(spec, X, "xs")
    except KernelDomainError as exc:
        raise KernelDomainError(f"{exc} (row i of the gram block)") from None
    try:
        check_points(spec, Y, "ys")
    except KernelDomainError as exc:
        raise KernelDomainError(f"{exc} (column j of the gram block)") from None
    return kernel_values(spec, X[:, None, :], Y[None, :, :])


def median_bandwidth(points) -> float:
    """Median of the Euclidean distances over all distinct pairs of points.

    For an even number of pairs the lower median is returned.
    """
    P = _stack(points) if not isinstance(points, np.ndarray) else np.asarray(points, dtype=complex)
    if P.ndim == 1:
        P = P[:, None]
    if P.shape[0] < 2:
        raise ValueError("median_bandwidth needs at least 2 points")
    if not np.all(np.isfinite(P)):
        raise KernelDomainError("non-finite point in median_bandwidth")
    real = np.concatenate([P.real, P.imag], axis=1)
    d = pdist(real)
    k = (d.size - 1) // 2
    med = float(np.partition(d, k)[k])
    if med <= 0.0:
        raise DegenerateBandwidthError("degenerate bandwidth: the median pairwise distance is 0")
    return med


def resolve_bandwidth(spec: KernelSpec, datasets, max_points: int = 2000) -> KernelSpec:
    """Fill in an unresolved Gaussian bandwidth from the pooled observations.

    ``datasets`` is an iterable of :class:`~dsmetric.trajectories.TrajectorySet`.
    All observations of all datasets are pooled; if there are more than
    ``max_points`` of them an evenly strided subset is used so the cost stays
    bounded.  Specs that are already resolved are returned unchanged.
    """
    if spec.is_resolved:
        return spec
    pooled = np.concatenate([ds.values.reshape(-1, ds.dim) for ds in datasets], axis=0)
    if pooled.shape[0] > max_points:
        idx = np.linspace(0, pooled.shape[0] - 1, max_points).round().astype(int)
        pooled = pooled[np.unique(idx)]
    return spec.with_bandwidth(median_bandwidth(pooled))
