"""Closed-form angles between linear systems and the small linear algebra behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, PreconditionError
from .kernels import KernelSpec
from .metric import AngleResult, estimate_Am, geometric_schedule
from .trajectories import ARModel, linear_simulate


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """x_{t+1} = A x_t, y_t = C x_t."""

    A: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        if C.ndim != 2 or C.shape[1] != A.shape[0]:
            raise ValueError(f"C must have {A.shape[0]} columns, got shape {C.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(C))):
            raise ValueError("system matrices must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)

    @property
    def q(self) -> int:
        return self.A.shape[0]

    @property
    def r(self) -> int:
        return self.C.shape[0]

    def spectral_radius(self) -> float:
        return spectral_radius(self.A)


def spectral_radius(A) -> float:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return float(np.max(np.abs(np.linalg.eigvals(A)))) if A.size else 0.0


def ar_companion(model: ARModel) -> LinearSystem:
    """Companion form: first row ``(a_1, ..., a_q)``, ones on the subdiagonal, ``C = e_1``."""
    q = model.order
    A = np.zeros((q, q))
    A[0] = model.coeffs
    A[np.arange(1, q), np.arange(q - 1)] = 1.0
    C = np.zeros((1, q))
    C[0, 0] = 1.0
    return LinearSystem(A, C)


def ar_char_poly(model: ARModel) -> np.ndarray:
    """Coefficients of ``y^q - a_1 y^{q-1} - ... - a_q``, highest degree first."""
    return np.concatenate([[1.0], -np.asarray(model.coeffs)])


def ar_initial_state(model: ARModel, init: Sequence[float]) -> np.ndarray:
    """Companion state whose outputs start with the seeds ``(y_0, ..., y_{q-1})``."""
    S = ar_companion(model)
    q = S.q
    if len(init) != q:
        raise ValueError(f"need {q} seed values, got {len(init)}")
    O = np.vstack([S.C @ np.linalg.matrix_power(S.A, k) for k in range(q)])
    return np.linalg.solve(O, np.asarray(init, dtype=complex))


def characteristic_poly(A) -> np.ndarray:
    """Monic characteristic polynomial of a square matrix, highest degree first."""
    return np.poly(np.atleast_2d(np.asarray(A, dtype=complex)))


# ---------------------------------------------------------------------------
# polynomial roots


def _horner(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    p = np.zeros_like(z)
    for a in c:
        p = p * z + a
    return p


def poly_roots(coeffs, tol: float = 1e-12, max_iter: int = 500) -> np.ndarray:
    """All complex roots by Durand-Kerner (Weierstrass) iteration.

    ``coeffs`` are highest degree first.  Stops when every root has relative
    residual ``|p(z)| / sum_k |c_k| |z|^k`` below ``tol``.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if c[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    c = c / c[0]
    n = c.size - 1
    if n == 1:
        return np.array([-c[1]])
    # Cauchy bound for the starting circle
    radius = 1.0 + float(np.max(np.abs(c[1:])))
    z = radius * (0.4 + 0.9j) ** np.arange(n)
    absc = np.abs(c)
    resid = np.inf
    for _ in range(max_iter):
        p = _horner(c, z)
        scale = _horner(absc, np.abs(z).astype(complex)).real
        rel = np.abs(p) / np.where(scale > 0, scale, 1.0)
        resid = float(rel.max())
        if resid <= tol:
            return z
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = np.prod(diff, axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        z = z - p / denom
    raise ConvergenceError(f"Durand-Kerner did not converge in {max_iter} iterations (relative residual {resid:.3e})")


# ---------------------------------------------------------------------------
# AR closed form


@dataclass(frozen=True)
class RootPartition:
    P: Tuple[complex, ...]
    Q: Tuple[complex, ...]
    R: Tuple[complex, ...]
    unit_tol: float = 1e-9


# roots with unit_tol < ||g| - 1| <= AMBIGUITY * unit_tol are rejected
AMBIGUITY = 100.0


def partition_roots(roots, unit_tol: float = 1e-9) -> RootPartition:
    """Split roots into outside (P), on (Q) and inside (R) the unit circle."""
    P, Q, R = [], [], []
    for g in np.asarray(roots, dtype=complex).ravel():
        dev = abs(g) - 1.0
        if abs(dev) <= unit_tol:
            Q.append(complex(g))
        elif abs(dev) <= AMBIGUITY * unit_tol:
            raise PreconditionError(
                f"root {complex(g)} has modulus {abs(g)!r}, too close to the unit circle to classify"
            )
        elif dev > 0:
            P.append(complex(g))
        else:
            R.append(complex(g))
    return RootPartition(tuple(P), tuple(Q), tuple(R), unit_tol)


def _check_distinct(roots, what):
    r = np.asarray(roots, dtype=complex)
    for i in range(r.size):
        for j in range(i + 1, r.size):
            if abs(r[i] - r[j]) <= 1e-8:
                raise PreconditionError(f"{what} has repeated roots {r[i]} and {r[j]}; only distinct roots are supported")


def _multiset_match(a, b, tol) -> bool:
    if len(a) != len(b):
        return False
    left = list(b)
    for x in a:
        k = next((i for i, y in enumerate(left) if abs(x - y) <= tol), None)
        if k is None:
            return False
        left.pop(k)
    return True


def _block_ratio(X, Y) -> float:
    # |det C_XY|^2 / (det C_XX det C_YY) for Cauchy-type C_UV = (1 / (1 - u conj v))
    if not X:
        return 1.0
    num = 1.0 + 0j
    for a in X:
        for b in X:
            num *= 1 - a * np.conj(b)
    for a in Y:
        for b in Y:
            num *= 1 - a * np.conj(b)
    den = 1.0
    for a in X:
        for b in Y:
            den *= abs(1 - a * np.conj(b)) ** 2
    return float(num.real / den)


def ar_closed_form_Aq(roots1, roots2, unit_tol: float = 1e-9) -> float:
    """Limit angle of two AR systems, given the roots of their characteristic polynomials."""
    roots1 = [complex(g) for g in roots1]
    roots2 = [complex(g) for g in roots2]
    _check_distinct(roots1, "first root list")
    _check_distinct(roots2, "second root list")
    p1 = partition_roots(roots1, unit_tol)
    p2 = partition_roots(roots2, unit_tol)
    if len(p1.P) != len(p2.P) or len(p1.R) != len(p2.R) or not _multiset_match(p1.Q, p2.Q, unit_tol):
        return 0.0
    val = _block_ratio(p1.P, p2.P) * _block_ratio(p1.R, p2.R)
    return min(max(val, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Gramians and subspace angles


def stein_solve(A1, A2, Qm, tol: float = 1e-13, max_iter: int = 1_000_000) -> np.ndarray:
    """Solve ``X = Qm + A1^* X A2`` by fixed-point iteration."""
    A1 = np.atleast_2d(np.asarray(A1, dtype=complex))
    A2 = np.atleast_2d(np.asarray(A2, dtype=complex))
    Qm = np.atleast_2d(np.asarray(Qm, dtype=complex))
    if Qm.shape != (A1.shape[0], A2.shape[0]):
        raise ValueError(f"Qm must have shape {(A1.shape[0], A2.shape[0])}, got {Qm.shape}")
    rho = spectral_radius(A1) * spectral_radius(A2)
    if rho >= 1.0:
        raise PreconditionError(f"Stein iteration needs rho(A1) rho(A2) < 1, got {rho!r}")
    A1h = A1.conj().T
    X = Qm.copy()
    for _ in range(max_iter):
        Xn = Qm + A1h @ X @ A2
        step = np.abs(Xn - X).max()
        X = Xn
        if step <= tol * max(np.abs(X).max(), 1e-300):
            return X
    raise ConvergenceError(f"Stein iteration did not converge in {max_iter} steps (last update {step:.3e})")


def _observability_gramian(S: LinearSystem) -> np.ndarray:
    G = stein_solve(S.A, S.A, S.C.conj().T @ S.C)
    G = (G + G.conj().T) / 2
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond >= 1e12:
        raise PreconditionError(f"system is not observable (observability Gramian condition number {cond:.3e})")
    return G


def subspace_angle_distance(S1: LinearSystem, S2: LinearSystem) -> Tuple[float, np.ndarray]:
    """Distance ``-sum log cos^2`` of the principal angles between observability subspaces.

    Returns ``(d, cos2)`` with the squared cosines in decreasing order.
    """
    for S, which in ((S1, "first"), (S2, "second")):
        rho = S.spectral_radius()
        if rho >= 1.0:
            raise PreconditionError(f"{which} system is not stable (spectral radius {rho!r})")
    if S1.r != S2.r:
        raise ValueError(f"observation dimensions differ ({S1.r} vs {S2.r})")
    G11 = _observability_gramian(S1)
    G22 = _observability_gramian(S2)
    G12 = stein_solve(S1.A, S2.A, S1.C.conj().T @ S2.C)
    L1 = np.linalg.cholesky(G11)
    L2 = np.linalg.cholesky(G22)
    # whitened cross Gramian; its singular values are the cosines
    M = np.linalg.solve(L1, G12)
    M = np.linalg.solve(L2, M.conj().T).conj().T
    s = np.linalg.svd(M, compute_uv=False)
    cos2 = s**2
    if np.any(cos2 > 1 + 1e-9):
        raise ArithmeticError(f"squared cosine {cos2.max()!r} exceeds 1")
    cos2 = np.clip(cos2, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        d = float(-np.sum(np.log(cos2)))
    return max(d, 0.0), cos2


# ---------------------------------------------------------------------------
# Binet-Cauchy kernels


@dataclass(frozen=True)
class KernelWithTail:
    value: complex
    tail_bound: float

    def __float__(self):
        return float(self.value.real)


def _bc_terms(S1, S2, x01, x02, lam, T):
    if lam <= 0:
        raise ValueError("lambda must be positive")
    n1 = np.linalg.norm(S1.A, 2)
    n2 = np.linalg.norm(S2.A, 2)
    rho = math.exp(-lam) * n1 * n2
    if rho >= 1.0:
        raise PreconditionError(f"Binet-Cauchy sum needs exp(-lambda) |A1| |A2| < 1, got {rho!r}")
    x1 = np.asarray(x01, dtype=complex).ravel()
    x2 = np.asarray(x02, dtype=complex).ravel()
    ys = []
    v1, v2 = S1.A @ x1, S2.A @ x2
    for t in range(1, T + 1):
        ys.append((math.exp(-lam * t), S1.C @ v1, S2.C @ v2))
        v1, v2 = S1.A @ v1, S2.A @ v2
    # sum_{t>T} e^{-lam t} |y1_t| |y2_t| <= c rho^{T+1} / (1 - rho)
    c = np.linalg.norm(S1.C, 2) * np.linalg.norm(S2.C, 2) * np.linalg.norm(x1) * np.linalg.norm(x2)
    tail = float(c * rho ** (T + 1) / (1 - rho))
    return ys, tail


def binet_cauchy_trace(S1, S2, x01, x02, lam: float, T: int) -> KernelWithTail:
    """``sum_{t=1}^T e^{-lam t} y1_t^* y2_t`` with a bound on the omitted tail."""
    ys, tail = _bc_terms(S1, S2, x01, x02, lam, T)
    val = sum((w * np.vdot(y1, y2) for w, y1, y2 in ys), 0j)
    return KernelWithTail(complex(val), tail)


def binet_cauchy_det(S1, S2, x01, x02, lam: float, T: int) -> KernelWithTail:
    """``det(sum_{t=1}^T e^{-lam t} y1_t y2_t^*)`` with a bound on the effect of the tail."""
    if S1.r != S2.r:
        raise ValueError("determinant kernel needs equal observation dimensions")
    ys, tail = _bc_terms(S1, S2, x01, x02, lam, T)
    M = sum((w * np.outer(y1, np.conj(y2)) for w, y1, y2 in ys), np.zeros((S1.r, S1.r), dtype=complex))
    r = S1.r
    nS = np.linalg.norm(M, 2)
    return KernelWithTail(complex(np.linalg.det(M)), float((nS + tail) ** r - nS**r))


def binet_cauchy_cosine(S1, S2, x01, x02, lam: float, T: int) -> float:
    """Trace-kernel cosine similarity ``|k12| / sqrt(k11 k22)``."""
    k12 = binet_cauchy_trace(S1, S2, x01, x02, lam, T).value
    k11 = binet_cauchy_trace(S1, S1, x01, x01, lam, T).value.real
    k22 = binet_cauchy_trace(S2, S2, x02, x02, lam, T).value.real
    return float(abs(k12) / math.sqrt(k11 * k22))


# ---------------------------------------------------------------------------
# estimator against closed form


@dataclass(frozen=True)
class ClosedFormReport:
    estimate: float
    closed_form: float
    gap: float
    result: AngleResult

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "closed_form": self.closed_form, "gap": self.gap, "result": self.result.to_dict()}


def angle_vs_closed_form_check(S1: LinearSystem, S2: LinearSystem, T_max: int = 2000, T0: int = 16) -> ClosedFormReport:
    """Estimate the degree-q angle from trajectories started at the standard basis and compare
    it with the product of squared cosines of the subspace angles."""
    if S1.q != S2.q:
        raise ValueError(f"state dimensions differ ({S1.q} vs {S2.q})")
    for S, which in ((S1, "first"), (S2, "second")):
        rho = S.spectral_radius()
        if rho >= 1.0:
            raise PreconditionError(f"{which} system is not stable (spectral radius {rho!r})")
    _, cos2 = subspace_angle_distance(S1, S2)
    closed = float(np.prod(cos2))
    q = S1.q
    D1 = linear_simulate(S1.A, S1.C, np.eye(q), T_max)
    D2 = linear_simulate(S2.A, S2.C, np.eye(q), T_max)
    res = estimate_Am(D1, D2, q, geometric_schedule(T_max, T0), KernelSpec("linear"), pairing="same-time")
    return ClosedFormReport(res.final, closed, abs(res.final - closed), res)
