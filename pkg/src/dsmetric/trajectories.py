"""Trajectory data sets, synthetic system generators and UCR ingestion."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .angles import Angle
from .errors import IncompatibleDataError, UCRFormatError


@dataclass(frozen=True, eq=False)
class TrajectorySet:
    """N observed sequences of length T from one system.

    ``values`` has shape ``(N, T, d)`` and complex dtype; ``values[l, t]`` is
    the observable of sequence ``l`` at time ``t``.

    ``log_scale`` is an optional length-T vector for data whose magnitude
    does not fit in a float: the true observable is
    ``values[l, t] * exp(log_scale[t])``.  It is only understood by the
    linear kernel (see :mod:`dsmetric.metric`).
    """

    values: np.ndarray
    label: Optional[int] = None
    name: str = ""
    log_scale: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 2:
            v = v[:, :, None]
        if v.ndim != 3:
            raise IncompatibleDataError(f"trajectory values must have shape (N, T, d), got {v.shape}")
        if min(v.shape) < 1:
            raise IncompatibleDataError(f"trajectory set needs N, T, d >= 1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            bad = tuple(int(i) for i in np.argwhere(~np.isfinite(v))[0])
            raise IncompatibleDataError(f"non-finite observable at (seq, t, dim) = {bad} in {self.name or 'dataset'}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.log_scale is not None:
            s = np.asarray(self.log_scale, dtype=float)
            if s.shape != (v.shape[1],):
                raise IncompatibleDataError(f"log_scale must have shape ({v.shape[1]},), got {s.shape}")
            if not np.all(np.isfinite(s)):
                raise IncompatibleDataError("log_scale contains non-finite entries")
            s.setflags(write=False)
            object.__setattr__(self, "log_scale", s)
        if self.label is not None:
            object.__setattr__(self, "label", int(self.label))

    @property
    def n_seq(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    @property
    def is_scaled(self) -> bool:
        return self.log_scale is not None

    def truncate(self, T: int) -> "TrajectorySet":
        if not 1 <= T <= self.length:
            raise IncompatibleDataError(f"cannot truncate length {self.length} to {T}")
        ls = None if self.log_scale is None else self.log_scale[:T]
        return TrajectorySet(self.values[:, :T], self.label, self.name, ls)

    def dense(self) -> np.ndarray:
        """Observables with any log scale multiplied in (may overflow to inf)."""
        if self.log_scale is None:
            return self.values
        with np.errstate(over="ignore"):
            return self.values * np.exp(self.log_scale)[None, :, None]


@dataclass(frozen=True)
class RotationSpec:
    """The map z -> alpha z on the unit disk, observed from ``z0`` at given shifts."""

    alpha_modulus: float
    alpha_angle: Angle
    z0: complex
    shifts: Tuple[int, ...] = (0,)

    def __post_init__(self):
        if not (0.0 < self.alpha_modulus <= 1.0):
            raise ValueError(f"alpha modulus must be in (0, 1], got {self.alpha_modulus}")
        if not abs(self.z0) < 1.0:
            raise ValueError(f"z0 must lie in the open unit disk, got |z0| = {abs(self.z0)}")
        if not isinstance(self.alpha_angle, Angle):
            raise TypeError("alpha_angle must be an Angle")
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        if any(s < 0 for s in self.shifts):
            raise ValueError("shifts must be non-negative")

    @property
    def alpha(self) -> complex:
        return self.alpha_modulus * complex(np.exp(2j * np.pi * float(self.alpha_angle)))


@dataclass(frozen=True)
class ARModel:
    """y_t = a_1 y_{t-1} + ... + a_q y_{t-q}."""

    coeffs: Tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(a) for a in self.coeffs)
        if len(c) < 1:
            raise ValueError("an AR model needs at least one coefficient")
        if not all(math.isfinite(a) for a in c):
            raise ValueError("AR coefficients must be finite")
        if c[-1] == 0.0:
            raise ValueError("the last AR coefficient a_q must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs)


def _unit_phase(angle: Angle, n: int) -> complex:
    # exact reduction of the rational part keeps periodic orbits exactly periodic
    if angle.is_rational:
        r = (angle.rational_part * n) % 1
        for frac, val in _EXACT_PHASES:
            if r == frac:
                return val
        theta = float(r)
    else:
        theta = angle.turns_mod1(n)
    return complex(math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta))


_EXACT_PHASES = (
    (Fraction(0), 1 + 0j),
    (Fraction(1, 4), 1j),
    (Fraction(1, 2), -1 + 0j),
    (Fraction(3, 4), -1j),
)


def rotation_orbit(spec: RotationSpec, T: int, label: Optional[int] = None, name: str = "") -> TrajectorySet:
    """Orbits ``x_t = alpha^(t + s) z0`` for each shift ``s``."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if not spec.shifts:
        raise ValueError("rotation_orbit needs at least one shift")
    out = np.empty((len(spec.shifts), T, 1), dtype=complex)
    log_mod = math.log(spec.alpha_modulus)
    for l, s in enumerate(spec.shifts):
        for t in range(T):
            n = t + s
            out[l, t, 0] = math.exp(n * log_mod) * _unit_phase(spec.alpha_angle, n) * spec.z0
    return TrajectorySet(out, label, name)


def ar_simulate(model: ARModel, init: Sequence[float], T: int, label: Optional[int] = None, name: str = "") -> TrajectorySet:
    """One scalar sequence of the AR recurrence.

    ``init`` holds the q seed values in time order ``(y_0, ..., y_{q-1})``;
    they are emitted as the first q outputs.
    """
    init = [float(v) for v in init]
    q = model.order
    if len(init) != q:
        raise ValueError(f"AR({q}) model needs {q} seed values, got {len(init)}")
    if T < 1:
        raise ValueError("T must be >= 1")
    ys = list(init[:T])
    a = model.coeffs
    while len(ys) < T:
        t = len(ys)
        ys.append(sum(a[j] * ys[t - 1 - j] for j in range(q)))
    return TrajectorySet(np.asarray(ys, dtype=complex)[None, :, None], label, name)


# magnitudes beyond these switch linear_simulate to the log-scaled representation
_BIG = 1e280
_SMALL = 1e-280


def linear_simulate(
    A,
    C,
    x0s,
    T: int,
    scaled: Optional[bool] = None,
    label: Optional[int] = None,
    name: str = "",
) -> TrajectorySet:
    """Observations ``y_t = C A^t x0`` for each initial state.

    With ``scaled=None`` the plain representation is used unless the orbit
    leaves the range of floating point numbers, in which case a log-scaled
    :class:`TrajectorySet` is returned.  ``scaled=True`` forces that form.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    X0 = np.asarray(x0s, dtype=complex)
    q = A.shape[0]
    if X0.ndim == 1:
        # one q-vector, or several scalar states when q == 1
        X0 = X0[None, :] if X0.size == q else X0[:, None]
    if A.shape != (q, q):
        raise ValueError(f"A must be square, got shape {A.shape}")
    if C.shape[1] != q:
        raise ValueError(f"C has {C.shape[1]} columns but the state dimension is {q}")
    if X0.ndim != 2 or X0.shape[1] != q:
        raise ValueError(f"initial states must be q-vectors with q = {q}, got array of shape {X0.shape}")
    if X0.shape[0] < 1:
        raise ValueError("need at least one initial state")
    if T < 1:
        raise ValueError("T must be >= 1")
    for M, what in ((A, "A"), (C, "C"), (X0, "initial states")):
        if not np.all(np.isfinite(M)):
            raise ValueError(f"{what} contains non-finite entries")

    if not scaled:
        plain = _simulate_plain(A, C, X0, T)
        if plain is not None:
            return TrajectorySet(plain, label, name)
        if scaled is False:
            raise OverflowError("orbit leaves the floating point range; use scaled=True")
    vals, logs = _simulate_scaled(A, C, X0, T)
    return TrajectorySet(vals, label, name, logs)


def _simulate_plain(A, C, X0, T, block: int = 256):
    # raw powers A^0..A^block applied blockwise; None if the range is left
    q = A.shape[0]
    P = np.empty((block + 1, q, q), dtype=complex)
    P[0] = np.eye(q)
    for k in range(1, block + 1):
        P[k] = A @ P[k - 1]
    CP = np.einsum("rq,kqp->krp", C, P[:block])
    N = X0.shape[0]
    out = np.empty((N, T, C.shape[0]), dtype=complex)
    X = X0.T.copy()
    alive = True
    t0 = 0
    while t0 < T:
        nb = min(block, T - t0)
        Z = np.einsum("krp,pn->knr", CP[:nb], X)
        mags = np.abs(Z).reshape(nb, -1).max(axis=1)
        if not np.all(np.isfinite(mags)) or mags.max() > _BIG:
            return None
        if alive and np.any((mags > 0) & (mags < _SMALL)):
            return None
        out[:, t0 : t0 + nb, :] = Z.transpose(1, 0, 2)
        X = P[nb] @ X
        if alive and not np.any(X):
            alive = False
        t0 += nb
    return out


def _pow2(M, e):
    # exact scaling of a complex array by 2**-e (e broadcasts against M)
    return np.ldexp(M.real, -e) + 1j * np.ldexp(M.imag, -e)


def _exponent(M) -> int:
    s = np.abs(M).max()
    return int(np.frexp(s)[1]) if s > 0 else 0


def _simulate_scaled(A, C, X0, T, block: int = 256):
    # normalised powers of A with integer binary exponents, so rescaling is exact
    q = A.shape[0]
    P = np.empty((block + 1, q, q), dtype=complex)
    pexp = np.zeros(block + 1, dtype=np.int64)
    P[0] = np.eye(q)
    for k in range(1, block + 1):
        M = A @ P[k - 1]
        e = _exponent(M)
        P[k] = _pow2(M, e)
        pexp[k] = pexp[k - 1] + e
    N = X0.shape[0]
    r = C.shape[0]
    vals = np.empty((N, T, r), dtype=complex)
    exps = np.zeros(T, dtype=np.int64)
    X = X0.T.copy()
    xexp = _exponent(X)
    X = _pow2(X, xexp)
    CP = np.einsum("rq,kqp->krp", C, P[:block])
    t0 = 0
    while t0 < T:
        nb = min(block, T - t0)
        Z = np.einsum("krp,pn->knr", CP[:nb], X)
        mags = np.abs(Z).reshape(nb, -1).max(axis=1)
        ze = np.where(mags > 0, np.frexp(mags)[1], 0).astype(np.int64)
        Z = _pow2(Z, ze[:, None, None])
        vals[:, t0 : t0 + nb, :] = Z.transpose(1, 0, 2)
        exps[t0 : t0 + nb] = pexp[:nb] + xexp + ze
        X = P[nb] @ X
        e = _exponent(X)
        X = _pow2(X, e)
        xexp += int(pexp[nb]) + e
        t0 += nb
    return vals, exps * math.log(2.0)


def time_delay_embed(
    series,
    dim: int = 2,
    lag: int = 1,
    shifts: Sequence[int] = (0,),
    label: Optional[int] = None,
    name: str = "",
) -> TrajectorySet:
    """Delay-coordinate vectors ``(x_t, x_{t+lag}, ..., x_{t+(dim-1)lag})``.

    With the default ``shifts=(0,)`` the result is one sequence of
    ``len(series) - (dim-1)*lag`` observables.  Several shifts produce one
    sequence per shift, started ``s`` steps into the embedded series and all
    truncated to a common length, which gives multiple initial values from a
    single recording.
    """
    x = np.asarray(series, dtype=complex).ravel()
    if dim < 1 or lag < 1:
        raise ValueError("dim and lag must be positive integers")
    need = (dim - 1) * lag + 1
    if x.size < need:
        raise ValueError(f"series of length {x.size} is too short for dim={dim}, lag={lag} (needs {need})")
    L = x.size - (dim - 1) * lag
    emb = np.stack([x[j * lag : j * lag + L] for j in range(dim)], axis=1)
    shifts = [int(s) for s in shifts]
    if not shifts or min(shifts) < 0:
        raise ValueError("shifts must be a non-empty list of non-negative integers")
    T = L - max(shifts)
    if T < 1:
        raise ValueError(f"embedded series of length {L} is too short for shift {max(shifts)}")
    seqs = np.stack([emb[s : s + T] for s in shifts])
    return TrajectorySet(seqs, label, name)


_SPLIT = re.compile(r"[,\s]+")


def _parse_label(tok: str, lineno: int) -> int:
    try:
        v = float(tok)
    except ValueError:
        raise UCRFormatError(f"line {lineno}: label {tok!r} is not a number") from None
    if not math.isfinite(v) or v != int(v):
        raise UCRFormatError(f"line {lineno}: label {tok!r} is not an integer")
    return int(v)


def load_ucr(path) -> List[Tuple[int, np.ndarray]]:
    """Read a UCR-format text file into ``(label, series)`` pairs.

    Fields may be separated by commas or whitespace (tabs); blank lines are
    skipped.  Rows may have different lengths.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UCRFormatError(f"no such file: {path}") from None
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        toks = [t for t in _SPLIT.split(line) if t]
        if len(toks) < 2:
            raise UCRFormatError(f"line {lineno}: expected a label and at least one value")
        label = _parse_label(toks[0], lineno)
        try:
            vals = np.array([float(t) for t in toks[1:]])
        except ValueError as exc:
            raise UCRFormatError(f"line {lineno}: {exc}") from None
        if not np.all(np.isfinite(vals)):
            raise UCRFormatError(f"line {lineno}: non-finite value")
        records.append((label, vals))
    if not records:
        raise UCRFormatError(f"{path}: file contains no records")
    return records


def rotation_ucr_corpus(
    angles: Sequence[Angle],
    per_class: int = 20,
    length: int = 64,
    seed: int = 0,
    radius: Tuple[float, float] = (0.3, 0.9),
) -> List[Tuple[int, np.ndarray]]:
    """Noise-free scalar series ``Re(alpha^t z0)`` labelled by rotation class.

    Class ``c`` (labels start at 1) rotates by ``angles[c-1]`` with unit
    modulus; ``z0`` varies per series in radius and phase.
    """
    rng = np.random.default_rng(seed)
    out = []
    for c, ang in enumerate(angles, start=1):
        for _ in range(per_class):
            rad = rng.uniform(*radius)
            z0 = rad * np.exp(2j * np.pi * rng.uniform())
            spec = RotationSpec(1.0, ang, complex(z0))
            orbit = rotation_orbit(spec, length).values[0, :, 0]
            out.append((c, orbit.real.copy()))
    return out
