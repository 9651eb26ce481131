"""Trajectory CSV files.

Header line::

    # n_seq=<N> len=<T> dim=<d> complex=<0|1>[ scaled=1]

then one row per (sequence, time) ``seq_idx,t,re_1,im_1,...,re_d,im_d``; the
imaginary columns are present only when ``complex=1``.  With ``scaled=1``
every row ends with the log scale of its time step (the observable is the
stored value times ``exp(log_scale)``).  Numbers are written with 17
significant digits so files round-trip exactly.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import TrajectoryFormatError
from .trajectories import TrajectorySet

_HEADER = re.compile(r"^#\s*(.*)$")


def fmt(x: float) -> str:
    """17 significant digits, the shortest form that always round-trips."""
    return format(float(x), ".17g")


def write_trajectories(path, ds: TrajectorySet) -> None:
    V = ds.values
    is_complex = bool(np.any(V.imag != 0))
    header = f"# n_seq={ds.n_seq} len={ds.length} dim={ds.dim} complex={int(is_complex)}"
    if ds.is_scaled:
        header += " scaled=1"
    lines = [header]
    for l in range(ds.n_seq):
        for t in range(ds.length):
            row = [str(l), str(t)]
            for v in V[l, t]:
                row.append(fmt(v.real))
                if is_complex:
                    row.append(fmt(v.imag))
            if ds.is_scaled:
                row.append(fmt(ds.log_scale[t]))
            lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_header(line: str, path) -> dict:
    m = _HEADER.match(line.strip())
    if not m:
        raise TrajectoryFormatError(f"{path}: line 1 must be a '# n_seq=... len=... dim=... complex=...' header")
    fields = {}
    for tok in m.group(1).split():
        if "=" not in tok:
            raise TrajectoryFormatError(f"{path}: bad header field {tok!r}")
        k, v = tok.split("=", 1)
        try:
            fields[k] = int(v)
        except ValueError:
            raise TrajectoryFormatError(f"{path}: header field {k} must be an integer, got {v!r}") from None
    for k in ("n_seq", "len", "dim", "complex"):
        if k not in fields:
            raise TrajectoryFormatError(f"{path}: header is missing {k}=")
    if fields["complex"] not in (0, 1) or fields.get("scaled", 0) not in (0, 1):
        raise TrajectoryFormatError(f"{path}: complex and scaled flags must be 0 or 1")
    if min(fields["n_seq"], fields["len"], fields["dim"]) < 1:
        raise TrajectoryFormatError(f"{path}: n_seq, len and dim must be positive")
    return fields


def read_trajectories(path, label=None, name=None) -> TrajectorySet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TrajectoryFormatError(f"no such file: {path}") from None
    lines = text.splitlines()
    if not lines:
        raise TrajectoryFormatError(f"{path}: empty file")
    h = _parse_header(lines[0], path)
    N, T, d, cx, sc = h["n_seq"], h["len"], h["dim"], h["complex"], h.get("scaled", 0)
    ncol = 2 + d * (1 + cx) + sc
    vals = np.zeros((N, T, d), dtype=complex)
    logs = np.zeros(T) if sc else None
    seen = np.zeros((N, T), dtype=bool)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        toks = line.split(",")
        if len(toks) != ncol:
            raise TrajectoryFormatError(f"{path}: line {lineno}: expected {ncol} columns, got {len(toks)}")
        try:
            l, t = int(toks[0]), int(toks[1])
            nums = [float(x) for x in toks[2:]]
        except ValueError as exc:
            raise TrajectoryFormatError(f"{path}: line {lineno}: {exc}") from None
        if not (0 <= l < N and 0 <= t < T):
            raise TrajectoryFormatError(f"{path}: line {lineno}: index ({l}, {t}) out of range")
        if seen[l, t]:
            raise TrajectoryFormatError(f"{path}: line {lineno}: duplicate row for ({l}, {t})")
        seen[l, t] = True
        obs = nums[: d * (1 + cx)]
        if cx:
            vals[l, t] = np.array(obs[0::2]) + 1j * np.array(obs[1::2])
        else:
            vals[l, t] = obs
        if sc:
            logs[t] = nums[-1]
    if not seen.all():
        l, t = (int(i) for i in np.argwhere(~seen)[0])
        raise TrajectoryFormatError(f"{path}: missing row for sequence {l}, time {t}")
    if not np.all(np.isfinite(vals)):
        raise TrajectoryFormatError(f"{path}: non-finite value")
    return TrajectorySet(vals, label, path.stem if name is None else name, logs)


def write_ucr(path, records) -> None:
    """Write ``(label, series)`` pairs as comma-separated UCR rows."""
    lines = [",".join([str(int(label))] + [fmt(v) for v in series]) for label, series in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
