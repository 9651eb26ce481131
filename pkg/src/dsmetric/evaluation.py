"""Distance matrices over labelled collections, k-NN classification and cross-validation."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .io import fmt
from .kernels import KernelSpec
from .metric import AngleSchedule, metric_distance, pairwise_estimates
from .trajectories import TrajectorySet


@dataclass(eq=False)
class DistanceMatrix:
    names: List[str]
    labels: List[Optional[int]]
    values: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.values, dtype=float)
        n = len(self.names)
        if V.shape != (n, n) or len(self.labels) != n:
            raise ValueError(f"distance matrix of shape {V.shape} does not match {n} names/labels")
        if np.any(np.isnan(V)):
            raise ValueError("distance matrix contains NaN")
        if np.any(V < 0):
            raise ValueError("distance matrix has negative entries")
        if not np.allclose(V, V.T, rtol=0, atol=1e-10):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diag(V) != 0):
            raise ValueError("distance matrix diagonal must be exactly 0")
        self.values = V

    def __len__(self):
        return len(self.names)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name"] + list(self.names))
        for name, row in zip(self.names, self.values):
            w.writerow([name] + [fmt(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, labels=None) -> "DistanceMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        names = rows[0][1:]
        vals = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
        if labels is None:
            labels = [None] * len(names)
        return cls(names, list(labels), vals)


@dataclass
class PairReport:
    i: int
    j: int
    A: float
    distance: float
    converged: bool
    trace: Tuple[Tuple[int, float], ...]

    def to_dict(self):
        return {
            "i": self.i,
            "j": self.j,
            "A": self.A,
            "distance": self.distance,
            "converged": self.converged,
            "trace": [[T, a] for T, a in self.trace],
        }


@dataclass
class DistanceReport:
    matrix: DistanceMatrix
    pairs: List[PairReport] = field(default_factory=list)
    spec: Optional[KernelSpec] = None
    errors: List[str] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(p.converged for p in self.pairs)

    def to_dict(self):
        return {
            "names": self.matrix.names,
            "labels": self.matrix.labels,
            "kernel": None if self.spec is None else self.spec.to_dict(),
            "pairs": [p.to_dict() for p in self.pairs],
            "all_converged": self.all_converged,
            "errors": self.errors,
        }


def distance_matrix(
    datasets: Sequence[TrajectorySet],
    m: int,
    schedule: AngleSchedule,
    spec: KernelSpec,
    pairing: str = "cross-time",
    jobs: int = 1,
) -> DistanceReport:
    """``sqrt(1 - A)`` between every pair, with per-pair convergence results."""
    datasets = list(datasets)
    res = pairwise_estimates(datasets, m, schedule, spec, pairing, jobs)
    n = len(datasets)
    D = np.zeros((n, n))
    pairs = []
    for (i, j), r in sorted(res.results.items()):
        d = metric_distance(r.final)
        D[i, j] = D[j, i] = d
        pairs.append(PairReport(i, j, r.final, d, r.converged, r.trace))
    names = [ds.name or f"d{i}" for i, ds in enumerate(datasets)]
    labels = [ds.label for ds in datasets]
    return DistanceReport(DistanceMatrix(names, labels, D), pairs, res.spec)


def knn_classify(dm: DistanceMatrix, train_idx: Sequence[int], test_idx: Sequence[int], k: int = 3, labels=None) -> List[int]:
    """Majority vote among the k nearest training rows.

    Ties in the vote go to the label with the smallest summed distance among
    the neighbours, then to the smallest label.  Equal distances are ordered
    by row index.
    """
    labels = list(dm.labels if labels is None else labels)
    train = [int(i) for i in train_idx]
    test = [int(i) for i in test_idx]
    if not train or not test:
        raise ValueError("train and test sets must be non-empty")
    if set(train) & set(test):
        raise ValueError("train and test indices overlap")
    n = len(dm)
    if any(not 0 <= i < n for i in train + test):
        raise ValueError("index out of range")
    if len(train) < k:
        raise ValueError(f"need at least k = {k} training points, got {len(train)}")
    if any(labels[i] is None for i in train):
        raise ValueError("training rows must be labelled")
    preds = []
    tr = np.array(train)
    for i in test:
        d = dm.values[i, tr]
        order = np.lexsort((tr, d))[:k]
        votes = Counter()
        dsum: Dict[int, float] = {}
        for o in order:
            lab = labels[tr[o]]
            votes[lab] += 1
            dsum[lab] = dsum.get(lab, 0.0) + float(d[o])
        best = min(votes, key=lambda lab: (-votes[lab], dsum[lab], lab))
        preds.append(best)
    return preds


class LCG64:
    """64-bit linear congruential generator with Knuth's MMIX constants.

    ``state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64``;
    uniform integers take the top 53 bits as a fraction in [0, 1).
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = int(seed) & self.MASK

    def next_u64(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        return int(((self.next_u64() >> 11) * n) >> 53)

    def shuffle(self, xs: list) -> list:
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
        return xs


def stratified_folds(labels: Sequence[int], folds: int, rng: LCG64) -> List[int]:
    """Fold index per point; each class is shuffled and dealt round-robin."""
    assign = [0] * len(labels)
    offset = 0
    for lab in sorted(set(labels)):
        members = rng.shuffle([i for i, l in enumerate(labels) if l == lab])
        for pos, i in enumerate(members):
            assign[i] = (offset + pos) % folds
        offset = (offset + len(members)) % folds
    return assign


@dataclass
class CVResult:
    mean_error: float
    sd_error: float
    trial_errors: List[float]
    assignments: List[List[int]]

    def to_dict(self):
        return {
            "mean_error": self.mean_error,
            "sd_error": self.sd_error,
            "trial_errors": self.trial_errors,
            "folds": self.assignments,
        }


def cross_validate(dm: DistanceMatrix, labels=None, folds: int = 10, trials: int = 10, seed: int = 0, k: int = 3) -> CVResult:
    """Repeated stratified k-fold error of the k-NN classifier.

    ``sd_error`` is the sample standard deviation over trials (0 for one
    trial).
    """
    labels = list(dm.labels if labels is None else labels)
    n = len(labels)
    if n != len(dm):
        raise ValueError("labels do not match the distance matrix")
    if any(l is None for l in labels):
        raise ValueError("every row needs a label")
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds > n:
        raise ValueError(f"configuration error: {folds} folds but only {n} points")
    if len(set(labels)) < 2:
        raise ValueError("need at least two classes")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = LCG64(seed)
    errs, assigns = [], []
    for _ in range(trials):
        a = stratified_folds(labels, folds, rng)
        wrong = 0
        for f in range(folds):
            test = [i for i in range(n) if a[i] == f]
            train = [i for i in range(n) if a[i] != f]
            if not test:
                continue
            if len(train) < k:
                raise ValueError(f"configuration error: fold {f} leaves {len(train)} training points for k = {k}")
            pred = knn_classify(dm, train, test, k, labels)
            wrong += sum(p != labels[i] for p, i in zip(pred, test))
        errs.append(wrong / n)
        assigns.append(a)
    mean = float(np.mean(errs))
    sd = float(np.std(errs, ddof=1)) if trials > 1 else 0.0
    return CVResult(mean, sd, errs, assigns)
