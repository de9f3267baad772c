"""Ordinalization of numeric data, clustering accuracy and the multi-trial benchmark."""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ordfuzzy.core import OrdinalDataset, RankScale, hard_assignment
from ordfuzzy.fcm import FcmConfig, fcm_run
from ordfuzzy.lmfcm import LmfcmConfig, lmfcm_run

log = logging.getLogger(__name__)

METHODS = ("fcm", "lmfcm")
EXHAUSTIVE_MAX = 8


@dataclass(frozen=True)
class OrdinalizationSpec:
    bins_per_feature: int = 5
    strategy: str = "quantile"

    def __post_init__(self):
        if self.bins_per_feature < 2:
            raise ValueError("need at least two bins per feature")
        if self.strategy not in ("quantile", "equal-width"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


def ordinalize(numeric, spec: OrdinalizationSpec = OrdinalizationSpec(), labels=None,
               feature_names=()) -> OrdinalDataset:
    """Bin each numeric feature into ranks 1..m; values on a boundary take the lower rank."""
    X = np.asarray(numeric, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    m = spec.bins_per_feature
    ranks = np.empty(X.shape, dtype=np.int64)
    for k in range(X.shape[1]):
        col = X[:, k]
        if spec.strategy == "quantile":
            edges = np.quantile(col, np.arange(1, m) / m)
        else:
            edges = col.min() + (col.max() - col.min()) * np.arange(1, m) / m
        if col.min() == col.max():
            log.warning("feature %d is constant; every observation gets rank 1", k)
        ranks[:, k] = np.searchsorted(edges, col, side="left") + 1
    return OrdinalDataset(ranks, tuple(RankScale.numeric(m) for _ in range(X.shape[1])), labels,
                          tuple(feature_names))


def accuracy(predicted, truth) -> float:
    """Fraction of observations matched under the best one-to-one cluster-to-class mapping."""
    predicted = np.asarray(predicted, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if predicted.shape != truth.shape:
        raise ValueError(f"length mismatch: {predicted.size} predictions, {truth.size} labels")
    if predicted.size == 0:
        return 0.0
    _, p = np.unique(predicted, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    K = max(p.max(), t.max()) + 1
    confusion = np.zeros((K, K), dtype=np.int64)
    np.add.at(confusion, (p, t), 1)
    if K <= EXHAUSTIVE_MAX:
        best = max(confusion[np.arange(K), perm].sum() for perm in itertools.permutations(range(K)))
    else:
        rows, cols = linear_sum_assignment(-confusion)
        best = confusion[rows, cols].sum()
    return float(best) / predicted.size


@dataclass
class MethodSummary:
    method: str
    accuracies: list[float | None]
    seeds: list[int]
    iterations: list[int | None]
    errors: list[str | None]
    seconds: list[float] = field(default_factory=list)

    @property
    def ok(self) -> list[float]:
        return [a for a in self.accuracies if a is not None]

    @property
    def failures(self) -> int:
        return sum(a is None for a in self.accuracies)

    @property
    def avg(self) -> float:
        return float(np.mean(self.ok)) if self.ok else float("nan")

    @property
    def min(self) -> float:
        return float(np.min(self.ok)) if self.ok else float("nan")

    @property
    def max(self) -> float:
        return float(np.max(self.ok)) if self.ok else float("nan")

    def to_dict(self, timings: bool = False) -> dict:
        out = {"method": self.method, "avg": self.avg, "min": self.min, "max": self.max,
               "trials": len(self.accuracies), "failures": self.failures,
               "accuracies": self.accuracies, "seeds": self.seeds, "iterations": self.iterations,
               "errors": self.errors}
        if timings:
            out["seconds"] = self.seconds
        return out


@dataclass
class BenchmarkReport:
    trials: int
    base_seed: int
    methods: dict[str, MethodSummary]

    def to_dict(self, timings: bool = False) -> dict:
        return {"trials": self.trials, "base_seed": self.base_seed,
                "methods": {k: v.to_dict(timings) for k, v in self.methods.items()}}

    def table(self) -> str:
        lines = [f"{'method':<8} {'avg':>6} {'max':>6} {'min':>6} {'fail':>5}"]
        for s in self.methods.values():
            lines.append(f"{s.method:<8} {100 * s.avg:6.1f} {100 * s.max:6.1f} {100 * s.min:6.1f} {s.failures:5d}")
        return "\n".join(lines)


def _trial(args):
    method, ds, seed, params = args
    t0 = time.perf_counter()
    try:
        if method == "fcm":
            cfg = FcmConfig(c=params["c"], beta=params["beta"], epsilon=params["fcm_epsilon"],
                            max_iters=params["max_iters"], seed=seed)
            # rank-naive baseline: integer ranks treated as coordinates
            res = fcm_run(ds.values.astype(float), cfg)
            w, iters = res.memberships, res.iterations
        elif method == "lmfcm":
            cfg = LmfcmConfig(c=params["c"], beta=params["beta"], epsilon=params["epsilon"],
                              max_iters=params["max_iters"], seed=seed, p_floor=params["p_floor"],
                              neighbor_rule=params["neighbor_rule"])
            res = lmfcm_run(ds.unlabeled(), cfg)
            w, iters = res.memberships, res.iterations
        else:
            raise ValueError(f"unknown method {method!r}")
        acc = accuracy(hard_assignment(w), ds.labels)
        return acc, iters, None, time.perf_counter() - t0
    except (ValueError, RuntimeError) as exc:
        return None, None, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0


def run_benchmark(ds: OrdinalDataset, methods=METHODS, trials: int = 50, base_seed: int = 0, *, c: int = 3,
                  beta: float = 2.0, epsilon: float = 1e-4, fcm_epsilon: float = 1e-5, max_iters: int = 300,
                  p_floor: float = 1e-6, neighbor_rule: bool = True, jobs: int = 1) -> BenchmarkReport:
    """Run every method for ``trials`` seeds (base_seed + t) and aggregate accuracy."""
    if ds.labels is None:
        raise ValueError("benchmark needs a labelled dataset")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ds.check()
    params = dict(c=c, beta=beta, epsilon=epsilon, fcm_epsilon=fcm_epsilon, max_iters=max_iters,
                  p_floor=p_floor, neighbor_rule=neighbor_rule)
    tasks = [(method, ds, base_seed + t, params) for method in methods for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_trial, tasks))
    else:
        outcomes = [_trial(task) for task in tasks]
    report = BenchmarkReport(trials, base_seed, {})
    for idx, method in enumerate(methods):
        chunk = outcomes[idx * trials:(idx + 1) * trials]
        report.methods[method] = MethodSummary(
            method,
            accuracies=[o[0] for o in chunk],
            seeds=[base_seed + t for t in range(trials)],
            iterations=[o[1] for o in chunk],
            errors=[o[2] for o in chunk],
            seconds=[o[3] for o in chunk],
        )
    return report
