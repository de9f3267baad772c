"""Frequency-based fuzzification of ranks and mode-anchored membership functions.

Each rank l of a feature is mapped to its averaged occurrence frequency

    c_l = f_1 + ... + f_{l-1} + f_l / 2,        f_l = N_l / N,

i.e. the midpoint of the rank's bar in the cumulative frequency histogram.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ordfuzzy.core import DataError, OrdinalDataset


@dataclass(frozen=True, eq=False)
class FuzzificationTable:
    """Rank counts, relative frequencies and averaged frequencies for one feature (index 0 = rank 1)."""

    counts: np.ndarray
    f: np.ndarray
    c: np.ndarray

    @property
    def m(self) -> int:
        return len(self.counts)

    def lookup(self, ranks) -> np.ndarray:
        ranks = np.asarray(ranks)
        if np.any((ranks < 1) | (ranks > self.m)):
            raise DataError(f"rank outside 1..{self.m}")
        return self.c[ranks - 1]

    def to_dict(self) -> dict:
        return {"counts": self.counts.tolist(), "f": self.f.tolist(), "c": self.c.tolist()}


def table_from_counts(counts) -> FuzzificationTable:
    counts = np.asarray(counts, dtype=np.int64)
    total = counts.sum()
    if total <= 0:
        raise DataError("no observations")
    f = counts / total
    c = np.empty_like(f)
    c[0] = 0.5 * f[0]
    for l in range(1, len(f)):
        c[l] = c[l - 1] + 0.5 * (f[l - 1] + f[l])
    for arr in (counts, f, c):
        arr.setflags(write=False)
    return FuzzificationTable(counts, f, c)


def build_table(ds: OrdinalDataset, k: int) -> FuzzificationTable:
    if ds.N < 1:
        raise DataError("no observations")
    m = ds.scales[k].m
    column = ds.values[:, k]
    if np.any((column < 1) | (column > m)):
        raise DataError(f"feature {k} has ranks outside 1..{m}")
    return table_from_counts(np.bincount(column - 1, minlength=m))


def build_tables(ds: OrdinalDataset) -> list[FuzzificationTable]:
    return [build_table(ds, k) for k in range(ds.n)]


def fuzzify_dataset(ds: OrdinalDataset, tables) -> np.ndarray:
    """Replace every rank by its feature's averaged occurrence frequency."""
    if len(tables) != ds.n:
        raise DataError(f"{len(tables)} tables for {ds.n} features")
    out = np.empty(ds.values.shape, dtype=float)
    for k, table in enumerate(tables):
        column = ds.values[:, k]
        bad = np.flatnonzero((column < 1) | (column > table.m))
        if bad.size:
            j = int(bad[0])
            raise DataError(f"observation {j}, feature {k}: rank {column[j]} outside table range 1..{table.m}")
        out[:, k] = table.c[column - 1]
    return out


@dataclass(frozen=True)
class MembershipFunction:
    """Asymmetric triangular membership function peaking at ``mode``.

    For a mode above 0.5 the left leg runs from (0, 0) to the peak and the
    right leg mirrors it; below 0.5 the right leg runs down to (1, 0) and the
    left leg mirrors that one. At exactly 0.5 both legs reach zero at the
    interval ends.
    """

    mode: float

    def __post_init__(self):
        if not 0.0 < self.mode < 1.0:
            raise ValueError(f"mode out of domain: {self.mode}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a = self.mode
        if a > 0.5:
            mu = np.where(x <= a, x / a, (2 * a - x) / a)
        elif a < 0.5:
            mu = np.where(x >= a, (1 - x) / (1 - a), (x - 2 * a + 1) / (1 - a))
        else:
            mu = np.where(x <= a, x / a, (1 - x) / (1 - a))
        mu = np.clip(mu, 0.0, 1.0)
        return mu if mu.ndim else float(mu)


def build_membership_fn(mode: float) -> MembershipFunction:
    return MembershipFunction(float(mode))


def mode_index(codes: np.ndarray, weights: np.ndarray, m: int) -> np.ndarray:
    """Index of the level with the largest summed weight, one per weight column.

    ``codes`` are 0-based level indices (N,), ``weights`` is (N,) or (N, c).
    Ties go to the smaller level.
    """
    weights = np.asarray(weights, dtype=float)
    squeeze = weights.ndim == 1
    if squeeze:
        weights = weights[:, None]
    totals = np.zeros((m, weights.shape[1]))
    np.add.at(totals, codes, weights)
    if np.any(totals.sum(axis=0) <= 0):
        raise ValueError("empty cluster")
    idx = np.argmax(totals, axis=0)
    return idx[0] if squeeze else idx


def weighted_mode(values, weights) -> float:
    """Value whose observations carry the largest total weight; ties go to the smaller value."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if values.shape != weights.shape:
        raise ValueError("values and weights differ in length")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    levels, codes = np.unique(values, return_inverse=True)
    return float(levels[mode_index(codes, weights, len(levels))])
