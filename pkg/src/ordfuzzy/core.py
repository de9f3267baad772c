"""Data model shared by the clustering engines: rank scales, ordinal datasets, membership matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class DataError(ValueError):
    """Raised when input data breaks the ordinal data model."""


@dataclass(frozen=True)
class RankScale:
    """Ordered category labels; the rank of a label is its 1-based position."""

    levels: tuple[str, ...]

    def __post_init__(self):
        levels = tuple(str(x) for x in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) < 1:
            raise DataError("a rank scale needs at least one level")
        if len(set(levels)) != len(levels):
            raise DataError(f"duplicate levels in scale {levels}")

    @classmethod
    def numeric(cls, m: int) -> "RankScale":
        return cls(tuple(str(r) for r in range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.levels)

    def rank(self, label: str) -> int:
        try:
            return self.levels.index(str(label)) + 1
        except ValueError:
            raise DataError(f"unknown category {label!r}; expected one of {self.levels}") from None

    def label(self, rank: int) -> str:
        if not 1 <= rank <= self.m:
            raise DataError(f"rank {rank} outside 1..{self.m}")
        return self.levels[rank - 1]


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    index: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class OrdinalDataset:
    """N observations by n ordinal features stored as 1-based ranks.

    ``labels`` holds true class indices and is only read by evaluation code.
    The constructor does not validate; call :func:`validate_dataset` or
    :meth:`check` before handing the data to an engine.
    """

    values: np.ndarray
    scales: tuple[RankScale, ...]
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64, copy=True)
        if values.ndim == 1:
            values = values[:, None]
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "scales", tuple(self.scales))
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64, copy=True).ravel()
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
        names = tuple(self.feature_names) or tuple(f"x{k + 1}" for k in range(values.shape[1]))
        object.__setattr__(self, "feature_names", names)

    @classmethod
    def from_ranks(cls, values, scales=None, labels=None, feature_names=()) -> "OrdinalDataset":
        """Wrap an integer rank matrix; scales default to 1..max rank per feature."""
        values = np.asarray(values, dtype=np.int64)
        if values.ndim == 1:
            values = values[:, None]
        if scales is None:
            scales = [RankScale.numeric(max(int(values[:, k].max(initial=1)), 1)) for k in range(values.shape[1])]
        return cls(values, tuple(scales), labels, tuple(feature_names))

    @classmethod
    def from_labels(cls, rows: Sequence[Sequence[str]], scales: Sequence[RankScale], labels=None,
                    feature_names=()) -> "OrdinalDataset":
        """Encode category labels into ranks through each feature's scale."""
        values = [[scale.rank(cell) for cell, scale in zip(row, scales)] for row in rows]
        return cls(np.array(values, dtype=np.int64).reshape(len(rows), len(scales)), tuple(scales), labels,
                   tuple(feature_names))

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(s.m for s in self.scales)

    def decode(self) -> list[list[str]]:
        return [[s.label(int(r)) for r, s in zip(row, self.scales)] for row in self.values]

    def unlabeled(self) -> "OrdinalDataset":
        return OrdinalDataset(self.values, self.scales, None, self.feature_names)

    def check(self) -> None:
        problems = validate_dataset(self)
        if problems:
            raise DataError("; ".join(p.message for p in problems))


def validate_dataset(ds: OrdinalDataset) -> list[Violation]:
    """Return one violation per broken dataset invariant (empty if valid)."""
    out = []
    N, n = ds.values.shape
    if N < 1:
        out.append(Violation("empty", "dataset has no observations"))
    if n < 1:
        out.append(Violation("no-features", "dataset has no features"))
    if len(ds.scales) != n:
        out.append(Violation("scale-count", f"{len(ds.scales)} scales for {n} features"))
    for k, scale in enumerate(ds.scales[:n]):
        bad = np.flatnonzero((ds.values[:, k] < 1) | (ds.values[:, k] > scale.m))
        for j in bad:
            out.append(Violation("out-of-range",
                                 f"observation {j}, feature {k}: rank {ds.values[j, k]} outside 1..{scale.m}",
                                 (int(j), k)))
    if ds.labels is not None and len(ds.labels) != N:
        out.append(Violation("label-length", f"{len(ds.labels)} labels for {N} observations"))
    return out


def check_memberships(w: np.ndarray, tol: float = 1e-9) -> None:
    """Raise ValueError unless ``w`` (N x c) is nonnegative and row-stochastic."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2:
        raise ValueError("membership matrix must be 2-D (N x c)")
    if np.any(w < 0) or np.any(w > 1 + tol):
        raise ValueError("memberships must lie in [0, 1]")
    if np.any(np.abs(w.sum(axis=1) - 1.0) > tol):
        raise ValueError("membership rows must sum to 1")
    if np.any(w.sum(axis=0) <= 0):
        raise ValueError("every cluster needs positive total membership")


def hard_assignment(w: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the smallest cluster index on ties.
    return np.argmax(np.asarray(w), axis=1)
