import itertools

import numpy as np
import pytest

from ordfuzzy import OrdinalDataset


def planted_dataset(per_group=8, n=3, m=3, low=1, high=3):
    """Two pure rank profiles: ``per_group`` rows all at ``low`` then all at ``high``."""
    values = np.vstack([np.full((per_group, n), low), np.full((per_group, n), high)])
    labels = np.repeat([0, 1], per_group)
    return OrdinalDataset.from_ranks(values, labels=labels)


def tri_membership(mode, x):
    # independent restatement of the three mode-anchored cases
    if mode > 0.5:
        return x / mode if x <= mode else (2 * mode - x) / mode
    if mode < 0.5:
        return (1 - x) / (1 - mode) if x >= mode else (x - 2 * mode + 1) / (1 - mode)
    return x / mode if x <= mode else (1 - x) / (1 - mode)


def averaged_frequencies_bruteforce(sample, m):
    """Sort the sample, count runs, then c_l = (#below l + #at l / 2) / N."""
    s = sorted(sample)
    N = len(s)
    out = []
    for l in range(1, m + 1):
        below = sum(1 for v in s if v < l)
        at = sum(1 for v in s if v == l)
        out.append((below + at / 2) / N)
    return out


def best_two_partitions_by_likelihood(X):
    """Exhaustive search over crisp 2-partitions maximising the summed likelihood.

    ``X`` holds fuzzified rows; each group's mode per feature is its most
    frequent value (smaller value on ties). Returns the set of optimal
    partitions as frozensets of the indices in the group containing 0.
    """
    N, n = X.shape
    best, arg = -np.inf, set()
    for bits in itertools.product([0, 1], repeat=N - 1):
        g = np.array((0,) + bits)
        if g.min() == g.max():
            continue
        total = 0.0
        for grp in (0, 1):
            rows = X[g == grp]
            modes = []
            for k in range(n):
                vals, counts = np.unique(rows[:, k], return_counts=True)
                modes.append(vals[np.argmax(counts)])
            for row in rows:
                total += np.prod([max(tri_membership(mk, xk), 0.0) for mk, xk in zip(modes, row)])
        key = frozenset(np.flatnonzero(g == 0).tolist())
        if total > best + 1e-12:
            best, arg = total, {key}
        elif abs(total - best) <= 1e-12:
            arg.add(key)
    return best, arg


def best_two_partitions_by_sse(points):
    N = len(points)
    best, arg = np.inf, None
    for bits in itertools.product([0, 1], repeat=N - 1):
        g = np.array((0,) + bits)
        if g.min() == g.max():
            continue
        sse = sum(((points[g == k] - points[g == k].mean(axis=0)) ** 2).sum() for k in (0, 1))
        if sse < best:
            best, arg = sse, frozenset(np.flatnonzero(g == 0).tolist())
    return best, arg


def random_stochastic(rng, N, c):
    w = rng.random((N, c))
    return w / w.sum(axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
