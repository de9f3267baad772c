"""Likelihood/membership-sharing fuzzy c-means (LMFCM) for ordinal data.

Observations are fuzzified to averaged occurrence frequencies. Each cluster
keeps a mode per feature; the membership function anchored at that mode
gives the conditional probability of an observed value, the product over
features is the likelihood, and its negative log replaces the squared
distance of ordinary FCM.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ordfuzzy.core import OrdinalDataset
from ordfuzzy.fcm import DegenerateClusterError
from ordfuzzy.fuzzify import FuzzificationTable, MembershipFunction, build_tables, fuzzify_dataset, mode_index

log = logging.getLogger(__name__)

MAX_RESTARTS = 5


@dataclass(frozen=True)
class LmfcmConfig:
    c: int = 2
    beta: float = 2.0
    epsilon: float = 1e-4
    max_iters: int = 300
    seed: int | None = 0
    p_floor: float = 1e-6
    neighbor_rule: bool = True

    def __post_init__(self):
        # c == 1 is accepted: the run degenerates to a single crisp cluster.
        if self.c < 1:
            raise ValueError("need at least one cluster")
        if not self.beta > 1:
            raise ValueError("fuzzifier beta must exceed 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not 0 < self.p_floor <= 1e-3:
            raise ValueError("p_floor must lie in (0, 1e-3]")


@dataclass
class LmfcmState:
    p: np.ndarray  # c x N x n conditional probabilities
    U: np.ndarray  # c x N dissimilarities
    w: np.ndarray  # N x c memberships
    modes: np.ndarray  # c x n
    cluster_order: np.ndarray  # cluster indices sorted by mean mode


@dataclass
class LmfcmResult:
    state: LmfcmState
    fuzzy_memberships: np.ndarray  # memberships before neighbour reassignment
    tables: list[FuzzificationTable]
    fuzzified: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    restarts: int = 0
    coincident_modes: bool = False  # two clusters ended with the same mode vector

    @property
    def memberships(self) -> np.ndarray:
        return self.state.w


def likelihood(p_row) -> float:
    p = np.asarray(p_row, dtype=float)
    if np.any(p <= 0):
        raise ValueError("probabilities must be positive")
    return float(np.prod(p))


def dissimilarity(p_row) -> float:
    """Negative log-likelihood of one observation under one cluster."""
    p = np.asarray(p_row, dtype=float)
    if np.any(p <= 0):
        raise ValueError("probabilities must be positive")
    return float(-np.sum(np.log(p)))


def _dissimilarities(p: np.ndarray) -> np.ndarray:
    return -np.log(p).sum(axis=-1)


def lmfcm_memberships(U, beta: float = 2.0) -> np.ndarray:
    """N x c memberships from c x N dissimilarities.

    Observations with zero dissimilarity to some cluster go crisply to the
    first such cluster.
    """
    U = np.asarray(U, dtype=float)
    if np.any(U < 0):
        raise ValueError("dissimilarities must be nonnegative")
    Ut = U.T
    w = np.zeros_like(Ut)
    zero = Ut == 0
    hit = zero.any(axis=1)
    w[np.flatnonzero(hit), np.argmax(zero[hit], axis=1)] = 1.0
    rest = ~hit
    if rest.any():
        inv = Ut[rest] ** (-1.0 / (beta - 1))
        w[rest] = inv / inv.sum(axis=1, keepdims=True)
    return w


def update_probabilities(fuzzified, w, p_floor: float = 1e-6):
    """Recompute cluster modes from memberships and the probabilities they imply.

    Returns ``(p, modes)`` with p of shape c x N x n and modes c x n.
    """
    X = np.asarray(fuzzified, dtype=float)
    w = np.asarray(w, dtype=float)
    N, n = X.shape
    c = w.shape[1]
    if np.any(w.sum(axis=0) <= 0):
        raise DegenerateClusterError("empty cluster")
    modes = np.empty((c, n))
    p = np.empty((c, N, n))
    for k in range(n):
        levels, codes = np.unique(X[:, k], return_inverse=True)
        modes[:, k] = levels[mode_index(codes, w, len(levels))]
        for i in range(c):
            p[i, :, k] = MembershipFunction(modes[i, k])(X[:, k])
    np.maximum(p, p_floor, out=p)
    return p, modes


def objective(U, w, beta: float = 2.0) -> float:
    """Sum over clusters and observations of w^beta times dissimilarity."""
    return float(np.sum(np.asarray(w).T ** beta * np.asarray(U)))


def cluster_order(modes) -> np.ndarray:
    return np.argsort(np.asarray(modes).mean(axis=1), kind="stable")


def neighbor_reassign(x, modes, order) -> np.ndarray:
    """Split one observation between its nearest mode and the closer order-neighbour of it.

    Weights are proportional to inverse squared distances; all other
    clusters get zero.
    """
    modes = np.asarray(modes, dtype=float)
    order = list(np.asarray(order))
    c = modes.shape[0]
    if c < 2:
        raise ValueError("neighbour reassignment needs at least two clusters")
    d = np.sqrt(((modes - np.asarray(x, dtype=float)) ** 2).sum(axis=1))
    i = int(np.argmin(d))
    out = np.zeros(c)
    if d[i] == 0:
        out[i] = 1.0
        return out
    pos = order.index(i)
    candidates = [order[q] for q in (pos - 1, pos + 1) if 0 <= q < c]
    l = min(candidates, key=lambda q: d[q])
    near, far = d[i] ** -2, d[l] ** -2
    out[i] = near / (near + far)
    out[l] = far / (near + far)
    return out


def _attempt(X, config: LmfcmConfig, rng: np.random.Generator, result: LmfcmResult):
    c, (N, n) = config.c, X.shape
    p = rng.uniform(config.p_floor, 1.0, size=(c, N, n))
    U = _dissimilarities(p)
    w = lmfcm_memberships(U, config.beta)
    modes = None
    trace = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        p, modes = update_probabilities(X, w, config.p_floor)
        U = _dissimilarities(p)
        w_new = lmfcm_memberships(U, config.beta)
        if np.any(w_new.sum(axis=0) <= 0):
            raise DegenerateClusterError(f"cluster emptied at iteration {it}")
        trace.append(objective(U, w_new, config.beta))
        delta = np.max(np.abs(w_new - w))
        w = w_new
        if delta <= config.epsilon:
            converged = True
            break
    result.objective_trace, result.iterations, result.converged = trace, it, converged
    return p, U, w, modes


def lmfcm_run(ds: OrdinalDataset, config: LmfcmConfig = LmfcmConfig()) -> LmfcmResult:
    """Cluster an ordinal dataset; deterministic for a fixed ``config.seed``."""
    ds = ds.unlabeled()
    ds.check()
    if ds.N < config.c:
        raise ValueError(f"need at least c={config.c} observations, got {ds.N}")
    tables = build_tables(ds)
    X = fuzzify_dataset(ds, tables)
    result = LmfcmResult(None, None, tables, X)
    seed_seq = np.random.SeedSequence(config.seed)
    fit = None
    for attempt, child in enumerate(seed_seq.spawn(MAX_RESTARTS + 1)):
        try:
            fit = _attempt(X, config, np.random.default_rng(child), result)
        except DegenerateClusterError as exc:
            log.info("restart %d after degenerate cluster: %s", attempt + 1, exc)
            continue
        # clusters sharing a mode vector are indistinguishable: retry, keep the last one if all collapse
        if len(np.unique(fit[3], axis=0)) == config.c:
            break
        log.info("restart %d after coincident cluster modes", attempt + 1)
    if fit is None:
        raise DegenerateClusterError(f"degenerate cluster persisted after {MAX_RESTARTS} restarts")
    p, U, w, modes = fit
    result.coincident_modes = len(np.unique(modes, axis=0)) < config.c
    if result.coincident_modes:
        log.warning("clusters still share mode vectors after %d restarts", MAX_RESTARTS)
    result.restarts = attempt
    order = cluster_order(modes)
    result.fuzzy_memberships = w
    if config.neighbor_rule and config.c >= 2:
        w = np.array([neighbor_reassign(x, modes, order) for x in X])
    result.state = LmfcmState(p, U, w, modes, order)
    return result
