"""Classic fuzzy c-means over real-valued points (Euclidean distance)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DegenerateClusterError(RuntimeError):
    """A cluster lost all of its membership mass."""


@dataclass(frozen=True)
class FcmConfig:
    c: int = 2
    beta: float = 2.0
    epsilon: float = 1e-5
    max_iters: int = 300
    seed: int | None = 0

    def __post_init__(self):
        if self.c < 2:
            raise ValueError("FCM needs c >= 2")
        if not self.beta > 1:
            raise ValueError("fuzzifier beta must exceed 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass
class FcmResult:
    memberships: np.ndarray
    centroids: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _sq_distances(points, centroids):
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("jik,jik->ji", diff, diff)


def fcm_objective(points, centroids, w, beta) -> float:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return float(np.sum(w ** beta * _sq_distances(points, np.atleast_2d(centroids))))


def fcm_memberships(points, centroids, beta: float = 2.0) -> np.ndarray:
    """Optimal N x c memberships for fixed centroids.

    A point sitting exactly on a centroid is assigned crisply to it (lowest
    index if several centroids coincide with the point).
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim == 1:
        centroids = centroids[:, None]
    d2 = _sq_distances(points, centroids)
    w = np.zeros_like(d2)
    zero = d2 == 0
    hit = zero.any(axis=1)
    w[np.flatnonzero(hit), np.argmax(zero[hit], axis=1)] = 1.0
    rest = ~hit
    if rest.any():
        # (d_i / d_l)^(2/(beta-1)) written on squared distances
        inv = d2[rest] ** (-1.0 / (beta - 1))
        w[rest] = inv / inv.sum(axis=1, keepdims=True)
    return w


def fcm_centroids(points, w, beta: float = 2.0) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    wb = np.asarray(w, dtype=float) ** beta
    mass = wb.sum(axis=0)
    for i in np.flatnonzero(mass <= 0):
        raise DegenerateClusterError(f"degenerate cluster {i}")
    return (wb.T @ points) / mass[:, None]


def random_memberships(rng: np.random.Generator, N: int, c: int) -> np.ndarray:
    w = rng.random((N, c))
    return w / w.sum(axis=1, keepdims=True)


def fcm_run(points, config: FcmConfig = FcmConfig()) -> FcmResult:
    """Alternate centroid and membership updates from a seeded random partition."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    N = points.shape[0]
    if N < config.c:
        raise ValueError(f"need at least c={config.c} points, got {N}")
    rng = np.random.default_rng(config.seed)
    w = random_memberships(rng, N, config.c)
    v = fcm_centroids(points, w, config.beta)
    result = FcmResult(w, v)
    for it in range(1, config.max_iters + 1):
        w_new = fcm_memberships(points, v, config.beta)
        result.objective_trace.append(fcm_objective(points, v, w_new, config.beta))
        delta = np.max(np.abs(w_new - w))
        w = w_new
        v = fcm_centroids(points, w, config.beta)
        result.iterations = it
        if delta < config.epsilon:
            result.converged = True
            break
    result.memberships, result.centroids = w, v
    return result
