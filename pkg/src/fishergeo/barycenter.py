"""Fisher-Rao averages and clustering of univariate normals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import hyperbolic as hyp
from .errors import InvalidParameter
from .univariate import GaussianUni, _as_gaussian, fisher_distance, psi, psi_inv

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
DEFAULT_RESTARTS = 8


class WeightedSet:
    """Distributions with positive weights, normalized to sum to one."""

    def __init__(self, points: Sequence, weights: Optional[Sequence[float]] = None):
        pts = [_as_gaussian(p) for p in points]
        if not pts:
            raise InvalidParameter("weighted set must be nonempty")
        if weights is None:
            w = np.full(len(pts), 1.0 / len(pts))
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (len(pts),):
                raise InvalidParameter("weights and points must have equal lengths")
            if not (np.all(np.isfinite(w)) and np.all(w > 0)):
                raise InvalidParameter("weights must be positive")
            w = w / w.sum()
        self.points = pts
        self.weights = w

    def __len__(self):
        return len(self.points)


@dataclass
class KarcherResult:
    mean: GaussianUni
    iterations: int
    residual: float
    converged: bool


def _initial_guess(images, w):
    x = float(np.dot(w, [p.x for p in images]))
    y = math.exp(float(np.dot(w, [math.log(p.y) for p in images])))
    return hyp.HPoint(x, y)


def _objective_h(m, images, w) -> float:
    return float(sum(wi * hyp.h_distance(m, img) ** 2 for wi, img in zip(w, images)))


def _newton_direction(m, images, w):
    """Mean of the logarithms and its Hessian-preconditioned version.

    Works in the orthonormal frame at ``m`` (ambient components over ``y``).
    In curvature -1 the Hessian of half the squared distance to a point at
    distance ``d`` is 1 along the geodesic and ``d coth d`` across it.
    """
    g = np.zeros(2)
    H = np.zeros((2, 2))
    for wi, img in zip(w, images):
        e = np.asarray(hyp.h_log(m, img).v) / m.y
        d = math.hypot(*e)
        g += wi * e
        if d > 1e-8:
            u = e / d
            across = d / math.tanh(d)
            H += wi * (np.outer(u, u) + across * (np.eye(2) - np.outer(u, u)))
        else:
            H += wi * np.eye(2)
    return g, np.linalg.solve(H, g)


def karcher_mean(
    points: WeightedSet,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> KarcherResult:
    """Weighted Fisher-Rao barycenter.

    Iterates ``m <- exp_m(step)`` in the rescaled half-plane, where ``step``
    is the weighted mean of ``log_m`` of the points, preconditioned by the
    Hessian of the objective and shortened until the objective decreases.
    Stops when the Fisher norm of the mean logarithm (``residual``) drops
    below ``tol``. If ``max_iter`` runs out, the best iterate is returned
    with ``converged=False``.
    """
    if not isinstance(points, WeightedSet):
        points = WeightedSet(points)
    images = [psi(p) for p in points.points]
    w = points.weights
    if len(images) == 1:
        return KarcherResult(points.points[0], 0, 0.0, True)

    m = _initial_guess(images, w)
    f = _objective_h(m, images, w)
    best = (math.inf, m)
    for it in range(max_iter + 1):
        g, step = _newton_direction(m, images, w)
        # Fisher length is sqrt2 times the half-plane length
        residual = math.sqrt(2.0) * math.hypot(*g)
        if residual < best[0]:
            best = (residual, m)
        if residual < tol:
            return KarcherResult(psi_inv(m), it, residual, True)
        if it == max_iter:
            break
        alpha = 1.0
        for _ in range(60):
            trial = hyp.h_exp(hyp.HTangent(m, alpha * m.y * step))
            f_trial = _objective_h(trial, images, w)
            if f_trial <= f:
                break
            alpha *= 0.5
        if trial == m:
            break
        m, f = trial, f_trial
    return KarcherResult(psi_inv(best[1]), it, best[0], best[0] < tol)


def karcher_objective(m: GaussianUni, points: WeightedSet) -> float:
    """Weighted sum of squared Fisher distances from ``m``."""
    return float(sum(wi * fisher_distance(m, p) ** 2 for wi, p in zip(points.weights, points.points)))


@dataclass
class ClusterResult:
    assignments: list
    centroids: list
    within_dispersion: float
    iterations: int = 0
    history: list = field(default_factory=list)


def _distance_matrix(points, centroids) -> np.ndarray:
    return np.array([[fisher_distance(p, c) for c in centroids] for p in points])


def _seed(points, k, rng) -> list:
    """k-means++ seeding under the Fisher distance."""
    n = len(points)
    chosen = [int(rng.integers(n))]
    d2 = np.array([fisher_distance(p, points[chosen[0]]) ** 2 for p in points])
    while len(chosen) < k:
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = next(i for i in range(n) if i not in chosen)
        chosen.append(idx)
        d2 = np.minimum(d2, [fisher_distance(p, points[idx]) ** 2 for p in points])
    return [points[i] for i in chosen]


def _dispersion(points, centroids, assign) -> float:
    return float(sum(fisher_distance(p, centroids[a]) ** 2 for p, a in zip(points, assign)))


def _lloyd(points, centroids, max_iter, tol):
    assign = None
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        D = _distance_matrix(points, centroids)
        new_assign = np.argmin(D, axis=1)
        # empty clusters take the point farthest from its centroid
        for j in range(len(centroids)):
            if not np.any(new_assign == j):
                far = int(np.argmax(D[np.arange(len(points)), new_assign]))
                centroids[j] = points[far]
                D[:, j] = [fisher_distance(p, centroids[j]) for p in points]
                new_assign = np.argmin(D, axis=1)
        history.append(float(np.sum(D[np.arange(len(points)), new_assign] ** 2)))
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(len(centroids)):
            members = [p for p, a in zip(points, assign) if a == j]
            if not members:
                continue
            cand = karcher_mean(WeightedSet(members), tol=tol).mean
            group = WeightedSet(members)
            if karcher_objective(cand, group) <= karcher_objective(centroids[j], group):
                centroids[j] = cand
    assign = np.argmin(_distance_matrix(points, centroids), axis=1)
    return [int(a) for a in assign], centroids, it, history


def cluster(
    points: Sequence,
    k: int,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = 100,
    tol: float = DEFAULT_TOL,
) -> ClusterResult:
    """Lloyd clustering with Fisher distances and Karcher-mean centroids.

    Deterministic for a given ``seed``; the restart with the lowest
    within-cluster sum of squared distances wins (earliest on ties).
    """
    pts = [_as_gaussian(p) for p in points]
    if not 1 <= k <= len(pts):
        raise InvalidParameter("k must satisfy 1 <= k <= number of points")
    if restarts < 1:
        raise InvalidParameter("restarts must be at least 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        centroids = _seed(pts, k, rng)
        assign, centroids, iters, history = _lloyd(pts, centroids, max_iter, tol)
        disp = _dispersion(pts, centroids, assign)
        if best is None or disp < best.within_dispersion:
            best = ClusterResult(assign, centroids, disp, iters, history)
    return best
