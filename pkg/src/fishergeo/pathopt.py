"""Discrete geodesics by path-energy minimization under a Riemannian metric.

A path is a polyline of ``segments + 1`` nodes with fixed endpoints. Each
segment's squared length and length are integrated with Simpson's rule in
the metric (endpoints and midpoint), so a segment only depends on its two
nodes. Interior nodes are refined by damped Gauss-Newton steps on the path
energy; a step is accepted only if it lowers the energy without raising the
polyline length, which makes the reported length non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

MetricField = Callable[[np.ndarray], np.ndarray]
"""Maps an ``(m, n)`` array of points to the ``(m, n, n)`` metric tensors."""


@dataclass
class PathResult:
    length: float
    nodes: np.ndarray
    iterations: int
    converged: bool
    history: list = field(default_factory=list)
    rejected_steps: int = 0


def _quad_forms(metric: MetricField, a: np.ndarray, b: np.ndarray):
    d = b - a
    pts = np.concatenate([a, 0.5 * (a + b), b])
    G = metric(pts).reshape(3, len(a), a.shape[1], a.shape[1])
    q = np.einsum("ki,skij,kj->sk", d, G, d)
    return q, G


def segment_terms(metric: MetricField, nodes: np.ndarray):
    """Simpson squared lengths and lengths of every segment."""
    q, _ = _quad_forms(metric, nodes[:-1], nodes[1:])
    q = np.maximum(q, 0.0)
    sq = (q[0] + 4.0 * q[1] + q[2]) / 6.0
    ln = (np.sqrt(q[0]) + 4.0 * np.sqrt(q[1]) + np.sqrt(q[2])) / 6.0
    return sq, ln


def path_length(metric: MetricField, nodes: np.ndarray) -> float:
    return float(np.sum(segment_terms(metric, nodes)[1]))


def path_energy(metric: MetricField, nodes: np.ndarray) -> float:
    n_seg = len(nodes) - 1
    return float(n_seg * np.sum(segment_terms(metric, nodes)[0]))


def _energy_gradient(metric, nodes, fd_step):
    """Finite-difference energy gradient for all interior nodes.

    Nodes of one parity are perturbed together; every segment touches exactly
    one node of each parity, so per-segment changes are attributable.
    """
    n_seg = len(nodes) - 1
    dim = nodes.shape[1]
    grad = np.zeros_like(nodes)
    interior = np.arange(1, n_seg)
    for parity in (0, 1):
        idx = interior[interior % 2 == parity]
        if idx.size == 0:
            continue
        for j in range(dim):
            h = fd_step * np.maximum(1.0, np.abs(nodes[idx, j]))
            plus = nodes.copy()
            minus = nodes.copy()
            plus[idx, j] += h
            minus[idx, j] -= h
            sp, _ = segment_terms(metric, plus)
            sm, _ = segment_terms(metric, minus)
            diff = n_seg * (sp - sm)
            # node k owns segments k-1 and k
            grad[idx, j] = (diff[idx - 1] + diff[idx]) / (2.0 * h)
    return grad[1:-1]


def _gauss_newton_system(metric, nodes, frozen):
    """Banded Gauss-Newton Hessian of the energy (metric held fixed per segment)."""
    n_seg = len(nodes) - 1
    dim = nodes.shape[1]
    _, G = _quad_forms(metric, nodes[:-1], nodes[1:])
    Gbar = (G[0] + 4.0 * G[1] + G[2]) / 6.0
    m = n_seg - 1
    size = m * dim
    bw = 2 * dim - 1
    ab = np.zeros((2 * bw + 1, size))
    def put(r, c, v):
        ab[bw + r - c, c] += v
    for k in range(m):
        diag = 2.0 * n_seg * (Gbar[k] + Gbar[k + 1])
        for a in range(dim):
            for b in range(dim):
                put(k * dim + a, k * dim + b, diag[a, b])
        if k + 1 < m:
            off = -2.0 * n_seg * Gbar[k + 1]
            for a in range(dim):
                for b in range(dim):
                    put(k * dim + a, (k + 1) * dim + b, off[a, b])
                    put((k + 1) * dim + b, k * dim + a, off[a, b])
    if frozen is not None:
        for r in np.flatnonzero(frozen[1:-1].ravel()):
            ab[:, r] = 0.0
            lo, hi = max(0, r - bw), min(size, r + bw + 1)
            for c in range(lo, hi):
                ab[bw + r - c, c] = 0.0
            ab[bw, r] = 1.0
    scale = np.max(np.abs(ab[bw])) if size else 1.0
    ab[bw] += 1e-12 * scale
    return ab, bw


def minimize_path_energy(
    metric: MetricField,
    start,
    end,
    segments: int = 64,
    iterations: int = 500,
    initial: Optional[np.ndarray] = None,
    feasible: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    frozen: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    tol: float = 1e-13,
    fd_step: float = 1e-6,
    max_halvings: int = 40,
) -> PathResult:
    """Refine a polyline from ``start`` to ``end`` toward a geodesic.

    ``feasible(nodes)`` returns a boolean per node; a trial step that makes
    any node infeasible is rejected and halved. ``frozen(nodes)`` returns a
    boolean ``(m, n)`` mask of coordinates held fixed during a step.
    """
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    if initial is None:
        s = np.linspace(0.0, 1.0, segments + 1)[:, None]
        nodes = (1.0 - s) * start + s * end
    else:
        nodes = np.array(initial, dtype=float)
        segments = len(nodes) - 1
        nodes[0], nodes[-1] = start, end
    dim = nodes.shape[1]

    energy = path_energy(metric, nodes)
    length = path_length(metric, nodes)
    history = [length]
    if segments < 2 or np.allclose(start, end, rtol=0.0, atol=0.0):
        return PathResult(length, nodes, 0, True, history)

    converged = False
    rejected = 0
    it = 0
    for it in range(1, iterations + 1):
        mask = frozen(nodes) if frozen is not None else None
        grad = _energy_gradient(metric, nodes, fd_step)
        if mask is not None:
            grad[mask[1:-1]] = 0.0
        ab, bw = _gauss_newton_system(metric, nodes, mask)
        step = -solve_banded((bw, bw), ab, grad.ravel()).reshape(-1, dim)
        decrease = -float(np.sum(grad * step))
        if not np.all(np.isfinite(step)) or decrease <= tol * max(energy, 1.0):
            converged = True
            history.append(length)
            break
        alpha = 1.0
        accepted = False
        for _ in range(max_halvings):
            trial = nodes.copy()
            trial[1:-1] += alpha * step
            if feasible is None or np.all(feasible(trial)):
                e_trial = path_energy(metric, trial)
                l_trial = path_length(metric, trial)
                if e_trial < energy and l_trial <= length:
                    nodes, energy, length = trial, e_trial, l_trial
                    accepted = True
                    break
            rejected += 1
            alpha *= 0.5
        history.append(length)
        if not accepted:
            converged = True
            break
    return PathResult(length, nodes, it, converged, history, rejected)
