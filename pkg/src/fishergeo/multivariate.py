"""Fisher distances between multivariate normal distributions.

Closed forms exist for scalar (round) and diagonal covariances, for a common
mean with arbitrary SPD covariances, and for the axis-aligned fixed-mean
slice of the 5-parameter bivariate family. Everywhere else the bivariate
distance is estimated numerically by path-energy minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, eigvalsh, solve_triangular

from . import hyperbolic as hyp
from .errors import (
    DimensionMismatch,
    InvalidCovariance,
    InvalidParameter,
    NotOnSubmanifold,
    NumericFailure,
)
from .pathopt import PathResult, minimize_path_energy
from .univariate import SQRT2

SPD_SYM_RTOL = 1e-12
SPD_COND_RTOL = 1e-12
SIGMA_FLOOR = 1e-8
ROUND_RTOL = 1e-10


def _vector(values, name) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidParameter(f"{name} must be a nonempty vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{name} must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class RoundGaussian:
    """Normal with covariance ``sigma^2 I``."""

    mu: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "mu", _vector(self.mu, "mu"))
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidParameter("sigma must be positive")

    @property
    def p(self) -> int:
        return self.mu.size


@dataclass(frozen=True, eq=False)
class DiagonalGaussian:
    """Normal with covariance ``diag(sigma_1^2, ..., sigma_p^2)``."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = _vector(self.mu, "mu")
        sigma = _vector(self.sigma, "sigma")
        if mu.size != sigma.size:
            raise DimensionMismatch("mu and sigma must have the same length")
        if not np.all(sigma > 0):
            raise InvalidParameter("sigma must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def p(self) -> int:
        return self.mu.size


def check_spd(S, name: str = "covariance") -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim == 0:
        S = S.reshape(1, 1)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidCovariance(f"{name} must be a square matrix")
    if not np.all(np.isfinite(S)):
        raise InvalidCovariance(f"{name} must be finite")
    scale = np.max(np.abs(S))
    if np.max(np.abs(S - S.T)) > SPD_SYM_RTOL * max(scale, np.finfo(float).tiny):
        raise InvalidCovariance(f"{name} must be symmetric")
    w = eigvalsh(S)
    if not (w[-1] > 0 and w[0] > SPD_COND_RTOL * w[-1]):
        raise InvalidCovariance(f"{name} must be positive definite")
    return 0.5 * (S + S.T)


@dataclass(frozen=True, eq=False)
class FixedMeanGaussian:
    mu: np.ndarray
    Sigma: np.ndarray

    def __post_init__(self):
        mu = _vector(self.mu, "mu")
        Sigma = check_spd(self.Sigma)
        if Sigma.shape[0] != mu.size:
            raise DimensionMismatch("covariance size does not match mean length")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "Sigma", Sigma)

    @property
    def p(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class BivariateAngular:
    """Bivariate normal ``(sigma1, sigma2, mu1, mu2, u)``.

    The covariance is ``R(u) diag(sigma1^2, sigma2^2) R(u)^T`` with
    ``R(u)`` the counterclockwise rotation by ``u``.
    """

    sigma1: float
    sigma2: float
    mu1: float
    mu2: float
    u: float

    def __post_init__(self):
        vals = (self.sigma1, self.sigma2, self.mu1, self.mu2, self.u)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameter("parameters must be finite")
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise InvalidParameter("sigma must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma1, self.sigma2, self.mu1, self.mu2, self.u])

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.mu1, self.mu2])

    @property
    def covariance(self) -> np.ndarray:
        c, s = math.cos(self.u), math.sin(self.u)
        R = np.array([[c, -s], [s, c]])
        return R @ np.diag([self.sigma1 ** 2, self.sigma2 ** 2]) @ R.T


def _same_p(P, Q):
    if P.p != Q.p:
        raise DimensionMismatch(f"dimension mismatch: {P.p} vs {Q.p}")


def fisher_distance_round(P: RoundGaussian, Q: RoundGaussian) -> float:
    _same_p(P, Q)
    k = math.sqrt(2.0 * P.p)
    return k * hyp.h_distance_halfspace(
        hyp.HalfSpacePoint(P.mu / k, P.sigma), hyp.HalfSpacePoint(Q.mu / k, Q.sigma)
    )


def fisher_distance_diagonal(P: DiagonalGaussian, Q: DiagonalGaussian) -> float:
    """Product-metric distance: root sum of squares of per-coordinate distances."""
    _same_p(P, Q)
    total = 0.0
    for i in range(P.p):
        d = hyp.h_distance(
            hyp.HPoint(P.mu[i] / SQRT2, P.sigma[i]), hyp.HPoint(Q.mu[i] / SQRT2, Q.sigma[i])
        )
        total += 2.0 * d * d
    return math.sqrt(total)


def generalized_eigenvalues(S1, S2) -> np.ndarray:
    """Eigenvalues of ``S1^{-1} S2`` via the symmetric form ``L^{-1} S2 L^{-T}``."""
    S1 = check_spd(S1, "first covariance")
    S2 = check_spd(S2, "second covariance")
    if S1.shape != S2.shape:
        raise DimensionMismatch(f"dimension mismatch: {S1.shape[0]} vs {S2.shape[0]}")
    L = cholesky(S1, lower=True)
    A = solve_triangular(L, S2, lower=True)
    M = solve_triangular(L, A.T, lower=True)
    return eigvalsh(0.5 * (M + M.T))


def fisher_distance_fixed_mean(S1, S2) -> float:
    """Distance between two normals sharing a mean, from their covariances.

    Also accepts :class:`FixedMeanGaussian` arguments, whose means must agree.
    """
    if isinstance(S1, FixedMeanGaussian) or isinstance(S2, FixedMeanGaussian):
        if not (isinstance(S1, FixedMeanGaussian) and isinstance(S2, FixedMeanGaussian)):
            raise InvalidParameter("mix of FixedMeanGaussian and raw matrices")
        _same_p(S1, S2)
        if not np.array_equal(S1.mu, S2.mu):
            raise NotOnSubmanifold("fixed-mean distance requires equal means")
        S1, S2 = S1.Sigma, S2.Sigma
    lam = generalized_eigenvalues(S1, S2)
    return math.sqrt(0.5 * float(np.sum(np.log(lam) ** 2)))


def fisher_distance_diag_u0(P: BivariateAngular, Q: BivariateAngular) -> float:
    """Closed form on the totally geodesic slice ``u = 0`` with a shared mean."""
    if P.u != 0.0 or Q.u != 0.0:
        raise NotOnSubmanifold("both points need turning angle u = 0")
    if P.mu1 != Q.mu1 or P.mu2 != Q.mu2:
        raise NotOnSubmanifold("both points need the same mean")
    a = math.log(P.sigma1) - math.log(Q.sigma1)
    b = math.log(P.sigma2) - math.log(Q.sigma2)
    return SQRT2 * math.hypot(a, b)


def bivariate_metric_field(beta: np.ndarray) -> np.ndarray:
    """Fisher metric of the ``(sigma1, sigma2, mu1, mu2, u)`` chart, batched.

    ``beta`` has shape ``(..., 5)``; the result has shape ``(..., 5, 5)``.
    """
    beta = np.asarray(beta, dtype=float)
    s1, s2, u = beta[..., 0], beta[..., 1], beta[..., 4]
    a, b = 1.0 / s1 ** 2, 1.0 / s2 ** 2
    c, s = np.cos(u), np.sin(u)
    G = np.zeros(beta.shape[:-1] + (5, 5))
    G[..., 0, 0] = 2.0 * a
    G[..., 1, 1] = 2.0 * b
    # mean block is the precision matrix R diag(a, b) R^T
    G[..., 2, 2] = c * c * a + s * s * b
    G[..., 3, 3] = s * s * a + c * c * b
    G[..., 2, 3] = G[..., 3, 2] = 0.5 * np.sin(2.0 * u) * (a - b)
    G[..., 4, 4] = (s1 ** 2 - s2 ** 2) ** 2 * a * b
    return G


def bivariate_metric(beta: BivariateAngular) -> np.ndarray:
    return bivariate_metric_field(beta.as_array())


def _bivariate_scores(beta: BivariateAngular, z1: np.ndarray, z2: np.ndarray):
    """Partials of ``ln f`` at ``x = mu + R(u) z``, in parameter order."""
    s1, s2, u = beta.sigma1, beta.sigma2, beta.u
    c, s = math.cos(u), math.sin(u)
    w1, w2 = z1 / s1 ** 2, z2 / s2 ** 2
    return np.stack([
        -1.0 / s1 + z1 ** 2 / s1 ** 3,
        -1.0 / s2 + z2 ** 2 / s2 ** 3,
        c * w1 - s * w2,
        s * w1 + c * w2,
        -z1 * z2 * (1.0 / s1 ** 2 - 1.0 / s2 ** 2),
    ])


def _gauss_hermite_fisher(beta: BivariateAngular, order: int) -> np.ndarray:
    nodes, weights = np.polynomial.hermite_e.hermegauss(order)
    weights = weights / math.sqrt(2.0 * math.pi)
    xi1, xi2 = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights).ravel()
    scores = _bivariate_scores(beta, beta.sigma1 * xi1.ravel(), beta.sigma2 * xi2.ravel())
    return np.einsum("k,ik,jk->ij", w, scores, scores)


def estimate_fisher_matrix_bivariate(beta: BivariateAngular, order: int = 12) -> np.ndarray:
    """Fisher matrix of the bivariate chart by tensor Gauss-Hermite quadrature.

    The integral is taken in whitened coordinates ``x = mu + R(u) diag(sigma) xi``
    with ``xi`` standard normal, and checked against a rule of twice the order.
    """
    G = _gauss_hermite_fisher(beta, order)
    G_fine = _gauss_hermite_fisher(beta, 2 * order)
    scale = max(1.0, float(np.max(np.abs(G_fine))))
    if not np.all(np.isfinite(G_fine)) or np.max(np.abs(G - G_fine)) > 1e-9 * scale:
        raise NumericFailure("Gauss-Hermite quadrature did not converge")
    return 0.5 * (G_fine + G_fine.T)


def _feasible(nodes):
    return (nodes[:, 0] > SIGMA_FLOOR) & (nodes[:, 1] > SIGMA_FLOOR)


def _frozen_angle(nodes):
    s1, s2 = nodes[:, 0], nodes[:, 1]
    near_round = np.abs(s1 ** 2 - s2 ** 2) < ROUND_RTOL * s1 * s2
    mask = np.zeros(nodes.shape, dtype=bool)
    mask[:, 4] = near_round
    return mask


def bivariate_geodesic_path(
    P: BivariateAngular, Q: BivariateAngular, segments: int = 64, iterations: int = 500
) -> PathResult:
    """Discrete near-geodesic between two bivariate normals.

    Starts from the straight line in parameter space. The turning angle of a
    node is frozen while its covariance is numerically round, since the
    metric is degenerate in ``u`` there.
    """
    if segments < 8:
        raise InvalidParameter("segments must be at least 8")
    if iterations < 0:
        raise InvalidParameter("iterations must be nonnegative")
    return minimize_path_energy(
        bivariate_metric_field,
        P.as_array(),
        Q.as_array(),
        segments=segments,
        iterations=iterations,
        feasible=_feasible,
        frozen=_frozen_angle,
    )


def bivariate_distance_estimate(
    P: BivariateAngular, Q: BivariateAngular, segments: int = 64, iterations: int = 500
) -> float:
    """Upper estimate of the bivariate Fisher distance (length of a refined path)."""
    return bivariate_geodesic_path(P, Q, segments, iterations).length
