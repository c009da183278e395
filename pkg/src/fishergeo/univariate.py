"""Fisher geometry of the univariate normal family.

The Fisher metric on ``(mu, sigma)`` is ``(dmu^2 + 2 dsigma^2) / sigma^2``.
Rescaling the mean by ``1/sqrt(2)`` maps it to ``1/2`` times the Poincaré
metric, so distances, geodesics and circles are all computed in the
half-plane and pulled back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate

from . import hyperbolic as hyp
from .errors import DegenerateGeodesic, InvalidMetric, InvalidParameter, NumericFailure

SQRT2 = math.sqrt(2.0)
SIGMA_FLOOR = 1e-300

PARAMETRIZATIONS = ("classic", "source", "natural", "expectation")


def _finite(*values):
    if not all(math.isfinite(v) for v in values):
        raise InvalidParameter("parameters must be finite")


@dataclass(frozen=True)
class GaussianUni:
    mu: float
    sigma: float

    def __post_init__(self):
        _finite(self.mu, self.sigma)
        if not self.sigma > 0:
            raise InvalidParameter("sigma must be positive")
        if self.sigma < SIGMA_FLOOR:
            raise InvalidParameter(f"sigma below {SIGMA_FLOOR:g} is not representable")

    def __iter__(self):
        yield self.mu
        yield self.sigma


@dataclass(frozen=True)
class SourceParams:
    """``(mu, sigma^2)``."""

    lambda1: float
    lambda2: float

    def __post_init__(self):
        _finite(self.lambda1, self.lambda2)
        if not self.lambda2 > 0:
            raise InvalidParameter("lambda2 (variance) must be positive")

    def __iter__(self):
        yield self.lambda1
        yield self.lambda2


@dataclass(frozen=True)
class NaturalParams:
    """``(mu / sigma^2, -1 / (2 sigma^2))``."""

    theta1: float
    theta2: float

    def __post_init__(self):
        _finite(self.theta1, self.theta2)
        if not self.theta2 < 0:
            raise InvalidParameter("theta2 must be negative")

    def __iter__(self):
        yield self.theta1
        yield self.theta2


@dataclass(frozen=True)
class ExpectationParams:
    """``(mu, sigma^2 + mu^2)``."""

    eta1: float
    eta2: float

    def __post_init__(self):
        _finite(self.eta1, self.eta2)
        if not self.eta2 - self.eta1 ** 2 > 0:
            raise InvalidParameter("eta2 - eta1^2 (variance) must be positive")

    def __iter__(self):
        yield self.eta1
        yield self.eta2


_RECORDS = {
    "classic": GaussianUni,
    "source": SourceParams,
    "natural": NaturalParams,
    "expectation": ExpectationParams,
}

Point = Union[GaussianUni, SourceParams, NaturalParams, ExpectationParams, Sequence[float]]


def _record(point: Point, parametrization: str):
    if parametrization not in _RECORDS:
        raise InvalidParameter(f"unknown parametrization {parametrization!r}")
    cls = _RECORDS[parametrization]
    if isinstance(point, cls):
        return point
    if isinstance(point, tuple(_RECORDS.values())):
        raise InvalidParameter(
            f"{type(point).__name__} given where {parametrization} parameters were expected"
        )
    a, b = (float(v) for v in point)
    return cls(a, b)


def to_classic(point: Point, parametrization: str = "classic") -> GaussianUni:
    rec = _record(point, parametrization)
    if parametrization == "classic":
        return rec
    if parametrization == "source":
        return GaussianUni(rec.lambda1, math.sqrt(rec.lambda2))
    if parametrization == "natural":
        return GaussianUni(-rec.theta1 / (2.0 * rec.theta2), 1.0 / math.sqrt(-2.0 * rec.theta2))
    return GaussianUni(rec.eta1, math.sqrt(rec.eta2 - rec.eta1 ** 2))


def from_classic(g: GaussianUni, parametrization: str):
    mu, sigma = g.mu, g.sigma
    var = sigma * sigma
    if parametrization == "classic":
        return g
    if parametrization == "source":
        return SourceParams(mu, var)
    if parametrization == "natural":
        return NaturalParams(mu / var, -0.5 / var)
    if parametrization == "expectation":
        return ExpectationParams(mu, var + mu * mu)
    raise InvalidParameter(f"unknown parametrization {parametrization!r}")


def convert(point: Point, source: str, target: str):
    """Convert a point between the classic, source, natural and expectation charts."""
    return from_classic(to_classic(point, source), target)


def psi(g: GaussianUni) -> hyp.HPoint:
    """Similarity onto the Poincaré half-plane: ``(mu, sigma) -> (mu/sqrt2, sigma)``."""
    return hyp.HPoint(g.mu / SQRT2, g.sigma)


def psi_inv(p: hyp.HPoint) -> GaussianUni:
    return GaussianUni(p.x * SQRT2, p.y)


def _as_gaussian(P) -> GaussianUni:
    return P if isinstance(P, GaussianUni) else GaussianUni(*(float(v) for v in P))


def fisher_distance(P: GaussianUni, Q: GaussianUni) -> float:
    """Fisher-Rao distance between two univariate normals."""
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    return SQRT2 * hyp.h_distance(psi(P), psi(Q))


def fisher_distance_in(parametrization: str, P: Point, Q: Point) -> float:
    return fisher_distance(to_classic(P, parametrization), to_classic(Q, parametrization))


@dataclass(frozen=True)
class FisherGeodesic:
    """Geodesic of the Fisher half-plane.

    A ``"half-ellipse"`` is traced as ``(sqrt2 (c + R tanh t), R sech t)``:
    ``c`` is the centre in the rescaled chart (the ellipse is centred at
    ``mu = sqrt2 c``), ``R`` the semi-axis along sigma and ``sqrt2 R`` the
    semi-axis along mu. A ``"vertical"`` geodesic is ``(mu0, exp t)``.
    Moving ``t`` by one unit covers Fisher length ``sqrt2``.
    """

    kind: str
    t_start: float
    t_end: float
    mu0: float = 0.0
    c: float = 0.0
    R: float = 0.0

    @property
    def mu_center(self) -> float:
        return SQRT2 * self.c

    @property
    def length(self) -> float:
        return SQRT2 * abs(self.t_end - self.t_start)

    def _hyperbolic(self) -> hyp.HGeodesic:
        if self.kind == "vertical":
            return hyp.HGeodesic("vertical", self.t_start, self.t_end, x0=self.mu0 / SQRT2)
        return hyp.HGeodesic("arc", self.t_start, self.t_end, c=self.c, R=self.R)


def fisher_geodesic(P: GaussianUni, Q: GaussianUni) -> FisherGeodesic:
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    if P == Q:
        raise DegenerateGeodesic("geodesic between identical distributions is undefined")
    g = hyp.h_geodesic(psi(P), psi(Q))
    if g.kind == "vertical":
        return FisherGeodesic("vertical", g.t_start, g.t_end, mu0=g.x0 * SQRT2)
    return FisherGeodesic("half-ellipse", g.t_start, g.t_end, c=g.c, R=g.R)


def fisher_geodesic_point(g: FisherGeodesic, t: float) -> GaussianUni:
    return psi_inv(hyp.h_geodesic_point(g._hyperbolic(), t))


def fisher_geodesic_samples(P: GaussianUni, Q: GaussianUni, n: int):
    """``n >= 2`` points of the segment from P to Q at equal Fisher spacing.

    Returns ``(arc_lengths, points)`` where the arc length is measured from P.
    """
    if n < 2:
        raise InvalidParameter("need at least 2 samples")
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    d = fisher_distance(P, Q)
    fractions = np.linspace(0.0, 1.0, n)
    return [float(f * d) for f in fractions], [fisher_interpolate(P, Q, float(f)) for f in fractions]


def fisher_interpolate(P: GaussianUni, Q: GaussianUni, s: float) -> GaussianUni:
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    if P == Q or s == 0.0:
        return P
    if s == 1.0:
        return Q
    return psi_inv(hyp.h_interpolate(psi(P), psi(Q), s))


def fisher_midpoint(P: GaussianUni, Q: GaussianUni) -> GaussianUni:
    """Fisher average of two distributions: the geodesic midpoint."""
    return fisher_interpolate(P, Q, 0.5)


def fisher_circle(center: GaussianUni, r: float, n: int) -> list[GaussianUni]:
    """``n`` distributions at Fisher distance ``r`` from ``center``."""
    if n < 3:
        raise InvalidParameter("a circle needs n >= 3 points")
    if not r > 0:
        raise InvalidParameter("circle radius must be positive")
    center = _as_gaussian(center)
    return [psi_inv(p) for p in hyp.h_circle_points(psi(center), r / SQRT2, n)]


def kl_divergence(P: GaussianUni, Q: GaussianUni) -> float:
    """KL(P || Q) for univariate normals."""
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    log_ratio = math.log(Q.sigma) - math.log(P.sigma)
    dm = (P.mu - Q.mu) / Q.sigma
    # sigma_P^2/sigma_Q^2 - 1 = expm1(-2 log_ratio), accurate near P = Q
    return 0.5 * (2.0 * log_ratio + math.expm1(-2.0 * log_ratio) + dm * dm)


def kl_symmetrized(P: GaussianUni, Q: GaussianUni) -> float:
    """``sqrt(KL(P||Q) + KL(Q||P))``."""
    total = kl_divergence(P, Q) + kl_divergence(Q, P)
    return math.sqrt(max(total, 0.0))


def kl_from_fisher_vertical(d: float) -> tuple[float, float, float]:
    """KL divergences of a vertical pair at signed Fisher separation ``d``.

    ``d = sqrt2 ln(sigma_Q / sigma_P)``. Returns ``(KL(P||Q), KL(Q||P), d_KL)``.
    """

    def g(x):
        return 0.5 * (math.expm1(-SQRT2 * x) + SQRT2 * x)

    dkl = math.sqrt(max(math.cosh(SQRT2 * d) - 1.0, 0.0))
    return g(d), g(-d), dkl


def fisher_matrix(mu: float, sigma: float) -> np.ndarray:
    """Closed-form Fisher information ``diag(1/sigma^2, 2/sigma^2)``."""
    GaussianUni(mu, sigma)
    return np.diag([1.0 / sigma ** 2, 2.0 / sigma ** 2])


def estimate_fisher_matrix(mu: float, sigma: float, width: float = 12.0) -> np.ndarray:
    """Fisher information by adaptive quadrature of the score outer product.

    Integrates over ``[mu - width sigma, mu + width sigma]`` using the analytic
    partial derivatives of ``ln f`` with respect to ``mu`` and ``sigma``. The
    variable is standardized (``x = mu + sigma z``) so the quadrature error
    does not depend on the location or scale of the distribution.
    """
    GaussianUni(mu, sigma)
    norm = 1.0 / math.sqrt(2.0 * math.pi)

    def integrand(z, i, j):
        # sigma times the scores; the 1/sigma^2 factor is applied afterwards
        scores = (z, z * z - 1.0)
        return norm * math.exp(-0.5 * z * z) * scores[i] * scores[j]

    G = np.empty((2, 2))
    for i in range(2):
        for j in range(i, 2):
            value, abserr = integrate.quad(
                integrand, -width, width, args=(i, j), epsabs=1e-13, epsrel=1e-12, limit=200,
            )
            if not math.isfinite(value) or abserr > 1e-8:
                raise NumericFailure(f"quadrature did not converge for entry ({i},{j})")
            G[i, j] = G[j, i] = value / sigma ** 2
    return G


MetricFn = Callable[[float, float], float]


def gaussian_curvature(E: MetricFn, G: MetricFn, at: Sequence[float], h: float = 1e-4) -> float:
    """Gaussian curvature of ``E du^2 + G dv^2`` by the Brioschi formula.

    All derivatives are central differences with step ``h``.
    """
    u, v = (float(c) for c in at)

    def metric(fn, a, b):
        val = fn(a, b)
        if not val > 0:
            raise InvalidMetric(f"metric coefficient must be positive, got {val!r} at ({a}, {b})")
        return val

    def root(a, b):
        return math.sqrt(metric(E, a, b) * metric(G, a, b))

    def g_u_over_root(a, b):
        return (metric(G, a + h, b) - metric(G, a - h, b)) / (2 * h) / root(a, b)

    def e_v_over_root(a, b):
        return (metric(E, a, b + h) - metric(E, a, b - h)) / (2 * h) / root(a, b)

    d1 = (g_u_over_root(u + h, v) - g_u_over_root(u - h, v)) / (2 * h)
    d2 = (e_v_over_root(u, v + h) - e_v_over_root(u, v - h)) / (2 * h)
    return -(d1 + d2) / (2.0 * root(u, v))


def fisher_metric_E(mu: float, sigma: float) -> float:
    return 1.0 / sigma ** 2


def fisher_metric_G(mu: float, sigma: float) -> float:
    return 2.0 / sigma ** 2


def fisher_curvature(mu: float, sigma: float, h: float = 1e-4) -> float:
    return gaussian_curvature(fisher_metric_E, fisher_metric_G, (mu, sigma), h)


def horizontal_bound_check(P: GaussianUni, Q: GaussianUni) -> tuple[float, float]:
    """Fisher distance of an equal-variance pair and the horizontal-segment length.

    The Fisher geodesic bends upward, so the first value is strictly below
    ``|mu_2 - mu_1| / sigma`` unless the means coincide.
    """
    P, Q = _as_gaussian(P), _as_gaussian(Q)
    if abs(P.sigma - Q.sigma) > 1e-12 * max(P.sigma, Q.sigma):
        raise InvalidParameter("horizontal pair requires equal sigma")
    return fisher_distance(P, Q), abs(Q.mu - P.mu) / P.sigma
