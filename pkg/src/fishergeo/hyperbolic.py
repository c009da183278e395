"""Poincaré half-plane and half-space geometry.

Points live in ``{(x, y) : y > 0}`` with metric ``(dx^2 + dy^2) / y^2``.
Geodesics are vertical rays or half-circles centred on the boundary; the
non-vertical ones are parametrized at unit speed as
``(c + R tanh t, R sech t)`` and the vertical ones as ``(x0, exp t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeodesic, DimensionMismatch, InvalidParameter

VERTICAL_RTOL = 1e-12


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameter("point coordinates must be finite")
        if not self.y > 0:
            raise InvalidParameter("y must be positive")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class HalfSpacePoint:
    x: tuple
    y: float

    def __init__(self, x: Sequence[float], y: float):
        xs = tuple(float(v) for v in np.atleast_1d(np.asarray(x, dtype=float)))
        if len(xs) < 1:
            raise InvalidParameter("half-space point needs p >= 1 horizontal coordinates")
        if not all(math.isfinite(v) for v in xs) or not math.isfinite(y):
            raise InvalidParameter("point coordinates must be finite")
        if not y > 0:
            raise InvalidParameter("y must be positive")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", float(y))

    @property
    def p(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class HGeodesic:
    """A unit-speed geodesic of the half-plane.

    ``kind`` is ``"vertical"`` (uses ``x0``) or ``"arc"`` (uses ``c`` and
    ``R``). ``t_start`` and ``t_end`` are the parameters of the two points the
    geodesic was built from.
    """

    kind: str
    t_start: float
    t_end: float
    x0: float = 0.0
    c: float = 0.0
    R: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vertical", "arc"):
            raise InvalidParameter(f"unknown geodesic kind {self.kind!r}")
        if self.kind == "arc" and not self.R > 0:
            raise InvalidParameter("arc geodesic needs R > 0")

    @property
    def length(self) -> float:
        return abs(self.t_end - self.t_start)


@dataclass(frozen=True)
class HTangent:
    """Tangent vector ``v`` (ambient chart components) at ``base``."""

    base: HPoint
    v: tuple

    def __init__(self, base: HPoint, v: Sequence[float]):
        vx, vy = (float(c) for c in v)
        if not (math.isfinite(vx) and math.isfinite(vy)):
            raise InvalidParameter("tangent components must be finite")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "v", (vx, vy))

    @property
    def norm(self) -> float:
        return math.hypot(*self.v) / self.base.y


def _dist_from_chord(chord: float, y1: float, y2: float) -> float:
    # arccosh(1 + chord^2 / (2 y1 y2)) rewritten through cosh d = 1 + 2 sinh^2(d/2)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(y1) * math.sqrt(y2)))


def h_distance(P: HPoint, Q: HPoint) -> float:
    """Hyperbolic distance between two half-plane points."""
    dx = P.x - Q.x
    if dx == 0.0:
        return abs(math.log(Q.y) - math.log(P.y))
    return _dist_from_chord(math.hypot(dx, P.y - Q.y), P.y, Q.y)


def h_distance_halfspace(P: HalfSpacePoint, Q: HalfSpacePoint) -> float:
    """Hyperbolic distance in the (p+1)-dimensional upper half-space."""
    if P.p != Q.p:
        raise DimensionMismatch(f"dimension mismatch: {P.p} vs {Q.p}")
    dx = math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(P.x, Q.x)))
    if dx == 0.0:
        return abs(math.log(Q.y) - math.log(P.y))
    return _dist_from_chord(math.hypot(dx, P.y - Q.y), P.y, Q.y)


def _is_vertical(x1: float, x2: float) -> bool:
    return abs(x1 - x2) < VERTICAL_RTOL * max(1.0, abs(x1), abs(x2))


def h_geodesic(P: HPoint, Q: HPoint) -> HGeodesic:
    """The geodesic through ``P`` (at ``t_start``) and ``Q`` (at ``t_end``)."""
    if P == Q:
        raise DegenerateGeodesic("geodesic between identical points is undefined")
    if _is_vertical(P.x, Q.x):
        x0 = P.x if P.x == Q.x else 0.5 * (P.x + Q.x)
        return HGeodesic("vertical", math.log(P.y), math.log(Q.y), x0=x0)
    # equidistant boundary point, written to avoid cancellation in x_P^2 - x_Q^2
    c = 0.5 * (P.x + Q.x) + 0.5 * (P.y - Q.y) * (P.y + Q.y) / (P.x - Q.x)
    R = math.hypot(P.x - c, P.y)
    return HGeodesic(
        "arc",
        math.asinh((P.x - c) / P.y),
        math.asinh((Q.x - c) / Q.y),
        c=c,
        R=R,
    )


def h_geodesic_point(g: HGeodesic, t: float) -> HPoint:
    if g.kind == "vertical":
        return HPoint(g.x0, math.exp(t))
    return HPoint(g.c + g.R * math.tanh(t), g.R / math.cosh(t))


def h_interpolate(P: HPoint, Q: HPoint, s: float) -> HPoint:
    """Point at fraction ``s`` of the geodesic segment from ``P`` to ``Q``."""
    if P == Q or s == 0.0:
        return P
    if s == 1.0:
        return Q
    # exp/log instead of the arc chart: an arc with a huge radius loses
    # precision when the endpoints are almost vertically aligned
    v = h_log(P, Q)
    return h_exp(HTangent(P, (s * v.v[0], s * v.v[1])))


# exp/log go through the Cayley transform of the unit disk centred at the
# base point; this stays well conditioned for nearly vertical geodesics.

def h_log(P: HPoint, Q: HPoint) -> HTangent:
    """Initial velocity of the geodesic from ``P`` reaching ``Q`` at time 1."""
    if P == Q:
        return HTangent(P, (0.0, 0.0))
    z = complex((Q.x - P.x) / P.y, Q.y / P.y)
    w = (z - 1j) / (z + 1j)
    r = abs(w)
    if r == 0.0:
        return HTangent(P, (0.0, 0.0))
    d = h_distance(P, Q)
    # a disk direction angle a corresponds to the half-plane angle a + pi/2
    scale = P.y * d / r
    return HTangent(P, (-w.imag * scale, w.real * scale))


def h_exp(tangent: HTangent) -> HPoint:
    P = tangent.base
    vx, vy = tangent.v
    speed = math.hypot(vx, vy)
    if speed == 0.0:
        return P
    n = speed / P.y
    if vx == 0.0:
        return HPoint(P.x, P.y * math.exp(math.copysign(n, vy)))
    t = math.tanh(0.5 * n)
    w = t * complex(vy / speed, -vx / speed)
    # z = i (1 + w) / (1 - w), with 1 - |w|^2 = sech^2(n/2) kept exact
    denom = abs(1 - w) ** 2
    x = -2.0 * w.imag / denom
    y = (1.0 / math.cosh(0.5 * n)) ** 2 / denom
    return HPoint(P.x + P.y * x, P.y * y)


def h_circle(center: HPoint, rho: float) -> tuple[HPoint, float]:
    """Euclidean description of the hyperbolic circle of radius ``rho``.

    Returns the Euclidean centre (same abscissa, raised to ``y cosh rho``)
    and the Euclidean radius ``y sinh rho``.
    """
    if rho < 0 or not math.isfinite(rho):
        raise InvalidParameter("circle radius must be a nonnegative finite number")
    return HPoint(center.x, center.y * math.cosh(rho)), center.y * math.sinh(rho)


def h_circle_points(center: HPoint, rho: float, n: int) -> list[HPoint]:
    """``n`` points equally spaced in Euclidean angle on the circle."""
    (cx, cy), radius = h_circle(center, rho)
    angles = 2.0 * np.pi * np.arange(n) / n
    return [HPoint(cx + radius * math.cos(a), cy + radius * math.sin(a)) for a in angles]

