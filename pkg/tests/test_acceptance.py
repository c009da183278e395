"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
``python3 tests/test_acceptance.py`` for a plain summary.
"""

import math
import time

import numpy as np
import pytest

from fishergeo import multivariate as mv
from fishergeo import univariate as uni
from fishergeo.barycenter import WeightedSet, karcher_mean

import oracles

SQRT2 = math.sqrt(2)


def _random_gaussians(rng, n):
    return [uni.GaussianUni(m, s) for m, s in zip(rng.uniform(-5, 5, n), rng.uniform(0.1, 5, n))]


def _best_time(fn, repeats=200):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def c01_horizontal_distance():
    pairs = [((1.5, 0.75), (3.5, 0.75)), ((0.5, 1.5), (4.5, 1.5))]
    ok, notes = True, []
    for P, Q in pairs:
        d = uni.fisher_distance(P, Q)
        t = _best_time(lambda: uni.fisher_distance(P, Q))
        ok &= abs(d - 2.37687) <= 2e-4 * 2.37687 and t < 1e-3
        notes.append(f"d={d:.7f} t={t * 1e6:.1f}us")
    return ok, "; ".join(notes)


def c02_circle():
    A = uni.GaussianUni(1.5, 0.75)
    pts = uni.fisher_circle(A, 2.3769, 64)
    worst = max(abs(uni.fisher_distance(A, p) - 2.3769) for p in pts)
    return len(pts) == 64 and worst < 1e-9, f"64 points, max residual {worst:.2e}"


def c03_midpoint():
    P, Q = uni.GaussianUni(1.5, 0.75), uni.GaussianUni(1.0610, 0.1646)
    M = uni.fisher_midpoint(P, Q)
    K = karcher_mean(WeightedSet([P, Q])).mean
    reference_ok = abs(M.mu - 1.1400) <= 1e-3 and abs(M.sigma - 0.3711) <= 1e-3
    gap = max(abs(M.mu - K.mu), abs(M.sigma - K.sigma))
    return reference_ok and gap < 1e-8, f"M=({M.mu:.5f}, {M.sigma:.5f}), Karcher gap {gap:.1e}"


def c04_fisher_matrix():
    rng = np.random.default_rng(404)
    worst = 0.0
    for mu, sigma in zip(rng.uniform(-10, 10, 10), rng.uniform(0.2, 5, 10)):
        G = uni.estimate_fisher_matrix(mu, sigma)
        worst = max(worst, float(np.max(np.abs(G - np.diag([1 / sigma ** 2, 2 / sigma ** 2])))))
    return worst < 1e-6, f"max entry error {worst:.1e}"


def c05_curvature():
    rng = np.random.default_rng(505)
    ks = [uni.fisher_curvature(m, s) for m, s in zip(rng.uniform(-10, 10, 10), rng.uniform(0.2, 5, 10))]
    worst = max(abs(k + 0.5) for k in ks)
    return worst < 1e-3, f"max |K + 1/2| = {worst:.1e}"


def c06_parametrizations():
    rng = np.random.default_rng(606)
    names = ("classic", "source", "natural", "expectation")
    spread = radical = 0.0
    for P, Q in zip(_random_gaussians(rng, 1000), _random_gaussians(rng, 1000)):
        enc = {n: (uni.convert(P, "classic", n), uni.convert(Q, "classic", n)) for n in names}
        ds = [uni.fisher_distance_in(n, *enc[n]) for n in names]
        spread = max(spread, max(ds) - min(ds))
        src = oracles.fisher_distance_source_radicals(tuple(enc["source"][0]), tuple(enc["source"][1]))
        exp_ = oracles.fisher_distance_expectation_radicals(tuple(enc["expectation"][0]), tuple(enc["expectation"][1]))
        radical = max(radical, abs(src - ds[0]), abs(exp_ - ds[0]))
    return spread < 1e-10 and radical < 1e-10, f"spread {spread:.1e}, radical-formula gap {radical:.1e}"


def c07_kl_relations():
    grid_err = sym_err = 0.0
    for d in np.linspace(0.0, 2.3769, 50):
        P, Q = uni.GaussianUni(0.0, 1.0), uni.GaussianUni(0.0, math.exp(d / SQRT2))
        g_pos, g_neg, dkl = uni.kl_from_fisher_vertical(d)
        grid_err = max(grid_err, abs(g_pos - uni.kl_divergence(P, Q)), abs(g_neg - uni.kl_divergence(Q, P)))
        sym_err = max(sym_err, abs(uni.kl_symmetrized(P, Q) - math.sqrt(math.cosh(SQRT2 * d) - 1)), abs(dkl - uni.kl_symmetrized(P, Q)))
    rng = np.random.default_rng(707)
    quad_err = max(
        abs(uni.kl_divergence(P, Q) - oracles.kl_quadrature(P, Q))
        for P, Q in zip(_random_gaussians(rng, 20), _random_gaussians(rng, 20))
    )
    ok = grid_err < 1e-12 and sym_err < 1e-12 and quad_err < 1e-8
    return ok, f"g vs KL {grid_err:.1e}, symmetrized {sym_err:.1e}, quadrature {quad_err:.1e}"


def c08_small_distance():
    d = 1e-3
    P, Q = uni.GaussianUni(0.0, 1.0), uni.GaussianUni(0.0, math.exp(d / SQRT2))
    ratio = uni.kl_symmetrized(P, Q) / uni.fisher_distance(P, Q)
    return 0.999 <= ratio <= 1.001, f"ratio {ratio:.8f}"


def c09_multivariate():
    e = math.e
    r = mv.fisher_distance_round(mv.RoundGaussian([0, 0], 1), mv.RoundGaussian([1, 1], 1))
    dg = mv.fisher_distance_diagonal(mv.DiagonalGaussian([0, 0], [1, 1]), mv.DiagonalGaussian([0, 0], [e, e]))
    s1, s2 = 0.6, 3.1
    fm = mv.fisher_distance_fixed_mean([[s1 ** 2]], [[s2 ** 2]])
    rng = np.random.default_rng(909)
    restr = 0.0
    for _ in range(100):
        a, b = rng.uniform(0.1, 4, (2, 3))
        mu = rng.normal(size=3)
        restr = max(restr, abs(
            mv.fisher_distance_fixed_mean(np.diag(a ** 2), np.diag(b ** 2))
            - mv.fisher_distance_diagonal(mv.DiagonalGaussian(mu, a), mv.DiagonalGaussian(mu, b))
        ))
    errs = (abs(r - 2 * math.log(2)), abs(dg - 2), abs(fm - SQRT2 * abs(math.log(s2 / s1))))
    ok = max(errs) < 1e-12 and restr < 1e-10
    return ok, f"closed-form errors {max(errs):.1e}, restriction {restr:.1e}"


def c10_bivariate_metric():
    t0 = time.perf_counter()
    worst = 0.0
    for s1 in (0.5, 1.0, 2.0):
        for s2 in (0.7, 1.0, 3.0):
            for u in (0.0, math.pi / 5, 2.0):
                beta = mv.BivariateAngular(s1, s2, 0.0, 0.0, u)
                worst = max(worst, float(np.max(np.abs(mv.bivariate_metric(beta) - mv.estimate_fisher_matrix_bivariate(beta)))))
    elapsed = time.perf_counter() - t0
    return worst < 1e-4 and elapsed < 30, f"max entry error {worst:.1e} in {elapsed:.2f}s"


def c11_bivariate_estimate():
    pairs = [((1.0, 1.0), (math.e, math.e)), ((1.0, 2.0), (3.0, 0.5)), ((0.5, 0.5), (0.5, 4.0)),
             ((2.0, 1.0), (0.3, 0.6)), ((1.0, 3.0), (1.5, 2.5))]
    worst, monotone = 0.0, True
    for a, b in pairs:
        P, Q = mv.BivariateAngular(*a, 0.0, 0.0, 0.0), mv.BivariateAngular(*b, 0.0, 0.0, 0.0)
        exact = mv.fisher_distance_diag_u0(P, Q)
        res = mv.bivariate_geodesic_path(P, Q, segments=64, iterations=500)
        worst = max(worst, abs(res.length - exact) / exact)
        monotone &= all(y <= x for x, y in zip(res.history, res.history[1:]))
    return worst < 1e-2 and monotone, f"max relative error {worst:.1e}, monotone={monotone}"


def c12_metric_axioms():
    rng = np.random.default_rng(1212)
    A, B, C = (_random_gaussians(rng, 1000) for _ in range(3))
    sym = ident = tri = iso = 0.0
    for P, Q, R in zip(A, B, C):
        dpq = uni.fisher_distance(P, Q)
        sym = max(sym, abs(dpq - uni.fisher_distance(Q, P)))
        ident = max(ident, uni.fisher_distance(P, P))
        tri = max(tri, uni.fisher_distance(P, R) - dpq - uni.fisher_distance(Q, R))
        c, b = rng.uniform(0.1, 10), rng.uniform(-10, 10)
        d2 = uni.fisher_distance((c * P.mu + b, c * P.sigma), (c * Q.mu + b, c * Q.sigma))
        iso = max(iso, abs(d2 - dpq))
    ok = sym <= 1e-10 and ident <= 1e-10 and tri <= 1e-10 and iso <= 1e-10
    return ok, f"symmetry {sym:.1e}, identity {ident:.1e}, triangle excess {tri:.1e}, isometry {iso:.1e}"


CRITERIA = [
    (1, "Fisher distance of the horizontal reference pairs", c01_horizontal_distance),
    (2, "Fisher circle sampled at 64 points", c02_circle),
    (3, "Fisher midpoint and two-point Karcher mean", c03_midpoint),
    (4, "Fisher matrix by quadrature", c04_fisher_matrix),
    (5, "Gaussian curvature of the Fisher metric", c05_curvature),
    (6, "parametrization consistency", c06_parametrizations),
    (7, "Kullback-Leibler relations", c07_kl_relations),
    (8, "small-distance KL limit", c08_small_distance),
    (9, "multivariate closed forms", c09_multivariate),
    (10, "bivariate metric against quadrature", c10_bivariate_metric),
    (11, "bivariate numeric distance", c11_bivariate_estimate),
    (12, "metric axioms and isometry invariance", c12_metric_axioms),
]


def _line(number, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    print(_line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(_line(number, title, ok, detail))
    print(f"{sum(results)}/{len(results)} criteria passed")
    raise SystemExit(0 if all(results) else 1)
