"""Shared generators for the test suite.

Everything is seeded through numpy Generators passed in by the caller so
each test controls its own stream.
"""

import numpy as np

from episeg import BetaCost, GaussianFixedVarianceCost, GaussianFullCost, build_timeseries


def gaussian_instance(rng, n_lo=4, n_hi=13, bump_prob=0.5):
    """Random Gaussian sequence, optionally with one shifted stretch."""
    n = int(rng.integers(n_lo, n_hi))
    x = rng.normal(size=n)
    if rng.random() < bump_prob:
        a = int(rng.integers(0, n - 1))
        b = int(rng.integers(a + 1, n))
        x[a:b + 1] += rng.normal() * 2.0
    return build_timeseries(x)


def beta_instance(rng, n_lo=4, n_hi=12):
    """Random unit-interval sequence with segmentwise Beta draws."""
    n = int(rng.integers(n_lo, n_hi))
    x = rng.beta(0.7, 1.4, size=n)
    if rng.random() < 0.5:
        a = int(rng.integers(0, n - 1))
        b = int(rng.integers(a + 1, n))
        x[a:b + 1] = rng.beta(4.0, 1.2, size=b + 1 - a)
    return build_timeseries(x)


def piecewise_instance(rng, n_lo=20, n_hi=501, max_cuts=4):
    """Longer Gaussian sequence with several mean shifts."""
    n = int(rng.integers(n_lo, n_hi))
    x = rng.normal(size=n)
    m = int(rng.integers(0, max_cuts + 1))
    if m and n > 4:
        cuts = np.sort(rng.choice(np.arange(2, n - 1), size=min(m, n - 3), replace=False))
        bounds = [0] + [int(c) for c in cuts] + [n]
        for i in range(len(bounds) - 1):
            x[bounds[i]:bounds[i + 1]] += rng.normal() * 1.5
    return build_timeseries(x)


def any_cost(rng):
    """Draw one of the three cost families with a matching data generator."""
    pick = int(rng.integers(0, 3))
    if pick == 0:
        return GaussianFullCost(), gaussian_instance(rng), 0.0
    if pick == 1:
        return GaussianFixedVarianceCost(sigma2=1.0), gaussian_instance(rng, n_lo=3), 0.0
    return BetaCost(), beta_instance(rng), (1.0, 1.0)
