"""Exhaustive-enumeration reference segmenters for testing.

These enumerate every breakpoint subset (and, for the two-state case, both
terminal-state parities), so they are exponential in n and refuse anything
beyond toy sizes.  Cost matrices are precomputed once per call so the
enumeration itself is pure table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import PenaltySpec, TimeSeries
from .segmenters import EPIDEMIC, NORMAL, Segmentation

_MAX_N_STATELESS = 16
_MAX_N_ALTERNATING = 14


@dataclass(frozen=True, eq=False)
class OracleResult:
    best: Segmentation
    candidates_evaluated: int


def _segment_bounds(mask: int, n: int) -> list[int]:
    # Bit i of the mask cuts after index i + 1.
    bounds = [0]
    for i in range(n - 1):
        if mask >> i & 1:
            bounds.append(i + 1)
    bounds.append(n)
    return bounds


def _cost_matrix(ts, evaluate, min_len):
    n = ts.n
    mat = np.full((n + 1, n + 1), np.inf)
    for end in range(1, n + 1):
        starts = np.arange(0, end - min_len + 1, dtype=np.int64)
        if starts.size:
            mat[starts, end] = evaluate(starts, end)
    return mat


def brute_force_op(ts: TimeSeries, cost, penalty: PenaltySpec,
                   max_n: int = _MAX_N_STATELESS) -> OracleResult:
    """Stateless optimum by enumerating all 2^(n-1) breakpoint subsets."""
    n = ts.n
    if n > max_n:
        raise ValueError(f"refusing exhaustive enumeration for n={n} > {max_n}")
    c_epi = _cost_matrix(ts, lambda a, e: cost.epidemic_costs(ts, a, e),
                         cost.min_len_epidemic)

    best_cost = np.inf
    best_bounds = None
    evaluated = 0
    for mask in range(1 << (n - 1)):
        evaluated += 1
        bounds = _segment_bounds(mask, n)
        total = 0.0
        for t, s in zip(bounds, bounds[1:]):
            total += c_epi[t, s] + penalty.p_uniform
        if total < best_cost:
            best_cost = total
            best_bounds = bounds
    if best_bounds is None or not np.isfinite(best_cost):
        raise ValueError(f"infeasible: no segmentation of n={n} meets the length constraint")

    params = tuple(
        cost.epidemic_params(ts, t, s) for t, s in zip(best_bounds, best_bounds[1:])
    )
    best = Segmentation(
        n=n,
        changepoints=np.asarray(best_bounds[1:-1], dtype=np.int64),
        states=(),
        params=params,
        total_cost=float(best_cost),
    )
    return OracleResult(best=best, candidates_evaluated=evaluated)


def brute_force_apelt(ts: TimeSeries, cost, penalty: PenaltySpec, theta0,
                      max_n: int = _MAX_N_ALTERNATING) -> OracleResult:
    """Two-state optimum by enumerating segmentations times terminal states.

    Evaluates all 2^(n-1) breakpoint subsets under both terminal-state
    parities (2^n configurations), mirroring the dynamic program's
    tie-break: the Normal-terminal optimum wins ties.
    """
    n = ts.n
    if n > max_n:
        raise ValueError(f"refusing exhaustive enumeration for n={n} > {max_n}")
    theta0 = cost.validate_theta0(theta0)
    c_norm = _cost_matrix(ts, lambda a, e: cost.normal_costs(ts, a, e, theta0),
                          cost.min_len_normal)
    c_epi = _cost_matrix(ts, lambda a, e: cost.epidemic_costs(ts, a, e),
                         cost.min_len_epidemic)

    best = {NORMAL: (np.inf, None), EPIDEMIC: (np.inf, None)}
    evaluated = 0
    for mask in range(1 << (n - 1)):
        bounds = _segment_bounds(mask, n)
        n_segments = len(bounds) - 1
        for last_state in (NORMAL, EPIDEMIC):
            evaluated += 1
            # States alternate, fixed by the parity of the final segment.
            total = 0.0
            first_is_normal = (last_state == NORMAL) == (n_segments % 2 == 1)
            is_normal = first_is_normal
            for t, s in zip(bounds, bounds[1:]):
                if is_normal:
                    total += c_norm[t, s] + penalty.p_normal
                else:
                    total += c_epi[t, s] + penalty.p_epidemic
                is_normal = not is_normal
            if total < best[last_state][0]:
                best[last_state] = (total, bounds)

    if best[NORMAL][0] <= best[EPIDEMIC][0]:
        total, bounds = best[NORMAL]
        last_state = NORMAL
    else:
        total, bounds = best[EPIDEMIC]
        last_state = EPIDEMIC
    if bounds is None or not np.isfinite(total):
        raise ValueError(f"infeasible: no two-state segmentation of n={n} exists")

    n_segments = len(bounds) - 1
    first_is_normal = (last_state == NORMAL) == (n_segments % 2 == 1)
    states = tuple(
        NORMAL if (first_is_normal == (i % 2 == 0)) else EPIDEMIC
        for i in range(n_segments)
    )
    params = tuple(
        cost.normal_params(ts, t, s, theta0) if state == NORMAL
        else cost.epidemic_params(ts, t, s)
        for (t, s), state in zip(zip(bounds, bounds[1:]), states)
    )
    seg = Segmentation(
        n=n,
        changepoints=np.asarray(bounds[1:-1], dtype=np.int64),
        states=states,
        params=params,
        total_cost=float(total),
        normal_param=theta0,
    )
    return OracleResult(best=seg, candidates_evaluated=evaluated)
