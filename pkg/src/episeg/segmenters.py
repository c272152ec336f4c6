"""Penalized change-point segmenters.

Two families of exact dynamic programs over segment costs:

* stateless: optimal partitioning and its pruned equivalent (PELT), which
  fit every segment freely under a single per-segment penalty;
* two-state: an alternating recursion that tags each segment Normal or
  Epidemic, pins the Normal parameter at a shared value theta0, and prunes
  each of its two candidate sets against the opposite value function.

The two-state recursion keeps one value function per terminal state,

    F_norm(s) = min_t F_epi(t)  + C_normal(t, s]  + p_normal
    F_epi(s)  = min_t F_norm(t) + C_epidemic(t, s] + p_epidemic

with both initialized to zero at t = 0 so the initial state is free, and
returns whichever terminal state is cheaper at n (Normal on ties).  Pruning
drops a candidate t from the Normal set once

    F_epi(t) + C_normal(t, s] + k_normal > F_epi(s)

(and symmetrically for the Epidemic set), which preserves exactness for
subadditive costs; likelihood costs are subadditive with k = 0.  Candidates
too recent to satisfy the minimum segment length are skipped, never pruned,
since their inequality cannot be evaluated yet.  With a minimum segment
length above one, removal is additionally deferred until the dominating
index can itself host a minimum-length segment (see ``_pruned_candidates``);
removing at the step of the inequality is not exact.

``apelt_profile`` wraps the fixed-theta0 recursion in a derivative-free
outer search over theta0 (golden section plus a final local grid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .costs import PenaltySpec, TimeSeries, estimate_normal_mean_plugin

NORMAL = "normal"
EPIDEMIC = "epidemic"

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class Segmentation:
    """Result of a segmentation run.

    ``changepoints`` holds the m interior boundaries; segment i covers the
    half-open index range (boundary[i], boundary[i+1]].  ``states`` is empty
    for stateless fits, otherwise one label per segment, strictly
    alternating.  ``params`` has one dict of fitted parameters per segment.
    """

    n: int
    changepoints: np.ndarray
    states: tuple[str, ...]
    params: tuple[dict, ...]
    total_cost: float
    normal_param: float | tuple[float, float] | None = None
    diagnostics: dict | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return int(self.changepoints.shape[0])

    def boundaries(self) -> np.ndarray:
        return np.concatenate(([0], self.changepoints, [self.n]))

    def segments(self) -> list[tuple[int, int]]:
        b = self.boundaries()
        return [(int(b[i]), int(b[i + 1])) for i in range(len(b) - 1)]

    def state_mask(self) -> np.ndarray:
        """Boolean per-index mask: True where the fitted state is Epidemic."""
        if not self.states:
            raise ValueError("segmentation has no states")
        mask = np.zeros(self.n, dtype=bool)
        for (t, s), state in zip(self.segments(), self.states):
            if state == EPIDEMIC:
                mask[t:s] = True
        return mask


def _finish_stateless(ts, cost, penalty, total, back, sizes) -> Segmentation:
    cps = []
    s = ts.n
    while s > 0:
        t = int(back[s])
        if t < 0:
            raise RuntimeError("broken back-pointer chain")
        if t > 0:
            cps.append(t)
        s = t
    cps.reverse()
    bounds = [0] + cps + [ts.n]
    params = tuple(
        cost.epidemic_params(ts, bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)
    )
    diagnostics = {
        "mean_candidates": float(np.mean(sizes)),
        "max_candidates": int(np.max(sizes)),
    }
    return Segmentation(
        n=ts.n,
        changepoints=np.asarray(cps, dtype=np.int64),
        states=(),
        params=params,
        total_cost=float(total),
        diagnostics=diagnostics,
    )


def _pruned_candidates(cands, s, min_len, values, seg_cost_fn, k_prune,
                       feas_mask, seg_costs):
    """Candidate set for step s + 1 after the domination test.

    A candidate t is dominated by index e once values[t] + C(t, e] + K
    exceeds values[e]; e then beats t at every later end point where e
    itself can host a segment of minimum length, i.e. from e + min_len
    onward.  Testing at e = s - min_len + 1 therefore makes the removal
    safe for step s + 1.  Testing at e = s instead over-prunes: t may
    still be the only feasible predecessor while s is too recent.
    """
    e = s - min_len + 1
    if e < 1 or not np.isfinite(values[e]):
        return np.concatenate((cands, [s]))
    if e == s:
        test_mask, costs = feas_mask, seg_costs
    else:
        test_mask = e - cands >= min_len
        costs = seg_cost_fn(cands[test_mask], e) if test_mask.any() else None
    if costs is None:
        return np.concatenate((cands, [s]))
    tst = cands[test_mask]
    keep = values[tst] + costs + k_prune <= values[e]
    return np.concatenate((tst[keep], cands[~test_mask], [s]))


def _stateless_dp(ts, cost, penalty, k_prune, prune) -> Segmentation:
    n = ts.n
    min_len = cost.min_len_epidemic
    if n < min_len:
        raise ValueError(f"infeasible: n={n} is below the minimum segment length {min_len}")

    f = np.full(n + 1, np.inf)
    f[0] = 0.0
    back = np.full(n + 1, -1, dtype=np.int64)
    cands = np.array([0], dtype=np.int64)
    sizes = np.empty(n, dtype=np.int64)

    for s in range(1, n + 1):
        sizes[s - 1] = cands.shape[0]
        feas_mask = s - cands >= min_len
        feas = cands[feas_mask]
        seg_costs = None
        if feas.size:
            seg_costs = cost.epidemic_costs(ts, feas, s)
            totals = f[feas] + seg_costs + penalty.p_uniform
            j = int(np.argmin(totals))
            if np.isfinite(totals[j]):
                f[s] = totals[j]
                back[s] = feas[j]
        if prune:
            cands = _pruned_candidates(
                cands, s, min_len, f,
                lambda tst, s_eff: cost.epidemic_costs(ts, tst, s_eff),
                k_prune, feas_mask, seg_costs,
            )
        else:
            cands = np.concatenate((cands, [s]))

    if not np.isfinite(f[n]):
        raise ValueError(f"infeasible: no segmentation of n={n} meets the length constraint")
    return _finish_stateless(ts, cost, penalty, f[n], back, sizes)


def optimal_partitioning(ts: TimeSeries, cost, penalty: PenaltySpec) -> Segmentation:
    """Exact stateless segmentation by the O(n^2) partitioning recursion."""
    return _stateless_dp(ts, cost, penalty, 0.0, prune=False)


def pelt(ts: TimeSeries, cost, penalty: PenaltySpec, k_prune: float = 0.0) -> Segmentation:
    """Pruned stateless segmentation; identical output to optimal_partitioning.

    ``k_prune`` is the subadditivity slack of the cost; 0 is exact for
    likelihood costs.
    """
    return _stateless_dp(ts, cost, penalty, k_prune, prune=True)


def _finish_alternating(ts, cost, penalty, theta0, f_norm, f_epi, back_norm, back_epi,
                        sizes_norm, sizes_epi) -> Segmentation:
    n = ts.n
    total = min(f_norm[n], f_epi[n])
    state = NORMAL if f_norm[n] <= f_epi[n] else EPIDEMIC

    segs: list[tuple[int, int, str]] = []
    s = n
    st = state
    while s > 0:
        t = int(back_norm[s] if st == NORMAL else back_epi[s])
        if t < 0:
            raise RuntimeError("broken back-pointer chain")
        segs.append((t, s, st))
        st = EPIDEMIC if st == NORMAL else NORMAL
        s = t
    segs.reverse()

    cps = [t for t, _, _ in segs[1:]]
    states = tuple(st for _, _, st in segs)
    params = tuple(
        cost.normal_params(ts, t, s, theta0) if st == NORMAL
        else cost.epidemic_params(ts, t, s)
        for t, s, st in segs
    )
    diagnostics = {
        "mean_candidates_normal": float(np.mean(sizes_norm)),
        "mean_candidates_epidemic": float(np.mean(sizes_epi)),
        "max_candidates_normal": int(np.max(sizes_norm)),
        "max_candidates_epidemic": int(np.max(sizes_epi)),
    }
    return Segmentation(
        n=n,
        changepoints=np.asarray(cps, dtype=np.int64),
        states=states,
        params=params,
        total_cost=float(total),
        normal_param=theta0,
        diagnostics=diagnostics,
    )


def apelt_fixed(ts: TimeSeries, cost, penalty: PenaltySpec, theta0,
                k_normal: float = 0.0, k_epidemic: float = 0.0,
                prune: bool = True) -> Segmentation:
    """Exact two-state segmentation at a fixed normal-state parameter.

    Parameters
    ----------
    theta0 : scalar (Gaussian families) or (alpha, beta) pair (Beta family)
        Shared normal-state parameter.
    k_normal, k_epidemic : float
        Subadditivity slacks used in the pruning inequalities; 0 is exact
        for likelihood costs.
    prune : bool
        Disable to fall back to the unpruned O(n^2) recursion (same output;
        used for testing the pruning rule).
    """
    theta0 = cost.validate_theta0(theta0)
    n = ts.n
    len_norm = cost.min_len_normal
    len_epi = cost.min_len_epidemic
    if n < min(len_norm, len_epi):
        raise ValueError(
            f"infeasible: n={n} is below the minimum segment length {min(len_norm, len_epi)}"
        )

    f_norm = np.full(n + 1, np.inf)
    f_epi = np.full(n + 1, np.inf)
    f_norm[0] = 0.0
    f_epi[0] = 0.0
    back_norm = np.full(n + 1, -1, dtype=np.int64)
    back_epi = np.full(n + 1, -1, dtype=np.int64)
    r_norm = np.array([0], dtype=np.int64)
    r_epi = np.array([0], dtype=np.int64)
    sizes_norm = np.empty(n, dtype=np.int64)
    sizes_epi = np.empty(n, dtype=np.int64)

    for s in range(1, n + 1):
        sizes_norm[s - 1] = r_norm.shape[0]
        sizes_epi[s - 1] = r_epi.shape[0]

        feas_mask_n = s - r_norm >= len_norm
        feas_n = r_norm[feas_mask_n]
        costs_n = None
        if feas_n.size:
            costs_n = cost.normal_costs(ts, feas_n, s, theta0)
            totals = f_epi[feas_n] + costs_n + penalty.p_normal
            j = int(np.argmin(totals))
            if np.isfinite(totals[j]):
                f_norm[s] = totals[j]
                back_norm[s] = feas_n[j]

        feas_mask_e = s - r_epi >= len_epi
        feas_e = r_epi[feas_mask_e]
        costs_e = None
        if feas_e.size:
            costs_e = cost.epidemic_costs(ts, feas_e, s)
            totals = f_norm[feas_e] + costs_e + penalty.p_epidemic
            j = int(np.argmin(totals))
            if np.isfinite(totals[j]):
                f_epi[s] = totals[j]
                back_epi[s] = feas_e[j]

        if prune:
            r_norm = _pruned_candidates(
                r_norm, s, len_norm, f_epi,
                lambda tst, e: cost.normal_costs(ts, tst, e, theta0),
                k_normal, feas_mask_n, costs_n,
            )
            r_epi = _pruned_candidates(
                r_epi, s, len_epi, f_norm,
                lambda tst, e: cost.epidemic_costs(ts, tst, e),
                k_epidemic, feas_mask_e, costs_e,
            )
        else:
            r_norm = np.concatenate((r_norm, [s]))
            r_epi = np.concatenate((r_epi, [s]))

    if not (np.isfinite(f_norm[n]) or np.isfinite(f_epi[n])):
        raise ValueError(f"infeasible: no two-state segmentation of n={n} exists")
    return _finish_alternating(ts, cost, penalty, theta0, f_norm, f_epi,
                               back_norm, back_epi, sizes_norm, sizes_epi)


def apelt_plugin(ts: TimeSeries, cost, penalty: PenaltySpec, window: int = 10,
                 k_normal: float = 0.0, k_epidemic: float = 0.0,
                 prune: bool = True) -> Segmentation:
    """Two-state segmentation at the plugin normal-mean estimate.

    The normal mean is set to the median of all sliding window means (see
    ``estimate_normal_mean_plugin``); only scalar-mean families qualify.
    """
    if not cost.scalar_theta0:
        raise ValueError("plugin estimation requires a scalar normal-state parameter")
    theta0 = estimate_normal_mean_plugin(ts, window)
    return apelt_fixed(ts, cost, penalty, theta0,
                       k_normal=k_normal, k_epidemic=k_epidemic, prune=prune)


@dataclass(frozen=True)
class ProfileConfig:
    """Search controls for the profile segmenter.

    ``bracket`` defaults to [min(values) - 1, max(values) + 1].  With
    ``n_starts`` > 1 the bracket is split into that many sub-brackets, each
    searched by golden section from an equally spaced seed; the default
    single start searches the whole bracket seeded at the plugin estimate.
    The final local grid refines around the best point at a resolution of
    ``(hi - lo) / resolution_steps``.
    """

    bracket: tuple[float, float] | None = None
    n_starts: int = 1
    resolution_steps: int = 10_000
    refine_halfwidth: int = 10

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError(f"n_starts must be >= 1, got {self.n_starts}")
        if self.resolution_steps < 2:
            raise ValueError(f"resolution_steps must be >= 2, got {self.resolution_steps}")


@dataclass(frozen=True, eq=False)
class ProfileResult:
    """Outcome of the outer theta0 search.

    ``trace`` lists every distinct (theta0, objective) evaluation in order;
    ``theta_star`` is the best evaluated point and ``segmentation`` the
    fixed-theta0 fit there, so ``value == segmentation.total_cost``.
    """

    theta_star: float
    value: float
    trace: tuple[tuple[float, float], ...]
    segmentation: Segmentation


def _golden_section(evaluate, lo, hi, tol):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = evaluate(c)
    fd = evaluate(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = evaluate(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = evaluate(d)


def apelt_profile(ts: TimeSeries, cost, penalty: PenaltySpec,
                  theta0_init: float | None = None,
                  config: ProfileConfig | None = None,
                  k_normal: float = 0.0, k_epidemic: float = 0.0,
                  prune: bool = True, plugin_window: int = 10) -> ProfileResult:
    """Two-state segmentation with the normal parameter profiled out.

    Minimizes theta0 -> apelt_fixed(theta0).total_cost by golden-section
    search inside a bracket, then refines with a local grid around the best
    point.  Derivative-free on purpose: the objective is piecewise smooth
    with kinks where the optimal segmentation switches.
    """
    if not cost.scalar_theta0:
        raise ValueError("profile search requires a scalar normal-state parameter")
    config = config or ProfileConfig()
    if config.bracket is not None:
        lo, hi = (float(x) for x in config.bracket)
    else:
        lo = float(np.min(ts.values)) - 1.0
        hi = float(np.max(ts.values)) + 1.0
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid bracket ({lo}, {hi})")
    if theta0_init is None:
        theta0_init = estimate_normal_mean_plugin(ts, plugin_window)

    cache: dict[float, Segmentation] = {}
    trace: list[tuple[float, float]] = []

    def evaluate(theta: float) -> float:
        key = float(theta)
        if key not in cache:
            seg = apelt_fixed(ts, cost, penalty, key,
                              k_normal=k_normal, k_epidemic=k_epidemic, prune=prune)
            cache[key] = seg
            trace.append((key, seg.total_cost))
        return cache[key].total_cost

    span = hi - lo
    resolution = span / config.resolution_steps
    evaluate(min(max(theta0_init, lo), hi))
    if config.n_starts == 1:
        _golden_section(evaluate, lo, hi, resolution)
    else:
        width = span / config.n_starts
        for i in range(config.n_starts):
            a = lo + i * width
            b = a + width
            evaluate(a + 0.5 * width)
            _golden_section(evaluate, a, b, resolution)

    best_theta = min(trace, key=lambda p: p[1])[0]
    offsets = np.arange(-config.refine_halfwidth, config.refine_halfwidth + 1)
    for theta in np.clip(best_theta + offsets * resolution, lo, hi):
        evaluate(float(theta))

    if not any(np.isfinite(v) for _, v in trace):
        raise ValueError(f"no finite objective inside bracket ({lo}, {hi})")
    theta_star, value = min(trace, key=lambda p: p[1])
    return ProfileResult(
        theta_star=theta_star,
        value=value,
        trace=tuple(trace),
        segmentation=cache[theta_star],
    )


def recompute_cost(ts: TimeSeries, cost, penalty: PenaltySpec, seg: Segmentation,
                   theta0=None) -> float:
    """Independently re-evaluate the penalized objective of a segmentation.

    Sums per-segment cost plus penalty, using the normal-state evaluation at
    theta0 for Normal segments and the fully minimized evaluation otherwise.
    Stateless segmentations use the fully minimized cost and ``p_uniform``
    throughout.  Validates alternation before evaluating.
    """
    bounds = seg.boundaries()
    if bounds.shape[0] < 2 or bounds[0] != 0 or bounds[-1] != seg.n:
        raise ValueError("malformed segmentation boundaries")
    if np.any(np.diff(bounds) <= 0):
        raise ValueError("changepoints must be strictly increasing inside (0, n)")

    total = 0.0
    if seg.states:
        if len(seg.states) != bounds.shape[0] - 1:
            raise ValueError("states do not match the number of segments")
        for a, b in zip(seg.states, seg.states[1:]):
            if a == b or a not in (NORMAL, EPIDEMIC) or b not in (NORMAL, EPIDEMIC):
                raise ValueError(f"states must alternate, got {seg.states}")
        if len(seg.states) == 1 and seg.states[0] not in (NORMAL, EPIDEMIC):
            raise ValueError(f"unknown state {seg.states[0]!r}")
        if theta0 is None:
            theta0 = seg.normal_param
        theta0 = cost.validate_theta0(theta0)
        for (t, s), state in zip(seg.segments(), seg.states):
            if state == NORMAL:
                c = cost.normal_costs(ts, np.array([t]), s, theta0)[0]
                total += float(c) + penalty.p_normal
            else:
                c = cost.epidemic_costs(ts, np.array([t]), s)[0]
                total += float(c) + penalty.p_epidemic
    else:
        for t, s in seg.segments():
            c = cost.epidemic_costs(ts, np.array([t]), s)[0]
            total += float(c) + penalty.p_uniform
    return total
