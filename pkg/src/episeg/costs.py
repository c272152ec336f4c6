"""Segment cost models, prefix statistics and nuisance-parameter estimators.

A segment cost is twice the negative log-likelihood of a data stretch under
a parametric family, minimized either fully (all segment parameters free,
the "epidemic" evaluation) or with the shared background parameter held
fixed (the "normal" evaluation).  Every evaluation runs in O(1) off prefix
arrays precomputed once per sequence, and the kernels accept vectors of
segment starts so dynamic-programming loops can score an entire candidate
set in one call.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

TWO_PI = 2.0 * math.pi

# Lower bound for fitted per-segment variances.  A zero-variance segment
# would otherwise yield an unbounded Gaussian likelihood.
VAR_FLOOR = 1e-8

# Values in [0, 1] are clamped to this open interval before logs are taken,
# so unit-interval data with exact 0/1 entries stays usable.
UNIT_CLAMP = 1e-10

GAUSSIAN_FULL = "gaussian_full"
GAUSSIAN_FIXED_VARIANCE = "gaussian_fixed_variance"
BETA = "beta"

_BETA_MLE_MAX_ITER = 100
_BETA_MLE_TOL = 1e-8
# Fitted Beta shapes are searched over this box, matching the fallback grid.
# An unbounded search lets two near-equal points support an arbitrarily
# concentrated fit whose likelihood gain dwarfs any penalty.
_BETA_SHAPE_LO = 1e-2
_BETA_SHAPE_HI = 1e2
# Numerical guard for the unconstrained stage only; boundary lanes are
# resolved exactly on the box faces afterwards.
_BETA_NEWTON_CAP = 1e8


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Immutable sequence with prefix statistics for O(1) segment sums.

    Prefix arrays have length ``n + 1`` with a leading zero, so the sum of
    values over the half-open segment ``(t, s]`` is ``prefix[s] - prefix[t]``.
    ``prefix_log``/``prefix_log1m`` are present only when every value lies in
    the unit interval; they are built from values clamped away from 0 and 1.
    All arrays are frozen, so a TimeSeries can be shared across threads.
    """

    values: np.ndarray
    prefix_sum: np.ndarray
    prefix_sumsq: np.ndarray
    prefix_log: np.ndarray | None
    prefix_log1m: np.ndarray | None

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def has_unit_support(self) -> bool:
        return self.prefix_log is not None


def build_timeseries(values) -> TimeSeries:
    """Validate a 1-d float sequence and precompute its prefix statistics."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d sequence, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty sequence")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueError(f"non-finite value at index {int(bad[0])}")
    arr = arr.copy()

    n = arr.size
    prefix_sum = np.zeros(n + 1)
    np.cumsum(arr, out=prefix_sum[1:])
    prefix_sumsq = np.zeros(n + 1)
    np.cumsum(arr * arr, out=prefix_sumsq[1:])

    prefix_log = None
    prefix_log1m = None
    if np.all((arr >= 0.0) & (arr <= 1.0)):
        clamped = np.clip(arr, UNIT_CLAMP, 1.0 - UNIT_CLAMP)
        prefix_log = np.zeros(n + 1)
        np.cumsum(np.log(clamped), out=prefix_log[1:])
        prefix_log1m = np.zeros(n + 1)
        np.cumsum(np.log1p(-clamped), out=prefix_log1m[1:])

    for a in (arr, prefix_sum, prefix_sumsq, prefix_log, prefix_log1m):
        if a is not None:
            a.setflags(write=False)
    return TimeSeries(arr, prefix_sum, prefix_sumsq, prefix_log, prefix_log1m)


def _check_segment(ts: TimeSeries, t: int, s: int, min_len: int) -> None:
    n = ts.n
    if not (0 <= t < s <= n):
        raise ValueError(f"invalid segment ({t}, {s}] for sequence of length {n}")
    if s - t < min_len:
        raise ValueError(
            f"segment too short: ({t}, {s}] has {s - t} points, need {min_len}"
        )


# ---------------------------------------------------------------------------
# Vectorized kernels.  ``starts`` is an integer array of segment starts; the
# shared right endpoint ``end`` is exclusive of nothing: segments are (t, end].
# Feasibility (segment length) is the caller's responsibility.
# ---------------------------------------------------------------------------


def _gauss_full_kernel(ts, starts, end, var_floor):
    k = (end - starts).astype(float) if isinstance(starts, np.ndarray) else float(end - starts)
    seg_sum = ts.prefix_sum[end] - ts.prefix_sum[starts]
    seg_sq = ts.prefix_sumsq[end] - ts.prefix_sumsq[starts]
    rss = np.maximum(seg_sq - seg_sum * seg_sum / k, 0.0)
    var = np.maximum(rss / k, var_floor)
    return k * np.log(TWO_PI * var) + rss / var


def _gauss_normal_kernel(ts, starts, end, mean0, var_floor):
    k = (end - starts).astype(float) if isinstance(starts, np.ndarray) else float(end - starts)
    seg_sum = ts.prefix_sum[end] - ts.prefix_sum[starts]
    seg_sq = ts.prefix_sumsq[end] - ts.prefix_sumsq[starts]
    ss = np.maximum(seg_sq - 2.0 * mean0 * seg_sum + k * mean0 * mean0, 0.0)
    var = np.maximum(ss / k, var_floor)
    return k * np.log(TWO_PI * var) + ss / var


def _gauss_fixed_kernel(ts, starts, end, sigma2, mean0=None):
    k = (end - starts).astype(float) if isinstance(starts, np.ndarray) else float(end - starts)
    seg_sum = ts.prefix_sum[end] - ts.prefix_sum[starts]
    seg_sq = ts.prefix_sumsq[end] - ts.prefix_sumsq[starts]
    if mean0 is None:
        ss = np.maximum(seg_sq - seg_sum * seg_sum / k, 0.0)
    else:
        ss = np.maximum(seg_sq - 2.0 * mean0 * seg_sum + k * mean0 * mean0, 0.0)
    return k * np.log(TWO_PI * sigma2) + ss / sigma2


def _beta_fixed_kernel(ts, starts, end, alpha, beta):
    k = (end - starts).astype(float) if isinstance(starts, np.ndarray) else float(end - starts)
    s1 = ts.prefix_log[end] - ts.prefix_log[starts]
    s2 = ts.prefix_log1m[end] - ts.prefix_log1m[starts]
    return -2.0 * ((alpha - 1.0) * s1 + (beta - 1.0) * s2 - k * special.betaln(alpha, beta))


def _beta_mle_face(c_fixed, target, x0, max_iter=60, tol=_BETA_MLE_TOL):
    """Solve digamma(x) - digamma(x + c) = target for x in the shape box.

    This is the stationarity condition of the Beta log-likelihood along a
    box face where the other shape is fixed at ``c_fixed``.  The left side
    is strictly increasing in x, so safeguarded scalar Newton converges;
    an end point counts as solved when the score pushes outward there.
    """
    x = np.clip(x0, _BETA_SHAPE_LO, _BETA_SHAPE_HI)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(max_iter):
        f = special.digamma(x) - special.digamma(x + c_fixed) - target
        done = (
            (np.abs(f) <= tol)
            | ((x >= _BETA_SHAPE_HI) & (f <= 0.0))
            | ((x <= _BETA_SHAPE_LO) & (f >= 0.0))
        )
        if done.all():
            break
        d = special.polygamma(1, x) - special.polygamma(1, x + c_fixed)
        x_new = x - f / d
        x_new = np.where(np.isfinite(x_new) & (x_new > 0.0), x_new, x * 0.5)
        x = np.where(done, x, np.clip(x_new, _BETA_SHAPE_LO, _BETA_SHAPE_HI))
    f = special.digamma(x) - special.digamma(x + c_fixed) - target
    ok = (
        (np.abs(f) <= tol)
        | ((x >= _BETA_SHAPE_HI) & (f <= 0.0))
        | ((x <= _BETA_SHAPE_LO) & (f >= 0.0))
    )
    return x, ok


def _beta_box_solve(mean_log, mean_log1m, a0, b0):
    """Constrained Beta MLE on the shape box when the free optimum is outside.

    The log-likelihood is concave, so the constrained maximum lies on the
    box boundary: solve all four faces with the 1-D Newton and keep the
    best.  Returns per-point objective values alongside the shapes.
    """
    lo, hi = _BETA_SHAPE_LO, _BETA_SHAPE_HI
    m = mean_log.shape[0]
    best_obj = np.full(m, -np.inf)
    best_a = np.full(m, 1.0)
    best_b = np.full(m, 1.0)
    any_ok = np.zeros(m, dtype=bool)
    faces = (
        (lo, mean_log1m, b0, "a"),
        (hi, mean_log1m, b0, "a"),
        (lo, mean_log, a0, "b"),
        (hi, mean_log, a0, "b"),
    )
    for c_fixed, target, x0, fixed_coord in faces:
        x, ok = _beta_mle_face(c_fixed, target, x0)
        if fixed_coord == "a":
            fa, fb = np.full(m, c_fixed), x
        else:
            fa, fb = x, np.full(m, c_fixed)
        obj = (fa - 1.0) * mean_log + (fb - 1.0) * mean_log1m - special.betaln(fa, fb)
        obj = np.where(ok, obj, -np.inf)
        better = obj > best_obj
        best_obj = np.where(better, obj, best_obj)
        best_a = np.where(better, fa, best_a)
        best_b = np.where(better, fb, best_b)
        any_ok |= ok
    return best_a, best_b, any_ok


def _beta_mle(mean_log, mean_log1m, mean, var, max_iter=_BETA_MLE_MAX_ITER, tol=_BETA_MLE_TOL):
    """Constrained Beta MLE over the shape box, vectorized over segments.

    Stage one runs unconstrained Newton on the score equations; the Beta
    log-likelihood is concave in (alpha, beta), so the stationary point is
    the free MLE.  Lanes whose free optimum lies inside the shape box are
    done; by concavity every other lane's constrained optimum sits on the
    box boundary and is resolved exactly by the four face solves.  Each
    lane depends only on its own moments: converged lanes are frozen,
    which keeps results identical regardless of which other segments share
    the call.
    """
    v = np.maximum(var, 1e-12)
    scale = mean * (1.0 - mean) / v - 1.0
    a = mean * scale
    b = (1.0 - mean) * scale
    bad = ~np.isfinite(a) | ~np.isfinite(b) | (a <= 0.0) | (b <= 0.0)
    a = np.clip(np.where(bad, 1.0, a), 1e-2, 1e6)
    b = np.clip(np.where(bad, 1.0, b), 1e-2, 1e6)

    active = np.ones(a.shape, dtype=bool)
    for _ in range(max_iter):
        psi_ab = special.digamma(a + b)
        f1 = special.digamma(a) - psi_ab - mean_log
        f2 = special.digamma(b) - psi_ab - mean_log1m
        active &= (np.abs(f1) > tol) | (np.abs(f2) > tol)
        if not active.any():
            break
        taa = special.polygamma(1, a)
        tbb = special.polygamma(1, b)
        tab = special.polygamma(1, a + b)
        ja = taa - tab
        jb = tbb - tab
        det = ja * jb - tab * tab
        det = np.where(det > 0.0, det, np.nan)
        da = (jb * f1 + tab * f2) / det
        db = (tab * f1 + ja * f2) / det
        a_new = a - da
        b_new = b - db
        # Halve back toward the current point whenever Newton leaves the domain.
        a_new = np.where(np.isfinite(a_new) & (a_new > 0.0), a_new, a * 0.5)
        b_new = np.where(np.isfinite(b_new) & (b_new > 0.0), b_new, b * 0.5)
        a = np.where(active, np.minimum(a_new, _BETA_NEWTON_CAP), a)
        b = np.where(active, np.minimum(b_new, _BETA_NEWTON_CAP), b)

    psi_ab = special.digamma(a + b)
    f1 = special.digamma(a) - psi_ab - mean_log
    f2 = special.digamma(b) - psi_ab - mean_log1m
    free_ok = (np.abs(f1) <= tol) & (np.abs(f2) <= tol)
    in_box = (
        (a >= _BETA_SHAPE_LO) & (a <= _BETA_SHAPE_HI)
        & (b >= _BETA_SHAPE_LO) & (b <= _BETA_SHAPE_HI)
    )
    # Inside the box and converged: the free MLE is the answer.  Outside the
    # box: the constrained optimum is on the boundary, handled by the face
    # solves.  Inside but stuck: fall through unconverged to the caller's
    # grid fallback.
    converged = free_ok & in_box
    if not in_box.all():
        idx = np.flatnonzero(~in_box)
        ba, bb, ok = _beta_box_solve(
            mean_log[idx], mean_log1m[idx],
            np.clip(a[idx], _BETA_SHAPE_LO, _BETA_SHAPE_HI),
            np.clip(b[idx], _BETA_SHAPE_LO, _BETA_SHAPE_HI),
        )
        a = a.copy()
        b = b.copy()
        a[idx] = ba
        b[idx] = bb
        converged[idx] = ok
    return a, b, converged


_BETA_GRID_CACHE = None


def _beta_grid():
    global _BETA_GRID_CACHE
    if _BETA_GRID_CACHE is None:
        g = np.logspace(-2.0, 2.0, 50)
        ga, gb = np.meshgrid(g, g, indexing="ij")
        ga = ga.ravel()
        gb = gb.ravel()
        _BETA_GRID_CACHE = (ga, gb, special.betaln(ga, gb))
    return _BETA_GRID_CACHE


def _beta_mle_kernel(ts, starts, end, warn=False):
    """Minimized Beta cost for segments (t, end].  Returns (cost, alpha, beta)."""
    starts_arr = np.atleast_1d(np.asarray(starts, dtype=np.int64))
    k = (end - starts_arr).astype(float)
    s1 = ts.prefix_log[end] - ts.prefix_log[starts_arr]
    s2 = ts.prefix_log1m[end] - ts.prefix_log1m[starts_arr]
    seg_sum = ts.prefix_sum[end] - ts.prefix_sum[starts_arr]
    seg_sq = ts.prefix_sumsq[end] - ts.prefix_sumsq[starts_arr]
    mean = seg_sum / k
    var = np.maximum(seg_sq / k - mean * mean, 0.0)

    a, b, converged = _beta_mle(s1 / k, s2 / k, mean, var)
    cost = -2.0 * ((a - 1.0) * s1 + (b - 1.0) * s2 - k * special.betaln(a, b))

    if not converged.all():
        if warn:
            warnings.warn(
                "Beta MLE did not converge for some segments; using grid fallback",
                RuntimeWarning,
                stacklevel=3,
            )
        ga, gb, glb = _beta_grid()
        for i in np.flatnonzero(~converged):
            grid_cost = -2.0 * ((ga - 1.0) * s1[i] + (gb - 1.0) * s2[i] - k[i] * glb)
            j = int(np.argmin(grid_cost))
            cost[i] = grid_cost[j]
            a[i] = ga[j]
            b[i] = gb[j]
    return cost, a, b


# ---------------------------------------------------------------------------
# Scalar cost operations.
# ---------------------------------------------------------------------------


def cost_gaussian_full(ts: TimeSeries, t: int, s: int, min_seg_len: int = 2,
                       var_floor: float = VAR_FLOOR) -> float:
    """Gaussian cost of (t, s] minimized over both mean and variance.

    Equals ``k * log(2 pi var) + rss / var`` with ``var`` the variance MLE
    floored at ``var_floor`` and ``rss`` the residual sum of squares about
    the segment mean; away from the floor this is ``k * log(2 pi var) + k``.
    """
    _check_segment(ts, t, s, min_seg_len)
    return float(_gauss_full_kernel(ts, np.array([t]), s, var_floor)[0])


def cost_gaussian_normalstate(ts: TimeSeries, t: int, s: int, mean0: float,
                              min_seg_len: int = 2,
                              var_floor: float = VAR_FLOOR) -> float:
    """Gaussian cost of (t, s] with the mean pinned at ``mean0``.

    The variance is profiled out per segment: ``var = max(ss / k, var_floor)``
    with ``ss`` the sum of squared deviations from ``mean0``.
    """
    _check_segment(ts, t, s, min_seg_len)
    return float(_gauss_normal_kernel(ts, np.array([t]), s, float(mean0), var_floor)[0])


def cost_gaussian_fixedvar(ts: TimeSeries, t: int, s: int, sigma2: float,
                           mean0: float | None = None) -> float:
    """Gaussian cost of (t, s] at a known shared variance ``sigma2``.

    With ``mean0`` given the segment mean is pinned; otherwise it is fitted.
    Well-defined on single points, so the minimum segment length is 1.
    """
    if not (np.isfinite(sigma2) and sigma2 > 0.0):
        raise ValueError(f"invalid model: sigma2 must be positive, got {sigma2}")
    _check_segment(ts, t, s, 1)
    m0 = None if mean0 is None else float(mean0)
    return float(_gauss_fixed_kernel(ts, np.array([t]), s, float(sigma2), m0)[0])


def cost_beta(ts: TimeSeries, t: int, s: int, theta=None,
              min_seg_len: int | None = None) -> float:
    """Beta cost of (t, s]: fixed (alpha, beta) if ``theta`` is given, else MLE.

    At ``theta = (1, 1)`` the Beta density is uniform and the cost is exactly
    zero for every segment.  Requires unit-interval data.  Fixed evaluations
    accept any positive shapes; the fitted search is confined to the shape
    box [1e-2, 1e2]^2 so short segments cannot buy an arbitrarily
    concentrated fit.
    """
    if ts.prefix_log is None:
        raise ValueError("values outside (0, 1): Beta cost needs unit-interval data")
    if min_seg_len is None:
        min_seg_len = 1 if theta is not None else 2
    _check_segment(ts, t, s, min_seg_len)
    if theta is not None:
        alpha, beta = _validate_beta_theta(theta)
        return float(_beta_fixed_kernel(ts, np.array([t]), s, alpha, beta)[0])
    cost, _, _ = _beta_mle_kernel(ts, np.array([t]), s, warn=True)
    return float(cost[0])


def _validate_beta_theta(theta):
    try:
        alpha, beta = (float(x) for x in theta)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"Beta parameter must be a positive pair, got {theta!r}") from exc
    if not (np.isfinite(alpha) and np.isfinite(beta) and alpha > 0.0 and beta > 0.0):
        raise ValueError(f"Beta parameter must be a positive pair, got {theta!r}")
    return alpha, beta


# ---------------------------------------------------------------------------
# Background-parameter estimators.
# ---------------------------------------------------------------------------


def estimate_variance_localreg(ts: TimeSeries, h: int = 10) -> float:
    """Variance estimate from residuals about a centered moving average.

    Each value is compared with the mean of its ``2 h + 1`` neighbours; near
    the boundaries the window shrinks symmetrically so it stays centered.
    Sequences shorter than ``2 h + 1`` fall back to the plain variance with
    a warning.
    """
    if h < 1:
        raise ValueError(f"window half-width must be positive, got {h}")
    n = ts.n
    if n < 2 * h + 1:
        warnings.warn(
            f"sequence of length {n} is shorter than the smoothing window "
            f"({2 * h + 1}); falling back to the plain variance",
            RuntimeWarning,
            stacklevel=2,
        )
        return float(np.var(ts.values))
    idx = np.arange(n)
    hw = np.minimum(h, np.minimum(idx, n - 1 - idx))
    local_mean = (ts.prefix_sum[idx + hw + 1] - ts.prefix_sum[idx - hw]) / (2 * hw + 1)
    return float(np.mean((ts.values - local_mean) ** 2))


def estimate_variance_mad(ts: TimeSeries) -> float:
    """Robust variance estimate from the scaled MAD of first differences."""
    if ts.n < 2:
        raise ValueError("need at least two observations to difference")
    d = np.diff(ts.values)
    mad = np.median(np.abs(d - np.median(d)))
    sigma = 1.4826 * mad / math.sqrt(2.0)
    return float(sigma * sigma)


def estimate_normal_mean_plugin(ts: TimeSeries, w: int = 10) -> float:
    """Background mean estimate: median of all sliding window-``w`` means.

    Robust when the background occupies the majority of the sequence, since
    windows overlapping short deviating stretches land in the tails of the
    window-mean distribution.
    """
    if w < 1:
        raise ValueError(f"window must be positive, got {w}")
    n = ts.n
    if n < w:
        raise ValueError(f"sequence shorter than window: n={n}, w={w}")
    means = (ts.prefix_sum[w:] - ts.prefix_sum[: n - w + 1]) / w
    return float(np.median(means))


# ---------------------------------------------------------------------------
# Penalties.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PenaltySpec:
    """Per-segment penalties: normal-state, epidemic-state, and single-state.

    ``p_uniform`` is the penalty used by the stateless segmenters (optimal
    partitioning, PELT); the two-state segmenters use the other pair.
    """

    p_normal: float
    p_epidemic: float
    p_uniform: float

    def __post_init__(self):
        for name in ("p_normal", "p_epidemic", "p_uniform"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and non-negative, got {v}")


def bic_penalties(family: str, n: int) -> PenaltySpec:
    """Default BIC-style penalties: log(n) per recorded parameter.

    An extra epidemic segment records its boundary plus the free segment
    parameters; an extra normal segment records its boundary plus any
    per-segment nuisance parameter (none for the Beta family, the variance
    for the free-variance Gaussian family).  Stateless fits record the
    boundary plus all segment parameters.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 for a BIC penalty, got {n}")
    ln = math.log(n)
    if family == GAUSSIAN_FULL:
        return PenaltySpec(2.0 * ln, 3.0 * ln, 3.0 * ln)
    if family == GAUSSIAN_FIXED_VARIANCE:
        return PenaltySpec(ln, 2.0 * ln, 2.0 * ln)
    if family == BETA:
        return PenaltySpec(ln, 3.0 * ln, 3.0 * ln)
    raise ValueError(f"unknown cost family: {family!r}")


# ---------------------------------------------------------------------------
# Cost models.  A model bundles a family with its fixed hyper-parameters and
# exposes vectorized normal/epidemic evaluations plus per-segment fits.
# ---------------------------------------------------------------------------


class GaussianFullCost:
    """Gaussian segments with free mean and variance.

    The normal state pins the mean at theta0 and profiles the variance; the
    epidemic state fits both.  Needs two points per segment so the variance
    MLE is defined.
    """

    family = GAUSSIAN_FULL
    scalar_theta0 = True

    def __init__(self, min_seg_len: int | None = None, var_floor: float = VAR_FLOOR):
        min_len = 2 if min_seg_len is None else int(min_seg_len)
        if min_len < 1:
            raise ValueError(f"min_seg_len must be >= 1, got {min_seg_len}")
        self.min_len_normal = min_len
        self.min_len_epidemic = min_len
        self.var_floor = float(var_floor)

    def validate_theta0(self, theta0) -> float:
        v = float(theta0)
        if not np.isfinite(v):
            raise ValueError(f"theta0 must be finite, got {theta0!r}")
        return v

    def normal_costs(self, ts, starts, end, theta0):
        return _gauss_normal_kernel(ts, starts, end, theta0, self.var_floor)

    def epidemic_costs(self, ts, starts, end):
        return _gauss_full_kernel(ts, starts, end, self.var_floor)

    def normal_params(self, ts, t, s, theta0):
        k = float(s - t)
        seg_sum = ts.prefix_sum[s] - ts.prefix_sum[t]
        seg_sq = ts.prefix_sumsq[s] - ts.prefix_sumsq[t]
        ss = max(seg_sq - 2.0 * theta0 * seg_sum + k * theta0 * theta0, 0.0)
        return {"mean": float(theta0), "var": float(max(ss / k, self.var_floor))}

    def epidemic_params(self, ts, t, s):
        k = float(s - t)
        seg_sum = ts.prefix_sum[s] - ts.prefix_sum[t]
        seg_sq = ts.prefix_sumsq[s] - ts.prefix_sumsq[t]
        mean = seg_sum / k
        rss = max(seg_sq - seg_sum * seg_sum / k, 0.0)
        return {"mean": float(mean), "var": float(max(rss / k, self.var_floor))}


class GaussianFixedVarianceCost:
    """Gaussian segments sharing one known (pre-estimated) variance.

    Only means vary, so single-point segments are allowed.
    """

    family = GAUSSIAN_FIXED_VARIANCE
    scalar_theta0 = True

    def __init__(self, sigma2: float, min_seg_len: int | None = None):
        if not (np.isfinite(sigma2) and sigma2 > 0.0):
            raise ValueError(f"invalid model: sigma2 must be positive, got {sigma2}")
        min_len = 1 if min_seg_len is None else int(min_seg_len)
        if min_len < 1:
            raise ValueError(f"min_seg_len must be >= 1, got {min_seg_len}")
        self.sigma2 = float(sigma2)
        self.min_len_normal = min_len
        self.min_len_epidemic = min_len

    def validate_theta0(self, theta0) -> float:
        v = float(theta0)
        if not np.isfinite(v):
            raise ValueError(f"theta0 must be finite, got {theta0!r}")
        return v

    def normal_costs(self, ts, starts, end, theta0):
        return _gauss_fixed_kernel(ts, starts, end, self.sigma2, theta0)

    def epidemic_costs(self, ts, starts, end):
        return _gauss_fixed_kernel(ts, starts, end, self.sigma2, None)

    def normal_params(self, ts, t, s, theta0):
        return {"mean": float(theta0), "var": self.sigma2}

    def epidemic_params(self, ts, t, s):
        mean = (ts.prefix_sum[s] - ts.prefix_sum[t]) / float(s - t)
        return {"mean": float(mean), "var": self.sigma2}


class BetaCost:
    """Beta-distributed unit-interval data (p-value segmentation).

    The normal state evaluates at a fixed (alpha, beta) pair, typically the
    uniform (1, 1); the epidemic state fits both shape parameters by Newton
    iteration over the shape box [1e-2, 1e2]^2, with a coarse-grid fallback
    over the same box.
    """

    family = BETA
    scalar_theta0 = False

    def __init__(self, min_seg_len: int | None = None):
        if min_seg_len is None:
            self.min_len_normal = 1
            self.min_len_epidemic = 2
        else:
            min_len = int(min_seg_len)
            if min_len < 1:
                raise ValueError(f"min_seg_len must be >= 1, got {min_seg_len}")
            self.min_len_normal = min_len
            self.min_len_epidemic = max(min_len, 2)

    def validate_theta0(self, theta0):
        return _validate_beta_theta(theta0)

    def _require_unit(self, ts):
        if ts.prefix_log is None:
            raise ValueError("values outside (0, 1): Beta cost needs unit-interval data")

    def normal_costs(self, ts, starts, end, theta0):
        self._require_unit(ts)
        alpha, beta = theta0
        return _beta_fixed_kernel(ts, starts, end, alpha, beta)

    def epidemic_costs(self, ts, starts, end):
        self._require_unit(ts)
        cost, _, _ = _beta_mle_kernel(ts, starts, end)
        return cost

    def normal_params(self, ts, t, s, theta0):
        return {"alpha": float(theta0[0]), "beta": float(theta0[1])}

    def epidemic_params(self, ts, t, s):
        self._require_unit(ts)
        _, a, b = _beta_mle_kernel(ts, np.array([t]), s)
        return {"alpha": float(a[0]), "beta": float(b[0])}


def make_cost_model(family: str, **kwargs):
    """Construct a cost model by family name."""
    if family == GAUSSIAN_FULL:
        return GaussianFullCost(**kwargs)
    if family == GAUSSIAN_FIXED_VARIANCE:
        return GaussianFixedVarianceCost(**kwargs)
    if family == BETA:
        return BetaCost(**kwargs)
    raise ValueError(f"unknown cost family: {family!r}")
