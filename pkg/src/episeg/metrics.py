"""Evaluation measures for segmentations against labelled truth.

Conventions for empty denominators: error rates (FPR, FDR, FNR, MDR) are 0
when nothing was estimated/rejected/accepted, detection rates (TPR,
Sensitivity) are 1 when there is nothing to detect, and Precision is 1 when
nothing was flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .costs import PenaltySpec, TimeSeries
from .segmenters import EPIDEMIC, NORMAL, Segmentation, recompute_cost
from .simulation import LabeledSequence, per_index_states


@dataclass
class EvalReport:
    """One replication's measures; fields stay None when not applicable."""

    tpr: float | None = None
    fpr: float | None = None
    mse: float | None = None
    sensitivity: float | None = None
    precision: float | None = None
    fdr: float | None = None
    fnr: float | None = None
    mdr: float | None = None
    m_est: int | None = None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def tpr_fpr(est: Segmentation, truth: LabeledSequence, tol: int = 10) -> tuple[float, float]:
    """Change-point detection rates under one-to-one matching within ``tol``.

    Candidate (true, estimated) pairs within ``tol`` indices are matched
    greedily by increasing distance, each point used at most once.  TPR is
    the matched fraction of true points, FPR the unmatched fraction of
    estimated points.
    """
    true_cps = np.asarray(truth.true_changepoints, dtype=np.int64)
    est_cps = np.asarray(est.changepoints, dtype=np.int64)
    pairs = [
        (abs(int(t) - int(e)), ti, ei)
        for ti, t in enumerate(true_cps)
        for ei, e in enumerate(est_cps)
        if abs(int(t) - int(e)) <= tol
    ]
    pairs.sort()
    used_true: set[int] = set()
    used_est: set[int] = set()
    for _, ti, ei in pairs:
        if ti not in used_true and ei not in used_est:
            used_true.add(ti)
            used_est.add(ei)
    matched = len(used_true)
    tpr = matched / true_cps.size if true_cps.size else 1.0
    fpr = (est_cps.size - matched) / est_cps.size if est_cps.size else 0.0
    return float(tpr), float(fpr)


def fitted_param_path(est: Segmentation) -> np.ndarray:
    """Per-index fitted mean, constant over each estimated segment."""
    path = np.empty(est.n)
    for (t, s), rec in zip(est.segments(), est.params):
        path[t:s] = rec["mean"]
    return path


def param_mse(est: Segmentation, truth: LabeledSequence) -> float:
    """Root mean squared error of the fitted per-index mean path."""
    path = fitted_param_path(est)
    return float(math.sqrt(np.mean((path - truth.true_means) ** 2)))


def _epidemic_intervals(truth: LabeledSequence) -> list[tuple[int, int]]:
    return [
        (t, s) for (t, s), state in zip(truth.segments(), truth.true_states)
        if state == EPIDEMIC
    ]


def sensitivity_precision(est: Segmentation, truth: LabeledSequence,
                          L: int) -> tuple[float, float]:
    """Interval detection rates for the short-segment protocol.

    An estimated segment counts as a detected signal when its length is
    below 2 L, regardless of any state label, so stateless and two-state
    fits are scored identically.  A true interval is correctly detected
    when some detected segment intersects it.  Sensitivity is the fraction
    of true intervals detected; Precision the fraction of detected segments
    that hit a true interval.
    """
    if L < 1:
        raise ValueError(f"L must be positive, got {L}")
    detected = [(t, s) for t, s in est.segments() if s - t < 2 * L]
    true_ints = _epidemic_intervals(truth)

    def intersects(a, b):
        return max(a[0], b[0]) < min(a[1], b[1])

    hit_true = sum(1 for ti in true_ints if any(intersects(ti, d) for d in detected))
    hit_det = sum(1 for d in detected if any(intersects(ti, d) for ti in true_ints))
    sens = hit_true / len(true_ints) if true_ints else 1.0
    prec = hit_det / len(detected) if detected else 1.0
    return float(sens), float(prec)


def multiple_testing_rates(est: Segmentation,
                           truth: LabeledSequence) -> tuple[float, float, float]:
    """Per-index FDR, FNR and MDR of a two-state fit.

    Indices inside estimated Epidemic segments count as rejections; indices
    inside true Epidemic segments are the alternatives.  FDR is the null
    fraction of rejections, FNR the alternative fraction of acceptances,
    MDR the accepted fraction of alternatives.
    """
    reject = est.state_mask()
    alt = per_index_states(truth)
    if reject.shape != alt.shape:
        raise ValueError(f"length mismatch: est n={reject.size}, truth n={alt.size}")
    n_reject = int(reject.sum())
    n_accept = reject.size - n_reject
    false_rej = int((reject & ~alt).sum())
    false_acc = int((~reject & alt).sum())
    n_alt = int(alt.sum())
    fdr = false_rej / n_reject if n_reject else 0.0
    fnr = false_acc / n_accept if n_accept else 0.0
    mdr = false_acc / n_alt if n_alt else 0.0
    return float(fdr), float(fnr), float(mdr)


def postprocess_alternating(est: Segmentation, n: int | None = None) -> Segmentation:
    """Assign alternating states to a stateless segmentation.

    The odd-numbered segments (first, third, ...) are flagged Epidemic when
    their total length is below half the sequence, otherwise the
    even-numbered ones are.  A single segment therefore stays Normal.
    """
    if est.states:
        raise ValueError("expected a stateless segmentation")
    if n is not None and n != est.n:
        raise ValueError(f"length mismatch: n={n}, segmentation has {est.n}")
    lengths = np.diff(est.boundaries())
    odd_total = int(lengths[0::2].sum())
    start = EPIDEMIC if odd_total < est.n / 2 else NORMAL
    other = NORMAL if start == EPIDEMIC else EPIDEMIC
    states = tuple(start if i % 2 == 0 else other for i in range(len(lengths)))
    return Segmentation(
        n=est.n,
        changepoints=est.changepoints,
        states=states,
        params=est.params,
        total_cost=est.total_cost,
        normal_param=est.normal_param,
        diagnostics=est.diagnostics,
    )


def bic_score(est: Segmentation, ts: TimeSeries, cost,
              homoscedastic: bool = True) -> float:
    """Model-selection score: fitted twice-negative-log-likelihood + p log n.

    With ``homoscedastic`` the parameter count assumes one shared variance:
    p = 2 m + 2 for stateless fits (boundaries plus segment means plus the
    shared background mean and variance) and p = m + 2 + #epidemic for
    two-state fits (boundaries, shared background mean and variance, one
    mean per epidemic segment).  Without it each segment additionally
    carries its own variance.
    """
    zero = PenaltySpec(0.0, 0.0, 0.0)
    loglik2 = recompute_cost(ts, cost, zero, est)
    m = est.m
    n_segments = m + 1
    if est.states:
        n_epi = sum(1 for s in est.states if s == EPIDEMIC)
        p = m + 2 + n_epi
        if not homoscedastic:
            p += n_segments - 1
    else:
        p = 2 * m + 2
        if not homoscedastic:
            p += n_segments - 1
    return float(loglik2 + p * math.log(ts.n))
