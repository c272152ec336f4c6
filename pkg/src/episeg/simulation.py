"""Synthetic data generators for the benchmark protocols.

Three labelled-sequence generators, all driven by numpy's PCG64 bit stream
with Gaussian noise drawn through the inverse normal CDF so that output is
bit-reproducible for a given seed across platforms and numpy versions.
Replication streams are split with ``replication_seed``, which hashes
(base seed, replication index) through a SeedSequence; streams never
overlap and individual replications can be regenerated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .segmenters import EPIDEMIC, NORMAL

EPIDEMIC_MEAN = "epidemic-mean"
SHORT_SEGMENT = "short-segment"
PVALUES = "pvalues"

# Piecewise structure of the p-value protocol: fractions of n per piece and
# the mean of the underlying Gaussian on each piece.  Piece 5 alternates
# between two means point by point; pieces 0 and 1 are distinct means but
# one contiguous non-null stretch, so the boundary between them is not a
# change-point.
_PVALUE_FRACTIONS = (0.025, 0.025, 0.30, 0.025, 0.30, 0.025, 0.30)
_PVALUE_MEANS = (1.0, -1.5, 0.0, 1.5, 0.0, None, 0.0)
_PVALUE_ALT_MEANS = (-1.5, 1.0)


@dataclass(frozen=True)
class DgpSpec:
    """Configuration of one synthetic sequence."""

    protocol: str
    n: int
    seed: int = 0
    m: int | None = None
    scenario: str = "A"
    L: int | None = None
    delta: float | None = None
    sigma: float = 1.0


@dataclass(frozen=True, eq=False)
class LabeledSequence:
    """A generated sequence with its ground-truth labels."""

    values: np.ndarray
    true_changepoints: np.ndarray
    true_states: tuple[str, ...]
    true_means: np.ndarray
    true_sds: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def segments(self) -> list[tuple[int, int]]:
        b = np.concatenate(([0], self.true_changepoints, [self.n]))
        return [(int(b[i]), int(b[i + 1])) for i in range(len(b) - 1)]


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _standard_normal(rng, size):
    # Inverse-CDF sampling: one uniform per deviate, deterministic given the
    # bit stream (the default ziggurat consumes a variable number of draws).
    return special.ndtri(rng.random(size))


def replication_seed(base_seed: int, rep: int) -> int:
    """Derive the seed of replication ``rep`` from a base seed."""
    ss = np.random.SeedSequence((int(base_seed), int(rep)))
    return int(ss.generate_state(1, np.uint64)[0])


def largest_remainder_lengths(n: int, fractions) -> np.ndarray:
    """Round n * fractions to integers that sum exactly to n.

    Floors every share, then hands the remaining units to the largest
    fractional remainders (ties to the earliest piece).
    """
    raw = n * np.asarray(fractions, dtype=float)
    base = np.floor(raw).astype(np.int64)
    short = n - int(base.sum())
    if short:
        order = np.lexsort((np.arange(len(raw)), -(raw - base)))
        base[order[:short]] += 1
    return base


def generate(spec: DgpSpec) -> LabeledSequence:
    """Dispatch to the generator named by ``spec.protocol``."""
    if spec.protocol == EPIDEMIC_MEAN:
        return generate_epidemic_mean(spec)
    if spec.protocol == SHORT_SEGMENT:
        return generate_short_segments(spec)
    if spec.protocol == PVALUES:
        return generate_pvalues(spec)
    raise ValueError(f"unknown protocol: {spec.protocol!r}")


def generate_epidemic_mean(spec: DgpSpec) -> LabeledSequence:
    """Blocks of background alternating with epidemic mean shifts.

    The sequence splits into (m + 1) / 2 equal blocks; each block opens with
    a background stretch at mean 0 and closes with an epidemic stretch whose
    mean has magnitude U(1, 1.25) and random sign.  The epidemic-to-normal
    length ratio is U(0.2, 0.5).  Scenario "A" uses unit noise everywhere;
    scenario "B" uses sd 1.5 on background and sd 1 on epidemic stretches.
    Draw order per block: ratio, sign, magnitude; then one noise vector.
    """
    n, m = spec.n, spec.m
    if m is None or m < 1 or m % 2 == 0:
        raise ValueError(f"m must be a positive odd integer, got {m}")
    if n < 10 * (m + 1):
        raise ValueError(f"need n >= 10 * (m + 1) = {10 * (m + 1)}, got {n}")
    if spec.scenario not in ("A", "B"):
        raise ValueError(f"scenario must be 'A' or 'B', got {spec.scenario!r}")
    sd_normal, sd_epidemic = (1.0, 1.0) if spec.scenario == "A" else (1.5, 1.0)

    rng = _rng(spec.seed)
    blocks = (m + 1) // 2
    bounds = [(b * n) // blocks for b in range(blocks + 1)]

    cps: list[int] = []
    states: list[str] = []
    means = np.zeros(n)
    sds = np.empty(n)
    for b in range(blocks):
        start, end = bounds[b], bounds[b + 1]
        ratio = 0.2 + 0.3 * rng.random()
        sign = 1.0 - 2.0 * (rng.random() < 0.5)
        magnitude = 1.0 + 0.25 * rng.random()
        split = start + int((end - start) / (1.0 + ratio))
        means[split:end] = sign * magnitude
        sds[start:split] = sd_normal
        sds[split:end] = sd_epidemic
        states += [NORMAL, EPIDEMIC]
        cps.append(split)
        if b < blocks - 1:
            cps.append(end)

    values = means + sds * _standard_normal(rng, n)
    return LabeledSequence(
        values=values,
        true_changepoints=np.asarray(cps, dtype=np.int64),
        true_states=tuple(states),
        true_means=means,
        true_sds=sds,
    )


def generate_short_segments(spec: DgpSpec) -> LabeledSequence:
    """Sparse short elevated intervals in a long zero-mean background.

    Plants K = n / 1000 + 1 intervals of length L ending at floor(k n / K),
    each raising the mean by delta, with N(0, sigma^2) noise throughout.
    With delta = 0 the sequence is pure noise and every state is labelled
    Normal by convention, while the interval boundaries stay recorded.
    """
    n, L, delta = spec.n, spec.L, spec.delta
    if n < 1000 or n % 1000 != 0:
        raise ValueError(f"n must be a positive multiple of 1000, got {n}")
    if delta is None:
        raise ValueError("delta is required")
    if not (np.isfinite(spec.sigma) and spec.sigma > 0):
        raise ValueError(f"sigma must be positive, got {spec.sigma}")
    k_intervals = n // 1000 + 1
    if L is None or L < 1 or L >= n / k_intervals:
        raise ValueError(f"need 1 <= L < n / K = {n / k_intervals}, got {L}")

    means = np.zeros(n)
    cps: list[int] = []
    states: list[str] = [NORMAL]
    prev_end = 0
    for k in range(1, k_intervals + 1):
        end = (k * n) // k_intervals
        start = end - L
        if start <= prev_end:
            raise ValueError(f"intervals overlap: ({start}, {end}] touches {prev_end}")
        means[start:end] = delta
        cps.append(start)
        states += [EPIDEMIC]
        if end < n:
            cps.append(end)
            states += [NORMAL]
        prev_end = end

    rng = _rng(spec.seed)
    values = means + spec.sigma * _standard_normal(rng, n)
    if delta == 0.0:
        states = [NORMAL] * (len(cps) + 1)
    return LabeledSequence(
        values=values,
        true_changepoints=np.asarray(cps, dtype=np.int64),
        true_states=tuple(states),
        true_means=means,
        true_sds=np.full(n, float(spec.sigma)),
    )


def generate_pvalues(spec: DgpSpec) -> LabeledSequence:
    """Two-sided p-values of Gaussian observations with planted signal runs.

    Builds the piecewise mean structure in ``_PVALUE_FRACTIONS`` (largest
    remainder rounding, so the lengths always sum to n), draws unit-variance
    noise, and emits p = 2 (1 - Phi(|y|)) clamped into (0, 1).  The labels
    mark non-null stretches Epidemic; ``true_means`` holds the underlying
    Gaussian means, not the p-values.
    """
    n = spec.n
    if n < 40:
        raise ValueError(f"need n >= 40 for the piecewise structure, got {n}")
    lengths = largest_remainder_lengths(n, _PVALUE_FRACTIONS)
    if np.any(lengths <= 0):
        raise ValueError(f"n={n} leaves an empty piece: lengths {lengths.tolist()}")
    cum = np.concatenate(([0], np.cumsum(lengths)))

    means = np.zeros(n)
    for i, mu in enumerate(_PVALUE_MEANS):
        a, b = cum[i], cum[i + 1]
        if mu is None:
            pattern = np.resize(np.asarray(_PVALUE_ALT_MEANS), b - a)
            means[a:b] = pattern
        else:
            means[a:b] = mu

    # Pieces 0 and 1 are one contiguous signal run, so the change-points are
    # the boundaries after pieces 1 .. 5.
    cps = cum[2:7].astype(np.int64)
    states = (EPIDEMIC, NORMAL, EPIDEMIC, NORMAL, EPIDEMIC, NORMAL)

    rng = _rng(spec.seed)
    y = means + _standard_normal(rng, n)
    pvals = special.erfc(np.abs(y) / np.sqrt(2.0))
    pvals = np.clip(pvals, 1e-10, 1.0 - 1e-10)
    return LabeledSequence(
        values=pvals,
        true_changepoints=cps,
        true_states=states,
        true_means=means,
        true_sds=np.ones(n),
    )


def per_index_states(seq: LabeledSequence) -> np.ndarray:
    """Boolean per-index mask: True where the true state is Epidemic."""
    mask = np.zeros(seq.n, dtype=bool)
    for (t, s), state in zip(seq.segments(), seq.true_states):
        if state == EPIDEMIC:
            mask[t:s] = True
    return mask


def format_labeled_csv(seq: LabeledSequence) -> str:
    """Render a sequence as CSV text: index, value, true_mean, true_sd, state."""
    states = np.empty(seq.n, dtype=object)
    for (t, s), state in zip(seq.segments(), seq.true_states):
        states[t:s] = state
    lines = ["index,value,true_mean,true_sd,state"]
    for i in range(seq.n):
        lines.append(
            f"{i + 1},{float(seq.values[i])!r},{float(seq.true_means[i])!r},"
            f"{float(seq.true_sds[i])!r},{states[i]}"
        )
    return "\n".join(lines) + "\n"


def write_labeled_csv(seq: LabeledSequence, path) -> None:
    """Write a sequence as CSV: index, value, true_mean, true_sd, state."""
    with open(path, "w", newline="") as fh:
        fh.write(format_labeled_csv(seq))
