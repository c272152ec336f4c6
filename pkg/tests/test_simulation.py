"""Unit tests for the synthetic-data generators."""

import numpy as np
import pytest

from episeg import (
    EPIDEMIC,
    NORMAL,
    DgpSpec,
    format_labeled_csv,
    generate,
    largest_remainder_lengths,
    per_index_states,
    replication_seed,
)


def test_generate_dispatch_and_unknown_protocol():
    seq = generate(DgpSpec(protocol="epidemic-mean", n=100, m=1, seed=0))
    assert seq.n == 100
    with pytest.raises(ValueError, match="unknown protocol"):
        generate(DgpSpec(protocol="bogus", n=100))


def test_determinism_bit_exact():
    for spec in (
        DgpSpec(protocol="epidemic-mean", n=500, m=9, seed=123),
        DgpSpec(protocol="short-segment", n=1000, L=10, delta=2.5, seed=123),
        DgpSpec(protocol="pvalues", n=1000, seed=123),
    ):
        a = generate(spec)
        b = generate(spec)
        np.testing.assert_array_equal(a.values, b.values)
        np.testing.assert_array_equal(a.true_changepoints, b.true_changepoints)
        assert a.true_states == b.true_states
        c = generate(DgpSpec(**{**spec.__dict__, "seed": 124}))
        assert not np.array_equal(a.values, c.values)


def test_replication_seed_is_stable_and_distinct():
    s0 = replication_seed(42, 0)
    assert s0 == replication_seed(42, 0)
    seeds = {replication_seed(42, r) for r in range(1000)}
    assert len(seeds) == 1000
    assert replication_seed(43, 0) != s0


def test_largest_remainder_lengths():
    out = largest_remainder_lengths(1000, (0.025, 0.025, 0.30, 0.025, 0.30, 0.025, 0.30))
    assert out.tolist() == [25, 25, 300, 25, 300, 25, 300]
    assert out.sum() == 1000
    odd = largest_remainder_lengths(7, (0.5, 0.5))
    assert odd.sum() == 7 and sorted(odd.tolist()) == [3, 4]
    thirds = largest_remainder_lengths(100, (1 / 3, 1 / 3, 1 / 3))
    assert thirds.sum() == 100


# ---------------------------------------------------------------------------
# Epidemic-mean protocol.
# ---------------------------------------------------------------------------


def test_epidemic_mean_structure():
    spec = DgpSpec(protocol="epidemic-mean", n=2000, m=19, seed=7)
    seq = generate(spec)
    assert seq.n == 2000
    assert seq.true_changepoints.shape == (19,)
    # states alternate N,E,...,N,E over 10 blocks
    assert seq.true_states == (NORMAL, EPIDEMIC) * 10
    assert np.all(np.diff(seq.true_changepoints) > 0)
    # block ends at multiples of n/blocks sit among the change-points
    for b in range(1, 10):
        assert b * 200 in seq.true_changepoints
    # epidemic means have magnitude in [1, 1.25], background is 0
    mask = per_index_states(seq)
    mags = np.abs(seq.true_means[mask])
    assert mags.min() >= 1.0 and mags.max() <= 1.25
    assert np.all(seq.true_means[~mask] == 0.0)
    # epidemic-to-normal length ratio stays inside (0.2, 0.5) per block
    for b in range(10):
        lo, hi = 200 * b, 200 * (b + 1)
        e = int(mask[lo:hi].sum())
        ratio = e / (200 - e)
        assert 0.19 < ratio < 0.51


def test_epidemic_mean_scenarios():
    a = generate(DgpSpec(protocol="epidemic-mean", n=400, m=3, seed=5, scenario="A"))
    assert np.all(a.true_sds == 1.0)
    b = generate(DgpSpec(protocol="epidemic-mean", n=400, m=3, seed=5, scenario="B"))
    mask = per_index_states(b)
    assert np.all(b.true_sds[~mask] == 1.5)
    assert np.all(b.true_sds[mask] == 1.0)


def test_epidemic_mean_mean_changes_at_changepoints():
    seq = generate(DgpSpec(protocol="epidemic-mean", n=1000, m=9, seed=3))
    changes = np.nonzero(np.diff(seq.true_means))[0] + 1
    assert set(changes.tolist()) <= set(seq.true_changepoints.tolist())


def test_epidemic_mean_validation():
    with pytest.raises(ValueError, match="odd"):
        generate(DgpSpec(protocol="epidemic-mean", n=1000, m=4))
    with pytest.raises(ValueError, match="odd"):
        generate(DgpSpec(protocol="epidemic-mean", n=1000, m=None))
    with pytest.raises(ValueError, match="n >="):
        generate(DgpSpec(protocol="epidemic-mean", n=30, m=9))
    with pytest.raises(ValueError, match="scenario"):
        generate(DgpSpec(protocol="epidemic-mean", n=1000, m=9, scenario="C"))


# ---------------------------------------------------------------------------
# Short-segment protocol.
# ---------------------------------------------------------------------------


def test_short_segments_structure():
    seq = generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=2.5, seed=1))
    # K = 2 intervals of length 5 ending at 500 and 1000
    assert seq.true_changepoints.tolist() == [495, 500, 995]
    assert seq.true_states == (NORMAL, EPIDEMIC, NORMAL, EPIDEMIC)
    assert np.all(seq.true_means[495:500] == 2.5)
    assert np.all(seq.true_means[995:1000] == 2.5)
    assert seq.true_means.sum() == 2.5 * 10
    assert np.all(seq.true_sds == 1.0)


def test_short_segments_l10_n3000():
    seq = generate(DgpSpec(protocol="short-segment", n=3000, L=10, delta=1.0, seed=1))
    # K = 4 intervals ending at 750, 1500, 2250, 3000
    assert seq.true_changepoints.tolist() == [740, 750, 1490, 1500, 2240, 2250, 2990]
    assert seq.true_states[-1] == EPIDEMIC


def test_short_segments_null_case_all_normal():
    seq = generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=0.0, seed=1))
    # boundaries stay recorded, but every state reads Normal
    assert seq.true_changepoints.tolist() == [495, 500, 995]
    assert all(s == NORMAL for s in seq.true_states)
    assert not per_index_states(seq).any()
    assert np.all(seq.true_means == 0.0)


def test_short_segments_sigma_scales_noise():
    lo = generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=0.0,
                          sigma=1.0, seed=9))
    hi = generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=0.0,
                          sigma=3.0, seed=9))
    np.testing.assert_allclose(hi.values, 3.0 * lo.values, rtol=1e-12)


def test_short_segments_validation():
    with pytest.raises(ValueError, match="multiple of 1000"):
        generate(DgpSpec(protocol="short-segment", n=1500, L=5, delta=1.0))
    with pytest.raises(ValueError, match="delta"):
        generate(DgpSpec(protocol="short-segment", n=1000, L=5))
    with pytest.raises(ValueError, match="L <"):
        generate(DgpSpec(protocol="short-segment", n=1000, L=500, delta=1.0))
    with pytest.raises(ValueError, match="sigma"):
        generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=1.0, sigma=0.0))


# ---------------------------------------------------------------------------
# P-value protocol.
# ---------------------------------------------------------------------------


def test_pvalues_structure():
    seq = generate(DgpSpec(protocol="pvalues", n=1000, seed=2))
    assert seq.true_changepoints.tolist() == [50, 350, 375, 675, 700]
    assert seq.true_states == (EPIDEMIC, NORMAL, EPIDEMIC, NORMAL, EPIDEMIC, NORMAL)
    assert np.all(seq.values > 0.0) and np.all(seq.values < 1.0)
    # underlying means: two leading signal runs (1 then -1.5) form one
    # epidemic stretch; the alternating piece flips every index
    assert np.all(seq.true_means[:25] == 1.0)
    assert np.all(seq.true_means[25:50] == -1.5)
    assert np.all(seq.true_means[50:350] == 0.0)
    assert np.all(seq.true_means[350:375] == 1.5)
    alt = seq.true_means[675:700]
    assert np.all(alt[0::2] == -1.5) and np.all(alt[1::2] == 1.0)


def test_pvalues_signal_shifts_pvalues_down():
    seq = generate(DgpSpec(protocol="pvalues", n=5000, seed=4))
    mask = per_index_states(seq)
    assert np.median(seq.values[mask]) < 0.25
    null_med = np.median(seq.values[~mask])
    assert 0.4 < null_med < 0.6


def test_pvalues_needs_room_for_pieces():
    with pytest.raises(ValueError):
        generate(DgpSpec(protocol="pvalues", n=20))


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def test_format_labeled_csv_roundtrip():
    seq = generate(DgpSpec(protocol="short-segment", n=1000, L=5, delta=2.5, seed=6))
    text = format_labeled_csv(seq)
    lines = text.strip().split("\n")
    assert lines[0] == "index,value,true_mean,true_sd,state"
    assert len(lines) == 1001
    first = lines[1].split(",")
    assert first[0] == "1" and first[4] == NORMAL
    # repr round-trips floats exactly
    assert float(first[1]) == seq.values[0]
    assert lines[496].split(",")[4] == EPIDEMIC
    assert format_labeled_csv(seq) == text
