import numpy as np
import pytest

from sgl.errors import ContainmentViolation, HypothesisViolated, InvalidTrials
from sgl.randspec import (
    MCReport,
    ProgressionHit,
    RandomGammaSample,
    _gamma_values,
    build_interpolation_spectrum,
    find_progressions,
    mc_hit_probability,
    sample_gamma,
    trial_has_hit,
)
from sgl.spectra import GammaRepresentation


class _ConstRng:
    def uniform(self, lo, hi, size):
        return np.full(size, 2.0)


def _sample(points):
    return RandomGammaSample(0, GammaRepresentation(tuple(points)))


def test_stub_rng_gives_arithmetic_sequence():
    vals = _gamma_values(_ConstRng(), 5)
    assert np.allclose(vals, [0.0, 3.0, 6.0, 9.0, 12.0], atol=0)


def test_sample_gamma_deterministic():
    a = sample_gamma(123, 50)
    b = sample_gamma(123, 50)
    assert a.gamma.gamma == b.gamma.gamma
    assert a.gamma.gamma != sample_gamma(124, 50).gamma.gamma


def test_sample_gamma_increment_support():
    g = sample_gamma(5, 500)
    diffs = np.diff(g.gamma.gamma)
    assert np.all(diffs >= 3.0) and np.all(diffs <= 4.0)
    assert g.gamma.gamma[0] == 0.0


def test_sample_gamma_needs_two_points():
    with pytest.raises(ValueError):
        sample_gamma(1, 1)


def test_find_progressions_exact_arithmetic():
    g = _sample(np.arange(6) * 3.5)
    hits = find_progressions(g, 3.5, 2)
    assert [h.k for h in hits] == [0, 1, 2, 3]
    assert all(h.max_deviation == 0.0 for h in hits)


def test_find_progressions_alternating_gaps_miss():
    # spacings 3,4,3,4: every |gamma_{k+1} - gamma_k - 3.5| = 0.5
    pts = [0.0, 3.0, 7.0, 10.0, 14.0]
    assert find_progressions(_sample(pts), 3.5, 2) == []


def test_find_progressions_input_guards():
    g = _sample([0.0, 3.5])
    with pytest.raises(ValueError):
        find_progressions(g, 2.9, 1)
    with pytest.raises(ValueError):
        find_progressions(g, 3.5, 0)


def test_trial_order_invariance():
    order = np.random.default_rng(1).permutation(300)
    seq = sum(trial_has_hit(3.5, 1, 2, 7, t) for t in range(300))
    shuffled = sum(trial_has_hit(3.5, 1, 2, 7, int(t)) for t in order)
    assert seq == shuffled


def test_mc_single_window_probability():
    # spacing uniform on [3,4] lands in (3.25, 3.75) half the time
    rep = mc_hit_probability(3.5, 1, 2, 3000, seed=11)
    assert rep.freq == pytest.approx(0.5, abs=4 * rep.stderr + 0.01)
    assert rep.stderr == pytest.approx(
        np.sqrt(rep.freq * (1 - rep.freq) / 3000)
    )


def test_mc_rejects_bad_trials():
    with pytest.raises(InvalidTrials):
        mc_hit_probability(3.5, 1, 2, 0, seed=1)


def test_mc_report_csv():
    rep = MCReport(3.5, 1, 2, 10, 0.5, 0.05, 42)
    assert rep.csv_row() == "3.5,1,2,10,0.5,0.05,42"


def test_build_spectrum_single_clean_hit():
    g = _sample(np.arange(4) * 3.5)
    hits = [ProgressionHit(0, 3.5, 2, 0.0)]
    spec = build_interpolation_spectrum(g, hits, 1)
    assert spec.contained
    assert spec.gamma_star.freqs == (0.0, 3.5, 7.0)
    # blocks sit centered in the unit blocks of Gamma
    assert spec.S_delta.contains_point(3.75) and spec.S_delta.contains_point(4.2)
    assert not spec.S_delta.contains_point(4.3)


def test_build_spectrum_accepts_deviation_below_quarter():
    g = _sample([0.0, 3.74])  # deviation 0.24 from step 3.5
    hits = find_progressions(g, 3.5, 1)
    assert len(hits) == 1 and hits[0].max_deviation == pytest.approx(0.24)
    spec = build_interpolation_spectrum(g, hits, 1)
    assert spec.contained


def test_build_spectrum_rejects_corrupted_hit():
    g = _sample([0.0, 3.5])
    bad = ProgressionHit(0, 3.8, 1, 0.3)  # ideal point 3.8 vs gamma 3.5
    with pytest.raises(ContainmentViolation):
        build_interpolation_spectrum(g, [bad], 1)


def test_build_spectrum_needs_enough_steps():
    g = _sample(np.arange(4) * 3.5)
    hits = find_progressions(g, 3.5, 1)
    with pytest.raises(HypothesisViolated):
        build_interpolation_spectrum(g, hits, 2)


def test_build_spectrum_uses_earliest_hit_per_step():
    g = _sample(np.arange(8) * 3.5)
    late = ProgressionHit(4, 3.5, 1, 0.0)
    early = ProgressionHit(1, 3.5, 1, 0.0)
    spec = build_interpolation_spectrum(g, [late, early], 1)
    assert spec.gamma_star.freqs[0] == pytest.approx(3.5)  # start at k=1


def test_borel_cantelli_trend():
    r10 = mc_hit_probability(3.5, 2, 10, 1500, seed=3)
    r200 = mc_hit_probability(3.5, 2, 200, 1500, seed=3)
    err = max(r10.stderr, r200.stderr, 1e-9)
    assert (r200.freq - r10.freq) / err > 3
