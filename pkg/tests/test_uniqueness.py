import numpy as np
import pytest

from sgl.blocks import BlockSchedule, build_blocks, partition_blocks
from sgl.errors import DegenerateTranslates
from sgl.spectra import normalize
from sgl.uniqueness import (
    build_lambda,
    density_report,
    perturbed_integers,
    star_discrepancy,
    vdc_alphas,
)

from oracles import star_discrepancy_brute

A = normalize([(0.0, 0.6)])


def _partition(J):
    blocks = build_blocks(A, BlockSchedule.dyadic(3), 3, 64).blocks
    return partition_blocks(blocks, J)


def test_perturbed_integers_values():
    fs = perturbed_integers(2)
    # n + 2^{-|n|}: {-2+1/4, -1+1/2, 0+1, 1+1/2, 2+1/4}
    assert fs.freqs == (-1.75, -0.5, 1.0, 1.5, 2.25)
    with pytest.raises(ValueError):
        perturbed_integers(0)


def test_vdc_prefix():
    assert vdc_alphas(7) == [0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]


def test_vdc_star_discrepancy_beats_random_and_matches_brute():
    alphas = vdc_alphas(64)
    d = star_discrepancy(alphas)
    assert d == pytest.approx(star_discrepancy_brute(alphas), abs=1e-15)
    # van der Corput prefixes have discrepancy O(log J / J); 64 points
    # land well under 0.1
    assert d < 0.1


def test_star_discrepancy_equispaced():
    pts = (np.arange(10) + 0.5) / 10
    assert star_discrepancy(pts) == pytest.approx(0.05, abs=1e-15)


def test_build_lambda_translates_parts():
    part = _partition(2)
    alphas = vdc_alphas(2)
    lam = build_lambda(part, alphas, 2, window=10)
    # block 1 and 3 go to part 1 (alpha 0.5), block 2 to part 2 (alpha 0.25)
    assert 0.5 in lam.points.freqs  # 0 + 1/2
    assert 2.25 in lam.points.freqs  # 2 + 1/4
    assert lam.is_uniformly_discrete
    assert lam.points.separation >= 0.1


def test_build_lambda_window_clips():
    part = _partition(1)
    lam = build_lambda(part, [0.5], 1, window=5)
    assert all(-5.5 <= p <= 5.5 for p in lam.points.freqs)


def test_build_lambda_rejects_integer_alpha_difference():
    part = _partition(2)
    with pytest.raises(DegenerateTranslates):
        # alpha_1 - alpha_2 = 1 makes parts collide when members overlap
        build_lambda(part, [1.25, 0.25], 2, window=10)


def test_build_lambda_too_many_parts():
    part = _partition(2)
    with pytest.raises(ValueError):
        build_lambda(part, vdc_alphas(3), 3, window=10)


def test_density_report_integers():
    rep = density_report(np.arange(-40, 41, dtype=float), 8.0)
    # density-1 set: every window of width r holds about r points
    assert rep.slope == pytest.approx(1.0, abs=0.05)
    assert rep.diagnostic


def test_density_report_half_integers():
    rep = density_report(0.5 * np.arange(0, 161), 8.0)
    assert rep.slope == pytest.approx(2.0, abs=0.1)


def test_density_report_bad_width():
    with pytest.raises(ValueError):
        density_report(np.arange(4, dtype=float), 10.0)
