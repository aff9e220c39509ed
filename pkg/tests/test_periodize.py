import math

import numpy as np
import pytest

from sgl.blocks import BlockSchedule, build_blocks, partition_blocks
from sgl.errors import OutOfRange, SpectrumMismatch
from sgl.periodize import (
    PiecewiseConstantTransform,
    fejer_signal,
    inverse_transform_at,
    periodized_coefficients,
    periodized_l2,
    poisson_gap_series,
    sobolev_norm,
    tent_signal,
    uniqueness_diagnostic,
)
from sgl.spectra import normalize
from sgl.uniqueness import vdc_alphas

from oracles import quad_pair

RNG = np.random.default_rng(20240817)


def _random_transform(rng):
    k = rng.integers(1, 5)
    los = np.sort(rng.uniform(-5, 4, size=k))
    parts = []
    for lo in los:
        parts.append((lo, lo + rng.uniform(0.05, 0.9)))
    S = normalize(parts)
    vals = rng.normal(size=len(S.intervals)) + 1j * rng.normal(size=len(S.intervals))
    return PiecewiseConstantTransform(S, tuple(vals))


def test_inverse_transform_matches_quadrature():
    F = PiecewiseConstantTransform(
        normalize([(-1.0, -0.25), (0.5, 2.0)]), (1.5, -0.5 + 1j)
    )
    for x in (0.0, 0.3, -2.7):
        direct = 1.5 * quad_pair(-1.0, -0.25, x) + (-0.5 + 1j) * quad_pair(
            0.5, 2.0, x
        )
        assert inverse_transform_at(F, x) == pytest.approx(direct, abs=1e-10)


def test_transform_value_count_must_match():
    with pytest.raises(ValueError):
        PiecewiseConstantTransform(normalize([(0.0, 1.0)]), (1.0, 2.0))


def test_coefficient_identity_exact_for_random_transforms():
    # c_n of the periodization equal the signal samples f(n + v); both
    # sides are assembled along different code paths
    worst = 0.0
    for _ in range(10):
        F = _random_transform(RNG)
        for v in (0.0, 0.25, 0.7):
            rep = periodized_coefficients(F, v, 12)
            worst = max(worst, rep.max_abs_diff)
    assert worst < 1e-10


def test_periodized_coefficients_layout():
    F = PiecewiseConstantTransform(normalize([(0.0, 0.5)]), (1.0,))
    rep = periodized_coefficients(F, 0.0, 3)
    assert rep.n_values == tuple(range(-3, 4))
    assert rep.coeffs[3] == pytest.approx(0.5)  # n=0: measure times value


def test_sobolev_norm_closed_form():
    # constant 1 on [0,1]: integral (1 + t^2) = 1 + 1/3
    F = PiecewiseConstantTransform(normalize([(0.0, 1.0)]), (1.0,))
    assert sobolev_norm(F, 1.0) == pytest.approx(4.0 / 3.0, abs=1e-14)


def test_sobolev_norm_negative_side():
    F = PiecewiseConstantTransform(normalize([(-1.0, 1.0)]), (1.0,))
    assert sobolev_norm(F, 1.0) == pytest.approx(2 + 2.0 / 3.0, abs=1e-14)


def test_sobolev_norm_requires_alpha_above_half():
    F = PiecewiseConstantTransform(normalize([(0.0, 1.0)]), (1.0,))
    with pytest.raises(OutOfRange):
        sobolev_norm(F, 0.5)


def test_periodized_l2_parseval():
    F = PiecewiseConstantTransform(normalize([(0.25, 0.75)]), (2.0,))
    # fits inside one period: ||H||^2 over [0,1] is just integral |F|^2
    assert periodized_l2(F) == pytest.approx(4.0 * 0.5, abs=1e-12)


def test_periodized_l2_stacks_overlaps():
    # two unit-separated blocks with equal values stack coherently:
    # |v + v|^2 on the overlap vs 2|v|^2 separately
    F1 = PiecewiseConstantTransform(
        normalize([(0.0, 0.3), (1.0, 1.3)]), (1.0, 1.0)
    )
    assert periodized_l2(F1) == pytest.approx(4.0 * 0.3, abs=1e-12)


def test_fejer_signal_pointwise():
    f = fejer_signal()
    assert f(np.array([0.0]))[0] == pytest.approx(1.0)
    assert f(np.array([1.0]))[0] == pytest.approx(0.0, abs=1e-30)
    assert f(np.array([0.5]))[0] == pytest.approx((2 / math.pi) ** 2, abs=1e-12)


def test_decay_budget_covers_grid():
    f = tent_signal(-0.25, 0.25)
    xs = np.linspace(-800, 800, 40001)
    assert np.max(np.abs(f(xs)) * (1 + xs**2)) <= f.decay_budget / 2 + 1e-15


def test_poisson_partition_of_unity():
    f = fejer_signal()
    for x in (0.0, 0.3, 0.7):
        val = poisson_gap_series(f, x, 0.0, 2000)
        assert abs(val.value - 1.0) <= val.tail_bound
        assert not val.inconclusive


def test_poisson_tail_rate():
    f = fejer_signal()
    b1 = poisson_gap_series(f, 0.3, 0.0, 100).tail_bound
    b2 = poisson_gap_series(f, 0.3, 0.0, 1000).tail_bound
    assert b1 / b2 == pytest.approx(10.0, rel=1e-12)


def test_poisson_gap_vanishing():
    # spectrum [-1/4, 1/4]: t = 0.75 sits at the edge of the projected
    # gap, where the periodized transform vanishes
    f = tent_signal(-0.25, 0.25)
    val = poisson_gap_series(f, 0.0, 0.75, 5000)
    assert abs(val.value) <= val.tail_bound


def test_poisson_inconclusive_flag():
    val = poisson_gap_series(fejer_signal(), 0.0, 0.0, 1)
    assert val.inconclusive


def test_uniqueness_diagnostic_runs():
    A = normalize([(0.0, 0.6)])
    blocks = build_blocks(A, BlockSchedule.dyadic(3), 3, 64).blocks
    part = partition_blocks(blocks, 2)
    F = PiecewiseConstantTransform(normalize([(0.1, 0.4)]), (1.0,))
    rep = uniqueness_diagnostic(F, part, vdc_alphas(2), 2, 20, A)
    assert rep.diagnostic
    assert len(rep.rows) == 2
    assert rep.max_abs_on_lambda > 0
    for row in rep.rows:
        assert row.residual_norm >= 0
    line = rep.rows[0].csv_row()
    assert line.startswith("1,0.5,")


def test_uniqueness_diagnostic_spectrum_guard():
    A = normalize([(0.0, 0.6)])
    blocks = build_blocks(A, BlockSchedule.dyadic(2), 2, 16).blocks
    part = partition_blocks(blocks, 2)
    F = PiecewiseConstantTransform(normalize([(0.1, 0.9)]), (1.0,))
    with pytest.raises(SpectrumMismatch):
        uniqueness_diagnostic(F, part, vdc_alphas(2), 2, 20, A)
