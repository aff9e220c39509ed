import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgl.errors import InvalidInterval, InvalidPeriod
from sgl.spectra import (
    GammaRepresentation,
    SpectrumSet,
    format_spectrum_literal,
    from_gamma,
    gap_report,
    normalize,
    parse_spectrum_literal,
    project,
)


def test_normalize_merges_overlaps():
    S = normalize([(0.0, 1.0), (0.5, 2.0), (3.0, 4.0)])
    assert [(iv.lo, iv.hi) for iv in S.intervals] == [(0.0, 2.0), (3.0, 4.0)]
    assert S.measure == 3.0


def test_normalize_merges_touching_endpoints():
    S = normalize([(0.0, 1.0), (1.0, 2.0)])
    assert len(S.intervals) == 1


def test_normalize_rejects_backwards():
    with pytest.raises(InvalidInterval):
        normalize([(1.0, 0.0)])


def test_empty_set():
    S = normalize([])
    assert S.is_empty and S.measure == 0.0


def test_project_two_blocks_collapse():
    # unit-separated copies fold onto each other mod 1
    S = normalize([(0.0, 0.3), (1.0, 1.3)])
    P = project(S, 1.0)
    assert len(P.intervals) == 1
    assert P.measure == pytest.approx(0.3, abs=1e-12)


def test_project_wraps_across_period():
    P = project(normalize([(0.7, 1.2)]), 1.0)
    # [0.7,1] plus wrapped [0,0.2]
    assert P.contains_point(0.0) and P.contains_point(0.95)
    assert not P.contains_point(0.5)
    assert P.measure == pytest.approx(0.5, abs=1e-12)


def test_project_identity_when_inside():
    S = normalize([(0.1, 0.4)])
    assert project(S, 1.0).intervals == S.intervals


def test_project_bad_period():
    with pytest.raises(InvalidPeriod):
        project(normalize([(0.0, 1.0)]), 0.0)


@given(
    st.lists(
        st.tuples(
            st.floats(-10, 10, allow_nan=False),
            st.floats(0.01, 3, allow_nan=False),
        ),
        min_size=1,
        max_size=6,
    ),
    st.floats(0.3, 5, allow_nan=False),
)
@settings(max_examples=60, deadline=None)
def test_project_properties(pairs, a):
    S = normalize([(lo, lo + ln) for lo, ln in pairs])
    P = project(S, a)
    assert P.measure <= min(S.measure, a) + 1e-9
    for iv in P.intervals:
        assert -1e-12 <= iv.lo and iv.hi <= a + 1e-12
    # projecting twice changes nothing
    assert project(P, a).measure == pytest.approx(P.measure, abs=1e-9)


def test_gap_report_weak_and_witness():
    S = normalize([(0.0, 0.3), (1.0, 1.3)])
    rep = gap_report(S, 1.0)
    assert rep.weak and rep.strong and rep.weak_strong_coincide
    assert rep.complement_measure == pytest.approx(0.7, abs=1e-12)
    assert rep.witness.measure == pytest.approx(0.7, abs=1e-12)


def test_gap_report_no_gap():
    rep = gap_report(normalize([(0.0, 1.0)]), 1.0)
    assert not rep.weak and rep.complement_measure == 0.0


def test_contains_with_tolerance():
    S = normalize([(0.0, 1.0)])
    T = normalize([(0.25, 0.75)])
    assert S.contains(T) and not T.contains(S)
    nudged = normalize([(-1e-13, 0.5)])
    assert S.contains(nudged)


def test_translate_shifts_endpoints():
    S = normalize([(0.0, 1.0)]).translate(2.5)
    assert S.intervals[0].lo == 2.5 and S.intervals[0].hi == 3.5


def test_from_gamma_unit_blocks():
    S = from_gamma((0.0, 3.5, 7.2))
    assert len(S.intervals) == 3
    assert S.measure == pytest.approx(3.0, abs=1e-12)


def test_gamma_representation_gaps():
    g = GammaRepresentation((0.0, 3.5, 7.2))
    assert g.gaps == pytest.approx((2.5, 2.7))
    assert g.spectrum().contains_point(7.5)


def test_gamma_rejects_nonincreasing():
    with pytest.raises(InvalidInterval):
        GammaRepresentation((0.0, 0.0))


def test_literal_round_trip():
    S = normalize([(0.0, 0.3), (1.0, 1.3)])
    assert parse_spectrum_literal(format_spectrum_literal(S)).intervals == S.intervals


def test_literal_whitespace_tolerant():
    S = parse_spectrum_literal("[ 0 , 0.5 ;  2,3 ]")
    assert S.measure == pytest.approx(1.5)


@given(
    st.lists(
        st.tuples(
            st.floats(-50, 50, allow_nan=False, allow_infinity=False),
            st.floats(0.001, 10, allow_nan=False),
        ),
        min_size=1,
        max_size=5,
    )
)
@settings(max_examples=50, deadline=None)
def test_literal_round_trip_property(pairs):
    S = normalize([(lo, lo + ln) for lo, ln in pairs])
    T = parse_spectrum_literal(format_spectrum_literal(S))
    assert T.intervals == S.intervals


def test_measure_additive_for_disjoint():
    S = normalize([(0.0, 1.0), (5.0, 5.25)])
    assert S.measure == pytest.approx(1.25)
    assert math.isclose(sum(iv.length for iv in S.intervals), 1.25)
