"""Spectra as finite unions of closed intervals.

A spectrum here is always a sorted list of pairwise disjoint closed
intervals.  Everything downstream (inner products of exponentials,
projections, gap reports) leans on that canonical form, so the only way
to build a :class:`SpectrumSet` is through :func:`normalize`.

Endpoint comparisons use the absolute tolerance ``MERGE_TOL``: intervals
that overlap or touch within that tolerance are merged.  Mod-``a``
arithmetic introduces rounding at the last ulp, and a fixed documented
tolerance keeps projections idempotent and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInterval, InvalidPeriod

# Absolute endpoint tolerance for merge decisions.
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInterval(f"non-finite endpoints ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise InvalidInterval(f"need lo < hi, got ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class SpectrumSet:
    """Sorted union of disjoint closed intervals.  Use :func:`normalize`."""

    intervals: tuple = ()

    @property
    def measure(self) -> float:
        return float(sum(iv.length for iv in self.intervals))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def lo(self) -> float:
        return self.intervals[0].lo

    @property
    def hi(self) -> float:
        return self.intervals[-1].hi

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def contains_point(self, x: float, tol: float = MERGE_TOL) -> bool:
        return any(iv.lo - tol <= x <= iv.hi + tol for iv in self.intervals)

    def contains(self, other: "SpectrumSet", tol: float = MERGE_TOL) -> bool:
        """Set containment up to endpoint tolerance."""
        for iv in other.intervals:
            if not any(
                jv.lo - tol <= iv.lo and iv.hi <= jv.hi + tol
                for jv in self.intervals
            ):
                return False
        return True

    def translate(self, s: float) -> "SpectrumSet":
        return normalize([(iv.lo + s, iv.hi + s) for iv in self.intervals])


def normalize(raw) -> SpectrumSet:
    """Sort interval pairs, merge overlaps/adjacencies, return the union.

    Accepts any iterable of (lo, hi) pairs or Interval objects.  Pairs
    with lo >= hi raise InvalidInterval.  Adjacent intervals (gap within
    ``MERGE_TOL``) merge, which keeps representations canonical for the
    closed-interval convention used throughout.
    """
    pairs = []
    for item in raw:
        if isinstance(item, Interval):
            lo, hi = item.lo, item.hi
        else:
            lo, hi = float(item[0]), float(item[1])
        if not lo < hi:
            raise InvalidInterval(f"need lo < hi, got ({lo}, {hi})")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidInterval(f"non-finite endpoints ({lo}, {hi})")
        pairs.append((lo, hi))
    pairs.sort()
    merged = []
    for lo, hi in pairs:
        if merged and lo <= merged[-1][1] + MERGE_TOL:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return SpectrumSet(tuple(Interval(lo, hi) for lo, hi in merged))


def from_gamma(gamma, block_length: float = 1.0) -> SpectrumSet:
    """The union of ``[g, g + block_length]`` over the given points."""
    return normalize([(g, g + block_length) for g in gamma])


def project(S: SpectrumSet, a: float) -> SpectrumSet:
    """Reduce S modulo ``a`` into [0, a].

    Any interval at least ``a`` long wraps all the way around and covers
    the whole period.  Shorter ones shift to start in [0, a) and split
    at the period boundary when they stick out.  Projection is
    idempotent at the endpoint level: points already in [0, a] are fixed
    by ``math.fmod`` exactly.
    """
    if not a > 0:
        raise InvalidPeriod(f"period must be positive, got {a}")
    pieces = []
    for iv in S.intervals:
        if iv.length >= a:
            return normalize([(0.0, a)])
        s = math.fmod(iv.lo, a)
        if s < 0:
            s += a
        if s >= a:  # s + a can round up to exactly a for tiny negative lo
            s -= a
        e = s + iv.length
        if e <= a:
            pieces.append((s, e))
        else:
            pieces.append((s, a))
            pieces.append((0.0, e - a))
    return normalize(pieces)


def complement_within(S: SpectrumSet, lo: float, hi: float) -> SpectrumSet:
    """[lo, hi] minus S, as a SpectrumSet (degenerate slivers dropped)."""
    gaps = []
    cursor = lo
    for iv in S.intervals:
        if iv.hi < lo or iv.lo > hi:
            continue
        if iv.lo - cursor > MERGE_TOL:
            gaps.append((cursor, iv.lo))
        cursor = max(cursor, iv.hi)
    if hi - cursor > MERGE_TOL:
        gaps.append((cursor, hi))
    return normalize(gaps)


@dataclass(frozen=True)
class GapReport:
    """Outcome of the periodic-gap test at period ``a``.

    For finite unions of closed intervals the closure is the identity,
    so the weak and strong conditions coincide; ``weak_strong_coincide``
    records that degeneracy explicitly rather than pretending the two
    tests were independent.
    """

    weak: bool
    strong: bool
    complement_measure: float
    witness: SpectrumSet
    period: float
    weak_strong_coincide: bool = True
    note: str = (
        "finite closed-interval unions are closed; the strong-gap test "
        "degenerates to the weak one"
    )


def gap_report(S: SpectrumSet, a: float) -> GapReport:
    """Does S have a periodic gap at period ``a``?

    weak  <=>  |project(S, a)| < a; the witness is [0, a] minus the
    projection.  Complement measures within MERGE_TOL of zero are
    clamped so that ``weak <=> complement_measure > 0`` holds exactly
    on the returned values.
    """
    proj = project(S, a)
    comp = a - proj.measure
    if comp <= MERGE_TOL:
        comp = 0.0
    witness = complement_within(proj, 0.0, a)
    weak = comp > 0
    return GapReport(
        weak=weak,
        strong=weak,
        complement_measure=comp,
        witness=witness,
        period=a,
    )


@dataclass(frozen=True)
class GammaRepresentation:
    """Increasing points gamma_j with unit blocks; S = Gamma + [0, 1].

    ``gaps[j] = gamma[j+1] - gamma[j] - block_length``; the random
    sampler produces gaps in [2, 3].
    """

    gamma: tuple
    block_length: float = 1.0
    gaps: tuple = field(init=False)

    def __post_init__(self):
        g = tuple(float(x) for x in self.gamma)
        if any(b <= a for a, b in zip(g, g[1:])):
            raise InvalidInterval("gamma must be strictly increasing")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(
            self,
            "gaps",
            tuple(b - a - self.block_length for a, b in zip(g, g[1:])),
        )

    def spectrum(self) -> SpectrumSet:
        return from_gamma(self.gamma, self.block_length)


# --- spectrum literal ------------------------------------------------------
#
# Config files carry spectra as `[lo,hi; lo,hi; ...]`.  Emission uses the
# canonical sorted form with repr() floats so round-trips are stable.

def parse_spectrum_literal(text: str) -> SpectrumSet:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise InvalidInterval(f"spectrum literal must be bracketed: {text!r}")
    body = t[1:-1].strip()
    if not body:
        return SpectrumSet()
    pairs = []
    for chunk in body.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise InvalidInterval(f"bad interval {chunk!r} in spectrum literal")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InvalidInterval(f"bad number in {chunk!r}") from exc
    return normalize(pairs)


def format_spectrum_literal(S: SpectrumSet) -> str:
    inner = "; ".join(f"{iv.lo!r},{iv.hi!r}" for iv in S.intervals)
    return f"[{inner}]"
