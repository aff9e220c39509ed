"""Candidate uniqueness sets: perturbed integers and translated block unions.

Everything in this module is a finite truncation with its parameters
attached; reports are diagnostics about the truncation, never claims
about the infinite construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import PartitionZ
from .errors import DegenerateTranslates
from .exponentials import FrequencySet

DUP_TOL = 1e-12


def perturbed_integers(window: int) -> FrequencySet:
    """{n + 2^{-|n|} : |n| <= window}, sorted."""
    if window < 1:
        raise ValueError("window must be >= 1")
    pts = [n + 2.0 ** (-abs(n)) for n in range(-window, window + 1)]
    return FrequencySet(tuple(sorted(pts)))


def vdc_alphas(J: int):
    """First J terms of the base-2 van der Corput sequence.

    Bit-reversed radicals: 1/2, 1/4, 3/4, 1/8, 5/8, 3/8, 7/8, ...
    Dense in [0, 1] and well spread for every prefix, which keeps the
    separation of the translated union large for small J.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    out = []
    for j in range(1, J + 1):
        x, denom, n = 0.0, 2.0, j
        while n:
            x += (n & 1) / denom
            n >>= 1
            denom *= 2
        out.append(x)
    return out


@dataclass(frozen=True)
class LambdaSet:
    """A finite translated-union candidate with its build metadata."""

    points: FrequencySet
    J: int
    window: int
    alphas: tuple
    ud_floor: float
    is_uniformly_discrete: bool

    @property
    def separation(self) -> float:
        return self.points.separation


def build_lambda(
    partition: PartitionZ,
    alphas,
    J: int,
    window: int,
    ud_floor: float = 0.1,
) -> LambdaSet:
    """Union over j <= J of (Z_j within [-window, window]) + alpha_j.

    Distinct parts can only collide when alpha_i - alpha_j is an
    integer; any two resulting points closer than 1e-12 raise
    DegenerateTranslates.  Equal alphas are allowed (distinct integers
    stay >= 1 apart after an equal shift) and simply documented.
    """
    if J > len(partition.parts):
        raise ValueError(f"J={J} exceeds available parts ({len(partition.parts)})")
    alphas = tuple(float(a) for a in alphas[:J])
    if len(alphas) < J:
        raise ValueError("need one alpha per part")
    pts = []
    for j in range(1, J + 1):
        base = [n for n in partition.part_points(j) if -window <= n <= window]
        pts.extend(n + alphas[j - 1] for n in base)
    pts.sort()
    for a, b in zip(pts, pts[1:]):
        if b - a < DUP_TOL:
            raise DegenerateTranslates(
                f"points {a} and {b} coincide; some alpha_i - alpha_j is an integer"
            )
    fs = FrequencySet(tuple(pts))
    return LambdaSet(
        points=fs,
        J=J,
        window=window,
        alphas=alphas,
        ud_floor=ud_floor,
        is_uniformly_discrete=fs.separation >= ud_floor,
    )


@dataclass(frozen=True)
class DensityReport:
    """Sliding-window count statistics (an estimator, not a density proof)."""

    r: float
    stride: float
    counts: tuple
    r_values: tuple
    mean_counts: tuple
    slope: float
    diagnostic: bool = True


def _window_counts(x: np.ndarray, r: float, stride: float) -> np.ndarray:
    starts = np.arange(x[0], x[-1] - r + stride / 2, stride)
    # half-open windows [s, s+r)
    left = np.searchsorted(x, starts, side="left")
    right = np.searchsorted(x, starts + r, side="left")
    return right - left


def density_report(lam, r: float) -> DensityReport:
    """Counts in sliding windows of width r (stride r/4) and the growth slope.

    The slope comes from a least-squares line through (r_i, mean count)
    over dyadic multiples of r that still fit in the span; for a set of
    uniform density D it sits near D.
    """
    x = lam.asarray() if hasattr(lam, "asarray") else np.asarray(sorted(lam), float)
    span = x[-1] - x[0]
    if not 0 < r < span:
        raise ValueError(f"need 0 < r < span ({span}), got {r}")
    stride = r / 4
    counts = _window_counts(x, r, stride)

    r_values = [r]
    while r_values[-1] * 2 <= span / 2:
        r_values.append(r_values[-1] * 2)
    if len(r_values) == 1:
        r_values.append(r / 2)
    means = [float(np.mean(_window_counts(x, ri, ri / 4))) for ri in r_values]
    slope = float(np.polyfit(r_values, means, 1)[0])
    return DensityReport(
        r=r,
        stride=stride,
        counts=tuple(int(c) for c in counts),
        r_values=tuple(r_values),
        mean_counts=tuple(means),
        slope=slope,
    )


def star_discrepancy(points) -> float:
    """Exact 1-d star discrepancy of a finite point set in [0, 1]."""
    x = np.sort(np.asarray(points, dtype=float))
    n = len(x)
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(np.abs(x - i / n), np.abs(x - (i - 1) / n))))
