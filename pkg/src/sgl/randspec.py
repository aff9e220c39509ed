"""Random gap sequences and approximate-progression mining.

A sample is an increasing sequence gamma with gamma_1 = 0 and increments
1 + xi_j, xi_j i.i.d. uniform on [2, 3] (so consecutive gaps lie in [3, 4]).
We scan for starts k where an arithmetic progression of step q and length N
shadows the sequence within tolerance 1/4; each hit contributes the ideal
points gamma_k + i*q, whose 1/4-shrunk unit blocks are guaranteed to sit
inside S = Gamma + [0, 1].

RNG contract (external, affects CSV reproducibility): numpy ``Philox``
seeded with ``SeedSequence(seed)`` for whole-sequence sampling and
``SeedSequence([seed, trial])`` for per-trial Monte Carlo substreams.
Substreams are keyed by index alone, so trial order never matters.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContainmentViolation, HypothesisViolated, InvalidTrials
from .exponentials import FrequencySet
from .spectra import GammaRepresentation, SpectrumSet, normalize

HIT_TOL = 0.25

# Ideal points from different progressions may collide; FrequencySet wants
# strictly increasing values, so collisions are merged at this resolution.
_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class RandomGammaSample:
    seed: int
    gamma: GammaRepresentation


@dataclass(frozen=True)
class ProgressionHit:
    """Start index k whose next N points track gamma_k + j*q within tol.

    ``max_deviation`` is max_j |gamma_{k+j} - (gamma_k + j q)| over j=1..N;
    genuine hits have it < 1/4 (not enforced here -- the containment check
    in build_interpolation_spectrum is the guard).
    """

    k: int
    q: float
    N: int
    max_deviation: float


def _gamma_values(rng, J):
    # rng only needs .uniform; tests inject stubs.
    steps = 1.0 + np.asarray(rng.uniform(2.0, 3.0, size=J - 1), dtype=float)
    out = np.empty(J)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def _rng_for(seed, trial=None):
    if trial is None:
        ss = np.random.SeedSequence(int(seed))
    else:
        ss = np.random.SeedSequence([int(seed), int(trial)])
    return np.random.Generator(np.random.Philox(ss))


def sample_gamma(seed: int, J: int) -> RandomGammaSample:
    """Draw a length-J gap sequence, deterministic in ``seed``."""
    if J < 2:
        raise ValueError("need J >= 2 points")
    vals = _gamma_values(_rng_for(seed), int(J))
    return RandomGammaSample(int(seed), GammaRepresentation(tuple(vals)))


def _check_step(q, N):
    if not 3.0 < q < 4.0:
        raise ValueError(f"step q={q} outside (3, 4)")
    if N < 1:
        raise ValueError("progression length N must be >= 1")


def _deviations(vals, q, N):
    """dev[k] = max_{j=1..N} |vals[k+j] - vals[k] - j q| for each valid start."""
    K = len(vals) - N
    if K <= 0:
        return np.empty(0)
    dev = np.zeros(K)
    for j in range(1, N + 1):
        np.maximum(dev, np.abs(vals[j:j + K] - vals[:K] - j * q), out=dev)
    return dev


def find_progressions(g: RandomGammaSample, q: float, N: int,
                      tol: float = HIT_TOL):
    """All starts k whose deviation stays below ``tol`` for every j = 1..N."""
    _check_step(q, N)
    dev = _deviations(np.asarray(g.gamma.gamma), float(q), int(N))
    return [
        ProgressionHit(int(k), float(q), int(N), float(dev[k]))
        for k in np.flatnonzero(dev < tol)
    ]


def trial_has_hit(q: float, N: int, J: int, seed: int, trial: int,
                  tol: float = HIT_TOL) -> bool:
    """Whether the ``trial``-th substream's sequence contains any hit.

    Pure function of (seed, trial): Monte Carlo accumulation over trials
    commutes, so parallel and sequential sweeps agree exactly.
    """
    vals = _gamma_values(_rng_for(seed, trial), int(J))
    dev = _deviations(vals, float(q), int(N))
    return bool(dev.size) and bool(np.min(dev) < tol)


@dataclass(frozen=True)
class MCReport:
    q: float
    N: int
    J: int
    trials: int
    freq: float
    stderr: float
    seed: int

    def csv_row(self) -> str:
        return (f"{self.q!r},{self.N},{self.J},{self.trials},"
                f"{self.freq!r},{self.stderr!r},{self.seed}")


def mc_hit_probability(q: float, N: int, J: int, trials: int,
                       seed: int) -> MCReport:
    """Fraction of seeded sequences of length J containing >= 1 hit."""
    if trials < 1:
        raise InvalidTrials(f"trials={trials}, need >= 1")
    _check_step(q, N)
    if J < 2:
        raise ValueError("need J >= 2 points")
    count = sum(trial_has_hit(q, N, J, seed, t) for t in range(trials))
    freq = count / trials
    stderr = math.sqrt(freq * (1.0 - freq) / trials)
    return MCReport(float(q), int(N), int(J), int(trials), freq, stderr,
                    int(seed))


@dataclass(frozen=True)
class InterpolationSpectrum:
    gamma_star: FrequencySet
    S_delta: SpectrumSet
    contained: bool


def build_interpolation_spectrum(g: RandomGammaSample, hits, m: int
                                 ) -> InterpolationSpectrum:
    """Assemble Gamma* from the earliest hit of each of m distinct steps.

    Gamma* collects the ideal points {gamma_k + i q : i = 0..N} of the
    chosen hits; S_delta = Gamma* + [1/4, 3/4] must land inside
    Gamma + [0, 1] whenever every deviation is genuinely below 1/4, and a
    failure of that check raises ContainmentViolation (it means a hit was
    recorded with bad bookkeeping, not a geometric possibility).
    """
    if m < 1:
        raise ValueError("need m >= 1 steps")
    earliest = {}
    for h in hits:
        best = earliest.get(h.q)
        if best is None or h.k < best.k:
            earliest[h.q] = h
    if len(earliest) < m:
        raise HypothesisViolated(
            f"hits cover {len(earliest)} distinct steps, need {m}")
    chosen = [earliest[q] for q in sorted(earliest)[:m]]

    vals = np.asarray(g.gamma.gamma)
    pts = np.concatenate(
        [vals[h.k] + h.q * np.arange(h.N + 1) for h in chosen])
    pts.sort()
    keep = np.concatenate([[True], np.diff(pts) > _DEDUP_TOL])
    pts = pts[keep]

    gamma_star = FrequencySet(tuple(pts))
    s_delta = normalize([(p + 0.25, p + 0.75) for p in pts])
    big = g.gamma.spectrum()
    if not big.contains(s_delta, tol=_DEDUP_TOL):
        bad = next(iv for iv in s_delta.intervals
                   if not any(jv.lo - _DEDUP_TOL <= iv.lo
                              and iv.hi <= jv.hi + _DEDUP_TOL
                              for jv in big.intervals))
        raise ContainmentViolation(
            f"block [{bad.lo}, {bad.hi}] escapes Gamma + [0, 1]; "
            "a recorded hit deviates by >= 1/4")
    return InterpolationSpectrum(gamma_star, s_delta, True)
