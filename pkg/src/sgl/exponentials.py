"""Inner products of exponentials over a spectrum, Gram matrices, frame reports.

Convention: every exponential in this package is ``e^{2 pi i f t}``.  The
inner product of two of them over a spectrum S is

    <e_f, e_g> = integral_S e^{2 pi i (f - g) t} dt = pair_integral(f - g, S),

so a Gram matrix is just ``pair_integral`` evaluated on the difference
table of a frequency set.  The minimum eigenvalue of a finite section is
exactly the best lower frame-type constant for finitely supported
coefficient sequences on that section, which is what a FrameReport
certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalFailure
from .spectra import SpectrumSet

# Numerical PSD slack: eigenvalues of an exact-arithmetic PSD matrix may
# dip this far below zero in floating point.
EPS_NUM = 1e-10

# Certification slack for claimed lower bounds.
CERT_TOL = 1e-8


@dataclass(frozen=True)
class FrequencySet:
    """Strictly increasing real frequencies with their separation constant.

    ``separation`` is the minimum over consecutive differences (inf for a
    singleton), i.e. the infimal pairwise distance of the set.
    """

    freqs: tuple

    def __post_init__(self):
        f = tuple(float(x) for x in self.freqs)
        if any(b <= a for a, b in zip(f, f[1:])):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "freqs", f)

    @property
    def separation(self) -> float:
        if len(self.freqs) < 2:
            return float("inf")
        return min(b - a for a, b in zip(self.freqs, self.freqs[1:]))

    def __len__(self):
        return len(self.freqs)

    def __iter__(self):
        return iter(self.freqs)

    def asarray(self) -> np.ndarray:
        return np.asarray(self.freqs, dtype=float)

    @staticmethod
    def from_points(points) -> "FrequencySet":
        return FrequencySet(tuple(sorted(float(p) for p in points)))


@dataclass(frozen=True)
class ExpPolynomial:
    """Finite sum  P(t) = sum_k c_k e^{2 pi i f_k t}  with distinct f_k."""

    terms: tuple  # of (frequency, complex coefficient)

    def __post_init__(self):
        freqs = [f for f, _ in self.terms]
        if len(set(freqs)) != len(freqs):
            raise ValueError("duplicate frequencies in ExpPolynomial")

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([f for f, _ in self.terms], dtype=float)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=complex)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        f = self.frequencies
        c = self.coefficients
        # outer product in chunks to bound memory on big grids
        if t.ndim == 0:
            return complex(np.sum(c * np.exp(2j * np.pi * f * float(t))))
        out = np.empty(t.shape, dtype=complex)
        step = max(1, int(2e6 // max(len(f), 1)))
        for i in range(0, t.size, step):
            sl = t.reshape(-1)[i : i + step]
            out.reshape(-1)[i : i + step] = np.exp(
                2j * np.pi * np.outer(sl, f)
            ) @ c
        return out


def pair_integral(theta: float, S: SpectrumSet) -> complex:
    """integral_S e^{2 pi i theta t} dt, exact at theta = 0.

    Per interval [lo, hi] the antiderivative evaluates to
    ``L * e^{i pi theta (lo + hi)} * sinc(theta * L)`` with L = hi - lo,
    which has no cancellation problem near theta = 0 (np.sinc(0) == 1
    gives the interval length exactly).
    """
    total = 0.0 + 0.0j
    for iv in S.intervals:
        L = iv.hi - iv.lo
        total += L * np.exp(1j * np.pi * theta * (iv.lo + iv.hi)) * np.sinc(theta * L)
    return complex(total)


def pair_integral_many(thetas, S: SpectrumSet) -> np.ndarray:
    """Vectorized :func:`pair_integral` over an array of differences."""
    th = np.asarray(thetas, dtype=float)
    out = np.zeros(th.shape, dtype=complex)
    for iv in S.intervals:
        L = iv.hi - iv.lo
        out += L * np.exp(1j * np.pi * th * (iv.lo + iv.hi)) * np.sinc(th * L)
    return out


@dataclass(frozen=True)
class GramMatrix:
    """entries[i, j] = pair_integral(freqs[i] - freqs[j], S)."""

    entries: np.ndarray
    freqs: FrequencySet
    spectrum: SpectrumSet

    def min_eigenvalue(self) -> float:
        try:
            vals = np.linalg.eigvalsh(self.entries)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigen-solver failed: {exc}") from exc
        return float(vals[0])

    def eigenvalues(self) -> np.ndarray:
        try:
            return np.linalg.eigvalsh(self.entries)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigen-solver failed: {exc}") from exc


def _is_lattice(f: np.ndarray) -> bool:
    if len(f) < 3:
        return False
    d = np.diff(f)
    return bool(np.all(np.abs(d - d[0]) < 1e-14))


def gram(lam: FrequencySet, S: SpectrumSet) -> GramMatrix:
    """Gram matrix of ``{e^{2 pi i lambda t}}`` over S.

    The entry formula is Hermitian to the last bit (cos is even and sin
    odd in IEEE arithmetic), so no symmetrization pass is needed.  For
    equally spaced frequency sets the matrix is Toeplitz and only the
    first row/column of differences is evaluated.
    """
    if len(lam) == 0:
        raise ValueError("need at least one frequency")
    f = lam.asarray()
    if _is_lattice(f):
        from scipy.linalg import toeplitz

        col = pair_integral_many(f - f[0], S)        # entries (i, 0)
        row = np.conj(col)                           # entries (0, j)
        entries = toeplitz(col, row)
    else:
        entries = pair_integral_many(f[:, None] - f[None, :], S)
    return GramMatrix(entries=entries, freqs=lam, spectrum=S)


@dataclass(frozen=True)
class FrameReport:
    n: int
    min_eigenvalue: float
    lower_bound_claimed: Optional[float]
    certified: bool

    def csv_row(self) -> str:
        claimed = "" if self.lower_bound_claimed is None else repr(self.lower_bound_claimed)
        return f"{self.n},{self.min_eigenvalue!r},{claimed},{str(self.certified).lower()}"


def frame_report(
    lam: FrequencySet, S: SpectrumSet, claimed_bound: Optional[float] = None
) -> FrameReport:
    """Minimum Gram eigenvalue plus an optional lower-bound certificate.

    ``certified`` is True exactly when a claim was supplied and the
    computed minimum eigenvalue is at least ``claimed_bound - 1e-8``.
    """
    G = gram(lam, S)
    mn = G.min_eigenvalue()
    certified = claimed_bound is not None and mn >= claimed_bound - CERT_TOL
    return FrameReport(
        n=len(lam),
        min_eigenvalue=mn,
        lower_bound_claimed=claimed_bound,
        certified=certified,
    )


def quadratic_form(lam: FrequencySet, S: SpectrumSet, c) -> float:
    """integral_S |sum_k c_k e^{2 pi i lambda_k t}|^2 dt via the Gram entries.

    Expanding the square termwise gives
    sum_{j,k} c_j conj(c_k) pair_integral(lambda_j - lambda_k, S).
    """
    c = np.asarray(c, dtype=complex)
    G = gram(lam, S).entries
    val = np.einsum("i,ij,j->", c, G, np.conj(c))
    return float(np.real(val))
