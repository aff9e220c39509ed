"""Flattening polynomials with certified sup-norm bounds, and the
interpolation machinery built on top of them.

The construction chain:

1. pick rationally independent steps q_1..q_m and anchors a_1..a_m whose
   progressions live inside a frequency set Gamma;
2. average anchor-modulated Dirichlet kernels into a polynomial P with
   P(0) = 1 that is uniformly small on an annulus eps < |t| < 1/eps,
   certified on a grid with an explicit derivative slack;
3. multiply by the transform phi of a smooth window to get a kernel
   h = P * phi with h(0) = 1 and a (1 + x^2)^{-1} envelope, whose
   off-diagonal sums over a separated set stay below 1/2;
4. solve interpolation problems either through the Gram least-norm
   system or a Neumann contraction iteration.

Everything here is certified in the conservative direction: grid maxima
are inflated by a mean-value slack, off-diagonal tails use the analytic
envelope, and no step ever reports a bound it did not check.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    BudgetExceeded,
    HypothesisViolated,
    InvalidArity,
    NoCertificate,
    NonInterpolating,
    NotContraction,
    StepsDependent,
)
from .exponentials import ExpPolynomial, FrequencySet, frame_report, gram, pair_integral_many
from .spectra import SpectrumSet, normalize

_CHUNK = 1 << 20


def _dirichlet_norm(n: int, x):
    """(1/n) sum_{j=0}^{n-1} e^{2 pi i j x}, vectorized and singularity-free.

    With k = round(x) and f = x - k the geometric sum factors as
    e^{i pi (n-1) x} (-1)^{k(n-1)} sinc(n f) / sinc(f); the sinc ratio is
    well defined for all |f| <= 1/2 and equals 1 at f = 0, so the value
    at integer x is exactly 1 with no limit handling.
    """
    x = np.asarray(x, dtype=float)
    k = np.round(x)
    f = x - k
    ratio = np.sinc(n * f) / np.sinc(f)
    if n % 2 == 1:
        signed = ratio
    else:
        signed = np.where(np.asarray(k, dtype=np.int64) % 2 == 0, ratio, -ratio)
    return np.exp(1j * np.pi * (n - 1) * x) * signed


def dirichlet_poly(n: int, q: float) -> ExpPolynomial:
    """The normalized Dirichlet kernel (1/n) sum_j e^{2 pi i j q t}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if q < 2:
        raise ValueError("step q must be >= 2")
    return ExpPolynomial(tuple((j * q, 1.0 / n) for j in range(n)))


def dirichlet_eval(n: int, q: float, t):
    """Closed-form evaluation of dirichlet_poly(n, q) at t (vectorized)."""
    return _dirichlet_norm(n, q * np.asarray(t, dtype=float))


def _primes(m: int):
    ps = []
    cand = 2
    while len(ps) < m:
        if all(cand % p for p in ps):
            ps.append(cand)
        cand += 1
    return ps


def choose_steps(m: int, step_range) -> list:
    """m steps lo + frac(sqrt(p_j)) (hi - lo), p_j the j-th prime.

    sqrt of a prime is irrational, so the fractional parts are distinct
    irrationals and the steps are pairwise rationally independent in
    exact arithmetic; separation_rho re-checks the float realization.
    """
    if m < 1:
        raise InvalidArity("need at least one step")
    lo, hi = float(step_range[0]), float(step_range[1])
    if not lo < hi:
        raise ValueError("empty step range")
    out = []
    for p in _primes(m):
        r = math.sqrt(p)
        out.append(lo + (r - math.floor(r)) * (hi - lo))
    return out


def separation_rho(steps, eps: float) -> float:
    """Minimum gap of the nonzero multiples k q_j inside (-1/eps, 1/eps).

    Also accounts for the distance to the origin, and is capped at eps
    (the certified-annulus argument only ever needs rho < eps).  Two
    multiples closer than 1e-12 mean the steps are rationally dependent
    at the scale of the window.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    pts = []
    top = 1.0 / eps
    for q in steps:
        k = 1
        while k * q < top:
            pts.append(k * q)
            pts.append(-k * q)
            k += 1
    if not pts:
        return eps
    pts = np.sort(np.array(pts))
    gaps = np.diff(pts)
    if len(gaps) and float(np.min(gaps)) < 1e-12:
        i = int(np.argmin(gaps))
        raise StepsDependent(
            f"multiples collide at {pts[i]!r} (gap {float(gaps[i]):.3e})"
        )
    rho = float(np.min(np.abs(pts)))
    if len(gaps):
        rho = min(rho, float(np.min(gaps)))
    return min(rho, eps)


@dataclass(frozen=True)
class PropertyCAnchors:
    """Progressions a_j + k q_j (k = 1..length) checked to lie in Gamma."""

    steps: tuple
    anchors: tuple
    length: int

    def __post_init__(self):
        if len(self.steps) != len(self.anchors):
            raise ValueError("steps and anchors must pair up")
        if len(set(self.steps)) != len(self.steps):
            raise ValueError("steps must be distinct")
        if self.length < 1:
            raise ValueError("length must be positive")

    def progression_points(self, n: Optional[int] = None) -> np.ndarray:
        n = self.length if n is None else n
        ks = np.arange(1, n + 1)
        return np.concatenate(
            [a + ks * q for a, q in zip(self.anchors, self.steps)]
        )


def _assert_in_gamma(points: np.ndarray, gamma: FrequencySet, tol: float = 1e-9):
    g = gamma.asarray()
    idx = np.clip(np.searchsorted(g, points), 0, len(g) - 1)
    near = np.minimum(
        np.abs(g[idx] - points), np.abs(g[np.maximum(idx - 1, 0)] - points)
    )
    if float(np.max(near)) > tol:
        bad = float(points[int(np.argmax(near))])
        raise HypothesisViolated(f"progression point {bad!r} not in gamma")


def property_c_anchors(
    gamma: FrequencySet, steps, anchors, length: int
) -> PropertyCAnchors:
    pc = PropertyCAnchors(tuple(steps), tuple(anchors), int(length))
    _assert_in_gamma(pc.progression_points(), gamma)
    return pc


def progression_gamma(steps, anchors, length: int) -> FrequencySet:
    """The union of the progressions themselves, as a frequency set."""
    pts = PropertyCAnchors(tuple(steps), tuple(anchors), int(length)).progression_points()
    pts = np.sort(pts)
    if len(pts) > 1 and float(np.min(np.diff(pts))) < 1e-9:
        raise StepsDependent("progressions collide; pick different anchors")
    return FrequencySet(tuple(pts))


# --- sup-norm certification ------------------------------------------------


@dataclass(frozen=True)
class CertifyResult:
    observed_max: float
    bernstein_slack: float
    certified: bool


@dataclass(frozen=True)
class _AnchoredScreen:
    """Analytic localization of where an anchored product can be large.

    |P(t)| <= B(t) = mean_j min(1, 1/(n |sin(pi q_j t)|)), and B(t) > thr
    forces at least one term above thr, i.e. dist(q_j t, Z) inside an
    asin-window around some peak k/q_j.  Outside the union of those
    windows |P| <= thr with no evaluation at all, which turns full-band
    scans into scans of a few narrow intervals.
    """

    steps: tuple
    n: int

    def bound(self, t):
        return _cheap_bound(t, self.steps, self.n)

    def seed_points(self, band):
        lo, hi = band
        pts = [lo, hi]
        for q in self.steps:
            for k in range(int(math.floor(lo * q)), int(math.ceil(hi * q)) + 1):
                if lo <= k / q <= hi:
                    pts.append(k / q)
        return np.array(pts)

    def windows(self, thr, band):
        lo, hi = band
        if thr >= 1.0:
            return []
        raw = []
        for q in self.steps:
            arg = 1.0 / (self.n * thr)
            half = (0.5 if arg >= 1.0 else math.asin(arg) / math.pi) / q
            k0 = int(math.floor(lo * q))
            k1 = int(math.ceil(hi * q))
            for k in range(k0, k1 + 1):
                c = k / q
                if c + half < lo or c - half > hi:
                    continue
                raw.append((max(lo, c - half), min(hi, c + half)))
        raw.sort()
        merged = []
        for a, b in raw:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return merged


def _screened_max(evaluate, screen, lo, hi, step, threads=None) -> float:
    """Exact max of |evaluate| over the +-band grid, via the hot windows.

    Points skipped satisfy |P| <= B <= lb where lb is the max over the
    analytic seed points, so the result equals the full-grid maximum
    whenever that maximum exceeds lb, and is the (tighter) seed value
    otherwise.  Seeds include the off-grid peak centers, making the
    reported maximum a slightly better sup estimate than the bare grid.
    """
    seeds = screen.seed_points((lo, hi))
    lb = max(
        float(np.max(np.abs(evaluate(seeds)))),
        float(np.max(np.abs(evaluate(-seeds)))),
    )
    tasks = []
    for wl, wh in screen.windows(lb, (lo, hi)):
        i0 = int(math.ceil((wl - lo) / step - 1e-12))
        i1 = int(math.floor((wh - lo) / step + 1e-12))
        for j0 in range(i0, i1 + 1, _CHUNK):
            tasks.append((j0, min(j0 + _CHUNK - 1, i1)))

    def window_max(span):
        j0, j1 = span
        t = lo + step * np.arange(j0, j1 + 1)
        best = 0.0
        for sgn in (1.0, -1.0):
            ts = sgn * t
            hot = screen.bound(ts) > lb
            if np.any(hot):
                best = max(best, float(np.max(np.abs(evaluate(ts[hot])))))
        return best

    if threads and threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            vals = list(ex.map(window_max, tasks))
    else:
        vals = [window_max(s) for s in tasks]
    return max([lb] + vals)


def _scan_max(evaluate, lo, hi, step, threads=None) -> float:
    """max |evaluate(t)| over +-[lo, hi] on the step grid (hi included)."""
    npts = int(math.floor((hi - lo) / step)) + 1
    starts = list(range(0, npts, _CHUNK))

    def chunk_max(i0):
        t = lo + step * np.arange(i0, min(i0 + _CHUNK, npts))
        m = float(np.max(np.abs(evaluate(t))))
        return max(m, float(np.max(np.abs(evaluate(-t)))))

    if threads and threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            best = max(ex.map(chunk_max, starts))
    else:
        best = max(chunk_max(i0) for i0 in starts)
    edge = np.array([hi, -hi])
    return max(best, float(np.max(np.abs(evaluate(edge)))))


def certify_sup(
    P: ExpPolynomial,
    band,
    bound: float,
    grid_step: float,
    evaluator: Optional[Callable] = None,
    threads: Optional[int] = None,
    screen: Optional[_AnchoredScreen] = None,
) -> CertifyResult:
    """Grid maximum of |P| over the symmetric band, plus derivative slack.

    |P'| <= 2 pi (max |freq|) (sum |coeff|) everywhere, so any point of
    the band is within grid_step/2 of a grid point and |P| there exceeds
    the grid value by at most grid_step pi (sum|c|) (max|f|).  The
    certificate is conservative by construction: it can fail a true
    bound, never pass a false one.  A ``screen`` skips grid points whose
    analytic bound already rules them out, without changing the result
    (beyond also sampling the exact peak centers).
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    lo, hi = float(band[0]), float(band[1])
    if not 0 <= lo < hi:
        raise ValueError("band must satisfy 0 <= lo < hi")
    ev = evaluator if evaluator is not None else P
    if screen is not None:
        observed = _screened_max(ev, screen, lo, hi, grid_step, threads=threads)
    else:
        observed = _scan_max(ev, lo, hi, grid_step, threads=threads)
    f = P.frequencies
    c = P.coefficients
    fmax = float(np.max(np.abs(f))) if len(f) else 0.0
    slack = grid_step * math.pi * float(np.sum(np.abs(c))) * fmax
    return CertifyResult(
        observed_max=observed,
        bernstein_slack=slack,
        certified=observed + slack <= bound,
    )


@dataclass(frozen=True)
class FlatteningCertificate:
    """P with P(0) = 1, plus the grid evidence that |P| <= eps on the band."""

    polynomial: ExpPolynomial
    eps: float
    band: tuple
    grid_step: float
    observed_max: float
    bernstein_slack: float
    certified: bool
    steps: tuple
    anchors: tuple
    n: int

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def frequencies(self) -> np.ndarray:
        return self.polynomial.frequencies

    def evaluate(self, t):
        """Closed-form product evaluation; exact 1.0 at t = 0."""
        return _anchored_eval(t, self.steps, self.anchors, self.n)

    def csv(self) -> str:
        hdr = "eps,band_lo,band_hi,grid_step,observed_max,slack,certified,n,m"
        row = (
            f"{self.eps!r},{self.band[0]!r},{self.band[1]!r},{self.grid_step!r},"
            f"{self.observed_max!r},{self.bernstein_slack!r},"
            f"{str(self.certified).lower()},{self.n},{self.m}"
        )
        return hdr + "\n" + row + "\n"


def _anchored_eval(t, steps, anchors, n):
    t = np.asarray(t, dtype=float)
    acc = np.zeros(t.shape, dtype=complex)
    for a, q in zip(anchors, steps):
        acc = acc + np.exp(2j * np.pi * (a + q) * t) * _dirichlet_norm(n, q * t)
    return acc / len(steps)


def _cheap_bound(t, steps, n):
    """Pointwise upper bound for |P|: mean of min(1, 1/(n |sin(pi q t)|))."""
    t = np.asarray(t, dtype=float)
    acc = np.zeros(t.shape)
    for q in steps:
        s = n * np.abs(np.sin(np.pi * q * t))
        with np.errstate(divide="ignore"):
            acc = acc + np.minimum(1.0, np.where(s > 0, 1.0 / np.where(s > 0, s, 1.0), 1.0))
    return acc / len(steps)


def _rho_minimum_n(steps, rho: float) -> int:
    """Smallest n with the analytic bound |P_{n,q}| <= rho off the peaks.

    dist(t, (1/q)Z) >= rho forces |sin(pi q t)| >= sin(pi min(q rho, 1/2)),
    so |P_{n,q}(t)| <= 1/(n sin(...)) and any n at or above the returned
    value satisfies the off-peak condition for every step.
    """
    need = 1
    for q in steps:
        s = math.sin(math.pi * min(q * rho, 0.5))
        need = max(need, math.ceil(1.0 / (rho * s)))
    return need


def _build_polynomial(steps, anchors, n: int) -> ExpPolynomial:
    m = len(steps)
    freqs = np.concatenate(
        [a + np.arange(1, n + 1) * q for a, q in zip(anchors, steps)]
    )
    order = np.argsort(freqs)
    coeff = 1.0 / (m * n)
    return ExpPolynomial(tuple((float(f), coeff) for f in freqs[order]))


def flattening_poly(
    gamma: FrequencySet,
    anchors: PropertyCAnchors,
    eps: float,
    n_budget: int,
    grid_step: Optional[float] = None,
    threads: Optional[int] = None,
) -> FlatteningCertificate:
    """Anchor-modulated Dirichlet average, flat on eps < |t| < 1/eps.

    The per-part length n starts at the analytic off-peak minimum, then
    doubles and bisects on the certification outcome, giving the
    canonical smallest n on that trajectory.  All frequencies a_j + k q_j
    (k = 1..n) lie in gamma by the anchors' progression property.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    steps = tuple(anchors.steps)
    m = len(steps)
    if m <= 1.0 / eps:
        raise HypothesisViolated(f"need m > 1/eps, got m={m}, 1/eps={1/eps!r}")
    _assert_in_gamma(anchors.progression_points(), gamma)
    rho = separation_rho(steps, eps)
    band = (eps, 1.0 / eps)
    n_max = min(int(n_budget), anchors.length)
    n_rho = _rho_minimum_n(steps, rho)

    fmax_at = lambda n: max(a + n * q for a, q in zip(anchors.anchors, steps))

    def step_for(n):
        # a fixed step cannot certify large n (slack grows with the top
        # frequency while the observed max does not shrink), so the
        # default adapts per candidate to hold the slack at eps/64
        if grid_step is not None:
            return grid_step
        return eps / (64.0 * math.pi * fmax_at(n))

    def attempt(n):
        ev = lambda t: _anchored_eval(t, steps, anchors.anchors, n)
        P = _build_polynomial(steps, anchors.anchors, n)
        res = certify_sup(
            P, band, eps, step_for(n), evaluator=ev, threads=threads,
            screen=_AnchoredScreen(steps, n),
        )
        return P, res

    def freeze(P, res, n):
        return FlatteningCertificate(
            polynomial=P,
            eps=eps,
            band=band,
            grid_step=step_for(n),
            observed_max=res.observed_max,
            bernstein_slack=res.bernstein_slack,
            certified=res.certified,
            steps=steps,
            anchors=tuple(anchors.anchors),
            n=n,
        )

    if n_rho > n_max:
        # infeasible before any fine grid work; scan coarsely for the report
        coarse = (band[1] - band[0]) / 20000.0
        ev = lambda t: _anchored_eval(t, steps, anchors.anchors, n_max)
        P = _build_polynomial(steps, anchors.anchors, n_max)
        res = certify_sup(P, band, eps, coarse, evaluator=ev, threads=threads)
        cert = FlatteningCertificate(
            polynomial=P, eps=eps, band=band, grid_step=coarse,
            observed_max=res.observed_max, bernstein_slack=res.bernstein_slack,
            certified=False, steps=steps, anchors=tuple(anchors.anchors), n=n_max,
        )
        raise BudgetExceeded(
            f"off-peak condition needs n >= {n_rho} but budget allows {n_max}",
            best=cert,
        )

    n = n_rho
    P, res = attempt(n)
    if res.certified:
        return freeze(P, res, n)
    lo_fail = n
    while n < n_max:
        n = min(2 * n, n_max)
        P, res = attempt(n)
        if res.certified:
            break
        lo_fail = n
    if not res.certified:
        raise BudgetExceeded(
            f"not certified up to n = {n_max} (observed {res.observed_max!r})",
            best=freeze(P, res, n_max),
        )
    hi_pass, best = n, (P, res)
    while hi_pass - lo_fail > 1:
        mid = (lo_fail + hi_pass) // 2
        P, res = attempt(mid)
        if res.certified:
            hi_pass, best = mid, (P, res)
        else:
            lo_fail = mid
    return freeze(best[0], best[1], hi_pass)


@dataclass(frozen=True)
class AuditReport:
    factor: int
    points_checked: int
    exact_evaluations: int
    violations: int
    max_abs_seen: float


def audit_sup(
    cert: FlatteningCertificate, factor: int = 100, threads: Optional[int] = None
) -> AuditReport:
    """Re-check |P| <= eps on a grid ``factor`` times finer than certified.

    The fine grid can run to 1e9+ points, so only the analytic hot
    windows around the Dirichlet peaks are visited; outside them the
    cheap bound min(1, 1/(n |sin(pi q t)|)) already keeps |P| at or
    below eps, so no violation is possible there.  Inside a window the
    exact polynomial is evaluated only where the pointwise cheap bound
    exceeds eps.
    """
    lo, hi = cert.band
    step = cert.grid_step / factor
    npts = int(math.floor((hi - lo) / step)) + 1
    screen = _AnchoredScreen(cert.steps, cert.n)
    tasks = []
    for wl, wh in screen.windows(cert.eps, (lo, hi)):
        i0 = int(math.ceil((wl - lo) / step - 1e-12))
        i1 = int(math.floor((wh - lo) / step + 1e-12))
        for j0 in range(i0, i1 + 1, _CHUNK):
            tasks.append((j0, min(j0 + _CHUNK - 1, i1)))

    def chunk_stats(span):
        j0, j1 = span
        t = lo + step * np.arange(j0, j1 + 1)
        viol = 0
        exact = 0
        worst = 0.0
        for sgn in (1.0, -1.0):
            ts = sgn * t
            hot = screen.bound(ts) > cert.eps
            exact += int(np.count_nonzero(hot))
            if np.any(hot):
                vals = np.abs(cert.evaluate(ts[hot]))
                worst = max(worst, float(np.max(vals)))
                viol += int(np.count_nonzero(vals > cert.eps))
        return viol, exact, worst

    if threads and threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(chunk_stats, tasks))
    else:
        parts = [chunk_stats(s) for s in tasks]
    return AuditReport(
        factor=factor,
        points_checked=2 * npts,
        exact_evaluations=sum(p[1] for p in parts),
        violations=sum(p[0] for p in parts),
        max_abs_seen=max((p[2] for p in parts), default=0.0),
    )


# --- window pair and the interpolating kernel ------------------------------

_SIN8_WEIGHTS = tuple(math.comb(8, 4 + k) / 256.0 for k in range(-4, 5))
_PHI_SCALE = 128.0 / 35.0
# phi at integers, from sinc(n+k) = [n+k == 0]: phi(n) = (-1)^n C(8, 4-n)/70
_PHI_TABLE = {
    n: (-1.0) ** n * math.comb(8, 4 - n) / 70.0 for n in range(-4, 5)
}


def _phi(x):
    scalar = np.isscalar(x) or getattr(x, "ndim", 1) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    acc = np.zeros(x.shape)
    for k in range(-4, 5):
        acc = acc + _SIN8_WEIGHTS[k + 4] * np.sinc(x + k)
    out = _PHI_SCALE * np.exp(1j * np.pi * x) * acc
    # exact values at integer arguments (np.sinc leaves ~1e-17 residue)
    r = np.round(x)
    ints = x == r
    if np.any(ints):
        out[ints] = [_PHI_TABLE.get(int(v), 0.0) for v in r[ints]]
    return out[0] if scalar else out


def _big_phi(t):
    t = np.asarray(t, dtype=float)
    inside = (t >= 0) & (t <= 1)
    return np.where(inside, _PHI_SCALE * np.sin(np.pi * t) ** 8, 0.0)


@dataclass(frozen=True)
class WindowPair:
    """sin^8 bump on [0, 1], normalized so its transform has phi(0) = 1."""

    Phi: Callable
    phi: Callable
    M: float
    decay_const: float

    def envelope(self, x):
        """Certified bound |phi(x)| <= decay_const / (1 + x^4) (grid-checked)."""
        x = np.asarray(x, dtype=float)
        return self.decay_const / (1.0 + x**4)


@lru_cache(maxsize=1)
def window_pair() -> WindowPair:
    grid = np.linspace(-200.0, 200.0, 400001)
    decay = float(np.max((1.0 + grid**4) * np.abs(_phi(grid))))
    return WindowPair(Phi=_big_phi, phi=_phi, M=_PHI_SCALE, decay_const=decay)


@dataclass(frozen=True)
class KernelReport:
    h: Callable
    offdiag_max: float
    frame_bound: Optional[float]
    S_delta: SpectrumSet
    gamma_p: FrequencySet
    eps: float
    delta: float


def interpolator_kernel(
    cert: FlatteningCertificate,
    w: WindowPair,
    lam: FrequencySet,
    strict: bool = False,
) -> KernelReport:
    """Kernel h = P phi with its off-diagonal budget over lam.

    Close pairs are evaluated exactly; pairs beyond the crossover point
    x_c -- where the window decay C/(1 + x^4) drops below the envelope
    eps/(1 + x^2), so the envelope charge is justified by |P| <= 1
    alone -- are charged eps/(1 + d^2).  offdiag_max is therefore an
    upper bound, never an estimate.  A frame bound 1/(2M) is only
    reported when it stays below 1/2; with ``strict`` the shortfall
    raises instead of returning None.
    """
    delta = lam.separation
    if not cert.certified:
        raise HypothesisViolated("flattening certificate is not certified")
    if cert.eps > delta:
        raise HypothesisViolated(
            f"certificate eps {cert.eps!r} exceeds separation {delta!r}"
        )

    def h(x):
        return cert.evaluate(x) * w.phi(x)

    # eps (1+x^4) >= C (1+x^2) from this point on (positive root in x^2)
    C = w.decay_const
    x_c = math.sqrt(
        (C + math.sqrt(C * C + 4.0 * cert.eps * (C - cert.eps)))
        / (2.0 * cert.eps)
    )
    cutoff = max(1.0 / cert.eps, x_c)

    pts = lam.asarray()
    diffs = pts[None, :] - pts[:, None]
    absd = np.abs(diffs)
    off = ~np.eye(len(pts), dtype=bool)
    near = off & (absd <= cutoff)
    contrib = np.zeros_like(absd)
    if np.any(near):
        contrib[near] = np.abs(h(diffs[near]))
    far = off & ~near
    contrib[far] = cert.eps / (1.0 + absd[far] ** 2)
    offdiag = float(np.max(np.sum(contrib, axis=1))) if len(pts) > 1 else 0.0

    if offdiag >= 0.5:
        if strict:
            raise NoCertificate("off-diagonal sum reaches 1/2", value=offdiag)
        frame = None
    else:
        frame = 1.0 / (2.0 * w.M)
    freqs = cert.frequencies
    S_delta = normalize([(f, f + 1.0) for f in freqs])
    return KernelReport(
        h=h,
        offdiag_max=offdiag,
        frame_bound=frame,
        S_delta=S_delta,
        gamma_p=FrequencySet(tuple(freqs)),
        eps=cert.eps,
        delta=delta,
    )


# --- interpolation solvers -------------------------------------------------


@dataclass(frozen=True)
class LeastNormResult:
    coefficients: np.ndarray
    evaluator: Callable
    residual: float
    min_eigenvalue: float


def least_norm_interpolant(
    lam: FrequencySet, S: SpectrumSet, c
) -> LeastNormResult:
    """Solve G b = c and interpolate with the reproducing kernel of S.

    f(x) = sum_j b_j K(x - lambda_j) with K(u) = integral_S e^{2 pi i u t} dt
    hits f(lambda_i) = (G b)_i = c_i by construction; the reported
    residual re-evaluates f at the nodes rather than trusting the solve.
    """
    c = np.asarray(c, dtype=complex)
    if c.shape != (len(lam),):
        raise ValueError("data length must match lam")
    fr = frame_report(lam, S)
    if fr.min_eigenvalue <= 1e-8:
        raise NonInterpolating(
            f"Gram minimum eigenvalue {fr.min_eigenvalue!r} too small"
        )
    G = gram(lam, S).entries
    b = np.linalg.solve(G, c)
    pts = lam.asarray()

    def f(x):
        x = np.asarray(x, dtype=float)
        K = pair_integral_many(x[..., None] - pts, S)
        return K @ b

    residual = float(np.max(np.abs(f(pts) - c)))
    return LeastNormResult(
        coefficients=b, evaluator=f, residual=residual,
        min_eigenvalue=fr.min_eigenvalue,
    )


@dataclass(frozen=True)
class NeumannProblem:
    lam: FrequencySet
    profile: Callable
    data: tuple
    contraction_norm: float
    tmatrix: np.ndarray


def neumann_problem(lam: FrequencySet, profile: Callable, data) -> NeumannProblem:
    """Off-diagonal operator (T c)_i = sum_{j != i} d(lambda_i - lambda_j) c_j."""
    d0 = complex(np.asarray(profile(np.array([0.0])), dtype=complex).reshape(-1)[0])
    if abs(d0 - 1.0) > 1e-12:
        raise ValueError("profile must satisfy d(0) = 1")
    pts = lam.asarray()
    T = np.asarray(profile(pts[:, None] - pts[None, :]), dtype=complex)
    np.fill_diagonal(T, 0.0)
    norm = float(np.max(np.sum(np.abs(T), axis=1))) if len(pts) > 1 else 0.0
    return NeumannProblem(
        lam=lam,
        profile=profile,
        data=tuple(complex(v) for v in np.asarray(data, dtype=complex)),
        contraction_norm=norm,
        tmatrix=T,
    )


@dataclass(frozen=True)
class NeumannResult:
    coefficients: np.ndarray
    iterations: int
    residual: float
    update_norms: tuple


def neumann_interpolate(
    prob: NeumannProblem, tol: float = 1e-12, max_iter: int = 1000
) -> NeumannResult:
    """Solve (I + T) b = c by b <- c - T b, geometric at contraction_norm."""
    if prob.contraction_norm >= 1.0:
        raise NotContraction(
            f"row-sum norm {prob.contraction_norm!r} is not below 1"
        )
    c = np.asarray(prob.data, dtype=complex)
    if c.shape != (len(prob.lam),):
        raise ValueError("data length must match lam")
    b = c.copy()
    updates = []
    iterations = 0
    for _ in range(max_iter):
        nxt = c - prob.tmatrix @ b
        step = float(np.max(np.abs(nxt - b)))
        updates.append(step)
        b = nxt
        iterations += 1
        if step < tol:
            break
    # f(lambda_i) = b_i + (T b)_i since d(0) = 1
    residual = float(np.max(np.abs(b + prob.tmatrix @ b - c)))
    return NeumannResult(
        coefficients=b,
        iterations=iterations,
        residual=residual,
        update_norms=tuple(updates),
    )
