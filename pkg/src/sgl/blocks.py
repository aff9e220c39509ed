"""Symmetric integer frequency blocks and L2 approximation residuals.

The residual of a target exponential ``e^{2 pi i m t}`` against the span
of ``{e^{2 pi i n t} : n in Z}`` in L2(A) comes from the normal
equations with the exact Gram over A.  These Gram matrices are
spectacularly ill-conditioned (the minimum eigenvalue decays like
``exp(-c |Z|)`` once A has a hole around the target), and in double
precision the residual formula ``measure(A) - Re(g^H b)`` loses every
digit to cancellation well before |Z| reaches 30.  The solver below
therefore runs a Hermitian Cholesky factorization in arbitrary
precision (gmpy2), with the working precision scaled to the block size
and escalated automatically if a pivot goes nonpositive.

Orientation note: with basis inner products <e_p, e_q> = pair(p - q),
the normal matrix for least squares is M[i][j] = <e_{z_j}, e_{z_i}>
= pair(z_j - z_i) and the right side is g[i] = <e_m, e_{z_i}>
= pair(m - z_i); for spectra that are not symmetric about the origin
the transposed variant silently computes a different (non-minimal)
projection, which is observable as a residual that refuses to shrink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import BudgetExceeded, HypothesisViolated, IllConditioned
from .exponentials import FrequencySet
from .spectra import SpectrumSet

_PIVOT_ESCALATIONS = 3


def _interval_pairs(A: SpectrumSet):
    return [(iv.lo, iv.hi) for iv in A.intervals]


class _PrecisePlan:
    """Factorization of one normal matrix, reusable across targets m."""

    def __init__(self, zs, A: SpectrumSet, bits: int):
        self.zs = list(zs)
        self.pairs = _interval_pairs(A)
        self.bits = bits
        self.measure = None
        self.low = None  # lower-triangular Cholesky factor
        self.min_pivot = None
        self._cache = {}
        self._factor()

    def _pair(self, theta):
        # integral over A of e^{2 pi i theta t}; cached per difference
        hit = self._cache.get(theta)
        if hit is not None:
            return hit
        if theta == 0:
            val = mpc(sum(mpfr(hi) - mpfr(lo) for lo, hi in self.pairs))
        else:
            w = 2 * gmpy2.const_pi() * theta
            val = mpc(0)
            for lo, hi in self.pairs:
                num = gmpy2.exp(mpc(0, w * mpfr(hi))) - gmpy2.exp(mpc(0, w * mpfr(lo)))
                val += num / mpc(0, w)
        self._cache[theta] = val
        return val

    def _factor(self):
        gmpy2.get_context().precision = self.bits
        self._cache.clear()
        self.measure = sum(mpfr(hi) - mpfr(lo) for lo, hi in self.pairs)
        zs = self.zs
        n = len(zs)
        L = [[None] * (i + 1) for i in range(n)]
        min_pivot = None
        for i in range(n):
            Li = L[i]
            for j in range(i + 1):
                s = self._pair(zs[j] - zs[i])
                Lj = L[j]
                for k in range(j):
                    s -= Li[k] * Lj[k].conjugate()
                if i == j:
                    piv = s.real
                    if piv <= 0:
                        raise ArithmeticError(f"nonpositive pivot at row {i}")
                    if min_pivot is None or piv < min_pivot:
                        min_pivot = piv
                    Li[j] = gmpy2.sqrt(piv)
                else:
                    Li[j] = s / Lj[j]
        self.low = L
        self.min_pivot = min_pivot

    def residual(self, m) -> float:
        gmpy2.get_context().precision = self.bits
        zs, L, n = self.zs, self.low, len(self.zs)
        if n == 0:
            return float(gmpy2.sqrt(self.measure))
        g = [self._pair(m - z) for z in zs]
        y = [None] * n
        for i in range(n):
            s = g[i]
            Li = L[i]
            for k in range(i):
                s -= Li[k] * y[k]
            y[i] = s / Li[i]
        b = [None] * n
        for i in range(n - 1, -1, -1):
            s = y[i]
            for k in range(i + 1, n):
                s -= L[k][i].conjugate() * b[k]
            b[i] = s / L[i][i]
        acc = sum((g[i].conjugate() * b[i]).real for i in range(n))
        r2 = self.measure - acc
        return float(gmpy2.sqrt(r2)) if r2 > 0 else 0.0


def _bits_for(n: int) -> int:
    # ~3 bits/row covers the eigenvalue decay; the rest is margin.
    return max(256, 4 * n + 256)


def _plan(zs, A: SpectrumSet) -> _PrecisePlan:
    bits = _bits_for(len(zs))
    for attempt in range(_PIVOT_ESCALATIONS + 1):
        try:
            return _PrecisePlan(zs, A, bits)
        except ArithmeticError as exc:
            last = exc
            bits = int(bits * 1.5) + 64
    raise IllConditioned(
        f"Gram over A stayed singular at {bits} bits: {last}",
        condition_estimate=float("inf"),
    )


def _as_int_list(Z):
    if isinstance(Z, FrequencySet):
        vals = Z.freqs
    else:
        vals = list(Z)
    out = []
    for v in vals:
        iv = int(round(v))
        if abs(v - iv) > 1e-9:
            raise ValueError(f"block frequencies must be integers, got {v}")
        out.append(iv)
    return sorted(set(out))


def residual(m: int, Z, A: SpectrumSet) -> float:
    """L2(A) distance from e^{2 pi i m t} to span{e^{2 pi i n t} : n in Z}."""
    zs = _as_int_list(Z)
    if not zs:
        return float(A.measure) ** 0.5
    return _plan(zs, A).residual(int(m))


def residual_many(ms, Z, A: SpectrumSet):
    """Residuals for several targets against one factorization."""
    zs = _as_int_list(Z)
    if not zs:
        root = float(A.measure) ** 0.5
        return {int(m): root for m in ms}
    plan = _plan(zs, A)
    out = {}
    symmetric = zs == [-z for z in reversed(zs)]
    for m in ms:
        m = int(m)
        if m in out:
            continue
        if symmetric and -m in out:
            # conjugation maps the problem for m onto the one for -m
            out[m] = out[-m]
            continue
        out[m] = plan.residual(m)
    return out


def tail_probe(m: int, N: int, M: int, A: SpectrumSet) -> float:
    """Residual onto the annulus {N < |n| <= M}; nonincreasing in M."""
    if not M > N >= 0:
        raise ValueError(f"need M > N >= 0, got N={N}, M={M}")
    Z = [n for n in range(-M, M + 1) if N < abs(n) <= M]
    return residual(m, Z, A)


@dataclass(frozen=True)
class Block:
    k: int
    n_lo: int
    n_hi: int

    @property
    def members(self) -> tuple:
        if self.k == 1:
            return (-1, 0, 1)
        return tuple(
            n for n in range(-self.n_hi, self.n_hi + 1) if self.n_lo < abs(n) <= self.n_hi
        )


@dataclass(frozen=True)
class BlockSchedule:
    eps: tuple

    def __post_init__(self):
        e = tuple(float(x) for x in self.eps)
        if any(x <= 0 for x in e) or any(b >= a for a, b in zip(e, e[1:])):
            raise ValueError("eps must be positive and strictly decreasing")
        object.__setattr__(self, "eps", e)

    @classmethod
    def dyadic(cls, k_max: int) -> "BlockSchedule":
        return cls(tuple(2.0 ** -k for k in range(1, k_max + 1)))


@dataclass(frozen=True)
class ResidualRow:
    k: int
    n_lo: int
    n_hi: int
    m: int
    residual: float
    eps_k: float

    def csv_row(self) -> str:
        return f"{self.k},{self.n_lo},{self.n_hi},{self.m},{self.residual!r},{self.eps_k!r}"


@dataclass
class BlockBuild:
    blocks: list
    rows: list
    k_max: int
    n_cap: int
    note: str = "finite truncation at k_max; the infinite construction is not claimed"


def _check_A(A: SpectrumSet):
    if A.measure >= 1:
        raise HypothesisViolated(f"need measure(A) < 1, got {A.measure}")
    if not A.is_empty and (A.lo < -1e-12 or A.hi > 1 + 1e-12):
        raise HypothesisViolated("A must lie inside [0, 1]")


def build_blocks(A: SpectrumSet, sched: BlockSchedule, k_max: int, n_cap: int) -> BlockBuild:
    """Choose block edges n_k so every target |m| <= k is eps_k-approximated.

    Block 1 is fixed at {-1, 0, 1}.  For k >= 2 the candidate edge
    doubles from n_{k-1} + 1 until the residual test passes, then
    bisects down; the returned n_k is the smallest tested value that
    passed, which makes the output canonical for a given budget.  If
    the doubling hits ``n_cap`` without a success the build stops with
    BudgetExceeded carrying the best (smallest) worst-case residual
    seen.
    """
    _check_A(A)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if len(sched.eps) < k_max:
        raise ValueError("schedule shorter than k_max")

    blocks = [Block(k=1, n_lo=0, n_hi=1)]
    rows = []
    res1 = residual_many(range(0, 2), blocks[0].members, A)
    for m in range(-1, 2):
        rows.append(ResidualRow(1, 0, 1, m, res1[abs(m)], sched.eps[0]))

    prev = 1
    for k in range(2, k_max + 1):
        eps_k = sched.eps[k - 1]
        ms = list(range(0, k + 1))
        tested = {}

        def worst(n):
            if n not in tested:
                members = Block(k=k, n_lo=prev, n_hi=n).members
                res = residual_many(ms, members, A)
                tested[n] = res
            return max(tested[n].values())

        lo_fail = None
        cand = prev + 1
        best = None
        while True:
            if cand > n_cap:
                cand = n_cap
            w = worst(cand)
            best = w if best is None else min(best, w)
            if w < eps_k:
                break
            if cand >= n_cap:
                raise BudgetExceeded(
                    f"k={k}: no n <= {n_cap} meets eps_k={eps_k} (best residual {best})",
                    best=best,
                )
            lo_fail = cand
            cand *= 2
        hi_pass = cand
        if lo_fail is not None:
            while hi_pass - lo_fail > 1:
                mid = (lo_fail + hi_pass) // 2
                if worst(mid) < eps_k:
                    hi_pass = mid
                else:
                    lo_fail = mid
        n_k = hi_pass
        blocks.append(Block(k=k, n_lo=prev, n_hi=n_k))
        res = tested[n_k]
        for m in range(-k, k + 1):
            rows.append(ResidualRow(k, prev, n_k, m, res[abs(m)], eps_k))
        prev = n_k

    return BlockBuild(blocks=blocks, rows=rows, k_max=k_max, n_cap=n_cap)


@dataclass(frozen=True)
class PartitionZ:
    assignment: dict  # block index k -> part index j (1-based)
    parts: dict       # part index j -> sorted tuple of integer members
    block_index: dict = field(default_factory=dict)  # k -> Block

    def part_points(self, j: int) -> tuple:
        return self.parts[j]


def partition_blocks(blocks, J: int, rule: str = "round_robin") -> PartitionZ:
    """Round-robin blocks into J parts: block k goes to ((k-1) mod J) + 1."""
    if J < 1:
        raise ValueError("J must be >= 1")
    if rule != "round_robin":
        raise ValueError(f"unknown partition rule {rule!r}")
    assignment = {}
    members = {j: [] for j in range(1, J + 1)}
    index = {}
    for b in blocks:
        j = ((b.k - 1) % J) + 1
        assignment[b.k] = j
        members[j].extend(b.members)
        index[b.k] = b
    parts = {j: tuple(sorted(v)) for j, v in members.items()}
    return PartitionZ(assignment=assignment, parts=parts, block_index=index)
