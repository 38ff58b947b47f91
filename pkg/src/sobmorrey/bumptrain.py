"""Dyadic offset schedules and the 1-D bump train sigma_n.

Block k (k0 <= k <= n) holds ``m_k = floor(2^(theta (k-1))) - 3`` translates
of the profile, centred at ``a_{k,j} = 2^(k-1) + 1 + j g_k`` with gap
``g_k = 2^((k-1)(1-theta))``. Every support [a - 2, a + 2] sits inside the
dyadic shell (2^(k-1), 2^k), so pointwise evaluation only needs the binary
exponent of |t| and one rounding.

Blocks are never materialized: counts are exact integers, gaps are floats, and
the invariant checks are done in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, NamedTuple, Optional

import numpy as np
from scipy import optimize

from .paramlab import THETA_MAX, as_fraction
from .profiles import Profile1D

MAX_QUADRATURE_BUMPS = 10**6

_GL20_X, _GL20_W = np.polynomial.legendre.leggauss(20)


class ScheduleError(ValueError):
    pass


def _iroot_floor(value: int, q: int) -> int:
    """Largest integer m with m**q <= value."""
    if value < 0 or q < 1:
        raise ValueError("need value >= 0 and q >= 1")
    if value < 2:
        return value
    guess = int(round(math.exp(math.log(value) / q))) if value.bit_length() < 1000 \
        else 1 << (value.bit_length() // q)
    lo, hi = max(guess - 2, 0), guess + 2
    while lo ** q > value:
        lo //= 2
    while hi ** q <= value:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** q <= value:
            lo = mid
        else:
            hi = mid
    return lo


def floor_pow2(e: Fraction) -> int:
    """Exact floor(2**e) for a non-negative rational e."""
    e = Fraction(e)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return _iroot_floor(2 ** e.numerator, e.denominator)


def pow2_times_leq(m: int, e: Fraction, bound: int) -> bool:
    """Exact test of m * 2**e <= bound for integers m, bound >= 0 and rational e >= 0."""
    if m <= 0:
        return bound >= 0
    if bound < 0:
        return False
    p, q = e.numerator, e.denominator
    return m ** q * 2 ** p <= bound ** q


def pow2_times_lt(m: int, e: Fraction, bound: int) -> bool:
    """Exact test of m * 2**e < bound."""
    if bound <= 0:
        return False
    if m <= 0:
        return True
    return m ** e.denominator * 2 ** e.numerator < bound ** e.denominator


def minimal_k0(theta: Fraction) -> int:
    a = 1 + 2 / theta
    b = 1 + 2 / (1 - theta)
    return max(math.ceil(a), math.ceil(b))


class Block(NamedTuple):
    k: int
    start: int  # 2^(k-1) + 1, the offset of j = 0
    gap: float
    gap_exponent: Fraction
    count: int

    def offset(self, j):
        return self.start + np.asarray(j, dtype=float) * self.gap

    def offsets(self) -> np.ndarray:
        return self.offset(np.arange(1, self.count + 1))


@dataclass(frozen=True)
class OffsetSchedule:
    theta: Fraction
    n: int
    k0: int

    @cached_property
    def _tables(self):
        ks = range(self.k0, self.n + 1)
        counts = np.zeros(self.n + 2, dtype=np.int64)
        gaps = np.ones(self.n + 2, dtype=float)
        for k in ks:
            counts[k] = floor_pow2(self.theta * (k - 1)) - 3
            gaps[k] = 2.0 ** float((k - 1) * (1 - self.theta))
        # before[k] = number of bumps in blocks k0 .. k-1
        before = np.concatenate([[0], np.cumsum(counts)])[: self.n + 2]
        return counts, gaps, before

    def block(self, k: int) -> Block:
        if not self.k0 <= k <= self.n:
            raise IndexError(f"block {k} outside [{self.k0}, {self.n}]")
        counts, gaps, _ = self._tables
        return Block(k, 2 ** (k - 1) + 1, float(gaps[k]),
                     (k - 1) * (1 - self.theta), int(counts[k]))

    def blocks(self) -> Iterator[Block]:
        for k in range(self.k0, self.n + 1):
            yield self.block(k)

    def total_count(self) -> int:
        counts, _, _ = self._tables
        return int(counts.sum())


def make_schedule(theta, n: int, k0: Optional[int] = None) -> OffsetSchedule:
    """Build the offset schedule for (theta, n).

    ``k0`` defaults to the smallest block index with m_k >= 1 and g_k >= 4; an
    override may only move it upwards.
    """
    theta = as_fraction(theta)
    if not 0 < theta <= THETA_MAX:
        raise ScheduleError(f"ThetaOutOfRange: need 0 < theta <= {THETA_MAX}, got {theta}")
    k_min = minimal_k0(theta)
    if k0 is None:
        k0 = k_min
    elif k0 < k_min:
        raise ScheduleError(f"k0={k0} below {k_min} breaks the count/gap invariants")
    if n < k0:
        raise ScheduleError(f"NTooSmall: n={n} < k0={k0}")
    return OffsetSchedule(theta, int(n), int(k0))


def total_count(schedule: OffsetSchedule) -> int:
    return schedule.total_count()


def check_schedule(schedule: OffsetSchedule, k_max: Optional[int] = None) -> list:
    """Exact containment and gap checks; returns the list of failures (empty if clean).

    Uses integer comparisons of m * 2^e against integer bounds, so no rounding
    is involved.
    """
    failures = []
    k_max = schedule.n if k_max is None else k_max
    for k in range(schedule.k0, k_max + 1):
        m = floor_pow2(schedule.theta * (k - 1)) - 3
        e = (k - 1) * (1 - schedule.theta)
        if m < 1:
            failures.append((k, "empty block"))
            continue
        # a_{k,1} > 2^(k-1) + 2  <=>  g_k > 1
        if not e > 0:
            failures.append((k, "first offset not inside the shell"))
        # a_{k,m} < 2^k - 2  <=>  m g_k < 2^(k-1) - 3
        if not pow2_times_lt(m, e, 2 ** (k - 1) - 3):
            failures.append((k, "last offset not below 2^k - 2"))
        # gap within the block: g_k >= 4
        if not e >= 2:
            failures.append((k, "gap below 4"))
        # gap to the next block: a_{k+1,1} - a_{k,m} = 2^(k-1) + g_{k+1} - m g_k >= 4,
        # implied by m g_k <= 2^(k-1) - 4
        if not pow2_times_leq(m, e, 2 ** (k - 1) - 4):
            failures.append((k, "gap to next block below 4"))
    return failures


@dataclass(frozen=True)
class SigmaTrain:
    schedule: OffsetSchedule
    profile: Profile1D = field(default_factory=Profile1D)
    symmetrized: bool = True

    @property
    def copies(self) -> int:
        return 2 if self.symmetrized else 1

    def _locate(self, u):
        """Nearest centre for u >= 0; returns (offset from centre, valid mask)."""
        counts, gaps, _ = self.schedule._tables
        _, k = np.frexp(u)
        valid = (k >= self.schedule.k0) & (k <= self.schedule.n)
        kk = np.where(valid, k, self.schedule.k0)
        g = gaps[kk]
        start = np.ldexp(1.0, kk - 1) + 1.0
        j = np.clip(np.rint((u - start) / g), 1, counts[kk])
        return u - (start + j * g), valid

    def value(self, t):
        t = np.asarray(t, dtype=float)
        u = np.abs(t)
        off, valid = self._locate(u)
        out = np.where(valid, self.profile.value(off), 0.0)
        if not self.symmetrized:
            out = np.where(t > 0, out, 0.0)
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u = np.abs(t)
        off, valid = self._locate(u)
        out = np.where(valid, np.sign(t) * self.profile.derivative(off), 0.0)
        if not self.symmetrized:
            out = np.where(t > 0, out, 0.0)
        return out

    # exact cumulative integrals ------------------------------------------
    def half_cumulative(self, y, r: float):
        """int_0^y chi_n^r for y >= 0, exact up to the profile's partial moment."""
        y = np.asarray(y, dtype=float)
        counts, gaps, before = self.schedule._tables
        moment = self.profile.moment(r)
        total = self.schedule.total_count() * moment
        _, k = np.frexp(np.maximum(y, 0.0))
        inside = (k >= self.schedule.k0) & (k <= self.schedule.n)
        kk = np.where(inside, k, self.schedule.k0)
        g = gaps[kk]
        shell = np.ldexp(1.0, kk - 1)
        jstar = np.clip(np.ceil((y + 1.0 - shell) / g) - 1.0, 0, counts[kk])
        centre = shell + 1.0 + jstar * g
        part = np.where(jstar >= 1, self.profile.partial_moment(y - centre, r), 0.0)
        full = (before[kk] + np.maximum(jstar - 1, 0)) * moment
        out = np.where(inside, full + part, 0.0)
        return np.where(k > self.schedule.n, total, out)

    def cumulative(self, x, r: float):
        """int_{-inf}^x sigma_n^r."""
        x = np.asarray(x, dtype=float)
        half = self.schedule.total_count() * self.profile.moment(r)
        pos = self.half_cumulative(np.abs(x), r)
        if self.symmetrized:
            return np.where(x >= 0, half + pos, half - pos)
        return np.where(x >= 0, pos, 0.0)

    def window_integral(self, t0, rho, r: float):
        t0 = np.asarray(t0, dtype=float)
        rho = np.asarray(rho, dtype=float)
        return self.cumulative(t0 + rho, r) - self.cumulative(t0 - rho, r)

    def centres(self, per_block: Optional[int] = None) -> np.ndarray:
        """Positive bump centres; with ``per_block`` only a spread subsample of each block."""
        out = []
        for blk in self.schedule.blocks():
            if per_block is None or blk.count <= per_block:
                j = np.arange(1, blk.count + 1)
            else:
                j = np.unique(np.rint(np.linspace(1, blk.count, per_block)).astype(int))
            out.append(blk.offset(j))
        return np.concatenate(out) if out else np.zeros(0)

    def block_midpoints(self) -> np.ndarray:
        return np.array([0.75 * 2.0 ** k for k in range(self.schedule.k0, self.schedule.n + 1)])


def make_train(theta, n: int, profile: Optional[Profile1D] = None, k0: Optional[int] = None,
               symmetrized: bool = True) -> SigmaTrain:
    return SigmaTrain(make_schedule(theta, n, k0), profile or Profile1D(), symmetrized)


def sigma_eval(train: SigmaTrain, t):
    return train.value(t)


def sigma_prime_eval(train: SigmaTrain, t):
    return train.derivative(t)


def profile_moment(profile: Profile1D, r: float) -> float:
    return profile.moment(r)


def profile_prime_moment(profile: Profile1D, p: float) -> float:
    return profile.prime_moment(p)


def sigma_lr_norm_closed(train: SigmaTrain, r: float) -> float:
    """int sigma_n^r = copies * N(n, theta) * int eta^r (supports are disjoint)."""
    if not r > 0:
        raise ValueError(f"NonPositiveExponent: r={r}")
    return train.copies * train.schedule.total_count() * train.profile.moment(r)


def _bump_nodes(depth: int):
    """Quadrature nodes/weights on [-2, 2] relative to a bump centre.

    Plateau [-1, 1] in two panels; each ramp graded dyadically toward the
    support edge where eta^r loses smoothness.
    """
    panels = [(-1.0, 0.0), (0.0, 1.0)]
    for i in range(depth):
        lo, hi = 2.0 - 2.0 ** -i, 2.0 - 2.0 ** -(i + 1)
        panels.append((lo, hi))
        panels.append((-hi, -lo))
    edge = 2.0 ** -depth
    panels.append((2.0 - edge, 2.0))
    panels.append((-2.0, -2.0 + edge))
    lo = np.array([a for a, _ in panels])
    hi = np.array([b for _, b in panels])
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL20_X
    weights = half[:, None] * _GL20_W
    return nodes.ravel(), weights.ravel()


def sigma_lr_norm_quadrature(train: SigmaTrain, r: float, tol: float = 1e-8,
                             chunk: int = 2048) -> float:
    """Composite quadrature of sigma_n^r over the union of bump supports.

    Evaluates the train itself at every node (block lookup included), so it is
    an independent check on the closed form.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    n_bumps = train.schedule.total_count()
    if n_bumps > MAX_QUADRATURE_BUMPS:
        raise ValueError(f"TooManyBumps: {n_bumps} > {MAX_QUADRATURE_BUMPS}")
    depth = max(4, math.ceil(math.log2(1.0 / (0.01 * tol)) / (r + 1.0)) + 1)
    nodes, weights = _bump_nodes(depth)
    parts = []
    for blk in train.schedule.blocks():
        for j0 in range(1, blk.count + 1, chunk):
            centres = blk.offset(np.arange(j0, min(j0 + chunk, blk.count + 1)))
            pts = centres[:, None] + nodes
            vals = train.value(pts) ** r
            parts.append(float(np.sum(vals @ weights)))
            if train.symmetrized:
                vals = train.value(-pts) ** r
                parts.append(float(np.sum(vals @ weights)))
    return math.fsum(parts)


class MorreySup(NamedTuple):
    sup: float
    t0: float
    rho: float


def _refine(objective, starts, lo_rho=None, hi_rho=None):
    """Nelder-Mead polish of (t0, log2 rho) from the best coarse candidates."""
    best = max(starts, key=lambda s: s[0])
    for value, t0, rho in starts:
        def neg(x):
            rr = 2.0 ** x[1]
            if lo_rho is not None and rr < lo_rho:
                return 0.0
            if hi_rho is not None and rr > hi_rho:
                return 0.0
            return -float(objective(x[0], rr))

        res = optimize.minimize(neg, [t0, math.log2(rho)], method="Nelder-Mead",
                                options={"xatol": 1e-6, "fatol": 1e-10, "maxiter": 2000,
                                         "initial_simplex": [[t0, math.log2(rho)],
                                                             [t0 + 0.25, math.log2(rho)],
                                                             [t0, math.log2(rho) + 0.05]]})
        if -res.fun > best[0]:
            best = (-res.fun, float(res.x[0]), 2.0 ** float(res.x[1]))
    return best


def sigma_morrey_sup(train: SigmaTrain, r: float, theta: Optional[float] = None,
                     per_block: int = 64, radius_ratio: float = 2.0 ** 0.125,
                     refine: int = 8) -> MorreySup:
    """sup over (t0, rho) of rho^-theta * int_{t0-rho}^{t0+rho} sigma_n^r.

    Coarse pass over structured candidates (origin, bump centres, block
    midpoints) times a geometric radius grid, then local polish of the best
    ``refine`` pairs.
    """
    theta = float(train.schedule.theta if theta is None else theta)
    n = train.schedule.n
    steps = int(math.ceil(math.log(2.0 ** (n + 1)) / math.log(radius_ratio)))
    radii = radius_ratio ** np.arange(steps + 1)

    def objective(t0, rho):
        return rho ** -theta * train.window_integral(t0, rho, r)

    return search_windows(objective, train, radii, per_block, refine)


def search_windows(objective, train: SigmaTrain, radii, per_block: int = 64,
                   refine: int = 8) -> MorreySup:
    """Maximize a vectorized window functional objective(t0, rho) over the
    structured candidates of ``train`` and polish the best ones."""
    centres = np.concatenate([[0.0], train.centres(per_block), train.block_midpoints()])
    radii = np.asarray(radii, dtype=float)
    vals = objective(centres[:, None], radii[None, :])
    coarse = _top_pairs(vals, centres[:, None], radii[None, :], refine)
    t0, rho = aligned_windows(train, per_block)
    coarse += _top_pairs(objective(t0, rho), t0, rho, refine)
    return _polish(objective, coarse, refine)


def aligned_windows(train: SigmaTrain, per_block: int = 64, margins=(1.0, 1.5, 2.0)):
    """Windows whose edges sit on bump supports: centre pairs at dyadic index spans."""
    pos = train.centres(per_block)
    pts = np.concatenate([-pos[::-1], pos]) if train.symmetrized else pos
    t0s, rhos = [], []
    span = 1
    while span < len(pts):
        left, right = pts[:-span], pts[span:]
        for m in margins:
            t0s.append(0.5 * (left + right))
            rhos.append(0.5 * (right - left) + m)
        span *= 2
    if not t0s:
        return np.zeros((1, len(margins))), np.array([list(margins)])
    return np.concatenate(t0s)[:, None], np.concatenate(rhos)[:, None]


def _top_pairs(vals, t0, rho, k):
    t0, rho = np.broadcast_arrays(t0, rho)
    flat = np.argsort(vals, axis=None)[::-1][:max(k, 1)]
    return [(float(vals.flat[i]), float(t0.flat[i]), float(rho.flat[i])) for i in flat]


def _polish(objective, coarse, refine):
    coarse = sorted(coarse, key=lambda s: s[0], reverse=True)[:max(refine, 1)]
    best = _refine(objective, coarse) if refine else coarse[0]
    return MorreySup(*(float(v) for v in best))


def sigma_morrey_bruteforce(train: SigmaTrain, r: float, theta: Optional[float] = None,
                            h: float = 1.0 / 64, center_step: float = 0.25,
                            radius_ratio: float = 2.0 ** (1.0 / 32)) -> MorreySup:
    """Dense-grid fallback: trapezoid-rule cumulative of sigma^r on a fine grid,
    windows scanned over a regular centre grid and a fine radius grid.

    Intended for small n (the grid spans [-2^n - 4, 2^n + 4]).
    """
    theta = float(train.schedule.theta if theta is None else theta)
    n = train.schedule.n
    edge = 2.0 ** n + 4.0
    t = np.arange(-edge, edge + h / 2, h)
    f = train.value(t) ** r
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * h)])
    radii = 0.25 * radius_ratio ** np.arange(int(math.log(4 * 2.0 ** (n + 1)) / math.log(radius_ratio)) + 1)
    best = (0.0, 0.0, 1.0)
    for rho in radii:
        step = max(center_step, rho / 64)
        centres = np.arange(-2.0 ** n, 2.0 ** n + step / 2, step)
        w = np.interp(centres + rho, t, cum) - np.interp(centres - rho, t, cum)
        vals = rho ** -theta * w
        i = int(np.argmax(vals))
        if vals[i] > best[0]:
            best = (float(vals[i]), float(centres[i]), float(rho))
    return MorreySup(*best)


def schedule_rows(schedule: OffsetSchedule):
    """CSV rows (theta, n, k, g_k, m_k)."""
    return [(float(schedule.theta), schedule.n, b.k, b.gap, b.count) for b in schedule.blocks()]


def norm_rows(train: SigmaTrain, r_list):
    """CSV rows (theta, n, r, norm) with the closed-form L^r integral."""
    return [(float(train.schedule.theta), train.schedule.n, float(r), sigma_lr_norm_closed(train, r))
            for r in r_list]
