"""Discrete maximal operators and the inequality checks built on them.

Balls are replaced by cubes of half-width (k + 1/2) h centred at cell centres,
i.e. windows of 2k + 1 cells per axis. The supremum over radii runs over a
finite lattice of k values. Window sums come from summed-area tables on the
zero-extended field, so every window is exact for the compactly supported
function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .grid import GridField, gradient_magnitude, lp_integral, lp_norm
from .paramlab import ParamSet, admissible_range, as_fraction


class RadiusExceedsPadding(ValueError):
    pass


class ZeroFieldError(ValueError):
    pass


class ROutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class WindowLattice:
    """Window half-widths in cells; 0 is the single-cell window."""

    radii: Tuple[int, ...]

    def __post_init__(self):
        radii = tuple(sorted(set(int(k) for k in self.radii)))
        if not radii or radii[0] < 0:
            raise ValueError("radii must be non-negative and non-empty")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def dyadic(cls, limit: int, include_zero: bool = True) -> "WindowLattice":
        radii = [0] if include_zero else []
        k = 1
        while k <= limit:
            radii.append(k)
            k *= 2
        return cls(tuple(radii))

    @property
    def largest(self) -> int:
        return self.radii[-1]

    def physical(self, h: float) -> np.ndarray:
        return (np.asarray(self.radii) + 0.5) * h


def default_lattice(f: GridField) -> WindowLattice:
    return WindowLattice.dyadic(f.padding)


def _check_lattice(f: GridField, lattice: WindowLattice):
    if lattice.largest > f.padding:
        raise RadiusExceedsPadding(f"radius {lattice.largest} exceeds padding {f.padding}")


def _extend(values: np.ndarray, margin: int) -> np.ndarray:
    return np.pad(values, margin, mode="constant")


def summed_area_table(values: np.ndarray) -> np.ndarray:
    """Inclusive prefix sums with a leading zero plane along every axis."""
    s = np.pad(values, [(1, 0)] * values.ndim, mode="constant")
    for axis in range(values.ndim):
        s = np.cumsum(s, axis=axis)
    return s


def window_sums(values: np.ndarray, k: int, table=None, margin=None) -> np.ndarray:
    """Sum over the (2k+1)^d window around every cell (zero outside the array)."""
    if margin is None:
        margin = k
        table = summed_area_table(_extend(values, margin))
    shape = values.shape
    out = np.zeros(shape)
    d = values.ndim
    for corner in itertools.product((0, 1), repeat=d):
        sl = []
        for axis, bit in enumerate(corner):
            start = margin + k + 1 if bit else margin - k
            sl.append(slice(start, start + shape[axis]))
        sign = (-1) ** (d - sum(corner))
        out += sign * table[tuple(sl)]
    return out


def hl_maximal(f: GridField, lattice: Optional[WindowLattice] = None) -> GridField:
    """Discrete Hardy-Littlewood maximal function over cube windows."""
    lattice = lattice or default_lattice(f)
    _check_lattice(f, lattice)
    absf = np.abs(f.values)
    margin = lattice.largest
    table = summed_area_table(_extend(absf, margin))
    best = absf.copy()  # the one-cell window
    for k in lattice.radii:
        if k == 0:
            continue
        avg = window_sums(absf, k, table, margin) / (2 * k + 1) ** f.dim
        np.maximum(best, avg, out=best)
    return _unpadded_result(f, best)


def _unpadded_result(f: GridField, values) -> GridField:
    # maximal functions do not vanish on the margin; keep the geometry, drop the zero-band rule
    return GridField(values, f.h, f.lower, 0)


def _window_mean_deviation(values, k, chunk_cells=1 << 22):
    """Mean |f - window mean| over every (2k+1)^d window.

    Each window is shifted by its centre value first. The result is the same
    in exact arithmetic, and a constant window gives exactly 0.
    """
    d = values.ndim
    ext = _extend(values, k)
    win = sliding_window_view(ext, (2 * k + 1,) * d)
    out = np.empty(values.shape)
    per_row = int(np.prod(values.shape[1:])) * (2 * k + 1) ** d
    step = max(1, chunk_cells // max(per_row, 1))
    axes = tuple(range(d, 2 * d))
    tail = (1,) * d
    for i0 in range(0, values.shape[0], step):
        i1 = min(i0 + step, values.shape[0])
        block = win[i0:i1] - values[i0:i1].reshape(values[i0:i1].shape + tail)
        m = block.mean(axis=axes).reshape(block.shape[:d] + tail)
        out[i0:i1] = np.abs(block - m).mean(axis=axes)
    return out


def sharp_maximal(f: GridField, lattice: Optional[WindowLattice] = None) -> GridField:
    """Discrete sharp maximal function: sup of window mean oscillation.

    Unlike the averages in :func:`hl_maximal`, the absolute deviations need a
    direct scan of every window, so the window means come from the same scan.
    """
    lattice = lattice or default_lattice(f)
    _check_lattice(f, lattice)
    vals = np.asarray(f.values)
    best = np.zeros(vals.shape)
    for k in lattice.radii:
        if k == 0:
            continue
        np.maximum(best, _window_mean_deviation(vals, k), out=best)
    return _unpadded_result(f, best)


def _brute_windows_1d(values, k):
    n = len(values)
    out = []
    for i in range(n):
        lo, hi = max(0, i - k), min(n, i + k + 1)
        win = np.zeros(2 * k + 1)
        win[lo - (i - k): hi - (i - k)] = values[lo:hi]
        out.append(win)
    return out


def hl_maximal_bruteforce(f: GridField, lattice: WindowLattice) -> np.ndarray:
    """O(N R w) scan of a 1-D field; oracle for :func:`hl_maximal`."""
    if f.dim != 1:
        raise ValueError("brute-force oracle is 1-D only")
    absf = np.abs(np.asarray(f.values))
    best = absf.copy()
    for k in lattice.radii:
        if k == 0:
            continue
        for i, win in enumerate(_brute_windows_1d(absf, k)):
            best[i] = max(best[i], sum(win) / (2 * k + 1))
    return best


def sharp_maximal_bruteforce(f: GridField, lattice: WindowLattice) -> np.ndarray:
    if f.dim != 1:
        raise ValueError("brute-force oracle is 1-D only")
    vals = np.asarray(f.values)
    best = np.zeros(len(vals))
    for k in lattice.radii:
        if k == 0:
            continue
        for i, win in enumerate(_brute_windows_1d(vals, k)):
            mean = sum(win) / (2 * k + 1)
            dev = sum(abs(w - mean) for w in win) / (2 * k + 1)
            best[i] = max(best[i], dev)
    return best


def poincare_ratio(f: GridField, lattice: WindowLattice, sample_centers) -> float:
    """Empirical Poincare constant: max over sampled windows of
    mean|u - mean u| / (rho * mean|grad u|).

    Windows with mean |grad u| < 1e-14 are skipped; windows leaving the box are
    skipped as well.
    """
    vals = np.asarray(f.values)
    gmag = gradient_magnitude(f)
    centres = np.atleast_2d(np.asarray(sample_centers, dtype=int))
    if centres.size == 0:
        return 0.0
    best = 0.0
    for c in centres:
        for k in lattice.radii:
            if k == 0:
                continue
            if np.any(c - k < 0) or np.any(c + k >= np.asarray(f.cells)):
                continue
            sl = tuple(slice(ci - k, ci + k + 1) for ci in c)
            grad_mean = float(gmag[sl].mean())
            if grad_mean < 1e-14:
                continue
            win = vals[sl]
            osc = float(np.abs(win - win.mean()).mean())
            rho = (k + 0.5) * f.h
            best = max(best, osc / (rho * grad_mean))
    return best


def sample_centres(f: GridField, count: int, seed: int = 0) -> np.ndarray:
    """Random cells of the inner box (box minus padding)."""
    rng = np.random.default_rng(seed)
    lo = f.padding
    return np.stack([rng.integers(lo, n - lo, size=count) for n in f.cells], axis=1)


class Lemma1Result(NamedTuple):
    lhs: float
    rhs_grad: float
    rhs_morrey: float
    ratio: float


def morrey_average_sup(f: GridField, ps: ParamSet, lattice: WindowLattice) -> float:
    """sup over cube windows of rho^(d/q) * average of |u| (all cells, lattice radii)."""
    absf = np.abs(np.asarray(f.values))
    margin = lattice.largest
    table = summed_area_table(_extend(absf, margin))
    q = float(ps.q)
    best = 0.0
    for k in lattice.radii:
        rho = (k + 0.5) * f.h
        avg = absf if k == 0 else window_sums(absf, k, table, margin) / (2 * k + 1) ** f.dim
        best = max(best, rho ** (f.dim / q) * float(avg.max()))
    return best


def _require_dim(f: GridField, ps: ParamSet):
    if f.dim != ps.d:
        raise ValueError(f"field dimension {f.dim} differs from d={ps.d}")


def verify_lemma1(f: GridField, ps: ParamSet, lattice: Optional[WindowLattice] = None) -> Lemma1Result:
    """Both sides of the interpolation estimate and their ratio (the empirical constant)."""
    _require_dim(f, ps)
    lattice = lattice or default_lattice(f)
    _check_lattice(f, lattice)
    if not np.any(f.values):
        raise ZeroFieldError("ratio undefined for the zero field")
    p, q, d = float(ps.p), float(ps.q), ps.d
    lhs = lp_integral(f.values, f.cell_volume, float(ps.r_low))
    rhs_grad = lp_integral(gradient_magnitude(f), f.cell_volume, p)
    rhs_morrey = morrey_average_sup(f, ps, lattice) ** (q * p / d)
    return Lemma1Result(lhs, rhs_grad, rhs_morrey, lhs / (rhs_grad * rhs_morrey))


class FSRatios(NamedTuple):
    r1: float  # |f|_s / |M# f|_s
    r2: float  # |M# f|_s / |f|_s
    r3: float  # |f|_s / |M f|_s
    r4: float  # |M f|_s / |f|_s


def verify_fs_equivalence(f: GridField, s: float, lattice: Optional[WindowLattice] = None) -> FSRatios:
    if not s > 1:
        raise ValueError(f"need s > 1, got {s}")
    if not np.any(f.values):
        raise ZeroFieldError("ratios undefined for the zero field")
    lattice = lattice or default_lattice(f)
    nf = lp_norm(f, s)
    nsharp = lp_norm(sharp_maximal(f, lattice), s)
    nhl = lp_norm(hl_maximal(f, lattice), s)
    return FSRatios(nf / nsharp if nsharp else float("inf"), nsharp / nf, nf / nhl, nhl / nf)


def verify_sobolev(f: GridField, ps: ParamSet) -> float:
    """|u|_{p*} / |grad u|_p."""
    _require_dim(f, ps)
    if not np.any(f.values):
        raise ZeroFieldError("ratio undefined for the zero field")
    p = float(ps.p)
    num = lp_norm(f, float(ps.sobolev_exp))
    den = lp_integral(gradient_magnitude(f), f.cell_volume, p) ** (1.0 / p)
    return num / den


class HolderResult(NamedTuple):
    lhs: float
    bound: float
    slack: float
    weight: float


def interpolation_weight(ps: ParamSet, r) -> Fraction:
    """theta in [0, 1] with 1/r = theta/r_low + (1 - theta)/p*."""
    r = as_fraction(r)
    a, b = 1 / ps.r_low, 1 / ps.sobolev_exp
    return (1 / r - b) / (a - b)


def verify_holder_chain(f: GridField, ps: ParamSet, r) -> HolderResult:
    """Hoelder interpolation between the r_low and p* integrals; slack = bound - lhs."""
    _require_dim(f, ps)
    if as_fraction(r) not in admissible_range(ps):
        lo, hi = admissible_range(ps).as_floats()
        raise ROutOfRange(f"r={r} outside [{lo}, {hi}]")
    if not np.any(f.values):
        raise ZeroFieldError("field must be nonzero")
    w = interpolation_weight(ps, r)
    rf = as_fraction(r)
    vol = f.cell_volume
    lhs = lp_integral(f.values, vol, float(rf))
    low = lp_integral(f.values, vol, float(ps.r_low))
    top = lp_integral(f.values, vol, float(ps.sobolev_exp))
    e_low = rf * w / ps.r_low
    e_top = rf * (1 - w) / ps.sobolev_exp
    bound = low ** float(e_low) * top ** float(e_top)
    return HolderResult(lhs, bound, bound - lhs, float(w))
