"""The counterexample family u_n and its norms.

    u_n(t, x) = (1/s) c_n sigma_n(lam t) phi(lam x),
    c_n = 2^(-alpha d n / q),  lam = 2^(-alpha n),  (t, x) in R x R^(d-1)

Because u_n is a product of a 1-D train and a radial profile, every integral
factors into 1-D pieces: L^r integrals and gradient integrals are closed forms
times constants computed once, and window integrals over cylinders reduce to
the train's cumulative integral times a radial partial integral.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .bumptrain import SigmaTrain, make_train, search_windows
from .paramlab import Mode, ParamSet, scaling_exponent
from .profiles import Profile1D, RadialProfile

SLOPE_TOL = 0.02
K_RTOL = 1e-10


class Verdict(enum.Enum):
    BLOW_UP = "BlowUp"
    BOUNDED = "Bounded"


@dataclass(frozen=True)
class CexFamily:
    ps: ParamSet
    profile_t: Profile1D = field(default_factory=Profile1D)
    profile_x: Optional[RadialProfile] = None
    normalization: float = 1.0
    k0: Optional[int] = None

    def __post_init__(self):
        if self.ps.mode is not Mode.COUNTEREXAMPLE:
            raise ValueError("the counterexample needs a ParamSet validated in counterexample mode")
        if self.profile_x is None:
            object.__setattr__(self, "profile_x", RadialProfile(self.ps.d - 1, self.profile_t))
        if self.profile_x.m != self.ps.d - 1:
            raise ValueError("radial profile must live on R^(d-1)")
        if not self.normalization > 0:
            raise ValueError("normalization must be positive")

    @property
    def alpha(self) -> float:
        return float(self.ps.alpha)

    def train(self, n: int) -> SigmaTrain:
        return _train(self.ps.theta, n, self.profile_t, self.k0)

    def log2_amplitude(self, n: int) -> float:
        """log2 of c_n."""
        return -self.alpha * self.ps.d * n / float(self.ps.q)

    def __call__(self, n: int, t, x):
        """Pointwise u_n(t, x); x has trailing dimension d - 1 (or is scalar for d = 2)."""
        lam = 2.0 ** (-self.alpha * n)
        c = 2.0 ** self.log2_amplitude(n)
        return c / self.normalization * self.train(n).value(lam * np.asarray(t)) \
            * self.profile_x.value(lam * np.asarray(x))


def make_family(ps: ParamSet, profile: Optional[Profile1D] = None, k0: Optional[int] = None) -> CexFamily:
    profile = profile or Profile1D()
    return CexFamily(ps, profile, RadialProfile(ps.d - 1, profile), 1.0, k0)


@lru_cache(maxsize=512)
def _train(theta, n, profile, k0) -> SigmaTrain:
    return make_train(theta, n, profile, k0)


class NormReport(NamedTuple):
    n: int
    grad_lp: float
    morrey_sup: float
    morrey_t0: float
    morrey_rho: float
    lr: dict


class MorreyResult(NamedTuple):
    sup: float
    t0: float
    rho: float
    lower: float
    bracket_ratio: float


class ScalingFit(NamedTuple):
    r: float
    n_window: Tuple[int, int]
    slope: float
    intercept: float
    max_residual: float
    predicted: float
    verdict: Verdict


# ---------------------------------------------------------------------------
# L^r integrals

def log2_lr_norm(family: CexFamily, n: int, r: float) -> float:
    if not r > 0:
        raise ValueError(f"NonPositiveR: r={r}")
    tr = family.train(n)
    d = family.ps.d
    base = tr.copies * tr.schedule.total_count() * family.profile_t.moment(r) \
        * family.profile_x.total_integral(r)
    return (r * family.log2_amplitude(n) + d * family.alpha * n
            - r * math.log2(family.normalization) + math.log2(base))


def lr_norm(family: CexFamily, n: int, r: float) -> float:
    """int |u_n|^r over R^d, exact by separability."""
    return 2.0 ** log2_lr_norm(family, n, r)


# ---------------------------------------------------------------------------
# gradient integral

def bump_gradient_constant(family: CexFamily, p: float) -> float:
    """K(p): integral of |grad(eta(t) phi(x))|^p over one bump, by nested quadrature."""
    return _gradient_constant(family.profile_t, family.profile_x, float(p))


@lru_cache(maxsize=256)
def _gradient_constant(profile_t: Profile1D, profile_x: RadialProfile, p: float) -> float:
    from .profiles import sphere_measure

    m = profile_x.m
    sec = profile_x.section
    omega = sphere_measure(m)

    # the inner quadrature revisits the same nodes for every t
    @lru_cache(maxsize=None)
    def section(u):
        return float(sec.value(u)), float(sec.derivative(u))

    def inner(t):
        e = float(profile_t.value(t))
        de = float(profile_t.derivative(t))

        def f(u):
            ph, dph = section(u)
            return (de * de * ph * ph + e * e * dph * dph) ** (p / 2.0) * u ** (m - 1)

        val, _ = integrate.quad(f, 0.0, 2.0, points=[1.0], epsabs=0, epsrel=K_RTOL * 0.1,
                                limit=200)
        return val

    half, _ = integrate.quad(inner, 0.0, 2.0, points=[1.0], epsabs=0, epsrel=K_RTOL, limit=200)
    return 2.0 * omega * half


def log2_grad_lp_norm(family: CexFamily, n: int) -> float:
    p = float(family.ps.p)
    d = family.ps.d
    tr = family.train(n)
    base = tr.copies * tr.schedule.total_count() * bump_gradient_constant(family, p)
    return (p * family.log2_amplitude(n) + (d - p) * family.alpha * n
            - p * math.log2(family.normalization) + math.log2(base))


def grad_lp_norm(family: CexFamily, n: int) -> float:
    """int |grad u_n|^p over R^d (full gradient, not a split bound)."""
    return 2.0 ** log2_grad_lp_norm(family, n)


# ---------------------------------------------------------------------------
# Morrey-type supremum

def _scaled_window(family: CexFamily, tr: SigmaTrain, q1: float, theta: float):
    """Window functional in rescaled coordinates, before the 1/s^q1 factor.

    With tau = lam t and radius varsigma = lam rho the amplitude factors cancel:
    c_n^q1 lam^(theta - d) = 1.
    """
    def upper(tau0, vs):
        return vs ** -theta * tr.window_integral(tau0, vs, q1) \
            * family.profile_x.radial_integral(q1, vs)
    return upper


def morrey_sup(family: CexFamily, n: int, per_block: int = 16,
               radius_ratio: float = 2.0 ** 0.125, refine: int = 4) -> MorreyResult:
    """sup of rho^-theta int_{B_rho} |u_n|^q1, bracketed by separable cylinders.

    The upper value uses the circumscribed cylinder |t - t0| < rho, |x| < rho,
    the lower one the inscribed cylinder of radius rho / sqrt 2. Centres are
    taken on the axis x = 0 (the radial factor is decreasing).
    """
    q1, theta = float(family.ps.q1), float(family.ps.theta)
    best, lower_raw = _raw_morrey(replace(family, normalization=1.0), n, per_block,
                                  radius_ratio, refine)
    scale = family.normalization ** -q1
    sup = best.sup * scale
    lower = lower_raw * scale
    stretch = 2.0 ** (family.alpha * n)
    return MorreyResult(sup, best.t0 * stretch, best.rho * stretch, lower, sup / lower)


@lru_cache(maxsize=1024)
def _raw_morrey(family: CexFamily, n, per_block, radius_ratio, refine):
    q1, theta = float(family.ps.q1), float(family.ps.theta)
    tr = family.train(n)
    upper = _scaled_window(family, tr, q1, theta)
    steps = int(math.ceil((n + 5) / math.log2(radius_ratio)))
    radii = 2.0 ** -3 * radius_ratio ** np.arange(steps + 1)
    best = search_windows(upper, tr, radii, per_block, refine)
    # the inscribed cylinder of the ball of radius sqrt(2) rho* is the circumscribed
    # cylinder of radius rho*, so the lower bracket differs only by the radius power
    lower = 2.0 ** (-theta / 2.0) * best.sup
    return best, lower


def window_value(family: CexFamily, n: int, t0: float, rho: float, inscribed: bool = False) -> float:
    """rho^-theta * integral of |u_n|^q1 over a cylinder in original coordinates."""
    ps = family.ps
    q1, theta = float(ps.q1), float(ps.theta)
    lam = 2.0 ** (-family.alpha * n)
    upper = _scaled_window(family, family.train(n), q1, theta)
    half = rho / math.sqrt(2.0) if inscribed else rho
    val = float(upper(lam * t0, lam * half)) * (half / rho) ** theta
    return val * family.normalization ** -q1


def window_value_direct(family: CexFamily, n: int, t0: float, rho: float) -> float:
    """Same cylinder functional integrated in original coordinates without rescaling.

    Independent check of the change of variables used by :func:`window_value`.
    """
    ps = family.ps
    q1, theta = float(ps.q1), float(ps.theta)
    lam = 2.0 ** (-family.alpha * n)
    c = 2.0 ** family.log2_amplitude(n) / family.normalization
    tr = family.train(n)
    # breakpoints at every kink of sigma(lam t) inside the window
    pts = []
    for centre in tr.centres():
        for off in (-2.0, -1.0, 1.0, 2.0):
            for sgn in (1.0, -1.0):
                x = sgn * (centre + off) / lam
                if t0 - rho < x < t0 + rho:
                    pts.append(x)
    edges = np.unique(np.concatenate([[t0 - rho, t0 + rho], pts]))
    t_int = math.fsum(
        integrate.quad(lambda t: float(tr.value(lam * t)) ** q1, a, b, epsabs=0, epsrel=1e-12)[0]
        for a, b in zip(edges[:-1], edges[1:]))
    m = family.profile_x.m
    from .profiles import sphere_measure
    sec = family.profile_x.section
    radial_pts = [p for p in (1.0 / lam, 2.0 / lam) if p < rho]
    x_int, _ = integrate.quad(lambda u: float(sec.value(lam * u)) ** q1 * u ** (m - 1), 0.0,
                              rho, points=radial_pts or None, epsabs=0, epsrel=1e-12, limit=200)
    x_int *= sphere_measure(m)
    return rho ** -theta * c ** q1 * t_int * x_int


def morrey_sup_grid(family: CexFamily, n: int, h: float, radius_ratio: float = 2.0 ** (1 / 32),
                    x_offsets: Sequence[int] = (0, 2, 5)) -> float:
    """Dense 2-D oracle (d = 2 only): sample |u_n|^q1 on a cell-centred grid in
    original coordinates and scan square windows with a summed-area table."""
    from .maxops import summed_area_table

    ps = family.ps
    if ps.d != 2:
        raise ValueError("grid oracle is two-dimensional")
    q1, theta = float(ps.q1), float(ps.theta)
    stretch = 2.0 ** (family.alpha * n)
    t_edge = (2.0 ** n + 2.0) * stretch
    x_edge = 2.0 * stretch
    nt = int(math.ceil(t_edge / h))
    nx = int(math.ceil(x_edge / h))
    t = (np.arange(-nt, nt) + 0.5) * h
    x = (np.arange(-nx, nx) + 0.5) * h
    vals = np.abs(family(n, t[:, None], x[None, :])) ** q1
    # indices are clipped to the table, which is exact for the zero extension
    table = summed_area_table(vals)
    kmax = int(math.ceil(2.0 * t_edge / h))
    ks = np.unique(np.rint(radius_ratio ** np.arange(
        int(math.log(kmax) / math.log(radius_ratio)) + 1)).astype(int))
    best = 0.0
    cx = nx  # cell just above x = 0 (centre at h/2)
    for k in ks:
        rho = (k + 0.5) * h
        stride = max(1, k // 32)
        ti = np.arange(0, 2 * nt, stride)
        r0, r1 = np.clip(ti - k, 0, 2 * nt), np.clip(ti + k + 1, 0, 2 * nt)
        for dx in x_offsets:
            xi = cx + dx
            c0, c1 = min(max(xi - k, 0), 2 * nx), min(max(xi + k + 1, 0), 2 * nx)
            s = table[r1, c1] - table[r0, c1] - table[r1, c0] + table[r0, c0]
            best = max(best, float(rho ** -theta * h * h * s.max()))
    return best


# ---------------------------------------------------------------------------
# normalization, fits, verdicts

def normalize(family: CexFamily, n_range: Iterable[int], **search) -> CexFamily:
    """Divide by s = max(1, max grad^(1/p), max morrey^(1/q1)) over ``n_range``."""
    ns = list(n_range)
    if not ns:
        raise ValueError("empty n range")
    raw = replace(family, normalization=1.0)
    p, q1 = float(family.ps.p), float(family.ps.q1)
    s = 1.0
    for n in ns:
        s = max(s, grad_lp_norm(raw, n) ** (1.0 / p), morrey_sup(raw, n, **search).sup ** (1.0 / q1))
    # make both bounds literal despite rounding in the powers
    while True:
        out = replace(family, normalization=s)
        if all(grad_lp_norm(out, n) <= 1.0 and morrey_sup(out, n, **search).sup <= 1.0 for n in ns):
            return out
        s = math.nextafter(s, math.inf)


def norm_report(family: CexFamily, n: int, r_list: Sequence[float], **search) -> NormReport:
    ms = morrey_sup(family, n, **search)
    return NormReport(n, grad_lp_norm(family, n), ms.sup, ms.t0, ms.rho,
                      {float(r): lr_norm(family, n, r) for r in r_list})


def scaling_fit(family: CexFamily, r: float, n_window: Tuple[int, int]) -> ScalingFit:
    """Least-squares slope of log2 int|u_n|^r against n, compared with e(r)."""
    lo, hi = int(n_window[0]), int(n_window[1])
    if hi - lo + 1 < 5:
        raise ValueError(f"WindowTooShort: need at least 5 points, got {hi - lo + 1}")
    ns = np.arange(lo, hi + 1)
    ys = np.array([log2_lr_norm(family, int(n), r) for n in ns])
    slope, intercept = np.polyfit(ns, ys, 1)
    resid = ys - (slope * ns + intercept)
    verdict = Verdict.BLOW_UP if slope > SLOPE_TOL else Verdict.BOUNDED
    return ScalingFit(float(r), (lo, hi), float(slope), float(intercept),
                      float(np.abs(resid).max()), scaling_exponent(family.ps, r), verdict)


class SharpnessRow(NamedTuple):
    r: float
    slope: float
    predicted: float
    verdict: Verdict
    agrees: bool


def sharpness_report(family: CexFamily, r_list: Sequence[float], n_window) -> List[SharpnessRow]:
    rows = []
    r_low = float(family.ps.r_low)
    for r in r_list:
        fit = scaling_fit(family, r, n_window)
        expected = Verdict.BOUNDED if r >= r_low else Verdict.BLOW_UP
        rows.append(SharpnessRow(fit.r, fit.slope, fit.predicted, fit.verdict,
                                 fit.verdict is expected))
    return rows


def grid_field(family: CexFamily, n: int, t_range, x_range, cells: int, padding: int):
    """Sample u_n (d = 2) on a square grid over t_range x x_range."""
    from .grid import sample_field

    if family.ps.d != 2:
        raise ValueError("grid sampling is two-dimensional")
    return sample_field(lambda t, x: family(n, t, x), [t_range, x_range], cells, padding)
