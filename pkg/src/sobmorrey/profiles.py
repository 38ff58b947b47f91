"""Cut-off profiles: 1 on (-1, 1), 0 outside (-2, 2), values in [0, 1].

``Profile1D`` is the time profile; ``RadialProfile`` wraps the same section as
a radial function on R^m. Two kinds are available:

* trapezoid -- piecewise linear ramp, |eta'| = 1 on the transition zones. All
  moments have closed forms.
* mollified -- a steeper trapezoid (ramp over [1 + eps, 2 - eps]) convolved
  with the standard mollifier of radius eps. C-infinity, derivative bounded by
  1 / (1 - 2 eps), moments by adaptive quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

QUAD_RTOL = 1e-10

# Gauss-Legendre rule reused for all smooth-profile panel integrals
_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)
_GEOM = 2.0 ** -np.arange(12, 0, -1.0)
_GRADED = np.concatenate([[0.0], _GEOM, [0.5], 1.0 - _GEOM[::-1], [1.0]])


class ProfileKind(enum.Enum):
    TRAPEZOID = "trapezoid"
    MOLLIFIED = "mollified"


def _mollifier(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


@lru_cache(maxsize=None)
def _mollifier_mass() -> float:
    val, _ = integrate.quad(lambda s: math.exp(-1.0 / (1.0 - s * s)), -1.0, 1.0,
                            epsabs=0, epsrel=1e-13, limit=200)
    return val


def _panel_integral(f, a, b, panels=24):
    """Composite Gauss-Legendre of vectorized f over [a, b] (arrays broadcast)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    edges = a[..., None] + (b - a)[..., None] * np.linspace(0.0, 1.0, panels + 1)
    lo, hi = edges[..., :-1], edges[..., 1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[..., None] + half[..., None] * _GL_X
    vals = f(nodes)
    return (np.sum(vals * _GL_W, axis=-1) * half).sum(axis=-1)


@dataclass(frozen=True)
class Profile1D:
    kind: ProfileKind = ProfileKind.TRAPEZOID
    eps: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        if self.kind is ProfileKind.MOLLIFIED and not 0 < self.eps <= 0.25:
            raise ValueError("mollifier radius must lie in (0, 1/4]")

    # shape -------------------------------------------------------------
    @property
    def slope_bound(self) -> float:
        """Sup of |eta'| (1 for the trapezoid)."""
        if self.kind is ProfileKind.TRAPEZOID:
            return 1.0
        return 1.0 / (1.0 - 2.0 * self.eps)

    def _moll_cdf_and_moment(self, x):
        # Psi(x) = int_{-eps}^{x} psi, Mom(x) = int_{-eps}^{x} s psi(s) ds
        eps = self.eps
        x = np.clip(np.asarray(x, dtype=float), -eps, eps)
        mass = _mollifier_mass() * eps
        cdf = _panel_integral(lambda s: _mollifier(s / eps), -eps, x, panels=8) / mass
        mom = _panel_integral(lambda s: s * _mollifier(s / eps), -eps, x, panels=8) / mass
        return cdf, mom

    def _moll_G(self, x):
        # G(x) = int_{-inf}^{x} Psi = x Psi(x) - Mom(x), extended linearly past eps
        x = np.asarray(x, dtype=float)
        eps = self.eps
        xc = np.clip(x, -eps, eps)
        cdf, mom = self._moll_cdf_and_moment(xc)
        g = xc * cdf - mom
        return np.where(x > eps, g + (x - eps), np.where(x < -eps, 0.0, g))

    def value(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        if self.kind is ProfileKind.TRAPEZOID:
            return np.clip(2.0 - t, 0.0, 1.0)
        a, b = 1.0 + self.eps, 2.0 - self.eps
        c = 1.0 / (b - a)
        inner = 1.0 - c * self._moll_G(t - a)
        # past b - eps the same value is c * int_x^eps (s - x) psi(s) ds with x = t - b;
        # evaluating it directly avoids cancellation where eta is tiny
        outer = c * self._moll_upper_tail(t - b)
        out = np.where(t < b - self.eps, inner, outer)
        out = np.where(t <= 1.0, 1.0, np.where(t >= 2.0, 0.0, out))
        return np.clip(out, 0.0, 1.0)

    def _moll_upper_tail(self, x):
        eps = self.eps
        x = np.clip(np.asarray(x, dtype=float), -eps, eps)
        mass = _mollifier_mass() * eps
        tail = _panel_integral(lambda s: (s - x[..., None, None]) * _mollifier(s / eps), x, eps, panels=8)
        return tail / mass

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        s = np.sign(t)
        u = np.abs(t)
        if self.kind is ProfileKind.TRAPEZOID:
            ramp = (u > 1.0) & (u < 2.0)
            return np.where(ramp, -s, 0.0)
        a, b = 1.0 + self.eps, 2.0 - self.eps
        c = 1.0 / (b - a)
        cdf_a, _ = self._moll_cdf_and_moment(u - a)
        cdf_b, _ = self._moll_cdf_and_moment(u - b)
        d = -c * (cdf_a - cdf_b)
        d = np.where((u <= 1.0) | (u >= 2.0), 0.0, d)
        return s * d

    # moments -------------------------------------------------------------
    def moment(self, r: float) -> float:
        """Integral of eta^r over the real line."""
        if not r > 0:
            raise ValueError(f"NonPositiveExponent: r={r}")
        if self.kind is ProfileKind.TRAPEZOID:
            return 2.0 + 2.0 / (r + 1.0)
        return _mollified_moment(self, float(r))

    def prime_moment(self, p: float) -> float:
        """Integral of |eta'|^p over the real line."""
        if not p >= 1:
            raise ValueError(f"NonPositiveExponent: need p >= 1, got {p}")
        if self.kind is ProfileKind.TRAPEZOID:
            return 2.0
        return _mollified_prime_moment(self, float(p))

    def partial_moment(self, s, r: float):
        """int_{-2}^{s} eta^r, vectorized in s."""
        s = np.asarray(s, dtype=float)
        if self.kind is ProfileKind.TRAPEZOID:
            # left ramp + plateau + right ramp; each clip saturates outside its piece
            k = 1.0 / (r + 1.0)
            left = np.clip(s + 2.0, 0.0, 1.0) ** (r + 1.0)
            right = 1.0 - np.clip(2.0 - s, 0.0, 1.0) ** (r + 1.0)
            return k * (left + right) + np.clip(s + 1.0, 0.0, 2.0)
        # left ramp by quadrature, plateau exactly, right ramp by evenness
        half = self._left_ramp(-1.0, r)
        out = self._left_ramp(s, r) + np.clip(s + 1.0, 0.0, 2.0)
        return np.where(s > 1.0, 2.0 * half + 2.0 - self._left_ramp(-s, r), out)

    def _left_ramp(self, x, r):
        """int_{-2}^{x} eta^r for x clipped to [-2, -1].

        eta is smooth but not analytic at -2, -2 + 2 eps, -1 - 2 eps and -1, so
        each piece between them gets panels refined geometrically toward both ends.
        """
        x = np.clip(np.asarray(x, dtype=float), -2.0, -1.0)
        cuts = (-2.0, -2.0 + 2.0 * self.eps, -1.0 - 2.0 * self.eps, -1.0)
        total = np.zeros(x.shape)
        for a, b in zip(cuts[:-1], cuts[1:]):
            end = np.clip(x, a, b)
            edges = a + (end - a)[..., None] * _GRADED
            lo, hi = edges[..., :-1], edges[..., 1:]
            half = 0.5 * (hi - lo)
            nodes = (0.5 * (hi + lo))[..., None] + half[..., None] * _GL_X
            total = total + (np.sum(self.value(nodes) ** r * _GL_W, axis=-1) * half).sum(axis=-1)
        return total


@lru_cache(maxsize=256)
def _mollified_moment(profile: Profile1D, r: float) -> float:
    f = lambda t: float(profile.value(t)) ** r  # noqa: E731
    ramp, _ = integrate.quad(f, 1.0, 2.0, epsabs=0, epsrel=QUAD_RTOL, limit=400,
                             points=[1.0 + profile.eps, 2.0 - profile.eps])
    return 2.0 + 2.0 * ramp


@lru_cache(maxsize=256)
def _mollified_prime_moment(profile: Profile1D, p: float) -> float:
    f = lambda t: abs(float(profile.derivative(t))) ** p  # noqa: E731
    ramp, _ = integrate.quad(f, 1.0, 2.0, epsabs=0, epsrel=QUAD_RTOL, limit=400,
                             points=[1.0 + 2 * profile.eps, 2.0 - 2 * profile.eps])
    return 2.0 * ramp


def sphere_measure(m: int) -> float:
    """Surface measure of the unit sphere in R^m (2 for m = 1)."""
    if m == 1:
        return 2.0
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


@dataclass(frozen=True)
class RadialProfile:
    """phi(x) = section(|x|) on R^m, m = d - 1."""

    m: int
    section: Profile1D = Profile1D()

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim and x.shape[-1] == self.m and self.m > 1:
            x = np.linalg.norm(x, axis=-1)
        return self.section.value(np.abs(x))

    def radial_integral(self, r: float, radius=np.inf):
        """int over {|x| < radius} of phi^r, vectorized in radius."""
        radius = np.asarray(radius, dtype=float)
        omega = sphere_measure(self.m)
        m = self.m
        rr = np.minimum(radius, 2.0)
        if self.section.kind is ProfileKind.TRAPEZOID:
            core = np.minimum(rr, 1.0) ** m / m
            # int_1^R (2-u)^r u^(m-1) du with v = 2 - u, binomial expansion of (2-v)^(m-1)
            lo = np.clip(2.0 - rr, 0.0, 1.0)
            ramp = np.zeros_like(rr)
            for k in range(m):
                coef = special.comb(m - 1, k) * 2.0 ** (m - 1 - k) * (-1.0) ** k
                e = r + k + 1.0
                ramp = ramp + coef * (1.0 - lo ** e) / e
            ramp = np.where(rr > 1.0, ramp, 0.0)
            return omega * (core + ramp)
        part = _panel_integral(lambda u: self.section.value(u) ** r * u ** (m - 1), 0.0, rr,
                               panels=16)
        return omega * part

    def total_integral(self, r: float) -> float:
        if self.section.kind is ProfileKind.TRAPEZOID:
            return float(self.radial_integral(r))
        return _radial_total(self, float(r))


@lru_cache(maxsize=256)
def _radial_total(profile: RadialProfile, r: float) -> float:
    m = profile.m
    f = lambda u: float(profile.section.value(u)) ** r * u ** (m - 1)  # noqa: E731
    core = 1.0 / m
    ramp, _ = integrate.quad(f, 1.0, 2.0, epsabs=0, epsrel=QUAD_RTOL, limit=400)
    return sphere_measure(m) * (core + ramp)
