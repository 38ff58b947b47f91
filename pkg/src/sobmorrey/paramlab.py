"""Parameter validation and exponent algebra.

All derived exponents are held as exact :class:`fractions.Fraction` values.
Float inputs are converted through their shortest decimal representation, so
``1.5`` becomes ``3/2`` and ``0.3`` becomes ``3/10``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

Number = Union[int, float, Fraction, str]

THETA_MAX = Fraction(3, 4)


class Mode(enum.Enum):
    VERIFICATION = "verification"
    COUNTEREXAMPLE = "counterexample"


class ValidationError(ValueError):
    """Raised when a parameter tuple violates one or more constraints.

    ``violations`` lists ``(code, message)`` pairs, one per broken constraint.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{code}: {msg}" for code, msg in self.violations))

    @property
    def codes(self):
        return [code for code, _ in self.violations]


class Interval(NamedTuple):
    low: Fraction
    high: Fraction

    def __contains__(self, r) -> bool:
        r = as_fraction(r)
        return self.low <= r <= self.high

    def as_floats(self):
        return float(self.low), float(self.high)


def as_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a numeric parameter")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite parameter {x!r}")
        return Fraction(repr(x))
    return Fraction(str(x).strip())


@dataclass(frozen=True)
class ParamSet:
    d: int
    p: Fraction
    q: Fraction
    q1: Fraction
    theta: Fraction
    alpha: Fraction
    sobolev_exp: Fraction
    r_low: Fraction
    mode: Mode

    @property
    def exponent_coefficient(self) -> Fraction:
        """Coefficient c in e(r) = c * (r_low - r)."""
        d, p, q = self.d, self.p, self.q
        return Fraction(d * d) * (q - self.q1) / (q * (d * p - (d - p) * q))

    def as_dict(self):
        return {
            "d": self.d,
            "p": float(self.p),
            "q": float(self.q),
            "q1": float(self.q1),
            "theta": float(self.theta),
            "alpha": float(self.alpha),
            "sobolev_exp": float(self.sobolev_exp),
            "r_low": float(self.r_low),
            "mode": self.mode.value,
        }


def validate(d, p, q, q1, mode: Mode = Mode.COUNTEREXAMPLE,
             theta_max: Number = THETA_MAX) -> ParamSet:
    """Check (d, p, q, q1) and compute every derived exponent.

    Raises :class:`ValidationError` naming all violated constraints at once.
    """
    mode = Mode(mode)
    violations = []
    try:
        d_frac = as_fraction(d)
        p, q, q1 = as_fraction(p), as_fraction(q), as_fraction(q1)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError([("TypeMismatch", str(exc))]) from None
    theta_max = as_fraction(theta_max)

    if d_frac.denominator != 1 or d_frac < 2:
        violations.append(("DimensionTooSmall", f"d must be an integer >= 2, got {d}"))
        # nothing else is meaningful without a dimension
        raise ValidationError(violations)
    d = int(d_frac)

    if not 1 < p < d:
        violations.append(("POutOfRange", f"need 1 < p < d, got p={p}"))
    p_ok = 1 < p < d
    if p_ok:
        sob = p * d / (d - p)
        if not 1 < q < sob:
            violations.append(("QOutOfRange", f"need 1 < q < pd/(d-p) = {sob}, got q={q}"))
    elif not q > 1:
        violations.append(("QOutOfRange", f"need q > 1, got q={q}"))

    if q1 < 1 or q1 > q:
        violations.append(("Q1OutOfRange", f"need 1 <= q1 <= q, got q1={q1}"))

    theta = d * (q - q1) / q
    if mode is Mode.COUNTEREXAMPLE and 1 <= q1 <= q:
        if theta == 0:
            violations.append(("ThetaDegenerate", "q1 = q gives theta = 0; counterexample needs q1 < q"))
        elif theta > theta_max:
            violations.append(
                ("ThetaTooLarge", f"theta = {theta} exceeds {theta_max}; bump supports would overlap"))

    if violations:
        raise ValidationError(violations)

    denom = d * p - (d - p) * q
    return ParamSet(
        d=d, p=p, q=q, q1=q1,
        theta=theta,
        alpha=d * (q - q1) / denom,
        sobolev_exp=p * d / (d - p),
        r_low=p * (q / d + 1),
        mode=mode,
    )


def scaling_exponent(ps: ParamSet, r: Number, exact: bool = False):
    """Base-2 growth rate e(r) of the L^r integral of the counterexample family.

    With ``exact=True`` the result is a Fraction (r is read as a decimal).
    """
    if exact:
        r_exact = as_fraction(r)
        if r_exact <= 0:
            raise ValueError(f"NonPositiveR: r must be positive, got {r}")
        return ps.exponent_coefficient * (ps.r_low - r_exact)
    r = float(r)
    if not r > 0:
        raise ValueError(f"NonPositiveR: r must be positive, got {r}")
    return float(ps.exponent_coefficient) * (float(ps.r_low) - r)


def scaling_exponent_expanded(ps: ParamSet, r: float) -> float:
    """Same exponent in the expanded form theta + alpha*d - r*alpha*d/q."""
    theta, alpha, q, d = float(ps.theta), float(ps.alpha), float(ps.q), ps.d
    return theta + alpha * d - r * alpha * d / q


def gradient_exponent(ps: ParamSet) -> Fraction:
    """-p*alpha*d/q + d*alpha - p*alpha + theta, which vanishes identically."""
    a = ps.alpha
    return -ps.p * a * ps.d / ps.q + ps.d * a - ps.p * a + ps.theta


def admissible_range(ps: ParamSet) -> Interval:
    return Interval(ps.r_low, ps.sobolev_exp)


def extended_range(ps: ParamSet) -> Optional[Interval]:
    """[q, r_low] when q1 == q, otherwise None (the extension fails)."""
    if ps.q1 != ps.q:
        return None
    return Interval(ps.q, ps.r_low)
