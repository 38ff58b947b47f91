import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobmorrey import cex
from sobmorrey.grid import gradient_magnitude, lp_integral
from sobmorrey.paramlab import Mode, scaling_exponent, validate
from sobmorrey.profiles import Profile1D, ProfileKind, RadialProfile

PS = validate(2, 1.5, 2, 1.5)
FAM = cex.make_family(PS)
K0 = FAM.train(20).schedule.k0


def test_family_validation():
    with pytest.raises(ValueError):
        cex.make_family(validate(2, 1.5, 2, 2, mode=Mode.VERIFICATION))
    with pytest.raises(ValueError):
        replace(FAM, normalization=0.0)
    with pytest.raises(ValueError):
        replace(FAM, profile_x=RadialProfile(2))


def test_pointwise_formula():
    n = 12
    lam = 2.0 ** (-0.5 * n)
    c = 2.0 ** (-0.5 * 2 * n / 2)
    tc = float(FAM.train(n).centres()[0]) / lam
    assert float(FAM(n, tc, 0.0)) == pytest.approx(c)
    assert float(FAM(n, -tc, 0.0)) == pytest.approx(c)
    assert float(FAM(n, tc, 1.5 / lam)) == pytest.approx(c / 2)
    assert float(replace(FAM, normalization=4.0)(n, tc, 0.0)) == pytest.approx(c / 4)


def test_single_bump_closed_form():
    for r in (1.0, 2.5, 4.0):
        tr = FAM.train(K0)
        expected = (2.0 ** FAM.log2_amplitude(K0)) ** r * 2.0 ** (2 * 0.5 * K0) * 2 \
            * FAM.profile_t.moment(r) * FAM.profile_x.total_integral(r)
        assert tr.schedule.total_count() == 1
        assert cex.lr_norm(FAM, K0, r) == pytest.approx(expected, rel=1e-12)


def test_lr_increments_follow_exponent():
    for r, target in ((3.0, 0.0), (4.0, -0.5)):
        inc = [cex.log2_lr_norm(FAM, n + 1, r) - cex.log2_lr_norm(FAM, n, r) for n in range(40, 56)]
        assert abs(np.mean(inc) - target) < 0.02
        assert scaling_exponent(PS, r) == pytest.approx(target)


def test_non_positive_r():
    with pytest.raises(ValueError, match="NonPositiveR"):
        cex.lr_norm(FAM, 10, 0.0)


def test_grid_cross_check_single_bump():
    stretch = 2.0 ** (0.5 * K0)
    tc = float(FAM.train(K0).centres()[0]) * stretch
    f = cex.grid_field(FAM, K0, [tc - 14, tc + 14], [-14, 14], 1024, 8)
    # the grid covers one of the two mirror copies
    assert 2 * lp_integral(f.values, f.cell_volume, 1.5) == pytest.approx(
        cex.lr_norm(FAM, K0, 1.5), rel=0.01)
    assert 2 * lp_integral(gradient_magnitude(f), f.cell_volume, 1.5) == pytest.approx(
        cex.grad_lp_norm(FAM, K0), rel=0.01)


def test_gradient_constant_positive():
    for p in (1.2, 1.5, 2.0):
        assert cex.bump_gradient_constant(FAM, p) > 0


def test_gradient_increments_vanish():
    inc = np.diff([cex.log2_grad_lp_norm(FAM, n) for n in range(30, 45)])
    assert np.all(np.abs(inc) <= 0.02)


def test_mollified_family():
    fam = cex.make_family(PS, Profile1D(ProfileKind.MOLLIFIED))
    assert cex.grad_lp_norm(fam, 12) > 0
    inc = np.diff([cex.log2_lr_norm(fam, n, 3.0) for n in range(30, 40)])
    assert np.all(np.abs(inc) <= 0.02)


@settings(max_examples=20, deadline=None)
@given(st.integers(10, 14), st.floats(-1.0, 1.0), st.floats(0.05, 1.5))
def test_window_change_of_variables(n, shift, radius):
    stretch = 2.0 ** (0.5 * n)
    tc = float(FAM.train(n).centres()[-1]) * stretch
    t0, rho = tc + shift * 3 * stretch, radius * 3 * stretch
    assert cex.window_value(FAM, n, t0, rho) == pytest.approx(
        cex.window_value_direct(FAM, n, t0, rho), rel=1e-8)


def test_tiny_windows_vanish():
    n = 12
    ms = cex.morrey_sup(FAM, n)
    tc = float(FAM.train(n).centres()[0]) * 2.0 ** (0.5 * n)
    vals = [cex.window_value(FAM, n, tc, rho) for rho in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-4 * ms.sup


def test_morrey_bracket():
    ms = cex.morrey_sup(FAM, 14)
    assert ms.bracket_ratio == pytest.approx(2.0 ** 0.25)
    assert ms.lower < ms.sup
    assert cex.window_value(FAM, 14, ms.t0, ms.rho) == pytest.approx(ms.sup, rel=1e-9)
    assert cex.window_value(FAM, 14, ms.t0, ms.rho * math.sqrt(2), inscribed=True) \
        == pytest.approx(ms.lower, rel=1e-9)


def test_morrey_against_grid_oracle():
    cand = cex.morrey_sup(FAM, K0).sup
    dense = cex.morrey_sup_grid(FAM, K0, h=0.1)
    assert dense <= cand * (1 + 1e-3)
    assert cand <= 1.05 * dense
    with pytest.raises(ValueError):
        cex.morrey_sup_grid(cex.make_family(validate(3, 2, 3, 2.5)), 10, h=0.5)


def test_morrey_bounded_in_n():
    sups = [cex.morrey_sup(FAM, n).sup for n in range(K0 + 10, K0 + 21, 2)]
    assert max(sups) / min(sups) <= 4


def test_normalize_bounds_and_idempotence():
    ns = range(12, 17)
    fam = cex.normalize(FAM, ns)
    assert fam.normalization > 1
    assert all(cex.grad_lp_norm(fam, n) <= 1 and cex.morrey_sup(fam, n).sup <= 1 for n in ns)
    assert cex.normalize(fam, ns).normalization == fam.normalization
    for n in ns:
        before = cex.log2_lr_norm(FAM, n + 1, 2.5) - cex.log2_lr_norm(FAM, n, 2.5)
        after = cex.log2_lr_norm(fam, n + 1, 2.5) - cex.log2_lr_norm(fam, n, 2.5)
        assert after == pytest.approx(before, abs=1e-12)
    with pytest.raises(ValueError):
        cex.normalize(FAM, [])


@pytest.mark.parametrize("r, slope, tol, verdict", [
    (2.5, 0.25, 0.05, cex.Verdict.BLOW_UP),
    (3.0, 0.0, 0.02, cex.Verdict.BOUNDED),
    (6.0, -1.5, 0.05, cex.Verdict.BOUNDED),
])
def test_scaling_fit_examples(r, slope, tol, verdict):
    fit = cex.scaling_fit(FAM, r, (30, 44))
    assert abs(fit.slope - slope) <= tol
    assert fit.verdict is verdict
    assert fit.predicted == pytest.approx(slope)


def test_scaling_fit_window_too_short():
    with pytest.raises(ValueError, match="WindowTooShort"):
        cex.scaling_fit(FAM, 3.0, (30, 33))


def test_sharpness_report():
    rows = cex.sharpness_report(FAM, [2.5, 3, 4, 6], (30, 44))
    assert [row.agrees for row in rows] == [True] * 4
    assert [row.verdict for row in rows][0] is cex.Verdict.BLOW_UP
    (low,) = cex.sharpness_report(FAM, [float(PS.r_low)], (30, 44))
    assert low.verdict is cex.Verdict.BOUNDED and low.agrees
    assert cex.sharpness_report(FAM, [], (30, 44)) == []


def test_norm_report():
    rep = cex.norm_report(FAM, 12, [3.0, 4.0])
    assert rep.n == 12
    assert set(rep.lr) == {3.0, 4.0}
    assert rep.grad_lp == cex.grad_lp_norm(FAM, 12)
