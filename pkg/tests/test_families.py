import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cardrec.errors import NumericalFailure, ParameterError, SingularityError
from cardrec.families import (
    InterpolatorFamily,
    SmallAlphaWarning,
    gaussian,
    m_bound,
    m_ratio,
    multiquadric,
    polyharmonic,
    spectrum,
    synthetic_h2_failure,
    tail_bound,
    tail_radius,
    verify_conditions,
)
from cardrec.fundamental import fundamental_spectrum
from cardrec.spectral import lattice_points, make_grid

PI = np.pi


def matrix():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallAlphaWarning)
        fams = [gaussian(a) for a in (0.25, 0.5, 1, 2, 4, 8)]
    fams += [polyharmonic(k) for k in range(1, 7)]
    fams += [multiquadric(c) for c in (1, 2, 4)]
    return fams


def test_spectrum_examples():
    assert spectrum(polyharmonic(1), PI) == pytest.approx(PI ** -2, rel=1e-14)
    assert spectrum(gaussian(1), 0.0) == 1.0
    assert spectrum(multiquadric(1, 0.5), 1.0) == pytest.approx(0.601907, abs=5e-7)


def test_spectrum_singular_origin():
    for fam in (polyharmonic(2), multiquadric(2)):
        with pytest.raises(SingularityError):
            spectrum(fam, 0.0)


def test_m_ratio_examples():
    small = InterpolatorFamily("gaussian", 1, 0.1, allow_small_alpha=True)
    assert m_ratio(small, 1, 0.0) == pytest.approx(np.exp(-4 * PI ** 2 * 0.1), rel=1e-13)
    assert m_ratio(polyharmonic(1), 1, 0.0) == 0.0
    assert m_ratio(polyharmonic(1), 2, -PI) == pytest.approx(1 / 9, rel=1e-14)


def test_m_ratio_zero_shift():
    with pytest.raises(ParameterError):
        m_ratio(gaussian(1), 0, 0.0)
    with pytest.raises(ParameterError):
        m_bound(gaussian(1), 0)


def test_m_bound_examples():
    assert m_bound(polyharmonic(1), 2) == pytest.approx(1 / 9, rel=1e-14)
    assert m_bound(gaussian(1), 1) == 1.0
    assert m_bound(gaussian(1), 2) == pytest.approx(np.exp(-8 * PI ** 2), rel=1e-12)
    assert m_bound(gaussian(1), 2) == pytest.approx(5.1e-35, rel=0.01)


@pytest.mark.parametrize("j", [1, 2, 3, 5, 10, -4])
def test_m_bound_closed_forms(j):
    for a in (1, 2.5):
        ref = np.exp(-4 * PI ** 2 * a * (j * j - abs(j)))
        assert m_bound(gaussian(a), j) == pytest.approx(ref, rel=1e-12, abs=1e-300)
    for k in (1, 3):
        assert m_bound(polyharmonic(k), j) == pytest.approx((2 * abs(j) - 1.0) ** (-2 * k), rel=1e-12)


def test_r2_certificate_all_matrix_families():
    grid = make_grid(1, 256)
    for fam in matrix():
        for j in lattice_points(10, 1, exclude_origin=True):
            ratio = m_ratio(fam, j, grid.nodes)
            assert np.max(ratio) <= m_bound(fam, j) * (1 + 1e-12), (fam, j)


def test_r2_certificate_2d():
    # the bound must hold off the axes too, e.g. j = (2, 0) at the corner (-pi, pi)
    grid = make_grid(2, 16)
    fam = polyharmonic(2, 2)
    worst = m_ratio(fam, (2, 0), np.array([-PI, PI]))
    assert worst == pytest.approx(0.04, rel=1e-13)
    assert worst > 3.0 ** -4  # the sup-norm form (2||j||_inf - 1)^(-2k) is too small here
    assert worst <= m_bound(fam, (2, 0))
    for fam in (polyharmonic(2, 2), gaussian(1, 2), multiquadric(2, 0.5, 2)):
        for j in lattice_points(3, 2, exclude_origin=True):
            assert np.max(m_ratio(fam, j, grid.nodes)) <= m_bound(fam, j) * (1 + 1e-12)


@pytest.mark.parametrize("scale", [1e-6, 1e6])
def test_scale_invariance(scale):
    grid = make_grid(1, 64)
    for fam in (gaussian(2), polyharmonic(2), multiquadric(2)):
        scaled = InterpolatorFamily(fam.kind, 1, fam.parameter, fam.mq_exponent, scale=scale)
        for j in (1, -2):
            np.testing.assert_allclose(m_ratio(scaled, j, grid.nodes), m_ratio(fam, j, grid.nodes),
                                       rtol=1e-13, atol=1e-15)
        a, b = fundamental_spectrum(fam, grid), fundamental_spectrum(scaled, grid)
        np.testing.assert_allclose(a.weights, b.weights, rtol=1e-13, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(-6, 6).filter(bool), st.floats(-PI, PI), st.sampled_from([0, 1, 2, 3]))
def test_ratio_symmetry(j, xi, which):
    fam = [gaussian(1), gaussian(3.5), polyharmonic(1), polyharmonic(4)][which]
    assert m_ratio(fam, j, xi) == m_ratio(fam, -j, -xi)


@settings(max_examples=40, deadline=None)
@given(st.integers(-5, 5).filter(bool), st.floats(-PI + 0.05, PI - 0.05))
def test_r1_monotone_in_parameter(j, xi):
    seq = [m_ratio(gaussian(a), j, xi) for a in (1, 2, 4, 8)]
    assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))
    seq = [m_ratio(polyharmonic(k), j, xi) for k in range(1, 7)]
    assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))


def test_parameter_validation():
    with pytest.raises(ParameterError):
        polyharmonic(1.5)
    with pytest.raises(ParameterError):
        polyharmonic(1, 2)
    with pytest.raises(ParameterError):
        multiquadric(0.5)
    with pytest.raises(ParameterError):
        multiquadric(1, beta=1.0)
    with pytest.raises(ParameterError):
        multiquadric(1, beta=0.25)
    with pytest.raises(ParameterError):
        InterpolatorFamily("thin-plate", 1, 1)
    with pytest.warns(SmallAlphaWarning):
        gaussian(0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert gaussian(0.5, allow_small_alpha=True).below_minimum


def test_metadata():
    assert polyharmonic(2).origin_singular and multiquadric(1).origin_singular
    assert not gaussian(1).origin_singular
    assert polyharmonic(3).decay_class == "power(6)"
    assert multiquadric(1, 1.5, 2).bessel_order == 2.5


def test_tail_radius_examples():
    assert tail_radius(gaussian(1), 1e-12) == 1
    assert tail_bound(gaussian(1), 1) == pytest.approx(2 * np.exp(-9 * PI ** 2), rel=0.05)
    assert tail_radius(polyharmonic(1), 1e-6, relative=False) == pytest.approx(50661, abs=2)
    assert tail_radius(polyharmonic(3), 1e-10, relative=False) <= 60


def test_tail_radius_unreachable():
    with pytest.raises(NumericalFailure):
        tail_radius(polyharmonic(1), 1e-30)


def test_tail_bound_is_a_bound():
    # exact 1-D lattice sums against the analytic bound
    for k in (1, 2):
        fam = polyharmonic(k)
        for J in (5, 20):
            exact = sum((2 * PI * s - PI) ** (-2 * k) * 2 for s in range(J + 1, 200000))
            assert exact <= tail_bound(fam, J)


def test_verify_conditions_gaussian():
    grid = make_grid(1, 64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallAlphaWarning)
        fams = [gaussian(a) for a in (0.25, 0.5, 1, 2, 4)]
    rep = verify_conditions(fams, grid, 5)
    assert rep.passed
    assert rep.h2_by_member[0] == pytest.approx(np.exp(-0.25 * PI ** 2), rel=1e-12)
    assert rep.r2_violations == 0
    assert all(len(v) == 5 for v in rep.r1_trend.values())


def test_verify_conditions_polyharmonic_and_mq():
    grid = make_grid(1, 64)
    rep = verify_conditions([polyharmonic(k) for k in (1, 2, 3)], grid)
    assert rep.passed
    assert rep.h2_by_member[0] == pytest.approx(PI ** -2, rel=1e-12)
    assert rep.h4_decay_exponent_fit == pytest.approx(-6, abs=1e-9)
    assert verify_conditions([multiquadric(c) for c in (1, 2, 4)], grid).passed


def test_verify_conditions_synthetic_failure():
    rep = verify_conditions([synthetic_h2_failure()], make_grid(1, 64))
    assert not rep.passed and rep.h2_delta == 0.0


def test_verify_conditions_errors():
    grid = make_grid(1, 16)
    with pytest.raises(ParameterError):
        verify_conditions([], grid)
    with pytest.raises(ParameterError):
        verify_conditions([gaussian(2), gaussian(1)], grid)
    with pytest.raises(ParameterError):
        verify_conditions([gaussian(1), polyharmonic(1)], grid)
