"""Page transport before and after surgery, twist recognition, words."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contactlab import monodromy as mono, surgery
from contactlab.flows import IntegratorConfig
from contactlab.profiles import HandleProfile
from contactlab.sphere import SpherePoint
from contactlab.surgery import ModelPoint, SurgeryConfig

rng = np.random.default_rng(55)
EPS = 0.1
PROFILE = HandleProfile(0.05)
CONFIG = SurgeryConfig(epsilon=EPS, delta=0.05)
FLOW = IntegratorConfig(step=1e-3, max_time=2.0, event_tol=1e-12)


def worked_start():
    return mono.build_start(np.array([1.0, 0.0]), np.array([0.0, 0.5]), EPS)


def test_page_decomposition_roundtrip():
    start = worked_start()
    dec = mono.PageDecomposition.of(start, -EPS)
    assert np.allclose(dec.w, [1.0, 0.0])
    assert np.allclose(dec.r, [0.0, 0.5])
    assert np.allclose(dec.z(), start.z)
    with pytest.raises(ValueError):
        mono.PageDecomposition.of(start, +EPS)
    with pytest.raises(ValueError):
        mono.PageDecomposition(np.array([1.0, 1.0]), np.zeros(2), -EPS)


def test_pre_surgery_monodromy_is_trivial():
    out = mono.pre_surgery_monodromy(worked_start(), EPS, FLOW)
    dec = mono.PageDecomposition.of(out, +EPS)
    assert np.max(np.abs(dec.w - [1.0, 0.0])) < 1e-12
    assert np.max(np.abs(dec.r - [0.0, 0.5])) < 1e-12
    assert np.allclose(out.z, [0.1, 0.5])


def test_pre_surgery_zero_fiber_runs_along_the_sphere():
    start = mono.build_start(np.array([0.0, 1.0]), np.zeros(2), EPS)
    out = mono.pre_surgery_monodromy(start, EPS, FLOW)
    assert np.max(np.abs(out.z - EPS * np.array([0.0, 1.0]))) < 1e-12


def test_closed_form_frozen_worked_point():
    out = mono.post_surgery_closed_form(worked_start(), EPS)
    assert np.allclose(out.w, [0.9230769230769231, 0.38461538461538464])
    assert np.allclose(out.z, [-0.1, 0.5])
    assert abs(np.linalg.norm(out.w) - 1.0) < 1e-15
    assert abs(out.theta() - EPS) < 1e-15


@given(st.integers(0, 10 ** 6))
@settings(max_examples=80, deadline=None)
def test_closed_form_lands_on_hypersurface(seed):
    local = np.random.default_rng(seed)
    nzw = int(local.integers(2, 5))
    start = mono.admissible_start(local, nzw, EPS, 0.05)
    out = mono.post_surgery_closed_form(start, EPS)
    # |w + 2 eps z / |z|^2| = 1 exactly because z.w = -eps
    assert abs(float(out.w @ out.w) - 1.0) < 1e-12
    assert abs(out.theta() - EPS) < 1e-12


def test_closed_form_rejects_surgered_locus():
    bad = ModelPoint(np.zeros(0), np.zeros(0), np.zeros(2), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        mono.post_surgery_closed_form(bad, 0.0 + EPS)


def test_pipeline_matches_closed_form_on_worked_point():
    res = mono.post_surgery_pipeline(worked_start(), CONFIG, PROFILE, FLOW)
    assert res.residuals["closed_vs_pipeline"] < 1e-6
    assert res.residuals["stage1_level"] < 1e-10
    assert res.residuals["stage3_wnorm"] < 1e-12


def test_pipeline_finite_speed_convergence():
    errs = mono.a_convergence_scan(worked_start(), [10.0, 100.0, 1000.0, 10000.0],
                                   CONFIG, PROFILE, FLOW)
    ordered = [errs[a] for a in (10.0, 100.0, 1000.0, 10000.0)]
    assert all(b < a for a, b in zip(ordered, ordered[1:]))
    assert errs[1000.0] < 5e-3
    assert errs[10000.0] < 5e-4


def test_recognition_reproduces_block_matrix():
    res = mono.post_surgery_pipeline(worked_start(), CONFIG, PROFILE, FLOW)
    tw = mono.recognize_dehn_twist(res, EPS)
    assert tw.matrix_residual < 1e-9
    assert tw.circle_defect < 1e-12
    # frozen circle functions for r^2 = 1/4, eps = 1/10
    assert -tw.cos_g == pytest.approx(0.24 / 0.26)
    assert tw.sin_g == pytest.approx(2 * EPS * 0.5 / 0.26)
    assert tw.g_tilde == pytest.approx(math.pi - tw.g)


def test_recognition_quarter_circle_at_r_equals_eps():
    start = mono.build_start(np.array([1.0, 0.0]), np.array([0.0, EPS]), EPS)
    res = mono.post_surgery_pipeline(start, CONFIG, PROFILE, FLOW)
    tw = mono.recognize_dehn_twist(res, EPS)
    assert abs(tw.cos_g) < 1e-12
    assert tw.sin_g == pytest.approx(1.0)


def test_recognition_needs_fiber_part():
    start = mono.build_start(np.array([1.0, 0.0]), np.zeros(2), EPS)
    closed = mono.post_surgery_closed_form(start, EPS)
    res = mono.MonodromyResult(
        input=mono.PageDecomposition.of(start, -EPS),
        output=mono.PageDecomposition.of(closed, +EPS),
        pipeline_point=closed, closed_form_point=closed, twist_angle=0.0)
    with pytest.raises(ValueError, match="r != 0"):
        mono.recognize_dehn_twist(res, EPS)


def test_far_fiber_transport_is_nearly_identity():
    w = np.array([1.0, 0.0])
    start = mono.build_start(w, np.array([0.0, 1000.0 * EPS]), EPS)
    out = mono.post_surgery_closed_form(start, EPS)
    assert np.max(np.abs(out.w - w)) < 3e-3


def test_recognized_angle_closed_form():
    # cos g = (eps^2 - r^2)/(r^2 + eps^2) means g = 2 atan(|r|/eps)
    for r_norm in (0.05, 0.3, 1.0):
        dec = mono.PageDecomposition(np.array([1.0, 0.0]),
                                     np.array([0.0, r_norm]), -EPS)
        g = mono.recognized_angle(dec, EPS)
        assert abs(math.cos(g) - (EPS ** 2 - r_norm ** 2) / (EPS ** 2 + r_norm ** 2)) < 1e-12


def test_pipeline_dimensions_spot():
    for nzw in (2, 3, 4):
        worst = 0.0
        for _ in range(10):
            start = mono.admissible_start(rng, nzw, EPS, PROFILE.delta)
            res = mono.post_surgery_pipeline(start, CONFIG, PROFILE, FLOW)
            worst = max(worst, res.residuals["closed_vs_pipeline"])
        assert worst < 1e-6


def test_window_scan_reports_linear_slope():
    wconf = SurgeryConfig(epsilon=0.24, delta=0.05)
    devs = mono.delta_deviation_scan(rng, [0.02, 0.01, 0.005], 10, 2, wconf, FLOW)
    slope = mono.fit_log_slope(list(devs), list(devs.values()))
    assert 0.7 <= slope <= 1.3


def test_word_identity_and_single_letter():
    base = mono.ChartPoint("A", SpherePoint(np.array([1.0, 0.0]),
                                            np.array([0.0, 0.4])))
    out = mono.composed_monodromy_word(base, [], CONFIG)
    assert np.allclose(out.point.as_array(), base.point.as_array())
    # one positive letter equals the closed-form transport on decompositions
    start = mono.build_start(base.point.q, base.point.p, EPS)
    closed = mono.post_surgery_closed_form(start, EPS)
    dec = mono.PageDecomposition.of(closed, +EPS)
    one = mono.composed_monodromy_word(base, [("A", 1)], CONFIG)
    assert np.max(np.abs(one.point.q - dec.w)) < 1e-12
    assert np.max(np.abs(one.point.p - dec.r)) < 1e-12


def test_word_inverse_letters_cancel():
    base = mono.ChartPoint("A", SpherePoint(np.array([0.0, 1.0, 0.0]),
                                            np.array([0.3, 0.0, 0.4])))
    out = mono.composed_monodromy_word(base, [("A", 1), ("A", -1)], CONFIG)
    assert np.max(np.abs(out.point.as_array() - base.point.as_array())) < 1e-12


def test_word_other_chart_acts_as_identity():
    base = mono.ChartPoint("A", SpherePoint(np.array([1.0, 0.0]),
                                            np.array([0.0, 0.4])))
    out = mono.composed_monodromy_word(base, [("B", 1), ("B", 1)], CONFIG)
    assert np.allclose(out.point.as_array(), base.point.as_array())


def test_word_rejects_bad_power():
    base = mono.ChartPoint("A", SpherePoint(np.array([1.0, 0.0]),
                                            np.array([0.0, 0.4])))
    with pytest.raises(ValueError):
        mono.composed_monodromy_word(base, [("A", 2)], CONFIG)


def test_page_speed_residual_on_worked_point():
    from contactlab import flows
    on_s1 = surgery.limit_transfer_to_s1(worked_start(), PROFILE)
    fld = surgery.handle_hamiltonian_field(0, 2, PROFILE)
    traj = flows.flow_until_event(fld, on_s1.as_array(), flows.page_event(0, 2),
                                  EPS, FLOW)
    assert mono.page_speed_residual(traj, 0, 2, EPS) < 1e-8
