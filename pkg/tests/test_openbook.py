"""Open book assembly: gluing, binding, exactness correction, realization."""

import math

import numpy as np
import pytest

from contactlab import forms, openbook as ob, sphere
from contactlab.flows import IntegratorConfig
from contactlab.forms import ScalarField, pullback_eval
from contactlab.profiles import BindingProfile

rng = np.random.default_rng(41)
FLOW = IntegratorConfig(step=0.02, max_time=2.0)


def circle_form():
    return forms.one_form(1, lambda u: np.array([1.0]), lambda u: np.zeros((1, 1)))


def test_domain_nondegeneracy_check():
    domain = ob.standard_disk_domain()
    assert domain.check_nondegenerate(rng) > 0.5
    degenerate = ob.ExactSymplecticDomain(
        2, forms.one_form(2, lambda u: np.zeros(2), lambda u: np.zeros((2, 2))),
        np.array([[-1.0, 1.0]] * 2))
    with pytest.raises(ValueError, match="degenerate"):
        degenerate.check_nondegenerate(rng)


def test_mapping_torus_form_values():
    domain = ob.standard_disk_domain()
    alpha = ob.mapping_torus_form(domain.lam)
    x = np.array([0.3, 0.0, 1.2])
    assert alpha(x, np.array([0.0, 0.0, 1.0])) == pytest.approx(1.0)
    assert alpha(x, np.array([1.0, 0.0, 0.0])) == pytest.approx(0.0)
    vol = forms.contact_volume(alpha, x, list(np.eye(3)))
    assert vol > 0


def test_glue_map_frozen_values():
    glue = ob.glue_map(1)
    assert glue(np.array([0.3, 0.5, 1.0]))[0] == pytest.approx(0.0)
    assert glue(np.array([0.3, 0.9, 1.0]))[0] == pytest.approx(-0.4)
    out = glue(np.array([0.7, 0.6, 2.0]))
    assert out[1] == pytest.approx(0.7) and out[2] == pytest.approx(2.0)


def test_glue_pullback_identity():
    collar = ob.collar_form(circle_form())
    glue = ob.glue_map(1)
    for _ in range(20):
        u = np.array([rng.uniform(0, 6.28), rng.uniform(0.51, 0.99),
                      rng.uniform(0, 6.28)])
        for v in np.eye(3):
            lhs = pullback_eval(glue, collar, u, [v])
            rhs = math.exp(0.5 - u[1]) * v[0] + v[2]
            assert abs(lhs - rhs) < 1e-12


def test_binding_form_matches_glued_form_on_overlap():
    profile = BindingProfile()
    beta = ob.binding_form_polar(profile, circle_form())
    collar = ob.collar_form(circle_form())
    glue = ob.glue_map(1)
    for _ in range(30):
        u = np.array([rng.uniform(0, 6.28),
                      rng.uniform(profile.matching_radius, 0.999),
                      rng.uniform(0, 6.28)])
        for v in np.eye(3):
            assert abs(pullback_eval(glue, collar, u, [v]) - beta(u, v)) < 1e-14


def test_binding_form_rejects_radius_out_of_range():
    beta = ob.binding_form_polar(BindingProfile(), circle_form())
    with pytest.raises(ValueError):
        beta(np.array([0.0, 1.2, 0.0]), np.eye(3)[0])


def test_binding_volume_positive_on_grid():
    profile = BindingProfile()
    beta = ob.binding_form_polar(profile, circle_form())
    for r in np.linspace(0.01, 0.95, 30):
        vol = forms.contact_volume(beta, np.array([0.5, r, 1.0]), list(np.eye(3)))
        pred = profile.h1(r) * profile.h2_d(r) - profile.h1_d(r) * profile.h2(r)
        assert vol > 0
        assert abs(vol - pred) < 1e-8


def test_cartesian_binding_form_even_across_axis():
    profile = BindingProfile()
    beta = ob.binding_form_cartesian(profile, circle_form())
    center = np.array([0.4, 0.0, 0.0])
    for ang in np.linspace(0, 2 * math.pi, 7):
        offset = 1e-3 * np.array([0.0, math.cos(ang), math.sin(ang)])
        for v in np.eye(3):
            sym = beta(center + offset, v) + beta(center - offset, v) \
                - 2.0 * beta(center, v)
            assert abs(sym) < 1e-9


def test_correcting_field_solves_contraction_equation():
    domain = ob.standard_disk_domain()
    candidate = ob.radial_twist_map(0.6, 0.8)
    result = ob.giroux_correction(domain, candidate, FLOW, rng=rng)
    for x in domain.sample(rng, 10):
        y_vec = result.y_field(x)
        b = domain.dlambda_matrix(x)
        jac = candidate.mapping.jacobian(x)
        for j, e in enumerate(np.eye(2)):
            mu_j = domain.lam(candidate.mapping(x), jac @ e) - domain.lam(x, e)
            assert abs(float(y_vec @ b[:, j]) + mu_j) < 1e-9


def test_giroux_identity_map():
    domain = ob.standard_disk_domain()
    candidate = ob.SymplectomorphismCandidate(forms.identity_map(2),
                                              np.array([[-0.1, 0.1]] * 2))
    result = ob.giroux_correction(domain, candidate, FLOW, rng=rng)
    for x in domain.sample(rng, 10):
        assert np.max(np.abs(result.psi_hat(x) - x)) < 1e-12
        assert abs(result.h(x)) < 1e-12


def test_giroux_rejects_non_symplectic_input():
    domain = ob.standard_disk_domain()
    squeeze = forms.SmoothMap(2, 2, lambda u: np.array([2.0 * u[0], u[1]]),
                              jac=lambda u: np.diag([2.0, 1.0]))
    candidate = ob.SymplectomorphismCandidate(squeeze, np.array([[-2.0, 2.0]] * 2))
    with pytest.raises(ValueError, match="not closed|preserve"):
        ob.giroux_correction(domain, candidate, FLOW, rng=rng)


def test_giroux_residual_small_sample():
    domain = ob.standard_disk_domain()
    candidate = ob.radial_twist_map(0.8, 0.8)
    result = ob.giroux_correction(domain, candidate, FLOW, rng=rng)
    h_fd = 1e-5
    worst = 0.0
    for x in domain.sample(rng, 8):
        for v in np.eye(2):
            nu = result.nu_eval(domain.lam, x, v)
            dh = (result.h(x + h_fd * v) - result.h(x - h_fd * v)) / (2 * h_fd)
            worst = max(worst, abs(nu + dh))
    assert worst < 1e-5


def test_batched_flow_agrees_with_pointwise():
    domain = ob.standard_disk_domain()
    candidate = ob.radial_twist_map(0.8, 0.8)
    result = ob.giroux_correction(domain, candidate, FLOW, rng=rng)
    pts = domain.sample(rng, 5)
    ev = ob.giroux_flow_batch(domain, candidate, pts, FLOW)
    for i, x in enumerate(pts):
        assert abs(result.h(x) - ev.h[i]) < 1e-9
        assert np.max(np.abs(result.psi_hat(x) - ev.psi_hat[i])) < 1e-9


def test_batched_y_agrees_with_solve():
    domain = ob.standard_disk_domain()
    candidate = ob.radial_twist_map(0.8, 0.8)
    y_batch = ob.make_batched_y(domain, candidate)
    result = ob.giroux_correction(domain, candidate, FLOW, rng=rng)
    pts = domain.sample(rng, 6)
    rows = y_batch(pts)
    for i, x in enumerate(pts):
        assert np.max(np.abs(rows[i] - result.y_field(x))) < 1e-10


def test_shear_candidate_primitive():
    candidate, h0 = ob.strip_shear_map(0.5, 0.8)
    domain = ob.standard_disk_domain()

    def nu(x, v):
        jac = candidate.mapping.jacobian(x)
        return domain.lam(candidate.mapping(x), jac @ v) - domain.lam(x, v)

    # nu = -d h0: check by finite differences of the explicit primitive
    for _ in range(15):
        x = rng.uniform(-0.9, 0.9, 2)
        for v in np.eye(2):
            fd = (h0(x + 1e-6 * v) - h0(x - 1e-6 * v)) / 2e-6
            assert abs(nu(x, v) + fd) < 1e-8


def test_candidate_identity_outside_support():
    candidate = ob.radial_twist_map(0.7, 0.6)
    samples = np.array([[0.9, 0.2], [-0.8, 0.7], [0.61, 0.61]])
    assert candidate.identity_defect_outside(samples) == 0.0


def test_hamiltonian_bump_is_symplectic():
    candidate = ob.hamiltonian_bump_map(0.15, 0.8, step=0.01)
    for _ in range(5):
        x = rng.uniform(-0.75, 0.75, 2)
        jac = candidate.mapping.jacobian(x)
        assert abs(np.linalg.det(jac) - 1.0) < 1e-9


def test_legendrian_realization_requires_higher_dimension():
    lam = sphere.canonical_one_form(4)
    with pytest.raises(ValueError, match="n > 1"):
        ob.legendrian_realization(1, lam)


def test_legendrian_realization_trivial_case():
    # lambda = lambda_can: the potential is constant and nothing changes
    n = 2
    lam = sphere.canonical_one_form(2 * (n + 1))
    real = ob.legendrian_realization(n, lam)
    vals = []
    for _ in range(5):
        sp = sphere.random_sphere_point(rng, n, 0.0, 0.25)
        vals.append(real.g(sp.q, sp.p))
        x = np.concatenate([sp.q, sp.p])
        for v in sphere.tangent_frame(sp):
            assert abs(real.lam_tilde(x, v) - lam(x, v)) < 1e-10
    assert np.max(vals) - np.min(vals) < 1e-10


def test_reeb_transversality_three_cases():
    domain = ob.standard_disk_domain()
    alpha = ob.mapping_torus_form(domain.lam)
    theta = ScalarField(3, lambda u: float(u[2]),
                        grad=lambda u: np.array([0.0, 0.0, 1.0]))
    samples = [(np.array([0.2, -0.3, 1.0]), list(np.eye(3)))]
    assert ob.reeb_transversality_check(alpha, theta, samples) == pytest.approx(1.0, abs=1e-8)

    alpha_bad = forms.one_form(3, lambda u: np.array([0.0, u[0], 1.0]),
                               lambda u: np.array([[0.0, 0.0, 0.0],
                                                   [1.0, 0.0, 0.0],
                                                   [0.0, 0.0, 0.0]]))
    theta_bad = ScalarField(3, lambda u: float(u[1]),
                            grad=lambda u: np.array([0.0, 1.0, 0.0]))
    assert abs(ob.reeb_transversality_check(alpha_bad, theta_bad, samples)) < 1e-9


def test_legendrian_realization_detects_path_dependence():
    n = 2
    d = n + 1

    def bad_eval(x, v):
        # canonical form plus a term whose differential survives on tangent pairs
        val = float(x[d:] @ np.asarray(v, dtype=float)[:d])
        val += float(x[0] * x[d + 1] * np.asarray(v, dtype=float)[1])
        return val

    bad = forms.KFormOracle(1, 2 * d, bad_eval)
    with pytest.raises(ValueError, match="path-dependence"):
        ob.legendrian_realization(n, bad, path_check=4)
    # the honest canonical form sails through the same validation
    lam = sphere.canonical_one_form(2 * d)
    ob.legendrian_realization(n, lam, path_check=3)
