"""Named verification suites.

Each suite turns the model formulas into residual checks and returns a list
of :class:`contactlab.reports.CheckRecord`.  Anchors quote the identity
being verified; `ops` lists the public operations a check exercises (the
"all" suite must cover the whole registry in QUOTED_OPS).
"""

from __future__ import annotations

import math

import numpy as np

from . import flows, forms, monodromy as mono, moves as mv, openbook as ob, sphere, surgery
from .config import ScenarioConfig
from .flows import IntegratorConfig
from .profiles import BindingProfile, DehnTwistProfile, HandleProfile
from .reports import CheckRecord, VerificationReport, check_rng, run_check
from .surgery import ModelPoint, SurgeryConfig

Array = np.ndarray

# every operation whose defining formula comes from the source model must be
# exercised at least once by the "all" suite
QUOTED_OPS = [
    "pullback_eval", "liouville_residual", "contact_volume", "psh_gram_matrix",
    "canonical_form_eval", "geodesic_flow", "dehn_twist",
    "omega0_eval", "liouville_X", "liouville_X_a", "alpha_s_minus1_eval",
    "reeb_s_minus1", "theta_page", "psi_w", "psi_w_inverse", "phi_c",
    "f_eval", "transversality_margin", "hamiltonian_field_xf",
    "limit_transfer_to_s1", "transfer_to_s1_finite_a", "handle_membership",
    "flow_fixed_time", "flow_until_event",
    "mapping_torus_form", "glue_map", "binding_form_polar",
    "giroux_correction", "legendrian_realization", "reeb_transversality_check",
    "pre_surgery_monodromy", "post_surgery_closed_form", "post_surgery_pipeline",
    "recognize_dehn_twist", "composed_monodromy_word",
    "cyclic_rotate", "conjugate", "subcritical_attach", "stabilize", "destabilize",
]


def _dlam_can(u: Array, v: Array) -> float:
    d = u.size // 2
    return float(u[d:] @ v[:d] - v[d:] @ u[:d])


# ===========================================================================
# dehn-twist suite
# ===========================================================================

def twist_pullback_residual(rng: np.random.Generator, n: int, count: int,
                            profile: DehnTwistProfile, h_fd: float) -> float:
    """max defect of the twist preserving d(p dq) on constraint-tangent frames."""
    twist = sphere.dehn_twist_map(profile, n)
    worst = 0.0
    for _ in range(count):
        pt = sphere.random_sphere_point(rng, n, 1e-3, 2.0 * profile.p0)
        u = pt.as_array()
        jac = forms.fd_jacobian(twist.func, u, h_fd)
        frame = sphere.tangent_frame(pt)
        for i in range(len(frame)):
            for j in range(i + 1, len(frame)):
                lhs = _dlam_can(jac @ frame[i], jac @ frame[j])
                rhs = _dlam_can(frame[i], frame[j])
                worst = max(worst, abs(lhs - rhs))
    return worst


def suite_dehn_twist(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []
    profile = DehnTwistProfile(cfg.p0, cfg.twist_k)

    def symplecto():
        worst = 0.0
        total = 0
        for n in cfg.sphere_dims:
            rng = check_rng(cfg.seed, f"twist-symplecto-{n}")
            worst = max(worst, twist_pullback_residual(
                rng, n, cfg.n_twist, profile, cfg.h_fd))
            total += cfg.n_twist
        return worst, total, {"dims": list(cfg.sphere_dims)}

    checks.append(run_check(
        "twist-symplectomorphism",
        "pullback of d(p dq) through the twist equals d(p dq) on the bundle tangent spaces",
        ["dehn_twist"], cfg.tol("twist_symplecto"), symplecto))

    def support():
        rng = check_rng(cfg.seed, "twist-support")
        worst = 0.0
        for _ in range(100):
            pt = sphere.random_sphere_point(rng, 2, profile.p0, 3.0 * profile.p0)
            out = sphere.dehn_twist(pt, profile)
            worst = max(worst, float(np.max(np.abs(out.as_array() - pt.as_array()))))
        return worst, 100, {}

    checks.append(run_check(
        "twist-compact-support",
        "the twist is the pointwise identity once |p| reaches the support radius",
        ["dehn_twist"], 0.0, support))

    def zero_section():
        rng = check_rng(cfg.seed, "twist-zero-section")
        k1 = DehnTwistProfile(cfg.p0, 1)
        worst = 0.0
        for _ in range(50):
            q = rng.standard_normal(3)
            q /= np.linalg.norm(q)
            pt = sphere.SpherePoint(q, np.zeros(3))
            out = sphere.dehn_twist(pt, k1)
            worst = max(worst, float(np.max(np.abs(out.q + q))),
                        float(np.max(np.abs(out.p))))
        return worst, 50, {}

    checks.append(run_check(
        "twist-zero-section-antipode",
        "a single twist acts on the zero section as q -> -q",
        ["dehn_twist"], 0.0, zero_section))

    def geodesic():
        rng = check_rng(cfg.seed, "geodesic")
        worst = 0.0
        for _ in range(100):
            n = int(rng.integers(1, 4))
            pt = sphere.random_sphere_point(rng, n, 0.1, 3.0)
            t = float(rng.uniform(-10, 10))
            out = sphere.geodesic_flow(pt, t)
            worst = max(worst,
                        abs(out.q @ out.q - 1.0), abs(out.q @ out.p),
                        abs(np.linalg.norm(out.p) - np.linalg.norm(pt.p)))
        # quarter period with |p| = 1 swaps (q, p) -> (p, -q)
        pt = sphere.SpherePoint(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        out = sphere.geodesic_flow(pt, math.pi / 2.0)
        worst = max(worst, float(np.max(np.abs(out.q - pt.p))),
                    float(np.max(np.abs(out.p + pt.q))))
        # half period with |p| = 2 maps to the antipode: frozen arithmetic
        pt = sphere.SpherePoint(np.array([1.0, 0.0]), np.array([0.0, 2.0]))
        out = sphere.geodesic_flow(pt, math.pi)
        worst = max(worst, float(np.max(np.abs(out.q - np.array([-1.0, 0.0])))),
                    float(np.max(np.abs(out.p - np.array([0.0, -2.0])))))
        return worst, 102, {}

    checks.append(run_check(
        "geodesic-flow-constraints",
        "the normalized geodesic rotation preserves |p| and the bundle constraints",
        ["geodesic_flow"], 1e-9, geodesic))

    def canonical_values():
        worst = 0.0
        pt = sphere.SpherePoint(np.array([1.0, 0.0]), np.array([0.0, 0.0]))
        worst = max(worst, abs(sphere.canonical_form_eval(pt, np.array([0.3, 0.7, 0.0, 0.1]))))
        pt = sphere.SpherePoint(np.array([1.0, 0.0]), np.array([0.0, 0.3]))
        worst = max(worst, abs(sphere.canonical_form_eval(
            pt, np.array([0.0, 1.0, 0.0, 0.0])) - 0.3))
        worst = max(worst, abs(sphere.canonical_form_eval(
            pt, np.array([0.0, 0.0, 0.4, -0.2]))))
        return worst, 3, {}

    checks.append(run_check(
        "canonical-form-values",
        "p dq vanishes on the zero section and on fiber directions, and pairs p with dq",
        ["canonical_form_eval"], 1e-12, canonical_values))

    def smoothness():
        rng = check_rng(cfg.seed, "twist-smooth")
        twist = sphere.dehn_twist_map(profile, 2)
        worst = 0.0
        for _ in range(20):
            q = rng.standard_normal(3)
            q /= np.linalg.norm(q)
            d = rng.standard_normal(3)
            d -= (d @ q) * q
            d /= np.linalg.norm(d)
            u_plus = np.concatenate([q, 1e-3 * d])
            u_minus = np.concatenate([q, -1e-3 * d])
            j_plus = forms.fd_jacobian(twist.func, u_plus, 1e-5)
            j_minus = forms.fd_jacobian(twist.func, u_minus, 1e-5)
            worst = max(worst, float(np.max(np.abs(j_plus - j_minus))))
        return worst, 20, {}

    checks.append(run_check(
        "twist-smooth-across-zero-section",
        "twist Jacobians match across a small sphere in p around the zero section",
        ["dehn_twist"], 1e-4, smoothness))

    def k_fold():
        rng = check_rng(cfg.seed, "twist-kfold")
        single = DehnTwistProfile(cfg.p0, 1)
        double = DehnTwistProfile(cfg.p0, 2)
        worst = 0.0
        for _ in range(100):
            pt = sphere.random_sphere_point(rng, 2, 1e-3, 2.0 * cfg.p0)
            twice = sphere.dehn_twist(sphere.dehn_twist(pt, single), single)
            once = sphere.dehn_twist(pt, double)
            worst = max(worst, float(np.max(np.abs(twice.as_array() - once.as_array()))))
        # zero section: the double twist fixes q exactly
        q = np.array([0.0, 1.0, 0.0])
        fixed = sphere.dehn_twist(sphere.SpherePoint(q, np.zeros(3)), double)
        worst = max(worst, float(np.max(np.abs(fixed.q - q))))
        return worst, 101, {}

    checks.append(run_check(
        "twist-k-fold-composition",
        "two single twists compose to the doubled angle profile exactly",
        ["dehn_twist", "geodesic_flow"], 1e-12, k_fold))

    def profile_shape():
        worst = 0.0
        for k in (1, 2, 3):
            p = DehnTwistProfile(cfg.p0, k)
            worst = max(worst, abs(p.g1(0.0) - k * math.pi))
            worst = max(worst, abs(p.g1(cfg.p0)), abs(p.g1(2.0 * cfg.p0)))
            if p.g1_d(0.0) >= 0.0:
                worst = max(worst, 1.0)
            ss = np.linspace(0.0, cfg.p0, 400)
            vals = np.array([p.g1(s) for s in ss])
            worst = max(worst, float(np.max(np.maximum(np.diff(vals), 0.0))))
        return worst, 3, {}

    checks.append(run_check(
        "twist-angle-profile",
        "the angle profile starts at k*pi with strictly negative slope and "
        "decreases to 0 at the support radius",
        ["dehn_twist"], 1e-12, profile_shape))

    return checks


# ===========================================================================
# weinstein-strictness suite
# ===========================================================================

def strictness_residual(rng: np.random.Generator, n: int, k: int, count: int) -> float:
    nzw, nxy = k + 1, n - k - 1
    mapping = surgery.psi_w_map(nzw, nxy)
    target = surgery.alpha_model_form(nxy, nzw)
    source = surgery.alpha_chart_form(nzw, nxy)
    dim_in = 1 + 2 * nzw + 2 * nxy
    eye = np.eye(dim_in)
    worst = 0.0
    for _ in range(count):
        sp = sphere.random_sphere_point(rng, nzw - 1, 0.05, 1.5)
        z = float(rng.uniform(-1.0, 1.0))
        x = rng.standard_normal(nxy)
        y = rng.standard_normal(nxy)
        u = surgery.chart_pack(z, sp.q, sp.p, x, y)
        vecs = [eye[0]]
        for v in sphere.tangent_frame(sp):
            vv = np.zeros(dim_in)
            vv[1:1 + 2 * nzw] = v
            vecs.append(vv)
        vecs.extend(eye[1 + 2 * nzw + i] for i in range(2 * nxy))
        for v in vecs:
            lhs = forms.pullback_eval(mapping, target, u, [v])
            worst = max(worst, abs(lhs - source(u, v)))
    return worst


def suite_weinstein(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []

    def strictness():
        worst = 0.0
        total = 0
        for n, k in cfg.model_dims:
            rng = check_rng(cfg.seed, f"strict-{n}-{k}")
            worst = max(worst, strictness_residual(rng, n, k, cfg.n_strict))
            total += cfg.n_strict
        return worst, total, {"dims": [list(d) for d in cfg.model_dims]}

    checks.append(run_check(
        "straightening-strictness",
        "the sphere-bundle chart pulls (x dy - y dx)/2 + 2z dw + w dz back to "
        "dz + p dq + (x dy - y dx)/2",
        ["psi_w", "pullback_eval"], cfg.tol("strictness"), strictness))

    def roundtrip():
        rng = check_rng(cfg.seed, "psiw-roundtrip")
        worst = 0.0
        for _ in range(100):
            pt = surgery.random_s_minus1_point(rng, 1, 2)
            z, sp, x, y = surgery.psi_w_inverse(pt)
            back = surgery.psi_w(z, sp, x, y)
            worst = max(worst, float(np.max(np.abs(back.as_array() - pt.as_array()))))
            worst = max(worst, abs(sp.q @ sp.p))
        # frozen hand projection: z-block (-0.1, 0.5) against w = (1, 0)
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([-0.1, 0.5]), np.array([1.0, 0.0]))
        z, sp, _, _ = surgery.psi_w_inverse(pt)
        worst = max(worst, abs(z + 0.1), float(np.max(np.abs(sp.p - np.array([0.0, 0.5])))))
        return worst, 101, {}

    checks.append(run_check(
        "straightening-roundtrip",
        "decomposing z into (z.w) w + fiber part inverts the chart exactly",
        ["psi_w", "psi_w_inverse"], 1e-10, roundtrip))

    def conformality():
        rng = check_rng(cfg.seed, "conformality")
        worst = 0.0
        source = surgery.alpha_chart_form(2, 1)
        dim_in = 1 + 4 + 2
        eye = np.eye(dim_in)
        for c_val in (1.0, 4.0, cfg.scale_C):
            mapping = surgery.phi_c_map(2, 1, c_val)
            for _ in range(30):
                sp = sphere.random_sphere_point(rng, 1, 0.05, 1.0)
                u = surgery.chart_pack(float(rng.uniform(-1, 1)), sp.q, sp.p,
                                       rng.standard_normal(1), rng.standard_normal(1))
                for v in eye:
                    lhs = forms.pullback_eval(mapping, source, u, [v])
                    worst = max(worst, abs(lhs - c_val * source(u, v)))
        return worst, 90, {"C": [1.0, 4.0, cfg.scale_C]}

    checks.append(run_check(
        "rescaling-conformality",
        "(z,q,p,x,y) -> (Cz,q,Cp,sqrt(C)x,sqrt(C)y) scales the contact form by C",
        ["phi_c", "pullback_eval"], cfg.tol("conformality"), conformality))

    def isotropic():
        rng = check_rng(cfg.seed, "isotropic")
        worst = 0.0
        for _ in range(50):
            w = rng.standard_normal(3)
            w /= np.linalg.norm(w)
            pt = ModelPoint(np.zeros(1), np.zeros(1), np.zeros(3), w)
            for u in sphere._orthonormal_complement(w):
                v = np.zeros(8)
                v[5:8] = u  # w-block of the flat layout (nxy=1, nzw=3)
                worst = max(worst, abs(surgery.alpha_s_minus1_eval(pt, v)))
        return worst, 50, {}

    checks.append(run_check(
        "isotropic-sphere",
        "the contact form vanishes on the tangent spaces of {x=y=0, z=0, |w|=1}",
        ["alpha_s_minus1_eval", "psi_w"], 1e-12, isotropic))

    def liouville_main():
        rng = check_rng(cfg.seed, "liouville-main")
        worst = 0.0
        fld = surgery.liouville_field(1, 2)
        om = surgery.omega0_form(1, 2)
        frame = list(np.eye(6))
        for _ in range(cfg.n_liouville):
            pt = ModelPoint(rng.standard_normal(1), rng.standard_normal(1),
                            rng.standard_normal(2), rng.standard_normal(2))
            worst = max(worst, forms.liouville_residual(fld, om, pt.as_array(),
                                                        frame, cfg.h_fd))
        return worst, cfg.n_liouville, {}

    checks.append(run_check(
        "liouville-expansion",
        "the field (x/2, y/2, 2z, -w) satisfies L_X omega = omega for dx^dy + dz^dw",
        ["liouville_X", "liouville_residual"], cfg.tol("liouville"), liouville_main))

    def liouville_a():
        rng = check_rng(cfg.seed, "liouville-a")
        worst = 0.0
        om = surgery.omega0_form(0, 2)
        frame = list(np.eye(4))
        for a in (0.0, 1.0, 10.0):
            fld = surgery.liouville_a_field(0, 2, a)
            for _ in range(30):
                pt = ModelPoint(np.zeros(0), np.zeros(0),
                                rng.standard_normal(2), rng.standard_normal(2))
                worst = max(worst, forms.liouville_residual(fld, om, pt.as_array(),
                                                            frame, cfg.h_fd))
        fld = surgery.liouville_a_field(0, 2, 1.0)
        vec = fld(ModelPoint(np.zeros(0), np.zeros(0), np.array([1.0, 0.0]),
                             np.array([0.0, 1.0])).as_array())
        worst = max(worst, float(np.max(np.abs(vec - np.array([2.0, 0.0, 0.0, -1.0])))))
        return worst, 91, {"a": [0.0, 1.0, 10.0]}

    checks.append(run_check(
        "liouville-speed-family",
        "((1+a) z, -a w) is Liouville for dz^dw at every speed a",
        ["liouville_X_a", "liouville_residual"], cfg.tol("liouville"), liouville_a))

    def transversality():
        worst_floor = -math.inf
        total = 0
        mins = {}
        for delta in cfg.deltas:
            profile = HandleProfile(delta)
            rng = check_rng(cfg.seed, f"scan-{delta}")
            pts = surgery.sample_s1_points(rng, cfg.n_surface_scan, 1, 2, profile)
            margins = surgery.transversality_margins(pts, 1, 2, profile)
            mins[str(delta)] = float(margins.min())
            worst_floor = max(worst_floor, cfg.tol("positivity_floor") - float(margins.min()))
            total += cfg.n_surface_scan
        # frozen flat-piece values of the margin
        profile = HandleProfile(0.1)
        outer = ModelPoint(np.zeros(0), np.zeros(0),
                           np.array([math.sqrt(1.5), 0.0]), np.array([1.0, 0.0]))
        inner = ModelPoint(np.zeros(0), np.zeros(0),
                           np.array([1.0, 0.0]), np.array([0.8, 0.0]))
        v1 = abs(surgery.transversality_margin(outer, profile) - 1.0)
        v2 = abs(surgery.transversality_margin(inner, profile) - 2.0)
        worst = max(worst_floor, v1, v2)
        return worst, total + 2, {"min_margin": mins}

    checks.append(run_check(
        "level-set-transversality",
        "(|x|^2/2 + |y|^2/2 + 2|z|^2) g' + |w|^2 f' stays positive on the "
        "surgered hypersurface (it is half the Liouville derivative of the level function)",
        ["transversality_margin", "f_eval"], 0.0, transversality))

    def f_values():
        profile = HandleProfile(0.1)
        worst = 0.0
        pt = ModelPoint(np.zeros(0), np.zeros(0),
                        np.array([math.sqrt(1.5), 0.0]), np.array([1.0, 0.0]))
        worst = max(worst, abs(surgery.f_eval(pt, profile)))
        origin = ModelPoint(np.zeros(0), np.zeros(0), np.zeros(2), np.zeros(2))
        worst = max(worst, abs(surgery.f_eval(origin, profile) + 1.0))
        outside = ModelPoint(np.zeros(0), np.zeros(0), np.zeros(2), np.array([2.0, 0.0]))
        worst = max(worst, abs(surgery.f_eval(outside, profile) + (4.0 + 0.1)))
        return worst, 3, {}

    checks.append(run_check(
        "handle-function-values",
        "-f(|w|^2) + g(|x|^2+|y|^2+|z|^2) takes its frozen values on the "
        "flat pieces, at the origin and far out the w axis",
        ["f_eval"], 1e-12, f_values))

    def hamiltonian_sign():
        rng = check_rng(cfg.seed, "xf-sign")
        profile = HandleProfile(0.05)
        worst = 0.0
        for _ in range(100):
            pt = ModelPoint(np.zeros(0), np.zeros(0),
                            rng.standard_normal(2) * 0.9, rng.standard_normal(2) * 0.9)
            xf = surgery.hamiltonian_field_xf(pt, profile).as_array()
            grad = surgery.grad_f(pt, profile)
            for v in np.eye(4):
                lhs = surgery.omega0_eval(pt, xf, v)
                worst = max(worst, abs(lhs + grad @ v))
        # flat piece |z| = 1: the field is 2 z in the w slot
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([1.0, 0.0]), np.array([0.3, 0.1]))
        xf = surgery.hamiltonian_field_xf(pt, profile)
        worst = max(worst, float(np.max(np.abs(xf.w - 2.0 * pt.z))),
                    float(np.max(np.abs(xf.z))))
        return worst, 101, {"convention": "i_X omega = -dF"}

    checks.append(run_check(
        "page-hamiltonian-sign",
        "2 g' z d_w + 2 f' w d_z contracts the symplectic form to minus the "
        "differential of the handle function",
        ["hamiltonian_field_xf", "omega0_eval"], cfg.tol("liouville"), hamiltonian_sign))

    def reeb_properties():
        rng = check_rng(cfg.seed, "reeb-props")
        worst = 0.0
        alpha = surgery.alpha_model_form(0, 2)
        for _ in range(20):
            pt = surgery.random_s_minus1_point(rng, 0, 2)
            r_vec = surgery.reeb_s_minus1(pt).as_array()
            worst = max(worst, abs(alpha(pt.as_array(), r_vec) - 1.0))
            for v in surgery.s_minus1_tangent_frame(pt):
                dval = forms.exterior_derivative(alpha, pt.as_array(), [r_vec, v], cfg.h_fd)
                worst = max(worst, abs(dval))
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([0.2, -0.4]), np.array([1.0, 0.0]))
        r_vec = surgery.reeb_s_minus1(pt)
        worst = max(worst, float(np.max(np.abs(r_vec.z - pt.w))),
                    float(np.max(np.abs(r_vec.w))))
        return worst, 21, {}

    checks.append(run_check(
        "reeb-field-on-model",
        "the w vector in the z slot has alpha(R) = 1 and contracts d(alpha) "
        "to zero on the hypersurface tangent spaces",
        ["reeb_s_minus1", "alpha_s_minus1_eval"], 1e-7, reeb_properties))

    def theta_values():
        worst = 0.0
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([-0.1, 0.5]), np.array([1.0, 0.0]))
        worst = max(worst, abs(surgery.theta_page(pt) + 0.1))
        pt0 = ModelPoint(np.zeros(0), np.zeros(0), np.zeros(2), np.array([1.0, 0.0]))
        worst = max(worst, abs(surgery.theta_page(pt0)))
        # after Reeb time s the page value moves to -eps + s
        fld = surgery.reeb_field(0, 2)
        cfg_i = IntegratorConfig(step=cfg.flow_step, max_time=1.0)
        out = flows.flow_fixed_time(fld, pt.as_array(), 0.3, cfg_i)
        worst = max(worst, abs(float(out[:2] @ out[2:]) - (-0.1 + 0.3)))
        return worst, 3, {}

    checks.append(run_check(
        "page-function-values",
        "the page function z.w advances at unit rate along the Reeb field",
        ["theta_page", "flow_fixed_time"], 1e-10, theta_values))

    def omega_values():
        pt = ModelPoint(np.zeros(1), np.zeros(1), np.zeros(2), np.zeros(2))
        e = np.eye(6)  # layout x | y | z(2) | w(2)
        worst = abs(surgery.omega0_eval(pt, e[0], e[1]) - 1.0)   # (e_x1, e_y1)
        worst = max(worst, abs(surgery.omega0_eval(pt, e[0], e[0])))
        v1 = e[2] + e[4]   # e_z1 + e_w1
        v2 = e[2] - e[4]
        worst = max(worst, abs(surgery.omega0_eval(pt, v1, v2) + 2.0))
        return worst, 3, {}

    checks.append(run_check(
        "symplectic-form-values",
        "dx^dy + dz^dw on paired, repeated and mixed block vectors",
        ["omega0_eval"], 1e-14, omega_values))

    def psh():
        worst = 0.0
        # f = |u|^2/4 on the plane: the candidate metric is the identity
        f_psh = forms.ScalarField(2, lambda u: 0.25 * float(u @ u),
                                  grad=lambda u: 0.5 * u)
        gram = forms.psh_gram_matrix(f_psh, np.array([0.3, -0.2]), list(np.eye(2)), cfg.h_fd)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(2)))))
        # constant: zero matrix, not positive definite
        f_const = forms.ScalarField(2, lambda u: 1.5, grad=lambda u: np.zeros(2))
        gram = forms.psh_gram_matrix(f_const, np.array([0.1, 0.4]), list(np.eye(2)), cfg.h_fd)
        worst = max(worst, float(np.max(np.abs(gram))))
        # harmonic saddle: zero matrix as well (fails positivity)
        f_saddle = forms.ScalarField(2, lambda u: float(u[0] ** 2 - u[1] ** 2),
                                     grad=lambda u: np.array([2.0 * u[0], -2.0 * u[1]]))
        gram = forms.psh_gram_matrix(f_saddle, np.array([0.2, 0.3]), list(np.eye(2)), cfg.h_fd)
        worst = max(worst, float(np.max(np.abs(gram))))
        # genuinely indefinite on two complex lines
        f_ind = forms.ScalarField(
            4, lambda u: 0.25 * (u[0] ** 2 + u[1] ** 2) - 0.25 * (u[2] ** 2 + u[3] ** 2),
            grad=lambda u: 0.5 * np.array([u[0], u[1], -u[2], -u[3]]))
        gram = forms.psh_gram_matrix(f_ind, 0.1 * np.ones(4), list(np.eye(4)), cfg.h_fd)
        eig = np.linalg.eigvalsh(0.5 * (gram + gram.T))
        if not (eig.min() < -0.5 and eig.max() > 0.5):
            worst = max(worst, 1.0)
        return worst, 4, {}

    checks.append(run_check(
        "plurisubharmonic-metric",
        "-d(df o J)(U, J V) is positive definite for the round quarter-square "
        "potential and degenerate or indefinite for harmonic ones",
        ["psh_gram_matrix"], 1e-6, psh))

    def contact_volume_sminus1():
        rng = check_rng(cfg.seed, "volume-sminus1")
        alpha = surgery.alpha_model_form(1, 2)
        # positive ambient orientation pairs the coordinates (x1,y1,...,z1,w1,...)
        pair_order = [0, 1, 2, 4, 3, 5]  # block layout x|y|z(2)|w(2) reordered
        worst = -math.inf
        vol_min = math.inf
        for _ in range(30):
            pt = surgery.random_s_minus1_point(rng, 1, 2)
            frame = surgery.s_minus1_tangent_frame(pt)
            # flip one frame vector so that (Liouville direction, frame) is a
            # positive ambient basis: the volume's sign is then intrinsic
            full = np.column_stack([surgery.liouville_X(pt).as_array()] + list(frame))
            if np.linalg.det(full[pair_order, :]) < 0:
                frame[-1] = -frame[-1]
            vol = forms.contact_volume(alpha, pt.as_array(), frame, cfg.h_fd)
            vol_min = min(vol_min, vol)
            worst = max(worst, cfg.tol("positivity_floor") - vol)
        return max(worst, 0.0), 30, {"min_volume": vol_min}

    checks.append(run_check(
        "hypersurface-contact-volume",
        "alpha wedge (d alpha)^n is nowhere zero on tangent frames of the "
        "|w|^2 = 1 hypersurface",
        ["contact_volume", "alpha_s_minus1_eval"], 0.0, contact_volume_sminus1))

    def membership():
        profile = HandleProfile(0.05)
        config = SurgeryConfig(epsilon=cfg.epsilon, delta=0.05)
        rng = check_rng(cfg.seed, "membership")
        worst = 0.0
        origin = ModelPoint(np.zeros(1), np.zeros(1), np.zeros(2), np.zeros(2))
        if surgery.handle_membership(origin, config, profile) is not False:
            worst = 1.0
        far = ModelPoint(np.zeros(1), np.zeros(1), np.array([3.0, 0.0]), np.zeros(2))
        if surgery.handle_membership(far, config, profile) is not False:
            worst = 1.0
        hits = 0
        pts = surgery.sample_s1_points(rng, 10, 1, 2, profile, rho2_max=1.8)
        for row in pts:
            pt = ModelPoint.from_array(row, 1, 2)
            if surgery.handle_membership(pt, config, profile) is True:
                hits += 1
        if hits < 8:
            worst = 1.0
        return worst, 12, {"surface_hits": hits}

    checks.append(run_check(
        "handle-membership-oracle",
        "flow conditions: backward reach of the gluing collar and forward "
        "reach of the surgered hypersurface",
        ["handle_membership"], 0.0, membership))

    def fd_order():
        # halving the step must cut the central-difference Jacobian error ~4x
        def func(u):
            return np.array([math.sin(u[0]) * u[1] ** 2, math.exp(0.3 * u[0] - u[1])])

        def jac(u):
            return np.array([
                [math.cos(u[0]) * u[1] ** 2, 2.0 * u[1] * math.sin(u[0])],
                [0.3 * math.exp(0.3 * u[0] - u[1]), -math.exp(0.3 * u[0] - u[1])],
            ])

        x = np.array([0.4, 0.7])
        errs = []
        for h in (1e-3, 5e-4):
            errs.append(float(np.max(np.abs(forms.fd_jacobian(func, x, h) - jac(x)))))
        factor = errs[0] / errs[1]
        worst = 0.0 if 3.0 <= factor <= 5.0 else abs(factor - 4.0)
        return worst, 2, {"factor": factor}

    checks.append(run_check(
        "finite-difference-order",
        "central-difference Jacobians converge at second order against the analytic one",
        [], 0.0, fd_order))

    return checks

# ===========================================================================
# monodromy suite
# ===========================================================================

def suite_monodromy(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []
    eps = cfg.epsilon
    profile = HandleProfile(0.05)
    config = SurgeryConfig(epsilon=eps, delta=0.05)
    flow_cfg = IntegratorConfig(step=cfg.flow_step, max_time=2.0, event_tol=1e-12)

    def pre_surgery():
        rng = check_rng(cfg.seed, "pre-surgery")
        worst = 0.0
        for _ in range(50):
            nzw = int(rng.choice(cfg.page_blocks))
            start = mono.admissible_start(rng, nzw, eps, 0.05)
            dec_in = mono.PageDecomposition.of(start, -eps)
            out = mono.pre_surgery_monodromy(start, eps, flow_cfg)
            dec_out = mono.PageDecomposition.of(out, +eps)
            worst = max(worst, float(np.max(np.abs(dec_out.w - dec_in.w))),
                        float(np.max(np.abs(dec_out.r - dec_in.r))))
        return worst, 50, {}

    checks.append(run_check(
        "pre-surgery-trivial",
        "Reeb transport over page-time 2*eps keeps the (w, r) page decomposition fixed",
        ["pre_surgery_monodromy", "flow_until_event"], cfg.tol("pre_surgery"), pre_surgery))

    def pipeline():
        worst = 0.0
        worst_matrix = 0.0
        worst_wnorm = 0.0
        total = 0
        for nzw in cfg.page_blocks:
            rng = check_rng(cfg.seed, f"pipeline-{nzw}")
            for _ in range(cfg.n_monodromy):
                start = mono.admissible_start(rng, nzw, eps, profile.delta)
                res = mono.post_surgery_pipeline(start, config, profile, flow_cfg)
                worst = max(worst, res.residuals["closed_vs_pipeline"])
                worst_wnorm = max(worst_wnorm, abs(
                    float(np.linalg.norm(res.closed_form_point.w)) - 1.0))
                tw = mono.recognize_dehn_twist(res, eps)
                worst_matrix = max(worst_matrix, tw.matrix_residual, tw.circle_defect)
            total += cfg.n_monodromy
        details = {"matrix_residual": worst_matrix, "wnorm_defect": worst_wnorm}
        if worst_matrix > cfg.tol("twist_matrix"):
            worst = max(worst, 1.0)
        if worst_wnorm > 1e-12:
            worst = max(worst, 1.0)
        return worst, total, details

    checks.append(run_check(
        "pipeline-vs-closed-form",
        "limit transfer + page flow + inverse transfer reproduces "
        "(z, w + 2 eps z/|z|^2), which the block circle matrix decomposes",
        ["post_surgery_pipeline", "post_surgery_closed_form", "recognize_dehn_twist",
         "limit_transfer_to_s1", "flow_until_event"],
        cfg.tol("pipeline_vs_closed"), pipeline))

    def worked_point():
        start = mono.build_start(np.array([1.0, 0.0]), np.array([0.0, 0.5]), 0.1)
        conf = SurgeryConfig(epsilon=0.1, delta=0.05)
        res = mono.post_surgery_pipeline(start, conf, HandleProfile(0.05), flow_cfg)
        w_out = res.closed_form_point.w
        frozen = np.array([0.923077, 0.384615])
        worst = float(np.max(np.abs(w_out - frozen)))
        tw = mono.recognize_dehn_twist(res, 0.1)
        worst = max(worst, abs(-tw.cos_g - 0.923077))
        return worst, 1, {"w_out": [float(v) for v in w_out],
                          "minus_cos_g": -tw.cos_g, "sin_g": tw.sin_g}

    checks.append(run_check(
        "worked-page-point",
        "the page point with w = (1,0), r = (0,1/2), eps = 1/10 lands on "
        "w = (0.923077, 0.384615) with matching circle functions",
        ["post_surgery_closed_form", "recognize_dehn_twist"], 1e-6, worked_point))

    def twist_tail():
        # far from the surgered sphere the transport displacement shrinks to 2*eps/|r|
        w = np.array([1.0, 0.0])
        r_norm = 1000.0 * eps
        start = mono.build_start(w, np.array([0.0, r_norm]), eps)
        out = mono.post_surgery_closed_form(start, eps)
        displacement = float(np.max(np.abs(out.w - w)))
        worst = 0.0 if displacement < 3e-3 else displacement
        # |r| = eps gives the quarter-circle matrix (0, 1/|r|; -|r|, 0)
        start2 = mono.build_start(w, np.array([0.0, eps]), eps)
        res2 = mono.post_surgery_pipeline(start2, config, profile, flow_cfg)
        tw = mono.recognize_dehn_twist(res2, eps)
        worst = max(worst, abs(tw.cos_g), abs(tw.sin_g - 1.0))
        return worst, 2, {"far_displacement": displacement}

    checks.append(run_check(
        "twist-angle-extremes",
        "the recognized angle passes through the quarter circle at |r| = eps "
        "and the transport approaches the identity for |r| >> eps",
        ["recognize_dehn_twist", "post_surgery_closed_form"], 1e-9, twist_tail))

    def page_speed():
        rng = check_rng(cfg.seed, "page-speed")
        worst = 0.0
        for _ in range(20):
            start = mono.admissible_start(rng, 2, eps, profile.delta)
            on_s1 = surgery.limit_transfer_to_s1(start, profile)
            fld = surgery.handle_hamiltonian_field(0, 2, profile)
            ev = flows.page_event(0, 2)
            traj = flows.flow_until_event(fld, on_s1.as_array(), ev, +eps, flow_cfg)
            worst = max(worst, mono.page_speed_residual(traj, 0, 2, eps))
        return worst, 20, {}

    checks.append(run_check(
        "page-speed-law",
        "along the flat-piece page flow the page value grows as -eps + 2s",
        ["flow_until_event", "theta_page"], cfg.tol("page_speed"), page_speed))

    def transfer_theta():
        rng = check_rng(cfg.seed, "transfer-theta")
        worst = 0.0
        for _ in range(100):
            start = mono.admissible_start(rng, 3, eps, profile.delta)
            out = surgery.limit_transfer_to_s1(start, profile)
            worst = max(worst, abs(out.theta() - start.theta()))
        # frozen arithmetic image of z = (-0.1, 0.5), w = (1, 0)
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([-0.1, 0.5]),
                        np.array([1.0, 0.0]))
        out = surgery.limit_transfer_to_s1(pt, profile)
        frozen_defect = max(
            float(np.max(np.abs(out.z - np.array([-0.196116, 0.980581])))),
            float(np.max(np.abs(out.w - np.array([0.509902, 0.0])))))
        # the frozen image is quoted to six decimals
        worst = max(worst, max(0.0, frozen_defect - 1e-6))
        return worst, 101, {}

    checks.append(run_check(
        "transfer-preserves-page",
        "the infinite-speed transfer (z/|z|, |z| w) keeps z.w fixed exactly",
        ["limit_transfer_to_s1", "theta_page"], cfg.tol("transfer_theta"), transfer_theta))

    def finite_transfer():
        rng = check_rng(cfg.seed, "finite-transfer")
        worst = 0.0
        for _ in range(10):
            start = mono.admissible_start(rng, 2, eps, profile.delta)
            closed = surgery.transfer_to_s1_finite_a(start, 1000.0, profile)
            fld = surgery.liouville_a_field(0, 2, 1000.0)
            ev = flows.level_event(0, 2, profile.delta)
            cfg_i = IntegratorConfig(step=1e-5, max_time=0.5, event_tol=1e-13)
            traj = flows.flow_until_event(fld, start.as_array(), ev, 0.0, cfg_i)
            if traj.event is None:
                worst = max(worst, 1.0)
                continue
            worst = max(worst, float(np.max(np.abs(traj.event[2] - closed.as_array()))))
        # already on the surgered hypersurface: zero transfer time
        pts = surgery.sample_s1_points(check_rng(cfg.seed, "ft2"), 3, 0, 2, profile)
        for row in pts:
            pt = ModelPoint.from_array(row, 0, 2)
            if float(np.linalg.norm(pt.z)) == 0.0:
                continue
            out = surgery.transfer_to_s1_finite_a(pt, 50.0, profile)
            worst = max(worst, float(np.max(np.abs(out.as_array() - row))))
        return worst, 13, {}

    checks.append(run_check(
        "finite-speed-transfer",
        "the closed-form ((1+a)z, -aw) transfer agrees with event-detected "
        "integration of the same field and fixes points already on the level set",
        ["transfer_to_s1_finite_a", "flow_until_event"], 1e-8, finite_transfer))

    def a_convergence():
        rng = check_rng(cfg.seed, "a-conv")
        start = mono.admissible_start(rng, 2, eps, profile.delta)
        errs = mono.a_convergence_scan(start, list(cfg.a_values), config, profile, flow_cfg)
        ordered = [errs[float(a)] for a in cfg.a_values]
        monotone = all(ordered[i + 1] < ordered[i] for i in range(len(ordered) - 1))
        worst = 0.0 if monotone else 1.0
        return worst, len(cfg.a_values), {"errors": {str(a): errs[float(a)] for a in cfg.a_values}}

    checks.append(run_check(
        "finite-speed-convergence",
        "transfer error against the infinite-speed limit decreases monotonically in a",
        ["transfer_to_s1_finite_a", "post_surgery_pipeline"], 0.0, a_convergence))

    def window_fit():
        rng = check_rng(cfg.seed, "window")
        weps = cfg.window_epsilon
        wconf = SurgeryConfig(epsilon=weps, delta=0.05)
        fits = {}
        worst = 0.0
        for nzw in (2, 3):
            devs = mono.delta_deviation_scan(rng, list(cfg.window_deltas),
                                             cfg.n_window, nzw, wconf, flow_cfg)
            slope = mono.fit_log_slope(list(devs), list(devs.values()))
            cs = {str(d): devs[d] / d for d in devs}
            fits[str(nzw)] = {"slope": slope, "fitted_C": cs,
                              "deviations": {str(d): devs[d] for d in devs}}
            if not cfg.tol("window_exponent_low") <= slope <= cfg.tol("window_exponent_high"):
                worst = max(worst, abs(slope - 1.0))
        return worst, 2 * cfg.n_window * len(cfg.window_deltas), fits

    checks.append(run_check(
        "smoothing-window-bound",
        "pipeline-vs-closed-form deviation for starts inside the smoothing "
        "window shrinks linearly with the smoothing width",
        ["post_surgery_pipeline", "limit_transfer_to_s1"], 0.0, window_fit))

    def flow_order():
        # quartic error decay against the closed-form linear flow
        pt = ModelPoint(np.zeros(0), np.zeros(0), np.array([0.3, -0.2]),
                        np.array([0.7, 0.4]))
        fld = surgery.liouville_field(0, 2)
        t_final = 1.0
        exact = np.concatenate([pt.z * math.exp(2.0 * t_final),
                                pt.w * math.exp(-t_final)])
        errs = []
        for step in (0.02, 0.01):
            cfg_i = IntegratorConfig(step=step, max_time=2.0)
            out = flows.flow_fixed_time(fld, pt.as_array(), t_final, cfg_i)
            errs.append(float(np.max(np.abs(out - exact))))
        factor = errs[0] / errs[1]
        worst = 0.0 if factor >= 8.0 else 8.0 - factor
        return worst, 2, {"factor": factor, "errors": errs}

    checks.append(run_check(
        "integrator-order",
        "halving the step cuts the endpoint error of the classical scheme by >= 8",
        ["flow_fixed_time"], 0.0, flow_order))

    def flow_invariants():
        rng = check_rng(cfg.seed, "flow-invariants")
        worst = 0.0
        # Reeb flow keeps alpha(R) = 1 and |w|^2 = 1 over time 1
        alpha = surgery.alpha_model_form(0, 2)
        fld = surgery.reeb_field(0, 2)
        cfg_i = IntegratorConfig(step=cfg.flow_step, max_time=2.0, projection="unit_w")
        for _ in range(5):
            start = surgery.random_s_minus1_point(rng, 0, 2)
            traj = flows.flow_record(fld, start.as_array(), 1.0, cfg_i)
            for row in traj.points[:: max(1, len(traj.points) // 20)]:
                pt = ModelPoint.from_array(row, 0, 2)
                worst = max(worst, abs(float(pt.w @ pt.w) - 1.0))
                worst = max(worst, abs(alpha(row, surgery.reeb_s_minus1(pt).as_array()) - 1.0))
        # Hamiltonian page flow preserves the level value
        profile_l = HandleProfile(0.1)
        fld_h = surgery.handle_hamiltonian_field(0, 2, profile_l)
        cfg_h = IntegratorConfig(step=cfg.flow_step, max_time=2.0,
                                 projection="level_f", level_delta=0.1)
        pts = surgery.sample_s1_points(check_rng(cfg.seed, "fi2"), 5, 0, 2, profile_l)
        for row in pts:
            out = flows.flow_fixed_time(fld_h, row, 0.25, cfg_h)
            worst = max(worst, abs(surgery.f_eval(ModelPoint.from_array(out, 0, 2),
                                                  profile_l)))
        return worst, 10, {}

    checks.append(run_check(
        "flow-invariants",
        "Reeb flow preserves the collar constraint and unit pairing; the page "
        "Hamiltonian flow preserves the handle level set after projection",
        ["flow_fixed_time", "reeb_s_minus1"], 1e-8, flow_invariants))

    def word_composition():
        from contactlab.sphere import SpherePoint
        worst = 0.0
        base = mono.ChartPoint("A", SpherePoint(np.array([1.0, 0.0, 0.0]),
                                                np.array([0.0, 0.4, 0.2])))
        out = mono.composed_monodromy_word(base, [], config)
        worst = max(worst, float(np.max(np.abs(out.point.as_array()
                                               - base.point.as_array()))))
        # one letter equals the recognized block matrix action
        one = mono.composed_monodromy_word(base, [("A", 1)], config)
        r_in = base.point.p
        r2 = float(r_in @ r_in)
        denom = r2 + eps ** 2
        cos_g = (eps ** 2 - r2) / denom
        sin_g = 2.0 * eps * math.sqrt(r2) / denom
        w_pred = -cos_g * base.point.q + (sin_g / math.sqrt(r2)) * r_in
        r_pred = -sin_g * math.sqrt(r2) * base.point.q - cos_g * r_in
        worst = max(worst, float(np.max(np.abs(one.point.q - w_pred))),
                    float(np.max(np.abs(one.point.p - r_pred))))
        # cyclic rotation acts by conjugation at the orbit level
        word = [("A", 1), ("B", 1), ("A", -1), ("A", 1)]
        rotated = [word[-1]] + word[:-1]
        last = word[-1]
        m_word = mono.composed_monodromy_word(base, word, config)
        transported = mono.ChartPoint(base.chart, mono.twist_letter_action(
            base.point, eps, -last[1]))
        m_rot = mono.composed_monodromy_word(transported, rotated, config)
        m_expected = mono.twist_letter_action(m_word.point, eps, -last[1])
        worst = max(worst, float(np.max(np.abs(m_rot.point.as_array()
                                               - m_expected.as_array()))))
        return worst, 3, {}

    checks.append(run_check(
        "twist-word-composition",
        "words of chart twists compose associatively and cyclic rotation "
        "conjugates the composed map",
        ["composed_monodromy_word", "recognize_dehn_twist"], 1e-8, word_composition))

    return checks


# ===========================================================================
# giroux suite
# ===========================================================================

def _giroux_batched_eval(domain, candidate, samples: Array,
                         flow_cfg: IntegratorConfig, fd: float = 1e-5):
    """h, dh, psi_hat and its Jacobian over the samples from one vectorized
    integration of the correcting flow (center plus FD neighbors)."""
    m, d = samples.shape
    variants = [samples]
    for i in range(d):
        e = np.zeros(d)
        e[i] = fd
        variants.append(samples + e)
        variants.append(samples - e)
    allpts = np.vstack(variants)
    ev = ob.giroux_flow_batch(domain, candidate, allpts, flow_cfg)
    h = ev.h.reshape(2 * d + 1, m)
    ph = ev.psi_hat.reshape(2 * d + 1, m, d)
    dh = np.stack([(h[1 + 2 * i] - h[2 + 2 * i]) / (2.0 * fd)
                   for i in range(d)], axis=1)
    jac = np.stack([(ph[1 + 2 * i] - ph[2 + 2 * i]) / (2.0 * fd)
                    for i in range(d)], axis=2)
    nu = np.einsum("mi,mik->mk", domain.lam_batch(ph[0]), jac) \
        - domain.lam_batch(samples)
    return {"h": h[0], "dh": dh, "psi_hat": ph[0], "jac": jac, "nu": nu}


def _giroux_case_residuals(cfg: ScenarioConfig, domain, candidate, name: str,
                           n_samples: int):
    """Residual of the exactness identity over a batched sample set, plus the
    agreement of the batched fast path with the pointwise operation."""
    rng = check_rng(cfg.seed, name)
    flow_cfg = IntegratorConfig(step=cfg.giroux_flow_step, max_time=2.0)
    result = ob.giroux_correction(domain, candidate, flow_cfg, rng=rng,
                                  closedness_samples=8)
    samples = domain.sample(rng, n_samples)
    ev = _giroux_batched_eval(domain, candidate, samples, flow_cfg)
    worst = float(np.max(np.abs(ev["nu"] + ev["dh"])))
    # the vectorized path must agree with the pointwise operation
    agree = 0.0
    for idx in range(min(3, n_samples)):
        x = samples[idx]
        agree = max(agree, abs(result.h(x) - ev["h"][idx]))
        agree = max(agree, float(np.max(np.abs(result.psi_hat(x) - ev["psi_hat"][idx]))))
    # d(lambda) is preserved by the corrected map
    b_mat = domain.dlambda_const
    pull = np.einsum("mia,ij,mjb->mab", ev["jac"], b_mat, ev["jac"])
    dl_resid = float(np.max(np.abs(pull - b_mat[None])))
    return result, worst, agree, dl_resid


def suite_giroux(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []
    domain = ob.standard_disk_domain(1.0)
    flow_cfg = IntegratorConfig(step=cfg.giroux_flow_step, max_time=2.0)

    def identity_case():
        candidate = ob.SymplectomorphismCandidate(forms.identity_map(2),
                                                  np.array([[-0.1, 0.1]] * 2))
        rng = check_rng(cfg.seed, "giroux-id")
        result = ob.giroux_correction(domain, candidate, flow_cfg, rng=rng)
        samples = domain.sample(rng, 40)
        worst = 0.0
        for x in samples:
            worst = max(worst, float(np.max(np.abs(result.psi_hat(x) - x))))
            worst = max(worst, abs(result.h(x)))
        return worst, 40, {}

    checks.append(run_check(
        "exactness-correction-identity",
        "the identity needs no correction: zero field, constant primitive",
        ["giroux_correction"], 1e-9, identity_case))

    def twist_case():
        candidate = ob.radial_twist_map(0.8, 0.8)
        result, worst, agree, dl = _giroux_case_residuals(
            cfg, domain, candidate, "giroux-twist", cfg.n_giroux)
        if agree > 1e-7:
            worst = max(worst, agree)
        return worst, cfg.n_giroux, {"mu_closedness": result.mu_closedness,
                                     "cond_max": result.cond_max,
                                     "pointwise_agreement": agree,
                                     "dlambda_residual": dl}

    checks.append(run_check(
        "exactness-correction-twist",
        "after the correcting flow, the pullback of the primitive differs "
        "from it by an exact form: |psi_hat^* lambda - lambda + dh| small",
        ["giroux_correction"], cfg.tol("giroux_residual"), twist_case))

    def shear_case():
        candidate, h0 = ob.strip_shear_map(0.5, 0.8)
        result, worst, agree, dl = _giroux_case_residuals(
            cfg, domain, candidate, "giroux-shear", cfg.n_giroux)
        if agree > 1e-7:
            worst = max(worst, agree)
        # the map already satisfies psi^* lambda = lambda - d h0: the
        # line-integral primitive of its defect recovers h0 up to a constant
        rng = check_rng(cfg.seed, "giroux-shear-h0")

        def nu_psi(x, v):
            jac = candidate.mapping.jacobian(x)
            return domain.lam(candidate.mapping(x), jac @ v) - domain.lam(x, v)

        base = np.zeros(2)
        offsets = []
        for x in domain.sample(rng, 12):
            h_line = ob.line_integral_primitive(nu_psi, base, x, nodes=cfg.quad_nodes)
            offsets.append(h_line - h0(x))
        spread = float(np.max(offsets) - np.min(offsets))
        worst = max(worst, spread)
        return worst, cfg.n_giroux, {"h0_offset_spread": spread,
                                     "dlambda_residual": dl}

    checks.append(run_check(
        "exactness-correction-shear",
        "a map already satisfying the exactness identity has its known "
        "primitive recovered by line integration, up to an additive constant",
        ["giroux_correction"], cfg.tol("giroux_residual"), shear_case))

    def numeric_flow_case():
        candidate = ob.hamiltonian_bump_map(0.15, 0.8, step=0.01)
        result, worst, agree, dl = _giroux_case_residuals(
            cfg, domain, candidate, "giroux-bump", cfg.n_giroux_numeric)
        if agree > 1e-7:
            worst = max(worst, agree)
        return worst, cfg.n_giroux_numeric, {"mu_closedness": result.mu_closedness,
                                             "dlambda_residual": dl}

    checks.append(run_check(
        "exactness-correction-integrated-flow",
        "the correction also succeeds on a map built by integrating a "
        "compactly supported Hamiltonian field",
        ["giroux_correction"], cfg.tol("giroux_residual"), numeric_flow_case))

    def path_independence():
        candidate = ob.radial_twist_map(0.8, 0.8)
        rng = check_rng(cfg.seed, "giroux-path")
        base = domain.sample_box.mean(axis=1)
        targets = domain.sample(rng, 4)
        worst = 0.0
        for x in targets:
            # radial path and an axis-aligned dog-leg through (x0, base1)
            corner = np.array([x[0], base[1]])
            paths = ([(base, x)], [(base, corner), (corner, x)])
            quads = [ob.path_quadrature(segs, cfg.quad_nodes) for segs in paths]
            all_nodes = np.vstack([q[0] for q in quads] + [x[None, :]])
            ev = _giroux_batched_eval(domain, candidate, all_nodes, flow_cfg)
            rows, h_vals = ev["nu"], ev["h"]
            integrals = []
            offset = 0
            for nodes, weights, dirs in quads:
                chunk = rows[offset:offset + len(nodes)]
                integrals.append(-float(np.einsum("m,mi,mi->", weights, chunk, dirs)))
                offset += len(nodes)
            worst = max(worst, abs(integrals[0] - integrals[1]))
            worst = max(worst, abs(integrals[0] - h_vals[-1]))
        return worst, 4, {}

    checks.append(run_check(
        "primitive-path-independence",
        "the line-integral primitive agrees across independent paths and with "
        "the flow-quadrature primitive",
        ["giroux_correction"], cfg.tol("giroux_path"), path_independence))

    def support_case():
        candidate = ob.radial_twist_map(0.8, 0.8)
        boundary = np.array([[0.95, 0.9], [-0.95, 0.9], [0.95, -0.9], [0.9, 0.95]])
        ev = ob.giroux_flow_batch(domain, candidate, boundary, flow_cfg)
        worst = 0.0
        for x, img in zip(boundary, ev.psi_hat):
            worst = max(worst, float(np.max(np.abs(img - candidate.mapping(x)))))
        return worst, len(boundary), {}

    checks.append(run_check(
        "correction-fixes-support",
        "the correcting field vanishes with the pullback defect, so the "
        "corrected map equals the input outside its support box",
        ["giroux_correction", "pullback_eval"], 1e-8, support_case))

    def legendrian():
        rng = check_rng(cfg.seed, "legendrian")
        n = 2
        d = n + 1
        dim = 2 * d
        lam_can = sphere.canonical_one_form(dim)

        # exact perturbation lambda = lambda_can + d(xi) with a known potential
        cvec = np.array([0.3, -0.2, 0.4])

        def xi(x):
            q, p = x[:d], x[d:]
            return float((q @ cvec) * (1.0 + p @ p))

        def grad_xi(x):
            q, p = x[:d], x[d:]
            return np.concatenate([cvec * (1.0 + p @ p), 2.0 * (q @ cvec) * p])

        def lam_eval(x, v):
            return lam_can(x, v) + float(grad_xi(x) @ np.asarray(v, dtype=float))

        lam = forms.KFormOracle(1, dim, lam_eval)
        real = ob.legendrian_realization(n, lam, rho_in=0.3, rho_out=0.8,
                                         nodes=cfg.quad_nodes, path_check=2)
        worst = 0.0
        # the potential is recovered up to a constant
        offsets = []
        for _ in range(8):
            sp = sphere.random_sphere_point(rng, n, 0.0, 0.25)
            x = np.concatenate([sp.q, sp.p])
            offsets.append(real.g(sp.q, sp.p) - xi(x))
        worst = max(worst, float(np.max(offsets) - np.min(offsets)))
        # corrected primitive vanishes on zero-section tangents
        for _ in range(8):
            sp = sphere.random_sphere_point(rng, n, 0.0, 0.0)
            x = np.concatenate([sp.q, np.zeros(d)])
            for u in sphere._orthonormal_complement(sp.q):
                v = np.concatenate([u, np.zeros(d)])
                worst = max(worst, abs(real.lam_tilde(x, v)))
                worst = max(worst, abs(real.contact_form(np.concatenate([[0.0], x]),
                                                         np.concatenate([[0.0], v]))))
        # the correction is exact: d lambda_tilde = d lambda on tangent frames
        for _ in range(4):
            sp = sphere.random_sphere_point(rng, n, 0.05, 0.2)
            x = np.concatenate([sp.q, sp.p])
            frame = sphere.tangent_frame(sp)
            for i in range(0, len(frame), 2):
                for j in range(i + 1, len(frame), 3):
                    lhs = forms.exterior_derivative(real.lam_tilde, x,
                                                    [frame[i], frame[j]], 1e-4)
                    rhs = forms.exterior_derivative(lam, x, [frame[i], frame[j]], 1e-4)
                    worst = max(worst, abs(lhs - rhs))
        return worst, 20, {}

    checks.append(run_check(
        "legendrian-realization",
        "subtracting d(rho g) makes the zero section Legendrian for dt + "
        "corrected primitive without changing the symplectic form",
        ["legendrian_realization"], 1e-5, legendrian))

    return checks


# ===========================================================================
# binding suite
# ===========================================================================

def _circle_boundary_form():
    return forms.one_form(1, lambda u: np.array([1.0]), lambda u: np.zeros((1, 1)))


def _s3_boundary_form():
    def coeffs(u):
        return np.array([-u[1], u[0], -u[3], u[2]])

    def jac(u):
        j = np.zeros((4, 4))
        j[0, 1] = -1.0
        j[1, 0] = 1.0
        j[2, 3] = -1.0
        j[3, 2] = 1.0
        return j

    return forms.one_form(4, coeffs, jac)


def suite_binding(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []
    profile = BindingProfile()

    def torus_volume():
        rng = check_rng(cfg.seed, "torus-volume")
        domain = ob.standard_disk_domain(1.0)
        alpha = ob.mapping_torus_form(domain.lam)
        worst = -math.inf
        vol_min = math.inf
        frame = list(np.eye(3))
        for _ in range(100):
            x = np.append(domain.sample(rng, 1)[0], rng.uniform(0, 2 * math.pi))
            vol = forms.contact_volume(alpha, x, frame, cfg.h_fd)
            vol_min = min(vol_min, vol)
            worst = max(worst, cfg.tol("positivity_floor") - vol)
        # frozen values: the circle direction pairs to 1, page vectors with
        # lambda(v) = 0 pair to 0
        x = np.array([0.3, 0.0, 1.0])
        worst = max(worst, abs(alpha(x, np.array([0.0, 0.0, 1.0])) - 1.0))
        worst = max(worst, abs(alpha(x, np.array([1.0, 0.0, 0.0]))))
        return max(worst, 0.0), 102, {"min_volume": vol_min}

    checks.append(run_check(
        "mapping-torus-volume",
        "lambda + dphi has positive contact volume over the page and pairs "
        "the circle direction to one",
        ["mapping_torus_form", "contact_volume"], 0.0, torus_volume))

    def glue_pullback():
        rng = check_rng(cfg.seed, "glue")
        lam_b = _circle_boundary_form()
        collar = ob.collar_form(lam_b)
        glue = ob.glue_map(1)
        worst = 0.0
        for _ in range(40):
            u = np.array([rng.uniform(0, 2 * math.pi),
                          rng.uniform(0.5001, 0.9999),
                          rng.uniform(0, 2 * math.pi)])
            r = u[1]
            for v in np.eye(3):
                lhs = forms.pullback_eval(glue, collar, u, [v])
                rhs = math.exp(0.5 - r) * v[0] + v[2]
                worst = max(worst, abs(lhs - rhs))
        # frozen values of the collar coordinate
        worst = max(worst, abs(glue(np.array([0.3, 0.5, 1.0]))[0]))
        worst = max(worst, abs(glue(np.array([0.3, 0.9, 1.0]))[0] + 0.4))
        return worst, 42, {}

    checks.append(run_check(
        "glue-map-pullback",
        "(x, r, phi) -> (1/2 - r, x, phi) pulls exp(s) boundary-form + dphi "
        "back to exp(1/2 - r) boundary-form + dphi",
        ["glue_map", "pullback_eval"], cfg.tol("glue_overlap"), glue_pullback))

    def overlap_agreement():
        rng = check_rng(cfg.seed, "overlap")
        lam_b = _circle_boundary_form()
        collar = ob.collar_form(lam_b)
        glue = ob.glue_map(1)
        beta = ob.binding_form_polar(profile, lam_b)
        worst = 0.0
        for _ in range(60):
            u = np.array([rng.uniform(0, 2 * math.pi),
                          rng.uniform(profile.matching_radius, 0.9999),
                          rng.uniform(0, 2 * math.pi)])
            for v in np.eye(3):
                worst = max(worst, abs(forms.pullback_eval(glue, collar, u, [v])
                                       - beta(u, v)))
        # binding-side frozen values: the phi coefficient saturates at 1,
        # and at the axis the boundary form is scaled by h1(0)
        u = np.array([0.7, profile.matching_radius + 0.1, 0.2])
        worst = max(worst, abs(beta(u, np.array([0.0, 0.0, 1.0])) - 1.0))
        u0 = np.array([0.7, 0.0, 0.2])
        worst = max(worst, abs(beta(u0, np.array([1.0, 0.0, 0.0])) - profile.h1(0.0)))
        return worst, 62, {}

    checks.append(run_check(
        "collar-binding-overlap",
        "the binding form equals the glued collar form on the matching annulus",
        ["binding_form_polar", "glue_map"], 1e-14, overlap_agreement))

    def binding_volume_s1():
        lam_b = _circle_boundary_form()
        beta = ob.binding_form_polar(profile, lam_b)
        worst = -math.inf
        vol_min = math.inf
        frame = list(np.eye(3))
        count = 0
        for r in np.linspace(0.01, 0.95, 48):
            for theta in (0.0, 2.1):
                u = np.array([theta, r, 0.7])
                vol = forms.contact_volume(beta, u, frame, cfg.h_fd)
                pred = profile.h1(r) * profile.h2_d(r) - profile.h1_d(r) * profile.h2(r)
                worst = max(worst, cfg.tol("positivity_floor") - vol,
                            abs(vol - pred) - 1e-7)
                vol_min = min(vol_min, vol)
                count += 1
        return max(worst, 0.0), count, {"min_volume": vol_min}

    checks.append(run_check(
        "binding-volume-circle",
        "h1 lambda + h2 dphi has contact volume h1 h2' - h1' h2 > 0 across "
        "the collar radii for the circle binding",
        ["binding_form_polar", "contact_volume"], 0.0, binding_volume_s1))

    def binding_volume_s3():
        rng = check_rng(cfg.seed, "binding-s3")
        lam_b = _s3_boundary_form()
        beta = ob.binding_form_polar(profile, lam_b)
        worst = -math.inf
        vol_min = math.inf
        count = 0
        for r in np.linspace(0.05, 0.95, 10):
            for _ in range(4):
                q = rng.standard_normal(4)
                q /= np.linalg.norm(q)
                tangent = sphere._orthonormal_complement(q)
                # orient the 3-frame so the boundary form is positive
                lam_vol = forms.contact_volume(lam_b, q, tangent, cfg.h_fd)
                if lam_vol < 0:
                    tangent[2] = -tangent[2]
                frame = [np.concatenate([t, [0.0, 0.0]]) for t in tangent]
                frame.append(np.eye(6)[4])
                frame.append(np.eye(6)[5])
                u = np.concatenate([q, [r, 1.3]])
                vol = forms.contact_volume(beta, u, frame, cfg.h_fd)
                vol_min = min(vol_min, vol)
                worst = max(worst, cfg.tol("positivity_floor") - vol)
                count += 1
        return max(worst, 0.0), count, {"min_volume": vol_min}

    checks.append(run_check(
        "binding-volume-three-sphere",
        "the collar form over the standard contact three-sphere binding has "
        "positive contact volume on the radii grid",
        ["binding_form_polar", "contact_volume"], 0.0, binding_volume_s3))

    def cartesian_smooth():
        lam_b = _circle_boundary_form()
        beta_c = ob.binding_form_cartesian(profile, lam_b)
        worst = 0.0
        # coefficients near the axis: beta = h1(0) dtheta + (u dv - v du),
        # compared across the axis by even extension
        for ang in np.linspace(0.0, 2 * math.pi, 9):
            d = np.array([math.cos(ang), math.sin(ang)])
            for rad in (1e-3, 1e-4):
                plus = np.array([0.4, rad * d[0], rad * d[1]])
                minus = np.array([0.4, -rad * d[0], -rad * d[1]])
                for v in np.eye(3):
                    worst = max(worst, abs(beta_c(plus, v) + beta_c(minus, v)
                                           - 2.0 * beta_c(np.array([0.4, 0.0, 0.0]), v)))
        # the phi-part coefficient ratio h2/r^2 is exactly 1 near the axis
        worst = max(worst, abs(profile.h2_over_r2(0.0) - 1.0))
        worst = max(worst, abs(profile.h2_over_r2(1e-6) - 1.0))
        return worst, 38, {}

    checks.append(run_check(
        "binding-smooth-across-axis",
        "in Cartesian disk coordinates the collar form extends evenly and "
        "smoothly across the binding axis (h2/r^2 -> 1)",
        ["binding_form_polar"], 1e-6, cartesian_smooth))

    def profile_invariants():
        rs = np.linspace(1e-3, 0.999, 2000)
        h1 = np.array([profile.h1(r) for r in rs])
        h1d = np.array([profile.h1_d(r) for r in rs])
        h2 = np.array([profile.h2(r) for r in rs])
        h2d = np.array([profile.h2_d(r) for r in rs])
        worst = 0.0
        if h1.min() <= 0:
            worst = 1.0
        worst = max(worst, float(h1d.max()))  # non-increasing
        worst = max(worst, float((-h2d).max()))  # non-decreasing
        # exponential matching beyond the matching radius
        for r in (profile.matching_radius, 0.8, 0.95):
            worst = max(worst, abs(profile.h1(r) - math.exp(0.5 - r)))
        for r in (profile.matching_radius, 0.9):
            worst = max(worst, abs(profile.h2(r) - 1.0))
        for r in (0.05, 0.2):
            worst = max(worst, abs(profile.h2(r) - r * r))
        pos = h1 * h2d - h1d * h2
        worst = max(worst, cfg.tol("positivity_floor") - float(pos.min()))
        return max(worst, 0.0), len(rs), {"min_positivity": float(pos.min())}

    checks.append(run_check(
        "binding-profile-shape",
        "h1 > 0 drops exponentially past the matching radius, h2 rises "
        "quadratically near the axis and saturates at 1, and the contact "
        "positivity combination stays positive",
        ["binding_form_polar"], 0.0, profile_invariants))

    def transversality():
        worst = 0.0
        # model open book: R = circle direction, page derivative 1
        domain = ob.standard_disk_domain(1.0)
        alpha = ob.mapping_torus_form(domain.lam)
        theta = forms.ScalarField(3, lambda u: float(u[2]),
                                  grad=lambda u: np.array([0.0, 0.0, 1.0]))
        rng = check_rng(cfg.seed, "adapted")
        samples = []
        for _ in range(10):
            x = np.append(domain.sample(rng, 1)[0], rng.uniform(0, 2 * math.pi))
            samples.append((x, list(np.eye(3))))
        val = ob.reeb_transversality_check(alpha, theta, samples, cfg.h_fd)
        worst = max(worst, abs(val - 1.0))
        # constructed failure: the Reeb field is tangent to the pages of y
        alpha_bad = forms.one_form(3, lambda u: np.array([0.0, u[0], 1.0]),
                                   lambda u: np.array([[0.0, 0.0, 0.0],
                                                       [1.0, 0.0, 0.0],
                                                       [0.0, 0.0, 0.0]]))
        theta_bad = forms.ScalarField(3, lambda u: float(u[1]),
                                      grad=lambda u: np.array([0.0, 1.0, 0.0]))
        val_bad = ob.reeb_transversality_check(alpha_bad, theta_bad, samples, cfg.h_fd)
        worst = max(worst, abs(val_bad))
        # the surgery model page function against its Reeb field
        alpha_model = surgery.alpha_model_form(0, 2)
        theta_model = forms.ScalarField(
            4, lambda u: float(u[:2] @ u[2:]),
            grad=lambda u: np.concatenate([u[2:], u[:2]]))
        samples_m = []
        for _ in range(10):
            pt = surgery.random_s_minus1_point(rng, 0, 2)
            samples_m.append((pt.as_array(), surgery.s_minus1_tangent_frame(pt)))
        val_m = ob.reeb_transversality_check(alpha_model, theta_model, samples_m, cfg.h_fd)
        worst = max(worst, abs(val_m - 1.0))
        return worst, 30, {"model": val_m, "bad": val_bad}

    checks.append(run_check(
        "reeb-page-transversality",
        "the Reeb derivative of the page function is 1 for the model open "
        "book and for the surgery hypersurface, and 0 for the constructed "
        "non-adapted form",
        ["reeb_transversality_check"], 1e-6, transversality))

    return checks


# ===========================================================================
# moves suite
# ===========================================================================

def _sample_page(rng) -> mv.OpenBookDesc:
    handles = tuple(mv.Handle(f"h{i}", int(rng.integers(1, 3)), "std+D2")
                    for i in range(int(rng.integers(1, 4))))
    spheres = tuple(mv.LagrangianSphere(f"B{i}", (handles[int(rng.integers(0, len(handles)))].label,))
                    for i in range(int(rng.integers(1, 4))))
    disks = tuple(mv.DiskBoundary(f"d{i}", f"t{i}")
                  for i in range(int(rng.integers(1, 3))))
    page = mv.AbstractPage(3, handles, spheres, disks)
    word = tuple((spheres[int(rng.integers(0, len(spheres)))].label,
                  int(rng.choice([-1, 1])))
                 for _ in range(int(rng.integers(0, 4))))
    return mv.OpenBookDesc(page, mv.reduce_word(word))


def _random_chain(rng, desc: mv.OpenBookDesc, length: int) -> mv.OpenBookDesc:
    cur = desc
    for _ in range(length):
        options = []
        if cur.word:
            options.extend(["rot", "rotb"])
        if cur.page.spheres:
            options.append("conj")
        if cur.page.disks:
            options.append("stab")
        if mv.destabilize(cur) is not None:
            options.append("destab")
        op = options[int(rng.integers(0, len(options)))]
        if op == "rot":
            cur = mv.cyclic_rotate(cur)
        elif op == "rotb":
            cur = mv.cyclic_rotate_back(cur)
        elif op == "conj":
            sph = cur.page.spheres[int(rng.integers(0, len(cur.page.spheres)))]
            cur = mv.conjugate(cur, sph.label, int(rng.choice([-1, 1])))
        elif op == "stab":
            disk = cur.page.disks[int(rng.integers(0, len(cur.page.disks)))]
            cur = mv.stabilize(cur, disk.label)
        else:
            cur = mv.destabilize(cur)
    return cur


GOLDEN_DESCRIPTOR = """page 3
handle h(d1) index 3 framing t1+core
handle h0 index 1 framing std+D2
sphere B0 supports h0
sphere S(d1) supports h(d1) disk d1 tag t1
disk d2 tag t2
word B0^+1 S(d1)^+1
"""


def suite_moves(cfg: ScenarioConfig) -> list[CheckRecord]:
    checks = []

    def roundtrips():
        rng = np.random.default_rng([cfg.seed, 101])
        bad = 0
        for _ in range(200):
            desc = _sample_page(rng)
            if desc.page.disks:
                disk = desc.page.disks[0].label
                stab = mv.stabilize(desc, disk)
                if mv.destabilize(stab) != desc:
                    bad += 1
            if desc.page.spheres:
                sph = desc.page.spheres[0].label
                conj = mv.conjugate(mv.conjugate(desc, sph, 1), sph, -1)
                if conj != desc:
                    bad += 1
            if len(desc.word) >= 2:
                first, last = desc.word[0], desc.word[-1]
                cyclically_reduced = not (first[0] == last[0] and first[1] == -last[1])
                # a cyclically reducible word legitimately shrinks under
                # rotation plus free reduction, so only reduced words invert
                if cyclically_reduced and mv.cyclic_rotate_back(mv.cyclic_rotate(desc)) != desc:
                    bad += 1
        return float(bad), 200, {}

    checks.append(run_check(
        "move-roundtrips",
        "attach-then-cancel, conjugate-then-unconjugate and rotate-then-unrotate "
        "are the identity on descriptors",
        ["stabilize", "destabilize", "conjugate", "cyclic_rotate"], 0.0, roundtrips))

    def word_examples():
        page = mv.AbstractPage(
            3,
            (mv.Handle("h0", 1, "std+D2"), mv.Handle("h1", 2, "std+D2")),
            (mv.LagrangianSphere("A", ("h0",)), mv.LagrangianSphere("B", ("h1",))),
            (mv.DiskBoundary("d1", "t1"),))
        bad = 0
        d = mv.OpenBookDesc(page, (("A", 1), ("B", 1)))
        if mv.cyclic_rotate(d).word != (("B", 1), ("A", 1)):
            bad += 1
        single = mv.OpenBookDesc(page, (("A", 1),))
        if mv.conjugate(single, "B").word != (("B", -1), ("A", 1), ("B", 1)):
            bad += 1
        if mv.conjugate(single, "A").word != (("A", 1),):
            bad += 1
        if mv.cyclic_rotate(mv.OpenBookDesc(page, ())).word != ():
            bad += 1
        attached = mv.subcritical_attach(d, "h9", 1, "fr")
        if attached.word != d.word:
            bad += 1
        if len(attached.page.handles) != 3:
            bad += 1
        if not mv.is_positive_word(d.word) or mv.is_positive_word((("A", -1),)):
            bad += 1
        return float(bad), 7, {}

    checks.append(run_check(
        "word-move-values",
        "rotation, conjugation with free reduction, and page attachment with "
        "untouched word behave on the frozen examples",
        ["cyclic_rotate", "conjugate", "subcritical_attach"], 0.0, word_examples))

    def chains():
        rng = np.random.default_rng([cfg.seed, 202])
        base = _sample_page(rng)
        unknowns = 0
        for _ in range(cfg.n_chains):
            desc = _sample_page(rng)
            target = _random_chain(rng, desc, int(rng.integers(1, 7)))
            if mv.equivalent_up_to_moves(desc, target, depth=cfg.search_depth) is not True:
                unknowns += 1
        return float(unknowns), cfg.n_chains, {}

    checks.append(run_check(
        "move-chain-recognition",
        "randomized chains of at most six sound moves are recognized by the "
        "bounded bidirectional search",
        ["cyclic_rotate", "conjugate", "stabilize", "destabilize"], 0.0, chains))

    def non_connected():
        rng = np.random.default_rng([cfg.seed, 303])
        false_positives = 0
        for i in range(cfg.n_nonconnected):
            desc = _sample_page(rng)
            extra = mv.Handle(f"hx{i}", 1, "std+D2")
            page2 = mv.AbstractPage(desc.page.half_dim,
                                    desc.page.handles + (extra,),
                                    desc.page.spheres, desc.page.disks)
            other = mv.OpenBookDesc(page2, desc.word)
            if mv.equivalent_up_to_moves(desc, other, depth=4) is True:
                false_positives += 1
        return float(false_positives), cfg.n_nonconnected, {}

    checks.append(run_check(
        "no-false-equivalence",
        "pages with different subcritical inventories are never declared "
        "equivalent: the three-valued answer stays at unknown",
        ["subcritical_attach", "cyclic_rotate"], 0.0, non_connected))

    def golden():
        page = mv.AbstractPage(
            3,
            (mv.Handle("h0", 1, "std+D2"),),
            (mv.LagrangianSphere("B0", ("h0",)),),
            (mv.DiskBoundary("d1", "t1"), mv.DiskBoundary("d2", "t2")))
        desc = mv.stabilize(mv.OpenBookDesc(page, (("B0", 1),)), "d1")
        text = mv.to_text(desc)
        bad = 0.0
        if text != GOLDEN_DESCRIPTOR:
            bad = 1.0
        if mv.from_text(text) != desc:
            bad = 1.0
        return bad, 1, {"text": text}

    checks.append(run_check(
        "descriptor-golden-text",
        "the canonical descriptor serialization matches the frozen golden "
        "file and round-trips",
        ["stabilize"], 0.0, golden))

    return checks


# ===========================================================================
# registry and runner
# ===========================================================================

SUITES = {
    "dehn-twist": suite_dehn_twist,
    "weinstein-strictness": suite_weinstein,
    "monodromy": suite_monodromy,
    "giroux": suite_giroux,
    "binding": suite_binding,
    "moves": suite_moves,
}


def run_suite(cfg: ScenarioConfig) -> VerificationReport:
    """Execute the configured suite (or all of them) into one report."""
    if cfg.suite == "all":
        names = ["dehn-twist", "weinstein-strictness", "monodromy", "giroux",
                 "binding", "moves"]
    elif cfg.suite in SUITES:
        names = [cfg.suite]
    else:
        raise ValueError(f"unknown suite {cfg.suite!r}; pick from "
                         f"{sorted(SUITES) + ['all']}")
    checks = []
    for name in names:
        checks.extend(SUITES[name](cfg))
    echo = cfg.as_dict()
    echo.pop("out_dir", None)  # a write location must not affect report bytes
    return VerificationReport(suite=cfg.suite, config=echo, checks=checks)
