"""Open book assembly: mapping-torus and binding forms, gluing, exactness
correction of the monodromy, Lagrangian-to-Legendrian correction, and
Reeb/page transversality checks.

Product charts are flat: a mapping torus point is (sigma-coords..., phi), a
collar point is (s, boundary-coords..., phi), a binding point is
(boundary-coords..., r, phi) in polar or (boundary-coords..., u, v) in
Cartesian disk coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .flows import IntegratorConfig, _py_rk4_final
from .forms import (KFormOracle, ScalarField, SmoothMap, VectorFieldOracle,
                    exterior_derivative, one_form, pullback_eval)
from .profiles import BindingProfile, smoothstep
from .sphere import canonical_one_form

Array = np.ndarray


# ---------------------------------------------------------------------------
# domains and candidate symplectomorphisms
# ---------------------------------------------------------------------------

@dataclass
class BatchedMapOps:
    """Vectorized twins of a map: func (m,d)->(m,d), jac (m,d)->(m,d,d)."""

    func: Callable[[Array], Array]
    jac: Callable[[Array], Array]


@dataclass
class ExactSymplecticDomain:
    """A star-shaped coordinate patch with an exact symplectic primitive.

    ``lam_batch`` (coefficient rows for a batch of points) and
    ``dlambda_const`` (a constant coefficient matrix of d lambda) enable the
    vectorized fast path of the exactness-correction checks.
    """

    dim: int
    lam: KFormOracle
    sample_box: Array  # (dim, 2) bounds
    lam_batch: Optional[Callable[[Array], Array]] = None
    dlambda_const: Optional[Array] = None

    def __post_init__(self):
        self.sample_box = np.asarray(self.sample_box, dtype=float)
        if self.sample_box.shape != (self.dim, 2):
            raise ValueError("sample_box must be (dim, 2) bounds")

    def dlambda_matrix(self, x: Array, h_fd: float = 1e-5) -> Array:
        basis = np.eye(self.dim)
        mat = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                mat[i, j] = exterior_derivative(self.lam, x, [basis[i], basis[j]], h_fd)
                mat[j, i] = -mat[i, j]
        return mat

    def sample(self, rng: np.random.Generator, count: int) -> Array:
        lo, hi = self.sample_box[:, 0], self.sample_box[:, 1]
        return lo + (hi - lo) * rng.random((count, self.dim))

    def check_nondegenerate(self, rng: np.random.Generator, count: int = 20,
                            threshold: float = 1e-8) -> float:
        worst = math.inf
        for x in self.sample(rng, count):
            det = abs(np.linalg.det(self.dlambda_matrix(x)))
            worst = min(worst, det)
        if worst <= threshold:
            raise ValueError(f"d(lambda) degenerate on the sample box (min |det| = {worst:.2e})")
        return worst


def standard_disk_domain(half_width: float = 1.0) -> ExactSymplecticDomain:
    """R^2 with the rotational primitive (x dy - y dx)/2 of dx^dy."""
    lam = one_form(2, lambda u: 0.5 * np.array([-u[1], u[0]]),
                   lambda u: 0.5 * np.array([[0.0, -1.0], [1.0, 0.0]]))
    box = np.array([[-half_width, half_width], [-half_width, half_width]])
    return ExactSymplecticDomain(
        2, lam, box,
        lam_batch=lambda pts: 0.5 * np.stack([-pts[:, 1], pts[:, 0]], axis=1),
        dlambda_const=np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass
class SymplectomorphismCandidate:
    """A compactly supported map expected to preserve d(lambda)."""

    mapping: SmoothMap
    support_box: Array
    batched: Optional[BatchedMapOps] = None

    def __post_init__(self):
        self.support_box = np.asarray(self.support_box, dtype=float)

    def identity_defect_outside(self, samples: Array) -> float:
        """max |psi(x) - x| over samples outside the support box."""
        worst = 0.0
        for x in np.atleast_2d(samples):
            inside = np.all((x >= self.support_box[:, 0]) & (x <= self.support_box[:, 1]))
            if not inside:
                worst = max(worst, float(np.max(np.abs(self.mapping(x) - x))))
        return worst


def _rk4_batch(field: Callable[[Array], Array], states: Array, t: float,
               step: float) -> Array:
    """Vectorized fixed-step RK4 over rows of ``states``."""
    u = np.array(states, dtype=float)
    remaining = abs(t)
    sgn = 1.0 if t >= 0 else -1.0
    while remaining > 1e-15:
        h = min(step, remaining)
        k1 = field(u)
        k2 = field(u + 0.5 * sgn * h * k1)
        k3 = field(u + 0.5 * sgn * h * k2)
        k4 = field(u + sgn * h * k3)
        u = u + (sgn * h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        remaining -= h
    return u


def radial_twist_map(amplitude: float, support_radius: float) -> SymplectomorphismCandidate:
    """Rotation by the radius-dependent angle a(|u|^2): an exact, closed-form,
    compactly supported symplectomorphism of the standard plane."""
    r02 = support_radius ** 2

    # the fifth power keeps the angle C^4 at the support circle, which the
    # Gauss-Legendre line integrals downstream rely on
    def angle_np(s):
        return amplitude * np.clip(1.0 - s / r02, 0.0, None) ** 5

    def angle_d_np(s):
        return -5.0 * amplitude * np.clip(1.0 - s / r02, 0.0, None) ** 4 / r02

    def func_batch(pts):
        s = np.einsum("mi,mi->m", pts, pts)
        t = angle_np(s)
        c, sn = np.cos(t), np.sin(t)
        return np.stack([c * pts[:, 0] - sn * pts[:, 1],
                         sn * pts[:, 0] + c * pts[:, 1]], axis=1)

    def jac_batch(pts):
        s = np.einsum("mi,mi->m", pts, pts)
        t = angle_np(s)
        c, sn = np.cos(t), np.sin(t)
        rot = np.empty((len(pts), 2, 2))
        rot[:, 0, 0] = c
        rot[:, 0, 1] = -sn
        rot[:, 1, 0] = sn
        rot[:, 1, 1] = c
        rot_d = np.empty_like(rot)
        rot_d[:, 0, 0] = -sn
        rot_d[:, 0, 1] = -c
        rot_d[:, 1, 0] = c
        rot_d[:, 1, 1] = -sn
        rotated = np.einsum("mij,mj->mi", rot_d, pts)
        return rot + 2.0 * angle_d_np(s)[:, None, None] * \
            np.einsum("mi,mj->mij", rotated, pts)

    mapping = SmoothMap(2, 2, lambda u: func_batch(u[None, :])[0],
                        jac=lambda u: jac_batch(u[None, :])[0])
    box = np.array([[-support_radius, support_radius]] * 2)
    return SymplectomorphismCandidate(mapping, box,
                                      batched=BatchedMapOps(func_batch, jac_batch))


def strip_shear_map(amplitude: float, half_width: float):
    """Closed-form shear (x, y) -> (x, y - c(x)) with a polynomial bump c.

    The time-1 flow of the x-dependent Hamiltonian; it satisfies
    psi^* lambda = lambda - d(h0) for the returned explicit primitive h0.
    """
    r0 = half_width

    def c_np(x):
        return amplitude * np.clip(1.0 - (x / r0) ** 2, 0.0, None) ** 4

    def c_d_np(x):
        return -8.0 * amplitude * x / r0 ** 2 * np.clip(1.0 - (x / r0) ** 2, 0.0, None) ** 3

    def c_int(x):
        # integral of c from 0 to x, saturating outside the strip
        t = np.clip(x / r0, -1.0, 1.0)
        poly = t - (4.0 / 3.0) * t ** 3 + (6.0 / 5.0) * t ** 5 \
            - (4.0 / 7.0) * t ** 7 + t ** 9 / 9.0
        return amplitude * r0 * poly

    def func_batch(pts):
        return np.stack([pts[:, 0], pts[:, 1] - c_np(pts[:, 0])], axis=1)

    def jac_batch(pts):
        jac = np.zeros((len(pts), 2, 2))
        jac[:, 0, 0] = 1.0
        jac[:, 1, 1] = 1.0
        jac[:, 1, 0] = -c_d_np(pts[:, 0])
        return jac

    def h0(u):
        # psi^* lambda - lambda = ((c - x c')/2) dx = -d h0
        return -(float(c_int(u[0])) - 0.5 * u[0] * float(c_np(u[0])))

    mapping = SmoothMap(2, 2, lambda u: func_batch(u[None, :])[0],
                        jac=lambda u: jac_batch(u[None, :])[0])
    box = np.array([[-half_width, half_width], [-50.0, 50.0]])
    candidate = SymplectomorphismCandidate(mapping, box,
                                           batched=BatchedMapOps(func_batch, jac_batch))
    return candidate, h0


def hamiltonian_bump_map(amplitude: float, support_radius: float,
                         step: float = 0.01) -> SymplectomorphismCandidate:
    """Time-1 flow of the Hamiltonian field of a compactly supported bump on
    the plane; d(lambda)-preserving by construction (up to integrator error).

    The Jacobian rides along as the variational flow, so both the map and its
    derivative come from one integration.
    """
    r02 = support_radius ** 2

    def x_h_batch(pts):
        s = np.einsum("mi,mi->m", pts, pts)
        coeff = -8.0 * amplitude / r02 * np.clip(1.0 - s / r02, 0.0, None) ** 3
        # X_H = J grad H with grad H = coeff * u
        return np.stack([coeff * pts[:, 1], -coeff * pts[:, 0]], axis=1)

    def dx_h_batch(pts):
        # Hess H = 2 A q'(s) I + 4 A q''(s) u u^T with q(s) = (1 - s/r0^2)^4
        s = np.einsum("mi,mi->m", pts, pts)
        base = np.clip(1.0 - s / r02, 0.0, None)
        q_d = -4.0 * base ** 3 / r02
        q_dd = 12.0 * base ** 2 / r02 ** 2
        hess = 2.0 * amplitude * q_d[:, None, None] * np.eye(2)[None] \
            + 4.0 * amplitude * q_dd[:, None, None] * np.einsum("mi,mj->mij", pts, pts)
        j_std = np.array([[0.0, 1.0], [-1.0, 0.0]])
        return np.einsum("ij,mjk->mik", j_std, hess)

    def func_batch(pts):
        return _rk4_batch(x_h_batch, pts, 1.0, step)

    def jac_batch(pts):
        m = len(pts)
        state = np.concatenate([pts, np.tile(np.eye(2).reshape(1, 4), (m, 1))], axis=1)

        def field(u):
            x = u[:, :2]
            jac = u[:, 2:].reshape(m, 2, 2)
            dx = dx_h_batch(x)
            return np.concatenate([x_h_batch(x),
                                   np.einsum("mij,mjk->mik", dx, jac).reshape(m, 4)],
                                  axis=1)

        out = _rk4_batch(field, state, 1.0, step)
        return out[:, 2:].reshape(m, 2, 2)

    mapping = SmoothMap(2, 2, lambda u: func_batch(u[None, :])[0],
                        jac=lambda u: jac_batch(u[None, :])[0])
    box = np.array([[-support_radius, support_radius]] * 2)
    return SymplectomorphismCandidate(mapping, box,
                                      batched=BatchedMapOps(func_batch, jac_batch))


# ---------------------------------------------------------------------------
# mapping torus, gluing, binding
# ---------------------------------------------------------------------------

def mapping_torus_form(lam: KFormOracle) -> KFormOracle:
    """lambda + dphi on (sigma-coords..., phi)."""
    dim = lam.dim + 1

    def ev(u, v):
        return lam(u[:-1], np.asarray(v, dtype=float)[:-1]) + float(v[-1])

    form = KFormOracle(1, dim, ev)
    if lam.d_oracle is not None:
        form.d_oracle = lambda u, a, b: lam.d_oracle(
            u[:-1], np.asarray(a, dtype=float)[:-1], np.asarray(b, dtype=float)[:-1])
    return form


def glue_map(boundary_dim: int) -> SmoothMap:
    """(x, r, phi) -> (1/2 - r, x, phi): the annulus-to-collar identification."""
    d = boundary_dim

    def func(u):
        out = np.empty(d + 2)
        out[0] = 0.5 - u[d]
        out[1:d + 1] = u[:d]
        out[d + 1] = u[d + 1]
        return out

    def jac(u):
        j = np.zeros((d + 2, d + 2))
        j[0, d] = -1.0
        for i in range(d):
            j[1 + i, i] = 1.0
        j[d + 1, d + 1] = 1.0
        return j

    return SmoothMap(d + 2, d + 2, func, jac=jac)


def collar_form(lam_boundary: KFormOracle) -> KFormOracle:
    """exp(s) * lambda_boundary + dphi on (s, x..., phi)."""
    d = lam_boundary.dim
    dim = d + 2

    def ev(u, v):
        v = np.asarray(v, dtype=float)
        return math.exp(u[0]) * lam_boundary(u[1:d + 1], v[1:d + 1]) + float(v[-1])

    return KFormOracle(1, dim, ev)


def binding_form_polar(profile: BindingProfile, lam_boundary: KFormOracle) -> KFormOracle:
    """h1(r) lambda_boundary + h2(r) dphi on (x..., r, phi), 0 <= r < 1."""
    d = lam_boundary.dim
    dim = d + 2

    def ev(u, v):
        r = float(u[d])
        if not 0.0 <= r < 1.0:
            raise ValueError(f"radial coordinate {r} outside [0, 1)")
        v = np.asarray(v, dtype=float)
        return profile.h1(r) * lam_boundary(u[:d], v[:d]) + profile.h2(r) * float(v[-1])

    def d_oracle(u, a, b):
        r = float(u[d])
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        val = profile.h1_d(r) * (a[d] * lam_boundary(u[:d], b[:d])
                                 - b[d] * lam_boundary(u[:d], a[:d]))
        val += profile.h1(r) * exterior_derivative(lam_boundary, u[:d], [a[:d], b[:d]])
        val += profile.h2_d(r) * (a[d] * b[-1] - b[d] * a[-1])
        return val

    form = KFormOracle(1, dim, ev)
    form.d_oracle = d_oracle
    return form


def binding_form_cartesian(profile: BindingProfile, lam_boundary: KFormOracle) -> KFormOracle:
    """h1 lambda_boundary + (h2(r)/r^2)(u dv - v du) on (x..., u, v).

    The quadratic rise of h2 makes the disk factor smooth across r = 0; this
    chart is what the even-extension smoothness test differentiates.
    """
    d = lam_boundary.dim
    dim = d + 2

    def ev(u, v):
        uu, vv = float(u[d]), float(u[d + 1])
        r = math.hypot(uu, vv)
        v = np.asarray(v, dtype=float)
        ratio = profile.h2_over_r2(r)
        return profile.h1(r) * lam_boundary(u[:d], v[:d]) \
            + ratio * (uu * v[d + 1] - vv * v[d])

    return KFormOracle(1, dim, ev)


# ---------------------------------------------------------------------------
# exactness correction of the monodromy
# ---------------------------------------------------------------------------

@dataclass
class GirouxResult:
    psi_hat: SmoothMap
    h: Callable[[Array], float]
    y_field: VectorFieldOracle
    mu_closedness: float
    cond_max: float
    base_point: Array

    def nu_eval(self, lam: KFormOracle, x: Array, v: Array) -> float:
        """(psi_hat^* lambda - lambda)(x)(v)."""
        return pullback_eval(self.psi_hat, lam, x, [v]) - lam(x, v)


def giroux_correction(domain: ExactSymplecticDomain,
                      psi: SymplectomorphismCandidate,
                      flow_cfg: Optional[IntegratorConfig] = None,
                      base_point: Optional[Array] = None,
                      closedness_samples: int = 12,
                      closedness_tol: float = 1e-6,
                      rng: Optional[np.random.Generator] = None,
                      quad_nodes: int = 64) -> GirouxResult:
    """Isotope psi to psi_hat with psi_hat^* lambda = lambda - dh.

    The correcting field Y solves i_Y d(lambda) = -(psi^* lambda - lambda)
    pointwise; psi_hat = psi o (time-1 flow of Y).  The primitive h is
    produced by quadrature of the contraction i_Y lambda along the Y-flow
    (normalized to vanish at the base point), which differentiates to
    -(psi_hat^* lambda - lambda) when the correction succeeds; the identity
    is a *checked* output, not an assumption.
    """
    if flow_cfg is None:
        flow_cfg = IntegratorConfig(step=1e-2, max_time=2.0)
    if rng is None:
        rng = np.random.default_rng(7)
    if base_point is None:
        base_point = domain.sample_box.mean(axis=1)
    base_point = np.asarray(base_point, dtype=float)
    lam = domain.lam

    def mu_vec(x):
        jac = psi.mapping.jacobian(x)
        image = psi.mapping(x)
        basis = np.eye(domain.dim)
        return np.array([lam(image, jac @ e) - lam(x, e) for e in basis])

    mu_form = one_form(domain.dim, mu_vec)

    # precondition: mu must be closed
    worst_dmu = 0.0
    basis = np.eye(domain.dim)
    for x in domain.sample(rng, closedness_samples):
        for i in range(domain.dim):
            for j in range(i + 1, domain.dim):
                worst_dmu = max(worst_dmu, abs(exterior_derivative(
                    mu_form, x, [basis[i], basis[j]], 1e-4)))
    if worst_dmu > closedness_tol:
        raise ValueError(f"psi^* lambda - lambda is not closed (residual {worst_dmu:.2e}); "
                         "the input does not preserve d(lambda)")

    cond_tracker = {"max": 0.0}

    def y_func(x):
        b = domain.dlambda_matrix(x)
        cond_tracker["max"] = max(cond_tracker["max"], float(np.linalg.cond(b)))
        return np.linalg.solve(b.T, -mu_vec(x))

    y_field = VectorFieldOracle(domain.dim, y_func)

    def flow_time1(x):
        return _py_rk4_final(y_field, np.asarray(x, dtype=float), 1.0, flow_cfg)

    psi_hat = SmoothMap(domain.dim, domain.dim,
                        lambda x: psi.mapping(flow_time1(x)),
                        h_fd=psi.mapping.h_fd)

    # primitive of psi_hat^* lambda - lambda by quadrature along the Y-flow:
    # augment the flow with  sdot = lambda(Y)  and read off the end value.
    def augmented(state):
        x = state[:-1]
        y = y_func(x)
        return np.append(y, lam(x, y))

    aug_field = VectorFieldOracle(domain.dim + 1, augmented)

    def h_raw(x):
        state = np.append(np.asarray(x, dtype=float), 0.0)
        return float(_py_rk4_final(aug_field, state, 1.0, flow_cfg)[-1])

    h_base = h_raw(base_point)

    def h(x):
        return -(h_raw(x) - h_base)

    return GirouxResult(psi_hat=psi_hat, h=h, y_field=y_field,
                        mu_closedness=worst_dmu, cond_max=cond_tracker["max"],
                        base_point=base_point)


def make_batched_y(domain: ExactSymplecticDomain,
                   psi: SymplectomorphismCandidate) -> Callable[[Array], Array]:
    """Vectorized correcting field: rows Y with i_Y d(lambda) = -(psi^*lambda - lambda).

    Requires the domain's constant d(lambda) matrix and the candidate's
    batched ops; agreement with the pointwise solve is a tested property.
    """
    if psi.batched is None or domain.lam_batch is None or domain.dlambda_const is None:
        raise ValueError("batched correction needs batched map ops and a "
                         "constant-coefficient d(lambda)")
    solve_mat = np.linalg.inv(domain.dlambda_const.T)

    def y_batch(pts):
        img = psi.batched.func(pts)
        jac = psi.batched.jac(pts)
        mu = np.einsum("mi,mik->mk", domain.lam_batch(img), jac) \
            - domain.lam_batch(pts)
        return -(mu @ solve_mat.T)

    return y_batch


@dataclass
class GirouxBatchEval:
    """Primitive values and corrected images over a batch of points."""

    points: Array     # (m, d)
    h: Array          # (m,) normalized to vanish at the base point
    psi_hat: Array    # (m, d)


def giroux_flow_batch(domain: ExactSymplecticDomain,
                      psi: SymplectomorphismCandidate, points: Array,
                      flow_cfg: IntegratorConfig,
                      base_point: Optional[Array] = None) -> GirouxBatchEval:
    """One vectorized integration of the correcting flow with its quadrature
    variable, for every requested point at once."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if base_point is None:
        base_point = domain.sample_box.mean(axis=1)
    y_batch = make_batched_y(domain, psi)
    d = domain.dim
    stacked = np.vstack([points, base_point[None, :]])
    aug = np.concatenate([stacked, np.zeros((len(stacked), 1))], axis=1)

    def field(u):
        x = u[:, :d]
        y = y_batch(x)
        s_dot = np.einsum("mi,mi->m", domain.lam_batch(x), y)
        return np.concatenate([y, s_dot[:, None]], axis=1)

    out = _rk4_batch(field, aug, 1.0, flow_cfg.step)
    h_raw = out[:, d]
    h = -(h_raw[:-1] - h_raw[-1])
    psi_hat = psi.batched.func(out[:-1, :d])
    return GirouxBatchEval(points=points, h=h, psi_hat=psi_hat)


def path_quadrature(segments: Sequence[tuple[Array, Array]], nodes: int,
                    panels: int = 4):
    """Composite Gauss-Legendre rule along straight segments.

    Returns (points, weights, directions); a line integral of a 1-form nu is
    then sum_i weights[i] * nu(points[i])(directions[i]).  Panels keep the
    rule accurate across the finitely-smooth joints of bump profiles.
    """
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    pts, weights, dirs = [], [], []
    for a, b in segments:
        a = np.asarray(a, dtype=float)
        direction = np.asarray(b, dtype=float) - a
        for j in range(panels):
            lo = a + (j / panels) * direction
            for xi, wq in zip(gl_x, gl_w):
                t = 0.5 * (xi + 1.0)
                pts.append(lo + (t / panels) * direction)
                weights.append(0.5 * wq / panels)
                dirs.append(direction)
    return np.array(pts), np.array(weights), np.array(dirs)


def line_integral_primitive(nu: Callable[[Array, Array], float], base: Array,
                            x: Array, waypoints: Optional[Sequence[Array]] = None,
                            nodes: int = 48, panels: int = 4) -> float:
    """-(integral of the 1-form nu) along base -> waypoints... -> x, straight
    segments, composite Gauss-Legendre quadrature per segment."""
    pts = [np.asarray(base, dtype=float)]
    if waypoints is not None:
        pts.extend(np.asarray(w, dtype=float) for w in waypoints)
    pts.append(np.asarray(x, dtype=float))
    nodes_pts, weights, dirs = path_quadrature(list(zip(pts[:-1], pts[1:])),
                                               nodes, panels)
    total = 0.0
    for p, w, d in zip(nodes_pts, weights, dirs):
        total += w * nu(p, d)
    return -total


# ---------------------------------------------------------------------------
# Lagrangian sphere -> Legendrian realization over the sphere bundle
# ---------------------------------------------------------------------------

def _slerp(q0: Array, q1: Array, t: float) -> tuple[Array, Array]:
    """Great-circle interpolation on the unit sphere with velocity."""
    dot = float(np.clip(q0 @ q1, -1.0, 1.0))
    ang = math.acos(dot)
    if ang < 1e-12:
        return q0.copy(), np.zeros_like(q0)
    s = math.sin(ang)
    point = (math.sin((1.0 - t) * ang) * q0 + math.sin(t * ang) * q1) / s
    vel = ang * (-math.cos((1.0 - t) * ang) * q0 + math.cos(t * ang) * q1) / s
    return point, vel


@dataclass
class LegendrianRealization:
    lam_tilde: KFormOracle
    contact_form: KFormOracle
    g: Callable[[Array, Array], float]
    rho: Callable[[float], float]
    base_q: Array


def legendrian_realization(n: int, lam: KFormOracle,
                           rho_in: float = 0.3, rho_out: float = 0.8,
                           base_q: Optional[Array] = None,
                           nodes: int = 48,
                           path_check: int = 0,
                           path_tol: float = 1e-6) -> LegendrianRealization:
    """Correct a primitive on a sphere-bundle neighborhood so the zero section
    becomes Legendrian for dt + corrected form.

    Requires n > 1 so that every closed 1-form on the sphere is exact and the
    potential g of (lam - p dq) is recoverable by line integration.  Paths run
    along a great circle on the zero section and then straight up the fiber;
    with ``path_check`` > 0 the potential is re-integrated through detour
    waypoints at that many points and a mismatch (a closedness failure of
    lam - p dq) raises instead of silently returning a path-dependent g.
    """
    if n <= 1:
        raise ValueError("realization needs sphere dimension n > 1 "
                         "(closed 1-forms on the base must be exact)")
    d = n + 1
    dim = 2 * d
    if base_q is None:
        base_q = np.eye(d)[0]
    base_q = np.asarray(base_q, dtype=float)
    lam_can = canonical_one_form(dim)

    def mu(x, v):
        return lam(x, v) - lam_can(x, v)

    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)

    def _zero_section_leg(q_from: Array, q_to: Array) -> float:
        total = 0.0
        for xi, wi in zip(gl_x, gl_w):
            t = 0.5 * (xi + 1.0)
            point, vel = _slerp(q_from, q_to, t)
            x = np.concatenate([point, np.zeros(d)])
            v = np.concatenate([vel, np.zeros(d)])
            total += 0.5 * wi * mu(x, v)
        return total

    def g(q: Array, p: Array, waypoint: Optional[Array] = None) -> float:
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        # great circle(s) on the zero section from base_q to q, then straight
        # up the fiber from (q, 0) to (q, p)
        if waypoint is None:
            total = _zero_section_leg(base_q, q)
        else:
            total = _zero_section_leg(base_q, waypoint) + _zero_section_leg(waypoint, q)
        for xi, wi in zip(gl_x, gl_w):
            t = 0.5 * (xi + 1.0)
            x = np.concatenate([q, t * p])
            v = np.concatenate([np.zeros(d), p])
            total += 0.5 * wi * mu(x, v)
        return total

    if path_check > 0:
        from .sphere import SpherePoint, tangent_frame
        mu_form = KFormOracle(1, dim, mu)
        check_rng_local = np.random.default_rng(path_check)
        for _ in range(path_check):
            q = check_rng_local.standard_normal(d)
            q /= np.linalg.norm(q)
            p = check_rng_local.standard_normal(d) * 0.2
            p -= (p @ q) * q
            # detour on the zero section: sees base-direction defects
            waypoint = check_rng_local.standard_normal(d)
            waypoint /= np.linalg.norm(waypoint)
            gap = abs(g(q, p) - g(q, p, waypoint=waypoint))
            if gap > path_tol:
                raise ValueError(
                    f"path-dependence detected (potential differs by {gap:.2e} "
                    "across detours); lam - p dq is not closed on the neighborhood")
            # the differential of lam - p dq on bundle tangent pairs: sees
            # mixed base/fiber defects that zero-section detours cannot
            frame = tangent_frame(SpherePoint(q, p))
            x = np.concatenate([q, p])
            for i in range(len(frame)):
                for j in range(i + 1, len(frame)):
                    dmu = exterior_derivative(mu_form, x, [frame[i], frame[j]], 1e-5)
                    if abs(dmu) > max(path_tol, 1e-5):
                        raise ValueError(
                            f"path-dependence detected (d(lam - p dq) = {dmu:.2e} "
                            "on a tangent pair); the potential is ill-defined")

    def rho(r: float) -> float:
        if r <= rho_in:
            return 1.0
        if r >= rho_out:
            return 0.0
        return 1.0 - smoothstep((r - rho_in) / (rho_out - rho_in))

    def rho_d(r: float) -> float:
        if r <= rho_in or r >= rho_out:
            return 0.0
        h = 1e-6
        return (rho(r + h) - rho(r - h)) / (2.0 * h)

    def lam_tilde_eval(x, v):
        # d(rho g) = rho' d|p| g + rho dg with dg = mu on the neighborhood
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        q, p = x[:d], x[d:]
        r = float(np.linalg.norm(p))
        val = lam(x, v) - rho(r) * mu(x, v)
        rd = rho_d(r)
        if rd != 0.0 and r > 0.0:
            dnorm = float(p @ v[d:]) / r
            val -= rd * dnorm * g(q, p)
        return val

    lam_tilde = KFormOracle(1, dim, lam_tilde_eval)

    def contact_eval(u, v):
        return float(v[0]) + lam_tilde_eval(u[1:], np.asarray(v, dtype=float)[1:])

    contact = KFormOracle(1, dim + 1, contact_eval)
    return LegendrianRealization(lam_tilde=lam_tilde, contact_form=contact,
                                 g=g, rho=rho, base_q=base_q)


# ---------------------------------------------------------------------------
# adaptedness: Reeb transversality to the pages
# ---------------------------------------------------------------------------

def reeb_transversality_check(alpha: KFormOracle, theta: ScalarField,
                              samples: Sequence[tuple[Array, Sequence[Array]]],
                              h_fd: float = 1e-5) -> float:
    """min over samples of the Reeb derivative of the page function.

    Each sample is (point, tangent frame); the Reeb field is solved from
    alpha(R) = 1, i_R d(alpha) = 0 in the frame.  Positivity of the returned
    minimum is the adaptedness condition.
    """
    from .forms import reeb_coefficients

    worst = math.inf
    for pt, frame in samples:
        coeff = reeb_coefficients(alpha, pt, frame, h_fd)
        r_vec = sum(c * np.asarray(v, dtype=float) for c, v in zip(coeff, frame))
        grad = theta.gradient(pt)
        worst = min(worst, float(grad @ r_vec))
    return worst
