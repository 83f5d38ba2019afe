"""The embedded model of the sphere's cotangent bundle and its twists.

Points are pairs (q, p) in R^{n+1} x R^{n+1} subject to q.q = 1 and q.p = 0.
The canonical 1-form is p dq, the normalized geodesic flow is the rotation

    sigma_t(q, p) = (cos t * q + sin t / |p| * p,  -|p| sin t * q + cos t * p),

and the generalized right-handed Dehn twist applies sigma through the angle
profile g1(|p|), extended across p = 0 by (-1)^k * q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .forms import KFormOracle, SmoothMap, one_form
from .profiles import DehnTwistProfile

Array = np.ndarray

CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class SpherePoint:
    """A point of the embedded cotangent bundle: unit base vector q, fiber covector p."""

    q: Array
    p: Array

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if q.shape != p.shape or q.ndim != 1:
            raise ValueError("q and p must be 1-d arrays of equal length")
        if abs(q @ q - 1.0) >= CONSTRAINT_TOL:
            raise ValueError(f"|q.q - 1| = {abs(q @ q - 1.0):.2e} violates the unit constraint")
        if abs(q @ p) >= CONSTRAINT_TOL:
            raise ValueError(f"|q.p| = {abs(q @ p):.2e} violates orthogonality")

    @property
    def n(self) -> int:
        return self.q.size - 1

    def as_array(self) -> Array:
        return np.concatenate([self.q, self.p])

    @staticmethod
    def from_array(u: Array) -> "SpherePoint":
        u = np.asarray(u, dtype=float)
        d = u.size // 2
        return SpherePoint(u[:d], u[d:])


def project_to_bundle(q_raw: Array, p_raw: Array) -> SpherePoint:
    """Retract raw coordinates onto the constraint set: normalize q, project p off q."""
    q_raw = np.asarray(q_raw, dtype=float)
    p_raw = np.asarray(p_raw, dtype=float)
    norm = np.linalg.norm(q_raw)
    if norm == 0.0:
        raise ValueError("cannot project from q = 0")
    q = q_raw / norm
    p = p_raw - (p_raw @ q) * q
    return SpherePoint(q, p)


def canonical_form_eval(pt: SpherePoint, v: Array) -> float:
    """p dq on a tangent vector v = (v_q, v_p)."""
    v = np.asarray(v, dtype=float)
    d = pt.q.size
    return float(pt.p @ v[:d])


def canonical_one_form(dim_total: int) -> KFormOracle:
    """p dq as an ambient 1-form on R^{2(n+1)}, with analytic derivative oracle."""
    d = dim_total // 2

    def coeffs(u):
        return np.concatenate([u[d:], np.zeros(d)])

    def coeffs_jac(u):
        j = np.zeros((dim_total, dim_total))
        j[:d, d:] = np.eye(d)
        return j

    return one_form(dim_total, coeffs, coeffs_jac)


def geodesic_flow(pt: SpherePoint, t: float) -> SpherePoint:
    """Normalized geodesic flow for time t; requires p != 0, preserves |p|."""
    norm = np.linalg.norm(pt.p)
    if norm == 0.0:
        raise ValueError("normalization undefined at p = 0")
    c, s = math.cos(t), math.sin(t)
    q_new = c * pt.q + (s / norm) * pt.p
    p_new = -norm * s * pt.q + c * pt.p
    return SpherePoint(q_new, p_new)


def dehn_twist(pt: SpherePoint, profile: DehnTwistProfile) -> SpherePoint:
    """Generalized right-handed Dehn twist: sigma_{g1(|p|)}, and (-1)^k q at p = 0."""
    norm = np.linalg.norm(pt.p)
    if norm == 0.0:
        sign = -1.0 if profile.k % 2 else 1.0
        return SpherePoint(sign * pt.q, pt.p)
    if norm >= profile.p0:
        return pt
    return geodesic_flow(pt, profile.g1(norm))


def dehn_twist_batch(points_q: Array, points_p: Array, profile: DehnTwistProfile):
    """Twist a batch of row pairs through the compiled kernel."""
    return _kernels.dehn_twist_batch(np.ascontiguousarray(points_q, dtype=float),
                                     np.ascontiguousarray(points_p, dtype=float),
                                     profile.p0, profile.k)


def dehn_twist_map(profile: DehnTwistProfile, n: int) -> SmoothMap:
    """The twist as a map of the ambient R^{2(n+1)}.

    The matrix formula is applied verbatim off the constraint set; along
    constraint-tangent directions its derivative agrees with the intrinsic
    tangent map, which is what the pullback checks differentiate.
    """
    d = n + 1

    def func(u):
        q, p = u[:d], u[d:]
        norm = np.linalg.norm(p)
        if norm == 0.0:
            sign = -1.0 if profile.k % 2 else 1.0
            return np.concatenate([sign * q, p])
        if norm >= profile.p0:
            return u.copy()
        t = profile.g1(norm)
        c, s = math.cos(t), math.sin(t)
        return np.concatenate([c * q + (s / norm) * p, -norm * s * q + c * p])

    return SmoothMap(2 * d, 2 * d, func)


def tangent_frame(pt: SpherePoint) -> list[Array]:
    """A 2n-vector basis of the constraint tangent space at (q, p).

    Horizontal lifts (u, -(p.u) q) and vertical vectors (0, u) over an
    orthonormal basis u of the hyperplane q-perp.
    """
    d = pt.q.size
    basis = _orthonormal_complement(pt.q)
    frame = []
    for u in basis:
        frame.append(np.concatenate([u, -(pt.p @ u) * pt.q]))
    for u in basis:
        frame.append(np.concatenate([np.zeros(d), u]))
    return frame


def _orthonormal_complement(q: Array) -> list[Array]:
    d = q.size
    mat = np.eye(d) - np.outer(q, q)
    # orthonormalize the projected coordinate directions
    vecs = []
    for col in range(d):
        v = mat[:, col]
        for u in vecs:
            v = v - (v @ u) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            vecs.append(v / norm)
        if len(vecs) == d - 1:
            break
    return vecs


def random_sphere_point(rng: np.random.Generator, n: int,
                        p_low: float = 0.0, p_high: float = 2.0) -> SpherePoint:
    """Uniform random direction on the sphere with fiber norm in [p_low, p_high)."""
    q = rng.standard_normal(n + 1)
    q /= np.linalg.norm(q)
    v = rng.standard_normal(n + 1)
    v -= (v @ q) * q
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        return random_sphere_point(rng, n, p_low, p_high)
    target = p_low + (p_high - p_low) * rng.random()
    return SpherePoint(q, v / norm * target)
