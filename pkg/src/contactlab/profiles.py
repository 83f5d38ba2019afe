"""Scalar shape functions for handles, twists and binding collars.

Every profile blends exact pieces (flat, linear, exponential) with quintic
polynomials so the result is C^2 across the joints.  The hot scalar kernels
live in :mod:`contactlab._kernels`; the dataclasses here are thin parameter
holders over them.  Transversality and contact positivity are *checked*
numerically by the test suites, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels as k

smoothstep = k.smoothstep
smoothstep_d = k.smoothstep_d


def hermite_quintic(t: float, v0: float, d0: float, s0: float,
                    v1: float, d1: float, s1: float) -> float:
    """Quintic Hermite on [0,1] with prescribed value / 1st / 2nd derivative at both ends."""
    t2, t3 = t * t, t * t * t
    t4, t5 = t2 * t2, t2 * t3
    h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5
    h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5
    h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5
    h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5
    h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5
    h5 = 0.5 * t3 - t4 + 0.5 * t5
    return v0 * h0 + d0 * h1 + s0 * h2 + v1 * h3 + d1 * h4 + s1 * h5


def hermite_quintic_d(t: float, v0: float, d0: float, s0: float,
                      v1: float, d1: float, s1: float) -> float:
    t2, t3 = t * t, t * t * t
    t4 = t2 * t2
    h0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4
    h1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4
    h2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4
    h3 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4
    h4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4
    h5 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4
    return v0 * h0 + d0 * h1 + s0 * h2 + v1 * h3 + d1 * h4 + s1 * h5


@dataclass(frozen=True)
class HandleProfile:
    """The pair (f, g) shaping the surgered hypersurface, with smoothing width delta.

    f == 1 on [0, 1-delta], f(s) == s + delta for s >= 1 - delta/2, increasing.
    g(s) == s for s <= 1, g == 1 + delta for s >= 1 + delta, increasing.
    """

    delta: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.delta < 0.25:
            raise ValueError(f"delta must lie in (0, 1/4), got {self.delta}")

    def f(self, s: float) -> float:
        return k.handle_f(s, self.delta)

    def f_d(self, s: float) -> float:
        return k.handle_f_d(s, self.delta)

    def g(self, s: float) -> float:
        return k.handle_g(s, self.delta)

    def g_d(self, s: float) -> float:
        return k.handle_g_d(s, self.delta)

    def g_inverse(self, v: float, tol: float = 1e-14) -> float:
        """Invert g on [0, 1+delta): bisection on the monotone blend window."""
        if v <= 1.0:
            return v
        if v >= 1.0 + self.delta:
            raise ValueError(f"g saturates at {1.0 + self.delta}; {v} not attained")
        lo, hi = 1.0, 1.0 + self.delta
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if self.g(mid) < v:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DehnTwistProfile:
    """Amount of normalized geodesic flow for a k-fold twist.

    g1 decreases from k*pi at 0 (with strictly negative slope) to 0 at the
    support radius p0, and is identically 0 beyond it.
    """

    p0: float = 1.0
    k: int = 1

    def __post_init__(self):
        if self.p0 <= 0.0:
            raise ValueError("support radius p0 must be positive")
        if self.k < 1:
            raise ValueError("twist multiplicity k must be a positive integer")

    def g1(self, s: float) -> float:
        return k.twist_g1(s, self.p0, self.k)

    def g1_d(self, s: float) -> float:
        return k.twist_g1_d(s, self.p0, self.k)


@dataclass(frozen=True)
class BindingProfile:
    """Coefficients of the collar form h1(r)*(boundary 1-form) + h2(r)*dphi.

    h1 is positive, non-increasing and equals exp(1/2 - r) from the matching
    radius on; h2 rises like r^2 near the axis and is constant 1 from the
    matching radius on.  h1 = exp(1/2 - q(r)) with a monotone C^2 exponent q
    that flattens to a constant below blend_lo, so h1' = -q' h1 <= 0 holds by
    construction; contact positivity h1*h2' - h1'*h2 > 0 is still verified
    numerically downstream.
    """

    blend_lo: float = 0.3
    matching_radius: float = 0.6

    def __post_init__(self):
        if not 0.5 < self.matching_radius < 1.0:
            raise ValueError("matching radius must lie in (1/2, 1)")
        if not 0.0 < self.blend_lo < self.matching_radius:
            raise ValueError("blend window must sit inside (0, matching_radius)")

    def _t(self, r: float) -> float:
        return (r - self.blend_lo) / (self.matching_radius - self.blend_lo)

    def _q(self, r: float) -> float:
        rm = self.matching_radius
        width = rm - self.blend_lo
        if r <= self.blend_lo:
            return rm - 0.5 * width
        if r >= rm:
            return r
        return hermite_quintic(self._t(r), rm - 0.5 * width, 0.0, 0.0,
                               rm, width, 0.0)

    def _q_d(self, r: float) -> float:
        rm = self.matching_radius
        width = rm - self.blend_lo
        if r <= self.blend_lo:
            return 0.0
        if r >= rm:
            return 1.0
        return hermite_quintic_d(self._t(r), rm - 0.5 * width, 0.0, 0.0,
                                 rm, width, 0.0) / width

    def h1(self, r: float) -> float:
        return math.exp(0.5 - self._q(r))

    def h1_d(self, r: float) -> float:
        return -self._q_d(r) * self.h1(r)

    def h2(self, r: float) -> float:
        if r <= self.blend_lo:
            return r * r
        if r >= self.matching_radius:
            return 1.0
        width = self.matching_radius - self.blend_lo
        lo = self.blend_lo
        return hermite_quintic(self._t(r), lo * lo, 2.0 * lo * width, 2.0 * width * width,
                               1.0, 0.0, 0.0)

    def h2_d(self, r: float) -> float:
        if r <= self.blend_lo:
            return 2.0 * r
        if r >= self.matching_radius:
            return 0.0
        width = self.matching_radius - self.blend_lo
        lo = self.blend_lo
        return hermite_quintic_d(self._t(r), lo * lo, 2.0 * lo * width, 2.0 * width * width,
                                 1.0, 0.0, 0.0) / width

    def h2_over_r2(self, r: float) -> float:
        """h2(r)/r^2, finite across r = 0; needed for the Cartesian disk chart."""
        if abs(r) <= self.blend_lo:
            return 1.0
        return self.h2(abs(r)) / (r * r)
