"""Compiled kernels against their uncompiled source (backend parity)."""

import numpy as np
import pytest

from contactlab import _kernels as k
from contactlab.backend import active_backend, python_impl
from contactlab.profiles import DehnTwistProfile, HandleProfile

rng = np.random.default_rng(33)
NOP = k._NO_PARAMS


def both(fn):
    """The bound kernel and its plain-Python source (same object on numpy backend)."""
    return fn, python_impl(fn)


@pytest.mark.parametrize("code,params", [
    (k.FIELD_LIOUVILLE, NOP),
    (k.FIELD_LIOUVILLE_A, np.array([7.0])),
    (k.FIELD_REEB, NOP),
    (k.FIELD_HANDLE_HAMILTONIAN, np.array([0.05])),
])
def test_field_rhs_backend_parity(code, params):
    fast, plain = both(k.field_rhs)
    for _ in range(10):
        u = rng.standard_normal(8)
        a = fast(u, 1, 2, code, params)
        b = plain(u, 1, 2, code, params)
        # compiled code may contract multiplies and adds, so compare tightly
        # rather than bitwise
        assert np.allclose(a, b, rtol=1e-14, atol=1e-15)


def test_rk4_final_backend_parity():
    fast, plain = both(k.rk4_final)
    u = rng.standard_normal(6)
    args = (1, 2, k.FIELD_LIOUVILLE, NOP, 0.37, 1e-3, k.PROJ_NONE, NOP)
    assert np.allclose(fast(u, *args), plain(u, *args), rtol=1e-13, atol=1e-14)


def test_rk4_event_backend_parity():
    fast, plain = both(k.rk4_until_event)
    u = np.array([-0.1, 0.5, 1.0, 0.0])
    args = (0, 2, k.FIELD_REEB, NOP, k.EVENT_PAGE, NOP, 0.1,
            1e-3, 2.0, 1e-12, k.PROJ_NONE, NOP, 1.0)
    sa, ta, _, states_a, ca = fast(u, *args)
    sb, tb, _, states_b, cb = plain(u, *args)
    assert sa == sb == k.STATUS_EVENT
    assert abs(ta - tb) < 1e-9
    assert ca == cb
    assert np.allclose(states_a[:ca], states_b[:cb], rtol=1e-12, atol=1e-12)


def test_margins_backend_parity():
    fast, plain = both(k.transversality_margins)
    pts = rng.standard_normal((50, 6))
    assert np.allclose(fast(pts, 1, 2, 0.1), plain(pts, 1, 2, 0.1),
                       rtol=1e-13, atol=1e-15)


def test_twist_batch_backend_parity():
    fast, plain = both(k.dehn_twist_batch)
    q = rng.standard_normal((20, 3))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    p = rng.standard_normal((20, 3)) * 0.7
    qa, pa = fast(q, p, 1.0, 2)
    qb, pb = plain(q, p, 1.0, 2)
    assert np.allclose(qa, qb, rtol=1e-13, atol=1e-14)
    assert np.allclose(pa, pb, rtol=1e-13, atol=1e-14)


def test_scalar_kernels_match_profile_dataclasses():
    hp = HandleProfile(0.07)
    tw = DehnTwistProfile(1.3, 2)
    for s in np.linspace(0.0, 2.0, 300):
        assert abs(hp.f(s) - python_impl(k.handle_f)(s, 0.07)) < 1e-15
        assert abs(hp.g_d(s) - python_impl(k.handle_g_d)(s, 0.07)) < 1e-13
        assert abs(tw.g1(s) - python_impl(k.twist_g1)(s, 1.3, 2)) < 1e-13


def test_projection_kernels():
    u = np.array([0.0, 0.0, 0.6, 0.8000001])
    out = k.apply_projection(u.copy(), 0, 2, k.PROJ_UNIT_W, NOP)
    assert abs(out[2:] @ out[2:] - 1.0) < 1e-15
    hp = HandleProfile(0.1)
    v = np.array([0.9, 0.1, 0.1, 0.95])
    out = k.apply_projection(v.copy(), 0, 2, k.PROJ_LEVEL, np.array([0.1]))
    assert abs(k.event_value(out, 0, 2, k.EVENT_LEVEL, np.array([0.1]))) < 1e-12


def test_backend_selection_reports_valid_name():
    assert active_backend() in ("numba", "numpy")
