"""Deterministic fixed-step RK4 flows with event detection and projection.

Vector fields built by :mod:`contactlab.surgery` carry kernel metadata and
are integrated by the compiled kernels; arbitrary Python callables take the
generic path below, which implements the identical stepping, projection and
bisection semantics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .forms import VectorFieldOracle

Array = np.ndarray


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-3
    max_time: float = 10.0
    event_tol: float = 1e-10
    projection: Optional[str] = None  # None, "unit_w" or "level_f"
    level_delta: float = 0.1

    def __post_init__(self):
        if self.step <= 0.0 or self.max_time <= 0.0:
            raise ValueError("step and max_time must be positive")
        if self.step >= self.max_time:
            raise ValueError("step must be smaller than max_time")
        if self.event_tol <= 0.0:
            raise ValueError("event tolerance must be positive")
        if self.projection not in (None, "unit_w", "level_f"):
            raise ValueError(f"unknown projection {self.projection!r}")

    def proj_code_params(self):
        if self.projection is None:
            return _kernels.PROJ_NONE, _kernels._NO_PARAMS
        if self.projection == "unit_w":
            return _kernels.PROJ_UNIT_W, _kernels._NO_PARAMS
        return _kernels.PROJ_LEVEL, np.array([self.level_delta])


@dataclass(frozen=True)
class EventSpec:
    """A scalar observable along the flow, with an optional compiled twin."""

    name: str
    func: Callable[[Array], float]
    kernel_code: Optional[int] = None
    kernel_params: Optional[Array] = None


def page_event(nxy: int, nzw: int) -> EventSpec:
    def func(u):
        return float(u[2 * nxy:2 * nxy + nzw] @ u[2 * nxy + nzw:])

    return EventSpec("page", func, _kernels.EVENT_PAGE, _kernels._NO_PARAMS)


def level_event(nxy: int, nzw: int, delta: float) -> EventSpec:
    params = np.array([delta])

    def func(u):
        return float(_kernels.event_value(u, nxy, nzw, _kernels.EVENT_LEVEL, params))

    return EventSpec("level", func, _kernels.EVENT_LEVEL, params)


def wnorm2_event(nxy: int, nzw: int) -> EventSpec:
    def func(u):
        w = u[2 * nxy + nzw:]
        return float(w @ w)

    return EventSpec("wnorm2", func, _kernels.EVENT_WNORM2, _kernels._NO_PARAMS)


@dataclass
class Trajectory:
    times: Array
    points: Array
    event: Optional[tuple[str, float, Array]] = None

    def __post_init__(self):
        if len(self.times) != len(self.points):
            raise ValueError("times and points must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def end(self) -> Array:
        return self.points[-1]


def _kernel_ready(field: VectorFieldOracle, cfg: IntegratorConfig) -> bool:
    return field.kernel_code is not None and field.blocks is not None


def flow_fixed_time(field: VectorFieldOracle, start: Array, t: float,
                    cfg: IntegratorConfig) -> Array:
    """Classical RK4 for signed time t with post-step constraint projection."""
    u0 = np.asarray(start, dtype=float)
    pcode, pparams = cfg.proj_code_params()
    if _kernel_ready(field, cfg):
        nxy, nzw = field.blocks
        return _kernels.rk4_final(u0, nxy, nzw, field.kernel_code,
                                  field.kernel_params, float(t), cfg.step,
                                  pcode, pparams)
    return _py_rk4_final(field, u0, float(t), cfg)


def flow_record(field: VectorFieldOracle, start: Array, t: float,
                cfg: IntegratorConfig) -> Trajectory:
    u0 = np.asarray(start, dtype=float)
    pcode, pparams = cfg.proj_code_params()
    if _kernel_ready(field, cfg):
        nxy, nzw = field.blocks
        times, states = _kernels.rk4_record(u0, nxy, nzw, field.kernel_code,
                                            field.kernel_params, float(t),
                                            cfg.step, pcode, pparams)
        return Trajectory(times, states)
    times, states = _py_rk4_record(field, u0, float(t), cfg)
    return Trajectory(times, states)


def flow_until_event(field: VectorFieldOracle, start: Array, event: EventSpec,
                     target: float, cfg: IntegratorConfig,
                     direction: float = 1.0) -> Trajectory:
    """Integrate until the event observable crosses the target (bisection-refined).

    A trajectory without an event record means no crossing occurred within
    cfg.max_time; callers must inspect ``trajectory.event``.
    """
    u0 = np.asarray(start, dtype=float)
    pcode, pparams = cfg.proj_code_params()
    if _kernel_ready(field, cfg) and event.kernel_code is not None:
        nxy, nzw = field.blocks
        status, t_ev, times, states, count = _kernels.rk4_until_event(
            u0, nxy, nzw, field.kernel_code, field.kernel_params,
            event.kernel_code, event.kernel_params, float(target),
            cfg.step, cfg.max_time, cfg.event_tol, pcode, pparams,
            float(direction))
        if status == _kernels.STATUS_NONFINITE:
            raise ValueError("flow state became non-finite before the event")
        traj = Trajectory(times[:count].copy(), states[:count].copy())
        if status == _kernels.STATUS_EVENT:
            traj.event = (event.name, float(t_ev), states[count - 1].copy())
        return traj
    return _py_flow_until_event(field, u0, event, float(target), cfg, direction)


def project_constraint(pt: Array, constraint: str, nxy: int, nzw: int,
                       delta: float = 0.1, max_displacement: float = 1e-6) -> Array:
    """Retract a drifted point onto the constraint set.

    Raises when the correction exceeds ``max_displacement`` (the point was
    not close to the constraint) or when the Newton projection stalls.
    """
    u = np.asarray(pt, dtype=float).copy()
    if constraint == "unit_w":
        code, params = _kernels.PROJ_UNIT_W, _kernels._NO_PARAMS
    elif constraint == "level_f":
        code, params = _kernels.PROJ_LEVEL, np.array([delta])
    else:
        raise ValueError(f"unknown constraint {constraint!r}")
    out = _kernels.apply_projection(u.copy(), nxy, nzw, code, params)
    moved = float(np.linalg.norm(out - u))
    if moved > max_displacement:
        raise ValueError(f"projection displaced the point by {moved:.3e} "
                         f"(> {max_displacement:.3e}); state had drifted too far")
    if code == _kernels.PROJ_LEVEL:
        residual = _kernels.event_value(out, nxy, nzw, _kernels.EVENT_LEVEL, params)
        if abs(residual) > 1e-10:
            raise ValueError(f"Newton projection stalled with residual {residual:.3e}")
    return out


# ---------------------------------------------------------------------------
# generic path for arbitrary callables (identical semantics to the kernels)
# ---------------------------------------------------------------------------

def _py_step(field, u, h):
    k1 = field(u)
    k2 = field(u + 0.5 * h * k1)
    k3 = field(u + 0.5 * h * k2)
    k4 = field(u + h * k3)
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _py_project(u, cfg: IntegratorConfig, field: VectorFieldOracle):
    pcode, pparams = cfg.proj_code_params()
    if pcode == _kernels.PROJ_NONE:
        return u
    if field.blocks is None:
        raise ValueError("projection requested but the field carries no block layout")
    nxy, nzw = field.blocks
    return _kernels.apply_projection(u, nxy, nzw, pcode, pparams)


def _py_rk4_final(field, u0, t, cfg):
    u = u0.copy()
    remaining = abs(t)
    sgn = 1.0 if t >= 0 else -1.0
    while remaining > 0.0:
        h = min(cfg.step, remaining)
        u = _py_step(field, u, sgn * h)
        u = _py_project(u, cfg, field)
        if not np.all(np.isfinite(u)):
            raise ValueError("flow state became non-finite")
        remaining -= h
    return u


def _py_rk4_record(field, u0, t, cfg):
    times = [0.0]
    states = [u0.copy()]
    u = u0.copy()
    remaining = abs(t)
    sgn = 1.0 if t >= 0 else -1.0
    elapsed = 0.0
    while remaining > 1e-15:
        h = min(cfg.step, remaining)
        u = _py_step(field, u, sgn * h)
        u = _py_project(u, cfg, field)
        if not np.all(np.isfinite(u)):
            raise ValueError("flow state became non-finite")
        elapsed += h
        remaining -= h
        times.append(elapsed)
        states.append(u.copy())
    return np.array(times), np.array(states)


def _py_flow_until_event(field, u0, event, target, cfg, direction):
    u = u0.copy()
    times = [0.0]
    states = [u.copy()]
    v_prev = event.func(u) - target
    if abs(v_prev) <= cfg.event_tol:
        traj = Trajectory(np.array(times), np.array(states))
        traj.event = (event.name, 0.0, u.copy())
        return traj
    t_now = 0.0
    while t_now < cfg.max_time:
        h = min(cfg.step, cfg.max_time - t_now)
        u_next = _py_step(field, u, direction * h)
        u_next = _py_project(u_next, cfg, field)
        if not np.all(np.isfinite(u_next)):
            raise ValueError("flow state became non-finite before the event")
        v_next = event.func(u_next) - target
        if abs(v_next) <= cfg.event_tol or v_prev * v_next < 0.0:
            lo, hi = 0.0, h
            u_hit, t_hit = u_next, h
            for _ in range(60):
                if hi - lo < 1e-17:
                    break
                mid = 0.5 * (lo + hi)
                u_mid = _py_project(_py_step(field, u, direction * mid), cfg, field)
                v_mid = event.func(u_mid) - target
                if abs(v_mid) <= cfg.event_tol:
                    u_hit, t_hit = u_mid, mid
                    break
                if v_prev * v_mid < 0.0:
                    hi, u_hit, t_hit = mid, u_mid, mid
                else:
                    lo = mid
            times.append(t_now + t_hit)
            states.append(u_hit.copy())
            traj = Trajectory(np.array(times), np.array(states))
            traj.event = (event.name, t_now + t_hit, u_hit.copy())
            return traj
        t_now += h
        u = u_next
        v_prev = v_next
        times.append(t_now)
        states.append(u.copy())
    return Trajectory(np.array(times), np.array(states))


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def trajectory_to_csv(traj: Trajectory, path, coord_names: Optional[list[str]] = None) -> None:
    """Write rows (time, coords...) with a header; deterministic ordering."""
    dim = traj.points.shape[1] if len(traj.points) else 0
    if coord_names is None:
        coord_names = [f"c{i}" for i in range(dim)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time"] + coord_names)
        for t, row in zip(traj.times, traj.points):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
