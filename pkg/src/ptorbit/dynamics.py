"""Hamiltonian flow through the complex plane with continuous phase tracking.

Wraps the compiled Dormand-Prince 5(4) kernel: builds initial states,
launches integrations, and converts the raw kernel output into Trajectory
records with located crossing events and a termination verdict.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _stepper as _st
from .surface import (DEFAULT_ORIGIN_FLOOR, OriginError, SimulationConfig,
                      SurfacePoint, force, lift, phase_power, sheet_of_phase,
                      turning_pair, turning_phase)

__all__ = [
    "State",
    "CrossingEvent",
    "Trajectory",
    "IntegrationControls",
    "NumericalFailure",
    "SeriesAccuracyError",
    "TERM_CLOSED",
    "TERM_BUDGET",
    "TERM_ESCAPED",
    "TERM_FAILED",
    "initial_state",
    "derivative",
    "integrate",
    "turning_point_start",
    "axis_crossings",
]

TERM_CLOSED = "closed"
TERM_BUDGET = "budget-exhausted"
TERM_ESCAPED = "escaped"
TERM_FAILED = "numerical-failure"

_STATUS_NAMES = {
    _st.STATUS_CLOSED: TERM_CLOSED,
    _st.STATUS_BUDGET: TERM_BUDGET,
    _st.STATUS_ESCAPED: TERM_ESCAPED,
    _st.STATUS_FAILED: TERM_FAILED,
}


class NumericalFailure(RuntimeError):
    """Integration could not continue (step underflow or origin hit)."""


class SeriesAccuracyError(ValueError):
    """Turning-point launch offset too large for the quadratic series."""


@dataclass(frozen=True)
class State:
    t: float
    point: SurfacePoint
    p: complex

    def energy_residual(self, cfg: SimulationConfig) -> float:
        from .surface import potential
        return abs(self.p * self.p + potential(self.point, cfg) - cfg.energy)


@dataclass(frozen=True)
class CrossingEvent:
    t: float
    location: SurfacePoint
    p: complex
    kind: str              # "axis" (lower half) or "cut" (upper half)
    sheet_before: int
    sheet_after: int
    direction: int


@dataclass(frozen=True)
class IntegrationControls:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    energy_tol: float = 1e-8
    closure_tol: float = 1e-6
    t_budget: float = 1e5
    escape_radius: float = math.inf
    origin_floor: float = DEFAULT_ORIGIN_FLOOR
    max_steps: int = 1_000_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "energy_tol", "closure_tol",
                     "t_budget", "escape_radius", "origin_floor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Trajectory:
    """Time-ordered samples plus located events and the termination verdict."""

    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    phi: np.ndarray
    events: list
    termination: str
    period: Optional[float]
    config: SimulationConfig
    controls: IntegrationControls
    stats: dict = field(default_factory=dict)

    @property
    def sheets(self) -> np.ndarray:
        return np.ceil((self.phi - math.pi) / (2.0 * math.pi)).astype(int)

    @property
    def sheet_min(self) -> int:
        phi_min = (self.stats["phi_min"] if "phi_min" in self.stats
                   else float(self.phi.min()))
        return sheet_of_phase(phi_min)

    @property
    def sheet_max(self) -> int:
        phi_max = (self.stats["phi_max"] if "phi_max" in self.stats
                   else float(self.phi.max()))
        return sheet_of_phase(phi_max)

    @property
    def sheets_visited(self) -> int:
        return self.sheet_max - self.sheet_min + 1

    @property
    def initial_state(self) -> State:
        return self.state_at(0)

    @property
    def final_state(self) -> State:
        return self.state_at(len(self.t) - 1)

    def state_at(self, i: int) -> State:
        return State(t=float(self.t[i]),
                     point=SurfacePoint(complex(self.x[i]), float(self.phi[i])),
                     p=complex(self.p[i]))

    def states(self):
        for i in range(len(self.t)):
            yield self.state_at(i)

    @property
    def closed(self) -> bool:
        return self.termination == TERM_CLOSED


def initial_state(x0: complex, sheet: int = 0, direction: int = 1,
                  cfg: SimulationConfig = None) -> State:
    """State on the energy shell at x0: p = direction * sqrt(1 - V(x0))."""
    if cfg is None:
        raise ValueError("cfg is required")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    pt = lift(x0, sheet)
    p = direction * cmath.sqrt(1.0 + phase_power(pt, 2.0 + cfg.epsilon))
    return State(t=0.0, point=pt, p=p)


def derivative(s: State, cfg: SimulationConfig,
               origin_floor: float = DEFAULT_ORIGIN_FLOOR):
    """(dx/dt, dp/dt, dphi/dt) at a state; reference for the compiled kernel."""
    x = s.point.value
    if abs(x) < origin_floor:
        raise OriginError("state too close to the origin")
    dx = 2.0 * s.p
    dp = force(s.point, cfg, origin_floor) / 2.0
    dphi = (dx / x).imag
    return dx, dp, dphi


def turning_point_start(n: int, which: str = "+", dt0: Optional[float] = None,
                        cfg: SimulationConfig = None):
    """State displaced from a turning point by the quadratic launch series.

    x(dt) = x_tp + f dt^2 / 2,  p(dt) = f dt / 2  with f the acceleration
    at the turning point.  The default dt0 puts the displacement near
    1e-8 in |x|, far below closure tolerances yet above rounding noise.
    Returns (state, pair, dt0).
    """
    if cfg is None:
        raise ValueError("cfg is required")
    pair = turning_pair(n, cfg)
    tp = pair.plus_point if which == "+" else pair.minus_point
    f = force(tp, cfg)
    if dt0 is None:
        dt0 = math.sqrt(2e-8 / abs(f))
    dx = 0.5 * f * dt0 * dt0
    # quartic remainder of the series, relative to machine scale
    fprime_scale = 2.0 * (2.0 + cfg.epsilon) * (1.0 + cfg.epsilon)
    remainder = fprime_scale * abs(f) * dt0 ** 4 / 24.0
    if remainder > 1e-10:
        raise SeriesAccuracyError(
            f"dt0={dt0:.3e} leaves series remainder {remainder:.3e} > 1e-10")
    x = tp.value + dx
    phi = tp.phi + (dx / tp.value).imag
    p = 0.5 * f * dt0
    state = State(t=0.0, point=SurfacePoint(x, phi), p=p)
    return state, pair, dt0


def _state_vector(s: State) -> np.ndarray:
    return np.array([s.point.value.real, s.point.value.imag,
                     s.p.real, s.p.imag, s.point.phi], dtype=np.float64)


def _events_from_rows(rows: np.ndarray) -> list:
    out = []
    for r in rows:
        t_ev, xre, xim, pre, pim, phi, kindf, direction = r
        kind = "cut" if kindf > 0.5 else "axis"
        d = int(direction)
        if kind == "cut":
            # phi sits at an odd multiple of pi; adjacent sheets are
            # (m-1)/2 and (m+1)/2, ordered by the phase direction
            m = round(phi / math.pi)
            before = (m - d) // 2
            after = (m + d) // 2
        else:
            before = after = sheet_of_phase(phi)
        out.append(CrossingEvent(
            t=float(t_ev),
            location=SurfacePoint(complex(xre, xim), float(phi)),
            p=complex(pre, pim),
            kind=kind,
            sheet_before=int(before),
            sheet_after=int(after),
            direction=d,
        ))
    return out


def _run_kernel(s0: State, cfg: SimulationConfig, ctl: IntegrationControls,
                detect_generic: bool, arm_dist: float,
                touch: Optional[dict],
                record_samples: bool, record_events: bool,
                sample_capacity: int, event_capacity: int):
    samples = np.empty((sample_capacity if record_samples else 2, 6))
    events = np.empty((event_capacity if record_events else 2, _st.EV_COLS))
    result = np.empty(_st.RESULT_LEN)
    if touch is None:
        touch = dict(enabled=False, dt0=0.0, tpp=0j, tpm=0j, lam=0.0,
                     p_accept=1e-6, x_gate=1e-3, arm_time=0.0)
    esc = ctl.escape_radius
    if not math.isfinite(esc):
        esc = 1e300
    _st._advance(
        cfg.epsilon, _state_vector(s0),
        ctl.rel_tol, ctl.abs_tol, ctl.energy_tol, ctl.origin_floor, esc,
        ctl.t_budget, ctl.max_steps,
        detect_generic, ctl.closure_tol, arm_dist,
        touch["enabled"], touch["dt0"],
        touch["tpp"].real, touch["tpp"].imag,
        touch["tpm"].real, touch["tpm"].imag,
        touch["lam"], touch["p_accept"], touch["x_gate"], touch["arm_time"],
        record_samples, record_events,
        samples, events, result,
    )
    return samples, events, result


def _trajectory_from_run(samples, events, result, cfg, ctl) -> Trajectory:
    n = int(result[_st.R_N_SAMPLES])
    rows = samples[:n]
    status = int(result[_st.R_STATUS])
    termination = _STATUS_NAMES[status]
    close_kind = int(result[_st.R_CLOSE_KIND])
    period = float(result[_st.R_PERIOD]) if close_kind != _st.CLOSE_NONE else None
    n_ev = int(result[_st.R_N_EVENTS])
    stats = {
        "n_steps": int(result[_st.R_N_STEPS]),
        "n_rejected": int(result[_st.R_N_REJECTED]),
        "max_energy_residual": float(result[_st.R_MAX_ENERGY]),
        "phi_min": float(result[_st.R_PHI_MIN]),
        "phi_max": float(result[_st.R_PHI_MAX]),
        "n_axis_crossings": int(result[_st.R_N_AXIS]),
        "n_cut_crossings": int(result[_st.R_N_CUT]),
        "max_abs_x": float(result[_st.R_MAX_ABS_X]),
        "min_abs_x": float(result[_st.R_MIN_ABS_X]),
        "sample_stride": int(result[_st.R_STRIDE]),
        "events_overflow": bool(result[_st.R_EVENTS_OVERFLOW]),
        "closure_kind": close_kind,
        "touch_p_min": float(result[_st.R_TOUCH_PMIN]),
        "t_end": float(result[_st.R_T_END]),
        "fail_reason": int(result[_st.R_FAIL_REASON]),
    }
    return Trajectory(
        t=rows[:, 0].copy(),
        x=(rows[:, 1] + 1j * rows[:, 2]),
        p=(rows[:, 3] + 1j * rows[:, 4]),
        phi=rows[:, 5].copy(),
        events=_events_from_rows(events[:n_ev]),
        termination=termination,
        period=period,
        config=cfg,
        controls=ctl,
        stats=stats,
    )


def integrate(s0: State, cfg: SimulationConfig,
              ctl: IntegrationControls = IntegrationControls(),
              detect_closure: bool = True,
              record_samples: bool = True,
              record_events: bool = True,
              sample_capacity: int = 1 << 19,
              event_capacity: int = 1 << 17,
              raise_on_failure: bool = False) -> Trajectory:
    """Advance a state until closure, budget exhaustion, escape, or failure."""
    samples, events, result = _run_kernel(
        s0, cfg, ctl,
        detect_generic=detect_closure, arm_dist=0.3, touch=None,
        record_samples=record_samples, record_events=record_events,
        sample_capacity=sample_capacity, event_capacity=event_capacity)
    traj = _trajectory_from_run(samples, events, result, cfg, ctl)
    if raise_on_failure and traj.termination == TERM_FAILED:
        raise NumericalFailure(f"integration failed: {traj.stats}")
    return traj


def axis_crossings(traj: Trajectory) -> list:
    """All imaginary-axis crossing events (lower-half "axis" and upper-half
    "cut" kinds both cross the axis and both count toward K)."""
    return [e for e in traj.events if e.kind in ("axis", "cut")]
