"""Central orbits, their topology (crossing number K, coefficients), and
the closed-form period expressions.

A central orbit oscillates between the two members of a PT-symmetric
turning-point pair along a fixed arc: the second half of the period
retraces the first with reversed momentum.  We integrate the one-way arc
(launch from the plus turning point, terminate at the momentum zero on
the minus one) and synthesize the retraced half from it.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _stepper as _st
from .dynamics import (CrossingEvent, IntegrationControls, State,
                       SurfacePoint, TERM_BUDGET, TERM_CLOSED, TERM_FAILED,
                       Trajectory, _run_kernel, _trajectory_from_run,
                       turning_point_start)
from .gammafn import gamma
from .surface import SimulationConfig, turning_pair, turning_phase

__all__ = [
    "OrbitClass",
    "CoefficientFamily",
    "UnresolvedClassification",
    "central_orbit",
    "classify",
    "period_class0",
    "period_formula",
    "sum_rule_check",
    "family_coefficients",
    "fit_coefficients",
    "oscillation_count",
    "crossing_number",
    "winding_coefficients",
]

DEFAULT_RESIDUAL_FRACTION = 0.01


class UnresolvedClassification(RuntimeError):
    """No admissible coefficient vector met the residual bound."""


@dataclass(frozen=True)
class OrbitClass:
    """Topological record of one classified central orbit."""

    n: int
    epsilon: float
    K: int
    T_measured: float
    coefficients: tuple
    T_formula: float
    residual: float
    sheet_range: tuple
    status: str                      # "ok" | "unresolved"
    fit_coefficients: tuple = ()     # best period-residual integer fit
    fit_residual: float = float("nan")


@dataclass(frozen=True)
class CoefficientFamily:
    """Closed-form coefficient six-tuple of the K = 13 + 12k cascade."""

    k: int
    coefficients: tuple

    @property
    def crossing_number(self) -> int:
        return sum(self.coefficients)


def _period_prefactor(epsilon: float) -> float:
    return (2.0 * math.sqrt(math.pi)
            * gamma((3.0 + epsilon) / (2.0 + epsilon))
            / gamma((4.0 + epsilon) / (4.0 + 2.0 * epsilon)))


def _cosine_weight(j: int, epsilon: float) -> float:
    return abs(math.cos((2 * j + 1) * epsilon * math.pi
                        / (4.0 + 2.0 * epsilon)))


def period_class0(cfg: SimulationConfig) -> float:
    """Closed-form period of the class whose central orbit joins pair 0."""
    if cfg.epsilon < 0:
        raise ValueError("closed-form period defined for epsilon >= 0")
    return _period_prefactor(cfg.epsilon) * _cosine_weight(0, cfg.epsilon)


def _check_parity(coefficients: Sequence[int], n: int):
    for j, a in enumerate(coefficients):
        if a < 0 or a != int(a):
            raise ValueError(f"coefficient a_{j}={a} must be a nonnegative integer")
        if j == n and a % 2 == 0:
            raise ValueError(f"a_{n}={a} must be odd")
        if j != n and a % 2 == 1:
            raise ValueError(f"a_{j}={a} must be even for j != {n}")


def period_formula(n: int, cfg: SimulationConfig,
                   coefficients: Sequence[int]) -> float:
    """Closed-form class period for a coefficient vector (parity enforced)."""
    _check_parity(coefficients, n)
    pref = _period_prefactor(cfg.epsilon)
    return pref * sum(a * _cosine_weight(j, cfg.epsilon)
                      for j, a in enumerate(coefficients))


def sum_rule_check(coefficients: Sequence[int], K: int, n: int = None) -> bool:
    """True iff the coefficients sum to K and follow the parity pattern."""
    if sum(coefficients) != K:
        return False
    if n is None:
        # infer the odd slot; exactly one odd entry is admissible
        odd = [j for j, a in enumerate(coefficients) if a % 2 == 1]
        return len(odd) == 1
    try:
        _check_parity(coefficients, n)
    except ValueError:
        return False
    return True


def family_coefficients(k: int) -> CoefficientFamily:
    """Cascade family (2, 1+2k, 6+4k, 4+4k, 0, 2k) with K = 13 + 12k."""
    if k < 0:
        raise ValueError("family index must be nonnegative")
    return CoefficientFamily(
        k=k, coefficients=(2, 1 + 2 * k, 6 + 4 * k, 4 + 4 * k, 0, 2 * k))


def fit_coefficients(T_measured: float, n: int, cfg: SimulationConfig,
                     K: int, j_max: int,
                     residual_tol: Optional[float] = None):
    """Exhaustive admissible-integer fit of the class-period formula.

    Searches nonnegative vectors with sum K, odd a_n, even a_j otherwise,
    and a_j = 0 beyond j_max, minimizing |T_measured - formula|.  Returns
    (coefficients, residual); the caller compares the residual against
    its bound (default 1% of T_measured).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if j_max < n:
        raise ValueError("j_max must reach the terminating pair index")
    if residual_tol is None:
        residual_tol = DEFAULT_RESIDUAL_FRACTION * abs(T_measured)
    pref = _period_prefactor(cfg.epsilon)
    weights = [pref * _cosine_weight(j, cfg.epsilon) for j in range(j_max + 1)]

    if K % 2 == 0:
        raise ValueError("no admissible vector: K must be odd "
                         "(one odd coefficient, the rest even)")

    best = None
    best_res = math.inf

    even_slots = [j for j in range(j_max + 1) if j != n]

    def rec(slot_idx, remaining_half, acc_T, vec):
        nonlocal best, best_res
        if abs(acc_T - T_measured) >= best_res and acc_T > T_measured:
            return
        if slot_idx == len(even_slots):
            if remaining_half == 0:
                res = abs(acc_T - T_measured)
                if res < best_res:
                    best_res = res
                    best = vec.copy()
            return
        j = even_slots[slot_idx]
        for half in range(remaining_half + 1):
            vec[j] = 2 * half
            rec(slot_idx + 1, remaining_half - half,
                acc_T + 2 * half * weights[j], vec)
        vec[j] = 0

    vec = [0] * (j_max + 1)
    for a_n in range(1, K + 1, 2):
        vec[n] = a_n
        rec(0, (K - a_n) // 2, a_n * weights[n], vec)
    vec[n] = 0

    if best is None:
        raise ValueError("empty feasible set for the given K and parity")
    while len(best) > n + 1 and best[-1] == 0:
        best.pop()
    return tuple(best), best_res


def central_orbit(n: int, cfg: SimulationConfig,
                  ctl: IntegrationControls = IntegrationControls(),
                  dt0: Optional[float] = None,
                  p_accept: Optional[float] = None,
                  x_gate: float = 1e-5,
                  sample_capacity: int = 1 << 19) -> Trajectory:
    """Closed orbit terminating on the nth turning-point pair.

    Launches off the plus turning point with the quadratic series and
    integrates until the momentum zero at either pair member; the
    retraced half of the period is synthesized from the measured arc.
    """
    if n >= 1 and cfg.epsilon <= 0:
        raise ValueError("pairs n >= 1 require epsilon > 0 "
                         "(all pairs coincide at +-1 when epsilon = 0)")
    if cfg.epsilon < 0:
        raise ValueError("central orbits require epsilon >= 0")
    s0, pair, dt0 = turning_point_start(n, "+", dt0, cfg)
    if p_accept is None:
        # |p|^2 = |V'| d a distance d from a turning point, |V'| = 2+eps
        # there; this makes the momentum gate consistent with the
        # position gate
        p_accept = math.sqrt((2.0 + cfg.epsilon) * x_gate)
    touch = dict(enabled=True, dt0=dt0,
                 tpp=pair.plus_point.value, tpm=pair.minus_point.value,
                 lam=turning_phase(n, cfg.epsilon),
                 p_accept=p_accept, x_gate=x_gate,
                 arm_time=10.0 * dt0)
    samples, events, result = _run_kernel(
        s0, cfg, ctl,
        detect_generic=False, arm_dist=0.3, touch=touch,
        record_samples=True, record_events=True,
        sample_capacity=sample_capacity, event_capacity=1 << 15)
    half = _trajectory_from_run(samples, events, result, cfg, ctl)
    kind = half.stats["closure_kind"]
    if half.termination != TERM_CLOSED:
        return half
    if kind == _st.CLOSE_LAUNCH_TOUCH:
        # full period was integrated outright
        return half
    return _mirror_retrace(half, cfg, ctl)


def _mirror_retrace(half: Trajectory, cfg, ctl) -> Trajectory:
    """Extend a half-period arc (launch to mirror touch) to the full orbit.

    The flow is second order in x with no damping, so the trajectory is
    symmetric about any momentum zero: x(t*+s) = x(t*-s), p -> -p.
    """
    t_m = half.stats["t_end"]
    T = half.period
    n = len(half.t)
    ts = np.concatenate([half.t, 2.0 * t_m - half.t[n - 2::-1], [T]])
    xs = np.concatenate([half.x, half.x[n - 2::-1], [half.x[0]]])
    ps = np.concatenate([half.p, -half.p[n - 2::-1], [half.p[0]]])
    phis = np.concatenate([half.phi, half.phi[n - 2::-1], [half.phi[0]]])
    events = list(half.events)
    for e in reversed(half.events):
        events.append(CrossingEvent(
            t=2.0 * t_m - e.t, location=e.location, p=-e.p, kind=e.kind,
            sheet_before=e.sheet_after, sheet_after=e.sheet_before,
            direction=-e.direction))
    stats = dict(half.stats)
    stats["n_axis_crossings"] = 2 * half.stats["n_axis_crossings"]
    stats["n_cut_crossings"] = 2 * half.stats["n_cut_crossings"]
    stats["half_period_measured"] = t_m
    return Trajectory(t=ts, x=xs, p=ps, phi=phis, events=events,
                      termination=half.termination, period=T,
                      config=half.config, controls=half.controls,
                      stats=stats)


def crossing_number(traj: Trajectory) -> int:
    """One-way crossing count K of a closed central orbit: the full period
    crosses the imaginary axis twice per topological crossing."""
    total = traj.stats["n_axis_crossings"]
    if total % 2 != 0:
        raise ValueError(f"odd full-period crossing count {total}")
    return total // 2


def winding_coefficients(traj: Trajectory, n: int, cfg: SimulationConfig):
    """Topological coefficient census of a closed central orbit.

    Placeholder: filled in by the calibration pass against the measured
    orbit geometry.
    """
    raise NotImplementedError


def classify(traj: Trajectory, n: int, cfg: SimulationConfig,
             residual_tol: Optional[float] = None,
             j_max: Optional[int] = None) -> OrbitClass:
    """Measure K, coefficients, and period residual of a closed orbit."""
    if traj.termination != TERM_CLOSED or traj.period is None:
        raise UnresolvedClassification(
            f"trajectory did not close: {traj.termination}")
    K = crossing_number(traj)
    T = traj.period
    if j_max is None:
        j_max = max(n, _relevant_pairs(traj, cfg))
    coeffs = winding_coefficients(traj, n, cfg)
    status = "ok"
    try:
        T_formula = period_formula(n, cfg, coeffs)
    except ValueError:
        T_formula = float("nan")
        status = "unresolved"
    if not sum_rule_check(coeffs, K, n):
        status = "unresolved"
    residual = abs(T - T_formula) if math.isfinite(T_formula) else float("inf")
    fit, fit_res = fit_coefficients(T, n, cfg, K, j_max, residual_tol)
    return OrbitClass(
        n=n, epsilon=cfg.epsilon, K=K, T_measured=T,
        coefficients=tuple(coeffs), T_formula=T_formula, residual=residual,
        sheet_range=(traj.sheet_min, traj.sheet_max), status=status,
        fit_coefficients=fit, fit_residual=fit_res)


def _relevant_pairs(traj: Trajectory, cfg: SimulationConfig) -> int:
    """Largest pair index whose turning phase the orbit's phase reaches."""
    phi_span = max(abs(traj.stats["phi_min"]), abs(traj.stats["phi_max"]))
    j = int((phi_span * (2.0 + cfg.epsilon) / math.pi - 1.0) / 2.0) + 1
    return max(0, j)


def oscillation_count(traj: Trajectory, amplitude_floor: float = 1e-3) -> int:
    """Number of transverse oscillations of a central arc about its chord.

    Counts local extrema of the perpendicular deviation from the straight
    chord between the terminating turning points over one half-period,
    after pruning wiggles smaller than amplitude_floor * chord length.
    """
    if traj.period is None:
        raise ValueError("oscillation count requires a closed central orbit")
    t_half = traj.period / 2.0
    mask = traj.t <= t_half * (1.0 + 1e-12)
    x = traj.x[mask]
    a = x[0]
    b = x[-1]
    chord = b - a
    clen = abs(chord)
    if clen == 0:
        raise ValueError("degenerate chord")
    u = chord / clen
    dev = ((x - a) * np.conj(u)).imag
    floor = amplitude_floor * clen
    # collapse to alternating extrema, then prune small wiggles by
    # repeatedly removing the least-prominent adjacent extremum pair
    ext_idx = []
    d = np.diff(dev)
    sgn = np.sign(d)
    nz = sgn != 0
    sgn_nz = sgn[nz]
    idx_nz = np.arange(len(d))[nz]
    for i in range(1, len(sgn_nz)):
        if sgn_nz[i] != sgn_nz[i - 1]:
            ext_idx.append(idx_nz[i])
    vals = [dev[0]] + [dev[i] for i in ext_idx] + [dev[-1]]
    keep = list(range(len(vals)))
    changed = True
    while changed and len(keep) > 2:
        changed = False
        best_i = -1
        best_drop = floor
        for i in range(1, len(keep) - 1):
            drop = min(abs(vals[keep[i]] - vals[keep[i - 1]]),
                       abs(vals[keep[i]] - vals[keep[i + 1]]))
            if drop < best_drop:
                best_drop = drop
                best_i = i
        if best_i >= 0:
            # remove the wiggle: drop this extremum and re-merge
            del keep[best_i]
            # adjacent same-direction extrema merge: drop the weaker one
            i = max(1, best_i - 1)
            while i < len(keep) - 1:
                a0, a1, a2 = vals[keep[i - 1]], vals[keep[i]], vals[keep[i + 1]]
                if (a1 - a0) * (a2 - a1) > 0:
                    del keep[i]
                else:
                    i += 1
            changed = True
    return max(0, len(keep) - 2)
