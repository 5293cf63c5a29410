"""Adaptive Dormand-Prince 5(4) kernel for the complexified oscillator flow.

The hot loop lives here as numba-compiled code over plain float64 state
(Re x, Im x, Re p, Im p, phi).  The equations of motion are

    dx/dt   = 2 p
    dp/dt   = i (2+eps) (ix)^(1+eps)      [phase-continued power]
    dphi/dt = Im(2p / x)                  [phase transport]

Per accepted step the kernel also: locates imaginary-axis crossings via a
cubic-Hermite dense output, enforces at most one crossing and |dphi| < pi/2
per step, monitors energy and projects the momentum back onto the energy
shell, and runs the closure detectors (momentum-zero touches of a target
turning-point pair, or a gated distance scan against the initial state).
"""

import math
import cmath

import numpy as np
from numba import njit

# Butcher tableau, Dormand & Prince 5(4), FSAL
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)

# termination status
STATUS_CLOSED = 0
STATUS_BUDGET = 1
STATUS_ESCAPED = 2
STATUS_FAILED = 3

# closure kinds
CLOSE_NONE = 0
CLOSE_STATE = 1          # generic state match against the initial state
CLOSE_MIRROR_TOUCH = 2   # p -> 0 at the mirror turning point: T = 2(t*+dt0)
CLOSE_LAUNCH_TOUCH = 3   # p -> 0 back at the launch turning point: T = t*+dt0

# failure reasons
FAIL_NONE = 0
FAIL_STEP_UNDERFLOW = 1
FAIL_ORIGIN = 2
FAIL_MAX_STEPS = 3

# result vector layout
R_STATUS = 0
R_CLOSE_KIND = 1
R_PERIOD = 2
R_T_END = 3
R_Y_END = 4            # 4..8inclusive: xre xim pre pim phi
R_N_STEPS = 9
R_N_REJECTED = 10
R_MAX_ENERGY = 11
R_PHI_MIN = 12
R_PHI_MAX = 13
R_N_AXIS = 14
R_N_SAMPLES = 15
R_STRIDE = 16
R_N_EVENTS = 17
R_EVENTS_OVERFLOW = 18
R_MAX_ABS_X = 19
R_TOUCH_PMIN = 20
R_N_CUT = 21
R_MIN_ABS_X = 22
R_FAIL_REASON = 23
RESULT_LEN = 24

# event row layout: t, xre, xim, pre, pim, phi, kind(0 axis/1 cut), direction
EV_COLS = 8

_NSCAN = 8  # dense sub-intervals scanned per accepted step


@njit(cache=True, nogil=True, inline="always")
def _ipow(z, n):
    """z**n for nonnegative integer n by binary exponentiation."""
    acc = complex(1.0, 0.0)
    base = z
    k = n
    while k > 0:
        if k & 1:
            acc = acc * base
        base = base * base
        k >>= 1
    return acc


@njit(cache=True, nogil=True, inline="always")
def _rhs(y, eps, is_int, eps_i, floor2, out):
    """State derivative. For integer eps the powers of (ix) are single
    valued and evaluated from x directly; phi is then pure bookkeeping
    (its transport integrand is clamped through degenerate axis rides)."""
    xre, xim, pre, pim, phi = y[0], y[1], y[2], y[3], y[4]
    r2 = xre * xre + xim * xim
    if not (r2 > floor2) or not math.isfinite(r2):
        return False
    out[0] = 2.0 * pre
    out[1] = 2.0 * pim
    if is_int:
        w = _ipow(complex(-xim, xre), eps_i + 1)
        g = 2.0 + eps
        out[2] = -g * w.imag
        out[3] = g * w.real
        dphi = 2.0 * (pim * xre - pre * xim) / r2
        if dphi > 1e2:
            dphi = 1e2
        elif dphi < -1e2:
            dphi = -1e2
        out[4] = dphi
    else:
        a = 1.0 + eps
        m = math.exp(0.5 * a * math.log(r2))
        ang = a * phi
        g = (2.0 + eps) * m
        out[2] = -g * math.sin(ang)
        out[3] = g * math.cos(ang)
        out[4] = 2.0 * (pim * xre - pre * xim) / r2
    return True


@njit(cache=True, nogil=True, inline="always")
def _h1(y0, f0, y1, f1, h, t):
    """Cubic Hermite interpolant of one component at fraction t of the step."""
    u = 1.0 - t
    return ((1.0 + 2.0 * t) * u * u * y0 + t * u * u * h * f0
            + t * t * (3.0 - 2.0 * t) * y1 + t * t * (t - 1.0) * h * f1)


@njit(cache=True, nogil=True, inline="always")
def _hermite_state(y0, f0, y1, f1, h, t, out):
    u = 1.0 - t
    c0 = (1.0 + 2.0 * t) * u * u
    c1 = t * u * u * h
    c2 = t * t * (3.0 - 2.0 * t)
    c3 = t * t * (t - 1.0) * h
    for i in range(5):
        out[i] = c0 * y0[i] + c1 * f0[i] + c2 * y1[i] + c3 * f1[i]


@njit(cache=True, nogil=True, inline="always")
def _psq_at(y0, f0, y1, f1, h, t):
    pre = _h1(y0[2], f0[2], y1[2], f1[2], h, t)
    pim = _h1(y0[3], f0[3], y1[3], f1[3], h, t)
    return pre * pre + pim * pim


@njit(cache=True, nogil=True, inline="always")
def _dist_at(y0, f0, y1, f1, h, t, x0re, x0im, p0re, p0im, isx2, isp2):
    xre = _h1(y0[0], f0[0], y1[0], f1[0], h, t)
    xim = _h1(y0[1], f0[1], y1[1], f1[1], h, t)
    pre = _h1(y0[2], f0[2], y1[2], f1[2], h, t)
    pim = _h1(y0[3], f0[3], y1[3], f1[3], h, t)
    dx = (xre - x0re) * (xre - x0re) + (xim - x0im) * (xim - x0im)
    dp = (pre - p0re) * (pre - p0re) + (pim - p0im) * (pim - p0im)
    return dx * isx2 + dp * isp2


@njit(cache=True, nogil=True)
def _golden_min_psq(y0, f0, y1, f1, h, a, b):
    """Golden-section minimum of |p|^2 on [a, b] (step fractions)."""
    invphi = 0.6180339887498949
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = _psq_at(y0, f0, y1, f1, h, c)
    fd = _psq_at(y0, f0, y1, f1, h, d)
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _psq_at(y0, f0, y1, f1, h, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _psq_at(y0, f0, y1, f1, h, d)
    t = 0.5 * (a + b)
    return t, _psq_at(y0, f0, y1, f1, h, t)


@njit(cache=True, nogil=True)
def _golden_min_dist(y0, f0, y1, f1, h, a, b,
                     x0re, x0im, p0re, p0im, isx2, isp2):
    invphi = 0.6180339887498949
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = _dist_at(y0, f0, y1, f1, h, c, x0re, x0im, p0re, p0im, isx2, isp2)
    fd = _dist_at(y0, f0, y1, f1, h, d, x0re, x0im, p0re, p0im, isx2, isp2)
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _dist_at(y0, f0, y1, f1, h, c,
                          x0re, x0im, p0re, p0im, isx2, isp2)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _dist_at(y0, f0, y1, f1, h, d,
                          x0re, x0im, p0re, p0im, isx2, isp2)
    t = 0.5 * (a + b)
    return t, _dist_at(y0, f0, y1, f1, h, t, x0re, x0im, p0re, p0im, isx2, isp2)


@njit(cache=True, nogil=True)
def _bisect_xre_zero(y0, f0, y1, f1, h, a, b):
    """Root of Re x(theta) in [a, b]; assumes a sign change."""
    fa = _h1(y0[0], f0[0], y1[0], f1[0], h, a)
    for _ in range(70):
        m = 0.5 * (a + b)
        fm = _h1(y0[0], f0[0], y1[0], f1[0], h, m)
        if (fa <= 0.0 and fm <= 0.0) or (fa > 0.0 and fm > 0.0):
            a = m
            fa = fm
        else:
            b = m
    return 0.5 * (a + b)


@njit(cache=True, nogil=True)
def _advance(eps, y_init,
             rel_tol, abs_tol, energy_tol, origin_floor, escape_radius,
             t_budget, max_steps,
             detect_generic, closure_tol, arm_dist,
             detect_touch, dt0, tpp_re, tpp_im, tpm_re, tpm_im, lam,
             p_accept, x_gate, arm_time,
             record_samples, record_events,
             samples, events, result):
    """Integrate from y_init at t=0. Outputs go to samples/events/result."""
    floor2 = origin_floor * origin_floor
    esc2 = escape_radius * escape_radius
    is_int = eps == math.floor(eps) and abs(eps) < 1e6
    eps_i = int(eps) if is_int else 0
    n_err = 4 if is_int else 5

    y = y_init.copy()
    ynew = np.empty(5)
    yt = np.empty(5)
    yev = np.empty(5)
    k1 = np.empty(5)
    k2 = np.empty(5)
    k3 = np.empty(5)
    k4 = np.empty(5)
    k5 = np.empty(5)
    k6 = np.empty(5)
    k7 = np.empty(5)

    for i in range(RESULT_LEN):
        result[i] = 0.0
    result[R_TOUCH_PMIN] = np.nan

    t = 0.0
    if not _rhs(y, eps, is_int, eps_i, floor2, k1):
        result[R_STATUS] = STATUS_FAILED
        result[R_FAIL_REASON] = FAIL_ORIGIN
        result[R_T_END] = t
        for i in range(5):
            result[R_Y_END + i] = y[i]
        return

    # closure reference state and scales
    x0re, x0im = y[0], y[1]
    p0re, p0im = y[2], y[3]
    phi0 = y[4]
    sx = math.hypot(x0re, x0im)
    if sx < 1.0:
        sx = 1.0
    sp = math.hypot(p0re, p0im)
    if sp < 1.0:
        sp = 1.0
    isx2 = 1.0 / (sx * sx)
    isp2 = 1.0 / (sp * sp)
    armed = False

    # bookkeeping
    phi_min = y[4]
    phi_max = y[4]
    r0 = math.hypot(y[0], y[1])
    max_abs_x = r0
    min_abs_x = r0
    n_axis = 0
    n_cut = 0
    n_samples = 0
    n_events = 0
    stride = 1
    step_index = 0
    n_steps = 0
    n_rejected = 0
    max_energy = 0.0
    events_overflow = 0
    sample_cap = samples.shape[0]
    event_cap = events.shape[0]

    if record_samples and sample_cap > 0:
        samples[0, 0] = t
        for i in range(5):
            samples[0, 1 + i] = y[i]
        n_samples = 1

    h = 1e-6
    facold = 1e-4
    status = STATUS_BUDGET
    fail_reason = FAIL_NONE
    close_kind = CLOSE_NONE
    period = 0.0
    t_end = t

    while True:
        if t >= t_budget:
            status = STATUS_BUDGET
            break
        if n_steps + n_rejected > max_steps:
            status = STATUS_FAILED
            fail_reason = FAIL_MAX_STEPS
            break
        hmin = 1e-14 * max(1.0, abs(t))
        if t_budget - t <= hmin:
            status = STATUS_BUDGET
            break
        if h > t_budget - t:
            h = t_budget - t
        if h < hmin:
            status = STATUS_FAILED
            fail_reason = FAIL_STEP_UNDERFLOW
            break

        # --- seven stages ---
        ok = True
        for i in range(5):
            yt[i] = y[i] + h * _A21 * k1[i]
        ok = _rhs(yt, eps, is_int, eps_i, floor2, k2)
        if ok:
            for i in range(5):
                yt[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
            ok = _rhs(yt, eps, is_int, eps_i, floor2, k3)
        if ok:
            for i in range(5):
                yt[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            ok = _rhs(yt, eps, is_int, eps_i, floor2, k4)
        if ok:
            for i in range(5):
                yt[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i]
                                    + _A53 * k3[i] + _A54 * k4[i])
            ok = _rhs(yt, eps, is_int, eps_i, floor2, k5)
        if ok:
            for i in range(5):
                yt[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                    + _A64 * k4[i] + _A65 * k5[i])
            ok = _rhs(yt, eps, is_int, eps_i, floor2, k6)
        if ok:
            for i in range(5):
                ynew[i] = y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                      + _B5 * k5[i] + _B6 * k6[i])
            ok = _rhs(ynew, eps, is_int, eps_i, floor2, k7)

        if not ok:
            n_rejected += 1
            h *= 0.5
            if h < hmin:
                status = STATUS_FAILED
                fail_reason = FAIL_ORIGIN
                break
            continue

        # --- error estimate (phi excluded for single-valued integer eps) ---
        err = 0.0
        finite = True
        for i in range(5):
            e = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                     + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
            if not math.isfinite(e) or not math.isfinite(ynew[i]):
                finite = False
                break
            if i >= n_err:
                continue
            ay = abs(y[i])
            an = abs(ynew[i])
            sc = abs_tol + rel_tol * (ay if ay > an else an)
            q = e / sc
            err += q * q
        if not finite:
            n_rejected += 1
            h *= 0.5
            continue
        err = math.sqrt(err / n_err)

        if err > 1.0:
            n_rejected += 1
            fac11 = err ** 0.17
            fac = fac11 / 0.9
            if fac > 10.0:
                fac = 10.0
            h = h / fac
            continue

        # --- phase-step cap: no skipped sheet boundaries ---
        dphi = abs(ynew[4] - y[4])
        if dphi >= 0.5 * math.pi and not is_int:
            n_rejected += 1
            h *= 0.45 * math.pi / dphi
            continue

        # --- energy check (scale-relative) ---
        p2re = ynew[2] * ynew[2] - ynew[3] * ynew[3]
        p2im = 2.0 * ynew[2] * ynew[3]
        r2 = ynew[0] * ynew[0] + ynew[1] * ynew[1]
        if is_int:
            wv = _ipow(complex(-ynew[1], ynew[0]), eps_i + 2)
            vm = abs(wv)
            vre = -wv.real
            vim = -wv.imag
        else:
            a2 = 2.0 + eps
            vm = math.exp(0.5 * a2 * math.log(r2))
            vang = a2 * ynew[4]
            vre = -vm * math.cos(vang)
            vim = -vm * math.sin(vang)
        hre = p2re + vre - 1.0
        him = p2im + vim
        presid = math.hypot(hre, him)
        p2abs = math.hypot(p2re, p2im)
        scale = 1.0
        if p2abs > scale:
            scale = p2abs
        if vm > scale:
            scale = vm
        if not math.isfinite(presid) or presid > energy_tol * scale:
            n_rejected += 1
            h *= 0.5
            continue

        # --- at most one imaginary-axis crossing per step ---
        nsign = 0
        prev = y[0]
        for isc in range(1, _NSCAN):
            v = _h1(y[0], k1[0], ynew[0], k7[0], h, isc / _NSCAN)
            if (prev <= 0.0) != (v <= 0.0):
                nsign += 1
            prev = v
        if (prev <= 0.0) != (ynew[0] <= 0.0):
            nsign += 1
        if nsign > 1:
            n_rejected += 1
            h *= 0.5
            continue

        # ===== step accepted =====
        sc_res = presid / scale
        if sc_res > max_energy:
            max_energy = sc_res

        # momentum projection back onto the energy shell
        if presid > 1e-15 * scale and p2abs > 1e3 * presid:
            tre = 1.0 - vre
            tim = -vim
            den = p2re * p2re + p2im * p2im
            rre = (tre * p2re + tim * p2im) / den
            rim = (tim * p2re - tre * p2im) / den
            w = cmath.sqrt(complex(rre, rim))
            if w.real < 0.0:
                w = -w
            pnew = complex(ynew[2], ynew[3]) * w
            ynew[2] = pnew.real
            ynew[3] = pnew.imag

        t_new = t + h

        # closure scan bounded to this step; events beyond closure are dropped
        theta_close = 2.0

        # --- touch detector (central-orbit launches) ---
        if detect_touch and t_new > arm_time:
            coarse = 4.0 * p_accept
            if coarse < 0.05:
                coarse = 0.05
            pslo = _psq_at(y, k1, ynew, k7, h, 0.0)
            best = pslo
            best_i = 0
            for isc in range(1, _NSCAN + 1):
                v = _psq_at(y, k1, ynew, k7, h, isc / _NSCAN)
                if v < best:
                    best = v
                    best_i = isc
            if best < coarse * coarse:
                lo = max(0.0, (best_i - 1) / _NSCAN)
                hi = min(1.0, (best_i + 1) / _NSCAN)
                tm, psqm = _golden_min_psq(y, k1, ynew, k7, h, lo, hi)
                if psqm < p_accept * p_accept:
                    _hermite_state(y, k1, ynew, k7, h, tm, yev)
                    dplus = math.hypot(yev[0] - tpp_re, yev[1] - tpp_im)
                    dminus = math.hypot(yev[0] - tpm_re, yev[1] - tpm_im)
                    # integer eps: single sheet, phase is bookkeeping only
                    phiok = is_int or abs(abs(yev[4]) - lam) < 0.5 * math.pi
                    if dminus < x_gate and phiok:
                        close_kind = CLOSE_MIRROR_TOUCH
                        theta_close = tm
                        period = 2.0 * (t + tm * h + dt0)
                    elif dplus < x_gate and phiok:
                        close_kind = CLOSE_LAUNCH_TOUCH
                        theta_close = tm
                        period = t + tm * h + dt0
                    if close_kind != CLOSE_NONE:
                        result[R_TOUCH_PMIN] = math.sqrt(psqm)

        # --- generic state-match closure ---
        if detect_generic and close_kind == CLOSE_NONE:
            dend = _dist_at(y, k1, ynew, k7, h, 1.0,
                            x0re, x0im, p0re, p0im, isx2, isp2)
            if not armed:
                if dend > arm_dist * arm_dist:
                    armed = True
            elif dend < 0.04 and (is_int
                                  or abs(ynew[4] - phi0) < 0.5 * math.pi):
                best = dend
                best_i = _NSCAN
                for isc in range(0, _NSCAN):
                    v = _dist_at(y, k1, ynew, k7, h, isc / _NSCAN,
                                 x0re, x0im, p0re, p0im, isx2, isp2)
                    if v < best:
                        best = v
                        best_i = isc
                lo = max(0.0, (best_i - 1) / _NSCAN)
                hi = min(1.0, (best_i + 1) / _NSCAN)
                tm, dm = _golden_min_dist(y, k1, ynew, k7, h, lo, hi,
                                          x0re, x0im, p0re, p0im, isx2, isp2)
                if dm < 2.0 * closure_tol * closure_tol:
                    _hermite_state(y, k1, ynew, k7, h, tm, yev)
                    dxa = math.hypot(yev[0] - x0re, yev[1] - x0im)
                    dpa = math.hypot(yev[2] - p0re, yev[3] - p0im)
                    if (dxa <= closure_tol * sx and dpa <= closure_tol * sp
                            and (is_int
                                 or abs(yev[4] - phi0) < 0.25 * math.pi)):
                        close_kind = CLOSE_STATE
                        theta_close = tm
                        period = t + tm * h

        # --- imaginary-axis crossing event ---
        ev_theta = -1.0
        if (y[0] <= 0.0) != (ynew[0] <= 0.0):
            ev_theta = _bisect_xre_zero(y, k1, ynew, k7, h, 0.0, 1.0)
        else:
            # interior double-crossing was rejected above; a tangent pair
            # inside one scan cell is the only remaining possibility and
            # counts as no net crossing
            pass
        if ev_theta >= 0.0 and ev_theta <= theta_close:
            _hermite_state(y, k1, ynew, k7, h, ev_theta, yev)
            kind = 1 if yev[1] > 0.0 else 0
            n_axis += 1
            if kind == 1:
                n_cut += 1
            if record_events:
                if n_events < event_cap:
                    events[n_events, 0] = t + ev_theta * h
                    events[n_events, 1] = yev[0]
                    events[n_events, 2] = yev[1]
                    events[n_events, 3] = yev[2]
                    events[n_events, 4] = yev[3]
                    events[n_events, 5] = yev[4]
                    events[n_events, 6] = kind
                    if kind == 1:
                        # direction = sign of dphi/dt at the cut
                        r2e = yev[0] * yev[0] + yev[1] * yev[1]
                        dphie = 2.0 * (yev[3] * yev[0] - yev[2] * yev[1]) / r2e
                        events[n_events, 7] = 1.0 if dphie > 0.0 else -1.0
                    else:
                        events[n_events, 7] = 1.0 if ynew[0] > y[0] else -1.0
                    n_events += 1
                else:
                    events_overflow = 1

        if close_kind != CLOSE_NONE:
            _hermite_state(y, k1, ynew, k7, h, theta_close, yev)
            t_end = t + theta_close * h
            for i in range(5):
                y[i] = yev[i]
            status = STATUS_CLOSED
            n_steps += 1
            break

        # running extrema (endpoints suffice at the enforced resolution)
        if ynew[4] < phi_min:
            phi_min = ynew[4]
        if ynew[4] > phi_max:
            phi_max = ynew[4]
        rx = math.hypot(ynew[0], ynew[1])
        if rx > max_abs_x:
            max_abs_x = rx
        if rx < min_abs_x:
            min_abs_x = rx

        # snap the transported phase onto the planar argument (drift control)
        argn = math.atan2(ynew[0], -ynew[1])
        d = argn - ynew[4]
        d -= 2.0 * math.pi * math.floor(d / (2.0 * math.pi) + 0.5)
        if abs(d) <= 0.3:
            ynew[4] += d

        t = t_new
        for i in range(5):
            y[i] = ynew[i]
        for i in range(5):
            k1[i] = k7[i]
        n_steps += 1
        step_index += 1

        if record_samples and sample_cap > 0:
            if step_index % stride == 0:
                if n_samples >= sample_cap:
                    # decimate in place, then record at the doubled stride
                    keep = (n_samples + 1) // 2
                    for j in range(keep):
                        for c in range(6):
                            samples[j, c] = samples[2 * j, c]
                    n_samples = keep
                    stride *= 2
                if step_index % stride == 0 and n_samples < sample_cap:
                    samples[n_samples, 0] = t
                    for i in range(5):
                        samples[n_samples, 1 + i] = y[i]
                    n_samples += 1

        if rx * rx > esc2:
            status = STATUS_ESCAPED
            break

        # PI step-size controller (Hairer's DOPRI5 constants)
        fac11 = err ** 0.17
        fac = fac11 / (facold ** 0.04)
        fac_s = fac / 0.9
        if fac_s < 0.2:
            fac_s = 0.2
        elif fac_s > 10.0:
            fac_s = 10.0
        h = h / fac_s
        facold = err if err > 1e-4 else 1e-4

    # final bookkeeping
    t_end = t if status != STATUS_CLOSED else t_end
    if record_samples and sample_cap > 0:
        if n_samples == 0 or samples[n_samples - 1, 0] < t_end:
            if n_samples >= sample_cap:
                keep = (n_samples + 1) // 2
                for j in range(keep):
                    for c in range(6):
                        samples[j, c] = samples[2 * j, c]
                n_samples = keep
                stride *= 2
            samples[n_samples, 0] = t_end
            for i in range(5):
                samples[n_samples, 1 + i] = y[i]
            n_samples += 1

    result[R_STATUS] = status
    result[R_CLOSE_KIND] = close_kind
    result[R_PERIOD] = period
    result[R_T_END] = t_end
    for i in range(5):
        result[R_Y_END + i] = y[i]
    result[R_N_STEPS] = n_steps
    result[R_N_REJECTED] = n_rejected
    result[R_MAX_ENERGY] = max_energy
    result[R_PHI_MIN] = phi_min
    result[R_PHI_MAX] = phi_max
    result[R_N_AXIS] = n_axis
    result[R_N_SAMPLES] = n_samples
    result[R_STRIDE] = stride
    result[R_N_EVENTS] = n_events
    result[R_EVENTS_OVERFLOW] = events_overflow
    result[R_MAX_ABS_X] = max_abs_x
    result[R_N_CUT] = n_cut
    result[R_MIN_ABS_X] = min_abs_x
    result[R_FAIL_REASON] = fail_reason
