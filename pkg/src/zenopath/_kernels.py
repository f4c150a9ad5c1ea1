"""Hot inner loops, JIT-compiled with numba when available.

Set the environment variable ``ZENOPATH_NO_NUMBA=1`` to force the pure-Python
fallback (same source, no compilation).  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

import math
import os

import numpy as np

_disable = os.environ.get("ZENOPATH_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disable:
        raise ImportError("numba disabled via ZENOPATH_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def zeno_walk(x, y, z, omega_s, j_coupling, dt, n_steps, trace_floor):
    """Iterate the post-selected measurement map on Bloch coordinates.

    One step = unitary rotation about the x-axis by 2*omega_s*dt followed by
    the r=0 measurement back-action and renormalization.  Returns the path
    (n_steps+1, 3) and the index of the step where the normalization trace
    underflowed (-1 if it never did; the path is zero-filled past that point).
    """
    out = np.empty((n_steps + 1, 3))
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = z
    rot = 2.0 * omega_s * dt
    crot = math.cos(rot)
    srot = math.sin(rot)
    cj = math.cos(j_coupling * dt)
    cj2 = cj * cj
    for k in range(n_steps):
        # Rabi rotation in the y-z plane
        y1 = y * crot - z * srot
        z1 = z * crot + y * srot
        # measurement back-action: rho00 -> rho00, rho11 -> cj^2 rho11
        trace = 0.5 * ((1.0 + z1) + cj2 * (1.0 - z1))
        if trace <= trace_floor:
            for m in range(k + 1, n_steps + 1):
                out[m, 0] = 0.0
                out[m, 1] = 0.0
                out[m, 2] = 0.0
            return out, k
        x = cj * x / trace
        y = cj * y1 / trace
        z = ((1.0 + z1) - cj2 * (1.0 - z1)) / (2.0 * trace)
        out[k + 1, 0] = x
        out[k + 1, 1] = y
        out[k + 1, 2] = z
    return out, -1


@njit(cache=True, inline="always")
def _phase_rhs(theta, p_theta, omega_s, lam):
    dtheta = -2.0 * omega_s * (1.0 + lam * math.sin(theta))
    dp = 2.0 * omega_s * lam * (p_theta * math.cos(theta) + math.sin(theta))
    return dtheta, dp


@njit(cache=True)
def phase_rk4(theta0, p0, omega_s, lam, dt, n_steps):
    """Fixed-step RK4 on the reduced (theta, p_theta) Hamiltonian flow.

    theta is integrated unwrapped (continuous across +-pi).  Also returns the
    minimum flow speed encountered, used by the caller to flag stalls.
    """
    out = np.empty((n_steps + 1, 2))
    th = theta0
    p = p0
    out[0, 0] = th
    out[0, 1] = p
    min_speed = 1.0e308
    for k in range(n_steps):
        k1t, k1p = _phase_rhs(th, p, omega_s, lam)
        speed = math.sqrt(k1t * k1t + k1p * k1p)
        if speed < min_speed:
            min_speed = speed
        k2t, k2p = _phase_rhs(th + 0.5 * dt * k1t, p + 0.5 * dt * k1p, omega_s, lam)
        k3t, k3p = _phase_rhs(th + 0.5 * dt * k2t, p + 0.5 * dt * k2p, omega_s, lam)
        k4t, k4p = _phase_rhs(th + dt * k3t, p + dt * k3p, omega_s, lam)
        th = th + dt * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
        p = p + dt * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        out[k + 1, 0] = th
        out[k + 1, 1] = p
    return out, min_speed


@njit(cache=True, inline="always")
def _bloch_drift(x, y, z, omega_s, alpha):
    dx = -0.5 * alpha * x * z
    dy = -0.5 * alpha * y * z - 2.0 * omega_s * z
    dz = 0.5 * alpha * (1.0 - z * z) + 2.0 * omega_s * y
    return dx, dy, dz


@njit(cache=True)
def diffusive_walk(x, y, z, omega_s, alpha, dt, dw):
    """Conditioned Bloch-vector sampling: RK4 drift + Ito noise kick + renormalize.

    The kick sqrt(alpha)*dW rotates the state about the z-axis (back-action of
    the phase readout); drift and kick keep the state on the unit sphere up to
    O(dt), renormalization removes the quadratic residue.
    """
    n_steps = dw.shape[0]
    out = np.empty((n_steps + 1, 3))
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = z
    sa = math.sqrt(alpha)
    for k in range(n_steps):
        k1x, k1y, k1z = _bloch_drift(x, y, z, omega_s, alpha)
        k2x, k2y, k2z = _bloch_drift(
            x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, z + 0.5 * dt * k1z, omega_s, alpha
        )
        k3x, k3y, k3z = _bloch_drift(
            x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, z + 0.5 * dt * k2z, omega_s, alpha
        )
        k4x, k4y, k4z = _bloch_drift(
            x + dt * k3x, y + dt * k3y, z + dt * k3z, omega_s, alpha
        )
        xn = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        yn = y + dt * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        zn = z + dt * (k1z + 2.0 * k2z + 2.0 * k3z + k4z) / 6.0
        # stochastic kick evaluated at the step start (Ito convention)
        w = dw[k]
        xn = xn + sa * y * w
        yn = yn - sa * x * w
        norm = math.sqrt(xn * xn + yn * yn + zn * zn)
        x = xn / norm
        y = yn / norm
        z = zn / norm
        out[k + 1, 0] = x
        out[k + 1, 1] = y
        out[k + 1, 2] = z
    return out


@njit(cache=True, inline="always")
def _mlp_rhs6(s, omega_s, alpha, ds):
    x = s[0]
    y = s[1]
    z = s[2]
    px = s[3]
    py = s[4]
    pz = s[5]
    # r*sqrt(alpha/tau) with the readout constraint substituted; tau cancels
    aw = alpha * (y * px - x * py)
    ds[0] = -0.5 * alpha * x * z + aw * y
    ds[1] = -0.5 * alpha * y * z - aw * x - 2.0 * omega_s * z
    ds[2] = 0.5 * alpha * (1.0 - z * z) + 2.0 * omega_s * y
    ds[3] = 0.5 * alpha * z * px + aw * py
    ds[4] = -aw * px + 0.5 * alpha * z * py - 2.0 * omega_s * pz
    ds[5] = (
        0.5 * alpha * x * px
        + 0.5 * alpha * y * py
        + 2.0 * omega_s * py
        + alpha * z * pz
        - 0.5 * alpha
    )


@njit(cache=True)
def mlp_rk4(s0, omega_s, alpha, dt, n_steps):
    """Fixed-step RK4 on the six extremal equations of the most-likely path."""
    out = np.empty((n_steps + 1, 6))
    s = s0.copy()
    out[0] = s
    k1 = np.empty(6)
    k2 = np.empty(6)
    k3 = np.empty(6)
    k4 = np.empty(6)
    tmp = np.empty(6)
    min_speed = 1.0e308
    for k in range(n_steps):
        _mlp_rhs6(s, omega_s, alpha, k1)
        sp = 0.0
        for i in range(6):
            sp += k1[i] * k1[i]
        sp = math.sqrt(sp)
        if sp < min_speed:
            min_speed = sp
        for i in range(6):
            tmp[i] = s[i] + 0.5 * dt * k1[i]
        _mlp_rhs6(tmp, omega_s, alpha, k2)
        for i in range(6):
            tmp[i] = s[i] + 0.5 * dt * k2[i]
        _mlp_rhs6(tmp, omega_s, alpha, k3)
        for i in range(6):
            tmp[i] = s[i] + dt * k3[i]
        _mlp_rhs6(tmp, omega_s, alpha, k4)
        for i in range(6):
            s[i] = s[i] + dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
        out[k + 1] = s
    return out, min_speed
