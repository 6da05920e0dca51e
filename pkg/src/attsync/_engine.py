"""Compiled inner loop of the fixed-step integrator.

The per-step work (edge signs, incidence accumulation, transition-matrix
application, monitor channels, event detection) runs as one numba kernel
over preallocated record buffers; the wrapping and event bookkeeping stay
in :mod:`attsync.simulator`.  The scalar math mirrors the vectorized
public operations exactly (same branches and coefficients).
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_EXACT = 0
MODE_DEADBAND = 1
MODE_SMOOTH = 2

_PI = float(np.pi)
_SMALL_ANGLE = 1e-4  # keep in sync with so3.SMALL_ANGLE


@njit(cache=True)
def run_loop(
    x,
    tails,
    heads,
    dt,
    n_steps,
    stride,
    mode_code,
    eps,
    tol,
    rec_steps,
    rec_states,
    rec_v1,
    rec_v2,
    rec_mx,
    rec_spread,
):
    """Advance the closed loop, recording every ``stride`` steps.

    Returns (sample_count, consensus_step, singularity_step,
    domain_error_step, frozen_step); step indices are -1 when the event
    did not occur.  On a singularity halt the crossing sample is recorded
    even off-stride; a non-finite state halts without recording.
    """
    n = x.shape[0]
    m = tails.shape[0]
    signs = np.zeros((m, 3))
    omega = np.zeros((n, 3))

    idx = 0
    consensus_step = -1
    sing_step = -1
    domerr_step = -1
    frozen_step = -1

    k = 0
    while True:
        # edge differences, their signs, and V1
        v1 = 0.0
        any_active = False
        for e in range(m):
            ti = tails[e]
            hi = heads[e]
            for c in range(3):
                d = x[ti, c] - x[hi, c]
                v1 += abs(d)
                if mode_code == MODE_SMOOTH:
                    s = np.tanh(d / eps)
                elif d > eps:
                    s = 1.0
                elif d < -eps:
                    s = -1.0
                else:
                    # exact mode runs with eps = 0, so this is sign(0) = 0
                    s = 0.0
                signs[e, c] = s
                if s != 0.0:
                    any_active = True

        # per-agent norms and the pairwise-spread monitor
        v2 = 0.0
        mxsq = 0.0
        spread = 0.0
        for c in range(3):
            lo = x[0, c]
            hi_c = x[0, c]
            for i in range(1, n):
                if x[i, c] < lo:
                    lo = x[i, c]
                if x[i, c] > hi_c:
                    hi_c = x[i, c]
            if hi_c - lo > spread:
                spread = hi_c - lo
        for i in range(n):
            nsq = x[i, 0] ** 2 + x[i, 1] ** 2 + x[i, 2] ** 2
            v2 += 0.5 * nsq
            if nsq > mxsq:
                mxsq = nsq
        mx = np.sqrt(mxsq)

        if not (np.isfinite(v2) and np.isfinite(mx)):
            domerr_step = k
            break

        recorded = k % stride == 0
        if recorded:
            rec_steps[idx] = k
            for i in range(n):
                for c in range(3):
                    rec_states[idx, i, c] = x[i, c]
            rec_v1[idx] = v1
            rec_v2[idx] = v2
            rec_mx[idx] = mx
            rec_spread[idx] = spread
            idx += 1

        if consensus_step < 0 and spread <= tol:
            consensus_step = k

        if mx >= _PI:
            sing_step = k
            if not recorded:
                rec_steps[idx] = k
                for i in range(n):
                    for c in range(3):
                        rec_states[idx, i, c] = x[i, c]
                rec_v1[idx] = v1
                rec_v2[idx] = v2
                rec_mx[idx] = mx
                rec_spread[idx] = spread
                idx += 1
            break

        if k == n_steps:
            break

        if not any_active:
            frozen_step = k
            break

        # omega = -B @ signs, accumulated edge by edge
        for i in range(n):
            for c in range(3):
                omega[i, c] = 0.0
        for e in range(m):
            ti = tails[e]
            hi = heads[e]
            for c in range(3):
                omega[ti, c] -= signs[e, c]
                omega[hi, c] += signs[e, c]

        # x += dt * L(x) omega, using
        # L w = r w + (1 - r)(x.w/||x||^2) x + (x cross w)/2
        for i in range(n):
            nsq = x[i, 0] ** 2 + x[i, 1] ** 2 + x[i, 2] ** 2
            nrm = np.sqrt(nsq)
            if nrm < _SMALL_ANGLE:
                ratio = 1.0
                coef = 0.0
            else:
                half = 0.5 * nrm
                ratio = half / np.tan(half)
                dot = (
                    x[i, 0] * omega[i, 0]
                    + x[i, 1] * omega[i, 1]
                    + x[i, 2] * omega[i, 2]
                )
                coef = (1.0 - ratio) * dot / nsq
            cx = x[i, 1] * omega[i, 2] - x[i, 2] * omega[i, 1]
            cy = x[i, 2] * omega[i, 0] - x[i, 0] * omega[i, 2]
            cz = x[i, 0] * omega[i, 1] - x[i, 1] * omega[i, 0]
            x[i, 0] += dt * (ratio * omega[i, 0] + coef * x[i, 0] + 0.5 * cx)
            x[i, 1] += dt * (ratio * omega[i, 1] + coef * x[i, 1] + 0.5 * cy)
            x[i, 2] += dt * (ratio * omega[i, 2] + coef * x[i, 2] + 0.5 * cz)
        k += 1

    return idx, consensus_step, sing_step, domerr_step, frozen_step
