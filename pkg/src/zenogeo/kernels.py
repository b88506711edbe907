"""Hot inner loops: fixed-step RK4 for linear flows and repeated measured steps.

Each kernel exists twice: a plain-numpy reference (``*_numpy``) and, when
numba is importable, a jitted twin compiled from the same source.  The
dispatched names at the bottom pick the jitted path unless the environment
variable ``ZENOGEO_DISABLE_NUMBA`` is set to 1/true/yes (or numba is
missing).  Both paths execute identical arithmetic, so results agree to the
last bit; ``benchmarks/bench_kernels.py`` compares their speed.
"""
from __future__ import annotations

import os

import numpy as np


def rk4_linear_trajectory_numpy(A, y0, dt, steps):
    """Integrate y' = A y with classical RK4, recording every step.

    Returns an array of shape (steps + 1, len(y0)) starting at y0.
    """
    n = y0.shape[0]
    out = np.empty((steps + 1, n), dtype=y0.dtype)
    out[0] = y0
    y = y0.copy()
    for i in range(steps):
        k1 = A @ y
        k2 = A @ (y + 0.5 * dt * k1)
        k3 = A @ (y + 0.5 * dt * k2)
        k4 = A @ (y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return out


def repeated_apply_numpy(V, psi0, n_steps, record_every):
    """Apply the step matrix V to psi0 n_steps times, recording the state
    at step 0 and after every record_every-th step.

    record_every must divide n_steps; the result has n_steps // record_every
    + 1 rows.
    """
    n = psi0.shape[0]
    n_records = n_steps // record_every + 1
    out = np.empty((n_records, n), dtype=psi0.dtype)
    out[0] = psi0
    psi = psi0.copy()
    r = 1
    for i in range(1, n_steps + 1):
        psi = V @ psi
        if i % record_every == 0:
            out[r] = psi
            r += 1
    return out


def matrix_chain_numpy(V, count):
    """Left-to-right product V^count (count >= 1) without binary powering."""
    R = V.copy()
    for _ in range(count - 1):
        R = R @ V
    return R


def _truthy(value: str | None) -> bool:
    return (value or "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_DISABLED = _truthy(os.environ.get("ZENOGEO_DISABLE_NUMBA"))

rk4_linear_trajectory_numba = None
repeated_apply_numba = None
matrix_chain_numba = None

if not NUMBA_DISABLED:
    try:
        import numba
    except ImportError:
        pass
    else:
        rk4_linear_trajectory_numba = numba.njit(cache=True)(rk4_linear_trajectory_numpy)
        repeated_apply_numba = numba.njit(cache=True)(repeated_apply_numpy)
        matrix_chain_numba = numba.njit(cache=True)(matrix_chain_numpy)

USING_NUMBA = rk4_linear_trajectory_numba is not None

if USING_NUMBA:
    rk4_linear_trajectory = rk4_linear_trajectory_numba
    repeated_apply = repeated_apply_numba
    matrix_chain = matrix_chain_numba
else:
    rk4_linear_trajectory = rk4_linear_trajectory_numpy
    repeated_apply = repeated_apply_numpy
    matrix_chain = matrix_chain_numpy
