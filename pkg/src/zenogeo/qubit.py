"""The two-level worked example: Bloch coordinates and the frozen orbit.

Bloch coordinates are the quadratic functions

    u = |z1|^2 + |z2|^2      x = 2 Re(conj(z1) z2)
    y = 2 Im(conj(z1) z2)    z = |z1|^2 - |z2|^2

i.e. the expectation values of (identity, sigma_x, sigma_y, sigma_z) with
the standard Pauli matrices, so the first basis vector e1 sits at the North
Pole (z = +1) and is the +1 eigenvector of sigma_z.  Pure states satisfy
u^2 = x^2 + y^2 + z^2 identically.

Measurement projects onto e1, P = (I + sigma_z)/2.  The limit dynamics is
generated by PHP = (h0 + hz) |e1><e1|; its Bloch image keeps u and z fixed
and precesses (x, y) counterclockwise at angular rate h0 + hz.  (The
off-diagonal coordinates x, y beat at the frequency difference of the two
levels of PHP, which is (h0 + hz) - 0 since the orthogonal level carries
eigenvalue zero.)
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels, zeno
from .linalg import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    VARIANCE_FLOOR,
    as_state,
    norm_sq,
)

#: Projector onto the first basis state, (I + sigma_z)/2.
PROJECTOR_UP = np.diag([1.0, 0.0]).astype(np.complex128)

#: Flow starts are accepted when the sphere constraint holds this well.
CONSTRAINT_TOL = 1e-8


@dataclass(frozen=True)
class QubitHamiltonian:
    """H = h0 * I + hx sigma_x + hy sigma_y + hz sigma_z."""

    h0: float
    hx: float
    hy: float
    hz: float

    @property
    def field(self) -> np.ndarray:
        return np.array([self.hx, self.hy, self.hz], dtype=np.float64)

    def matrix(self) -> np.ndarray:
        return (
            self.h0 * np.eye(2, dtype=np.complex128)
            + self.hx * SIGMA_X
            + self.hy * SIGMA_Y
            + self.hz * SIGMA_Z
        )


@dataclass(frozen=True)
class BlochPoint:
    u: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("u", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.x, self.y, self.z], dtype=np.float64)

    def constraint_residual(self) -> float:
        """u^2 - (x^2 + y^2 + z^2); zero on images of pure states."""
        return self.u**2 - (self.x**2 + self.y**2 + self.z**2)


def bloch_map(psi) -> BlochPoint:
    """Quadratic Bloch coordinates (u, x, y, z) of a two-component state."""
    psi = as_state(psi)
    if psi.size != 2:
        raise ValueError(f"bloch_map expects dimension 2, got {psi.size}")
    z1, z2 = psi
    w = np.conj(z1) * z2
    return BlochPoint(
        u=abs(z1) ** 2 + abs(z2) ** 2,
        x=2.0 * w.real,
        y=2.0 * w.imag,
        z=abs(z1) ** 2 - abs(z2) ** 2,
    )


def qubit_expectation(hq: QubitHamiltonian, psi) -> float:
    """<psi|H|psi> evaluated as h0 u + h . (x, y, z) from the Bloch map."""
    b = bloch_map(psi)
    return hq.h0 * b.u + hq.hx * b.x + hq.hy * b.y + hq.hz * b.z


def qubit_zeno_time(hq: QubitHamiltonian, psi) -> float:
    """Zeno time from the cross product: tau^{-2} = |h x r|^2 / |r|^2
    with r the Bloch vector.  The offset h0 drops out; parallel h and r
    (an eigenstate) give an infinite Zeno time."""
    psi = as_state(psi)
    if psi.size != 2:
        raise ValueError(f"expected a two-component state, got dim {psi.size}")
    if norm_sq(psi) <= 1e-14:
        raise ValueError("Zeno time undefined for a (near-)zero vector")
    b = bloch_map(psi)
    r = np.array([b.x, b.y, b.z])
    cross = np.cross(hq.field, r)
    inv_tau_sq = float(cross @ cross) / float(r @ r)
    if inv_tau_sq <= VARIANCE_FLOOR:
        return math.inf
    return 1.0 / math.sqrt(inv_tau_sq)


def zeno_rotation_rate(hq: QubitHamiltonian) -> float:
    """Angular rate of the (x, y) precession under the limit dynamics."""
    return hq.h0 + hq.hz


def flow_matrix(hq: QubitHamiltonian) -> np.ndarray:
    """Linear generator of the Bloch flow: udot = zdot = 0,
    xdot = -w y, ydot = +w x with w = h0 + hz."""
    w = zeno_rotation_rate(hq)
    M = np.zeros((4, 4), dtype=np.float64)
    M[1, 2] = -w
    M[2, 1] = w
    return M


def zeno_flow_generator(hq: QubitHamiltonian):
    """Right-hand side of the Bloch flow ODEs as a callable on (u,x,y,z)."""
    M = flow_matrix(hq)

    def rhs(point) -> np.ndarray:
        point = np.asarray(point, dtype=np.float64)
        if point.shape != (4,):
            raise ValueError("flow generator expects a 4-vector (u, x, y, z)")
        return M @ point

    return rhs


def default_flow_steps(hq: QubitHamiltonian, t: float) -> int:
    """Fixed-step count keeping |w| * dt <= 1/100 and at least 1000 steps."""
    w = abs(zeno_rotation_rate(hq))
    return max(1000, math.ceil(100.0 * w * abs(t)))


def integrate_zeno_flow(
    hq: QubitHamiltonian, start: BlochPoint, t: float, steps: int | None = None
) -> list[BlochPoint]:
    """Classical RK4 trajectory of the Bloch flow from start to time t.

    Returns steps + 1 points at times k t / steps.  u and z are conserved
    exactly by construction (their derivatives vanish identically), so the
    sphere radius |(x,y,z)| can only drift through the RK4 rotation error,
    which the default step count keeps below 1e-8.
    """
    resid = start.constraint_residual()
    if abs(resid) > CONSTRAINT_TOL * max(1.0, start.u**2):
        raise ValueError(
            f"start violates the sphere constraint u^2 = x^2+y^2+z^2 "
            f"(residual {resid:.3e})"
        )
    if steps is None:
        steps = default_flow_steps(hq, t)
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    traj = kernels.rk4_linear_trajectory(
        flow_matrix(hq), start.as_array(), float(t) / steps, steps
    )
    return [BlochPoint(*row) for row in traj]


def frozen_state_check(hq: QubitHamiltonian, t: float) -> tuple[float, complex]:
    """Survival and phase of the prepared state e1 under the limit dynamics.

    The measurement constraint pins the initial state to the North Pole,
    the degenerate orbit of the flow: the dynamics freezes and only the
    phase exp(-i (h0+hz) t) accumulates.
    """
    e1 = np.array([1.0, 0.0], dtype=np.complex128)
    UZ = zeno.zeno_limit_unitary(hq.matrix(), PROJECTOR_UP, t)
    amp = complex(np.vdot(e1, UZ @ e1))
    return abs(amp) ** 2, amp


def analytic_frozen_phase(hq: QubitHamiltonian, t: float) -> complex:
    """Closed form exp(-i (h0+hz) t) for the frozen state's phase."""
    return cmath.exp(-1j * (hq.h0 + hq.hz) * t)
