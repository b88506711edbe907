"""Finite-dimensional complex Hilbert-space kernel.

States are plain 1-D complex128 arrays, operators plain 2-D complex128
arrays; validation lives in the ``require_*`` / ``as_*`` helpers instead of
wrapper classes.  Every function is pure and leaves its inputs untouched.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg

HERMITIAN_TOL = 1e-12
PROJECTOR_TOL = 1e-10
NORMALIZED_TOL = 1e-12
#: Variance below this is treated as zero (the state is an eigenvector for
#: all practical purposes) and the Zeno time becomes infinite.
VARIANCE_FLOOR = 1e-14
#: Squared norms below this are rejected by the homogeneous formulas.
NORM_SQ_FLOOR = 1e-14

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


class ExtrapolationError(RuntimeError):
    """Raised when the short-time fit does not look quadratic."""


def as_state(psi) -> np.ndarray:
    """Coerce to a finite 1-D complex128 vector (always a fresh copy)."""
    out = np.array(psi, dtype=np.complex128, copy=True)
    if out.ndim != 1 or out.size == 0:
        raise ValueError(f"state must be a non-empty 1-D vector, got shape {out.shape}")
    if not np.all(np.isfinite(out.view(np.float64))):
        raise ValueError("state contains non-finite entries")
    return out


def norm_sq(psi) -> float:
    psi = np.asarray(psi)
    return float(np.real(np.vdot(psi, psi)))


def normalize(psi) -> np.ndarray:
    psi = as_state(psi)
    n2 = norm_sq(psi)
    if n2 <= NORM_SQ_FLOOR:
        raise ValueError("cannot normalize a (near-)zero vector")
    return psi / math.sqrt(n2)


def require_normalized(psi, tol: float = NORMALIZED_TOL) -> np.ndarray:
    psi = as_state(psi)
    if abs(norm_sq(psi) - 1.0) > tol:
        raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq(psi)!r}")
    return psi


def require_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Coerce to a square complex128 matrix and check A = A^dagger entrywise."""
    out = np.array(A, dtype=np.complex128, copy=True)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {out.shape}")
    if not np.all(np.isfinite(out.view(np.float64))):
        raise ValueError("operator contains non-finite entries")
    dev = np.max(np.abs(out - out.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return out


def require_projector(P, tol: float = PROJECTOR_TOL) -> np.ndarray:
    """Check Hermiticity, idempotence (Frobenius) and integer trace."""
    P = require_hermitian(P, tol=tol)
    idem = np.linalg.norm(P @ P - P)
    if idem > tol:
        raise ValueError(f"matrix is not idempotent (|P^2 - P|_F = {idem:.3e})")
    tr = float(np.real(np.trace(P)))
    if abs(tr - round(tr)) > tol or not (1 <= round(tr) <= P.shape[0]):
        raise ValueError(f"projector trace {tr!r} is not an integer rank in [1, n]")
    return P


def projector_rank(P) -> int:
    return int(round(float(np.real(np.trace(np.asarray(P))))))


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    eye = np.eye(U.shape[0])
    return bool(np.linalg.norm(U.conj().T @ U - eye) <= tol)


def expm_antihermitian(H, t: float) -> np.ndarray:
    """Return exp(-i H t) for Hermitian H.

    Uses scaling-and-squaring with a Pade core (scipy.linalg.expm), adequate
    for dense matrices up to a few hundred dimensions and |H t| <= 100.
    """
    H = require_hermitian(H)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("evolution time must be finite")
    return scipy.linalg.expm(-1j * t * H)


def evolve(psi0, H, t: float) -> np.ndarray:
    """Propagate a normalized state: psi(t) = exp(-i H t) psi0."""
    psi0 = require_normalized(psi0)
    H = require_hermitian(H)
    if H.shape[0] != psi0.size:
        raise ValueError(
            f"dimension mismatch: state has dim {psi0.size}, operator {H.shape[0]}"
        )
    return expm_antihermitian(H, t) @ psi0


def expectation_value(A, psi) -> float:
    """Unnormalized quadratic form <psi|A|psi> (real for Hermitian A)."""
    psi = np.asarray(psi, dtype=np.complex128)
    A = np.asarray(A, dtype=np.complex128)
    if A.shape[0] != psi.size:
        raise ValueError(
            f"dimension mismatch: state has dim {psi.size}, operator {A.shape[0]}"
        )
    return float(np.real(np.vdot(psi, A @ psi)))


def survival_amplitude(psi0, H, t: float) -> complex:
    """Overlap <psi0| exp(-i H t) |psi0> of the evolved state with itself."""
    psi0 = require_normalized(psi0)
    return complex(np.vdot(psi0, evolve(psi0, H, t)))


def survival_probability(psi0, H, t: float) -> float:
    """p(t) = |<psi0|exp(-iHt)|psi0>|^2, clipped to [0, 1] against roundoff."""
    a = survival_amplitude(psi0, H, t)
    return min(abs(a) ** 2, 1.0)


def variance(H, psi) -> float:
    """Homogeneous variance <H^2>/|psi|^2 - (<H>/|psi|^2)^2.

    The explicit norms make the value depend only on the ray of psi, so the
    input need not be normalized.
    """
    psi = as_state(psi)
    H = require_hermitian(H)
    n2 = norm_sq(psi)
    if n2 <= NORM_SQ_FLOOR:
        raise ValueError("variance undefined for a (near-)zero vector")
    Hpsi = H @ psi
    mean = float(np.real(np.vdot(psi, Hpsi))) / n2
    second = float(np.real(np.vdot(Hpsi, Hpsi))) / n2
    return second - mean * mean


def zeno_time(psi0, H) -> float:
    """Inverse standard deviation of H in psi0; +inf for an eigenstate.

    Sets the quadratic short-time decay scale of the survival probability,
    p(t) ~ 1 - t^2 * variance.
    """
    var = variance(H, psi0)
    if var <= VARIANCE_FLOOR:
        return math.inf
    return 1.0 / math.sqrt(var)


def spectral_norm(M, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value via power iteration on M^dagger M.

    Deterministic start vector, so repeated calls give identical results.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError("spectral_norm expects a matrix")
    B = M.conj().T @ M
    n = B.shape[0]
    # Slightly uneven start vector avoids being orthogonal to the top space.
    v = np.ones(n, dtype=np.complex128) + 1e-3 * np.arange(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = B @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float(np.real(np.vdot(v, B @ v)))
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-30):
            lam = lam_new
            break
        lam = lam_new
    return math.sqrt(max(lam, 0.0))


def short_time_coefficient(psi0, H) -> float:
    """Fit c in p(t) = 1 - c t^2 + O(t^4) by Richardson extrapolation.

    Evaluates g(t) = (1 - p(t)) / t^2 on t0 / 2^k and extrapolates in t^2;
    the survival probability is even in t, so g has a pure t^2 expansion.
    Raises ExtrapolationError when the tableau does not settle, i.e. the
    leading behavior is not quadratic to the expected accuracy.
    """
    psi0 = require_normalized(psi0)
    H = require_hermitian(H)
    scale = float(np.linalg.norm(H, 2))
    if scale == 0.0:
        return 0.0
    t0 = 0.1 / scale
    levels = 5
    ts = [t0 / 2**k for k in range(levels)]
    g = [(1.0 - survival_probability(psi0, H, t)) / t**2 for t in ts]
    # Richardson tableau in the variable h = t^2 (step ratio 4 per level).
    tab = list(g)
    best = [tab[0]]
    for m in range(1, levels):
        for k in range(levels - m):
            tab[k] = (4**m * tab[k + 1] - tab[k]) / (4**m - 1)
        best.append(tab[0])
    c, second_best = best[-1], best[-2]
    if abs(c - second_best) > max(1e-7 * abs(c), 1e-8 * scale**2):
        raise ExtrapolationError(
            f"short-time fit did not converge: last two estimates "
            f"{second_best!r} and {c!r} differ beyond tolerance"
        )
    return c
