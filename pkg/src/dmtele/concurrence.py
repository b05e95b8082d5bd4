"""Two-qubit concurrence: general Wootters form, X-state shortcut, pure input."""
from __future__ import annotations

import math

import numpy as np

from .linalg import (HERMITIAN_ATOL, SIGMA_Y, dag, hermitian_eig, is_hermitian,
                     kron)

__all__ = [
    "SPIN_FLIP",
    "X_ATOL",
    "check_density_matrix",
    "is_x_state",
    "wootters_lambdas",
    "wootters_concurrence",
    "xstate_concurrence",
    "pure_input_concurrence",
]

SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)
X_ATOL = 1e-12
TRACE_ATOL = 1e-12
MIN_EIGENVALUE = -1e-10

# entries forced to zero in an X state (basis {11, 10, 01, 00})
_X_FORBIDDEN = np.array([[0, 1, 1, 0],
                         [1, 0, 0, 1],
                         [1, 0, 0, 1],
                         [0, 1, 1, 0]], dtype=bool)


def check_density_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not is_hermitian(rho, HERMITIAN_ATOL):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_ATOL:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    return rho


def wootters_lambdas(rho, method: str = "dilation") -> np.ndarray:
    """Square roots of the eigenvalues of ``rho S rho* S``, in descending order.

    Both methods stay within Hermitian eigenproblems:

    ``"dilation"`` (default)
        Factor ``rho = W W^dag`` with ``W = V sqrt(w)``. The lambdas are the
        singular values of the symmetric matrix ``W^T S W``, read off as the
        non-negative eigenvalues of ``[[0, tau], [tau^dag, 0]]``. No square
        root of a computed eigenvalue is taken, so lambdas near zero keep
        full absolute precision.
    ``"squared"``
        Eigenvalues of ``sqrt(rho) (S rho* S) sqrt(rho)``, square-rooted.
        Lambdas near zero carry errors of order ``sqrt(eps)``.
    """
    rho = check_density_matrix(rho)
    w, v = hermitian_eig(rho)
    if w[0] < MIN_EIGENVALUE:
        raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    if method == "dilation":
        factor = v * np.sqrt(w)
        tau = factor.T @ SPIN_FLIP @ factor
        block = np.zeros((8, 8), dtype=complex)
        block[:4, 4:] = tau
        block[4:, :4] = dag(tau)
        sv = hermitian_eig(block).eigenvalues[4:]
        return np.sort(np.clip(sv, 0.0, None))[::-1]
    if method == "squared":
        root = (v * np.sqrt(w)) @ dag(v)
        flipped = SPIN_FLIP @ rho.conj() @ SPIN_FLIP
        m = root @ flipped @ root
        mu = hermitian_eig(0.5 * (m + dag(m))).eigenvalues
        return np.sqrt(np.clip(mu, 0.0, None))[::-1]
    raise ValueError(f"unknown method {method!r}")


def wootters_concurrence(rho, method: str = "dilation") -> float:
    """``max(0, l1 - l2 - l3 - l4)`` over the descending Wootters lambdas."""
    lam = wootters_lambdas(rho, method)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def is_x_state(rho, atol: float = X_ATOL) -> bool:
    rho = np.asarray(rho)
    return bool(np.all(np.abs(rho[_X_FORBIDDEN]) <= atol))


def xstate_concurrence(rho) -> float:
    """``2 max(0, |r23| - sqrt(r11 r44), |r14| - sqrt(r22 r33))`` for X states."""
    rho = check_density_matrix(rho)
    if not is_x_state(rho):
        raise ValueError("xstate_concurrence requires an X-structured density matrix")
    d = np.clip(np.real(np.diag(rho)), 0.0, None)
    inner = abs(rho[1, 2]) - math.sqrt(d[0] * d[3])
    outer = abs(rho[0, 3]) - math.sqrt(d[1] * d[2])
    return float(2.0 * max(0.0, inner, outer))


def pure_input_concurrence(theta: float, phi: float = 0.0) -> float:
    """Concurrence of ``cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>``.

    ``2 |sin(theta/2) cos(theta/2) e^{i phi}| = |sin(theta)|``; the phase
    drops out.
    """
    return abs(math.sin(theta))
