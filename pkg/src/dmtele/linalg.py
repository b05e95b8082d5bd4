"""Small dense complex linear algebra for 2x2, 4x4 and 8x8 operators.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic complex Jacobi iteration, which is exact enough and fast enough for
the fixed tiny problem sizes used throughout the package.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "HERMITIAN_ATOL",
    "PSD_REJECT",
    "NotHermitianError",
    "NonConvergenceError",
    "EigResult",
    "I2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "PAULI",
    "dag",
    "kron",
    "is_hermitian",
    "hermitian_eig",
    "mat_exp_hermitian",
    "psd_sqrt",
    "psd_factor",
    "nuclear_norm",
]

HERMITIAN_ATOL = 1e-12
PSD_REJECT = 1e-8

JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-14
_TINY = np.finfo(float).tiny


class NotHermitianError(ValueError):
    pass


class NonConvergenceError(np.linalg.LinAlgError):
    pass


class EigResult(NamedTuple):
    """Eigenvalues in ascending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


# Single-qubit operators in the local ordering (|1>, |0>), so that kron()
# reproduces the two-qubit ordering {|11>, |10>, |01>, |00>}.
I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |0><1|
PAULI = np.stack([I2, SIGMA_X, SIGMA_Y, SIGMA_Z])


def dag(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 matrices.

    ``out[2*i + k, 2*j + l] = a[i, j] * b[k, l]``; the left factor is qubit 1.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.einsum("ij,kl->ikjl", a, b).reshape(4, 4).astype(complex)


def _scale(h: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(h))))


def is_hermitian(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return bool(np.max(np.abs(h - dag(h)), initial=0.0) <= atol * _scale(h))


def _check_square(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    return h


def hermitian_eig(h: np.ndarray, *, max_sweeps: int = JACOBI_MAX_SWEEPS,
                  tol: float = JACOBI_TOL) -> EigResult:
    """Eigendecomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation, so ``a[p, q]`` is zeroed
    exactly. Sweeps continue until the off-diagonal Frobenius norm drops
    below ``tol * max(1, ||h||_F)``.

    Parameters
    ----------
    h : (n, n) complex array
        Hermitian within ``HERMITIAN_ATOL``.
    max_sweeps : int
        Number of full cyclic sweeps before giving up.
    tol : float
        Relative off-diagonal tolerance.

    Returns
    -------
    EigResult
        Ascending eigenvalues and unitary eigenvector matrix (columns).

    Raises
    ------
    NotHermitianError
        If ``h`` is not Hermitian.
    NonConvergenceError
        If the off-diagonal part has not vanished after ``max_sweeps`` sweeps.
    """
    h = _check_square(h)
    if not is_hermitian(h):
        raise NotHermitianError("hermitian_eig requires a Hermitian matrix")
    n = h.shape[0]
    a = 0.5 * (h + dag(h))
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * sum(abs(a[p, q]) ** 2 for p, q in pairs))
        if off <= threshold:
            break
        for p, q in pairs:
            apq = a[p, q]
            r = abs(apq)
            if r < _TINY:
                a[p, q] = a[q, p] = 0.0
                continue
            phase = apq / r
            app = a[p, p].real
            aqq = a[q, q].real
            with np.errstate(over="ignore", divide="ignore"):
                tau = (aqq - app) / (2.0 * r)
            if not np.isfinite(tau):
                # pivot is negligible against the diagonal gap
                a[p, q] = a[q, p] = 0.0
                continue
            t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # G = diag-phase * real rotation, acting on columns p and q
            g_pp, g_pq = c, s
            g_qp, g_qq = -s * np.conj(phase), c * np.conj(phase)
            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = col_p * g_pp + col_q * g_qp
            a[:, q] = col_p * g_pq + col_q * g_qq
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = np.conj(g_pp) * row_p + np.conj(g_qp) * row_q
            a[q, :] = np.conj(g_pq) * row_p + np.conj(g_qq) * row_q
            a[p, q] = a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = vp * g_pp + vq * g_qp
            v[:, q] = vp * g_pq + vq * g_qq
    else:
        off = np.sqrt(2.0 * sum(abs(a[p, q]) ** 2 for p, q in pairs))
        if off > threshold:
            raise NonConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e})")

    w = np.real(np.diag(a))
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise NonConvergenceError("Jacobi eigensolver produced non-finite values")
    order = np.argsort(w, kind="stable")
    return EigResult(w[order], v[:, order])


def mat_exp_hermitian(h: np.ndarray, s: float) -> np.ndarray:
    """Return ``exp(s * h)`` for Hermitian ``h`` and real ``s``."""
    w, v = hermitian_eig(h)
    return (v * np.exp(s * w)) @ dag(v)


def _clamped_sqrt(w: np.ndarray, scale: float) -> np.ndarray:
    if np.min(w) < -PSD_REJECT * scale:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {np.min(w):.3e})")
    return np.sqrt(np.clip(w, 0.0, None))


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues slightly below zero (rounding noise) are clamped to zero;
    anything below ``-PSD_REJECT`` is rejected.
    """
    m = _check_square(m)
    w, v = hermitian_eig(m)
    root = _clamped_sqrt(w, _scale(m))
    r = (v * root) @ dag(v)
    return 0.5 * (r + dag(r))


def psd_factor(m: np.ndarray, rtol: float = 16 * np.finfo(float).eps) -> np.ndarray:
    """Return ``W`` with ``m = W W^dag`` for Hermitian PSD ``m``.

    Eigenvalues below ``rtol * max(eigenvalue)`` are treated as zero, so a
    rank-deficient ``m`` yields exactly zero columns instead of columns of
    size ``sqrt(eps)``.
    """
    m = _check_square(m)
    w, v = hermitian_eig(m)
    root = _clamped_sqrt(w, _scale(m))
    root[w <= rtol * max(float(w[-1]), 0.0)] = 0.0
    return v * root


def nuclear_norm(a: np.ndarray) -> float:
    """Sum of singular values, from the Hermitian dilation ``[[0, a], [a^dag, 0]]``.

    The dilation has eigenvalues ``+-s_i``, so no eigenvalue is square-rooted.
    """
    a = np.asarray(a, dtype=complex)
    n, k = a.shape
    block = np.zeros((n + k, n + k), dtype=complex)
    block[:n, n:] = a
    block[n:, :n] = dag(a)
    w = hermitian_eig(block).eigenvalues
    return float(np.sum(np.clip(w[-min(n, k):], 0.0, None)))
