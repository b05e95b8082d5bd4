"""Entanglement teleportation through two copies of the thermal channel.

A two-qubit pure input ``cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>`` is
sent qubit-by-qubit through two independent copies of the Gibbs state. The
standard Bell-measurement protocol turns each copy into a Pauli channel whose
weights are the Bell-state populations of the resource, so the output is

    rho_out = sum_ij p_ij (s_i x s_j) rho_in (s_i x s_j),
    p_ij = tr(E^i rho) tr(E^j rho).

Bell projector ``E^k`` pairs with the Pauli correction ``s_k`` in the order
``(Psi-, Phi-, Phi+, Psi+) <-> (I, X, Y, Z)``: each ``E^k`` projects on
``(I x s_k)|Psi->``, which makes a pure ``|Psi->`` resource an identity
channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .concurrence import check_density_matrix, wootters_concurrence
from .linalg import PAULI, dag, nuclear_norm, psd_factor, psd_sqrt
from .model import (ModelParams, ThermalState, _highest_crossing,
                    _scaled_weights, log_partition_function, thermal_state)

__all__ = [
    "CLASSICAL_FIDELITY",
    "PureInput",
    "ChannelProbs",
    "BELL_STATES",
    "PAULI_PAIRS",
    "bell_projectors",
    "bell_populations",
    "bell_populations_closed",
    "channel_probabilities",
    "channel_probabilities_closed",
    "teleport_output",
    "output_concurrence_oracle",
    "output_concurrence_paper",
    "fidelity",
    "fidelity_general",
    "uhlmann_fidelity",
    "average_fidelity_closed",
    "average_fidelity_quadrature",
    "classical_threshold_temperature",
]

CLASSICAL_FIDELITY = 2.0 / 3.0
_ANGLE_SLACK = 1e-12

_S = 1.0 / math.sqrt(2.0)
# basis {11, 10, 01, 00}
BELL_STATES = np.array([
    [0, -_S, _S, 0],   # Psi- = (|01> - |10>)/sqrt2
    [-_S, 0, 0, _S],   # Phi- = (|00> - |11>)/sqrt2
    [_S, 0, 0, _S],    # Phi+ = (|00> + |11>)/sqrt2
    [0, _S, _S, 0],    # Psi+ = (|01> + |10>)/sqrt2
], dtype=complex)

# PAULI_PAIRS[4*i + j] = s_i x s_j
PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", PAULI, PAULI).reshape(16, 4, 4)


@dataclass(frozen=True)
class PureInput:
    """Input angles; ``theta`` in ``[0, pi]``, ``phi`` in ``[0, 2 pi]``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not -_ANGLE_SLACK <= theta <= math.pi + _ANGLE_SLACK:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        if not -_ANGLE_SLACK <= phi <= 2 * math.pi + _ANGLE_SLACK:
            raise ValueError(f"phi must lie in [0, 2 pi], got {phi}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_concurrence(cls, c_in: float, phi: float = 0.0) -> "PureInput":
        """Input with ``theta <= pi/2`` whose concurrence is ``c_in``."""
        if not 0.0 <= c_in <= 1.0:
            raise ValueError(f"input concurrence must lie in [0, 1], got {c_in}")
        return cls(math.asin(c_in), phi)

    @property
    def state(self) -> np.ndarray:
        return _input_states(np.array([self.theta]), np.array([self.phi]))[0]

    @property
    def rho(self) -> np.ndarray:
        v = self.state
        return np.outer(v, v.conj())

    @property
    def concurrence(self) -> float:
        return abs(math.sin(self.theta))


@dataclass(frozen=True)
class ChannelProbs:
    """Bell populations of one channel copy and the product table ``p_ij``."""

    traces: np.ndarray
    p: np.ndarray

    @classmethod
    def from_traces(cls, traces) -> "ChannelProbs":
        t = np.clip(np.asarray(traces, dtype=float), 0.0, None)
        return cls(traces=t, p=np.outer(t, t))


def _input_states(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    out = np.zeros((theta.size, 4), dtype=complex)
    out[:, 1] = np.cos(theta / 2)
    out[:, 2] = np.exp(1j * phi) * np.sin(theta / 2)
    return out


def bell_projectors() -> np.ndarray:
    """The projectors ``E^0..E^3`` as an array of shape ``(4, 4, 4)``."""
    return np.einsum("ka,kb->kab", BELL_STATES, BELL_STATES.conj())


def bell_populations(rho) -> np.ndarray:
    """``tr(E^k rho)`` for ``k = 0..3`` by direct evaluation."""
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("ka,ab,kb->k", BELL_STATES.conj(), rho, BELL_STATES))


def bell_populations_closed(params: ModelParams) -> np.ndarray:
    """Closed-form Bell populations of the thermal state.

    ``tr(E^0 rho) = e^{beta J/2} [cosh(beta delta/2) + cos(arctan D) sinh(beta delta/2)] / Z``,
    ``E^3`` takes the minus sign, and ``E^1``, ``E^2`` each get the corner
    weight ``e^{-beta J/2} / Z``.
    """
    wa, wp, wm, zs = _scaled_weights(params)
    c = 1.0 / math.sqrt(1.0 + params.D ** 2)
    ch = 0.5 * (wp + wm)
    sh = 0.5 * (wm - wp)
    return np.array([ch + c * sh, wa, wa, ch - c * sh]) / zs


def channel_probabilities(channel: ThermalState) -> ChannelProbs:
    return ChannelProbs.from_traces(bell_populations(channel.rho))


def channel_probabilities_closed(params: ModelParams) -> ChannelProbs:
    return ChannelProbs.from_traces(bell_populations_closed(params))


def _weights(probs) -> np.ndarray:
    p = probs.p if isinstance(probs, ChannelProbs) else np.asarray(probs, dtype=float)
    if p.shape != (4, 4):
        raise ValueError(f"channel probability table must be 4x4, got {p.shape}")
    return p.reshape(16)


def _apply_channel(rho_in: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # rho_in: (..., 4, 4); Pauli products are Hermitian so K rho K^dag = K rho K
    conj = PAULI_PAIRS @ rho_in[..., None, :, :] @ PAULI_PAIRS
    return np.tensordot(conj, weights, axes=([-3], [0]))


def teleport_output(inp: PureInput, probs) -> np.ndarray:
    """Output state of the two-copy protocol for a pure input."""
    rho = _apply_channel(inp.rho, _weights(probs))
    return 0.5 * (rho + rho.conj().T)


def output_concurrence_oracle(params: ModelParams, inp: PureInput) -> float:
    """Concurrence of the teleported state, built from the full protocol."""
    probs = channel_probabilities(thermal_state(params))
    return wootters_concurrence(teleport_output(inp, probs))


def output_concurrence_paper(params: ModelParams, c_in: float) -> float:
    """Output concurrence from the published closed form, evaluated as printed.

    ``max(2 [c_in e^{beta J} sinh^2(beta delta/2) - 2(1+D^2) cosh(beta delta/2)]
    / (Z^2 (1+D^2)), 0)``

    This expression is exactly half of what the protocol produces (see
    :func:`output_concurrence_oracle`); it is kept for comparison only.
    """
    b, J, D2 = params.beta, params.J, params.D ** 2
    x = 0.5 * b * abs(params.delta)
    two_log_z = 2.0 * log_partition_function(params)
    em = math.exp(-2.0 * x)
    sinh_sq = math.exp(b * J + 2.0 * x - two_log_z) * (-math.expm1(-2.0 * x)) ** 2 / 4.0
    cosh = math.exp(x - two_log_z) * (1.0 + em) / 2.0
    value = 2.0 * (c_in * sinh_sq - 2.0 * (1.0 + D2) * cosh) / (1.0 + D2)
    return max(value, 0.0)


def uhlmann_fidelity(rho, sigma, method: str = "nuclear") -> float:
    """``(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` for arbitrary density matrices.

    ``"nuclear"`` (default) uses ``tr sqrt(sqrt(rho) sigma sqrt(rho)) =
    ||W_sigma^dag W_rho||_1`` with ``rho = W_rho W_rho^dag``; this keeps
    full precision when either state is (nearly) pure. ``"sqrt"`` evaluates
    the nested square roots literally and loses about half the digits in
    that case.
    """
    sigma = np.asarray(sigma, dtype=complex)
    if method == "nuclear":
        return nuclear_norm(dag(psd_factor(sigma)) @ psd_factor(rho)) ** 2
    if method == "sqrt":
        root = psd_sqrt(rho)
        inner = root @ sigma @ root
        return float(np.trace(psd_sqrt(0.5 * (inner + dag(inner)))).real ** 2)
    raise ValueError(f"unknown method {method!r}")


def fidelity_general(inp: PureInput, rho_out) -> float:
    return uhlmann_fidelity(inp.rho, check_density_matrix(rho_out))


def fidelity(inp: PureInput, rho_out) -> float:
    """Fidelity of ``rho_out`` with the pure input, ``<psi| rho_out |psi>``."""
    v = inp.state
    return float(np.real(v.conj() @ np.asarray(rho_out) @ v))


def average_fidelity_closed(params: ModelParams) -> float:
    """Average teleportation fidelity over all input angles, closed form.

    ``{2(1+D^2) + e^{2 beta J} [1 + 2D^2 + (3+2D^2) cosh(beta delta)]}
    / {6 (1+D^2) (1 + e^{beta J} cosh(beta delta/2))^2}``, evaluated in
    log space.
    """
    b, J, D2 = params.beta, params.J, params.D ** 2
    d = params.delta
    ln2 = math.log(2.0)
    log_num = np.logaddexp.reduce([
        math.log(2.0 * (1.0 + D2)),
        math.log(1.0 + 2.0 * D2) + 2.0 * b * J,
        math.log(3.0 + 2.0 * D2) + 2.0 * b * J + b * d - ln2,
        math.log(3.0 + 2.0 * D2) + 2.0 * b * J - b * d - ln2,
    ])
    log_inner = np.logaddexp.reduce([0.0, b * J + 0.5 * b * d - ln2,
                                     b * J - 0.5 * b * d - ln2])
    return float(math.exp(log_num - math.log(6.0 * (1.0 + D2)) - 2.0 * log_inner))


def average_fidelity_quadrature(params: ModelParams, n_theta: int = 32,
                                n_phi: int = 32) -> float:
    """Average fidelity by direct integration of the protocol over input angles.

    Gauss-Legendre nodes in ``cos(theta)`` absorb the ``sin(theta)`` weight;
    ``phi`` uses the periodic trapezoid rule.
    """
    if n_theta < 8 or n_phi < 8:
        raise ValueError("quadrature needs at least 8 nodes per axis")
    u, w = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    theta_grid, phi_grid = np.meshgrid(np.arccos(u), phis, indexing="ij")
    states = _input_states(theta_grid.ravel(), phi_grid.ravel())
    rho_in = np.einsum("na,nb->nab", states, states.conj())
    probs = channel_probabilities(thermal_state(params))
    rho_out = _apply_channel(rho_in, _weights(probs))
    f = np.real(np.einsum("na,nab,nb->n", states.conj(), rho_out, states))
    f = f.reshape(n_theta, n_phi)
    return float(np.sum(w[:, None] * f) / (2.0 * n_phi))


def classical_threshold_temperature(J: float, D: float = 0.0, *, n_scan: int = 400,
                                    xtol: float = 1e-12) -> Optional[float]:
    """Largest temperature at which the average fidelity still beats 2/3.

    Scans ``T`` over 400 log-spaced points in ``[1e-3, 10 max(1, |J|)]`` and
    bisects the last crossing. Returns ``None`` if the average fidelity never
    exceeds 2/3 on the scan.

    Raises
    ------
    ValueError
        If ``J == 0``.
    """
    J = float(J)
    D = float(D)
    if J == 0.0:
        raise ValueError("classical threshold temperature is undefined for J = 0")

    def margin(t):
        return average_fidelity_closed(ModelParams(J, D, t)) - CLASSICAL_FIDELITY

    return _highest_crossing(margin, 1e-3, 10.0 * max(1.0, abs(J)), n_scan, xtol)
