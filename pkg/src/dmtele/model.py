"""Two-qubit Heisenberg chain with a Dzyaloshinskii-Moriya term along z.

Basis ordering everywhere is ``{|11>, |10>, |01>, |00>}`` with qubit 1 the
left tensor factor; ``|0>`` is the ground state of a single two-level site.
Temperatures are in units with Boltzmann's constant equal to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import bisect

from .linalg import (SIGMA_X, SIGMA_Y, SIGMA_Z, dag, hermitian_eig, kron,
                     mat_exp_hermitian)

__all__ = [
    "T_MIN",
    "ModelParams",
    "SpectrumEntry",
    "ThermalState",
    "boltzmann_exponents",
    "hamiltonian",
    "spectrum_closed_form",
    "log_partition_function",
    "partition_function",
    "thermal_state",
    "gibbs_state_oracle",
    "ground_state",
    "channel_concurrence",
    "critical_temperature",
    "critical_residual",
]

T_MIN = 1e-6

# state indices in the standard basis
I11, I10, I01, I00 = range(4)


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``J``, DM strength ``D`` and temperature ``T``.

    ``T`` below ``T_MIN`` (including zero) is clamped to ``T_MIN``; use
    :func:`ground_state` for the exact zero-temperature limit.
    """

    J: float
    D: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        for name in ("J", "D", "T"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)
        if self.T < 0:
            raise ValueError(f"temperature must be non-negative, got {self.T}")
        if self.T < T_MIN:
            object.__setattr__(self, "T", T_MIN)

    @property
    def beta(self) -> float:
        return 1.0 / self.T

    @property
    def delta(self) -> float:
        """``2 J sqrt(1 + D^2)``; carries the sign of ``J``."""
        return 2.0 * self.J * math.sqrt(1.0 + self.D * self.D)

    @property
    def phase(self) -> float:
        """Relative phase ``arctan(D)`` of the ``|10>`` component in ``|+->``."""
        return math.atan(self.D)


class SpectrumEntry(NamedTuple):
    energy: float
    state: np.ndarray
    label: str


@dataclass(frozen=True)
class ThermalState:
    Z: float
    rho: np.ndarray
    params: ModelParams
    log_Z: float


def _basis(index: int) -> np.ndarray:
    e = np.zeros(4, dtype=complex)
    e[index] = 1.0
    return e


def hamiltonian(params: ModelParams) -> np.ndarray:
    """Isotropic exchange plus the z-oriented DM term, assembled from Paulis."""
    J, D = params.J, params.D
    exchange = (kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y)
                + kron(SIGMA_Z, SIGMA_Z))
    dm = kron(SIGMA_X, SIGMA_Y) - kron(SIGMA_Y, SIGMA_X)
    h = 0.5 * J * (exchange + D * dm)
    return 0.5 * (h + dag(h))


def spectrum_closed_form(params: ModelParams) -> list[SpectrumEntry]:
    J = params.J
    root = math.sqrt(1.0 + params.D ** 2)
    ph = np.exp(1j * params.phase)
    s = 1.0 / math.sqrt(2.0)
    plus = s * (_basis(I01) + ph * _basis(I10))
    minus = s * (_basis(I01) - ph * _basis(I10))
    return [
        SpectrumEntry(0.5 * J, _basis(I00), "E00"),
        SpectrumEntry(0.5 * J, _basis(I11), "E11"),
        SpectrumEntry(J * root - 0.5 * J, plus, "Plus"),
        SpectrumEntry(-J * root - 0.5 * J, minus, "Minus"),
    ]


def boltzmann_exponents(params: ModelParams) -> tuple[float, float, float]:
    """Exponents ``-beta*E`` for the corner states, ``|+>`` and ``|->``.

    The two corner states share the first exponent.
    """
    b, J, d = params.beta, params.J, params.delta
    return -0.5 * b * J, 0.5 * b * (J - d), 0.5 * b * (J + d)


def log_partition_function(params: ModelParams) -> float:
    a, p, m = boltzmann_exponents(params)
    return float(np.logaddexp.reduce([a + math.log(2.0), p, m]))


def partition_function(params: ModelParams) -> float:
    """``Z = 2 exp(-beta J/2) (1 + exp(beta J) cosh(beta delta/2))``.

    Evaluated through the log form; overflows to ``inf`` only when ``Z``
    itself is not representable.
    """
    with np.errstate(over="ignore"):
        return float(np.exp(log_partition_function(params)))


def _scaled_weights(params: ModelParams) -> tuple[float, float, float, float]:
    # weights divided by the largest Boltzmann factor, plus their sum
    a, p, m = boltzmann_exponents(params)
    top = max(a, p, m)
    wa, wp, wm = math.exp(a - top), math.exp(p - top), math.exp(m - top)
    return wa, wp, wm, 2.0 * wa + wp + wm


def thermal_state(params: ModelParams) -> ThermalState:
    """Closed-form Gibbs state in the X-shaped standard-basis layout.

    Corners carry ``exp(-beta J/2)/Z``; the central block holds
    ``(1/2) e^{beta(J-delta)/2} (1 +- e^{beta delta})/Z`` with the coherence
    phase ``exp(+-i arctan D)``. All weights are scaled by the largest
    Boltzmann factor before normalization, so no intermediate overflows.
    """
    wa, wp, wm, zs = _scaled_weights(params)
    ph = np.exp(1j * params.phase)
    rho = np.zeros((4, 4), dtype=complex)
    rho[I11, I11] = rho[I00, I00] = wa / zs
    rho[I10, I10] = rho[I01, I01] = 0.5 * (wp + wm) / zs
    rho[I10, I01] = 0.5 * ph * (wp - wm) / zs
    rho[I01, I10] = np.conj(rho[I10, I01])
    log_z = log_partition_function(params)
    with np.errstate(over="ignore"):
        z = float(np.exp(log_z))
    return ThermalState(Z=z, rho=rho, params=params, log_Z=log_z)


def gibbs_state_oracle(params: ModelParams) -> np.ndarray:
    """``exp(-beta H)/tr(.)`` from the numerical eigendecomposition of ``H``.

    The Hamiltonian is shifted by its smallest eigenvalue first; the shift
    cancels in the normalization.
    """
    h = hamiltonian(params)
    shift = hermitian_eig(h).eigenvalues[0]
    g = mat_exp_hermitian(h - shift * np.eye(4), -params.beta)
    return g / np.trace(g).real


def ground_state(params: ModelParams, atol: float = 1e-12) -> np.ndarray:
    """Zero-temperature limit of the Gibbs state.

    Returns the uniform mixture over the (possibly degenerate) ground
    manifold of the closed-form spectrum; the temperature in ``params``
    is ignored.
    """
    entries = spectrum_closed_form(params)
    e0 = min(e.energy for e in entries)
    scale = max(1.0, abs(e0))
    manifold = [e.state for e in entries if e.energy - e0 <= atol * scale]
    rho = sum(np.outer(v, v.conj()) for v in manifold)
    return rho / len(manifold)


def channel_concurrence(params: ModelParams) -> float:
    """Concurrence of the thermal state from its closed form.

    ``(2/Z) max(|rho_23| Z - exp(-beta J/2), 0)``, evaluated with scaled
    Boltzmann weights.
    """
    wa, wp, wm, zs = _scaled_weights(params)
    excess = 0.5 * abs(wp - wm) - wa
    if excess <= 0.0:
        return 0.0
    return 2.0 * excess / zs


def _log_abs_sinh(x: float) -> float:
    x = abs(x)
    if x == 0.0:
        return -math.inf
    return x + math.log(-math.expm1(-2.0 * x) / 2.0)


def _log_entanglement_margin(J: float, D: float, T: float) -> float:
    # log(e^{J/T} |sinh(delta/2T)|); positive exactly where the channel is entangled
    delta = 2.0 * J * math.sqrt(1.0 + D * D)
    return J / T + _log_abs_sinh(delta / (2.0 * T))


def critical_residual(J: float, D: float, T: float) -> float:
    """``e^{J/T} sinh(delta/2T) - sign(J)``, the vanishing-entanglement condition.

    Direct evaluation; overflows for very small ``T``. Root finding uses the
    logarithm of the left-hand side instead, which has the same zeros.
    """
    delta = 2.0 * J * math.sqrt(1.0 + D * D)
    return math.exp(J / T) * math.sinh(delta / (2.0 * T)) - math.copysign(1.0, J)


def _highest_crossing(f, t_lo: float, t_hi: float, n: int, xtol: float,
                      max_extend: int = 60) -> Optional[float]:
    """Largest ``T`` where ``f`` changes from positive (below) to non-positive (above).

    Scans a geometric grid, extending the upper end while ``f`` is still
    positive there, then bisects the bracketing interval.
    """
    for _ in range(max_extend):
        if f(t_hi) <= 0.0:
            break
        t_hi *= 2.0
    else:
        return None
    grid = np.geomspace(t_lo, t_hi, n)
    vals = np.array([f(t) for t in grid])
    positive = vals > 0.0
    if not positive.any():
        return None
    k = int(np.nonzero(positive)[0][-1])
    if k == len(grid) - 1:
        return None
    return float(bisect(f, grid[k], grid[k + 1], xtol=xtol, rtol=4 * np.finfo(float).eps,
                        maxiter=200))


def critical_temperature(J: float, D: float = 0.0, *, n_scan: int = 400,
                         xtol: float = 1e-12) -> Optional[float]:
    """Temperature above which the thermal concurrence vanishes.

    Solves ``e^{J/T} sinh(delta/2T) = 1`` for ``J > 0`` and ``= -1`` for
    ``J < 0``. The bracket comes from a geometric scan of ``T`` over
    ``[1e-3, 50 max(1, |J| sqrt(1+D^2))]``. Returns ``None`` when the
    channel is never entangled on that range (for example ``J < 0, D = 0``).

    Raises
    ------
    ValueError
        If ``J == 0``.
    """
    J = float(J)
    D = float(D)
    if J == 0.0:
        raise ValueError("critical temperature is undefined for J = 0")
    t_hi = 50.0 * max(1.0, abs(J) * math.sqrt(1.0 + D * D))
    return _highest_crossing(lambda t: _log_entanglement_margin(J, D, t),
                             1e-3, t_hi, n_scan, xtol)
