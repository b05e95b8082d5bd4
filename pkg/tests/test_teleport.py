import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmtele.concurrence import (check_density_matrix, is_x_state,
                                pure_input_concurrence, wootters_concurrence)
from dmtele.linalg import PAULI, kron
from dmtele.model import ModelParams, thermal_state
from dmtele.teleport import (BELL_STATES, CLASSICAL_FIDELITY, ChannelProbs, PureInput,
                             average_fidelity_closed, average_fidelity_quadrature,
                             bell_populations, bell_populations_closed, bell_projectors,
                             channel_probabilities, channel_probabilities_closed,
                             classical_threshold_temperature, fidelity, fidelity_general,
                             output_concurrence_oracle, output_concurrence_paper,
                             teleport_output, uhlmann_fidelity)

couplings = st.floats(-2, 2).filter(lambda j: abs(j) > 1e-3)
dm = st.floats(-3, 3)
temps = st.floats(0.05, 5)
thetas = st.floats(0, math.pi)
phis = st.floats(0, 2 * math.pi)

SMALL_GRID = [ModelParams(j, d, t)
              for j in (-2, -1, -0.3, 0.3, 1, 2)
              for d in (0, 0.5, 1.5, 3)
              for t in (0.05, 0.2, 0.7, 2, 5)]


def single_qubit_teleport(resource, rho_in):
    """Brute-force standard teleportation of one qubit through ``resource``.

    Qubits: 0 = input, (1, 2) = resource; Bell measurement on (0, 1) in the
    basis ``(Psi-, Phi-, Phi+, Psi+)``, correction ``s_k`` on qubit 2.
    """
    full = np.kron(rho_in, resource)
    out = np.zeros((2, 2), dtype=complex)
    for k in range(4):
        proj = np.kron(np.outer(BELL_STATES[k], BELL_STATES[k].conj()), np.eye(2))
        post = (proj @ full @ proj).reshape(4, 2, 4, 2)
        reduced = np.einsum("aiaj->ij", post)
        out += PAULI[k] @ reduced @ PAULI[k]
    return out


def test_bell_projectors_properties():
    e = bell_projectors()
    assert e.shape == (4, 4, 4)
    for p in e:
        np.testing.assert_allclose(p, p.conj().T, atol=1e-15)
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        assert np.trace(p).real == pytest.approx(1.0)
        assert np.linalg.matrix_rank(p) == 1
    np.testing.assert_allclose(e.sum(axis=0), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(e[0] @ BELL_STATES[0], BELL_STATES[0], atol=1e-15)


def test_bell_states_are_singlet_images():
    # E^k projects onto (I x s_k)|Psi->, which fixes the correction map
    for k in range(4):
        v = kron(np.eye(2), PAULI[k]) @ BELL_STATES[0]
        assert abs(np.vdot(BELL_STATES[k], v)) == pytest.approx(1.0, abs=1e-15)


def test_bell_populations_closed_matches_trace():
    params = ModelParams(1.0, 1.0, 0.5)
    p_closed = channel_probabilities_closed(params).p
    p_trace = channel_probabilities(thermal_state(params)).p
    np.testing.assert_allclose(p_closed, p_trace, atol=1e-12)


def test_channel_probabilities_on_grid():
    for params in SMALL_GRID:
        probs = channel_probabilities(thermal_state(params))
        assert np.all(probs.p >= 0)
        assert probs.p.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(probs.traces, bell_populations_closed(params), atol=1e-12)
        assert probs.traces[1] == pytest.approx(probs.traces[2], abs=1e-15)


def test_channel_probabilities_limits():
    hot = channel_probabilities(thermal_state(ModelParams(1.0, 0.0, 1e6)))
    np.testing.assert_allclose(hot.traces, 0.25, atol=1e-6)
    np.testing.assert_allclose(hot.p, 1 / 16, atol=1e-6)
    cold = channel_probabilities(thermal_state(ModelParams(1.0, 0.0, 0.01)))
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(cold.p, expected, atol=1e-6)


def test_identity_channel():
    p = np.zeros((4, 4))
    p[0, 0] = 1.0
    inp = PureInput(1.1, 2.3)
    np.testing.assert_allclose(teleport_output(inp, p), inp.rho, atol=1e-15)


@given(thetas, phis)
def test_fully_depolarizing_channel(theta, phi):
    out = teleport_output(PureInput(theta, phi), np.full((4, 4), 1 / 16))
    np.testing.assert_allclose(out, np.eye(4) / 4, atol=1e-15)


@given(couplings, dm, temps)
@settings(max_examples=50, deadline=None)
def test_pauli_channel_matches_brute_force_protocol(J, D, T):
    # each copy of the resource acts on one qubit of the input pair
    params = ModelParams(J, D, T)
    resource = thermal_state(params).rho
    probs = channel_probabilities(thermal_state(params))
    rng = np.random.default_rng(abs(hash((J, D, T))) % 2**32)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    out = single_qubit_teleport(resource, np.outer(v, v.conj()))
    pauli_out = sum(probs.traces[k] * PAULI[k] @ np.outer(v, v.conj()) @ PAULI[k] for k in range(4))
    np.testing.assert_allclose(out, pauli_out, atol=1e-12)


def test_output_is_x_state_with_oracle_concurrence():
    params = ModelParams(1.0, 0.0, 0.5)
    inp = PureInput(math.pi / 2, 0.0)
    out = teleport_output(inp, channel_probabilities(thermal_state(params)))
    assert is_x_state(out)
    assert wootters_concurrence(out) == pytest.approx(output_concurrence_oracle(params, inp), abs=1e-15)


def test_outputs_are_density_matrices_on_grid():
    for params in SMALL_GRID:
        probs = channel_probabilities(thermal_state(params))
        for theta in (0.0, 0.7, math.pi / 2, 2.5, math.pi):
            out = check_density_matrix(teleport_output(PureInput(theta, 1.3), probs))
            assert np.min(np.linalg.eigvalsh(out)) >= -1e-12


def test_oracle_faithful_at_low_temperature():
    assert output_concurrence_oracle(ModelParams(1.0, 0.0, 0.01), PureInput(math.pi / 2)) == \
        pytest.approx(1.0, abs=1e-4)


def test_oracle_vanishes_above_one():
    assert output_concurrence_oracle(ModelParams(1.0, 0.0, 1.2), PureInput(math.pi / 2)) == 0.0


def test_oracle_switch_off_temperature_for_maximal_input():
    # zero crossing sits just above T = 1 (read off a plot as "T > 1")
    on = output_concurrence_oracle(ModelParams(1.0, 0.0, 1.0), PureInput(math.pi / 2))
    off = output_concurrence_oracle(ModelParams(1.0, 0.0, 1.1), PureInput(math.pi / 2))
    assert on > 0.0 and off == 0.0


@pytest.mark.parametrize("T", [0.05, 0.1, 0.5, 1.0, 3.0])
def test_unentangled_channel_gives_no_output_entanglement(T):
    for theta in np.linspace(0, math.pi, 9):
        assert output_concurrence_oracle(ModelParams(-1.0, 0.0, T), PureInput(theta, 0.4)) == 0.0


def test_oracle_phase_independent():
    for params in SMALL_GRID[::7]:
        ref = output_concurrence_oracle(params, PureInput(0.9, 0.0))
        for phi in np.linspace(0, 2 * math.pi, 7):
            assert output_concurrence_oracle(params, PureInput(0.9, phi)) == pytest.approx(ref, abs=1e-10)


def test_oracle_affine_in_input_concurrence():
    params = ModelParams(1.0, 0.5, 0.4)
    thetas_ = np.linspace(0, math.pi / 2, 60)
    c_in = np.array([pure_input_concurrence(t) for t in thetas_])
    c_out = np.array([output_concurrence_oracle(params, PureInput(t)) for t in thetas_])
    pos = c_out > 0
    coef = np.polyfit(c_in[pos], c_out[pos], 1)
    assert np.max(np.abs(np.polyval(coef, c_in[pos]) - c_out[pos])) < 1e-8


def test_paper_formula_zero_input():
    for params in SMALL_GRID:
        assert output_concurrence_paper(params, 0.0) == 0.0


def test_paper_formula_affine():
    params = ModelParams(1.0, 0.0, 0.3)
    c = np.linspace(0.5, 1.0, 11)
    vals = np.array([output_concurrence_paper(params, x) for x in c])
    assert np.all(vals > 0)
    np.testing.assert_allclose(np.diff(vals, 2), 0.0, atol=1e-14)


def test_paper_formula_literal_evaluation():
    # direct transcription, safe at moderate temperature
    for J, D, T, c_in in [(1, 0, 0.5, 1.0), (-1, 2, 0.3, 0.8), (2, 0.5, 1.0, 0.6)]:
        b, d = 1 / T, 2 * J * math.sqrt(1 + D * D)
        z = 2 * math.exp(-b * J / 2) * (1 + math.exp(b * J) * math.cosh(b * d / 2))
        lit = max(2 * (c_in * math.exp(b * J) * math.sinh(b * d / 2) ** 2
                       - 2 * (1 + D * D) * math.cosh(b * d / 2)) / (z * z * (1 + D * D)), 0)
        assert output_concurrence_paper(ModelParams(J, D, T), c_in) == pytest.approx(lit, rel=1e-12, abs=1e-15)


def test_paper_formula_is_half_the_oracle():
    for params in SMALL_GRID:
        for theta in (0.4, 1.0, math.pi / 2):
            inp = PureInput(theta)
            oracle = output_concurrence_oracle(params, inp)
            printed = output_concurrence_paper(params, inp.concurrence)
            assert oracle == pytest.approx(2 * printed, abs=1e-10)


def test_paper_formula_low_temperature_value():
    params = ModelParams(1.0, 0.0, 0.01)
    assert output_concurrence_paper(params, 1.0) == pytest.approx(0.5, abs=1e-3)
    assert output_concurrence_oracle(params, PureInput(math.pi / 2)) == pytest.approx(1.0, abs=1e-4)


def test_fidelity_examples():
    inp = PureInput(0.8, 4.0)
    assert fidelity(inp, inp.rho) == pytest.approx(1.0, abs=1e-15)
    assert fidelity_general(inp, inp.rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity(inp, np.eye(4) / 4) == pytest.approx(0.25, abs=1e-15)
    assert fidelity_general(inp, np.eye(4) / 4) == pytest.approx(0.25, abs=1e-10)


def test_fidelity_general_equals_shortcut_random(rng):
    for _ in range(100):
        params = ModelParams(rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(0.05, 5))
        inp = PureInput(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        out = teleport_output(inp, channel_probabilities(thermal_state(params)))
        assert fidelity_general(inp, out) == pytest.approx(fidelity(inp, out), abs=1e-10)


def test_uhlmann_fidelity_symmetric(rng):
    from conftest import random_density
    for _ in range(50):
        a, b = random_density(rng), random_density(rng)
        assert uhlmann_fidelity(a, b) == pytest.approx(uhlmann_fidelity(b, a), abs=1e-9)
        assert uhlmann_fidelity(a, b) == pytest.approx(uhlmann_fidelity(a, b, "sqrt"), abs=1e-9)
    for _ in range(50):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        b = random_density(rng, rank=2)
        expected = np.real(v.conj() @ b @ v)
        assert uhlmann_fidelity(np.outer(v, v.conj()), b) == pytest.approx(expected, abs=1e-12)
        assert uhlmann_fidelity(b, np.outer(v, v.conj())) == pytest.approx(expected, abs=1e-12)
        assert uhlmann_fidelity(np.outer(v, v.conj()), b, "sqrt") == pytest.approx(expected, abs=1e-7)


def test_average_fidelity_limits():
    assert average_fidelity_closed(ModelParams(1.0, 0.7, 1e6)) == pytest.approx(0.25, abs=1e-5)
    assert average_fidelity_closed(ModelParams(1.0, 0.0, 0.01)) == pytest.approx(1.0, abs=1e-6)
    t = 2 / math.log(11)
    assert average_fidelity_closed(ModelParams(1.0, 0.0, t)) == pytest.approx(2 / 3, abs=1e-9)


def test_average_fidelity_literal_evaluation():
    for J, D, T in [(1, 0, 0.5), (-1, 2, 0.3), (2, 0.5, 1.0)]:
        b, d = 1 / T, 2 * J * math.sqrt(1 + D * D)
        lit = ((2 * (1 + D * D) + math.exp(2 * b * J) * (1 + 2 * D * D + (3 + 2 * D * D) * math.cosh(b * d)))
               / (6 * (1 + D * D) * (1 + math.exp(b * J) * math.cosh(b * d / 2)) ** 2))
        assert average_fidelity_closed(ModelParams(J, D, T)) == pytest.approx(lit, rel=1e-13)


def test_average_fidelity_no_overflow():
    for J in (-2.0, 2.0):
        f = average_fidelity_closed(ModelParams(J, 3.0, 1e-5))
        assert math.isfinite(f) and 0.25 <= f <= 1.0


@given(couplings, dm, temps)
@settings(max_examples=60, deadline=None)
def test_quadrature_equals_closed_form(J, D, T):
    params = ModelParams(J, D, T)
    assert average_fidelity_quadrature(params) == pytest.approx(average_fidelity_closed(params), abs=1e-8)


def test_quadrature_brute_loop_matches_vectorized():
    # node-by-node evaluation through the public single-input functions
    params = ModelParams(-1.0, 1.2, 0.3)
    probs = channel_probabilities(thermal_state(params))
    u, w = np.polynomial.legendre.leggauss(8)
    phis_ = 2 * np.pi * np.arange(8) / 8
    total = sum(wi * fidelity(PureInput(math.acos(ui), ph), teleport_output(PureInput(math.acos(ui), ph), probs))
                for ui, wi in zip(u, w) for ph in phis_)
    assert total / 16 == pytest.approx(average_fidelity_quadrature(params, 8, 8), abs=1e-14)


def test_quadrature_high_temperature():
    hot = ModelParams(0.7, 1.0, 1e6)
    assert average_fidelity_quadrature(hot) == pytest.approx(average_fidelity_closed(hot), abs=1e-8)
    assert average_fidelity_quadrature(ModelParams(0.7, 1.0, 1e10)) == pytest.approx(0.25, abs=1e-8)


def test_quadrature_rejects_few_nodes():
    with pytest.raises(ValueError):
        average_fidelity_quadrature(ModelParams(1.0), 4, 32)


def test_ferromagnet_with_dm_beats_classical():
    f = average_fidelity_quadrature(ModelParams(-1.0, 2.0, 0.1))
    assert CLASSICAL_FIDELITY < f < 1.0


@given(couplings, dm, temps)
def test_average_fidelity_dm_sign_symmetry(J, D, T):
    a, b = ModelParams(J, D, T), ModelParams(J, -D, T)
    assert average_fidelity_closed(a) == pytest.approx(average_fidelity_closed(b), abs=1e-15)


def test_average_fidelity_dm_sign_symmetry_oracle():
    for J, D, T in [(1, 0.8, 0.4), (-1, 2.0, 0.2)]:
        a = average_fidelity_quadrature(ModelParams(J, D, T))
        b = average_fidelity_quadrature(ModelParams(J, -D, T))
        assert a == pytest.approx(b, abs=1e-8)


@pytest.mark.parametrize("J", [1.0, -1.0])
def test_large_dm_saturates_at_classical_limit(J):
    assert abs(average_fidelity_closed(ModelParams(J, 100.0, 0.5)) - 2 / 3) < 0.01


def test_classical_threshold_isotropic():
    assert classical_threshold_temperature(1.0, 0.0) == pytest.approx(2 / math.log(11), abs=1e-9)
    assert classical_threshold_temperature(-1.0, 0.0) is None
    with pytest.raises(ValueError):
        classical_threshold_temperature(0.0, 1.0)


def test_classical_threshold_ferromagnet_with_dm():
    t = classical_threshold_temperature(-1.0, 1.5)
    assert t is not None
    assert average_fidelity_closed(ModelParams(-1.0, 1.5, 0.99 * t)) > 2 / 3
    assert average_fidelity_closed(ModelParams(-1.0, 1.5, 1.01 * t)) < 2 / 3
    ts = np.geomspace(1e-3, 10, 2000)
    above = [average_fidelity_closed(ModelParams(-1.0, 1.5, x)) > 2 / 3 for x in ts]
    assert ts[np.nonzero(above)[0][-1]] <= t


def test_pure_input_validation():
    with pytest.raises(ValueError):
        PureInput(-0.1)
    with pytest.raises(ValueError):
        PureInput(1.0, 7.0)
    with pytest.raises(ValueError):
        PureInput.from_concurrence(1.5)
    inp = PureInput.from_concurrence(0.6, 0.2)
    assert inp.concurrence == pytest.approx(0.6)
    assert np.linalg.norm(inp.state) == pytest.approx(1.0, abs=1e-15)


def test_channel_probs_from_traces():
    probs = ChannelProbs.from_traces([0.7, 0.1, 0.1, 0.1])
    assert probs.p[0, 0] == pytest.approx(0.49)
    assert probs.p.sum() == pytest.approx(1.0)


def test_ferromagnet_output_needs_coupling_above_half():
    # T = 0.1, D = 1, maximal input: output entanglement only for |J| > 0.5
    def c_out(J):
        return output_concurrence_oracle(ModelParams(J, 1.0, 0.1), PureInput(math.pi / 2))
    assert c_out(-0.45) == 0.0 and c_out(-0.5) == 0.0
    assert c_out(-0.52) > 0.0 and c_out(-1.0) > 0.0
