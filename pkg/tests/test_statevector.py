import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.models.circuit import (
    Circuit, QuditRegister, cu_block, cx, cz, cz_theta, hadamard, phase, x, xm
)
from src.simulation.statevector import StateVector, apply_gate, basis_state, encode, run
from src.utils.errors import SimulationError
from tests.helpers import random_circuits


def test_mixed_radix_encoding_is_most_significant_first():
    register = QuditRegister((3, 2, 4))
    assert encode(register, (0, 0, 1)) == 1
    assert encode(register, (0, 1, 0)) == 4
    assert encode(register, (1, 0, 0)) == 8
    assert encode(register, (2, 1, 3)) == 23
    state = basis_state(register, (2, 1, 3))
    assert state.decode(23) == (2, 1, 3)


@pytest.mark.parametrize("digits", [(3, 0), (0, 2), (1,)])
def test_encoding_rejects_bad_digits(digits):
    with pytest.raises(SimulationError):
        encode(QuditRegister((3, 2)), digits)


def final_digits(circuit, digits):
    state = run(circuit, basis_state(circuit.register, digits))
    index = int(np.argmax(np.abs(state.amps)))
    return state.decode(index), state.amps[index]


def test_xm_swaps_zero_and_m_only():
    c = Circuit(QuditRegister((4,)), [xm(0, 2)])
    assert [final_digits(c, (d,))[0] for d in range(4)] == [(2,), (1,), (0,), (3,)]


def test_cx_fires_only_on_control_one_and_qubit_target():
    c = Circuit(QuditRegister((3, 3)), [cx(0, 1)])
    assert final_digits(c, (1, 0))[0] == (1, 1)
    assert final_digits(c, (1, 1))[0] == (1, 0)
    assert final_digits(c, (1, 2))[0] == (1, 2)
    assert final_digits(c, (2, 0))[0] == (2, 0)


def test_controlled_phases_touch_only_one_one():
    register = QuditRegister((3, 3))
    for gate, value in [(cz(0, 1), -1), (cz_theta(0, 1, 0.4), np.exp(0.4j))]:
        c = Circuit(register, [gate])
        for digits in np.ndindex(3, 3):
            _, amplitude = final_digits(c, digits)
            expected = value if digits == (1, 1) else 1
            assert amplitude == pytest.approx(expected)


def test_local_gates_leave_auxiliary_levels_alone():
    c = Circuit(QuditRegister((3,)), [hadamard(0), phase(0, 0.5)])
    state = run(c, basis_state(c.register, (2,)))
    np.testing.assert_allclose(state.amps, [0, 0, 1])
    state = run(c, basis_state(c.register, (1,)))
    np.testing.assert_allclose(state.amps, [1 / np.sqrt(2), -np.exp(0.5j) / np.sqrt(2), 0])


def test_qubit_space_block_on_a_qutrit_target():
    X = np.array([[0, 1], [1, 0]])
    c = Circuit(QuditRegister((2, 3)), [cu_block(0, [1], X, cost=1)])
    assert final_digits(c, (1, 0))[0] == (1, 1)
    assert final_digits(c, (1, 2))[0] == (1, 2)
    assert final_digits(c, (0, 1))[0] == (0, 1)


def test_full_space_block_on_two_targets():
    register = QuditRegister((2, 2, 3))
    perm = np.roll(np.eye(6), 1, axis=0)
    c = Circuit(register, [cu_block(0, [1, 2], perm, cost=3)])
    assert final_digits(c, (1, 0, 0))[0] == (1, 0, 1)
    assert final_digits(c, (1, 0, 2))[0] == (1, 1, 0)
    assert final_digits(c, (1, 1, 2))[0] == (1, 0, 0)
    assert final_digits(c, (0, 1, 2))[0] == (0, 1, 2)


def test_block_control_need_not_be_first_qudit():
    X = np.array([[0, 1], [1, 0]])
    c = Circuit(QuditRegister((2, 2, 2)), [cu_block(2, [0], X, cost=1)])
    assert final_digits(c, (0, 1, 1))[0] == (1, 1, 1)
    assert final_digits(c, (0, 1, 0))[0] == (0, 1, 0)


def test_apply_gate_returns_a_new_state():
    register = QuditRegister((2, 2))
    state = basis_state(register, (0, 0))
    after = apply_gate(state, x(1))
    assert state.amps[0] == 1
    assert after.amps[1] == 1
    with pytest.raises(SimulationError):
        apply_gate(state, xm(0, 2))


def test_leakage_counts_auxiliary_population():
    register = QuditRegister((3, 2))
    amps = np.zeros(6, dtype=complex)
    amps[encode(register, (2, 1))] = np.sqrt(0.25)
    amps[encode(register, (1, 1))] = np.sqrt(0.75)
    state = StateVector(register, amps)
    assert state.leakage() == pytest.approx(0.25)
    assert state.leakage([1]) == 0


def test_run_checks_register_and_amplitude_count():
    with pytest.raises(SimulationError):
        StateVector(QuditRegister((2, 2)), np.zeros(3))
    c = Circuit(QuditRegister((2, 2)))
    with pytest.raises(SimulationError):
        run(c, basis_state(QuditRegister((2, 3)), (0, 0)))
    assert run(c).amps[0] == 1


@given(random_circuits(max_gates=12), st.integers(0, 2 ** 32 - 1))
def test_run_preserves_inner_products(circuit, seed):
    rng = np.random.default_rng(seed)
    size = circuit.register.total_dimension
    u, v = (rng.normal(size=size) + 1j * rng.normal(size=size) for _ in range(2))
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    before = np.vdot(u, v)
    out_u = run(circuit, StateVector(circuit.register, u))
    out_v = run(circuit, StateVector(circuit.register, v))
    assert abs(np.vdot(out_u.amps, out_v.amps) - before) <= 1e-10
