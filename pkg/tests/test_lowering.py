import numpy as np
import pytest
from hypothesis import given

from src.analysis.folding import cz_theta_orientation
from src.analysis.lowering import lower_cx, lower_cz_theta
from src.analysis.synthesizer import SynthesisPlan, synth_cnz_theta
from src.data import families
from src.models.circuit import (
    Circuit, QuditRegister, cu_block, cx, cz, cz_theta, hadamard, two_qudit_count, xm
)
from src.models.schemas import GateKind
from src.simulation.oracles import Oracle
from src.simulation.verifier import verify
from src.utils.errors import CircuitError
from tests.helpers import dense_unitary, random_circuits, rooted


@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (4, 2)])
def test_cx_lowering_is_exact_on_the_full_space(dims):
    c = Circuit(QuditRegister(dims), [cx(0, 1), cx(1, 0)])
    lowered = lower_cx(c)
    assert {g.kind for g in lowered.gates} == {GateKind.LOCAL2, GateKind.CZ}
    assert two_qudit_count(lowered) == 2
    assert lowered.tags['lower_cx'] is True
    np.testing.assert_allclose(dense_unitary(lowered), dense_unitary(c), atol=1e-12)


@pytest.mark.parametrize("theta", [np.pi / 3, np.pi / 2, np.pi, -0.4])
def test_cz_theta_lowering_is_exact_when_target_is_a_qubit(theta):
    c = Circuit(QuditRegister((3, 2)), [xm(0, 2), cz_theta(0, 1, theta), xm(0, 2)])
    lowered = lower_cz_theta(c)
    assert two_qudit_count(lowered) == 2
    assert not any(g.kind == GateKind.CZTHETA for g in lowered.gates)
    assert lowered.tags['lower_cz_theta'] is True
    np.testing.assert_allclose(dense_unitary(lowered), dense_unitary(c), atol=1e-12)


def test_cz_theta_lowering_picks_up_a_phase_on_auxiliary_targets():
    theta = np.pi / 2
    c = Circuit(QuditRegister((2, 3)), [cz_theta(0, 1, theta)])
    exact, lowered = dense_unitary(c), dense_unitary(lower_cz_theta(c))
    # |1, 2> is index 5
    assert exact[5, 5] == pytest.approx(1)
    assert lowered[5, 5] == pytest.approx(np.exp(1j * theta / 2))
    mask = np.ones(6, dtype=bool)
    mask[5] = False
    np.testing.assert_allclose(lowered[np.ix_(mask, mask)], exact[np.ix_(mask, mask)], atol=1e-12)


def test_cx_gates_outside_cz_theta_are_left_alone():
    c = Circuit(QuditRegister((2, 2)), [cx(0, 1), cz_theta(0, 1, 0.5)])
    lowered = lower_cz_theta(c)
    assert lowered.gates[0] == cx(0, 1)


def test_cx_lowering_gate_list():
    c = Circuit(QuditRegister((2, 2, 2)), [cx(1, 2)])
    assert lower_cx(c).gates == (hadamard(2), cz(1, 2), hadamard(2))


@pytest.mark.parametrize("theta, expected", [(np.pi, -1), (0.0, 1)])
def test_cz_theta_lowering_limits(theta, expected):
    lowered = dense_unitary(lower_cz_theta(Circuit(QuditRegister((2, 2)), [cz_theta(0, 1, theta)])))
    np.testing.assert_allclose(lowered, np.diag([1, 1, 1, expected]), atol=1e-12)


@given(random_circuits())
def test_lowering_preserves_random_circuits(c):
    reference = dense_unitary(c)
    np.testing.assert_allclose(dense_unitary(lower_cx(c)), reference, atol=1e-12)
    np.testing.assert_allclose(dense_unitary(lower_cz_theta(c)), reference, atol=1e-12)


def test_cz_theta_lowering_refuses_an_auxiliary_target():
    c = Circuit(QuditRegister((2, 3)), [xm(1, 2), cz_theta(0, 1, np.pi / 3), xm(1, 2)])
    with pytest.raises(CircuitError, match="qudit 1 can sit on level 2"):
        lower_cz_theta(c)


@pytest.mark.parametrize("before", [
    [xm(1, 2), xm(1, 2)],
    [hadamard(1)],
    [cx(0, 1)],
])
def test_cz_theta_lowering_tracks_targets_back_into_the_qubit_space(before):
    c = Circuit(QuditRegister((2, 3)), before + [cz_theta(0, 1, 0.7)])
    lowered = lower_cz_theta(c)
    assert GateKind.CZTHETA not in {g.kind for g in lowered.gates}


def test_full_space_block_can_push_the_target_to_auxiliary_levels():
    shift = np.roll(np.eye(3), 1, axis=0)
    c = Circuit(QuditRegister((2, 3)), [cu_block(0, [1], shift, cost=1), cz_theta(0, 1, 0.7)])
    with pytest.raises(CircuitError, match="stray phase"):
        lower_cz_theta(c)


def test_unoriented_synthesis_cannot_be_lowered_afterwards():
    tree = rooted(families.kary(2, 2))
    assert cz_theta_orientation(tree) is None
    circuit = synth_cnz_theta(SynthesisPlan.minimal(tree), np.pi / 3)
    with pytest.raises(CircuitError):
        lower_cz_theta(circuit)
    lowered = synth_cnz_theta(SynthesisPlan.minimal(tree, lower_cz_theta=True), np.pi / 3)
    assert verify(lowered, Oracle.cnz_theta(7, np.pi / 3)).passed


def test_tracking_gives_up_on_wide_registers():
    c = Circuit(QuditRegister((2,) * 16 + (3,)), [cz_theta(0, 16, 0.7)])
    with pytest.raises(CircuitError, match="too many"):
        lower_cz_theta(c)
    assert lower_cz_theta(c, oriented=True).tags['lower_cz_theta'] is True
