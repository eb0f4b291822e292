import numpy as np
import pytest

from src.analysis.synthesizer import SynthesisPlan, synth_cnz
from src.data import families
from src.models.circuit import Circuit, QuditRegister, cz, hadamard, x, xm
from src.models.schemas import VerificationReport
from src.simulation.oracles import Oracle
from src.simulation.verifier import CircuitVerifier, check_basis_permutation, format_digits, verify
from src.utils.errors import CircuitError, UsageError
from tests.helpers import rooted


@pytest.fixture
def line4_cnz():
    return synth_cnz(SynthesisPlan.minimal(rooted(families.line(4))))


def test_passing_report(line4_cnz):
    report = verify(line4_cnz, Oracle.cnz(4))
    assert report.passed
    assert report.basis_states_tested == 16
    assert not report.sampled
    assert report.failing_input is None
    assert report.model_dump(by_alias=True)['pass'] is True


@pytest.mark.parametrize("by_alias", [True, False])
def test_reports_read_back_from_json(line4_cnz, by_alias):
    for circuit in (line4_cnz, line4_cnz.without_gate(6)):
        report = verify(circuit, Oracle.cnz(4))
        assert VerificationReport.model_validate_json(report.model_dump_json(by_alias=by_alias)) == report


def test_deleting_any_gate_is_caught(line4_cnz):
    assert len(line4_cnz) == 13
    for index in range(len(line4_cnz)):
        report = verify(line4_cnz.without_gate(index), Oracle.cnz(4))
        assert not report.passed, f"gate {index} ({line4_cnz.gates[index]}) removed silently"
        assert report.failing_input is not None


def test_leakage_alone_fails_verification():
    c = Circuit(QuditRegister((3, 2)), [cz(0, 1), xm(0, 2)])
    report = CircuitVerifier(tolerance=10.0).verify(c, Oracle.cnz(2))
    assert report.leakage == pytest.approx(1.0)
    assert not report.passed
    assert report.failing_input == "|00⟩"


def test_sampling_above_cutoff_keeps_all_ones(line4_cnz):
    verifier = CircuitVerifier(sample_cutoff=4, seed=3)
    inputs, sampled = verifier.inputs(4)
    assert sampled
    assert (1, 1, 1, 1) in inputs
    assert verifier.inputs(4) == (inputs, sampled)
    assert verifier.verify(line4_cnz, Oracle.cnz(4)).sampled


def test_thread_pool_gives_the_same_report(line4_cnz):
    inline = CircuitVerifier().verify(line4_cnz, Oracle.cnz(4))
    pooled = CircuitVerifier(workers=4).verify(line4_cnz, Oracle.cnz(4))
    assert inline == pooled


def test_oracle_arity_must_match(line4_cnz):
    with pytest.raises(UsageError):
        verify(line4_cnz, Oracle.cnz(5))


def test_format_digits():
    assert format_digits((0, 1, 1, 0)) == "|0110⟩"
    assert format_digits((1, 12)) == "|1,12⟩"


def test_permutation_check_rejects_non_permutation_gates():
    with pytest.raises(CircuitError, match="not a basis permutation"):
        check_basis_permutation(Circuit(QuditRegister((2,)), [hadamard(0)]))


def test_full_space_permutation_table():
    c = Circuit(QuditRegister((3,)), [xm(0, 2), x(0)])
    report = check_basis_permutation(c, full_space=True)
    assert report.passed
    assert report.inputs_tested == 3
    assert report.table == {"|0⟩": "|2⟩", "|1⟩": "|0⟩", "|2⟩": "|1⟩"}
