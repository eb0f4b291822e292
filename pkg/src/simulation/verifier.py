"""
Oracle-based verification of synthesized circuits
Runs basis inputs through the simulator and compares full output vectors
"""

from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import logging

from src.models.circuit import Circuit
from src.models.schemas import PermutationReport, VerificationReport
from src.simulation.oracles import Oracle
from src.simulation.statevector import basis_state, encode, run
from src.utils.errors import CircuitError, UsageError

logger = logging.getLogger(__name__)

PERMUTATION_SIMULATION_CAP = 512


def format_digits(digits: Sequence[int]) -> str:
    sep = "," if any(d > 9 for d in digits) else ""
    return "|" + sep.join(str(d) for d in digits) + "⟩"


class CircuitVerifier:
    """
    Compare a circuit with an oracle over qubit-subspace basis inputs

    Args:
        tolerance: Max elementwise amplitude error allowed
        leakage_tolerance: Max auxiliary-level probability allowed at the end
        sample_cutoff: Above this many inputs, sample this many at random
            (the all-ones input is always added)
        seed: Seed for the sampled inputs
        workers: Threads used to fan inputs out; 1 runs inline
    """

    def __init__(
        self,
        tolerance: float = 1e-10,
        leakage_tolerance: float = 1e-12,
        sample_cutoff: int = 4096,
        seed: int = 0,
        workers: int = 1
    ):
        self.tolerance = tolerance
        self.leakage_tolerance = leakage_tolerance
        self.sample_cutoff = sample_cutoff
        self.seed = seed
        self.workers = max(1, workers)

    def inputs(self, n: int) -> Tuple[List[Tuple[int, ...]], bool]:
        if 2 ** n <= self.sample_cutoff:
            return [tuple(bits) for bits in product((0, 1), repeat=n)], False
        rng = np.random.default_rng(self.seed)
        sampled = [tuple(int(b) for b in row) for row in rng.integers(0, 2, size=(self.sample_cutoff, n))]
        ones = (1,) * n
        if ones not in sampled:
            sampled.append(ones)
        logger.warning(f"{2 ** n} basis inputs exceed the cutoff; sampling {len(sampled)}")
        return sampled, True

    def _check_input(self, circuit: Circuit, oracle: Oracle, digits: Tuple[int, ...]) -> Tuple[float, float]:
        register = circuit.register
        output = run(circuit, basis_state(register, digits))
        expected = np.zeros(register.total_dimension, dtype=complex)
        for out_digits, amplitude in oracle.expected(digits).items():
            expected[encode(register, out_digits)] = amplitude
        error = float(np.max(np.abs(output.amps - expected)))
        leakage = output.leakage(oracle.leakage_qudits())
        return error, leakage

    def verify(self, circuit: Circuit, oracle: Oracle) -> VerificationReport:
        n = len(circuit.register)
        if n != oracle.n:
            raise UsageError(f"circuit has {n} qudits, oracle {oracle.label()} expects {oracle.n}")
        if oracle.target_dims and circuit.register.dims[oracle.n_controls:] != oracle.target_dims:
            raise UsageError(
                f"block targets have dimensions {circuit.register.dims[oracle.n_controls:]}, "
                f"oracle expects {oracle.target_dims}"
            )

        inputs, sampled = self.inputs(n)
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda d: self._check_input(circuit, oracle, d), inputs))
        else:
            results = [self._check_input(circuit, oracle, d) for d in inputs]

        max_error = max(r[0] for r in results)
        max_leakage = max(r[1] for r in results)
        failing = next(
            (format_digits(d) for d, (err, leak) in zip(inputs, results)
             if err > self.tolerance or leak > self.leakage_tolerance),
            None
        )
        report = VerificationReport(
            circuit=circuit.name,
            oracle=oracle.label(),
            max_amplitude_error=max_error,
            leakage=max_leakage,
            basis_states_tested=len(inputs),
            sampled=sampled,
            tolerance=self.tolerance,
            leakage_tolerance=self.leakage_tolerance,
            passed=failing is None,
            failing_input=failing,
        )
        status = "PASS" if report.passed else f"FAIL at {failing}"
        logger.info(f"Verified {circuit.name or 'circuit'} against {oracle.label()}: {status} "
                    f"(error {max_error:.2e}, leakage {max_leakage:.2e}, {len(inputs)} inputs)")
        return report


def verify(circuit: Circuit, oracle: Oracle, tolerance: float = 1e-10, **kwargs) -> VerificationReport:
    return CircuitVerifier(tolerance=tolerance, **kwargs).verify(circuit, oracle)


def _track_digits(circuit: Circuit, digits: np.ndarray) -> np.ndarray:
    """Push every input row through the XM / X / CX gates at once"""
    out = digits.copy()
    for position, gate in enumerate(circuit.gates):
        if not gate.is_permutation:
            raise CircuitError(f"gate {position} ({gate}) is not a basis permutation")
        if len(gate.qudits) == 1:
            (q,) = gate.qudits
            m = gate.m if gate.m is not None else 1
            col = out[:, q]
            out[:, q] = np.where(col == 0, m, np.where(col == m, 0, col))
        else:
            c, t = gate.qudits
            fires = (out[:, c] == 1) & (out[:, t] < 2)
            out[fires, t] = 1 - out[fires, t]
    return out


def check_basis_permutation(
    circuit: Circuit,
    full_space: bool = False,
    simulation_cap: int = PERMUTATION_SIMULATION_CAP
) -> PermutationReport:
    """
    Confirm a circuit of X_m, X and CX gates maps each basis input to one
    basis state with amplitude exactly 1

    Inputs are all qubit-subspace states, or every mixed-radix state with
    full_space. The first `simulation_cap` inputs are replayed
    through the simulator as a cross-check.
    """
    dims = circuit.register.dims
    levels = dims if full_space else tuple(2 for _ in dims)
    inputs = np.indices(levels).reshape(len(dims), -1).T
    outputs = _track_digits(circuit, inputs)

    table: Dict[str, str] = {
        format_digits(i): format_digits(o) for i, o in zip(inputs.tolist(), outputs.tolist())
    }
    failing: Optional[str] = None
    if len({tuple(o) for o in outputs.tolist()}) != len(inputs):
        failing = "non-injective"

    for digits, image in list(zip(inputs.tolist(), outputs.tolist()))[:simulation_cap]:
        if failing:
            break
        state = run(circuit, basis_state(circuit.register, digits))
        target = encode(circuit.register, image)
        if abs(state.amps[target] - 1) > 1e-12 or abs(state.norm() - 1) > 1e-12:
            failing = format_digits(digits)

    report = PermutationReport(passed=failing is None, inputs_tested=len(inputs),
                               table=table, failing_input=failing)
    logger.debug(f"Permutation check of {circuit.name or 'circuit'}: passed={report.passed}")
    return report
