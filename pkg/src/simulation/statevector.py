"""
Mixed-radix state-vector simulator
Dense amplitudes over a qudit register, qudit 0 most significant
"""

from dataclasses import dataclass
from math import prod
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import logging

from src.models.circuit import Circuit, Gate, QuditRegister
from src.models.schemas import GateKind
from src.utils.errors import SimulationError

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


@dataclass
class StateVector:
    register: QuditRegister
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.amps.size != self.register.total_dimension:
            raise SimulationError(
                f"{self.amps.size} amplitudes for a register of dimension "
                f"{self.register.total_dimension}"
            )

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.register.dims

    def encode(self, digits: Sequence[int]) -> int:
        return encode(self.register, digits)

    def decode(self, index: int) -> Tuple[int, ...]:
        return tuple(int(d) for d in np.unravel_index(index, self.dims))

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def copy(self) -> 'StateVector':
        return StateVector(self.register, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def leakage(self, qudits: Optional[Iterable[int]] = None) -> float:
        """Probability of finding any of `qudits` (default all) on a level >= 2"""
        qudits = range(len(self.dims)) if qudits is None else list(qudits)
        probs = self.probabilities().reshape(self.dims)
        inside = np.ones(self.dims, dtype=bool)
        for q in qudits:
            shape = [1] * len(self.dims)
            shape[q] = self.dims[q]
            inside &= (np.arange(self.dims[q]) < 2).reshape(shape)
        return float(probs[~inside].sum())


def encode(register: QuditRegister, digits: Sequence[int]) -> int:
    if len(digits) != len(register):
        raise SimulationError(f"{len(digits)} digits for a {len(register)}-qudit register")
    for q, (digit, dim) in enumerate(zip(digits, register.dims)):
        if not 0 <= digit < dim:
            raise SimulationError(f"digit {digit} out of range for qudit {q} (d={dim})")
    return int(np.ravel_multi_index(tuple(digits), register.dims))


def basis_state(register: QuditRegister, digits: Sequence[int]) -> StateVector:
    amps = np.zeros(register.total_dimension, dtype=complex)
    amps[encode(register, digits)] = 1.0
    return StateVector(register, amps)


def _at(n: int, fixed: Dict[int, int]) -> tuple:
    """Basic-slicing index pinning some axes to one level (a writable view)"""
    index = [slice(None)] * n
    for axis, level in fixed.items():
        index[axis] = level
    return tuple(index)


def _swap_levels(t: np.ndarray, left: tuple, right: tuple) -> None:
    t[left], t[right] = t[right].copy(), t[left].copy()


def _apply_block(t: np.ndarray, gate: Gate) -> None:
    n = t.ndim
    control, targets = gate.control, gate.targets
    size = len(gate.matrix)
    qubit_space = size == 2 ** len(targets) and size != prod(t.shape[q] for q in targets)

    index = [slice(None)] * n
    index[control] = 1
    if qubit_space:
        for q in targets:
            index[q] = slice(0, 2)
    view = t[tuple(index)]

    # axes of the control-sliced view
    axes = [q - (1 if q > control else 0) for q in targets]
    ends = list(range(view.ndim - len(axes), view.ndim))
    moved = np.moveaxis(view, axes, ends)
    flat = moved.reshape(-1, size)
    moved[...] = (flat @ gate.unitary.T).reshape(moved.shape)


def _apply_inplace(t: np.ndarray, gate: Gate) -> None:
    n = t.ndim
    kind = gate.kind
    if kind == GateKind.XM:
        (q,) = gate.qudits
        _swap_levels(t, _at(n, {q: 0}), _at(n, {q: gate.m}))
    elif kind == GateKind.LOCAL2:
        (q,) = gate.qudits
        lo, hi = _at(n, {q: 0}), _at(n, {q: 1})
        a0, a1 = t[lo].copy(), t[hi].copy()
        m = gate.unitary
        t[lo] = m[0, 0] * a0 + m[0, 1] * a1
        t[hi] = m[1, 0] * a0 + m[1, 1] * a1
    elif kind == GateKind.CZ:
        a, b = gate.qudits
        t[_at(n, {a: 1, b: 1})] *= -1
    elif kind == GateKind.CZTHETA:
        a, b = gate.qudits
        t[_at(n, {a: 1, b: 1})] *= np.exp(1j * gate.theta)
    elif kind == GateKind.CX:
        c, target = gate.qudits
        _swap_levels(t, _at(n, {c: 1, target: 0}),
                     _at(n, {c: 1, target: 1}))
    elif kind == GateKind.CUBLOCK:
        _apply_block(t, gate)
    else:
        raise SimulationError(f"cannot simulate gate kind {kind}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return a new state with `gate` applied; the input is left untouched"""
    for q in gate.qudits:
        if not 0 <= q < len(state.dims):
            raise SimulationError(f"gate {gate} addresses qudit {q} outside the register")
    if gate.kind == GateKind.XM and gate.m >= state.dims[gate.qudits[0]]:
        raise SimulationError(f"{gate} needs level {gate.m} on a d={state.dims[gate.qudits[0]]} qudit")
    result = state.copy()
    _apply_inplace(result.amps.reshape(state.dims), gate)
    return result


def run(circuit: Circuit, state: Optional[StateVector] = None) -> StateVector:
    """Apply every gate of `circuit` in order (default input: all zeros)"""
    if state is None:
        state = basis_state(circuit.register, [0] * len(circuit.register))
    elif state.register != circuit.register:
        raise SimulationError(
            f"state register {state.dims} does not match circuit register {circuit.register.dims}"
        )
    result = state.copy()
    t = result.amps.reshape(result.dims)
    for gate in circuit.gates:
        _apply_inplace(t, gate)
    drift = abs(result.norm() - state.norm())
    if drift > NORM_TOLERANCE:
        raise SimulationError(f"norm drifted by {drift:.2e} while running {circuit.name or 'circuit'}")
    return result
