"""
Lowering passes
Rewrite CX into Hadamard-conjugated CZ and CZ_theta into two CZ plus
level-1 phase gates
"""

from typing import Callable, Dict, List

import numpy as np
import logging

from src.models.circuit import Circuit, Gate, cx, cz, hadamard, phase
from src.models.schemas import GateKind
from src.utils.errors import CircuitError

logger = logging.getLogger(__name__)

Rule = Callable[[Gate], List[Gate]]

SUPPORT_CAP = 1 << 16


def _cx_to_cz(gate: Gate) -> List[Gate]:
    control, target = gate.qudits
    return [hadamard(target), cz(control, target), hadamard(target)]


def _cz_theta_to_cx(gate: Gate) -> List[Gate]:
    """
    CZ_theta(a, b) as P(theta/2) a, P(theta/2) b, CX(a, b), P(-theta/2) b, CX(a, b)

    Exact on the full register whenever b sits in {0, 1} at this point of
    the circuit. With a = 1 and b on an auxiliary level the result picks up
    e^{i theta/2}, so callers orient the gate so b is never auxiliary there.
    """
    a, b = gate.qudits
    half = gate.theta / 2
    return [phase(a, half), phase(b, half), *_cx_to_cz(cx(a, b)),
            phase(b, -half), *_cx_to_cz(cx(a, b))]


def _spread(rows: np.ndarray, mask: np.ndarray, q: int, levels) -> np.ndarray:
    """Add a copy of every masked row for each level of qudit q"""
    picked = rows[mask]
    copies = [rows]
    for level in levels:
        copy = picked.copy()
        copy[:, q] = level
        copies.append(copy)
    rows = np.unique(np.vstack(copies), axis=0)
    if len(rows) > SUPPORT_CAP:
        raise CircuitError(f"more than {SUPPORT_CAP} reachable basis states; cannot track CZ_theta targets")
    return rows


def _advance(rows: np.ndarray, gate: Gate, dims) -> np.ndarray:
    """Basis states that can carry amplitude after `gate`"""
    if gate.kind == GateKind.XM:
        (q,) = gate.qudits
        col = rows[:, q].copy()
        rows[:, q] = np.where(col == 0, gate.m, np.where(col == gate.m, 0, col))
        return rows
    if gate.kind == GateKind.CX:
        c, t = gate.qudits
        fires = (rows[:, c] == 1) & (rows[:, t] < 2)
        rows[fires, t] = 1 - rows[fires, t]
        return rows
    if gate.kind == GateKind.LOCAL2:
        (q,) = gate.qudits
        u = gate.unitary
        if u[0, 1] == 0 and u[1, 0] == 0:
            return rows
        if u[0, 0] == 0 and u[1, 1] == 0:
            flip = rows[:, q] < 2
            rows[flip, q] = 1 - rows[flip, q]
            return rows
        return _spread(rows, rows[:, q] < 2, q, (0, 1))
    if gate.kind == GateKind.CUBLOCK:
        full_space = len(gate.matrix) != 2 ** len(gate.targets)
        for t in gate.targets:
            mask = rows[:, gate.control] == 1
            if not full_space:
                mask &= rows[:, t] < 2
            rows = _spread(rows, mask, t, range(dims[t]) if full_space else (0, 1))
    return rows


def check_cz_theta_targets(circuit: Circuit) -> None:
    """
    Raise CircuitError unless every CZ_theta(a, b) finds b in {0, 1}
    whenever a is 1, for all qubit-subspace inputs

    Qubit targets pass without tracking. Otherwise the support of the state
    is followed gate by gate from every qubit-subspace input.
    """
    dims = circuit.register.dims
    risky = [g for g in circuit.gates if g.kind == GateKind.CZTHETA and dims[g.qudits[1]] > 2]
    if not risky:
        return
    n = len(dims)
    if 2 ** n > SUPPORT_CAP:
        raise CircuitError(f"{n} qudits is too many to track CZ_theta targets; "
                           f"synthesize with CZ_theta lowering instead")

    rows = np.indices((2,) * n).reshape(n, -1).T.copy()
    for position, gate in enumerate(circuit.gates):
        if gate.kind == GateKind.CZTHETA:
            a, b = gate.qudits
            bad = rows[(rows[:, a] == 1) & (rows[:, b] >= 2)]
            if len(bad):
                raise CircuitError(
                    f"gate {position} ({gate}): qudit {b} can sit on level {bad[0, b]} "
                    f"while qudit {a} is 1; lowering would add a stray phase"
                )
        rows = _advance(rows, gate, dims)


def _apply(circuit: Circuit, rules: Dict[GateKind, Rule]) -> Circuit:
    gates: List[Gate] = []
    rewritten = 0
    for gate in circuit.gates:
        rule = rules.get(gate.kind)
        if rule is None:
            gates.append(gate)
            continue
        gates.extend(rule(gate))
        rewritten += 1
    logger.debug(f"Lowering rewrote {rewritten} gate(s) of {circuit.name or 'circuit'}")
    return circuit.with_gates(gates)


def lower_cx(circuit: Circuit) -> Circuit:
    lowered = _apply(circuit, {GateKind.CX: _cx_to_cz})
    return lowered.with_gates(lowered.gates, tags={**circuit.tags, 'lower_cx': True})


def lower_cz_theta(circuit: Circuit, oriented: bool = False) -> Circuit:
    """
    Replace every CZ_theta by two CZ-form CX gates and local phases

    Unless `oriented` is set (the synthesizer places every CZ_theta target
    itself), the targets are checked first and a circuit that would pick up
    a stray phase raises CircuitError.
    """
    if not oriented:
        check_cz_theta_targets(circuit)
    lowered = _apply(circuit, {GateKind.CZTHETA: _cz_theta_to_cx})
    return lowered.with_gates(lowered.gates, tags={**circuit.tags, 'lower_cz_theta': True})
