"""
Circuit, matrix and block file formats
Structured JSON documents plus a plain-text rendering for inspection
"""

from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import logging

from src.analysis.folding import ControlledBlock
from src.data.topology_loader import load_json_document
from src.models.circuit import Circuit, Gate, QuditRegister, freeze_matrix
from src.models.schemas import (
    BlockDocument, CircuitDocument, GateKind, GateRecord, MatrixDocument
)
from src.utils.errors import CircuitError, TopologyFileError

logger = logging.getLogger(__name__)


def matrix_to_pairs(matrix) -> List[List[List[float]]]:
    arr = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def pairs_to_matrix(pairs) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in pairs], dtype=complex)


def gate_to_record(gate: Gate) -> GateRecord:
    params: Dict[str, Any] = {}
    if gate.m is not None:
        params['m'] = gate.m
    if gate.theta is not None:
        params['theta'] = gate.theta
    if gate.name is not None:
        params['name'] = gate.name
    if gate.matrix is not None:
        params['matrix'] = matrix_to_pairs(gate.unitary)
    if gate.cost is not None:
        params['cost'] = gate.cost
    return GateRecord(kind=gate.kind, qudits=list(gate.qudits), params=params)


def record_to_gate(record: GateRecord) -> Gate:
    params = dict(record.params)
    if 'matrix' in params:
        params['matrix'] = freeze_matrix(pairs_to_matrix(params['matrix']))
    unknown = set(params) - {'m', 'theta', 'name', 'matrix', 'cost'}
    if unknown:
        raise CircuitError(f"{record.kind.value} gate has unknown parameter(s) {sorted(unknown)}")
    return Gate(kind=record.kind, qudits=tuple(record.qudits), **params)


def to_document(circuit: Circuit) -> CircuitDocument:
    return CircuitDocument(
        name=circuit.name,
        register=list(circuit.register.dims),
        labels=list(circuit.labels),
        tags=dict(circuit.tags),
        gates=[gate_to_record(g) for g in circuit.gates],
    )


def from_document(document: CircuitDocument) -> Circuit:
    gates = [record_to_gate(r) for r in document.gates]
    return Circuit(QuditRegister(tuple(document.register)), gates, name=document.name,
                   labels=document.labels, tags=dict(document.tags))


def render_text(circuit: Circuit) -> str:
    """One gate per line, e.g. `X_2 q3`, `CZ q1 q5`, `CU[name] q0 -> q5 (cost 1)`"""
    header = [
        f"# {circuit.name or 'circuit'}",
        f"# register {list(circuit.register.dims)}",
        "# labels " + " ".join(f"q{q}={label}" for q, label in enumerate(circuit.labels)),
    ]
    return "\n".join(header + [str(g) for g in circuit.gates]) + "\n"


def save_circuit(circuit: Circuit, path: Union[str, Path], fmt: str = "structured") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        if fmt == "text":
            f.write(render_text(circuit))
        else:
            f.write(to_document(circuit).model_dump_json(indent=2))
    logger.info(f"Wrote {len(circuit)} gates to {path}")
    return path


def load_circuit(path: Union[str, Path]) -> Circuit:
    document = load_json_document(path, CircuitDocument)
    try:
        return from_document(document)
    except CircuitError as e:
        raise TopologyFileError(str(path), str(e), field="gates")


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    """2x2 (or larger) complex matrix file: {"matrix": [[[re, im], ...], ...]}"""
    document = load_json_document(path, MatrixDocument)
    return pairs_to_matrix(document.matrix)


def load_block(path: Union[str, Path]) -> ControlledBlock:
    document = load_json_document(path, BlockDocument)
    try:
        return ControlledBlock(matrix=pairs_to_matrix(document.matrix),
                               target_dims=tuple(document.target_dims),
                               cost=document.cost, name=document.name)
    except CircuitError as e:
        raise TopologyFileError(str(path), str(e), field="matrix")
