"""
Circuit depth scheduling
Greedy as-soon-as-possible layering with unit time per gate
"""

from dataclasses import dataclass
from typing import List, Tuple

from src.models.circuit import Circuit, Gate


@dataclass(frozen=True)
class Schedule:
    """Layer index per gate (same order as the circuit) and the layer count"""
    depth: int
    layer_of: Tuple[int, ...]

    def layers(self, circuit: Circuit) -> List[List[Gate]]:
        grouped: List[List[Gate]] = [[] for _ in range(self.depth)]
        for gate, layer in zip(circuit.gates, self.layer_of):
            grouped[layer].append(gate)
        return grouped


def schedule(circuit: Circuit, two_qudit_only: bool = False) -> Schedule:
    """
    Place each gate in the earliest layer after every layer that already
    touches one of its qudits

    With two_qudit_only, local gates are skipped and get layer -1.
    """
    next_free = [0] * len(circuit.register)
    layer_of: List[int] = []
    depth = 0
    for gate in circuit.gates:
        if two_qudit_only and gate.two_qudit_cost == 0 and len(gate.qudits) == 1:
            layer_of.append(-1)
            continue
        layer = max(next_free[q] for q in gate.qudits)
        for q in gate.qudits:
            next_free[q] = layer + 1
        layer_of.append(layer)
        depth = max(depth, layer + 1)
    return Schedule(depth=depth, layer_of=tuple(layer_of))


def depth(circuit: Circuit) -> int:
    return schedule(circuit).depth
