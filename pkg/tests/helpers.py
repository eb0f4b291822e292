"""Shared builders for the test suite"""

from itertools import product
from typing import List, Tuple

import numpy as np
from hypothesis import strategies as st

from src.data import families
from src.models.circuit import (
    Circuit, QuditRegister, cx, cz, cz_theta, hadamard, phase, xm
)
from src.models.topology import RootedTree, build_rooted_tree, plan_tree
from src.simulation.statevector import basis_state, run


def rooted(graph, root=None) -> RootedTree:
    return plan_tree(graph, root=root).tree


def tree_suite(n: int, random_count: int = 25) -> List[Tuple[str, RootedTree]]:
    """Line, star, heap-shaped binary tree and seeded random trees on n nodes"""
    trees = [
        (f"line({n})", rooted(families.line(n))),
        (f"star({n})", rooted(families.star(n))),
        (f"binary({n})", rooted(families.binary(n))),
    ]
    for seed in range(random_count):
        trees.append((f"random_tree({n},{seed})", rooted(families.random_tree(n, seed))))
    return trees


def qubit_inputs(n: int) -> List[Tuple[int, ...]]:
    return list(product((0, 1), repeat=n))


def outputs_on_qubit_inputs(circuit: Circuit) -> np.ndarray:
    """Output amplitudes for every qubit-subspace input, one row per input"""
    register = circuit.register
    return np.array([run(circuit, basis_state(register, d)).amps for d in qubit_inputs(len(register))])


def dense_unitary(circuit: Circuit) -> np.ndarray:
    """Full matrix of a (small) circuit, column k = image of basis state k"""
    register = circuit.register
    columns = []
    for digits in np.ndindex(*register.dims):
        columns.append(run(circuit, basis_state(register, digits)).amps)
    return np.array(columns).T


def brute_force_centres(edges, nodes) -> List[int]:
    """Every root that minimises the rooted height"""
    heights = {node: build_rooted_tree(edges, node, nodes).height for node in nodes}
    best = min(heights.values())
    return sorted(n for n, h in heights.items() if h == best)


@st.composite
def random_circuits(draw, max_gates: int = 8) -> Circuit:
    """Small mixed-radix circuits; CZ_theta targets are always qubits"""
    dims = tuple(draw(st.lists(st.integers(2, 3), min_size=2, max_size=3)))
    n = len(dims)
    qubits = [q for q, d in enumerate(dims) if d == 2]
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(["xm", "h", "p", "cz", "cx", "czt"]))
        q = draw(st.integers(0, n - 1))
        if kind == "xm":
            gates.append(xm(q, draw(st.integers(1, dims[q] - 1))))
        elif kind == "h":
            gates.append(hadamard(q))
        elif kind == "p":
            gates.append(phase(q, draw(st.floats(-np.pi, np.pi))))
        elif kind == "czt":
            b = next((t for t in qubits if t != q), None)
            if b is not None:
                gates.append(cz_theta(q, b, draw(st.floats(-np.pi, np.pi))))
        else:
            other = draw(st.integers(0, n - 2))
            r = other if other < q else other + 1
            gates.append(cz(q, r) if kind == "cz" else cx(q, r))
    return Circuit(QuditRegister(dims), gates)
