import numpy as np
import pytest

from src.analysis.folding import (
    ControlledBlock, cz_theta_orientation, emit_basic_op, emit_elementary_fold, emit_folding
)
from src.data import families
from src.models.circuit import Circuit, QuditRegister, compose, inverse, two_qudit_count
from src.models.schemas import GateKind
from src.models.topology import minimal_dimensions
from src.simulation.verifier import check_basis_permutation
from src.utils.errors import CircuitError, FeasibilityError
from tests.helpers import qubit_inputs, rooted, tree_suite


def test_elementary_fold_truth_table():
    gates = emit_elementary_fold(0, 1, 1, parent_dim=3)
    assert [g.kind for g in gates] == [GateKind.XM, GateKind.CX, GateKind.XM]
    report = check_basis_permutation(Circuit(QuditRegister((3, 2)), gates))
    assert report.passed
    assert report.table == {"|00⟩": "|20⟩", "|01⟩": "|21⟩", "|10⟩": "|00⟩", "|11⟩": "|11⟩"}


def test_elementary_fold_needs_level_one_plus_index():
    with pytest.raises(FeasibilityError, match="level 3"):
        emit_elementary_fold(0, 1, 2, parent_dim=3)


def test_folding_marks_subtrees_that_are_all_ones():
    tree = rooted(families.random_tree(9, 5))
    dims = minimal_dimensions(tree).dims
    circuit = emit_folding(tree, dims)
    report = check_basis_permutation(circuit, simulation_cap=16)
    assert report.passed
    nodes = tree.nodes
    for digits in qubit_inputs(len(nodes)):
        image = report.table["|" + "".join(map(str, digits)) + "⟩"]
        out = [int(ch) for ch in image[1:-1]]
        value = dict(zip(nodes, digits))
        for q, node in enumerate(nodes):
            if node == tree.root:
                continue
            if tree.is_leaf(node):
                assert out[q] == digits[q]
            else:
                ones = all(value[m] == 1 for m in tree.subtree_nodes(node))
                assert (out[q] == 1) == ones


@pytest.mark.parametrize("n", range(2, 13))
def test_folding_is_a_permutation_and_unfolding_undoes_it(n):
    for label, tree in tree_suite(n):
        dims = minimal_dimensions(tree).dims
        folding = emit_folding(tree, dims)
        assert check_basis_permutation(folding, simulation_cap=8).passed, label

        round_trip = check_basis_permutation(compose(folding, inverse(folding)), simulation_cap=8)
        assert round_trip.passed, label
        assert all(k == v for k, v in round_trip.table.items()), label


def test_folding_rejects_small_dimensions():
    tree = rooted(families.line(5))
    dims = {**minimal_dimensions(tree).dims, 2: 2}
    with pytest.raises(FeasibilityError, match="node 2"):
        emit_folding(tree, dims)


def test_orientation_of_the_central_gate():
    assert cz_theta_orientation(rooted(families.line(3))) == (2, 3)
    assert cz_theta_orientation(rooted(families.line(2))) == (1, 2)
    assert cz_theta_orientation(rooted(families.line(4))) is None
    assert cz_theta_orientation(rooted(families.line(4), root=1)) == (2, 1)


def test_basic_op_folds_all_but_the_last_root_child():
    tree = rooted(families.star(5))
    dims = minimal_dimensions(tree).dims
    basic = emit_basic_op(tree, dims)
    assert two_qudit_count(basic) == 2 * 3 + 1
    assert [g.kind for g in basic.gates].count(GateKind.CZ) == 1
    assert basic.gates[len(basic) // 2].qudits == (0, 4)


def test_basic_op_with_a_block_folds_every_root_child():
    tree = rooted(families.star(4))
    block = ControlledBlock(np.diag([1, -1]), target_dims=(2,), cost=1, name="Z")
    with pytest.raises(FeasibilityError):
        emit_basic_op(tree, minimal_dimensions(tree).dims, central=GateKind.CUBLOCK, block=block)
    dims = {**minimal_dimensions(tree).dims, 1: 5}
    basic = emit_basic_op(tree, dims, central=GateKind.CUBLOCK, block=block)
    assert two_qudit_count(basic) == 2 * 3 + 1
    assert basic.register.dims == (5, 2, 2, 2, 2)
    assert basic.labels == ("1", "2", "3", "4", "t1")


def test_controlled_block_validation():
    assert not ControlledBlock(np.eye(2), (3,), cost=1).full_space
    assert ControlledBlock(np.eye(3), (3,), cost=1).full_space
    assert ControlledBlock(np.eye(4), (2, 2), cost=2).full_space
    with pytest.raises(CircuitError):
        ControlledBlock(np.eye(5), (2, 2), cost=1)
    with pytest.raises(CircuitError):
        ControlledBlock([[1, 1], [0, 1]], (2,), cost=1)
    with pytest.raises(CircuitError):
        ControlledBlock(np.eye(2), (2,), cost=-1)
