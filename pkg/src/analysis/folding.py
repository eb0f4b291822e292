"""
Folding, basic and unfolding operations on a rooted tree
Compress "every qudit in my subtree is 1" into a single level of each
root child, then act between the root and its last child
"""

from dataclasses import dataclass
from math import prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import logging

from src.models.circuit import (
    Circuit, Gate, Matrix, QuditRegister, cu_block, cx, cz, cz_theta, freeze_matrix,
    UNITARY_TOLERANCE, phase, unitarity_error, x, xm
)
from src.models.schemas import DimensionPurpose, GateKind
from src.models.topology import RootedTree, find_violations
from src.utils.errors import CircuitError, FeasibilityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControlledBlock:
    """
    Opaque unitary applied to extra target qudits when the root fires

    Args:
        matrix: Square unitary, either on the targets' qubit subspaces
            (size 2^M) or on their full space (size prod(target_dims))
        target_dims: Dimension of each target qudit
        cost: Declared two-qudit gate count of one application
        name: Display name
    """
    matrix: Matrix
    target_dims: Tuple[int, ...]
    cost: int
    name: str = "U"

    def __post_init__(self):
        object.__setattr__(self, 'matrix', freeze_matrix(self.matrix))
        object.__setattr__(self, 'target_dims', tuple(int(d) for d in self.target_dims))
        if not self.target_dims or any(d < 2 for d in self.target_dims):
            raise CircuitError("block targets need dimensions >= 2")
        if self.cost < 0:
            raise CircuitError("block cost must be non-negative")
        size = len(self.matrix)
        if size not in (2 ** len(self.target_dims), prod(self.target_dims)):
            raise CircuitError(
                f"block matrix of size {size} does not fit targets {self.target_dims}"
            )
        error = unitarity_error(self.unitary)
        if error > UNITARY_TOLERANCE:
            raise CircuitError(f"block matrix is not unitary (error {error:.2e})")

    @property
    def unitary(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    @property
    def full_space(self) -> bool:
        """True when the matrix acts on the whole target space, aux levels included"""
        qubit_space = 2 ** len(self.target_dims)
        return len(self.matrix) != qubit_space or prod(self.target_dims) == qubit_space


@dataclass(frozen=True)
class TreeLayout:
    """Qudit index of every tree node (ascending id), then block targets"""
    register: QuditRegister
    index: Dict[int, int]
    labels: Tuple[str, ...]
    targets: Tuple[int, ...] = ()


def tree_layout(
    tree: RootedTree,
    dims: Mapping[int, int],
    target_dims: Sequence[int] = ()
) -> TreeLayout:
    nodes = tree.nodes
    index = {node: q for q, node in enumerate(nodes)}
    register = QuditRegister(tuple(dims[n] for n in nodes) + tuple(target_dims))
    labels = tuple(str(n) for n in nodes) + tuple(f"t{k + 1}" for k in range(len(target_dims)))
    targets = tuple(range(len(nodes), len(nodes) + len(target_dims)))
    return TreeLayout(register=register, index=index, labels=labels, targets=targets)


def emit_elementary_fold(
    parent: int,
    child: int,
    child_index: int,
    parent_dim: Optional[int] = None
) -> List[Gate]:
    """
    X_{1+i} on the parent, CX child -> parent, X on the parent

    Leaves the parent in 1 iff both were 1, in 0 if the parent was 1 and the
    child was not, and on level 1+i if the parent was 0. A parent already
    parked on an auxiliary level is left there.
    """
    level = 1 + child_index
    if parent_dim is not None and parent_dim < level + 1:
        raise FeasibilityError(
            f"folding child {child_index} needs level {level} on qudit {parent}, "
            f"which has dimension {parent_dim} (d >= k + 1 fails)"
        )
    return [xm(parent, level), cx(child, parent), x(parent)]


def _require_feasible(tree: RootedTree, dims: Mapping[int, int], purpose: DimensionPurpose) -> None:
    violations = find_violations(tree, dims, purpose)
    if violations:
        raise FeasibilityError("qudit dimensions too small for the tree", violations)


def folding_gates(tree: RootedTree, index: Mapping[int, int], dims: Mapping[int, int]) -> List[Gate]:
    gates: List[Gate] = []
    # deepest parents first; all parents of one level are adjacent
    for level in reversed(tree.levels[1:]):
        for parent in level:
            for i, child in enumerate(tree.children[parent], start=1):
                gates.extend(emit_elementary_fold(index[parent], index[child], i, dims[parent]))
    return gates


def emit_folding(tree: RootedTree, dims: Mapping[int, int]) -> Circuit:
    """Fold every non-root internal node's children into it, bottom-up"""
    _require_feasible(tree, dims, DimensionPurpose.CONTROLLED_PHASE)
    layout = tree_layout(tree, dims)
    gates = folding_gates(tree, layout.index, dims)
    return Circuit(layout.register, gates, name="folding", labels=layout.labels,
                   tags={'family': 'folding', 'root': tree.root})


def cz_theta_orientation(tree: RootedTree) -> Optional[Tuple[int, int]]:
    """
    (control, target) for the central CZ_theta such that the target sits in
    {0, 1} whenever the gate fires, or None when neither orientation does

    The last root child is never folded into, so it qualifies when it is a
    leaf; the root qualifies when nothing is folded into it (n(1) = 1).
    """
    last = tree.last_root_child
    if last is None:
        return None
    if tree.is_leaf(last):
        return tree.root, last
    if tree.n_root_children == 1:
        return last, tree.root
    return None


def basic_gates(
    tree: RootedTree,
    layout: TreeLayout,
    dims: Mapping[int, int],
    central: GateKind = GateKind.CZ,
    theta: Optional[float] = None,
    block: Optional[ControlledBlock] = None,
    fold_all: bool = False
) -> List[Gate]:
    idx = layout.index
    root = tree.root
    kids = tree.children[root]
    if not kids:
        raise FeasibilityError("basic operation needs at least one root child")
    if central == GateKind.CUBLOCK:
        fold_all = True

    folded = kids if fold_all else kids[:-1]
    folds: List[Gate] = []
    for i, child in enumerate(folded, start=1):
        folds.extend(emit_elementary_fold(idx[root], idx[child], i, dims[root]))

    last = kids[-1]
    if central == GateKind.CZ:
        middle = [cz(idx[root], idx[last])]
    elif central == GateKind.CZTHETA:
        if theta is None:
            raise CircuitError("CZ_theta basic operation needs an angle")
        if fold_all:
            middle = [phase(idx[root], theta)]
        else:
            control, target = cz_theta_orientation(tree) or (root, last)
            middle = [cz_theta(idx[control], idx[target], theta)]
    elif central == GateKind.CUBLOCK:
        if block is None:
            raise CircuitError("block basic operation needs a ControlledBlock")
        middle = [cu_block(idx[root], layout.targets, block.matrix, block.cost, block.name)]
    else:
        raise CircuitError(f"unsupported central gate {central.value}")

    unfolds = [g.adjoint() for g in reversed(folds)]
    return folds + middle + unfolds


def emit_basic_op(
    tree: RootedTree,
    dims: Mapping[int, int],
    central: GateKind = GateKind.CZ,
    theta: Optional[float] = None,
    block: Optional[ControlledBlock] = None,
    fold_all: bool = False
) -> Circuit:
    """
    Fold root children into the root, apply the central gate, unfold

    For CZ and CZ_theta the first n(1)-1 children are folded and the gate
    acts between the root and the last child; for a block (or fold_all)
    every child is folded and the root alone controls the centre.
    """
    all_folded = fold_all or central == GateKind.CUBLOCK
    purpose = DimensionPurpose.MULTI_TARGET if all_folded else DimensionPurpose.CONTROLLED_PHASE
    _require_feasible(tree, dims, purpose)
    target_dims = block.target_dims if block is not None else ()
    layout = tree_layout(tree, dims, target_dims)
    gates = basic_gates(tree, layout, dims, central, theta, block, fold_all)
    return Circuit(layout.register, gates, name="basic", labels=layout.labels,
                   tags={'family': 'basic', 'central': central.value, 'root': tree.root})
