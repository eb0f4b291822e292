"""
Multi-controlled gate synthesis on a rooted spanning tree
Builds C^{N-1}Z, Toffoli, C^{N-1}Z_theta, C^{N-1}U and multi-target
controlled blocks out of folding, basic and unfolding operations
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import logging

from src.analysis.folding import (
    ControlledBlock, TreeLayout, basic_gates, cz_theta_orientation, folding_gates, tree_layout
)
from src.analysis.lowering import lower_cx, lower_cz_theta
from src.analysis.spectral import SPECTRAL_TOLERANCE, spectral_decompose
from src.models.circuit import Circuit, Gate, embed, hadamard, local2, phase, two_qudit_count, x
from src.models.schemas import DimensionAssignment, DimensionPurpose, GateKind
from src.models.topology import RootedTree, build_rooted_tree, find_violations, minimal_dimensions
from src.utils.errors import FeasibilityError, StructuralError, UsageError

logger = logging.getLogger(__name__)


def phase_purpose(tree: RootedTree, lower_cz_theta: bool = False) -> DimensionPurpose:
    """Dimension rule the CZ_theta family needs on this tree"""
    if lower_cz_theta and cz_theta_orientation(tree) is None:
        return DimensionPurpose.MULTI_TARGET
    return DimensionPurpose.CONTROLLED_PHASE


@dataclass(frozen=True)
class SynthesisPlan:
    """
    Rooted tree plus declared qudit dimensions and lowering switches

    Dimensions are not validated here; every synthesis call checks them
    against the rule of the construction it emits.
    """
    tree: RootedTree
    dims: Dict[int, int]
    lower_cx: bool = False
    lower_cz_theta: bool = False

    def __post_init__(self):
        dims = self.dims.dims if isinstance(self.dims, DimensionAssignment) else self.dims
        object.__setattr__(self, 'dims', {int(n): int(d) for n, d in dims.items()})

    @classmethod
    def minimal(
        cls,
        tree: RootedTree,
        purpose: Optional[DimensionPurpose] = None,
        lower_cx: bool = False,
        lower_cz_theta: bool = False
    ) -> 'SynthesisPlan':
        """Plan with the smallest dimensions the requested constructions need"""
        if purpose is None:
            purpose = phase_purpose(tree, lower_cz_theta)
        dims = minimal_dimensions(tree, purpose)
        return cls(tree=tree, dims=dims.dims, lower_cx=lower_cx, lower_cz_theta=lower_cz_theta)

    @property
    def node_count(self) -> int:
        return self.tree.node_count

    def restricted(self, tree: RootedTree) -> 'SynthesisPlan':
        return SynthesisPlan(tree=tree, dims={n: self.dims[n] for n in tree.nodes},
                             lower_cx=self.lower_cx, lower_cz_theta=self.lower_cz_theta)


class TreeSynthesizer:
    """
    Emit synthesized circuits for one plan

    Qudits are ordered by ascending node id; block targets follow the tree
    nodes. Every circuit carries provenance tags (gate family, N, root and
    the two-qudit counts) that the verifier can rebuild an oracle from.
    """

    def __init__(self, plan: SynthesisPlan):
        self.plan = plan
        self.tree = plan.tree

    def _check(self, purpose: DimensionPurpose, minimum_nodes: int = 2) -> None:
        if self.tree.node_count < minimum_nodes:
            raise StructuralError(
                f"synthesis needs at least {minimum_nodes} qudits, tree has {self.tree.node_count}"
            )
        violations = find_violations(self.tree, self.plan.dims, purpose)
        if violations:
            raise FeasibilityError("qudit dimensions too small for the tree", violations)

    def _layout(self, target_dims=()) -> TreeLayout:
        return tree_layout(self.tree, self.plan.dims, target_dims)

    def _finish(self, layout: TreeLayout, gates: List[Gate], name: str, tags: Dict[str, Any]) -> Circuit:
        circuit = Circuit(layout.register, gates, name=name, labels=layout.labels)
        if self.plan.lower_cz_theta:
            circuit = lower_cz_theta(circuit, oriented=True)
        if self.plan.lower_cx:
            circuit = lower_cx(circuit)
        tags = {
            'n': self.tree.node_count,
            'root': self.tree.root,
            **tags,
            'lower_cx': self.plan.lower_cx,
            'lower_cz_theta': self.plan.lower_cz_theta,
            'two_qudit_count': two_qudit_count(circuit),
        }
        circuit = circuit.with_gates(circuit.gates, tags=tags)
        logger.info(f"Synthesized {name}: {tags['two_qudit_count']} two-qudit gates "
                    f"on N={self.tree.node_count}, root={self.tree.root}")
        return circuit

    def _sandwich(
        self,
        layout: TreeLayout,
        central: GateKind,
        theta: Optional[float] = None,
        block: Optional[ControlledBlock] = None,
        fold_all: bool = False
    ) -> List[Gate]:
        folding = folding_gates(self.tree, layout.index, self.plan.dims)
        unfolding = [g.adjoint() for g in reversed(folding)]
        middle = basic_gates(self.tree, layout, self.plan.dims, central, theta, block, fold_all)
        return folding + middle + unfolding

    def _target_index(self, layout: TreeLayout, target: int) -> int:
        if target not in layout.index:
            raise UsageError(f"target {target} is not a node of the tree")
        return layout.index[target]

    def cnz(self) -> Circuit:
        self._check(DimensionPurpose.CONTROLLED_PHASE)
        layout = self._layout()
        gates = self._sandwich(layout, GateKind.CZ)
        n = self.tree.node_count
        return self._finish(layout, gates, f"C^{n - 1}Z", {'gate': 'cnz'})

    def cnx(self, target: int) -> Circuit:
        """Toffoli on `target`: Hadamards around C^{N-1}Z"""
        self._check(DimensionPurpose.CONTROLLED_PHASE)
        layout = self._layout()
        t = self._target_index(layout, target)
        gates = [hadamard(t)] + self._sandwich(layout, GateKind.CZ) + [hadamard(t)]
        n = self.tree.node_count
        return self._finish(layout, gates, f"C^{n - 1}X", {'gate': 'cnx', 'target': target})

    def _phase_gates(self, layout: TreeLayout, theta: float) -> List[Gate]:
        fold_all = self.plan.lower_cz_theta and cz_theta_orientation(self.tree) is None
        return self._sandwich(layout, GateKind.CZTHETA, theta=theta, fold_all=fold_all)

    def cnz_theta(self, theta: float) -> Circuit:
        self._check(phase_purpose(self.tree, self.plan.lower_cz_theta))
        layout = self._layout()
        gates = self._phase_gates(layout, theta)
        n = self.tree.node_count
        return self._finish(layout, gates, f"C^{n - 1}Zθ", {'gate': 'cnztheta', 'theta': theta})

    def cnu(self, U, target: int) -> Circuit:
        """
        C^{N-1}U on `target` from U = e^{i alpha} V Z_theta V^dagger

        V^dagger on the target, C^{N-1}Z_theta, V on the target, then a
        C^{N-2}Z_alpha over the controls when alpha is not a multiple of 2 pi.
        """
        self._check(phase_purpose(self.tree, self.plan.lower_cz_theta))
        spectral = spectral_decompose(U)
        layout = self._layout()
        t = self._target_index(layout, target)

        gates: List[Gate] = []
        if not spectral.is_identity_basis:
            gates.append(local2(t, spectral.V.conj().T, "V†"))
        if abs(spectral.theta) > SPECTRAL_TOLERANCE:
            gates.extend(self._phase_gates(layout, spectral.theta))
        if not spectral.is_identity_basis:
            gates.append(local2(t, spectral.V, "V"))
        main_count = sum(g.two_qudit_cost for g in gates)

        correction: List[Gate] = []
        alpha = float(np.mod(spectral.alpha, 2 * np.pi))
        if min(alpha, 2 * np.pi - alpha) > SPECTRAL_TOLERANCE:
            correction = self._global_phase_gates(layout, target, spectral.alpha)
        correction_count = sum(g.two_qudit_cost for g in correction)

        n = self.tree.node_count
        tags = {
            'gate': 'cnu', 'target': target,
            'matrix': [[[z.real, z.imag] for z in row] for row in np.asarray(U, dtype=complex).tolist()],
            'alpha': spectral.alpha, 'theta': spectral.theta,
            'main_count': main_count, 'phase_correction_count': correction_count,
        }
        return self._finish(layout, gates + correction, f"C^{n - 1}U", tags)

    def _global_phase_gates(self, layout: TreeLayout, target: int, alpha: float) -> List[Gate]:
        """
        Phase e^{i alpha} whenever every node except `target` is 1

        A target of tree degree 1 leaves a control subtree, synthesized
        recursively. Otherwise C^{N-1}Z_alpha X(t) C^{N-1}Z_alpha X(t) on the
        full tree fires once for either value of the target.
        """
        tree = self.tree
        controls = [n for n in tree.nodes if n != target]
        if len(controls) == 1:
            return [phase(layout.index[controls[0]], alpha)]

        if tree.degree(target) == 1:
            sub_root = tree.root if target != tree.root else tree.children[tree.root][0]
            sub_edges = [e for e in tree.edges if target not in e]
            subtree = build_rooted_tree(sub_edges, sub_root, controls)
            sub_plan = self.plan.restricted(subtree)
            purpose = phase_purpose(subtree, self.plan.lower_cz_theta)
            if not find_violations(subtree, sub_plan.dims, purpose):
                inner = TreeSynthesizer(sub_plan)
                sub_layout = inner._layout()
                correction = Circuit(sub_layout.register, inner._phase_gates(sub_layout, alpha))
                mapping = {sub_layout.index[n]: layout.index[n] for n in controls}
                return list(embed(correction, layout.register, mapping).gates)
            logger.info(f"Control subtree without node {target} is too small for the "
                        f"phase correction; using the full tree instead")

        t = layout.index[target]
        phase_gates = self._phase_gates(layout, alpha)
        return [x(t)] + phase_gates + [x(t)] + phase_gates

    def cnu_multi(self, block: ControlledBlock) -> Circuit:
        """C^N U: every control folded into the root, the root controls the block"""
        self._check(DimensionPurpose.MULTI_TARGET)
        layout = self._layout(block.target_dims)
        gates = self._sandwich(layout, GateKind.CUBLOCK, block=block)
        n = self.tree.node_count
        tags = {
            'gate': 'cnu-multi', 'block_name': block.name, 'block_cost': block.cost,
            'target_dims': list(block.target_dims),
            'matrix': [[[z.real, z.imag] for z in row] for row in block.unitary.tolist()],
        }
        return self._finish(layout, gates, f"C^{n}{block.name}", tags)


def synth_cnz(plan: SynthesisPlan) -> Circuit:
    return TreeSynthesizer(plan).cnz()


def synth_cnx(plan: SynthesisPlan, target: int) -> Circuit:
    return TreeSynthesizer(plan).cnx(target)


def synth_cnz_theta(plan: SynthesisPlan, theta: float) -> Circuit:
    return TreeSynthesizer(plan).cnz_theta(theta)


def synth_cnu(plan: SynthesisPlan, U, target: int) -> Circuit:
    return TreeSynthesizer(plan).cnu(U, target)


def synth_cnu_multi(plan: SynthesisPlan, block: ControlledBlock) -> Circuit:
    return TreeSynthesizer(plan).cnu_multi(block)
