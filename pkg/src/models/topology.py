"""
Coupling graph and spanning-tree module
Models device connectivity, extracts spanning trees, picks roots and
decides which qudit dimensions a tree needs
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx
import logging

from src.models.schemas import DimensionAssignment, DimensionPurpose, FeasibilityViolation
from src.utils.errors import (
    ConfigurationError, ConnectivityError, RootLookupError, StructuralError
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def canonical_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


class CouplingGraph:
    """
    Device connectivity: qudit nodes with optional dimensions and an
    undirected edge set E

    The wrapped networkx graph is frozen after construction. Edges are added
    in ascending order, so neighbour iteration is ascending by node id.
    """

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Iterable[Tuple[int, int]],
        dims: Optional[Mapping[int, int]] = None
    ):
        """
        Build and validate a coupling graph

        Args:
            nodes: Positive integer node ids
            edges: Unordered node-id pairs; (i, j) and (j, i) are the same edge
            dims: Optional map node id -> qudit dimension (each >= 2)
        """
        node_list = sorted(nodes)
        if not node_list:
            raise StructuralError("coupling graph needs at least one node")
        if len(set(node_list)) != len(node_list):
            raise StructuralError("duplicate node ids in coupling graph")
        for node in node_list:
            if not isinstance(node, int) or isinstance(node, bool) or node < 1:
                raise StructuralError(f"node id {node!r} is not a positive integer")

        known = set(node_list)
        canonical: Set[Edge] = set()
        for a, b in edges:
            if a == b:
                raise StructuralError(f"self-loop on node {a}")
            if a not in known or b not in known:
                raise StructuralError(f"edge ({a}, {b}) references an unknown node")
            edge = canonical_edge(a, b)
            if edge in canonical:
                raise StructuralError(f"duplicate edge {edge}")
            canonical.add(edge)

        self.dims: Dict[int, int] = {}
        for node, dim in (dims or {}).items():
            if node not in known:
                raise ConfigurationError(f"dimension declared for unknown node {node}")
            if dim < 2:
                raise ConfigurationError(f"node {node} declares dimension {dim}; must be >= 2")
            self.dims[node] = int(dim)

        G = nx.Graph()
        G.add_nodes_from(node_list)
        G.add_edges_from(sorted(canonical))
        self.G = nx.freeze(G)

        _require_connected(self.G, node_list[0])

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[int, int]],
        node_count: Optional[int] = None,
        dims: Optional[Mapping[int, int]] = None
    ) -> 'CouplingGraph':
        """Nodes are 1..node_count, or the endpoints of `edges` when no count is given"""
        edges = list(edges)
        if node_count is None:
            nodes = sorted({n for e in edges for n in e})
        else:
            nodes = list(range(1, node_count + 1))
        return cls(nodes, edges, dims)

    @property
    def nodes(self) -> List[int]:
        return list(self.G.nodes())

    @property
    def node_count(self) -> int:
        return self.G.number_of_nodes()

    @property
    def edges(self) -> List[Edge]:
        return sorted(canonical_edge(a, b) for a, b in self.G.edges())

    @property
    def has_all_dims(self) -> bool:
        return len(self.dims) == self.node_count

    def degree(self, node: int) -> int:
        return self.G.degree(node)

    def dim(self, node: int) -> Optional[int]:
        return self.dims.get(node)

    def with_dims(self, dims: Mapping[int, int]) -> 'CouplingGraph':
        return CouplingGraph(self.nodes, self.edges, dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CouplingGraph):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.dims == other.dims)

    def __repr__(self) -> str:
        return f"CouplingGraph(N={self.node_count}, |E|={len(self.edges)}, dims={len(self.dims)})"


def _require_connected(G: nx.Graph, start: int) -> None:
    if G.number_of_nodes() <= 1 or nx.is_connected(G):
        return
    reached = nx.node_connected_component(G, start)
    unreachable = min(set(G.nodes()) - reached)
    raise ConnectivityError(unreachable, start)


def _tree_graph(tree_edges: Iterable[Tuple[int, int]], nodes: Optional[Iterable[int]] = None) -> nx.Graph:
    T = nx.Graph()
    if nodes is not None:
        T.add_nodes_from(nodes)
    T.add_edges_from(canonical_edge(a, b) for a, b in tree_edges)
    if T.number_of_nodes() == 0:
        raise StructuralError("tree has no nodes")
    if not nx.is_tree(T):
        kind = "disconnected" if not nx.is_connected(T) else "cyclic"
        raise StructuralError(f"edge set is not a tree ({kind})")
    return T


@dataclass(frozen=True)
class RootedTree:
    """
    Spanning tree with a root, ordered children and string addresses

    Children are ordered by ascending node id. The root has address "1" and
    the i-th child of the node with address s has address s followed by i.
    """
    root: int
    parent: Dict[int, int]
    children: Dict[int, Tuple[int, ...]]
    address: Dict[int, str]
    depth: Dict[int, int] = field(repr=False)

    @property
    def nodes(self) -> List[int]:
        return sorted(self.children)

    @property
    def node_count(self) -> int:
        return len(self.children)

    @property
    def height(self) -> int:
        return max(self.depth.values())

    @property
    def levels(self) -> List[List[int]]:
        """Nodes grouped by depth, ascending ids inside each level"""
        levels: List[List[int]] = [[] for _ in range(self.height + 1)]
        for node in self.nodes:
            levels[self.depth[node]].append(node)
        return levels

    @property
    def edges(self) -> List[Edge]:
        return sorted(canonical_edge(child, par) for child, par in self.parent.items())

    @property
    def n_root_children(self) -> int:
        return len(self.children[self.root])

    @property
    def last_root_child(self) -> Optional[int]:
        kids = self.children[self.root]
        return kids[-1] if kids else None

    def is_leaf(self, node: int) -> bool:
        return node != self.root and not self.children[node]

    def degree(self, node: int) -> int:
        return len(self.children[node]) + (0 if node == self.root else 1)

    def child_index(self, node: int) -> int:
        """1-based position of `node` among its parent's children"""
        return self.children[self.parent[node]].index(node) + 1

    def subtree_nodes(self, node: int) -> List[int]:
        found, stack = [], [node]
        while stack:
            current = stack.pop()
            found.append(current)
            stack.extend(self.children[current])
        return sorted(found)

    def label(self, node: int) -> str:
        return f"{node}@{self.address[node]}"


@dataclass(frozen=True)
class TreePlan:
    """Result of the planning pipeline on a coupling graph"""
    tree: RootedTree
    tree_edges: List[Edge]
    removed_edges: List[Edge]
    root_candidates: List[int]


def extract_spanning_tree(graph: CouplingGraph, start: int) -> Set[Edge]:
    """
    Depth-first spanning tree of the coupling graph

    Neighbours are explored in ascending node-id order, so the result is
    reproducible; edges DFS never explores (cycle closers) are dropped.
    """
    if start not in graph.G:
        raise RootLookupError(f"start node {start} is not in the coupling graph")
    tree_edges = {canonical_edge(a, b) for a, b in nx.dfs_edges(graph.G, source=start)}
    if len(tree_edges) != graph.node_count - 1:
        reached = {start} | {n for e in tree_edges for n in e}
        raise ConnectivityError(min(set(graph.nodes) - reached), start)
    return tree_edges


def find_optimal_root(
    tree_edges: Iterable[Tuple[int, int]],
    nodes: Optional[Iterable[int]] = None
) -> List[int]:
    """
    Tree centre(s) by repeated leaves reduction

    Peels every degree-1 node layer by layer until one or two nodes remain;
    rooting at either of them minimises the tree height. Linear in N.
    """
    T = _tree_graph(tree_edges, nodes)
    degree = dict(T.degree())
    remaining = T.number_of_nodes()
    leaves = deque(sorted(n for n, d in degree.items() if d <= 1))

    while remaining > 2:
        layer = len(leaves)
        remaining -= layer
        for _ in range(layer):
            leaf = leaves.popleft()
            for neighbour in T[leaf]:
                degree[neighbour] -= 1
                if degree[neighbour] == 1:
                    leaves.append(neighbour)

    return sorted(leaves)


def build_rooted_tree(
    tree_edges: Iterable[Tuple[int, int]],
    root: int,
    nodes: Optional[Iterable[int]] = None
) -> RootedTree:
    """Orient a tree away from `root` and assign addresses"""
    T = _tree_graph(tree_edges, nodes)
    if root not in T:
        raise RootLookupError(f"root {root} is not a node of the tree")

    parent: Dict[int, int] = {}
    children: Dict[int, Tuple[int, ...]] = {}
    depth: Dict[int, int] = {root: 0}
    order = deque([root])
    while order:
        node = order.popleft()
        kids = tuple(sorted(n for n in T[node] if n != parent.get(node)))
        children[node] = kids
        for kid in kids:
            parent[kid] = node
            depth[kid] = depth[node] + 1
            order.append(kid)

    dotted = any(len(kids) >= 10 for kids in children.values())
    separator = "." if dotted else ""
    address: Dict[int, str] = {root: "1"}
    order = deque([root])
    while order:
        node = order.popleft()
        for i, kid in enumerate(children[node], start=1):
            address[kid] = f"{address[node]}{separator}{i}"
            order.append(kid)

    tree = RootedTree(root=root, parent=parent, children=children,
                      address=address, depth=depth)
    logger.info(f"Built rooted tree: N={tree.node_count}, root={root}, height={tree.height}")
    return tree


def minimal_dimensions(
    tree: RootedTree,
    purpose: DimensionPurpose = DimensionPurpose.CONTROLLED_PHASE
) -> DimensionAssignment:
    """
    Smallest dimension per node that the tree synthesizer needs

    Leaves need 2 levels. A non-root node with c children folds child i into
    its level 1+i, so it needs c+2 (= degree+1). The root needs n(1)+1 for the
    controlled-phase family and n(1)+2 when every root child is folded.
    """
    dims: Dict[int, int] = {}
    for node in tree.nodes:
        kids = len(tree.children[node])
        if node == tree.root:
            extra = 2 if purpose == DimensionPurpose.MULTI_TARGET else 1
            dims[node] = max(2, kids + extra)
        else:
            dims[node] = kids + 2
    return DimensionAssignment(dims=dims, purpose=purpose)


def find_violations(
    tree: RootedTree,
    dims: Mapping[int, int],
    purpose: DimensionPurpose = DimensionPurpose.CONTROLLED_PHASE
) -> List[FeasibilityViolation]:
    missing = [n for n in tree.nodes if n not in dims]
    if missing:
        raise ConfigurationError(f"no dimension declared for node(s) {missing}")
    return minimal_dimensions(tree, purpose).dominated_by(dims)


def check_feasibility(
    graph: CouplingGraph,
    tree: RootedTree,
    purpose: DimensionPurpose = DimensionPurpose.CONTROLLED_PHASE
) -> List[FeasibilityViolation]:
    """
    Compare declared dimensions with what the tree needs

    Feasibility is judged on tree degrees, not on degrees in the full
    coupling graph. Returns an empty list when the declaration suffices.
    """
    graph_edges = set(graph.edges)
    stray = [e for e in tree.edges if e not in graph_edges]
    if stray:
        raise StructuralError(f"tree edges {stray} are not coupling-graph edges")
    if not graph.has_all_dims:
        missing = [n for n in graph.nodes if n not in graph.dims]
        raise ConfigurationError(f"no dimension declared for node(s) {missing}")
    violations = find_violations(tree, graph.dims, purpose)
    if violations:
        logger.warning(f"Dimension check failed for {len(violations)} node(s)")
    return violations


def plan_tree(graph: CouplingGraph, root: Optional[int] = None) -> TreePlan:
    """DFS spanning tree, leaves-reduction root (smaller id on ties) and rooting"""
    start = graph.nodes[0]
    tree_edges = sorted(extract_spanning_tree(graph, start))
    removed = sorted(set(graph.edges) - set(tree_edges))
    if removed:
        logger.warning(f"Dropped {len(removed)} cycle-closing edge(s): {removed}")

    candidates = find_optimal_root(tree_edges, graph.nodes)
    chosen = candidates[0] if root is None else root
    if root is not None and root not in candidates:
        logger.info(f"Root override {root}; leaves-reduction centre is {candidates}")
    tree = build_rooted_tree(tree_edges, chosen, graph.nodes)
    return TreePlan(tree=tree, tree_edges=tree_edges, removed_edges=removed,
                    root_candidates=candidates)
