"""
Topology family generators
Lines, rings, stars, grids, honeycomb patches and trees with node ids 1..N
"""

import random
import re
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import networkx as nx
import logging

from src.models.topology import CouplingGraph
from src.utils.errors import UsageError

logger = logging.getLogger(__name__)

FAMILY_ARITY: Dict[str, int] = {
    'line': 1,
    'ring': 1,
    'star': 1,
    'grid': 2,
    'honeycomb': 2,
    'kary': 2,
    'binary': 1,
    'random_tree': 2,
}

_SPEC = re.compile(r'^\s*([a-z_]+)\s*\(\s*([0-9,\s]*)\)\s*$')


def _relabel(G: nx.Graph) -> CouplingGraph:
    """Ids 1..N in sorted order of the generator's own labels"""
    H = nx.convert_node_labels_to_integers(G, first_label=1, ordering='sorted')
    return CouplingGraph(list(H.nodes()), list(H.edges()))


def line(n: int) -> CouplingGraph:
    return _relabel(nx.path_graph(n))


def ring(n: int) -> CouplingGraph:
    if n < 3:
        raise UsageError("a ring needs at least 3 nodes")
    return _relabel(nx.cycle_graph(n))


def star(n: int) -> CouplingGraph:
    """Centre is node 1"""
    return _relabel(nx.star_graph(n - 1))


def grid(width: int, height: int) -> CouplingGraph:
    return _relabel(nx.grid_2d_graph(height, width))


def honeycomb(rows: int, cols: int) -> CouplingGraph:
    """
    Brick-wall patch: every horizontal bond, vertical bonds only where
    row + column is even, so no node exceeds degree 3
    """
    if cols == 1 and rows > 2:
        raise UsageError("a one-column honeycomb patch has at most 2 rows")
    G = nx.Graph()
    G.add_nodes_from((r, c) for r in range(rows) for c in range(cols))
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                G.add_edge((r, c), (r, c + 1))
            if r + 1 < rows and (r + c) % 2 == 0:
                G.add_edge((r, c), (r + 1, c))
    return _relabel(G)


def kary(k: int, height: int) -> CouplingGraph:
    """Complete k-ary tree of the given height; node 1 is the centre"""
    return _relabel(nx.balanced_tree(k, height))


def binary(n: int) -> CouplingGraph:
    """Heap-shaped binary tree on n nodes (node i has children 2i, 2i+1)"""
    return _relabel(nx.full_rary_tree(2, n))


def random_tree(n: int, seed: int = 0) -> CouplingGraph:
    if n == 1:
        return CouplingGraph([1], [])
    if n == 2:
        return CouplingGraph([1, 2], [(1, 2)])
    rng = random.Random(seed)
    prufer = [rng.randrange(n) for _ in range(n - 2)]
    return _relabel(nx.from_prufer_sequence(prufer))


def random_connected_graph(n: int, extra_edges: int = 0, seed: int = 0) -> CouplingGraph:
    """Random spanning tree plus up to `extra_edges` extra bonds"""
    rng = random.Random(seed)
    base = random_tree(n, seed)
    edges = set(base.edges)
    candidates = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if (a, b) not in edges]
    rng.shuffle(candidates)
    edges.update(candidates[:extra_edges])
    return CouplingGraph(list(range(1, n + 1)), sorted(edges))


_GENERATORS = {
    'line': line,
    'ring': ring,
    'star': star,
    'grid': grid,
    'honeycomb': honeycomb,
    'kary': kary,
    'binary': binary,
    'random_tree': random_tree,
}


@dataclass(frozen=True)
class TopologyFamily:
    """Named generator with positive integer parameters, e.g. grid(3,3)"""
    kind: str
    params: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in FAMILY_ARITY:
            raise UsageError(f"unknown family {self.kind!r}; choose from {sorted(FAMILY_ARITY)}")
        arity = FAMILY_ARITY[self.kind]
        if len(self.params) != arity:
            raise UsageError(f"{self.kind} takes {arity} parameter(s), got {len(self.params)}")
        if self.kind != 'random_tree' and any(p < 1 for p in self.params):
            raise UsageError(f"{self} needs positive parameters")
        if self.kind == 'random_tree' and self.params[0] < 1:
            raise UsageError(f"{self} needs a positive size")

    def build(self) -> CouplingGraph:
        graph = _GENERATORS[self.kind](*self.params)
        logger.info(f"Generated {self}: {graph.node_count} nodes, {len(graph.edges)} edges")
        return graph

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(p) for p in self.params)})"


def parse_family(spec: str) -> TopologyFamily:
    match = _SPEC.match(spec)
    if not match:
        raise UsageError(f"cannot parse family spec {spec!r}; expected e.g. line(8) or grid(3,3)")
    kind, raw = match.groups()
    params = tuple(int(p) for p in raw.split(',') if p.strip())
    return TopologyFamily(kind, params)


def family_of_size(kind: str, n: int, seed: int = 0) -> Optional[TopologyFamily]:
    """Family instance with exactly n nodes, or None when the kind cannot hit n"""
    if kind in ('line', 'star', 'binary'):
        return TopologyFamily(kind, (n,))
    if kind == 'ring':
        return TopologyFamily(kind, (n,)) if n >= 3 else None
    if kind == 'random_tree':
        return TopologyFamily(kind, (n, seed))
    if kind == 'kary':
        height = (n + 1).bit_length() - 2
        return TopologyFamily('kary', (2, height)) if height >= 1 and 2 ** (height + 1) - 1 == n else None
    if kind in ('grid', 'honeycomb'):
        for width in range(int(n ** 0.5), 0, -1):
            if n % width == 0:
                return TopologyFamily(kind, (n // width, width) if kind == 'grid' else (width, n // width))
    return None
