"""
Benchmark sweeps over topology families
Gate counts, lowered counts, depth and dimension requirements per (family, N)
"""

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from tqdm import tqdm
import logging

from src.analysis.scheduler import depth
from src.analysis.synthesizer import SynthesisPlan, TreeSynthesizer
from src.data.families import TopologyFamily, family_of_size
from src.models.circuit import two_qudit_count
from src.models.schemas import BenchRow
from src.models.topology import minimal_dimensions, plan_tree
from src.simulation.oracles import Oracle
from src.simulation.verifier import CircuitVerifier
from src.utils.errors import BenchmarkError

logger = logging.getLogger(__name__)

DEFAULT_FAMILIES = ('line', 'star', 'binary', 'ring', 'grid', 'honeycomb')
DEFAULT_SIZES = (4, 7, 8, 15, 16, 31, 63)
LOWERING_THETA = np.pi / 2


def reference_qubit_count(n: int) -> int:
    """Two-qubit gates of the qubit-only construction, reported for comparison"""
    return 12 * n - 23


class BenchmarkRunner:
    """
    Synthesize C^{N-1}Z for each family instance and tabulate the results

    Args:
        families: Family kinds (line, star, binary, ...) or explicit instances
        sizes: Node counts; a kind that cannot reach a size skips it
        verify: Also run the oracle check where 2^N fits the verifier cutoff
        seed: Seed used by random_tree
        verifier: Verifier to use when verify is set
    """

    def __init__(
        self,
        families: Sequence[Union[str, TopologyFamily]] = DEFAULT_FAMILIES,
        sizes: Sequence[int] = DEFAULT_SIZES,
        verify: bool = False,
        seed: int = 0,
        verifier: Optional[CircuitVerifier] = None
    ):
        self.families = list(families)
        self.sizes = sorted(set(sizes))
        self.verify = verify
        self.seed = seed
        self.verifier = verifier or CircuitVerifier()
        self.rows: List[BenchRow] = []

    def instances(self) -> List[TopologyFamily]:
        found: List[TopologyFamily] = []
        for family in self.families:
            if isinstance(family, TopologyFamily):
                found.append(family)
                continue
            for n in self.sizes:
                instance = family_of_size(family, n, self.seed)
                if instance is None:
                    logger.debug(f"{family} has no instance with {n} nodes")
                    continue
                found.append(instance)
        return found

    def measure(self, family: TopologyFamily) -> BenchRow:
        graph = family.build()
        tree = plan_tree(graph).tree
        n = tree.node_count

        circuit = TreeSynthesizer(SynthesisPlan.minimal(tree)).cnz()
        count = two_qudit_count(circuit)
        if count != 2 * n - 3:
            raise BenchmarkError(f"{family}: C^{n - 1}Z used {count} two-qudit gates, expected {2 * n - 3}")

        lowered_plan = SynthesisPlan.minimal(tree, lower_cz_theta=True)
        lowered = TreeSynthesizer(lowered_plan).cnz_theta(LOWERING_THETA)
        lowered_count = two_qudit_count(lowered)
        if lowered_count != 2 * n - 2:
            raise BenchmarkError(f"{family}: lowered C^{n - 1}Zθ used {lowered_count}, expected {2 * n - 2}")

        verified = None
        if self.verify and 2 ** n <= self.verifier.sample_cutoff:
            verified = self.verifier.verify(circuit, Oracle.cnz(n)).passed

        return BenchRow(
            family=str(family),
            n=n,
            two_qudit_count=count,
            lowered_count=lowered_count,
            depth=depth(circuit),
            tree_height=tree.height,
            max_dimension=minimal_dimensions(tree).max_dimension,
            reference_qubit_count=reference_qubit_count(n),
            verified=verified,
        )

    def run(self, progress: bool = True) -> List[BenchRow]:
        instances = self.instances()
        logger.info(f"Benchmarking {len(instances)} family instance(s)")
        self.rows = []
        for family in tqdm(instances, desc="bench", disable=not progress):
            row = self.measure(family)
            self.rows.append(row)
            if row.verified is False:
                logger.warning(f"{family}: verification failed")
        return self.rows

    def to_dataframe(self) -> pd.DataFrame:
        df = pd.DataFrame([r.model_dump() for r in self.rows])
        if df.empty:
            return df
        return df.sort_values(['family', 'n'], kind='stable').reset_index(drop=True)

    def save_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_dataframe().to_csv(path, index=False)
        logger.info(f"Saved {len(self.rows)} bench rows to {path}")
        return path

    def render_table(self) -> str:
        df = self.to_dataframe()
        if df.empty:
            return "(no rows)"
        return df.to_string(index=False)
