"""
Data models and schemas using Pydantic for validation
File documents, reports and table rows shared across the pipeline
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, StrictInt, field_validator, model_validator


class DimensionPurpose(str, Enum):
    CONTROLLED_PHASE = "controlled-phase-family"
    MULTI_TARGET = "multi-target-controlled-unitary"


class GateKind(str, Enum):
    XM = "XM"
    LOCAL2 = "LOCAL2"
    CZ = "CZ"
    CZTHETA = "CZTHETA"
    CX = "CX"
    CUBLOCK = "CUBLOCK"


class FeasibilityViolation(BaseModel):
    node: int
    declared: int
    required: int

    def __str__(self) -> str:
        return (f"node {self.node} has dimension {self.declared}, "
                f"needs at least {self.required}")


class DimensionAssignment(BaseModel):
    """Per-node qudit dimensions for one construction family"""
    dims: Dict[int, int]
    purpose: DimensionPurpose = DimensionPurpose.CONTROLLED_PHASE

    @field_validator('dims')
    @classmethod
    def validate_dims(cls, v):
        for node, dim in v.items():
            if dim < 2:
                raise ValueError(f'node {node}: dimension {dim} is below 2')
        return v

    @property
    def max_dimension(self) -> int:
        return max(self.dims.values()) if self.dims else 0

    def dominated_by(self, declared: Dict[int, int]) -> List[FeasibilityViolation]:
        """Violations of `declared` against this assignment (pointwise)"""
        return [
            FeasibilityViolation(node=node, declared=declared[node], required=need)
            for node, need in sorted(self.dims.items())
            if declared[node] < need
        ]


class TopologyNode(BaseModel):
    id: StrictInt = Field(gt=0)
    dim: Optional[StrictInt] = Field(default=None, ge=2)


class TopologyDocument(BaseModel):
    """On-disk coupling graph: nodes with optional dimensions and an edge list"""
    nodes: List[TopologyNode]
    edges: List[Tuple[StrictInt, StrictInt]] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_references(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError('duplicate node ids')
        known = set(ids)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ValueError(f'edge ({a}, {b}) references an undeclared node')
        return self


class GateRecord(BaseModel):
    kind: GateKind
    qudits: List[int]
    params: Dict[str, Any] = Field(default_factory=dict)


class CircuitDocument(BaseModel):
    name: str = ""
    register: List[int]
    labels: Optional[List[str]] = None
    tags: Dict[str, Any] = Field(default_factory=dict)
    gates: List[GateRecord] = Field(default_factory=list)

    @field_validator('register')
    @classmethod
    def validate_register(cls, v):
        if not v:
            raise ValueError('register must hold at least one qudit')
        if any(d < 2 for d in v):
            raise ValueError('every qudit dimension must be at least 2')
        return v


class VerificationReport(BaseModel):
    circuit: str = ""
    oracle: str = ""
    max_amplitude_error: float
    leakage: float
    basis_states_tested: int
    sampled: bool = False
    tolerance: float
    leakage_tolerance: float
    passed: bool = Field(alias='pass')
    failing_input: Optional[str] = None

    model_config = {'populate_by_name': True}

    @model_validator(mode='after')
    def check_verdict(self):
        expected = (self.max_amplitude_error <= self.tolerance
                    and self.leakage <= self.leakage_tolerance)
        if self.passed != expected:
            raise ValueError('pass flag disagrees with the measured errors')
        return self


class PermutationReport(BaseModel):
    passed: bool
    inputs_tested: int
    table: Dict[str, str] = Field(default_factory=dict)
    failing_input: Optional[str] = None


class PlanReport(BaseModel):
    source: str
    node_count: int
    tree_edges: List[Tuple[int, int]]
    removed_edges: List[Tuple[int, int]]
    root: int
    root_candidates: List[int]
    height: int
    addresses: Dict[int, str]
    minimal_dims: Dict[int, int]
    purpose: DimensionPurpose
    declared_dims: Optional[Dict[int, int]] = None
    feasible: Optional[bool] = None
    violations: List[FeasibilityViolation] = Field(default_factory=list)


class BenchRow(BaseModel):
    family: str
    n: int = Field(ge=2)
    two_qudit_count: int
    lowered_count: int
    depth: int
    tree_height: int
    max_dimension: int
    reference_qubit_count: int
    verified: Optional[bool] = None

    @model_validator(mode='after')
    def check_counts(self):
        if self.two_qudit_count != 2 * self.n - 3:
            raise ValueError(
                f'{self.family}: count {self.two_qudit_count} != 2N-3 = {2 * self.n - 3}'
            )
        return self


ComplexEntry = Tuple[float, float]


class MatrixDocument(BaseModel):
    """Row-major complex matrix stored as [re, im] pairs"""
    matrix: List[List[ComplexEntry]]

    @field_validator('matrix')
    @classmethod
    def validate_square(cls, v):
        if not v or any(len(row) != len(v) for row in v):
            raise ValueError('matrix must be square and non-empty')
        return v


class BlockDocument(MatrixDocument):
    target_dims: List[int] = Field(min_length=1)
    cost: int = Field(ge=0)
    name: str = "U"
