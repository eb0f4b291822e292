"""
Gate-level circuit representation over a mixed-dimension qudit register
Gates, circuits, composition, inversion and two-qudit gate accounting
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from math import prod
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import logging

from src.models.schemas import GateKind
from src.utils.errors import CircuitError

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-12

_SQRT2_INV = 1 / np.sqrt(2)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)

Matrix = Tuple[Tuple[complex, ...], ...]


def freeze_matrix(matrix) -> Matrix:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise CircuitError(f"expected a square matrix, got shape {arr.shape}")
    return tuple(tuple(complex(v) for v in row) for row in arr)


def unitarity_error(matrix: np.ndarray) -> float:
    """Max absolute entry of M^dagger M - I"""
    m = np.asarray(matrix, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True)
class QuditRegister:
    dims: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        if not self.dims:
            raise CircuitError("register must hold at least one qudit")
        for q, d in enumerate(self.dims):
            if d < 2:
                raise CircuitError(f"qudit {q} has dimension {d}; must be >= 2")

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def total_dimension(self) -> int:
        return prod(self.dims)


@dataclass(frozen=True)
class Gate:
    """
    One gate of the qudit gate set

    XM swaps levels 0 and m; LOCAL2 is a unitary on levels {0,1}; CZ and
    CZTHETA phase the joint |11> component; CX flips target levels 0<->1 when
    the control is 1; CUBLOCK applies `matrix` to the targets when the
    control (first qudit) is 1. Every other level is left untouched.
    """
    kind: GateKind
    qudits: Tuple[int, ...]
    m: Optional[int] = None
    theta: Optional[float] = None
    name: Optional[str] = None
    matrix: Optional[Matrix] = field(default=None, repr=False)
    cost: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'qudits', tuple(int(q) for q in self.qudits))
        if len(set(self.qudits)) != len(self.qudits):
            raise CircuitError(f"{self.kind.value} acts on repeated qudits {self.qudits}")
        arity = {GateKind.XM: 1, GateKind.LOCAL2: 1, GateKind.CZ: 2,
                 GateKind.CZTHETA: 2, GateKind.CX: 2}
        if self.kind in arity and len(self.qudits) != arity[self.kind]:
            raise CircuitError(f"{self.kind.value} takes {arity[self.kind]} qudit(s)")
        if self.kind == GateKind.XM and (self.m is None or self.m < 1):
            raise CircuitError(f"X_m needs m >= 1, got {self.m}")
        if self.kind == GateKind.CZTHETA and self.theta is None:
            raise CircuitError("CZ_theta needs an angle")
        if self.kind in (GateKind.LOCAL2, GateKind.CUBLOCK):
            if self.matrix is None:
                raise CircuitError(f"{self.kind.value} needs a matrix")
            if self.kind == GateKind.LOCAL2 and len(self.matrix) != 2:
                raise CircuitError("LOCAL2 matrix must be 2x2")
            err = unitarity_error(self.unitary)
            if err > UNITARY_TOLERANCE:
                raise CircuitError(f"{self.display_name} matrix is not unitary (error {err:.2e})")
        if self.kind == GateKind.CUBLOCK:
            if len(self.qudits) < 2:
                raise CircuitError("CUBLOCK needs a control and at least one target")
            if self.cost is None or self.cost < 0:
                raise CircuitError("CUBLOCK needs a declared non-negative two-qudit cost")

    @property
    def unitary(self) -> Optional[np.ndarray]:
        return None if self.matrix is None else np.array(self.matrix, dtype=complex)

    @property
    def control(self) -> int:
        return self.qudits[0]

    @property
    def targets(self) -> Tuple[int, ...]:
        return self.qudits[1:]

    @property
    def display_name(self) -> str:
        if self.kind == GateKind.XM:
            return "X" if self.m == 1 else f"X_{self.m}"
        if self.kind == GateKind.LOCAL2:
            return self.name or "U"
        if self.kind == GateKind.CZTHETA:
            return "CZθ"
        if self.kind == GateKind.CUBLOCK:
            return f"CU[{self.name or 'U'}]"
        return self.kind.value

    @property
    def two_qudit_cost(self) -> int:
        if self.kind in (GateKind.CZ, GateKind.CZTHETA, GateKind.CX):
            return 1
        if self.kind == GateKind.CUBLOCK:
            return self.cost
        return 0

    @property
    def is_permutation(self) -> bool:
        """Real basis permutation: X_m, CX, or a {0,1} X"""
        if self.kind in (GateKind.XM, GateKind.CX):
            return True
        return (self.kind == GateKind.LOCAL2
                and np.array_equal(self.unitary, PAULI_X))

    def adjoint(self) -> 'Gate':
        if self.kind in (GateKind.XM, GateKind.CZ, GateKind.CX):
            return self
        if self.kind == GateKind.CZTHETA:
            return replace(self, theta=-self.theta)
        dagger = freeze_matrix(self.unitary.conj().T)
        if self.kind == GateKind.LOCAL2 and self.name == "P":
            return replace(self, matrix=dagger, theta=-self.theta)
        return replace(self, matrix=dagger, name=_adjoint_name(self.name))

    def remap(self, qudit_map: Mapping[int, int]) -> 'Gate':
        return replace(self, qudits=tuple(qudit_map[q] for q in self.qudits))

    def __str__(self) -> str:
        wires = " ".join(f"q{q}" for q in self.qudits)
        if self.kind == GateKind.LOCAL2 and self.name == "P":
            return f"P({self.theta:.4f}) {wires}"
        if self.kind == GateKind.CZTHETA:
            return f"CZθ({self.theta:.4f}) {wires}"
        if self.kind == GateKind.CUBLOCK:
            targets = " ".join(f"q{q}" for q in self.targets)
            return f"{self.display_name} q{self.control} -> {targets} (cost {self.cost})"
        return f"{self.display_name} {wires}"


_SELF_ADJOINT_NAMES = {"H", "X", "Z", "I"}


def _adjoint_name(name: Optional[str]) -> Optional[str]:
    if name is None or name in _SELF_ADJOINT_NAMES:
        return name
    return name[:-1] if name.endswith("†") else f"{name}†"


def xm(q: int, m: int) -> Gate:
    return Gate(GateKind.XM, (q,), m=m)


def x(q: int) -> Gate:
    return xm(q, 1)


def local2(q: int, matrix, name: str) -> Gate:
    return Gate(GateKind.LOCAL2, (q,), name=name, matrix=freeze_matrix(matrix))


def hadamard(q: int) -> Gate:
    return local2(q, HADAMARD, "H")


def phase(q: int, phi: float) -> Gate:
    """Level-1 phase gate diag(1, e^{i phi})"""
    return Gate(GateKind.LOCAL2, (q,), theta=float(phi), name="P",
                matrix=freeze_matrix(np.diag([1, np.exp(1j * phi)])))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def cz_theta(a: int, b: int, theta: float) -> Gate:
    return Gate(GateKind.CZTHETA, (a, b), theta=float(theta))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CX, (control, target))


def cu_block(control: int, targets: Sequence[int], matrix, cost: int, name: str = "U") -> Gate:
    return Gate(GateKind.CUBLOCK, (control, *targets), name=name,
                matrix=freeze_matrix(matrix), cost=int(cost))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a qudit register, plus naming metadata"""
    register: QuditRegister
    gates: Tuple[Gate, ...] = ()
    name: str = ""
    labels: Optional[Tuple[str, ...]] = None
    tags: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        if self.labels is None:
            object.__setattr__(self, 'labels', tuple(f"q{i}" for i in range(len(self.register))))
        else:
            object.__setattr__(self, 'labels', tuple(str(l) for l in self.labels))
        if len(self.labels) != len(self.register):
            raise CircuitError("one label per qudit is required")
        for position, gate in enumerate(self.gates):
            self._validate(position, gate)

    def _validate(self, position: int, gate: Gate) -> None:
        dims = self.register.dims
        for q in gate.qudits:
            if not 0 <= q < len(dims):
                raise CircuitError(f"gate {position} ({gate}) addresses qudit {q} outside the register")
        if gate.kind == GateKind.XM and gate.m >= dims[gate.qudits[0]]:
            raise CircuitError(
                f"gate {position}: X_{gate.m} needs level {gate.m}, "
                f"qudit {gate.qudits[0]} has dimension {dims[gate.qudits[0]]}"
            )
        if gate.kind == GateKind.CUBLOCK:
            size = len(gate.matrix)
            qubit_space = 2 ** len(gate.targets)
            full_space = prod(dims[t] for t in gate.targets)
            if size not in (qubit_space, full_space):
                raise CircuitError(
                    f"gate {position}: block matrix of size {size} fits neither the "
                    f"targets' qubit space ({qubit_space}) nor their full space ({full_space})"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate], **changes) -> 'Circuit':
        return replace(self, gates=tuple(gates), **changes)

    def without_gate(self, index: int) -> 'Circuit':
        gates = list(self.gates)
        del gates[index]
        return self.with_gates(gates, name=f"{self.name}-without-{index}")

    def label_index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise CircuitError(f"no qudit labelled {label!r} in circuit {self.name!r}")


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Gates of `a` followed by gates of `b`"""
    if a.register != b.register:
        raise CircuitError(f"register mismatch: {a.register.dims} vs {b.register.dims}")
    tags = {**a.tags, **b.tags}
    name = "∘".join(n for n in (a.name, b.name) if n)
    return Circuit(a.register, a.gates + b.gates, name=name, labels=a.labels, tags=tags)


def inverse(c: Circuit) -> Circuit:
    gates = tuple(g.adjoint() for g in reversed(c.gates))
    return c.with_gates(gates, name=f"{c.name}†" if c.name else "")


def two_qudit_count(c: Circuit) -> int:
    return sum(g.two_qudit_cost for g in c.gates)


def gate_histogram(c: Circuit) -> Dict[str, int]:
    return dict(Counter(g.display_name for g in c.gates))


def embed(
    c: Circuit,
    register: QuditRegister,
    qudit_map: Mapping[int, int],
    labels: Optional[Sequence[str]] = None
) -> Circuit:
    """Re-index a circuit into a larger register (qudit q -> qudit_map[q])"""
    for q, target in qudit_map.items():
        if c.register.dims[q] != register.dims[target]:
            raise CircuitError(
                f"qudit {q} (d={c.register.dims[q]}) cannot map onto "
                f"qudit {target} (d={register.dims[target]})"
            )
    gates = [g.remap(qudit_map) for g in c.gates]
    return Circuit(register, gates, name=c.name, labels=labels, tags=dict(c.tags))
