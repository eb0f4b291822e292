"""
Analytic oracles for multi-controlled gates
Expected output of every basis input, built from the gate definitions only
"""

from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.circuit import Circuit, Matrix, freeze_matrix
from src.utils.errors import UsageError

Digits = Tuple[int, ...]

ORACLE_KINDS = ('cnz', 'cnx', 'cnztheta', 'cnu', 'cnu-multi')


@dataclass(frozen=True)
class Oracle:
    """
    Ideal action of a multi-controlled gate on n qudits

    `target` is a qudit index (cnx, cnu); for cnu-multi the last
    len(target_dims) qudits are the block targets and the rest are controls.
    """
    kind: str
    n: int
    target: Optional[int] = None
    theta: Optional[float] = None
    matrix: Optional[Matrix] = field(default=None, repr=False)
    target_dims: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ORACLE_KINDS:
            raise UsageError(f"unknown oracle kind {self.kind!r}; expected one of {ORACLE_KINDS}")
        if self.n < 2:
            raise UsageError("an oracle needs at least two qudits")
        if self.kind in ('cnx', 'cnu') and not (self.target is not None and 0 <= self.target < self.n):
            raise UsageError(f"target {self.target} out of range for {self.n} qudits")

    @classmethod
    def cnz(cls, n: int) -> 'Oracle':
        return cls('cnz', n)

    @classmethod
    def cnx(cls, n: int, target: int) -> 'Oracle':
        return cls('cnx', n, target=target)

    @classmethod
    def cnz_theta(cls, n: int, theta: float) -> 'Oracle':
        return cls('cnztheta', n, theta=float(theta))

    @classmethod
    def cnu(cls, n: int, U, target: int) -> 'Oracle':
        return cls('cnu', n, target=target, matrix=freeze_matrix(U))

    @classmethod
    def cnu_multi(cls, n_controls: int, matrix, target_dims: Sequence[int]) -> 'Oracle':
        dims = tuple(int(d) for d in target_dims)
        return cls('cnu-multi', n_controls + len(dims), matrix=freeze_matrix(matrix), target_dims=dims)

    @property
    def unitary(self) -> Optional[np.ndarray]:
        return None if self.matrix is None else np.array(self.matrix, dtype=complex)

    @property
    def n_controls(self) -> int:
        return self.n - len(self.target_dims)

    @property
    def full_space_block(self) -> bool:
        if self.kind != 'cnu-multi':
            return False
        return len(self.matrix) != 2 ** len(self.target_dims) or prod(self.target_dims) == len(self.matrix)

    def leakage_qudits(self) -> List[int]:
        """Qudits that must end in {0, 1}; targets of a full-space block may not"""
        if self.full_space_block:
            return list(range(self.n_controls))
        return list(range(self.n))

    def label(self) -> str:
        if self.kind == 'cnztheta':
            return f"{self.kind}({self.theta:.6g}) n={self.n}"
        if self.target is not None:
            return f"{self.kind} t={self.target} n={self.n}"
        return f"{self.kind} n={self.n}"

    def expected(self, digits: Sequence[int]) -> Dict[Digits, complex]:
        """Output amplitudes for the basis input `digits`"""
        digits = tuple(int(d) for d in digits)
        if len(digits) != self.n:
            raise UsageError(f"{len(digits)} digits for a {self.n}-qudit oracle")

        if self.kind in ('cnz', 'cnztheta'):
            if all(d == 1 for d in digits):
                return {digits: -1.0 + 0j if self.kind == 'cnz' else complex(np.exp(1j * self.theta))}
            return {digits: 1.0 + 0j}

        if self.kind in ('cnx', 'cnu'):
            t = self.target
            fires = all(d == 1 for q, d in enumerate(digits) if q != t)
            if not fires or digits[t] > 1:
                return {digits: 1.0 + 0j}
            if self.kind == 'cnx':
                return {digits[:t] + (1 - digits[t],) + digits[t + 1:]: 1.0 + 0j}
            column = self.unitary[:, digits[t]]
            return {digits[:t] + (k,) + digits[t + 1:]: complex(column[k]) for k in range(2)}

        controls, targets = digits[:self.n_controls], digits[self.n_controls:]
        if not all(d == 1 for d in controls):
            return {digits: 1.0 + 0j}
        if self.full_space_block:
            shape = self.target_dims
        else:
            if any(d > 1 for d in targets):
                return {digits: 1.0 + 0j}
            shape = (2,) * len(targets)
        column = self.unitary[:, np.ravel_multi_index(targets, shape)]
        out: Dict[Digits, complex] = {}
        for k, amplitude in enumerate(column):
            if amplitude != 0:
                out[controls + tuple(int(v) for v in np.unravel_index(k, shape))] = complex(amplitude)
        return out


def oracle(
    kind: str,
    n: int,
    target: Optional[int] = None,
    theta: Optional[float] = None,
    matrix=None,
    target_dims: Sequence[int] = ()
) -> Oracle:
    """Oracle for `kind` over n qudits in total, block targets included"""
    if kind == 'cnztheta' and theta is None:
        raise UsageError("cnztheta oracle needs an angle")
    if kind in ('cnu', 'cnu-multi') and matrix is None:
        raise UsageError(f"{kind} oracle needs a matrix")
    if kind == 'cnz':
        return Oracle.cnz(n)
    if kind == 'cnx':
        return Oracle.cnx(n, target)
    if kind == 'cnztheta':
        return Oracle.cnz_theta(n, theta)
    if kind == 'cnu':
        return Oracle.cnu(n, matrix, target)
    if kind == 'cnu-multi':
        return Oracle.cnu_multi(n - len(target_dims), matrix, target_dims)
    raise UsageError(f"unknown oracle kind {kind!r}; expected one of {ORACLE_KINDS}")


def _matrix_from_tag(entries) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in entries], dtype=complex)


def oracle_from_tags(circuit: Circuit) -> Oracle:
    """Rebuild the oracle a synthesized circuit was made for from its provenance tags"""
    tags = circuit.tags
    gate = tags.get('gate')
    if gate is None:
        raise UsageError(f"circuit {circuit.name!r} carries no gate tag; pass --gate")
    target = circuit.label_index(tags['target']) if 'target' in tags else None
    matrix = _matrix_from_tag(tags['matrix']) if 'matrix' in tags else None
    theta = tags.get('theta') if gate == 'cnztheta' else None
    return oracle(gate, len(circuit.register), target=target, theta=theta,
                  matrix=matrix, target_dims=tags.get('target_dims', ()))
