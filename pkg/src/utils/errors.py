"""
Exception hierarchy shared by every module.
Each error carries the exit status the command-line front end reports.
"""

from typing import List, Optional


class QuditSynthError(ValueError):
    """Base class for all expected failures of the synthesizer pipeline"""

    exit_code = 1


class UsageError(QuditSynthError):
    exit_code = 2


class TopologyFileError(QuditSynthError):
    """Unreadable or malformed structured input file"""

    exit_code = 2

    def __init__(self, path: str, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if field:
            location.append(f"field '{field}'")
        where = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{path}{where}: {message}")
        self.path = path
        self.line = line
        self.column = column
        self.field = field


class ConfigurationError(QuditSynthError):
    exit_code = 2


class ConnectivityError(QuditSynthError):
    """Coupling graph is not connected"""

    exit_code = 3

    def __init__(self, unreachable: int, start: int):
        super().__init__(
            f"coupling graph is disconnected: node {unreachable} "
            f"is unreachable from node {start}"
        )
        self.unreachable = unreachable
        self.start = start


class StructuralError(QuditSynthError):
    """Input that should be a tree is cyclic or disconnected, or a root is missing"""

    exit_code = 3


class FeasibilityError(QuditSynthError):
    """Qudit dimensions too small for the requested construction"""

    exit_code = 3

    def __init__(self, message: str, violations: Optional[List] = None):
        self.violations = list(violations or [])
        if self.violations:
            details = "; ".join(str(v) for v in self.violations)
            message = f"{message}: {details}"
        super().__init__(message)


class CircuitError(QuditSynthError):
    exit_code = 2


class SimulationError(QuditSynthError):
    exit_code = 2


class VerificationFailure(QuditSynthError):
    exit_code = 4


class BenchmarkError(QuditSynthError):
    exit_code = 4


class RootLookupError(StructuralError, LookupError):
    """Requested root is not a node of the tree"""
