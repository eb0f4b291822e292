"""
Spectral decomposition of single-qubit unitaries
U = e^{i alpha} V diag(1, e^{i theta}) V^dagger
"""

from dataclasses import dataclass

import numpy as np
import logging

from src.models.circuit import unitarity_error
from src.utils.errors import CircuitError

logger = logging.getLogger(__name__)

SPECTRAL_TOLERANCE = 1e-10
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class SpectralData:
    alpha: float
    theta: float
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Z_theta = np.diag([1, np.exp(1j * self.theta)])
        return np.exp(1j * self.alpha) * self.V @ Z_theta @ self.V.conj().T

    @property
    def is_identity_basis(self) -> bool:
        return bool(np.allclose(self.V, np.eye(2), atol=SPECTRAL_TOLERANCE))


def _wrap_phase(angle: float) -> float:
    """Map to [0, 2 pi)"""
    wrapped = float(np.mod(angle, TWO_PI))
    return 0.0 if np.isclose(wrapped, TWO_PI, atol=SPECTRAL_TOLERANCE) else wrapped


def _wrap_relative(angle: float) -> float:
    """Map to (-pi, pi]"""
    wrapped = float(np.mod(angle + np.pi, TWO_PI) - np.pi)
    return np.pi if np.isclose(wrapped, -np.pi, atol=SPECTRAL_TOLERANCE) else wrapped


def _normalize_column(v: np.ndarray) -> np.ndarray:
    """Unit norm, first significant entry real and positive"""
    v = v / np.linalg.norm(v)
    lead = v[0] if abs(v[0]) > SPECTRAL_TOLERANCE else v[1]
    return v * (abs(lead) / lead)


def spectral_decompose(U) -> SpectralData:
    """
    Eigen-decompose a 2x2 unitary

    The eigenvalue with the smaller phase in [0, 2 pi) comes first and gives
    alpha; theta is the phase difference in (-pi, pi]. A multiple of the
    identity yields theta = 0 and V = I.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise CircuitError(f"expected a 2x2 matrix, got shape {U.shape}")
    error = unitarity_error(U)
    if error > SPECTRAL_TOLERANCE:
        raise CircuitError(f"matrix is not unitary (error {error:.2e})")

    eigenvalues, eigenvectors = np.linalg.eig(U)
    phases = [_wrap_phase(np.angle(lam)) for lam in eigenvalues]

    if abs(eigenvalues[0] - eigenvalues[1]) < SPECTRAL_TOLERANCE:
        alpha = min(phases)
        data = SpectralData(alpha=alpha, theta=0.0, V=np.eye(2, dtype=complex))
    else:
        first, second = sorted(range(2), key=lambda k: phases[k])
        alpha = phases[first]
        theta = _wrap_relative(phases[second] - phases[first])
        v1 = _normalize_column(eigenvectors[:, first])
        v2 = _normalize_column(np.array([-np.conj(v1[1]), np.conj(v1[0])]))
        data = SpectralData(alpha=alpha, theta=theta, V=np.column_stack([v1, v2]))

    residual = float(np.max(np.abs(data.reconstruct() - U)))
    if residual > SPECTRAL_TOLERANCE:
        raise CircuitError(f"spectral reconstruction error {residual:.2e} above tolerance")
    logger.debug(f"Spectral decomposition: alpha={data.alpha:.6f}, theta={data.theta:.6f}")
    return data
