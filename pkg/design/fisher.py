"""Fisher information for binary detection readings."""
import logging
from dataclasses import dataclass, field

import numpy as np

from detection.base_model import DetectionModel, as_points
from detection.range_model import RangeProfile
from utils.errors import DomainError

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10


def rotation(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class InfoMatrix2:
    """Symmetric positive semi-definite 2×2 information matrix.

    `singular_gradient` is set when some contributing reading had ∇ℓ = 0
    and therefore added nothing.
    """
    matrix: np.ndarray
    singular_gradient: bool = field(default=False)

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.shape != (2, 2):
            raise DomainError(f"Information matrix must be 2x2, got shape {a.shape}")
        scale = max(1.0, float(np.abs(a).max()))
        if abs(a[0, 1] - a[1, 0]) > SYMMETRY_TOL * scale:
            raise DomainError(f"Information matrix is not symmetric: {a.tolist()}")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def zeros(cls, singular_gradient: bool = False) -> "InfoMatrix2":
        return cls(np.zeros((2, 2)), singular_gradient)

    @property
    def det(self) -> float:
        a = self.matrix
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, tol: float = 1e-12) -> int:
        ev = self.eigenvalues
        return int(np.count_nonzero(ev > tol * max(1.0, float(np.abs(ev).max()))))

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return bool(np.all(self.eigenvalues >= -tol))

    def rotated(self, phi: float) -> "InfoMatrix2":
        """R(φ) I R(φ)ᵀ."""
        r = rotation(phi)
        return InfoMatrix2(r @ self.matrix @ r.T, self.singular_gradient)

    def __add__(self, other: "InfoMatrix2") -> "InfoMatrix2":
        return InfoMatrix2(self.matrix + other.matrix, self.singular_gradient or other.singular_gradient)


def fim_single(s, x, m: DetectionModel) -> InfoMatrix2:
    """Information carried by one reading taken at x about the source s.

    I = ∇ℓ ∇ℓᵀ / (ℓ (1 − ℓ)), a rank-one matrix; the zero matrix with the
    singular flag when ∇_s ℓ vanishes.
    """
    grad = np.asarray(m.gradient(as_points(s), as_points(x)), dtype=float)
    if not np.any(grad):
        return InfoMatrix2.zeros(singular_gradient=True)
    ell, miss = m.probabilities(as_points(s), as_points(x))
    return InfoMatrix2(np.outer(grad, grad) / (float(ell) * float(miss)))


def fim_total(s, xs, m: DetectionModel) -> InfoMatrix2:
    """Σ_k fim_single(s, x_k) over the measurement locations."""
    xs = as_points(xs).reshape(-1, 2)
    if xs.shape[0] == 0:
        raise DomainError("fim_total needs at least one measurement location")
    total = InfoMatrix2.zeros()
    for x in xs:
        total = total + fim_single(s, x, m)
    return total


def radius_objective(profile: RangeProfile, r) -> np.ndarray:
    """κ(r) = ρ′(r)² / (ρ(r) (1 − ρ(r)))."""
    r = np.asarray(r, dtype=float)
    slope = profile.derivative(r)
    denom = profile.rho(r) * profile.miss(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(denom > 0, slope ** 2 / denom, 0.0)
    return value if value.ndim else float(value)


def range_fim(s, xs, profile: RangeProfile) -> InfoMatrix2:
    """Closed form for ℓ = ρ(‖s − x‖): Σ_k κ(r_k) u_k u_kᵀ with u_k = (cos θ_k, sin θ_k).

    θ_k and r_k are the bearing and range of x_k seen from s.
    """
    xs = as_points(xs).reshape(-1, 2)
    diff = xs - as_points(s)
    r = np.hypot(diff[:, 0], diff[:, 1])
    theta = np.arctan2(diff[:, 1], diff[:, 0])
    kappa = np.where(r > 0, radius_objective(profile, r), 0.0)
    c, sn = np.cos(theta), np.sin(theta)
    matrix = np.array([
        [np.sum(kappa * c * c), np.sum(kappa * c * sn)],
        [np.sum(kappa * c * sn), np.sum(kappa * sn * sn)],
    ])
    return InfoMatrix2(matrix, bool(np.any(r == 0)))


def angle_condition_residual(angles) -> tuple:
    """(Σ cos 2θ_k, Σ sin 2θ_k); both vanish exactly at determinant-maximising bearings."""
    angles = np.asarray(angles, dtype=float)
    return float(np.sum(np.cos(2 * angles))), float(np.sum(np.sin(2 * angles)))


def angular_determinant(angles) -> float:
    """det Σ_k u_k u_kᵀ for unit bearings u_k; equals (N² − C² − S²) / 4."""
    angles = np.asarray(angles, dtype=float)
    c, s = np.cos(angles), np.sin(angles)
    return float(np.sum(c * c) * np.sum(s * s) - np.sum(c * s) ** 2)
