"""Model parameters and position-dependent coin operators.

The walk on the integer line uses three 2x2 unitaries: one coin for the
positive half-line (x >= 1), one for the negative half-line (x <= -1),
and the fixed defect coin diag(1, -1) at the origin.  The half-line
coins share the same shape

    (1/sqrt(2)) [[1, e^{i*sigma}], [e^{-i*sigma}, -1]]

with sigma = sigma_plus on the right and sigma = sigma_minus on the
left.  Every coin has determinant -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

#: Default absolute tolerance for complex/measure equality checks.
DEFAULT_TOL = 1e-12

_SQRT2 = math.sqrt(2.0)
_INV_SQRT2 = 1.0 / _SQRT2


class NormalizationError(ValueError):
    """A state that must be a unit vector is not."""


@dataclass(frozen=True)
class ModelParams:
    """The angle pair (sigma_plus, sigma_minus) defining the walk.

    ``sigma`` and ``sigma_tilde`` are always recomputed from the raw
    angles, never stored.  Angles are plain radians and are *not*
    reduced modulo 2*pi: the closed forms use the raw values and the
    trigonometric functions handle periodicity.
    """

    sigma_plus: float
    sigma_minus: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma_plus) and math.isfinite(self.sigma_minus)):
            raise ValueError(
                f"angles must be finite, got ({self.sigma_plus}, {self.sigma_minus})"
            )

    @property
    def sigma(self) -> float:
        """Half-difference (sigma_plus - sigma_minus) / 2."""
        return 0.5 * (self.sigma_plus - self.sigma_minus)

    @property
    def sigma_tilde(self) -> float:
        """Half-sum (sigma_plus + sigma_minus) / 2."""
        return 0.5 * (self.sigma_plus + self.sigma_minus)


@dataclass(frozen=True)
class QubitState:
    """Two-component chirality amplitude (left-mover, right-mover).

    Used both for initial states (where it must be normalized) and for
    per-site wavefunction entries (no intrinsic constraint).
    """

    left: complex
    right: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.left, self.right], dtype=np.complex128)

    def norm_sq(self) -> float:
        return abs(self.left) ** 2 + abs(self.right) ** 2

    def is_normalized(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.norm_sq() - 1.0) < tol

    def polar(self) -> tuple[float, float, float, float]:
        """Polar display (a, phi1, b, phi2) with a, b >= 0.

        left = a * exp(i*phi1) and right = b * exp(i*phi2); a zero
        amplitude gets phase 0.
        """
        a = abs(self.left)
        b = abs(self.right)
        phi1 = cmath.phase(self.left) if a > 0.0 else 0.0
        phi2 = cmath.phase(self.right) if b > 0.0 else 0.0
        return a, phi1, b, phi2

    @classmethod
    def from_polar(cls, a: float, phi1: float, b: float, phi2: float) -> "QubitState":
        if a < 0.0 or b < 0.0:
            raise ValueError(f"polar moduli must be non-negative, got a={a}, b={b}")
        return cls(a * cmath.exp(1j * phi1), b * cmath.exp(1j * phi2))


def coin_at(params: ModelParams, x: int) -> np.ndarray:
    """2x2 coin operator acting at position ``x``.

    Returns the right-phase coin for x >= 1, the left-phase coin for
    x <= -1 and diag(1, -1) at the origin.
    """
    if x == 0:
        return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
    sig = params.sigma_plus if x >= 1 else params.sigma_minus
    up = cmath.exp(1j * sig)
    dn = cmath.exp(-1j * sig)
    return _INV_SQRT2 * np.array([[1.0, up], [dn, -1.0]], dtype=np.complex128)


def split_coin(coin: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``coin`` into its left-step part P (top row) and
    right-step part Q (bottom row), with P + Q == coin exactly."""
    p = np.zeros((2, 2), dtype=np.complex128)
    q = np.zeros((2, 2), dtype=np.complex128)
    p[0, :] = coin[0, :]
    q[1, :] = coin[1, :]
    return p, q


def check_unitary(coin: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff coin^dagger @ coin deviates from the identity by less
    than ``tol`` in max-norm."""
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    dev = coin.conj().T @ coin - np.eye(2)
    return float(np.max(np.abs(dev))) < tol


def coin_entry_arrays(
    params: ModelParams, positions: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-position coin entries (a, b, c, d) as flat complex arrays.

    Feeds the evolution kernels: entry arrays are indexed like
    ``positions`` so that the coin at positions[i] is
    [[a[i], b[i]], [c[i], d[i]]].
    """
    n = len(positions)
    a = np.full(n, _INV_SQRT2, dtype=np.complex128)
    d = np.full(n, -_INV_SQRT2, dtype=np.complex128)
    b = np.empty(n, dtype=np.complex128)
    c = np.empty(n, dtype=np.complex128)
    pos = np.asarray(positions)
    right = pos >= 1
    left = pos <= -1
    origin = ~(right | left)
    b[right] = cmath.exp(1j * params.sigma_plus) * _INV_SQRT2
    c[right] = cmath.exp(-1j * params.sigma_plus) * _INV_SQRT2
    b[left] = cmath.exp(1j * params.sigma_minus) * _INV_SQRT2
    c[left] = cmath.exp(-1j * params.sigma_minus) * _INV_SQRT2
    a[origin] = 1.0
    b[origin] = 0.0
    c[origin] = 0.0
    d[origin] = -1.0
    return a, b, c, d
