"""Exact time evolution of the walk and finite-horizon time averages.

The state lives on a light-cone-sized window that grows by exactly one
slot per side per step, so there is never a truncation boundary and the
evolution is exact to double precision.  These routines are the
simulation oracle against which every closed form is cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .coin import DEFAULT_TOL, ModelParams, NormalizationError, QubitState, coin_entry_arrays
from .kernels import evolve_accumulate

_NO_ACC = np.zeros(1, dtype=np.float64)


@dataclass(frozen=True)
class WaveWindow:
    """Finite window of the wavefunction at a fixed time.

    ``amps[i]`` holds (left, right) amplitudes at position
    ``origin + i``.  A window produced by the evolution spans exactly
    the light cone [-time, time]; everything outside is exactly zero.
    """

    time: int
    origin: int
    amps: np.ndarray  # shape (n, 2), complex128

    @property
    def x_min(self) -> int:
        return self.origin

    @property
    def x_max(self) -> int:
        return self.origin + len(self.amps) - 1

    def positions(self) -> np.ndarray:
        return np.arange(self.origin, self.origin + len(self.amps))

    def state_at(self, x: int) -> QubitState:
        """Amplitudes at position x (zero outside the window)."""
        i = x - self.origin
        if 0 <= i < len(self.amps):
            return QubitState(complex(self.amps[i, 0]), complex(self.amps[i, 1]))
        return QubitState(0.0, 0.0)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class Measure:
    """Real-valued mass per position; ``mass[i]`` sits at ``origin + i``.

    Probability measures sum to 1; stationary and limit measures carry
    no sum constraint.
    """

    origin: int
    mass: np.ndarray  # shape (n,), float64

    @property
    def x_min(self) -> int:
        return self.origin

    @property
    def x_max(self) -> int:
        return self.origin + len(self.mass) - 1

    def positions(self) -> np.ndarray:
        return np.arange(self.origin, self.origin + len(self.mass))

    def at(self, x: int) -> float:
        i = x - self.origin
        if 0 <= i < len(self.mass):
            return float(self.mass[i])
        return 0.0

    def total(self) -> float:
        return float(np.sum(self.mass))


def initial_window(phi0: QubitState) -> WaveWindow:
    """Time-0 window holding ``phi0`` at the origin.

    Raises NormalizationError unless |left|^2 + |right|^2 = 1 within
    the default tolerance.
    """
    if not phi0.is_normalized(DEFAULT_TOL):
        raise NormalizationError(
            f"initial state must have unit norm, got |phi0|^2 = {phi0.norm_sq()!r}"
        )
    amps = np.array([[phi0.left, phi0.right]], dtype=np.complex128)
    return WaveWindow(time=0, origin=0, amps=amps)


def _padded_arrays(w: WaveWindow) -> tuple[np.ndarray, np.ndarray, int]:
    """Copy window amplitudes into flat arrays with kernel margins.

    Returns (L, R, lo) where the window occupies [lo, lo + n - 1].
    """
    n = len(w.amps)
    L = np.zeros(n + 6, dtype=np.complex128)
    R = np.zeros(n + 6, dtype=np.complex128)
    L[3 : 3 + n] = w.amps[:, 0]
    R[3 : 3 + n] = w.amps[:, 1]
    return L, R, 3


def step(w: WaveWindow, params: ModelParams) -> WaveWindow:
    """One exact evolution step; the input window is left unmodified.

    The result spans one extra slot on each side.
    """
    n = len(w.amps)
    L, R, lo = _padded_arrays(w)
    positions = np.arange(w.origin - lo, w.origin - lo + len(L))
    a, b, c, d = coin_entry_arrays(params, positions)
    evolve_accumulate(L, R, a, b, c, d, lo, lo + n - 1, 1, _NO_ACC, False)
    amps = np.stack([L[lo - 1 : lo + n + 1], R[lo - 1 : lo + n + 1]], axis=1)
    return WaveWindow(time=w.time + 1, origin=w.origin - 1, amps=amps)


def distribution(w: WaveWindow) -> Measure:
    """Pointwise probability |L(x)|^2 + |R(x)|^2 of a window."""
    mass = np.sum(np.abs(w.amps) ** 2, axis=1)
    return Measure(origin=w.origin, mass=mass)


def _run_allocation(phi0: QubitState, horizon: int):
    n = 2 * horizon + 5
    center = horizon + 2
    L = np.zeros(n, dtype=np.complex128)
    R = np.zeros(n, dtype=np.complex128)
    L[center] = phi0.left
    R[center] = phi0.right
    return L, R, center


def evolve_window(params: ModelParams, phi0: QubitState, t: int) -> WaveWindow:
    """Window after ``t`` exact steps from ``phi0`` at the origin."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    w0 = initial_window(phi0)
    if t == 0:
        return w0
    L, R, center = _run_allocation(phi0, t)
    positions = np.arange(-center, len(L) - center)
    a, b, c, d = coin_entry_arrays(params, positions)
    evolve_accumulate(L, R, a, b, c, d, center, center, t, _NO_ACC, False)
    amps = np.stack([L[center - t : center + t + 1], R[center - t : center + t + 1]], axis=1)
    return WaveWindow(time=t, origin=-t, amps=amps)


def max_norm_deviation(params: ModelParams, phi0: QubitState, horizon: int) -> float:
    """Largest |total probability - 1| over all times 1..horizon."""
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}")
    initial_window(phi0)  # validates normalization
    L, R, center = _run_allocation(phi0, horizon)
    positions = np.arange(-center, len(L) - center)
    a, b, c, d = coin_entry_arrays(params, positions)
    return float(evolve_accumulate(L, R, a, b, c, d, center, center, horizon, _NO_ACC, False))


def time_average(params: ModelParams, phi0: QubitState, horizon: int) -> Measure:
    """Average of the position distribution over times 0..horizon-1.

    The t=0 distribution (a point mass at the origin) is included, so
    the result always sums to 1.
    """
    return time_average_series(params, phi0, [horizon])[horizon]


def time_average_series(
    params: ModelParams, phi0: QubitState, horizons: Iterable[int]
) -> dict[int, Measure]:
    """Time-averaged measures at several horizons from a single run.

    The evolution is advanced once up to max(horizons) and the running
    probability accumulator is snapshotted at each requested horizon.
    """
    cuts = sorted(set(int(t) for t in horizons))
    if not cuts or cuts[0] < 1:
        raise ValueError(f"horizons must be positive integers, got {list(horizons)}")
    t_max = cuts[-1]
    initial_window(phi0)  # validates normalization
    L, R, center = _run_allocation(phi0, t_max)
    positions = np.arange(-center, len(L) - center)
    a, b, c, d = coin_entry_arrays(params, positions)
    acc = np.zeros(len(L), dtype=np.float64)
    out: dict[int, Measure] = {}
    t = 0
    for cut in cuts:
        evolve_accumulate(L, R, a, b, c, d, center - t, center + t, cut - t, acc, True)
        t = cut
        radius = cut - 1
        mass = acc[center - radius : center + radius + 1] / cut
        out[cut] = Measure(origin=-radius, mass=mass.copy())
    return out


def asymmetry_gap(m: Measure) -> float:
    """max over x of |m(x) - m(-x)| (zero for origin-symmetric measures)."""
    reach = max(abs(m.x_min), abs(m.x_max))
    gap = 0.0
    for x in range(0, reach + 1):
        gap = max(gap, abs(m.at(x) - m.at(-x)))
    return gap
