"""Closed-form point-spectrum solutions and their stationary measures.

The one-step operator of the walk admits four explicit eigenpairs,
indexed j = 1..4.  Pairs (1, 2) share an origin state and decay with
rate 1/(3 + 2*sqrt(2)*sin(sigma)); pairs (3, 4) share the mirrored
origin state and rate 1/(3 - 2*sqrt(2)*sin(sigma)).  Eigenvalues come
in opposite-sign pairs: lambda_2 = -lambda_1 and lambda_4 = -lambda_3,
all of unit modulus.  Each eigenvector is geometric on both half-lines
with the same decay rate on each side, and carries a free complex
scale c.

The stationary measure of an eigenvector is mu(x) = |L(x)|^2 +
|R(x)|^2; its closed form is exponential in |x| with the same
coefficient 2 +- sqrt(2) sin(sigma) on both half-lines, so it is
symmetric about the origin even though the amplitudes themselves are
not.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coin import ModelParams, QubitState
from .evolution import Measure, WaveWindow, step

_SQRT2 = math.sqrt(2.0)
_INV_SQRT2 = 1.0 / _SQRT2


@dataclass(frozen=True)
class Eigenpair:
    """One of the four closed-form solutions U psi = lambda psi.

    ``origin_state`` is the actual amplitude pair at x = 0, i.e. it
    already includes the free scale ``scale_c``.
    """

    index: int
    lam: complex
    origin_state: QubitState
    scale_c: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.index not in (1, 2, 3, 4):
            raise ValueError(f"eigenpair index must be 1..4, got {self.index}")


@dataclass(frozen=True)
class RootPair:
    """Roots (theta_s, theta_l) of z^2 - sqrt(2)(1/lambda - lambda) z - 1,
    ordered so |theta_s| <= |theta_l|; their product is -1.

    ``degenerate`` flags |theta_s| = |theta_l| = 1, the boundary where
    the associated eigenvector stops decaying.
    """

    theta_s: complex
    theta_l: complex
    degenerate: bool


def _branch_sign(index: int) -> int:
    # +1 for j in {1, 2} (denominator 3 + 2*sqrt(2)*sin(sigma)),
    # -1 for j in {3, 4}.
    return 1 if index in (1, 2) else -1


def _eta(index: int) -> int:
    # Sign of the i in the origin state's second component.
    return -1 if index in (1, 2) else 1


def _decay_denominator(params: ModelParams, index: int) -> float:
    return 3.0 + _branch_sign(index) * 2.0 * _SQRT2 * math.sin(params.sigma)


def eigenvalues(params: ModelParams, c: complex = 1.0 + 0.0j) -> tuple[Eigenpair, ...]:
    """The four closed-form eigenpairs, each carrying the scale ``c``."""
    s = math.sin(params.sigma)
    co = math.cos(params.sigma)
    d1 = math.sqrt(3.0 + 2.0 * _SQRT2 * s)
    d2 = math.sqrt(3.0 - 2.0 * _SQRT2 * s)
    lam1 = complex(co, s + _SQRT2) / d1
    lam3 = -complex(co, s - _SQRT2) / d2
    e_tilde = cmath.exp(-1j * params.sigma_tilde)
    origin12 = QubitState(c * _INV_SQRT2, -1j * e_tilde * c * _INV_SQRT2)
    origin34 = QubitState(c * _INV_SQRT2, 1j * e_tilde * c * _INV_SQRT2)
    return (
        Eigenpair(1, lam1, origin12, c),
        Eigenpair(2, -lam1, origin12, c),
        Eigenpair(3, lam3, origin34, c),
        Eigenpair(4, -lam3, origin34, c),
    )


def eigenvector(pair: Eigenpair, params: ModelParams, x_min: int, x_max: int) -> WaveWindow:
    """Fill [x_min, x_max] with the closed-form eigenvector amplitudes.

    Both half-lines are geometric: ratio +-i/sqrt(denominator) on the
    right, the opposite sign on the left (as a function of |x|).
    """
    if not (x_min <= 0 <= x_max):
        raise ValueError(f"window must contain the origin, got [{x_min}, {x_max}]")
    c = pair.scale_c
    eta = _eta(pair.index)
    denom = _decay_denominator(params, pair.index)
    ratio_sign = 1.0 if pair.index in (1, 3) else -1.0
    rho_plus = ratio_sign * 1j / math.sqrt(denom)
    rho_minus = -rho_plus
    e_tilde = cmath.exp(-1j * params.sigma_tilde)
    # Left amplitude on x <= -1 is (sqrt(2)*alpha - e^{i sigma_minus}*beta)
    # times the geometric factor, which collapses to the e^{-i sigma} form.
    coef_l_neg = (1.0 - eta * 1j * _INV_SQRT2 * cmath.exp(-1j * params.sigma)) * c
    coef_r_pos = (cmath.exp(-1j * params.sigma_plus) * _INV_SQRT2 + eta * 1j * e_tilde) * c
    coef_r_neg = eta * 1j * e_tilde * c * _INV_SQRT2

    n = x_max - x_min + 1
    amps = np.empty((n, 2), dtype=np.complex128)
    for i, x in enumerate(range(x_min, x_max + 1)):
        if x >= 1:
            g = rho_plus**x
            amps[i, 0] = c * _INV_SQRT2 * g
            amps[i, 1] = coef_r_pos * g
        elif x == 0:
            amps[i, 0] = c * _INV_SQRT2
            amps[i, 1] = coef_r_neg
        else:
            g = rho_minus ** (-x)
            amps[i, 0] = coef_l_neg * g
            amps[i, 1] = coef_r_neg * g
    return WaveWindow(time=0, origin=x_min, amps=amps)


def stationary_measure(pair: Eigenpair, params: ModelParams, x: int) -> float:
    """Closed-form mu(x) = |L(x)|^2 + |R(x)|^2 of the eigenvector.

    Equals |c|^2 at the origin and decays geometrically in |x| with
    rate 1/(3 +- 2 sqrt(2) sin(sigma)) and coefficient
    2 +- sqrt(2) sin(sigma) on both half-lines.
    """
    c_sq = abs(pair.scale_c) ** 2
    if x == 0:
        return c_sq
    sign = _branch_sign(pair.index)
    denom = _decay_denominator(params, pair.index)
    coef = 2.0 + sign * _SQRT2 * math.sin(params.sigma)
    return coef * c_sq * (1.0 / denom) ** abs(x)


def stationary_profile(pair: Eigenpair, params: ModelParams, x_min: int, x_max: int) -> Measure:
    """Stationary measure tabulated over [x_min, x_max]."""
    mass = np.array(
        [stationary_measure(pair, params, x) for x in range(x_min, x_max + 1)],
        dtype=np.float64,
    )
    return Measure(origin=x_min, mass=mass)


def normalizing_scale(pair: Eigenpair, params: ModelParams) -> float:
    """|c| for which the stationary measure sums to 1 over all of Z.

    Raises ValueError when the geometric tails do not converge (decay
    rate >= 1, the delocalization boundary).
    """
    sign = _branch_sign(pair.index)
    denom = _decay_denominator(params, pair.index)
    if denom <= 1.0:
        raise ValueError(
            f"stationary measure is not summable for j={pair.index}: decay rate "
            f"{1.0 / denom} >= 1"
        )
    r = 1.0 / denom
    coef = 2.0 + sign * _SQRT2 * math.sin(params.sigma)
    total_unit_c = 1.0 + 2.0 * coef * r / (1.0 - r)
    return 1.0 / math.sqrt(total_unit_c)


def theta_roots(lam: complex, tol: float = 1e-6) -> RootPair:
    """Roots of z^2 - sqrt(2)(1/lambda - lambda) z - 1 = 0, ordered by
    modulus.

    The sub-unit root's squared modulus is the eigenvector decay rate.
    A tie |theta_s| = |theta_l| = 1 marks the delocalization boundary
    and is flagged as degenerate rather than silently ordered.  The
    root gap scales as the square root of the parameter distance to
    the boundary, so 1-ulp noise in lambda already moves the moduli
    ~1e-8 off 1; the default tol absorbs that.
    """
    if abs(abs(lam) - 1.0) > 1e-9:
        raise ValueError(f"lambda must have unit modulus, got |lambda| = {abs(lam)!r}")
    roots = np.roots([1.0, -_SQRT2 * (1.0 / lam - lam), -1.0])
    r0, r1 = sorted(roots, key=abs)
    degenerate = abs(abs(r1) - abs(r0)) < tol
    return RootPair(theta_s=complex(r0), theta_l=complex(r1), degenerate=degenerate)


def eigen_residual(pair: Eigenpair, params: ModelParams, half_width: int) -> float:
    """Max-norm of (U psi - lambda psi) over interior positions.

    Builds the closed-form eigenvector on [-half_width-1, half_width+1],
    applies one exact evolution step and compares against lambda * psi
    on [-half_width+1, half_width-1], where the step sees only correct
    neighbours.  Scales linearly with |c|.
    """
    if half_width < 2:
        raise ValueError(f"half_width must be at least 2, got {half_width}")
    w = eigenvector(pair, params, -half_width - 1, half_width + 1)
    stepped = step(w, params)
    xs = np.arange(-half_width + 1, half_width)
    new = stepped.amps[xs - stepped.origin]
    old = w.amps[xs - w.origin]
    return float(np.max(np.abs(new - pair.lam * old)))
