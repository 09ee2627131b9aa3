"""Time-averaged limit measure via boundary generating functions.

Everything here lives on the unit circle z = e^{i*theta}.  On the arcs
|sin(theta)| >= 1/sqrt(2) there is a real phase phi(theta) with

    cos(phi) = sqrt(2) cos(theta),
    sin(phi) = sgn(sin(theta)) * sqrt(2 sin^2(theta) - 1),

and the two boundary kernels f0_plus, f0_minus are pure phases
e^{i(theta + sigma_plus + phi)} and e^{i(theta - sigma_minus + phi)}.
Their product enters the scalar denominator

    Lambda0(z) = 1 + f0_plus(z) * f0_minus(z) = 1 + e^{2i(theta + sigma + phi)}

whose unit-circle zeros are the point-spectrum singular points.  The
time-averaged limit measure at any site is the summed squared norm of
the residues at those zeros; the closed form is evaluated directly by
:func:`limit_measure` while :func:`limit_measure_from_residues`
re-assembles it from the singular points, the residue norms and the
transfer factors, providing an end-to-end consistency check of the
whole pipeline.

Outside the arcs the square-root branch turns oscillatory and carries
no point-spectrum mass; evaluation there raises OutOfBranchError.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .coin import DEFAULT_TOL, ModelParams, NormalizationError, QubitState
from .evolution import Measure

_SQRT2 = math.sqrt(2.0)
_INV_SQRT2 = math.sqrt(0.5)

#: Slack for closed-interval branch boundaries (sin(sigma) = +-1/sqrt(2)),
#: so exact pi-multiple fixtures land inside despite 1-ulp trig noise.
_BOUNDARY_TOL = 1e-12

_ARCS = (
    (0.25 * math.pi, 0.75 * math.pi),
    (1.25 * math.pi, 1.75 * math.pi),
)


class OutOfBranchError(ValueError):
    """theta lies outside the arcs |sin(theta)| >= 1/sqrt(2)."""


class PoleError(ValueError):
    """Evaluation requested at a singular point."""


class BranchAbsentError(ValueError):
    """The requested singular-point family is absent at these parameters."""


def _require_on_arc(theta: float) -> None:
    if abs(math.sin(theta)) < _INV_SQRT2 - _BOUNDARY_TOL:
        raise OutOfBranchError(
            f"theta = {theta!r} has |sin(theta)| < 1/sqrt(2); the oscillatory "
            "branch carries no point-spectrum contribution"
        )


def _require_normalized(phi0: QubitState) -> None:
    if not phi0.is_normalized(DEFAULT_TOL):
        raise NormalizationError(
            f"initial state must have unit norm, got |phi0|^2 = {phi0.norm_sq()!r}"
        )


def tilde_phi(theta: float) -> float:
    """The branch phase phi(theta) on the allowed arc, in (-pi, pi]."""
    _require_on_arc(theta)
    st = math.sin(theta)
    sin_phi = math.copysign(math.sqrt(max(2.0 * st * st - 1.0, 0.0)), st)
    cos_phi = _SQRT2 * math.cos(theta)
    return math.atan2(sin_phi, cos_phi)


def dphi_dtheta(theta: float) -> float:
    """Derivative of the branch phase: sqrt(2)|sin| / sqrt(2 sin^2 - 1).

    Diverges (returns inf) at the arc endpoints |sin(theta)| = 1/sqrt(2).
    """
    _require_on_arc(theta)
    st = math.sin(theta)
    d = math.sqrt(max(2.0 * st * st - 1.0, 0.0))
    if d == 0.0:
        return math.inf
    return _SQRT2 * abs(st) / d


def f0(theta: float, params: ModelParams, side: str) -> complex:
    """Boundary kernel f0 on the allowed arc: a pure phase.

    side "plus" gives e^{i(theta + sigma_plus + phi)}, side "minus"
    gives e^{i(theta - sigma_minus + phi)}.  Each satisfies its
    defining quadratic

        f^2 - sqrt(2) e^{+-i sigma} (1 + z^2) f + e^{+-2i sigma} z^2 = 0.
    """
    phi = tilde_phi(theta)
    if side == "plus":
        return cmath.exp(1j * (theta + params.sigma_plus + phi))
    if side == "minus":
        return cmath.exp(1j * (theta - params.sigma_minus + phi))
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def lambda_tilde(theta: float, params: ModelParams, side: str) -> complex:
    """Transfer factor per lattice step away from the origin.

    Defined by z/(e^{-i sigma_plus} f0_plus - sqrt(2)) on the plus side
    and z/(sqrt(2) - e^{i sigma_minus} f0_minus) on the minus side; its
    squared modulus on the arc is 1/(3 - 2 sqrt(2) cos(theta + phi)).
    """
    z = cmath.exp(1j * theta)
    if side == "plus":
        return z / (cmath.exp(-1j * params.sigma_plus) * f0(theta, params, "plus") - _SQRT2)
    if side == "minus":
        return z / (_SQRT2 - cmath.exp(1j * params.sigma_minus) * f0(theta, params, "minus"))
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def lambda0(theta: float, params: ModelParams) -> complex:
    """Pole denominator Lambda0 = 1 + f0_plus * f0_minus on the arc."""
    return 1.0 + f0(theta, params, "plus") * f0(theta, params, "minus")


@dataclass(frozen=True)
class SingularSet:
    """Unit-circle singular points, grouped in the two +- families.

    Family 1 exists for sin(sigma) <= 1/sqrt(2), family 2 for
    sin(sigma) >= -1/sqrt(2) (closed intervals; both in the overlap).
    """

    theta1_present: bool
    theta2_present: bool
    theta1_plus: complex | None
    theta1_minus: complex | None
    theta2_plus: complex | None
    theta2_minus: complex | None

    def points(self) -> list[tuple[str, complex]]:
        out: list[tuple[str, complex]] = []
        if self.theta1_present:
            out.append(("theta1+", self.theta1_plus))
            out.append(("theta1-", self.theta1_minus))
        if self.theta2_present:
            out.append(("theta2+", self.theta2_plus))
            out.append(("theta2-", self.theta2_minus))
        return out

    def angles(self) -> list[tuple[str, float]]:
        return [(label, cmath.phase(z) % (2.0 * math.pi)) for label, z in self.points()]


def singular_points(params: ModelParams) -> SingularSet:
    """Closed-form singular points of the site generating functions.

    Each returned point z satisfies Lambda0(z) = 0 with the arc branch
    phase.  Family 1 carries squared transfer modulus
    1/(3 - 2 sqrt(2) sin(sigma)), family 2 the + sign.
    """
    s = math.sin(params.sigma)
    co = math.cos(params.sigma)
    p1 = s <= _INV_SQRT2 + _BOUNDARY_TOL
    p2 = s >= -_INV_SQRT2 - _BOUNDARY_TOL
    t1p = t1m = t2p = t2m = None
    if p1:
        d = math.sqrt(3.0 - 2.0 * _SQRT2 * s)
        t1p = complex(co / d, (_SQRT2 - s) / d)
        t1m = -t1p
    if p2:
        d = math.sqrt(3.0 + 2.0 * _SQRT2 * s)
        t2p = complex(co / d, -(_SQRT2 + s) / d)
        t2m = -t2p
    return SingularSet(p1, p2, t1p, t1m, t2p, t2m)


def residue_norm_sq(params: ModelParams, which: str) -> float:
    """Squared residue modulus of 1/Lambda0 at the chosen family.

    Family "theta1": (1/4) |(sqrt(2) sin(sigma) - 1)/(2 sqrt(2) sin(sigma) - 3)|^2;
    family "theta2" flips both signs.  Raises BranchAbsentError when the
    family is not present at these parameters.
    """
    pts = singular_points(params)
    s = math.sin(params.sigma)
    if which == "theta1":
        if not pts.theta1_present:
            raise BranchAbsentError(f"theta1 family absent: sin(sigma) = {s!r} > 1/sqrt(2)")
        return 0.25 * ((_SQRT2 * s - 1.0) / (2.0 * _SQRT2 * s - 3.0)) ** 2
    if which == "theta2":
        if not pts.theta2_present:
            raise BranchAbsentError(f"theta2 family absent: sin(sigma) = {s!r} < -1/sqrt(2)")
        return 0.25 * ((_SQRT2 * s + 1.0) / (2.0 * _SQRT2 * s + 3.0)) ** 2
    raise ValueError(f"which must be 'theta1' or 'theta2', got {which!r}")


def residue_norm_sq_at(theta: float) -> float:
    """Squared residue modulus of 1/Lambda0 at an arbitrary arc point,
    via the expansion 1/|Lambda0'|^2 = 1/(4 (1 + dphi/dtheta)^2).

    Written in a form that stays finite (and vanishes) at the arc
    endpoints where dphi/dtheta diverges.
    """
    _require_on_arc(theta)
    st = math.sin(theta)
    d = math.sqrt(max(2.0 * st * st - 1.0, 0.0))
    return d * d / (4.0 * (d + _SQRT2 * abs(st)) ** 2)


def cross_term(params: ModelParams, phi0: QubitState) -> float:
    """Initial-state interference term Re(i e^{-i sigma_tilde} alpha conj(beta)).

    In polar form this equals a*b*sin(sigma_tilde - (phi1 - phi2)).
    """
    return (1j * cmath.exp(-1j * params.sigma_tilde) * phi0.left * phi0.right.conjugate()).real


def _branch_active(sign: int, s: float) -> bool:
    # sign +1: requires sin(sigma) >= -1/sqrt(2); sign -1 mirrored.
    return sign * s >= -_INV_SQRT2 - _BOUNDARY_TOL


def branch_measure(params: ModelParams, phi0: QubitState, x: int, sign: int) -> float:
    """One +- branch of the limit measure (no activity gating).

    sign +1 pairs with the theta2 singular family, sign -1 with theta1.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    s = math.sin(params.sigma)
    num = 1.0 + sign * _SQRT2 * s
    denom = 3.0 + sign * 2.0 * _SQRT2 * s
    pref = (num / denom) ** 2
    bracket = 1.0 - sign * 2.0 * cross_term(params, phi0)
    if x == 0:
        shape = 1.0
    else:
        shape = (2.0 + sign * _SQRT2 * s) * (1.0 / denom) ** abs(x)
    return pref * bracket * shape


def limit_measure(params: ModelParams, phi0: QubitState, x: int) -> float:
    """Time-averaged limit measure at site x (closed form).

    Sums the active +- branches.  Even in x, non-negative, and strictly
    positive at the origin unless the interference term cancels a lone
    branch.
    """
    _require_normalized(phi0)
    s = math.sin(params.sigma)
    total = 0.0
    for sign in (1, -1):
        if _branch_active(sign, s):
            total += branch_measure(params, phi0, x, sign)
    return total


def limit_measure_from_residues(params: ModelParams, phi0: QubitState, x: int) -> float:
    """Limit measure re-assembled from the residue decomposition.

    Walks the singular points, combining the per-point residue norm
    (expansion route), the transfer-factor powers for |x| >= 1 and the
    boundary-kernel interference terms.  Agrees with
    :func:`limit_measure` to near machine precision; the two routes
    share no code beyond the kernel definitions.
    """
    _require_normalized(phi0)
    alpha = complex(phi0.left)
    beta = complex(phi0.right)
    total = 0.0
    for _, z in singular_points(params).points():
        theta = cmath.phase(z)
        rfac = residue_norm_sq_at(theta)
        fp = f0(theta, params, "plus")
        fm = f0(theta, params, "minus")
        if x == 0:
            term = 2.0 * rfac * (
                1.0
                - (alpha.conjugate() * beta * fp).real
                + (alpha * beta.conjugate() * fm).real
            )
        elif x >= 1:
            lp2 = abs(lambda_tilde(theta, params, "plus")) ** 2
            term = (
                rfac
                * lp2 ** (x - 1)
                * (1.0 + lp2)
                * (1.0 + 2.0 * (alpha * beta.conjugate() * fm).real)
            )
        else:
            lm2 = abs(lambda_tilde(theta, params, "minus")) ** 2
            term = (
                rfac
                * lm2 ** (-x - 1)
                * (1.0 + lm2)
                * (1.0 - 2.0 * (alpha.conjugate() * beta * fp).real)
            )
        total += term
    return total


def limit_total_mass(params: ModelParams, phi0: QubitState) -> float:
    """Sum of the limit measure over all of Z, by geometric tail sums.

    Strictly below 1: the rest of the mass escapes ballistically and
    belongs to the absolutely continuous part of the dynamics.
    """
    _require_normalized(phi0)
    s = math.sin(params.sigma)
    total = 0.0
    for sign in (1, -1):
        if not _branch_active(sign, s):
            continue
        at0 = branch_measure(params, phi0, 0, sign)
        if at0 == 0.0:
            continue
        denom = 3.0 + sign * 2.0 * _SQRT2 * s
        r = 1.0 / denom
        coef = 2.0 + sign * _SQRT2 * s
        total += at0 * (1.0 + 2.0 * coef * r / (1.0 - r))
    return total


def limit_profile(params: ModelParams, phi0: QubitState, x_min: int, x_max: int) -> Measure:
    """Limit measure tabulated over [x_min, x_max]."""
    mass = np.array(
        [limit_measure(params, phi0, x) for x in range(x_min, x_max + 1)],
        dtype=np.float64,
    )
    return Measure(origin=x_min, mass=mass)


def xi_tilde_matrix(theta: float, params: ModelParams, x: int) -> np.ndarray:
    """Site generating function as a 2x2 matrix at z = e^{i*theta}.

    The x = 0 matrix is [[1, -f0_plus], [f0_minus, 1]] / Lambda0; for
    |x| >= 1 it is a rank-one outer product carrying |x| - 1 transfer
    factors.  Raises PoleError at the singular points.
    """
    fp = f0(theta, params, "plus")
    fm = f0(theta, params, "minus")
    lam0 = 1.0 + fp * fm
    if abs(lam0) < 1e-12:
        raise PoleError(f"theta = {theta!r} is a singular point (|Lambda0| = {abs(lam0)!r})")
    xi0 = np.array([[1.0, -fp], [fm, 1.0]], dtype=np.complex128) / lam0
    if x == 0:
        return xi0
    z = cmath.exp(1j * theta)
    if x >= 1:
        lp = lambda_tilde(theta, params, "plus")
        col = np.array([lp * fp, z], dtype=np.complex128)
        row = np.array([0.0, -1.0], dtype=np.complex128) @ xi0
        return lp ** (x - 1) * np.outer(col, row)
    lm = lambda_tilde(theta, params, "minus")
    col = np.array([z, lm * fm], dtype=np.complex128)
    row = np.array([1.0, 0.0], dtype=np.complex128) @ xi0
    return lm ** (-x - 1) * np.outer(col, row)


def f0_at_z(z: complex, params: ModelParams, side: str) -> complex:
    """Boundary kernel at general z, branch-selected off the circle.

    Solves the defining quadratic and keeps the root whose transfer
    factor lies inside the unit disk (the two candidates multiply to
    -1, so the choice is unambiguous away from degeneracies).  On the
    arc this limits to :func:`f0` as |z| -> 1 from inside.
    """
    if side == "plus":
        e = cmath.exp(1j * params.sigma_plus)
    elif side == "minus":
        e = cmath.exp(-1j * params.sigma_minus)
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    b = -_SQRT2 * e * (1.0 + z * z)
    c = e * e * z * z
    disc = cmath.sqrt(b * b - 4.0 * c)
    roots = ((-b + disc) / 2.0, (-b - disc) / 2.0)
    lams = [_lambda_from_f(z, f, params, side) for f in roots]
    return roots[0] if abs(lams[0]) < abs(lams[1]) else roots[1]


def _lambda_from_f(z: complex, f: complex, params: ModelParams, side: str) -> complex:
    if side == "plus":
        return z / (cmath.exp(-1j * params.sigma_plus) * f - _SQRT2)
    return z / (_SQRT2 - cmath.exp(1j * params.sigma_minus) * f)


def xi_matrix_at_z(z: complex, params: ModelParams, x: int) -> np.ndarray:
    """Site generating function at general z (no pole guard).

    Used to extract residues numerically by approaching a singular
    point radially from inside the circle.
    """
    fp = f0_at_z(z, params, "plus")
    fm = f0_at_z(z, params, "minus")
    lam0 = 1.0 + fp * fm
    xi0 = np.array([[1.0, -fp], [fm, 1.0]], dtype=np.complex128) / lam0
    if x == 0:
        return xi0
    if x >= 1:
        lp = _lambda_from_f(z, fp, params, "plus")
        col = np.array([lp * fp, z], dtype=np.complex128)
        row = np.array([0.0, -1.0], dtype=np.complex128) @ xi0
        return lp ** (x - 1) * np.outer(col, row)
    lm = _lambda_from_f(z, fm, params, "minus")
    col = np.array([z, lm * fm], dtype=np.complex128)
    row = np.array([1.0, 0.0], dtype=np.complex128) @ xi0
    return lm ** (-x - 1) * np.outer(col, row)


def residue_vector_numeric(
    params: ModelParams,
    phi0: QubitState,
    x: int,
    pole: complex,
    eps: Sequence[float] = (1e-3, 1e-4, 1e-5),
) -> np.ndarray:
    """Residue of the site generating function applied to phi0, by a
    radial contour limit with Richardson extrapolation.

    Samples (z - pole) * Xi_x(z) phi0 at z = (1 - eps_k) * pole and
    extrapolates eps -> 0 through a Neville table with step ratio 10.
    """
    v = phi0.as_array()
    samples = []
    for e in eps:
        z = (1.0 - e) * pole
        samples.append((z - pole) * (xi_matrix_at_z(z, params, x) @ v))
    table = [np.asarray(s) for s in samples]
    k = len(table)
    for m in range(1, k):
        nxt = []
        for i in range(1, len(table)):
            factor = 10.0**m
            nxt.append((factor * table[i] - table[i - 1]) / (factor - 1.0))
        table = nxt
    return table[0]


def _tilde_phi_grid(thetas: np.ndarray) -> np.ndarray:
    st = np.sin(thetas)
    sin_phi = np.sign(st) * np.sqrt(np.clip(2.0 * st * st - 1.0, 0.0, None))
    cos_phi = _SQRT2 * np.cos(thetas)
    return np.arctan2(sin_phi, cos_phi)


def scan_lambda0_zeros(params: ModelParams, n_points: int = 1_000_000) -> np.ndarray:
    """Brute-force zero scan of Lambda0 over the allowed arcs.

    Samples cos(theta + sigma + phi(theta)) on a dense grid (the zeros
    of Lambda0 are exactly its zeros, and it is strictly monotone in
    theta on each arc), brackets sign changes, refines by root solving
    and returns the sorted zero angles in [0, 2*pi).
    """
    sigma = params.sigma

    def h(theta: float) -> float:
        st = math.sin(theta)
        sin_phi = math.copysign(math.sqrt(max(2.0 * st * st - 1.0, 0.0)), st)
        phi = math.atan2(sin_phi, _SQRT2 * math.cos(theta))
        return math.cos(theta + sigma + phi)

    roots: list[float] = []
    per_arc = max(n_points // len(_ARCS), 16)
    for lo, hi in _ARCS:
        grid = np.linspace(lo, hi, per_arc)
        vals = np.cos(grid + sigma + _tilde_phi_grid(grid))
        for endpoint in (lo, hi):
            if abs(h(endpoint)) < 1e-10:
                roots.append(endpoint)
        zero_hits = np.flatnonzero(vals == 0.0)
        roots.extend(float(grid[i]) for i in zero_hits)
        flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        for i in flips:
            roots.append(float(brentq(h, grid[i], grid[i + 1], xtol=1e-14)))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > 1e-9:
            deduped.append(r)
    return np.array(deduped)
