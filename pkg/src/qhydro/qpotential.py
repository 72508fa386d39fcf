"""Madelung quantum potential, quantum force, and tail-growth classification.

The quantum potential of a density n is

    V_qu = -(hbar^2 / 2m) (d^2 sqrt(n) / dq^2) / sqrt(n)

computed with the stencil kernels of :mod:`qhydro.grids`.  Densities are
clamped below at a relative floor before the square root (the tails of any
localized state underflow long before the grid ends).  For work in the deep
tail, where no floating-point density survives, the same operator is
available on log-densities via the identity

    psi''/psi = (L')^2/4 + L''/2,      L = log n.

The force-growth classifier fits the exponent a of |q^-1 dV_qu/dq| ~ q^a
over an outer radial window and maps it onto the four expansion classes.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import HBAR
from .errors import DegenerateDensityError, TailFitError, ValidationError
from .grids import Field, Grid, periodic_derivative, stencil_derivative

DENSITY_FLOOR_FRACTION = 1e-12

# Fitted-exponent class boundaries sit at 0 (ballistic) and -1
# (convergence of the nonlocality integral); finite-window fits cannot
# resolve exact exponents, so a +-0.1 band around each boundary is
# reported with a boundary flag.
EXPONENT_TOLERANCE = 0.1

SUPER_BALLISTIC = "super_ballistic"
BALLISTIC = "ballistic"
UNDER_BALLISTIC = "under_ballistic"
ASYMPTOTICALLY_VANISHING = "asymptotically_vanishing"


@dataclass(frozen=True)
class QuantumForceProfile:
    """Quantum force -dV_qu/dq sampled on a grid, radial about ``origin``."""

    grid: Grid
    force: Field                 # N
    origin: float                # q-bar, reference point for radial distance
    valid: np.ndarray | None = None   # False where the density sat at the floor

    def radial(self) -> tuple[np.ndarray, np.ndarray]:
        """(r, |F|) for r = q - origin > 0, floor-contaminated points zeroed."""
        q = self.grid.points
        mask = q > self.origin
        r = q[mask] - self.origin
        f = np.abs(self.force.values[mask])
        if self.valid is not None:
            f = np.where(self.valid[mask], f, 0.0)
        return r, f


@dataclass(frozen=True)
class DecayClass:
    label: str
    fitted_exponent: float       # a in |q^-1 dV_qu/dq| ~ q^a (-inf for zero force)
    coefficient: float = 0.0     # C in C * q^a over the fit window
    at_boundary: bool = False


def _floor_mask(n_values: np.ndarray, floor_fraction: float) -> tuple[np.ndarray, np.ndarray]:
    peak = float(np.max(n_values))
    if peak <= 0.0:
        raise DegenerateDensityError("degenerate density: no positive values")
    floor = floor_fraction * peak
    return np.maximum(n_values, floor), n_values > floor


def quantum_potential(n: Field, mass: float,
                      floor_fraction: float = DENSITY_FLOOR_FRACTION,
                      periodic: bool = False) -> Field:
    """V_qu of a density field, in joules."""
    if mass <= 0:
        raise ValidationError("mass must be positive")
    clamped, _ = _floor_mask(n.values, floor_fraction)
    s = np.sqrt(clamped)
    d2 = periodic_derivative if periodic else stencil_derivative
    curv = d2(s, n.grid.spacing, 2)
    return Field(n.grid, -(HBAR**2 / (2 * mass)) * curv / s, "J")


def quantum_potential_from_log(log_n: Field, mass: float,
                               periodic: bool = False) -> Field:
    """V_qu evaluated from log n; stable arbitrarily deep in the tail."""
    if mass <= 0:
        raise ValidationError("mass must be positive")
    kernel = periodic_derivative if periodic else stencil_derivative
    h = log_n.grid.spacing
    d1 = kernel(log_n.values, h, 1)
    d2 = kernel(log_n.values, h, 2)
    curv_over_psi = d1**2 / 4.0 + d2 / 2.0
    return Field(log_n.grid, -(HBAR**2 / (2 * mass)) * curv_over_psi, "J")


def _force_from_potential(vqu: Field, origin: float,
                          valid: np.ndarray | None) -> QuantumForceProfile:
    grad = stencil_derivative(vqu.values, vqu.grid.spacing, 1)
    force = Field(vqu.grid, -grad, "N")
    return QuantumForceProfile(vqu.grid, force, origin, valid)


def quantum_force(n: Field, mass: float, origin: float,
                  floor_fraction: float = DENSITY_FLOOR_FRACTION) -> QuantumForceProfile:
    """-dV_qu/dq from a density field; floor-clamped points are flagged invalid."""
    vqu = quantum_potential(n, mass, floor_fraction)
    _, valid = _floor_mask(n.values, floor_fraction)
    # the derivative stencil smears the clamp kink over one neighbour cell
    valid = valid & np.roll(valid, 1) & np.roll(valid, -1)
    return _force_from_potential(vqu, origin, valid)


def quantum_force_from_log(log_n: Field, mass: float, origin: float) -> QuantumForceProfile:
    """-dV_qu/dq from a log-density field (all points valid)."""
    vqu = quantum_potential_from_log(log_n, mass)
    return _force_from_potential(vqu, origin, None)


def growth_exponent(profile: QuantumForceProfile,
                    tail_window: tuple[float, float] = (0.25, 0.05),
                    min_points: int = 8) -> DecayClass:
    """Fit |q^-1 dV_qu/dq| ~ q^a over the outer radial window and classify.

    ``tail_window = (outer_start, outer_stop)`` selects radial distances in
    [(1 - outer_start) r_max, (1 - outer_stop) r_max]; the last few percent
    stay excluded because the one-sided boundary stencils contaminate them.
    """
    r, f = profile.radial()
    if r.size == 0:
        raise TailFitError("profile has no points beyond its origin")
    r_max = r[-1]
    lo, hi = (1.0 - tail_window[0]) * r_max, (1.0 - tail_window[1]) * r_max
    window = (r >= lo) & (r <= hi)
    if np.count_nonzero(window) < min_points:
        raise TailFitError(
            f"fewer than {min_points} usable points in the tail window")
    rw, fw = r[window], f[window]
    peak_all = float(np.max(f)) if f.size else 0.0
    # force indistinguishable from zero on the window: vanishing class
    if peak_all == 0.0 or float(np.max(fw)) <= 1e-12 * peak_all:
        return DecayClass(ASYMPTOTICALLY_VANISHING, -math.inf, 0.0)
    integrand = fw / rw
    keep = integrand > 1e-12 * np.max(integrand)
    if np.count_nonzero(keep) < min_points:
        raise TailFitError("tail window dominated by zero-force points")
    slope, intercept = np.polyfit(np.log(rw[keep]), np.log(integrand[keep]), 1)
    return _classify_exponent(float(slope), float(np.exp(intercept)))


def _classify_exponent(a: float, coeff: float) -> DecayClass:
    tol = EXPONENT_TOLERANCE
    near = min(abs(a - 0.0), abs(a + 1.0)) <= tol
    if a > tol:
        label = SUPER_BALLISTIC
    elif a >= -tol:
        label = BALLISTIC
    elif a >= -1.0 - tol:
        label = UNDER_BALLISTIC
    else:
        label = ASYMPTOTICALLY_VANISHING
    return DecayClass(label, a, coeff, at_boundary=near)
