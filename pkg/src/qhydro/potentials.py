"""Analytic model potentials and wave-function-modulus density families.

Covers the harmonic approximation of a Lennard-Jones pair well, the
hard-wall square well used for the helium dimer, and the pseudo-Gaussian
density families: Gaussians in the core with slower-decaying tails, the
construction that can make the nonlocality length finite.

Pseudo-Gaussian densities follow

    n(q) = n0 exp[ -r^2 / (Dq2 (1 + r^2 / (Lam^2 f(s)))) ],   r = q - q_bar,

with s = |r| / sqrt(Dq2) kept dimensionless and f one of
    constant_f: f = 1
    linear_f:   f = 1 + s
    log_f:      f = 1 + ln(1 + s^h)
    power_f:    f = 1 + s^g,  0 < g <= 2.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

from .constants import BOHR, HBAR, K_B
from .errors import NoBoundStateError, ValidationError
from .grids import Field, Grid
from .qpotential import quantum_force_from_log

# the documented truncation constant delta / r_0 for the harmonic quantum
# force; the 12-6 zero-crossing alternative 1 - 2^(-1/6) is selectable
DELTA_OVER_R0 = 0.11785
DELTA_OVER_R0_LJ_ZERO = 1.0 - 2.0 ** (-1.0 / 6.0)


@dataclass(frozen=True)
class MaterialParams:
    """Pair-interaction material constants (SI)."""

    mass: float                  # kg
    well_depth: float            # J
    r_0: float                   # m, pair-potential minimum position
    sigma: float | None = None   # m, hard-wall position of the square well
    half_width: float | None = None   # m, Delta: half the square-well width
    depth_factor: float = 0.82   # square-well depth as a fraction of well_depth

    def __post_init__(self):
        if self.mass <= 0 or self.well_depth <= 0 or self.r_0 <= 0:
            raise ValidationError("mass, well_depth and r_0 must be positive")
        if self.half_width is not None and self.half_width <= 0:
            raise ValidationError("half_width must be positive")
        if not 0.0 < self.depth_factor <= 1.0:
            raise ValidationError("depth_factor must lie in (0, 1]")


def helium_preset() -> MaterialParams:
    """He-4 pair parameters: r_0 = 7.9 Bohr, Delta = 1.54e-10 m, U = 10.9 k_B."""
    r_0 = 7.9 * BOHR
    half_width = 1.54e-10
    return MaterialParams(
        mass=6.6465e-27,
        well_depth=10.9 * K_B,
        r_0=r_0,
        sigma=r_0 - half_width,
        half_width=half_width,
        depth_factor=0.82,
    )


MATERIAL_PRESETS = {"he4": helium_preset}


@dataclass(frozen=True)
class HarmonicApprox:
    """Harmonic expansion of the pair well about its reduced equilibrium."""

    k: float                     # N/m, curvature U (12/r_0)^2
    q_bar: float                 # m, equilibrium position r_0/2
    E_0: float                   # J, ground level measured from V = 0
    delta: float                 # m, quantum-force truncation distance
    K_0: float                   # 1/m, Gaussian state exponent scale
    shallow_well: bool = False   # ground level sits above the well rim


def lj_harmonic(params: MaterialParams, mass: float | None = None,
                delta_constant: float = DELTA_OVER_R0) -> HarmonicApprox:
    """Harmonic approximation: k = U (12/r_0)^2, ground level, truncation delta."""
    m = params.mass if mass is None else mass
    u, r0 = params.well_depth, params.r_0
    k = u * (12.0 / r0) ** 2
    half_hbar_omega = 0.5 * HBAR * math.sqrt(k / m)
    e0 = half_hbar_omega - u
    k0 = math.sqrt((e0 + u) * m) / HBAR
    return HarmonicApprox(
        k=k,
        q_bar=r0 / 2.0,
        E_0=e0,
        delta=delta_constant * r0,
        K_0=k0,
        shallow_well=half_hbar_omega >= u,
    )


def harmonic_frequency(approx: HarmonicApprox, mass: float) -> float:
    return math.sqrt(approx.k / mass)


def harmonic_potential(approx: HarmonicApprox, grid: Grid,
                       well_depth: float) -> Field:
    """V(q) = -U + (k/2)(q - q_bar)^2 sampled on the grid."""
    r = grid.points - approx.q_bar
    return Field(grid, -well_depth + 0.5 * approx.k * r**2, "J")


def harmonic_ground_density(approx: HarmonicApprox, grid: Grid) -> Field:
    """n = |psi_0|^2 with psi_0 ~ exp[-K_0^2 (q - q_bar)^2], unit integral."""
    span_lo = approx.q_bar - grid.q_min
    span_hi = grid.q_max - approx.q_bar
    required = 4.0 / approx.K_0
    if span_lo < required or span_hi < required:
        raise ValidationError(
            f"grid too narrow: needs at least +-{required:.3e} m around "
            f"{approx.q_bar:.3e} m")
    r = grid.points - approx.q_bar
    n = np.exp(-2.0 * approx.K_0**2 * r**2)
    n /= np.trapezoid(n, dx=grid.spacing)
    return Field(grid, n, "1/m")


def harmonic_ground_log_density(approx: HarmonicApprox, grid: Grid) -> Field:
    """log n of the Gaussian ground state, usable arbitrarily far out."""
    r = grid.points - approx.q_bar
    norm = math.sqrt(2.0 * approx.K_0**2 / math.pi)
    return Field(grid, math.log(norm) - 2.0 * approx.K_0**2 * r**2, "1")


@dataclass(frozen=True)
class SquareWellState:
    """Lowest bound state of the hard-wall square well."""

    K_0: float                   # 1/m, interior wave number
    E_0: float                   # J, negative bound-state energy
    kappa: float                 # 1/m, exterior decay constant
    sigma: float                 # m, hard wall position
    width: float                 # m, well width 2 Delta
    depth: float                 # J, well depth below zero
    matching_residual: float     # dimensionless residual of z cot z = -sqrt(z0^2-z^2)


def square_well_solve(params: MaterialParams, mass: float | None = None) -> SquareWellState:
    """Solve the lowest bound state of the hard-wall square well.

    Geometry: infinite wall at q = sigma, potential -depth on
    (sigma, sigma + 2 Delta), zero beyond.  The interior solution
    sin(K_0 (q - sigma)) must match an exponential tail, which reduces to
    z cot z = -sqrt(z0^2 - z^2) with z = 2 Delta K_0 and
    z0 = 2 Delta sqrt(2 m depth) / hbar, solved by bracketed root finding
    on (pi/2, min(pi, z0)).
    """
    if params.half_width is None:
        raise ValidationError("square well needs half_width (Delta)")
    m = params.mass if mass is None else mass
    width = 2.0 * params.half_width
    depth = params.depth_factor * params.well_depth
    sigma = params.sigma if params.sigma is not None else params.r_0 - params.half_width
    z0 = width * math.sqrt(2.0 * m * depth) / HBAR
    if z0 <= math.pi / 2.0:
        raise NoBoundStateError(
            f"no bound state: well strength z0 = {z0:.4f} <= pi/2")

    def matching(z: float) -> float:
        return z / math.tan(z) + math.sqrt(max(z0**2 - z**2, 0.0))

    eps = 1e-12
    lo, hi = math.pi / 2.0 + eps, min(math.pi - eps, z0)
    if matching(lo) * matching(hi) > 0:
        raise NoBoundStateError("no bound state: matching condition has no root")
    z = brentq(matching, lo, hi, xtol=1e-15, rtol=8.9e-16)
    k0 = z / width
    e0 = (HBAR * k0) ** 2 / (2.0 * m) - depth
    kappa = math.sqrt(-2.0 * m * e0) / HBAR
    return SquareWellState(
        K_0=k0,
        E_0=e0,
        kappa=kappa,
        sigma=sigma,
        width=width,
        depth=depth,
        matching_residual=abs(matching(z)),
    )


def square_well_potential(state: SquareWellState, grid: Grid,
                          wall_height: float | None = None) -> Field:
    """Sampled square well; the hard wall is a large finite plateau on a grid."""
    if wall_height is None:
        wall_height = 1e3 * state.depth
    q = grid.points
    v = np.where(q < state.sigma, wall_height,
                 np.where(q <= state.sigma + state.width, -state.depth, 0.0))
    return Field(grid, v, "J")


def square_well_density(state: SquareWellState, grid: Grid) -> Field:
    """|psi_0|^2 of the bound state: sine inside the well, exponential tail."""
    q = grid.points
    x = q - state.sigma
    inside = (x >= 0.0) & (x <= state.width)
    outside = x > state.width
    psi = np.zeros_like(q)
    psi[inside] = np.sin(state.K_0 * x[inside])
    amp_out = math.sin(state.K_0 * state.width)
    psi[outside] = amp_out * np.exp(-state.kappa * (x[outside] - state.width))
    n = psi**2
    norm = np.trapezoid(n, dx=grid.spacing)
    if norm <= 0:
        raise ValidationError("grid does not overlap the well")
    return Field(grid, n / norm, "1/m")


@dataclass(frozen=True)
class PseudoGaussianFamily:
    """Gaussian-core density with a family-selected slower tail."""

    family: str                  # constant_f | linear_f | log_f | power_f
    delta_q_sq: float            # m^2, core variance parameter
    lam: float                   # m, tail crossover scale Lambda
    g: float = 2.0               # power_f exponent, 0 < g <= 2
    h: float = 1.0               # log_f exponent
    q_bar: float = 0.0           # m
    n_0: float = 1.0

    def __post_init__(self):
        if self.family not in ("constant_f", "linear_f", "log_f", "power_f"):
            raise ValidationError(f"unknown family {self.family!r}")
        if self.delta_q_sq <= 0 or self.lam <= 0:
            raise ValidationError("delta_q_sq and lam must be positive")
        # the tail must not disturb the Gaussian core
        if self.lam**2 < 100.0 * self.delta_q_sq:
            raise ValidationError("family requires lam^2 >= 100 delta_q_sq")
        if self.family == "power_f" and not 0.0 < self.g <= 2.0:
            raise ValidationError("power_f exponent g must lie in (0, 2]")
        if self.family == "log_f" and self.h <= 0:
            raise ValidationError("log_f exponent h must be positive")

    @property
    def core_length(self) -> float:
        return math.sqrt(self.delta_q_sq)

    def shape_f(self, r: np.ndarray) -> np.ndarray:
        s = np.abs(r) / self.core_length
        if self.family == "constant_f":
            return np.ones_like(s)
        if self.family == "linear_f":
            return 1.0 + s
        if self.family == "log_f":
            return 1.0 + np.log1p(s**self.h)
        return 1.0 + s**self.g

    def log_density(self, q: np.ndarray) -> np.ndarray:
        """log n(q) up to the log n_0 constant; exact in the deep tail."""
        r = q - self.q_bar
        f = self.shape_f(r)
        return math.log(self.n_0) - r**2 / (
            self.delta_q_sq * (1.0 + r**2 / (self.lam**2 * f)))


def pseudo_gaussian_density(fam: PseudoGaussianFamily, grid: Grid,
                            normalize: bool = True) -> Field:
    n = np.exp(fam.log_density(grid.points))
    if normalize:
        norm = np.trapezoid(n, dx=grid.spacing)
        if norm <= 0:
            raise ValidationError("density underflows everywhere on this grid")
        n /= norm
    return Field(grid, n, "1/m")


def pseudo_gaussian_log_density(fam: PseudoGaussianFamily, grid: Grid) -> Field:
    return Field(grid, fam.log_density(grid.points), "1")


@dataclass(frozen=True)
class TailForceDescriptor:
    """Two leading terms of the asymptotic quantum force C1 r^e1 + C2 r^e2."""

    leading_exponent: float
    leading_coefficient: float
    second_exponent: float
    second_coefficient: float
    vanishing_force: bool        # force -> 0 at infinity
    boundary_case: bool = False  # leading exponent within 0.1 of a class edge
    from_symbolic: bool = True   # False when obtained by numeric fit


def pseudo_gaussian_tail_force(fam: PseudoGaussianFamily, mass: float,
                               fit_grid: Grid | None = None) -> TailForceDescriptor:
    """Asymptotic quantum-force expansion for the power_f family.

    For power_f with tail log n ~ -beta r^g the force expands as

        F = (hbar^2/2m) [ beta^2 g^2 (g-1)/2 * r^(2g-3)
                          - beta g (g-1)(g-2)/2 * r^(g-3) ] + ...

    At g = 1 both displayed coefficients vanish and the expansion is
    degenerate; the next order gives F ~ (hbar^2/2m) c^4 r^-3 with
    c = Lambda^2 / Dq^2.  Non-power families fall back to a numeric fit on
    ``fit_grid``.
    """
    if mass <= 0:
        raise ValidationError("mass must be positive")
    pref = HBAR**2 / (2.0 * mass)
    if fam.family != "power_f":
        if fit_grid is None:
            raise ValidationError(
                "non-power families need a fit_grid for the numeric descriptor")
        log_n = pseudo_gaussian_log_density(fam, fit_grid)
        profile = quantum_force_from_log(log_n, mass, fam.q_bar)
        from .qpotential import growth_exponent
        decay = growth_exponent(profile)
        e_force = decay.fitted_exponent + 1.0
        return TailForceDescriptor(
            leading_exponent=e_force,
            leading_coefficient=decay.coefficient,
            second_exponent=math.nan,
            second_coefficient=0.0,
            vanishing_force=e_force < 0.0,
            boundary_case=decay.at_boundary,
            from_symbolic=False,
        )

    g = fam.g
    ell = fam.core_length
    if g == 2.0:
        beta = 1.0 / (fam.delta_q_sq * (1.0 + ell**2 / fam.lam**2))
    else:
        beta = fam.lam**2 / (fam.delta_q_sq * ell**g)

    if abs(g - 1.0) < 1e-12:
        # degenerate branch: leading terms cancel, force decays as r^-3
        c = fam.lam**2 / fam.delta_q_sq
        return TailForceDescriptor(
            leading_exponent=-3.0,
            leading_coefficient=pref * c**4,
            second_exponent=math.nan,
            second_coefficient=0.0,
            vanishing_force=True,
        )

    lead_exp = 2.0 * g - 3.0
    lead_coeff = pref * beta**2 * g**2 * (g - 1.0) / 2.0
    second_exp = g - 3.0
    second_coeff = -pref * beta * g * (g - 1.0) * (g - 2.0) / 2.0
    return TailForceDescriptor(
        leading_exponent=lead_exp,
        leading_coefficient=lead_coeff,
        second_exponent=second_exp,
        second_coefficient=second_coeff,
        vanishing_force=g < 1.5,
        boundary_case=abs(g - 1.5) <= 0.05,
    )
