import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qhydro.constants import BOHR, HBAR, K_B
from qhydro.errors import NoBoundStateError, ValidationError
from qhydro.grids import integrate, make_grid
from qhydro.potentials import (
    DELTA_OVER_R0,
    DELTA_OVER_R0_LJ_ZERO,
    MaterialParams,
    PseudoGaussianFamily,
    harmonic_ground_density,
    harmonic_potential,
    helium_preset,
    lj_harmonic,
    pseudo_gaussian_density,
    pseudo_gaussian_log_density,
    pseudo_gaussian_tail_force,
    square_well_density,
    square_well_solve,
)
from qhydro.qpotential import quantum_force, quantum_force_from_log, quantum_potential

HE = helium_preset()


def test_preset_values():
    assert HE.mass == pytest.approx(6.6465e-27)
    assert HE.r_0 == pytest.approx(7.9 * BOHR)
    assert HE.well_depth == pytest.approx(10.9 * K_B)
    assert HE.half_width == pytest.approx(1.54e-10)


def test_harmonic_curvature_ratio():
    approx = lj_harmonic(HE)
    assert approx.k / (HE.well_depth / HE.r_0**2) == pytest.approx(144.0)


def test_harmonic_delta_ratio():
    assert lj_harmonic(HE).delta / HE.r_0 == pytest.approx(DELTA_OVER_R0)


def test_harmonic_alternative_delta():
    approx = lj_harmonic(HE, delta_constant=DELTA_OVER_R0_LJ_ZERO)
    assert approx.delta / HE.r_0 == pytest.approx(1 - 2 ** (-1 / 6))


def test_harmonic_bottom_value():
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 1e-10, approx.q_bar + 1e-10, 201)
    v = harmonic_potential(approx, grid, HE.well_depth)
    assert np.min(v.values) == pytest.approx(-HE.well_depth)


def test_harmonic_consistency_identity():
    # 4 (E0 + U)^2 m / hbar^2 = U (12 / r0)^2, used as a self-check
    approx = lj_harmonic(HE)
    lhs = 4 * (approx.E_0 + HE.well_depth) ** 2 * HE.mass / HBAR**2
    assert lhs == pytest.approx(approx.k, rel=1e-12)


def test_shallow_well_flag():
    tiny = MaterialParams(mass=1e-30, well_depth=1e-25, r_0=1e-10)
    assert lj_harmonic(tiny).shallow_well


def test_ground_density_peak_and_norm():
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 8 / approx.K_0, approx.q_bar + 8 / approx.K_0, 2001)
    n = harmonic_ground_density(approx, grid)
    assert integrate(n) == pytest.approx(1.0, abs=1e-8)
    assert grid.points[np.argmax(n.values)] == pytest.approx(approx.q_bar, abs=grid.spacing)


def test_ground_density_variance():
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 8 / approx.K_0, approx.q_bar + 8 / approx.K_0, 4001)
    n = harmonic_ground_density(approx, grid)
    q = grid.points
    mean = integrate(n.with_values(n.values * q))
    var = integrate(n.with_values(n.values * (q - mean) ** 2))
    assert var == pytest.approx(1 / (4 * approx.K_0**2), rel=1e-6)


def test_ground_density_narrow_grid_rejected():
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 1 / approx.K_0, approx.q_bar + 1 / approx.K_0, 64)
    with pytest.raises(ValidationError, match="grid too narrow"):
        harmonic_ground_density(approx, grid)


def test_eigenstate_stationarity_of_potentials():
    # V_harmonic + V_qu constant over the Gaussian core within 1%
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 6 / approx.K_0, approx.q_bar + 6 / approx.K_0, 4001)
    n = harmonic_ground_density(approx, grid)
    vqu = quantum_potential(n, HE.mass)
    v = harmonic_potential(approx, grid, HE.well_depth)
    total = vqu.values + v.values
    core = np.abs(grid.points - approx.q_bar) < 2 / approx.K_0
    spread = np.max(total[core]) - np.min(total[core])
    scale = approx.E_0 + HE.well_depth
    assert spread < 0.01 * scale
    # and the sum sits at the eigenvalue E0
    assert np.mean(total[core]) == pytest.approx(approx.E_0, rel=0.01)


def test_quantum_potential_reproduces_inverted_parabola():
    approx = lj_harmonic(HE)
    grid = make_grid(approx.q_bar - 6 / approx.K_0, approx.q_bar + 6 / approx.K_0, 4001)
    n = harmonic_ground_density(approx, grid)
    vqu = quantum_potential(n, HE.mass)
    r = grid.points - approx.q_bar
    expected = -(approx.k / 2) * r**2 + (approx.E_0 + HE.well_depth)
    core = np.abs(r) < 2 / approx.K_0
    scale = approx.E_0 + HE.well_depth
    assert np.max(np.abs(vqu.values[core] - expected[core])) < 0.01 * scale


def test_square_well_energy():
    state = square_well_solve(HE)
    assert state.E_0 / K_B == pytest.approx(-5.19, rel=0.10)
    assert state.matching_residual < 1e-10


def test_square_well_deeper_is_lower():
    state = square_well_solve(HE)
    deeper = MaterialParams(mass=HE.mass, well_depth=2 * HE.well_depth,
                            r_0=HE.r_0, sigma=HE.sigma,
                            half_width=HE.half_width, depth_factor=HE.depth_factor)
    assert square_well_solve(deeper).E_0 < state.E_0


def test_square_well_no_bound_state():
    shallow = MaterialParams(mass=HE.mass, well_depth=HE.well_depth / 100,
                             r_0=HE.r_0, sigma=HE.sigma,
                             half_width=HE.half_width, depth_factor=HE.depth_factor)
    with pytest.raises(NoBoundStateError):
        square_well_solve(shallow)


def test_square_well_zero_force_inside():
    state = square_well_solve(HE)
    span = state.width + 6 / state.kappa
    grid = make_grid(state.sigma, state.sigma + span, 4001)
    n = square_well_density(state, grid)
    assert integrate(n) == pytest.approx(1.0, abs=1e-8)
    profile = quantum_force(n, HE.mass, state.sigma)
    q = grid.points
    interior = (q > state.sigma + 0.1 * state.width) & \
               (q < state.sigma + 0.9 * state.width)
    approx = lj_harmonic(HE)
    core_force = approx.k * approx.delta
    assert np.max(np.abs(profile.force.values[interior])) < 1e-6 * core_force


def make_family(family, g=2.0, h=1.0, dq2=1.0, lam=20.0):
    return PseudoGaussianFamily(family=family, delta_q_sq=dq2, lam=lam, g=g, h=h)


def test_family_validation():
    with pytest.raises(ValidationError):
        make_family("power_f", lam=5.0)         # lam^2 < 100 dq2
    with pytest.raises(ValidationError):
        make_family("power_f", g=2.5)
    with pytest.raises(ValidationError):
        make_family("nope")


def test_center_value():
    fam = make_family("power_f")
    grid = make_grid(-5.0, 5.0, 1001)
    n = pseudo_gaussian_density(fam, grid, normalize=False)
    center = np.argmin(np.abs(grid.points - fam.q_bar))
    assert n.values[center] == pytest.approx(fam.n_0)


@pytest.mark.parametrize("family", ["constant_f", "linear_f", "log_f", "power_f"])
def test_core_indistinguishable_from_gaussian(family):
    fam = make_family(family, g=1.2, h=1.3, lam=40.0)
    grid = make_grid(-1.5, 1.5, 2001)
    n = pseudo_gaussian_density(fam, grid, normalize=False)
    r = grid.points
    pure = np.exp(-(r**2) / fam.delta_q_sq)
    f = fam.shape_f(r)
    core = r**2 <= 0.01 * fam.lam**2 * f
    assert np.max(np.abs(n.values[core] / pure[core] - 1.0)) < 0.01


def test_log_family_power_law_tail():
    # f = 1 + ln(1 + s^h) gives an approximate power law with slope
    # -h lam^2 / dq2 in log n vs log s
    fam = make_family("log_f", h=1.0, dq2=1.0, lam=20.0)
    grid = make_grid(1e20, 1e24, 2001)
    log_n = pseudo_gaussian_log_density(fam, grid)
    s = grid.points / fam.core_length
    slope = np.polyfit(np.log(s), log_n.values, 1)[0]
    assert slope == pytest.approx(-fam.lam**2 / fam.delta_q_sq, rel=0.05)


def test_tail_force_g2_linear_coefficient():
    fam = make_family("power_f", g=2.0)
    desc = pseudo_gaussian_tail_force(fam, mass=1.0)
    assert desc.leading_exponent == pytest.approx(1.0)
    expected = (HBAR**2 / 2.0) * 2.0 / fam.delta_q_sq**2
    assert desc.leading_coefficient == pytest.approx(expected, rel=0.03)
    assert not desc.vanishing_force


def test_tail_force_g1_degenerate():
    desc = pseudo_gaussian_tail_force(make_family("power_f", g=1.0), mass=1.0)
    assert desc.leading_exponent == pytest.approx(-3.0)
    assert desc.vanishing_force


def test_tail_force_g15_boundary():
    desc = pseudo_gaussian_tail_force(make_family("power_f", g=1.5), mass=1.0)
    assert desc.leading_exponent == pytest.approx(0.0)
    assert desc.boundary_case


def test_tail_force_nonpower_requires_grid():
    with pytest.raises(ValidationError):
        pseudo_gaussian_tail_force(make_family("linear_f"), mass=1.0)


def test_tail_force_nonpower_numeric_descriptor():
    fam = make_family("linear_f")
    grid = make_grid(0.0, 1.2e6, 2001)
    desc = pseudo_gaussian_tail_force(fam, mass=1.0, fit_grid=grid)
    assert not desc.from_symbolic
    assert math.isfinite(desc.leading_exponent)


@pytest.mark.parametrize("g", [1.0, 1.2, 1.4, 1.8, 2.0])
def test_numeric_fit_matches_symbolic_exponent(g):
    fam = make_family("power_f", g=g)
    # the tail regime starts at r ~ (lam^2)^(1/(2-g)), which runs away as
    # g approaches 2; the fit window must sit far beyond it
    r_max = {1.0: 1.2e6, 1.2: 3e6, 1.4: 3e6, 1.8: 1e16, 2.0: 3e6}[g]
    grid = make_grid(0.0, r_max, 3001)
    log_n = pseudo_gaussian_log_density(fam, grid)
    profile = quantum_force_from_log(log_n, 1.0, fam.q_bar)
    from qhydro.qpotential import growth_exponent
    decay = growth_exponent(profile)
    desc = pseudo_gaussian_tail_force(fam, mass=1.0)
    # numeric fit is of |F / r|, symbolic exponent is of F itself
    assert decay.fitted_exponent == pytest.approx(
        desc.leading_exponent - 1.0, abs=0.15)


@given(dq2=st.floats(0.1, 10.0), lam_factor=st.floats(10.5, 100.0))
@settings(max_examples=20, deadline=None)
def test_densities_normalized(dq2, lam_factor):
    fam = PseudoGaussianFamily(family="power_f", delta_q_sq=dq2,
                               lam=lam_factor * math.sqrt(dq2), g=2.0)
    grid = make_grid(-40 * math.sqrt(dq2), 40 * math.sqrt(dq2), 4001)
    n = pseudo_gaussian_density(fam, grid)
    assert integrate(n) == pytest.approx(1.0, abs=1e-8)
