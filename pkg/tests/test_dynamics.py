import math

import numpy as np
import pytest

from qhydro.constants import HBAR
from qhydro.dynamics import (
    CLASSICAL_LIMIT,
    PERIODIC,
    STOCHASTIC_QUANTUM,
    HydroState,
    IntegratorConfig,
    cfl_limit,
    initial_state,
    observables,
    run,
    step_classical,
    step_deterministic,
    step_stochastic,
)
from qhydro.errors import CflError, ValidationError
from qhydro.grids import Field, integrate, make_grid
from qhydro.noise import NoiseModel, RandomStream
from qhydro.potentials import harmonic_ground_density, harmonic_potential, helium_preset, lj_harmonic

HE = helium_preset()
MASS = HE.mass


def gaussian_state(grid, sigma, center=0.0, velocity=0.0):
    q = grid.points
    n = np.exp(-((q - center) ** 2) / (2 * sigma**2))
    n /= np.trapezoid(n, dx=grid.spacing)
    v = np.full(grid.n_points, velocity)
    return initial_state(Field(grid, n, "1/m"), Field(grid, v, "m/s"))


def free_setup(n_points=601, half_span=1.5e-9):
    grid = make_grid(-half_span, half_span, n_points)
    dt = 0.9 * cfl_limit(MASS, grid.spacing)
    cfg = IntegratorConfig(dt=dt)
    return grid, cfg


def test_cfl_violation_rejected():
    grid, cfg = free_setup()
    bad = IntegratorConfig(dt=10 * cfl_limit(MASS, grid.spacing))
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    with pytest.raises(CflError):
        step_deterministic(state, potential, MASS, bad)


def test_uniform_density_fixed_point():
    grid = make_grid(0.0, 1e-9, 128)
    cfg = IntegratorConfig(dt=0.5 * cfl_limit(MASS, grid.spacing),
                           boundary=PERIODIC)
    n = Field(grid, np.full(128, 1e9), "1/m")
    state = initial_state(n)
    potential = Field(grid, np.zeros(128), "J")
    out = step_deterministic(state, potential, MASS, cfg)
    assert np.allclose(out.density.values, n.values, rtol=1e-12)
    assert np.max(np.abs(out.velocity.values)) < 1e-12


def test_free_gaussian_width_law_short():
    grid, cfg = free_setup()
    sigma0 = 1e-10
    state = gaussian_state(grid, sigma0)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    tau = 2 * MASS * sigma0**2 / HBAR
    steps = 400
    for _ in range(steps):
        state = step_deterministic(state, potential, MASS, cfg)
    t = steps * cfg.dt
    snap = observables(state, potential, MASS, cfg)
    expected_var = sigma0**2 * (1 + (t / tau) ** 2)
    assert math.sqrt(snap.variance) == pytest.approx(
        math.sqrt(expected_var), rel=0.01)


def test_norm_conservation_1000_steps():
    grid, cfg = free_setup()
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    norm0 = integrate(state.density)
    for _ in range(1000):
        state = step_deterministic(state, potential, MASS, cfg)
    assert abs(integrate(state.density) - norm0) < 1e-6


def harmonic_setup(n_points=801):
    approx = lj_harmonic(HE)
    half_span = 5.0 / approx.K_0
    grid = make_grid(approx.q_bar - half_span, approx.q_bar + half_span, n_points)
    cfg = IntegratorConfig(dt=0.9 * cfl_limit(MASS, grid.spacing))
    density = harmonic_ground_density(approx, grid)
    potential = harmonic_potential(approx, grid, HE.well_depth)
    return approx, grid, cfg, initial_state(density), potential


def test_harmonic_ground_state_stationary_quarter_period():
    approx, grid, cfg, state, potential = harmonic_setup()
    period = 2 * math.pi / math.sqrt(approx.k / MASS)
    steps = int(round(0.25 * period / cfg.dt))
    n0 = state.density.values.copy()
    for _ in range(steps):
        state = step_deterministic(state, potential, MASS, cfg)
    l2 = np.sqrt(np.trapezoid((state.density.values - n0) ** 2, dx=grid.spacing)
                 / np.trapezoid(n0**2, dx=grid.spacing))
    assert l2 < 2.5e-4      # 1e-3 per period budget, quarter period here


def test_theta_zero_stochastic_equals_deterministic():
    grid, cfg = free_setup(n_points=301)
    cfg = IntegratorConfig(dt=cfg.dt, scheme=STOCHASTIC_QUANTUM)
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    silent = NoiseModel(theta=0.0, lambda_c=1e-10, mass=MASS)
    a = step_stochastic(state, potential, MASS, silent, RandomStream(3), cfg)
    b = step_deterministic(state, potential, MASS,
                           IntegratorConfig(dt=cfg.dt))
    assert np.array_equal(a.density.values, b.density.values)
    assert np.array_equal(a.velocity.values, b.velocity.values)


def loud_noise(conserving=True):
    # mobility scaled so one kick moves the density at the percent level
    return NoiseModel(theta=1.0, lambda_c=4.85e-10, mass=MASS,
                      mobility_mu=1e34, conserving=conserving)


def test_stochastic_norm_conserved_exactly():
    grid, _ = free_setup(n_points=601)
    cfg = IntegratorConfig(dt=0.5 * cfl_limit(MASS, grid.spacing),
                           scheme=STOCHASTIC_QUANTUM)
    state = gaussian_state(grid, 2e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    norm0 = integrate(state.density)
    stream = RandomStream(11)
    rng = stream.generator()
    for _ in range(20):
        state = step_stochastic(state, potential, MASS, loud_noise(), stream,
                                cfg, rng)
    assert integrate(state.density) == pytest.approx(norm0, rel=1e-12)


def test_stochastic_ensemble_mean_tracks_deterministic():
    approx, grid, cfg, state0, potential = harmonic_setup(n_points=401)
    sto_cfg = IntegratorConfig(dt=cfg.dt, scheme=STOCHASTIC_QUANTUM)
    steps = 40
    det = state0
    for _ in range(steps):
        det = step_deterministic(det, potential, MASS, cfg)
    finals = []
    for seed in range(30):
        stream = RandomStream(seed)
        rng = stream.generator()
        state = state0
        for _ in range(steps):
            state = step_stochastic(state, potential, MASS, loud_noise(),
                                    stream, sto_cfg, rng)
        finals.append(state.density.values)
    finals = np.array(finals)
    mean = finals.mean(axis=0)
    se = finals.std(axis=0, ddof=1) / math.sqrt(len(finals))
    # compare where the standard error is meaningful
    mask = se > 1e-12 * np.max(np.abs(mean))
    pull = np.abs(mean - det.density.values)[mask] / se[mask]
    assert np.percentile(pull, 95) < 3.0


def periodic_wave_state(n_points=256, length=1e-9):
    h = length / n_points
    grid = make_grid(0.0, (n_points - 1) * h, n_points)
    j = np.arange(n_points)
    n = (1.0 + 0.5 * np.cos(2 * math.pi * j / n_points)) / length
    return grid, initial_state(Field(grid, n, "1/m"))


def test_galilean_shift_periodic():
    grid, state = periodic_wave_state()
    cfg = IntegratorConfig(dt=0.5 * cfl_limit(MASS, grid.spacing),
                           boundary=PERIODIC)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    shifted0 = initial_state(
        Field(grid, np.roll(state.density.values, 1), "1/m"))
    plain, shifted = state, shifted0
    for _ in range(50):
        plain = step_deterministic(plain, potential, MASS, cfg)
        shifted = step_deterministic(shifted, potential, MASS, cfg)
    scale = np.max(plain.density.values)
    assert np.max(np.abs(shifted.density.values
                         - np.roll(plain.density.values, 1))) < 1e-10 * scale


def reversal_error(dt_scale):
    grid, state = periodic_wave_state()
    # an asymmetric initial velocity so the round trip is nontrivial
    j = np.arange(grid.n_points)
    state = HydroState(0.0, state.density,
                       Field(grid, 30.0 * np.sin(4 * math.pi * j / grid.n_points),
                             "m/s"),
                       state.action)
    cfg = IntegratorConfig(dt=dt_scale * 0.5 * cfl_limit(MASS, grid.spacing),
                           boundary=PERIODIC)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    forward = step_deterministic(state, potential, MASS, cfg)
    flipped = HydroState(forward.time, forward.density,
                         Field(grid, -forward.velocity.values, "m/s"),
                         forward.action)
    back = step_deterministic(flipped, potential, MASS, cfg)
    return float(np.max(np.abs(back.density.values - state.density.values))
                 / np.max(state.density.values))


def test_time_reversal_round_trip():
    # the forward-flip-forward defect is O(dt^5) per step; at any stable
    # step size that sits below roundoff, so the round trip must come back
    # to the initial density at machine precision for both step sizes
    assert reversal_error(1.0) < 1e-12
    assert reversal_error(0.5) < 1e-12


def test_classical_oscillator_mean():
    approx = lj_harmonic(HE)
    amplitude = 5e-11
    grid = make_grid(approx.q_bar - 3e-10, approx.q_bar + 3e-10, 601)
    cfg = IntegratorConfig(dt=0.9 * cfl_limit(MASS, grid.spacing),
                           scheme=CLASSICAL_LIMIT)
    state = gaussian_state(grid, 2e-11, center=approx.q_bar + amplitude)
    potential = harmonic_potential(approx, grid, HE.well_depth)
    omega = math.sqrt(approx.k / MASS)
    period = 2 * math.pi / omega
    # stay well before the quarter-period caustic of the cold fluid
    steps = int(round(0.2 * period / cfg.dt))
    for _ in range(steps):
        state = step_classical(state, potential, MASS, cfg)
    snap = observables(state, potential, MASS, cfg)
    expected = approx.q_bar + amplitude * math.cos(omega * steps * cfg.dt)
    assert snap.mean_q - approx.q_bar == pytest.approx(
        expected - approx.q_bar, rel=0.01)


def test_classical_free_packet_constant_velocity():
    grid = make_grid(-2e-9, 2e-9, 401)
    cfg = IntegratorConfig(dt=0.9 * cfl_limit(MASS, grid.spacing),
                           scheme=CLASSICAL_LIMIT)
    v0 = 50.0
    state = gaussian_state(grid, 2e-10, velocity=v0)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    steps = 200
    for _ in range(steps):
        state = step_classical(state, potential, MASS, cfg)
    snap = observables(state, potential, MASS, cfg)
    assert snap.mean_q == pytest.approx(v0 * steps * cfg.dt, rel=0.01)


def test_wide_packet_classical_matches_quantum():
    grid = make_grid(-4e-9, 4e-9, 401)
    dt = 0.9 * cfl_limit(MASS, grid.spacing)
    v0 = 50.0
    potential = Field(grid, np.zeros(grid.n_points), "J")
    classical = gaussian_state(grid, 4e-10, velocity=v0)
    quantum = gaussian_state(grid, 4e-10, velocity=v0)
    ccfg = IntegratorConfig(dt=dt, scheme=CLASSICAL_LIMIT)
    qcfg = IntegratorConfig(dt=dt)
    for _ in range(100):
        classical = step_classical(classical, potential, MASS, ccfg)
        quantum = step_deterministic(quantum, potential, MASS, qcfg)
    mc = observables(classical, potential, MASS, ccfg).mean_q
    mq = observables(quantum, potential, MASS, qcfg).mean_q
    assert mc == pytest.approx(mq, rel=0.01)


def test_run_zero_time_single_snapshot():
    grid, cfg = free_setup(n_points=301)
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    trajectory = run(state, potential, MASS, None, cfg, 0.0)
    assert len(trajectory.snapshots) == 1
    assert trajectory.completed


def test_run_free_variance_monotone():
    grid, cfg = free_setup(n_points=301)
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    trajectory = run(state, potential, MASS, None, cfg, 200 * cfg.dt,
                     output_stride=20)
    variances = [snap.variance for snap in trajectory.snapshots]
    assert all(b > a for a, b in zip(variances, variances[1:]))


def test_run_harmonic_energy_constant():
    approx, grid, cfg, state, potential = harmonic_setup(n_points=401)
    trajectory = run(state, potential, MASS, None, cfg, 300 * cfg.dt,
                     output_stride=50)
    energies = [s.e_kin + s.e_pot + s.e_qu for s in trajectory.snapshots]
    scale = abs(energies[0])
    assert max(energies) - min(energies) < 1e-3 * scale


def test_run_requires_stream_for_stochastic():
    grid, _ = free_setup(n_points=301)
    cfg = IntegratorConfig(dt=1e-18, scheme=STOCHASTIC_QUANTUM)
    state = gaussian_state(grid, 1e-10)
    potential = Field(grid, np.zeros(grid.n_points), "J")
    with pytest.raises(ValidationError):
        run(state, potential, MASS, None, cfg, 1e-17)
