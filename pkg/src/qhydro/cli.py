"""Command-line entry point.

Subcommands: simulate, lambda-c, lambda-q, classify, case {lindemann,
helium}, noise-audit.  Each experiment is described by one INI config
file (see qhydro.config); command-line overrides win over the file.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

import argparse
import math
import sys

import numpy as np

from . import cases, dynamics
from .config import (
    ExperimentConfig,
    apply_overrides,
    load_config,
)
from .errors import NumericalError, ValidationError
from .grids import Field, Grid
from .noise import NoiseModel, RandomStream, covariance, sample_fields
from .output import summary_record, write_csv, write_summary
from .potentials import (
    PseudoGaussianFamily,
    harmonic_ground_density,
    harmonic_potential,
    lj_harmonic,
    pseudo_gaussian_log_density,
    square_well_density,
    square_well_potential,
    square_well_solve,
)
from .qpotential import growth_exponent, quantum_force_from_log
from .scales import (
    classify_decay,
    classify_regime,
    correlation_length,
    nonlocality_length,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhydro",
        description="1-D quantum hydrodynamics laboratory")
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--set", action="append", default=[], metavar="SEC.KEY=VAL",
                        help="override one config value (repeatable)")
    parser.add_argument("--seed", type=int, help="random seed override")
    parser.add_argument("--csv", help="CSV output path override")
    parser.add_argument("--json", help="JSON summary path override")

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--mass", help="particle mass, e.g. '4.0026 u'")
    shared.add_argument("--theta", help="noise amplitude, e.g. '2.17 K'")
    # accept the global flags after the subcommand as well; SUPPRESS keeps
    # the subparser from clobbering values parsed before the subcommand
    for flag, kwargs in (
            ("--config", {}),
            ("--set", {"action": "append", "metavar": "SEC.KEY=VAL"}),
            ("--seed", {"type": int}),
            ("--csv", {}),
            ("--json", {})):
        shared.add_argument(flag, default=argparse.SUPPRESS, **kwargs)

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", parents=[shared],
                   help="integrate the hydrodynamic equations")

    sub.add_parser("lambda-c", parents=[shared],
                   help="noise correlation length")

    p = sub.add_parser("lambda-q", parents=[shared],
                       help="nonlocality length of a tail family")
    p.add_argument("--lambda-c", dest="lambda_c_value",
                   help="probe length for the normalization, e.g. '3.3e-10'")

    p = sub.add_parser("classify", parents=[shared],
                       help="dynamical-regime label")
    p.add_argument("--delta-L", dest="delta_l", help="physical length scale")
    p.add_argument("--lambda-c", dest="lambda_c_value", help="correlation length")
    p.add_argument("--lambda-q", dest="lambda_q_value",
                   help="nonlocality length ('inf' allowed)")
    p.add_argument("--decay-h", dest="decay_h", type=float,
                   help="tail-decay exponent of the wave function modulus")

    p = sub.add_parser("case", parents=[shared],
                       help="quantitative case studies")
    p.add_argument("study", choices=["lindemann", "helium"])

    sub.add_parser("noise-audit", parents=[shared],
                   help="empirical vs target noise covariance")
    return parser


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ValidationError(f"--set expects SEC.KEY=VAL, got {item!r}")
        dotted, value = item.split("=", 1)
        overrides[dotted.strip()] = value.strip()
    if args.seed is not None:
        overrides["experiment.seed"] = str(args.seed)
    if args.csv:
        overrides["output.csv"] = args.csv
    if args.json:
        overrides["output.json"] = args.json
    if getattr(args, "mass", None):
        overrides["material.mass"] = args.mass
    if getattr(args, "theta", None):
        overrides["noise.theta"] = args.theta
    if getattr(args, "lambda_c_value", None):
        overrides["noise.lambda_c"] = args.lambda_c_value
    if getattr(args, "delta_l", None):
        overrides["experiment.delta_l"] = args.delta_l
    if getattr(args, "lambda_q_value", None) not in (None, ""):
        overrides["experiment.lambda_q_override"] = args.lambda_q_value
    if getattr(args, "decay_h", None) is not None:
        overrides["experiment.decay_h"] = repr(args.decay_h)
    return apply_overrides(cfg, overrides)


def _emit(cfg: ExperimentConfig, results: dict, line: str,
          trajectory=None) -> None:
    if trajectory is not None and cfg.output.csv:
        write_csv(trajectory, cfg.output.csv)
    if cfg.output.json:
        write_summary(summary_record(cfg, results), cfg.output.json)
    print(line)


def _potential_field(cfg: ExperimentConfig, grid: Grid) -> Field:
    kind = cfg.experiment.potential
    params = cfg.material_params()
    if kind == "none":
        return Field(grid, np.zeros(grid.n_points), "J")
    if kind == "harmonic":
        approx = lj_harmonic(params)
        return harmonic_potential(approx, grid, params.well_depth)
    state = square_well_solve(params)
    return square_well_potential(state, grid)


def _initial_state(cfg: ExperimentConfig, grid: Grid) -> dynamics.HydroState:
    e = cfg.experiment
    params = cfg.material_params()
    if e.initial == "free_gaussian":
        q = grid.points
        n = np.exp(-((q - e.initial_center) ** 2) / (2.0 * e.initial_width**2))
        n /= np.trapezoid(n, dx=grid.spacing)
        density = Field(grid, n, "1/m")
    elif e.initial == "harmonic_ground":
        density = harmonic_ground_density(lj_harmonic(params), grid)
    else:
        density = square_well_density(square_well_solve(params), grid)
    velocity = Field(grid, np.full(grid.n_points, e.initial_velocity), "m/s")
    return dynamics.initial_state(density, velocity)


def _noise_model(cfg: ExperimentConfig) -> NoiseModel:
    params = cfg.material_params()
    lam_c = cfg.noise.lambda_c
    if lam_c is None:
        lam_c = correlation_length(params.mass, cfg.noise.theta)
    if math.isinf(lam_c):
        raise ValidationError(
            "noise model needs theta > 0 or an explicit noise.lambda_c")
    return NoiseModel(theta=cfg.noise.theta, lambda_c=lam_c, mass=params.mass,
                      mobility_mu=cfg.noise.mobility_mu,
                      conserving=cfg.noise.conserving)


def _cmd_simulate(cfg: ExperimentConfig) -> None:
    g = cfg.grid
    grid = Grid(g.q_min, g.q_max, g.n_points)
    params = cfg.material_params()
    i = cfg.integrator
    int_cfg = dynamics.IntegratorConfig(
        dt=i.dt, scheme=i.scheme, cfl_safety=i.cfl_safety,
        boundary=i.boundary, density_floor=i.density_floor)
    potential = _potential_field(cfg, grid)
    state = _initial_state(cfg, grid)
    noise = stream = None
    if i.scheme == dynamics.STOCHASTIC_QUANTUM:
        noise = _noise_model(cfg)
        stream = RandomStream(cfg.experiment.seed)
    trajectory = dynamics.run(state, potential, params.mass, noise, int_cfg,
                              i.t_end, i.output_stride, stream)
    if not trajectory.completed:
        raise NumericalError(f"run aborted: {trajectory.failure}")
    last = trajectory.snapshots[-1]
    results = {
        "final_time_s": last.time,
        "final_norm": last.norm,
        "final_mean_q_m": last.mean_q,
        "final_variance_m2": last.variance,
        "snapshots": len(trajectory.snapshots),
        "boundary_warning": trajectory.boundary_warning,
    }
    _emit(cfg, results,
          f"simulate: t = {last.time:.6e} s, norm = {last.norm:.9f}, "
          f"variance = {last.variance:.6e} m^2", trajectory)


def _cmd_lambda_c(cfg: ExperimentConfig) -> None:
    params = cfg.material_params()
    lam_c = correlation_length(params.mass, cfg.noise.theta)
    results = {"lambda_c_m": None if math.isinf(lam_c) else lam_c,
               "lambda_c_infinite": math.isinf(lam_c),
               "mass_kg": params.mass, "theta_K": cfg.noise.theta}
    rendered = "infinite" if math.isinf(lam_c) else f"{lam_c:.6e} m"
    _emit(cfg, results, f"lambda_c = {rendered}")


def _tail_profile(cfg: ExperimentConfig):
    e = cfg.experiment
    params = cfg.material_params()
    fam = PseudoGaussianFamily(
        family=e.family, delta_q_sq=e.core_width**2, lam=e.tail_scale,
        g=e.family_g, h=e.family_h, q_bar=0.0)
    g = cfg.grid
    grid = Grid(g.q_min, g.q_max, g.n_points)
    log_n = pseudo_gaussian_log_density(fam, grid)
    return fam, params, quantum_force_from_log(log_n, params.mass, fam.q_bar)


def _cmd_lambda_q(cfg: ExperimentConfig) -> None:
    fam, params, profile = _tail_profile(cfg)
    decay = growth_exponent(profile)
    lam_c = cfg.noise.lambda_c
    if lam_c is None:
        lam_c = 2.0 * fam.core_length
    lam_q = nonlocality_length(profile, lam_c, decay=decay)
    results = {
        "lambda_q_m": None if math.isinf(lam_q) else lam_q,
        "lambda_q_infinite": math.isinf(lam_q),
        "fitted_exponent": decay.fitted_exponent,
        "decay_label": decay.label,
        "lambda_c_m": lam_c,
        "family": fam.family,
    }
    rendered = "infinite" if math.isinf(lam_q) else f"{lam_q:.6e} m"
    _emit(cfg, results,
          f"lambda_q = {rendered} ({decay.label}, exponent "
          f"{decay.fitted_exponent:+.3f})")


def _cmd_classify(cfg: ExperimentConfig) -> None:
    e = cfg.experiment
    if e.delta_l is None:
        raise ValidationError("classify needs --delta-L (experiment.delta_l)")
    params = cfg.material_params()
    lam_c = cfg.noise.lambda_c
    if lam_c is None:
        lam_c = correlation_length(params.mass, cfg.noise.theta)
    if math.isinf(lam_c):
        raise ValidationError(
            "classify needs theta > 0 or an explicit noise.lambda_c")
    lam_q = e.lambda_q_override if e.lambda_q_override is not None else math.inf
    regime = classify_regime(e.delta_l, lam_c, lam_q, e.ratio_threshold)
    results = {
        "regime": regime,
        "delta_L_m": e.delta_l,
        "lambda_c_m": lam_c,
        "lambda_q_m": None if math.isinf(lam_q) else lam_q,
        "lambda_q_infinite": math.isinf(lam_q),
        "ratio_threshold": e.ratio_threshold,
    }
    line = f"regime = {regime}"
    if e.decay_h is not None:
        label = classify_decay(e.decay_h)
        results["decay_label"] = label
        line += f", decay class = {label}"
    _emit(cfg, results, line)


def _cmd_case(cfg: ExperimentConfig, study: str) -> None:
    params = cfg.material_params()
    if study == "lindemann":
        report = cases.lindemann(params, cfg.grid.n_points,
                                 truncate=cfg.experiment.truncate_force)
        _emit(cfg, report.to_dict(),
              f"lindemann: lambda_q / r_0 = {report.lambda_q_over_r0:.5f} "
              f"(band {cases.LINDEMANN_BAND[0]}-{cases.LINDEMANN_BAND[1]}: "
              f"{'inside' if report.within_empirical_band else 'outside'})")
        return
    lam_report = cases.helium_lambda(params)
    state_report = cases.helium_state_check(params)
    results = {"lambda_point": lam_report.to_dict(),
               "bound_state": state_report.to_dict()}
    _emit(cfg, results,
          f"helium: theta* = {lam_report.theta_star:.4f} K "
          f"(reference {lam_report.reference_theta} K), "
          f"E0 = {state_report.e0_over_kb:.4f} kB")


def _cmd_noise_audit(cfg: ExperimentConfig) -> None:
    model = _noise_model(cfg)
    g = cfg.grid
    grid = Grid(g.q_min, g.q_max, g.n_points)
    stream = RandomStream(cfg.experiment.seed)
    samples = sample_fields(model, grid, stream, cfg.experiment.samples)
    h = grid.spacing
    rows = []
    worst = 0.0
    for lag_factor in (0.0, 1.0, 2.0):
        lag = lag_factor * model.lambda_c
        k = int(round(lag / h))
        if k >= grid.n_points:
            raise ValidationError("grid too short for the 2 lambda_c lag")
        if k == 0:
            empirical = float(np.mean(samples * samples))
        else:
            empirical = float(np.mean(samples[:, :-k] * samples[:, k:]))
        target = covariance(model, k * h)
        rel = abs(empirical - target) / target
        worst = max(worst, rel)
        rows.append({"lag_over_lambda_c": lag_factor, "lag_m": k * h,
                     "empirical": empirical, "target": target,
                     "relative_error": rel})
    results = {"samples": cfg.experiment.samples, "lambda_c_m": model.lambda_c,
               "amplitude": model.amplitude, "conserving": model.conserving,
               "covariance": rows, "worst_relative_error": worst}
    _emit(cfg, results,
          f"noise-audit: worst covariance error {worst:.3%} over "
          f"{cfg.experiment.samples} samples")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "simulate":
            _cmd_simulate(cfg)
        elif args.command == "lambda-c":
            _cmd_lambda_c(cfg)
        elif args.command == "lambda-q":
            _cmd_lambda_q(cfg)
        elif args.command == "classify":
            _cmd_classify(cfg)
        elif args.command == "case":
            _cmd_case(cfg, args.study)
        else:
            _cmd_noise_audit(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
