"""Experiment configuration: parsing, validation, defaults.

Configs are INI-style documents with sections [experiment], [material],
[grid], [integrator], [noise], [output].  Every key has a documented
default; unknown sections or keys are rejected by name.  Values carrying
units accept a suffix ("7.9 Bohr", "10.9 kB", "2.17K") and are converted
to SI at this boundary.
"""

import configparser
from dataclasses import dataclass, field, fields
import io
import math

from .constants import parse_quantity
from .errors import ValidationError
from .potentials import MATERIAL_PRESETS, MaterialParams

EXPERIMENT_KINDS = (
    "simulate", "lambda_c", "lambda_q", "classify",
    "case_lindemann", "case_helium", "noise_audit",
)

INITIAL_CONDITIONS = ("free_gaussian", "harmonic_ground", "square_well")
POTENTIALS = ("none", "harmonic", "square_well")
FAMILIES = ("constant_f", "linear_f", "log_f", "power_f")


def _quantity(text: str) -> float:
    try:
        return parse_quantity(text)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _boolean(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValidationError(f"expected a boolean, got {text!r}")


def _optional_quantity(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none") else _quantity(text)


def _length_or_inf(text: str) -> float | None:
    lowered = text.strip().lower()
    if lowered in ("", "none"):
        return None
    if lowered in ("inf", "infinite"):
        return math.inf
    return _quantity(text)


@dataclass(frozen=True)
class ExperimentSection:
    kind: str = "simulate"
    seed: int = 12345
    initial: str = "free_gaussian"
    initial_width: float = 1e-10        # m, Gaussian sigma of the start density
    initial_center: float = 0.0         # m
    initial_velocity: float = 0.0       # m/s
    potential: str = "none"
    delta_l: float | None = None        # m, physical length for classify
    lambda_q_override: float | None = None
    ratio_threshold: float = 0.1
    decay_h: float | None = None
    family: str = "power_f"
    family_g: float = 2.0
    family_h: float = 1.0
    core_width: float = 1.0             # m, sqrt of the core variance parameter
    tail_scale: float = 20.0            # m, Lambda of the pseudo-Gaussian
    samples: int = 10000                # noise-audit sample count
    truncate_force: bool = True         # melting-ratio truncation at delta


@dataclass(frozen=True)
class MaterialSection:
    preset: str | None = None
    mass: float = 6.6465e-27
    well_depth: float = 1.5049e-22      # J, 10.9 kB
    r_0: float = 4.1805e-10             # m
    sigma: float | None = None
    half_width: float | None = 1.54e-10
    depth_factor: float = 0.82


@dataclass(frozen=True)
class GridSection:
    q_min: float = -2e-9
    q_max: float = 2e-9
    n_points: int = 801


@dataclass(frozen=True)
class IntegratorSection:
    dt: float = 1e-16
    scheme: str = "deterministic_quantum"
    cfl_safety: float = 0.4
    boundary: str = "zero_flux"
    density_floor: float = 1e-12
    t_end: float = 1e-13
    output_stride: int = 10


@dataclass(frozen=True)
class NoiseSection:
    theta: float = 0.0
    lambda_c: float | None = None       # m, override of the derived length
    mobility_mu: float = 1.0
    conserving: bool = True


@dataclass(frozen=True)
class OutputSection:
    csv: str | None = None
    json: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    material: MaterialSection = field(default_factory=MaterialSection)
    grid: GridSection = field(default_factory=GridSection)
    integrator: IntegratorSection = field(default_factory=IntegratorSection)
    noise: NoiseSection = field(default_factory=NoiseSection)
    output: OutputSection = field(default_factory=OutputSection)

    def material_params(self) -> MaterialParams:
        m = self.material
        if m.preset is not None:
            if m.preset not in MATERIAL_PRESETS:
                raise ValidationError(f"unknown material preset {m.preset!r}")
            return MATERIAL_PRESETS[m.preset]()
        return MaterialParams(mass=m.mass, well_depth=m.well_depth, r_0=m.r_0,
                              sigma=m.sigma, half_width=m.half_width,
                              depth_factor=m.depth_factor)


# key -> converter, per section; the dataclass defaults are the default table
_CONVERTERS = {
    "experiment": {
        "kind": str,
        "seed": int,
        "initial": str,
        "initial_width": _quantity,
        "initial_center": _quantity,
        "initial_velocity": _quantity,
        "potential": str,
        "delta_l": _optional_quantity,
        "lambda_q_override": _length_or_inf,
        "ratio_threshold": float,
        "decay_h": lambda t: None if t.strip().lower() in ("", "none") else float(t),
        "family": str,
        "family_g": float,
        "family_h": float,
        "core_width": _quantity,
        "tail_scale": _quantity,
        "samples": int,
        "truncate_force": _boolean,
    },
    "material": {
        "preset": lambda t: None if t.strip().lower() in ("", "none") else t.strip(),
        "mass": _quantity,
        "well_depth": _quantity,
        "r_0": _quantity,
        "sigma": _optional_quantity,
        "half_width": _optional_quantity,
        "depth_factor": float,
    },
    "grid": {
        "q_min": _quantity,
        "q_max": _quantity,
        "n_points": int,
    },
    "integrator": {
        "dt": _quantity,
        "scheme": str,
        "cfl_safety": float,
        "boundary": str,
        "density_floor": float,
        "t_end": _quantity,
        "output_stride": int,
    },
    "noise": {
        "theta": _quantity,
        "lambda_c": _optional_quantity,
        "mobility_mu": float,
        "conserving": _boolean,
    },
    "output": {
        "csv": lambda t: None if t.strip().lower() in ("", "none") else t.strip(),
        "json": lambda t: None if t.strip().lower() in ("", "none") else t.strip(),
    },
}

_SECTION_TYPES = {
    "experiment": ExperimentSection,
    "material": MaterialSection,
    "grid": GridSection,
    "integrator": IntegratorSection,
    "noise": NoiseSection,
    "output": OutputSection,
}


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    e = cfg.experiment
    kind = e.kind.replace("-", "_")
    if kind not in EXPERIMENT_KINDS:
        raise ValidationError(
            f"experiment.kind must be one of {EXPERIMENT_KINDS}, got {e.kind!r}")
    if kind != e.kind:
        object.__setattr__(e, "kind", kind)
    if e.initial not in INITIAL_CONDITIONS:
        raise ValidationError(f"experiment.initial must be one of {INITIAL_CONDITIONS}")
    if e.potential not in POTENTIALS:
        raise ValidationError(f"experiment.potential must be one of {POTENTIALS}")
    if e.family not in FAMILIES:
        raise ValidationError(f"experiment.family must be one of {FAMILIES}")
    if e.initial_width <= 0:
        raise ValidationError("experiment.initial_width must be positive")
    if not 0.0 < e.ratio_threshold < 1.0:
        raise ValidationError("experiment.ratio_threshold must lie in (0, 1)")
    if e.samples < 1:
        raise ValidationError("experiment.samples must be >= 1")
    if cfg.noise.theta < 0:
        raise ValidationError("theta must be >= 0")
    if cfg.noise.lambda_c is not None and cfg.noise.lambda_c <= 0:
        raise ValidationError("noise.lambda_c must be positive")
    if cfg.noise.mobility_mu <= 0:
        raise ValidationError("noise.mobility_mu must be positive")
    if cfg.grid.n_points < 8:
        raise ValidationError("grid.n_points must be at least 8")
    if not cfg.grid.q_max > cfg.grid.q_min:
        raise ValidationError("grid must satisfy q_max > q_min")
    if cfg.integrator.dt <= 0 or cfg.integrator.t_end < 0:
        raise ValidationError("integrator.dt must be > 0 and t_end >= 0")
    if cfg.integrator.output_stride < 1:
        raise ValidationError("integrator.output_stride must be >= 1")
    cfg.material_params()   # raises on inconsistent material values
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config document; unknown keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise ValidationError(f"malformed config: {exc}") from exc

    kwargs = {}
    for section in parser.sections():
        if section not in _CONVERTERS:
            raise ValidationError(f"unknown config section [{section}]")
        converters = _CONVERTERS[section]
        values = {}
        for key, raw in parser.items(section):
            if key not in converters:
                raise ValidationError(
                    f"unknown key {key!r} in section [{section}]")
            try:
                values[key] = converters[key](raw)
            except ValidationError:
                raise
            except (ValueError, TypeError) as exc:
                raise ValidationError(
                    f"bad value for {section}.{key}: {exc}") from exc
        kwargs[section] = _SECTION_TYPES[section](**values)
    return _validate(ExperimentConfig(**kwargs))


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_config(handle.read())
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from exc


def apply_overrides(cfg: ExperimentConfig, overrides: dict[str, str]) -> ExperimentConfig:
    """Apply "section.key=value" overrides on top of a parsed config."""
    staged: dict[str, dict[str, object]] = {}
    for dotted, raw in overrides.items():
        if "." not in dotted:
            raise ValidationError(
                f"override {dotted!r} must be section.key")
        section, key = dotted.split(".", 1)
        if section not in _CONVERTERS or key not in _CONVERTERS[section]:
            raise ValidationError(f"unknown override {dotted!r}")
        try:
            staged.setdefault(section, {})[key] = _CONVERTERS[section][key](raw)
        except ValidationError:
            raise
        except (ValueError, TypeError) as exc:
            raise ValidationError(f"bad value for {dotted}: {exc}") from exc

    sections = {}
    for name, section_type in _SECTION_TYPES.items():
        current = getattr(cfg, name)
        if name in staged:
            merged = {f.name: getattr(current, f.name) for f in fields(section_type)}
            merged.update(staged[name])
            sections[name] = section_type(**merged)
        else:
            sections[name] = current
    return _validate(ExperimentConfig(**sections))


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = {}
    for name, section_type in _SECTION_TYPES.items():
        section = getattr(cfg, name)
        out[name] = {f.name: getattr(section, f.name)
                     for f in fields(section_type)}
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    """Render back to the INI schema (SI values, no unit suffixes)."""
    lines = []
    for name, values in config_to_dict(cfg).items():
        lines.append(f"[{name}]")
        for key, value in values.items():
            if value is None:
                rendered = "none"
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = repr(value)
            else:
                rendered = str(value)
            lines.append(f"{key} = {rendered}")
        lines.append("")
    return "\n".join(lines)
