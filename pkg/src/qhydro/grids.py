"""Uniform 1-D grids, sampled fields, derivative and quadrature kernels.

The numeric substrate for everything else: fields are immutable numpy
arrays tied to a grid, derivatives are second-order central stencils with
second-order one-sided stencils at the boundaries, integration is the
composite trapezoid rule.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ValidationError


class GridError(ValidationError):
    pass


@dataclass(frozen=True)
class Grid:
    q_min: float
    q_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.q_min) and math.isfinite(self.q_max)):
            raise GridError("grid bounds must be finite")
        if self.q_max <= self.q_min:
            raise GridError("empty domain: q_max must exceed q_min")
        if self.n_points < 8:
            raise GridError("n_points must be at least 8")

    @property
    def spacing(self) -> float:
        return (self.q_max - self.q_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        q = np.linspace(self.q_min, self.q_max, self.n_points)
        q.flags.writeable = False
        return q

    @property
    def length(self) -> float:
        return self.q_max - self.q_min


def make_grid(q_min: float, q_max: float, n_points: int) -> Grid:
    return Grid(q_min, q_max, int(n_points))


@dataclass(frozen=True)
class Field:
    """Sampled real profile on a grid, with a loose unit tag."""

    grid: Grid
    values: np.ndarray
    unit: str = "1"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ValidationError(
                f"field has {values.shape} values for a {self.grid.n_points}-point grid"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("field values must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray, unit: str | None = None) -> "Field":
        return Field(self.grid, values, self.unit if unit is None else unit)


def _per_length_unit(unit: str, order: int) -> str:
    suffix = "/m" if order == 1 else "/m^2"
    return f"({unit}){suffix}" if unit != "1" else ("m^-1" if order == 1 else "m^-2")


def stencil_derivative(values: np.ndarray, spacing: float, order: int) -> np.ndarray:
    """Raw derivative kernel on an array (one-sided at the boundaries)."""
    v = np.asarray(values, dtype=float)
    h = spacing
    out = np.empty_like(v)
    # stencils written as grouped differences so constant fields map to
    # exactly zero, with no roundoff residue at the boundaries
    if order == 1:
        out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
        out[0] = (3 * (v[1] - v[0]) + (v[1] - v[2])) / (2 * h)
        out[-1] = (3 * (v[-1] - v[-2]) + (v[-3] - v[-2])) / (2 * h)
    elif order == 2:
        out[1:-1] = ((v[2:] - v[1:-1]) - (v[1:-1] - v[:-2])) / h**2
        out[0] = (2 * (v[0] - v[1]) - 3 * (v[1] - v[2]) + (v[2] - v[3])) / h**2
        out[-1] = (2 * (v[-1] - v[-2]) - 3 * (v[-2] - v[-3])
                   + (v[-3] - v[-4])) / h**2
    else:
        raise ValidationError("derivative order must be 1 or 2")
    return out


def periodic_derivative(values: np.ndarray, spacing: float, order: int) -> np.ndarray:
    """Derivative kernel with periodic wrap-around (translation equivariant)."""
    v = np.asarray(values, dtype=float)
    h = spacing
    if order == 1:
        return (np.roll(v, -1) - np.roll(v, 1)) / (2 * h)
    if order == 2:
        return (np.roll(v, -1) - 2 * v + np.roll(v, 1)) / h**2
    raise ValidationError("derivative order must be 1 or 2")


def derivative(f: Field, order: int = 1, periodic: bool = False) -> Field:
    kernel = periodic_derivative if periodic else stencil_derivative
    return Field(f.grid, kernel(f.values, f.grid.spacing, order),
                 _per_length_unit(f.unit, order))


def integrate(f: Field) -> float:
    """Composite trapezoid estimate of the integral over the grid."""
    return float(np.trapezoid(f.values, dx=f.grid.spacing))
