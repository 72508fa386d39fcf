"""Spatially correlated, time-white Gaussian noise fields.

The equal-time spatial covariance is

    G(lambda) = A exp[-(lambda/lambda_c)^2],   A = mu 8 m (k_B Theta)^2 / (pi^3 hbar^2),

sampled exactly by circulant embedding: the stationary kernel is
diagonalized by the FFT on the periodic extension of the grid, so each
draw has the target covariance without factorizing a dense matrix.  The
delta(tau) time factor is the integrator's contract (fields are scaled by
sqrt(dt) there); the sampler produces unit-time-density fields.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import HBAR, K_B
from .errors import UnderResolvedKernelError, ValidationError
from .grids import Field, Grid


@dataclass(frozen=True)
class RandomStream:
    """Seeded RNG wrapper: identical seeds give identical sample sequences."""

    seed: int

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def noise_amplitude(mass: float, theta: float, mobility_mu: float) -> float:
    """A = mu 8 m (k_B Theta)^2 / (pi^3 hbar^2), the covariance at zero lag."""
    if mass <= 0:
        raise ValidationError("mass must be positive")
    if theta < 0:
        raise ValidationError("theta must be >= 0")
    if mobility_mu <= 0:
        raise ValidationError("mobility_mu must be positive")
    return mobility_mu * 8.0 * mass * (K_B * theta) ** 2 / (math.pi**3 * HBAR**2)


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian-kernel noise: amplitude from (mass, Theta, mu), length lambda_c."""

    theta: float                 # K
    lambda_c: float              # m
    mass: float                  # kg, enters the amplitude prefactor
    mobility_mu: float = 1.0
    conserving: bool = True      # project each sample to zero spatial integral

    def __post_init__(self):
        # validates parameter signs as a side effect
        noise_amplitude(self.mass, self.theta, self.mobility_mu)
        if self.lambda_c <= 0:
            raise ValidationError("lambda_c must be positive")

    @property
    def amplitude(self) -> float:
        return noise_amplitude(self.mass, self.theta, self.mobility_mu)


def covariance(model: NoiseModel, separation: float) -> float:
    """Equal-time spatial covariance density at the given separation."""
    return model.amplitude * math.exp(-((separation / model.lambda_c) ** 2))


def _kernel_eigenvalues(model: NoiseModel, grid: Grid) -> np.ndarray:
    """FFT eigenvalues of the circulant extension of the covariance kernel."""
    n = grid.n_points
    h = grid.spacing
    m = 2 * n                    # periodic extension suppresses wrap-around
    j = np.arange(m)
    dist = np.minimum(j, m - j) * h
    row = model.amplitude * np.exp(-((dist / model.lambda_c) ** 2))
    eig = np.fft.fft(row).real
    # the embedding is positive definite for the Gaussian kernel up to
    # roundoff; clip stray negative eigenvalues at zero
    return np.clip(eig, 0.0, None)


def sample_field(model: NoiseModel, grid: Grid, stream: RandomStream,
                 rng: np.random.Generator | None = None) -> Field:
    """One zero-mean Gaussian field with the model covariance on the grid.

    Pass ``rng`` to draw a sequence of fields from one stream; otherwise a
    fresh generator is built from the stream seed (deterministic per call).
    """
    fields = sample_fields(model, grid, stream, 1, rng)
    return Field(grid, fields[0], "noise")


def sample_fields(model: NoiseModel, grid: Grid, stream: RandomStream,
                  count: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """``count`` independent samples, shape (count, n_points)."""
    if grid.spacing >= model.lambda_c / 2.0:
        raise UnderResolvedKernelError(
            f"under-resolved kernel: spacing {grid.spacing:.3e} m must be "
            f"below lambda_c/2 = {model.lambda_c / 2.0:.3e} m")
    if model.amplitude == 0.0:
        return np.zeros((count, grid.n_points))
    eig = _kernel_eigenvalues(model, grid)
    m = eig.size
    if rng is None:
        rng = stream.generator()
    # spectral filter: y = F^-1 sqrt(eig) F xi is a real symmetric circulant
    # acting on white noise, so cov(y) is exactly the circulant kernel
    white = rng.standard_normal((count, m))
    spectral = np.fft.fft(white, axis=1) * np.sqrt(eig)
    samples = np.fft.ifft(spectral, axis=1).real[:, : grid.n_points]
    if model.conserving:
        mean_density = np.trapezoid(samples, dx=grid.spacing, axis=1) / grid.length
        samples = samples - mean_density[:, None]
    return samples
