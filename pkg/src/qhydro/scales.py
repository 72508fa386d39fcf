"""Correlation and nonlocality length scales and dynamical-regime labels.

Three lengths organize the dynamics: the noise correlation length

    lambda_c = (pi/2)^{3/2} hbar / sqrt(2 m k_B Theta),

the nonlocality length lambda_q (a weighted range of the quantum force),
and the characteristic physical length Delta_L of the problem at hand.
Comparing Delta_L against lambda_c and lambda_q selects one of three
dynamical regimes; a separate classifier maps the tail-decay exponent h
of the wave function modulus onto the same four force-growth classes used
by the numeric tail fit.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .constants import HBAR, K_B
from .errors import NumericalError, ValidationError
from .qpotential import (
    ASYMPTOTICALLY_VANISHING,
    BALLISTIC,
    SUPER_BALLISTIC,
    UNDER_BALLISTIC,
    DecayClass,
    QuantumForceProfile,
    growth_exponent,
)

NONLOCAL_DETERMINISTIC = "nonlocal_deterministic"
NONLOCAL_STOCHASTIC = "nonlocal_stochastic"
LOCAL_STOCHASTIC = "local_stochastic"
INDETERMINATE = "indeterminate"

# operationalizes "much smaller than"; labels within a factor ~2 of the
# threshold should be read with the near_threshold flag in mind
DEFAULT_RATIO_THRESHOLD = 0.1


@dataclass(frozen=True)
class NoiseAmplitude:
    """Noise amplitude Theta (kelvin) and the mobility form factor mu."""

    theta: float
    mobility_mu: float = 1.0

    def __post_init__(self):
        if self.theta < 0:
            raise ValidationError("theta must be >= 0")
        if self.mobility_mu <= 0:
            raise ValidationError("mobility_mu must be positive")


@dataclass(frozen=True)
class ScaleReport:
    lambda_c: float
    lambda_q: float              # math.inf when the defining integral diverges
    delta_L: float
    regime: str
    decay_label: str | None = None
    thresholds: tuple[float, float] = field(
        default=(DEFAULT_RATIO_THRESHOLD, DEFAULT_RATIO_THRESHOLD))

    def to_dict(self) -> dict:
        return {
            "lambda_c_m": self.lambda_c,
            "lambda_q_m": None if math.isinf(self.lambda_q) else self.lambda_q,
            "lambda_q_infinite": math.isinf(self.lambda_q),
            "delta_L_m": self.delta_L,
            "regime": self.regime,
            "decay_label": self.decay_label,
            "ratio_threshold": self.thresholds[0],
        }


def correlation_length(mass: float, theta: float) -> float:
    """lambda_c = (pi/2)^{3/2} hbar / sqrt(2 m k_B Theta); inf at Theta = 0."""
    if mass <= 0:
        raise ValidationError("mass must be positive")
    if theta < 0:
        raise ValidationError("theta must be >= 0")
    if theta == 0.0:
        # deterministic quantum limit: correlations extend everywhere
        return math.inf
    return (math.pi / 2) ** 1.5 * HBAR / math.sqrt(2.0 * mass * K_B * theta)


def convergence_test(profile: QuantumForceProfile,
                     decay: DecayClass | None = None) -> bool:
    """True iff the weighted-range integral of the force converges.

    The integrand |q^-1 dV_qu/dq| must fall off faster than q^-1, i.e. the
    fitted tail exponent must be below -1; fits inside the +-0.1 boundary
    band count as non-convergent.
    """
    if decay is None:
        decay = growth_exponent(profile)
    a = decay.fitted_exponent
    if a == -math.inf:
        return True
    return a < -1.0 - 0.1


def nonlocality_length(profile: QuantumForceProfile, lambda_c: float,
                       integration_cutoff: float | None = None,
                       decay: DecayClass | None = None) -> float:
    """Weighted range of the quantum force about the profile origin.

    lambda_q = 2 int_0^inf |r^-1 F(r)| dr / (lambda_c^-1 |F(lambda_c)|),
    realized as trapezoid quadrature on the grid up to ``integration_cutoff``
    plus a closed-form power-law tail from the fitted exponent.  Returns
    ``math.inf`` when the integral diverges (convergence test fails).
    """
    if lambda_c <= 0:
        raise ValidationError("lambda_c must be positive")
    r, f = profile.radial()
    if r.size < 8:
        raise ValidationError("profile too short to integrate")
    if decay is None:
        decay = growth_exponent(profile)
    if not convergence_test(profile, decay):
        return math.inf

    if lambda_c > r[-1]:
        raise NumericalError(
            "lambda_q undefined at this lambda_c: beyond the force support")
    force_at_lc = float(np.interp(lambda_c, r, f))
    if force_at_lc <= 0.0:
        raise NumericalError("lambda_q undefined at this lambda_c: zero force")

    cutoff = r[-1] if integration_cutoff is None else min(integration_cutoff, r[-1])
    inside = r <= cutoff
    ri, fi = r[inside], f[inside]
    integrand = fi / ri
    # extend to r = 0 by linear extrapolation of the first two points
    if ri[0] > 0 and ri.size >= 2:
        slope0 = (integrand[1] - integrand[0]) / (ri[1] - ri[0])
        i0 = integrand[0] - slope0 * ri[0]
        ri = np.concatenate(([0.0], ri))
        integrand = np.concatenate(([max(i0, 0.0)], integrand))
    total = float(np.trapezoid(integrand, ri))

    # analytic tail: integrand ~ C r^a beyond the cutoff with a < -1
    a = decay.fitted_exponent
    if a != -math.inf and decay.coefficient > 0.0:
        total += decay.coefficient * cutoff ** (a + 1.0) / (-1.0 - a)

    return 2.0 * total / (force_at_lc / lambda_c)


def classify_regime(delta_L: float, lambda_c: float, lambda_q: float,
                    ratio_threshold: float = DEFAULT_RATIO_THRESHOLD) -> str:
    """Map (Delta_L, lambda_c, lambda_q) onto a dynamical-regime label."""
    if delta_L <= 0 or lambda_c <= 0 or lambda_q < 0:
        raise ValidationError("lengths must be positive")
    if not 0.0 < ratio_threshold < 1.0:
        raise ValidationError("ratio_threshold must lie in (0, 1)")
    ratio = ratio_threshold
    if delta_L <= ratio * min(lambda_c, lambda_q):
        return NONLOCAL_DETERMINISTIC
    if lambda_c < delta_L <= ratio * lambda_q:
        return NONLOCAL_STOCHASTIC
    if max(lambda_c, lambda_q) <= ratio * delta_L:
        return LOCAL_STOCHASTIC
    return INDETERMINATE


def classify_decay(h: float) -> str:
    """Class label from the tail-decay exponent h of the wave function modulus."""
    if h <= 0:
        raise ValidationError("decay exponent h must be positive")
    if abs(h - 2.0) <= 1e-9:
        return BALLISTIC
    if h > 2.0:
        return SUPER_BALLISTIC
    if h >= 1.5:
        return UNDER_BALLISTIC
    return ASYMPTOTICALLY_VANISHING


def scale_report(delta_L: float, lambda_c: float, lambda_q: float,
                 decay_label: str | None = None,
                 ratio_threshold: float = DEFAULT_RATIO_THRESHOLD) -> ScaleReport:
    regime = classify_regime(delta_L, lambda_c, lambda_q, ratio_threshold)
    return ScaleReport(lambda_c, lambda_q, delta_L, regime, decay_label,
                       (ratio_threshold, ratio_threshold))
