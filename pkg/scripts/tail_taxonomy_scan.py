#!/usr/bin/env python3
"""Scan the power-tail density family and classify its quantum-force decay.

For each tail exponent g the pseudo-Gaussian density with log-tail
-beta r^g is sampled on a long radial grid, the quantum force is fitted
in the far field, and the resulting class label, convergence verdict and
nonlocality length are tabulated next to the symbolic expectation.
"""

import argparse
import math

from qhydro.grids import Grid
from qhydro.potentials import (
    PseudoGaussianFamily,
    helium_preset,
    pseudo_gaussian_log_density,
    pseudo_gaussian_tail_force,
)
from qhydro.qpotential import growth_exponent, quantum_force_from_log
from qhydro.scales import convergence_test, nonlocality_length


def grid_for(g: float, lam: float) -> Grid:
    # the asymptotic regime only opens up beyond r ~ (lam^2)^(1/(2-g));
    # stretch the grid accordingly (g close to 2 gets expensive fast)
    if g >= 2.0:
        return Grid(0.0, 3e6, 120001)
    onset = (lam**2) ** (1.0 / (2.0 - g))
    return Grid(0.0, max(1.2e6, 1e3 * onset), 120001)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, nargs="+",
                    default=[1.0, 1.2, 1.4, 1.6, 2.0])
    ap.add_argument("--tail-scale", type=float, default=40.0,
                    help="Lambda of the family, in units of the core width")
    ap.add_argument("--lambda-c", type=float, default=2.0,
                    help="probe length for lambda_q, same units")
    args = ap.parse_args()

    mass = helium_preset().mass
    print(f"{'g':>5} {'fit exp':>9} {'symbolic':>9} {'class':>26} "
          f"{'converges':>10} {'lambda_q':>12}")
    for g in args.g:
        fam = PseudoGaussianFamily(family="power_f", delta_q_sq=1.0,
                                   lam=args.tail_scale, g=g, q_bar=0.0)
        grid = grid_for(g, args.tail_scale)
        profile = quantum_force_from_log(
            pseudo_gaussian_log_density(fam, grid), mass, fam.q_bar)
        decay = growth_exponent(profile)
        symbolic = pseudo_gaussian_tail_force(fam, mass).leading_exponent - 1.0
        converges = convergence_test(profile, decay)
        lam_q = nonlocality_length(profile, args.lambda_c, decay=decay)
        lam_q_txt = "inf" if math.isinf(lam_q) else f"{lam_q:.4e}"
        print(f"{g:5.2f} {decay.fitted_exponent:+9.3f} {symbolic:+9.3f} "
              f"{decay.label:>26} {str(converges):>10} {lam_q_txt:>12}")


if __name__ == "__main__":
    main()
