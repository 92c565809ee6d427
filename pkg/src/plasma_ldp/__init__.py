"""Large deviations of the mean radial displacement of the 2D one-component plasma.

Submodules
----------
analytic
    Closed-form equilibrium measures, cumulant generating function ``J(s)``
    and rate function ``Psi(x)``.
exact_beta2
    Exact finite-``N`` Laplace transform and cumulants at ``beta = 2``.
sampler
    Metropolis sampling of the tilted Gibbs measure at any ``beta > 0``.
freegas
    Reference results without the logarithmic interaction.
"""
__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    EquilibriumMeasure,
    cumulant_gf,
    cumulant_gf_derivative,
    mean_displacement,
    minimal_energy,
    rate_function,
    support_radii,
    tilt_inverse,
)
from .errors import ChainDivergenceError, ConvergenceError, InvariantError  # noqa: E402
from .exact_beta2 import delta_cumulant_table, scaled_log_laplace, tilted_mean_exact  # noqa: E402
from .sampler import PlasmaParams, Schedule, run_chain  # noqa: E402

__all__ = [
    "EquilibriumMeasure",
    "cumulant_gf",
    "cumulant_gf_derivative",
    "mean_displacement",
    "minimal_energy",
    "rate_function",
    "support_radii",
    "tilt_inverse",
    "ChainDivergenceError",
    "ConvergenceError",
    "InvariantError",
    "delta_cumulant_table",
    "scaled_log_laplace",
    "tilted_mean_exact",
    "PlasmaParams",
    "Schedule",
    "run_chain",
]
