"""Sample-based separated-representation solver for stochastic PDEs."""

from ._core import (
    ConfigError,
    NonConvergenceError,
    brownian_force_eval,
    ensemble_column,
    expectation,
    expectation_product,
    generate,
    kde,
    kde_grid,
    kl_eigenvalues,
    pdf_l1_distance,
    run,
    run_file,
    solve_scalar_quadratic,
    wave_ic_eval,
)

__all__ = [
    "ConfigError",
    "NonConvergenceError",
    "brownian_force_eval",
    "ensemble_column",
    "expectation",
    "expectation_product",
    "generate",
    "kde",
    "kde_grid",
    "kl_eigenvalues",
    "pdf_l1_distance",
    "run",
    "run_file",
    "solve_scalar_quadratic",
    "wave_ic_eval",
]
