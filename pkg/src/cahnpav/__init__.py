"""Fourier pseudo-spectral Cahn-Hilliard solver with energy-stable
positive-auxiliary-variable time stepping, SAV and semi-implicit baselines."""

from .diagnostics import (
    HistoryRecord,
    InvariantReport,
    assert_invariants,
    error_norms,
    fit_convergence_order,
    xi_indicator,
)
from .errors import (
    Diverged,
    GridTooCoarse,
    InsufficientData,
    InvalidState,
    NonPositiveEnergy,
    ParseError,
    SolverError,
    ValidationError,
)
from .grid import (
    GridSpec,
    RealField,
    SpectralField,
    grad_sq_integral,
    h2_norm,
    integrate,
    l2_norm,
    laplacian,
    transform_forward,
    transform_inverse,
)
from .model import (
    PhysicalParams,
    chemical_potential_exact,
    dissipation,
    energy_total,
    potential_h,
    potential_integral,
    sigma_to_beta,
)
from .problems import (
    DropLayout,
    ProblemSpec,
    desk_scale_drop_spec,
    exact_solution,
    ic_drop_array,
    manufactured_spec,
    full_scale_drop_spec,
    source_term,
)
from .runner import RunResult, run_simulation, seed_exact_history
from .schemes import (
    SchemeKind,
    SchemeState,
    StepReport,
    compute_xi_1a,
    init_state,
    sav_modified_energy,
    solve_linear_step,
    step_1a,
    step_1b,
    step_2a,
    step_2b,
    step_sav2,
    step_semi_implicit2,
)

__all__ = [
    "Diverged",
    "DropLayout",
    "GridSpec",
    "GridTooCoarse",
    "HistoryRecord",
    "InsufficientData",
    "InvalidState",
    "InvariantReport",
    "NonPositiveEnergy",
    "ParseError",
    "PhysicalParams",
    "ProblemSpec",
    "RealField",
    "RunResult",
    "SchemeKind",
    "SchemeState",
    "SolverError",
    "SpectralField",
    "StepReport",
    "ValidationError",
    "assert_invariants",
    "chemical_potential_exact",
    "compute_xi_1a",
    "desk_scale_drop_spec",
    "dissipation",
    "energy_total",
    "error_norms",
    "exact_solution",
    "fit_convergence_order",
    "grad_sq_integral",
    "h2_norm",
    "ic_drop_array",
    "init_state",
    "integrate",
    "l2_norm",
    "laplacian",
    "manufactured_spec",
    "full_scale_drop_spec",
    "potential_h",
    "potential_integral",
    "run_simulation",
    "sav_modified_energy",
    "seed_exact_history",
    "sigma_to_beta",
    "solve_linear_step",
    "source_term",
    "step_1a",
    "step_1b",
    "step_2a",
    "step_2b",
    "step_sav2",
    "step_semi_implicit2",
    "transform_forward",
    "transform_inverse",
    "xi_indicator",
]
