"""Python interface to the fraclog solvers."""

from ._fraclog import (
    Coefficient,
    ConstantExterior,
    CosineExterior,
    FraclogError,
    GaussianBumpExterior,
    Grid,
    PowerDecayExterior,
    ProblemSpec,
    ZeroExterior,
    admissible_p,
    apply_fractional_laplacian,
    blowup_amplitude,
    blowup_exponent,
    build_grid,
    c_tau,
    eigen_scaling_curve,
    first_eigenpair,
    fit_boundary_rate,
    parse_config,
    picone_form,
    remark11_gap,
    run,
    run_increasing_balls,
    run_squeeze,
    solve,
    solve_blowup,
    tail_profile,
    tau0,
    verify_barrier,
)

__version__ = "0.1.0"
