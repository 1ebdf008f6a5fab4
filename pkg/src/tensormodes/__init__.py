"""Eigenvectors of symmetric tensors as higher-order normal modes."""
from .symtensor import (
    HomogeneousPolynomial,
    PolynomialInputError,
    SymmetricTensor,
    evaluate,
    from_terms,
    gradient,
    hessian,
    load_polynomial,
    random_polynomial,
    tensor_view,
)
from .spectra import (
    Eigenpair,
    SolverConfig,
    SpectrumReport,
    bezout_bound,
    classify,
    find_eigenpairs,
    index_sum_check,
    multiplicity_one,
    parity_check,
    refine,
    table_compatibility,
)
from .dynamics import (
    ReducedMode,
    SecondOrderSystem,
    State,
    Trajectory,
    boundedness,
    detect_period,
    energy,
    integrate,
    integrate_mode,
    line_deviation,
    psi,
    reduced_mode,
    weierstrass_residual,
)
from .casestudy import (
    HigherSymmetry,
    LowerSymmetry,
    bifurcation_scan,
    critical_angles,
    cross_validate,
    off_axis_angle,
    offset_experiment,
    potential_of,
    restrict,
)
