"""Perturbation of eigenvalues, eigenvectors and singular values by
commutator-form (isospectral tangent) perturbations ``E = AB - BA``."""

__version__ = "0.1.0"

from .bounds import (
    block_subspace_bound,
    block_subspace_residuals,
    delta_surrogate_chain,
    eigval_bound,
    eigval_bounds_all,
    eigvec_actual_residuals,
    eigvec_residual_bounds,
    empirical_order_check,
    hermitian_block_eigval_actual,
    hermitian_block_eigval_bound,
    hermitian_block_vec_bound,
    hermitian_global_bound,
    residual_ladder,
)
from .estimators import CommutatorSolver, PerturbationExpansion, SingularTangentSolver
from .exceptions import (
    AmbiguousMatchingError,
    BoundInfeasibleError,
    ConvergenceError,
    DegenerateGapError,
    DegenerateSpectrumError,
    IllConditionedError,
    InputError,
    IsotangentError,
    NotInTangentError,
    RegimeError,
)
from .expansions import eigval_expansion, eigvec_expansion, generic_expansions
from .jordan import jordan_coefficient, jordan_order_validate, jordan_solve_b, jordan_tangent_check
from .linalg import (
    Spectrum,
    eigen_full,
    eigenvalue_derivative,
    match_eigenvalues,
    spectral_gaps,
    spectral_norm,
    svd_full,
)
from .svd import (
    jordan_wielandt_reduce,
    singular_expansion,
    singular_value_bound,
    solve_s_from_e,
    svd_b_blocks,
    svd_tangent_apply,
    tall_rows_bound,
)
from .tangent import (
    BlockPartition,
    Gauge,
    commutator,
    is_in_tangent,
    project_to_tangent,
    solve_b_block,
    solve_b_diagonal,
    solve_b_general,
)
