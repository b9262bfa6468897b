"""Spectral analysis and eigenvalue-cutoff design of local polynomial trend filters."""
from .filters import (
    MUSGRAVE_NOISE_RATIO,
    AsymmetricFilter,
    KernelSpec,
    LocalPolySpec,
    MmsreSpec,
    SymmetricFilter,
    asymmetric_lpr_filter,
    identity_filter,
    kernel_weights,
    mmsre_filter,
    symmetric_filter,
)
from .smoother import (
    BoundaryPolicy,
    SmootherMatrix,
    TimeSeries,
    apply,
    build_smoother,
    polynomial_reproduction_residual,
    reflecting_realtime_filter,
)
from .algebra import (
    circulant_eigenvalues,
    circulant_matrix,
    tau_coefficients_closed,
    tau_coefficients_solve,
    tau_eigenvalues,
    tau_eigenvectors,
    tau_first_row,
    tau_matrix,
    tau_operator,
    transfer_function,
    transfer_function_value,
)
from .spectral import (
    eigenvector_perturbation,
    general_eigenvalues,
    perturbation_report,
    spectral_norm,
    symmetric_eigen,
)
from .design import (
    bias_discrepancy,
    cutoff_from_period,
    cutoff_objective,
    design_from_k,
    design_from_threshold,
    designed_smoother,
    latent_decomposition,
    select_cutoff,
    truncated_operator,
    variance_diagnostics,
)

__version__ = "0.1.0"
