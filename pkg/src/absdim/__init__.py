"""Certification and simulation toolkit for the absolute (basis-independent)
dimension of quantum ensembles."""

from .discrimination import (
    DiscriminationResult,
    certify_via_discrimination,
    optimal_discrimination,
)
from .errors import DomainError, ParseError, SolverError, ValidationError
from .linalg import (
    DensityMatrix,
    Ensemble,
    HermitianOperator,
    Povm,
    SubspaceProjector,
    computational_basis,
    computational_povm,
    fourier_matrix,
    haar_random_state,
    haar_random_unitary,
    isotropic_ensemble,
    make_isotropic,
    projector_from_basis_subset,
    span_dimension,
)
from .oracle import (
    is_one_simulable,
    pure_ensemble_absolute_dimension,
    twirl_about_state,
)
from .simulate import (
    HaarCheckReport,
    Simulation,
    SimulationComponent,
    build_finite_orthonormal_simulation,
    build_m_state_simulation,
    isotropic_orthonormal_ensemble,
    monte_carlo_haar_check,
    reconstruct,
    vcrit_general,
    vcrit_m_states,
    vcrit_subspace,
)
from .subspace_sdp import (
    SdpSimulationResult,
    SubspaceFamily,
    max_visibility,
    superposition_ensemble,
    superposition_state_vectors,
    visibility_table,
)
from .witness import (
    WitnessCertificate,
    WitnessSpec,
    accessible_info,
    certify,
    discrimination_spec,
    operator_for_state,
    operator_total,
    tightness_diagnostic,
    vcrit_witness,
    witness_bound,
    witness_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
