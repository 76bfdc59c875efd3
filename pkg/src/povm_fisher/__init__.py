"""Frame-operator analysis of how much Fisher information a POVM extracts."""

__version__ = "0.1.0"

from .errors import PovmFisherError
from .estimation import (
    FisherReport,
    SldDirection,
    classical_fisher,
    fisher_report,
    mean_zero_direction,
    quantum_fisher,
    sld_from_tangent,
    tangent_from_direction,
)
from .frame import (
    EstimationBounds,
    FrameSpectrum,
    estimation_bounds,
    frame_apply,
    frame_matrix,
    frame_spectrum,
    is_fisher_symmetric,
    spectrum,
)
from .operator_space import OperatorBasis, build_basis, from_coords, rho_inner, to_coords
from .scan import ScanResult, angular_error, bloch_scan, random_direction_scan
from .states import (
    DensityMatrix,
    Povm,
    bloch_state,
    build_pauli_povm,
    build_projective,
    build_sic_qubit,
    maximally_mixed,
    random_ic_povm,
    random_state,
    validate_povm,
    validate_state,
)
