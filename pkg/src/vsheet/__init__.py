"""Normal-mode linear stability of rectilinear compressible vortex sheets.

The package evaluates the reduced boundary symbol of a two-sided sheet,
its decaying eigenmodes, and the resulting 2x2 boundary determinant; locates
and classifies the determinant roots against the six-way case table; and
measures the vanishing rates that set the order of derivative loss in the
associated energy estimates.  An elastic sheet is the reference model, with
inviscid-fluid and current-vortex variants alongside.
"""
from ._kernels import BACKEND, USING_COMPILED
from .background import (
    BackgroundState,
    CaseId,
    CaseLabel,
    DerivedConstants,
    Regime,
    RootSpec,
    classify_case,
    derived_constants,
    regime_from_inequalities,
)
from .bvp import (
    DecayingSolution,
    ProbeResult,
    energy_probe,
    reconstruct_front,
    solve_decaying,
)
from .checks import CheckResult, case_states, run_all
from .errors import (
    BranchAmbiguity,
    DegenerateEigenvector,
    DegenerateF,
    FitDiverged,
    InvalidState,
    NearSingularBoundary,
    OutsideCone,
    SeparationFailed,
    SymbolPole,
    UnexpectedRoot,
    VortexSheetError,
    ZeroFrequency,
)
from .freq import (
    BranchValue,
    FrequencyPoint,
    boundary_point,
    branch_sqrt,
    normalize_to_hemisphere,
    omega,
    omega_pair,
    sample_hemisphere,
)
from .lopatinskii import (
    FitResult,
    LopatinskiiEval,
    RootRecord,
    StabilityReport,
    estimate_multiplicity,
    find_roots,
    lopatinskii_eval,
    lower_bound_scan,
    stability_verdict,
)
from .models import FluidState, MhdState, make_state
from .modes import SeparationBasis, separation_basis, triangularize
from .symbol import (
    BoundaryReduction,
    EigenData,
    ReducedSymbol,
    assemble_boundary,
    assemble_interior,
    eigen_data,
    reduced_symbol_closed,
    reduced_symbol_via_elimination,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "USING_COMPILED",
    "BackgroundState",
    "BoundaryReduction",
    "BranchAmbiguity",
    "BranchValue",
    "CaseId",
    "CaseLabel",
    "CheckResult",
    "DecayingSolution",
    "DegenerateEigenvector",
    "DegenerateF",
    "DerivedConstants",
    "EigenData",
    "FitDiverged",
    "FitResult",
    "FluidState",
    "FrequencyPoint",
    "InvalidState",
    "LopatinskiiEval",
    "MhdState",
    "NearSingularBoundary",
    "OutsideCone",
    "ProbeResult",
    "ReducedSymbol",
    "Regime",
    "RootRecord",
    "RootSpec",
    "SeparationBasis",
    "SeparationFailed",
    "StabilityReport",
    "SymbolPole",
    "UnexpectedRoot",
    "VortexSheetError",
    "ZeroFrequency",
    "assemble_boundary",
    "assemble_interior",
    "boundary_point",
    "branch_sqrt",
    "case_states",
    "classify_case",
    "derived_constants",
    "eigen_data",
    "energy_probe",
    "estimate_multiplicity",
    "find_roots",
    "lopatinskii_eval",
    "lower_bound_scan",
    "make_state",
    "normalize_to_hemisphere",
    "omega",
    "omega_pair",
    "reconstruct_front",
    "reduced_symbol_closed",
    "reduced_symbol_via_elimination",
    "regime_from_inequalities",
    "run_all",
    "sample_hemisphere",
    "separation_basis",
    "solve_decaying",
    "stability_verdict",
    "triangularize",
    "__version__",
]
