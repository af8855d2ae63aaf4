"""Witness-based entanglement measures with an embedded SDP solver."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    binary_entropy,
    distillable_upper,
    eof_lower_rg,
    eof_lower_rr,
    isotropic_eof_exact,
    le_n1,
    teleport_dmin_upper,
)
from .linalg import (
    Cut,
    HermitianMatrix,
    SystemShape,
    hs_inner,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from .measures import (
    MeasureResult,
    concurrence_2q,
    e_nm_ppt,
    isotropic_e_n1,
    negativity,
    pure_rg,
    pure_rr,
    rains_fidelity,
    rg_dps2,
    rg_ppt,
    rg_ppt_closed,
    rr_ppt,
    ssr_nonlocality,
)
from .sdp import (
    HermitianSdp,
    SdpProblem,
    SdpSolution,
    SdpStatus,
    SolverError,
    solve,
)
from .spin import (
    ChainSpec,
    rg_witness_lower_thermal,
    susceptibility,
    thermo_estimate,
    toth_witness,
    xxx_hamiltonian,
)
from .states import (
    DensityMatrix,
    PureState,
    horodecki_3x3,
    isotropic,
    max_entangled,
    random_density,
    random_pure,
    rng_stream,
    schmidt,
    state_from_json,
    state_to_json,
    thermal,
    vc_ssr_state,
    w_ghz_mix,
)
from .symmetry import symmetric_witness_opt, twirl_uustar
from .witnesses import (
    MixingCertificate,
    ValidationReport,
    Witness,
    evaluate,
    mc_product_check,
    validate_decomposable,
    witness_from_json,
    witness_to_json,
)

__all__ = [
    "BoundReport",
    "ChainSpec",
    "Cut",
    "DensityMatrix",
    "HermitianMatrix",
    "HermitianSdp",
    "MeasureResult",
    "MixingCertificate",
    "PureState",
    "SdpProblem",
    "SdpSolution",
    "SdpStatus",
    "SolverError",
    "SystemShape",
    "ValidationReport",
    "Witness",
    "__version__",
    "binary_entropy",
    "concurrence_2q",
    "distillable_upper",
    "e_nm_ppt",
    "eof_lower_rg",
    "eof_lower_rr",
    "evaluate",
    "horodecki_3x3",
    "hs_inner",
    "isotropic",
    "isotropic_e_n1",
    "isotropic_eof_exact",
    "le_n1",
    "max_entangled",
    "mc_product_check",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "pure_rg",
    "pure_rr",
    "rains_fidelity",
    "random_density",
    "random_pure",
    "rg_dps2",
    "rg_ppt",
    "rg_ppt_closed",
    "rg_witness_lower_thermal",
    "rng_stream",
    "rr_ppt",
    "schmidt",
    "solve",
    "ssr_nonlocality",
    "state_from_json",
    "state_to_json",
    "susceptibility",
    "symmetric_witness_opt",
    "teleport_dmin_upper",
    "thermal",
    "thermo_estimate",
    "toth_witness",
    "trace_norm",
    "twirl_uustar",
    "vc_ssr_state",
    "validate_decomposable",
    "w_ghz_mix",
    "witness_from_json",
    "witness_to_json",
    "xxx_hamiltonian",
]
