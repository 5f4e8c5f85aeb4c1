"""Quantum-jump trajectories of the open SSH chain.

Gaussian covariance-matrix dynamics under single-site (SPD) or two-site
(SBD) linear dissipation, with disconnected-entanglement-entropy
diagnostics, jump statistics, a dissipative tenfold-way checker, and a
dense exact oracle for validation at small sizes.
"""

__version__ = "0.1.0"

from .model import (
    ChannelKind,
    DissipatorKind,
    JumpChannel,
    ModelSpec,
    build_channels,
    build_hamiltonian,
    gamma_profile,
)
from .gaussian import (
    CovarianceState,
    DeePartition,
    SpectrumError,
    dee,
    default_partition,
    entropy_bits,
    ground_state,
    load_covariance_binary,
    reduced,
    save_covariance_binary,
    save_covariance_csv,
)
from .trajectory import (
    Dissipator,
    JumpEvent,
    TrajectoryRecord,
    apply_jump,
    drift_step,
    lambda_expect,
    run_trajectory,
    sample_jump_time,
    select_channel,
)
from .ensemble import (
    EnsembleResult,
    Histogram,
    TcResult,
    TcSpec,
    edge_correlator_series,
    extract_tc,
    fit_edge_xi,
    histogram_dsd,
    linear_fit_r2,
    run_ensemble,
)
from .symmetry import (
    MajoranaRep,
    SymmetryReport,
    bath_matrix,
    check_symmetries,
    majorana_rep,
    shape_matrix,
    to_majorana,
)

__all__ = [name for name in dir() if not name.startswith("_")]
