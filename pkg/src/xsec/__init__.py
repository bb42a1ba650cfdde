"""Volumes of central sections of dilated cross-polytopes.

Monte Carlo estimators built on two exponential-mixture representations of
the section volume, exact and hit-or-miss reference volumes, and numerical
checks of the log-concavity of ``t -> vol(diag(e^t) B_1^n ∩ H)``.
"""
from .numkit import BasisMatrix, RankDeficientError, cholesky_logdet, complement_basis, min_eigenvalue, orthonormalize
from .section_model import (
    ColumnProfile,
    SubspaceSpec,
    as_dilation,
    codim_profile,
    dim_profile,
    make_subspace,
    to_dilation,
)
from .streams import MCConfig, sample_exponentials, substream
from .estimators import (
    HeavyTailWarning,
    VolumeEstimate,
    density_identity_check,
    estimate_codim,
    estimate_dim,
    estimate_logvol_path,
    estimate_volume,
)
from .oracle import (
    SectionBody,
    clip_polygon,
    full_volume,
    oracle_volume,
    polygon_area,
    volume_k1,
    volume_k2,
    volume_mc,
)
from .analysis import (
    ConcavityReport,
    counterexample_curve,
    counterexample_violation,
    det_expansion_check,
    logconcavity_scan,
    logdet_convexity_check,
    mixed_discriminant,
)

__version__ = "0.1.0"
