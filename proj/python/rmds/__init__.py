"""Robust multidimensional scaling via accelerated alternating projections."""

from ._rmds import (
    NumericalError,
    ValidationError,
    accelerated_update,
    anchor_align,
    classic_mds,
    corrupt,
    diagnostics,
    edm_from_gram,
    gen_plus_sign_101,
    gen_plus_sign_25,
    gram_from_edm,
    hard_threshold,
    norm_frobenius,
    norm_inf,
    norm_spectral,
    norm_two_inf,
    procrustes_rotation,
    psd_rank_truncate,
    resolve_xi0,
    rmds_aap,
    rmse_non_anchor,
    tangent_project,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "accelerated_update",
    "anchor_align",
    "classic_mds",
    "corrupt",
    "diagnostics",
    "edm_from_gram",
    "gen_plus_sign_101",
    "gen_plus_sign_25",
    "gram_from_edm",
    "hard_threshold",
    "norm_frobenius",
    "norm_inf",
    "norm_spectral",
    "norm_two_inf",
    "procrustes_rotation",
    "psd_rank_truncate",
    "resolve_xi0",
    "rmds_aap",
    "rmse_non_anchor",
    "tangent_project",
]
