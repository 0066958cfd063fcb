"""Cyclotomic field arithmetic and exact linear algebra."""
from .cyclotomic import CycloNumber, cyclotomic_poly, power_coeff_bound
from .linalg import (
    certified_cyclo_nullity,
    certified_cyclo_rank,
    cyclo_det,
    cyclo_inverse,
    cyclo_left_kernel_check,
    cyclo_nullity,
    cyclo_rank,
    cyclo_vec_mat,
    exponent_form,
    rank_bareiss,
    rational_nullity,
    rational_rank,
    rational_reconstruct,
)
from .modular import rank_mod_p

__all__ = [
    "CycloNumber",
    "certified_cyclo_nullity",
    "certified_cyclo_rank",
    "cyclo_det",
    "cyclo_inverse",
    "cyclo_left_kernel_check",
    "cyclo_nullity",
    "cyclo_rank",
    "cyclo_vec_mat",
    "cyclotomic_poly",
    "exponent_form",
    "power_coeff_bound",
    "rank_bareiss",
    "rank_mod_p",
    "rational_nullity",
    "rational_rank",
    "rational_reconstruct",
]
