"""Numerical verification of the Poisson structure on the moduli of SL2
parabolic bundles over the multiplicative elliptic curve E_q."""

from ._qell import (
    QellError,
    bracket_entry,
    bracket_entry_series,
    bracket_matrix,
    coeff_bracket_ac,
    coeff_bracket_cc,
    compare_brackets,
    h0_dims,
    h1_reduce,
    instability_index,
    invariant_functional,
    jacobiator,
    parabolic_aut_dim,
    plant_unstable,
    reduced_bracket,
    serre_pair,
    theta_coeffs,
    theta_functional,
)

__all__ = [
    "QellError",
    "bracket_entry",
    "bracket_entry_series",
    "bracket_matrix",
    "coeff_bracket_ac",
    "coeff_bracket_cc",
    "compare_brackets",
    "h0_dims",
    "h1_reduce",
    "instability_index",
    "invariant_functional",
    "jacobiator",
    "parabolic_aut_dim",
    "plant_unstable",
    "reduced_bracket",
    "serre_pair",
    "theta_coeffs",
    "theta_functional",
]

__version__ = "0.1.0"
