"""Pseudo-spectral MHD solver with regularity-criterion monitors."""

from ._mhdreg import (
    BlowupDetected,
    DegenerateInput,
    Error,
    InvalidConfig,
    InvalidExponent,
    NonLocalized,
    NotSolenoidal,
    UnsupportedGrid,
    check_admissible,
    cli,
    empirical_constant,
    gaussian,
    inequality_ratio,
    initial_data,
    lp_norm,
    pressure_solve,
    simulate,
)

__version__ = "0.1.0"
