"""Pole estimation for ARMA processes from higher-order crossing counts."""

import json

from ._hocpoles import (
    DataError,
    Error,
    HocState,
    IllConditioned,
    InvalidArgument,
    NumericalError,
    RootFindingError,
    UnstableModel,
    acf_from_hoc,
    analytic_acf,
    batch_acf,
    closed_loop,
    damping_conjugate,
    damping_real_pair,
    find_roots,
    hoc_from_acf,
    psi_phi,
    simulate,
    solve_myw,
    to_continuous,
)
from ._hocpoles import _estimate_json

__all__ = [
    "DataError",
    "Error",
    "HocState",
    "IllConditioned",
    "InvalidArgument",
    "NumericalError",
    "RootFindingError",
    "UnstableModel",
    "acf_from_hoc",
    "analytic_acf",
    "batch_acf",
    "closed_loop",
    "damping_conjugate",
    "damping_real_pair",
    "estimate",
    "find_roots",
    "hoc_from_acf",
    "psi_phi",
    "simulate",
    "solve_myw",
    "to_continuous",
]


def estimate(y, n, m, *, levels=None, mean="zero", fixed_level=0.0, mean_warmup=50, ewma=None,
             use_ewma=False, k_start=None, dt=1.0, zeta_threshold=0.1, batch=False):
    """Full pipeline on a sample sequence; returns the report as a dict.

    With batch=True the sample autocorrelation replaces the crossing counts.
    """
    text = _estimate_json([float(v) for v in y], n, m, levels, mean, fixed_level, mean_warmup, ewma,
                          use_ewma, k_start, dt, zeta_threshold, batch)
    return json.loads(text)
