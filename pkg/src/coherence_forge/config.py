"""Centralized numerical tolerances.

Every cutoff used anywhere in the package lives here so that tests and the
CLI agree on what "zero" means.  All values are absolute unless the name
says otherwise; inputs are assumed to be desk-scale (matrix entries O(1),
dimensions in the tens).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # Hermiticity / state validation
    herm: float = 1e-10          # max |M - M^dag| entry
    trace: float = 1e-10         # |tr(rho) - 1|
    psd: float = 1e-10           # eigenvalues >= -psd
    norm: float = 1e-10          # | ||v|| - 1 | for pure states
    recon: float = 1e-10         # eigendecomposition reconstruction residual

    # Spectral cutoffs
    rank_cutoff: float = 1e-10   # eigenvalue counts toward the support
    pair_cutoff: float = 1e-14   # p_j + p_k below this: pair skipped
    gap_cutoff: float = 1e-8     # eigenvalue gaps below this: same level

    # Commutator norm below which operators count as commuting
    commute: float = 1e-9

    # Probability distributions
    prob: float = 1e-12          # weight renormalization / negativity slack
    tail_eps: float = 1e-12      # truncation mass for infinite supports

    # Integer-spectrum extraction: |E*tau/(2pi) - nearest int| allowed,
    # in units of 2pi/tau
    level_rel: float = 1e-9

    # Finite-difference QFI
    fd_step: float = 1e-3

    # Channel checks
    cptp: float = 1e-10          # |sum K^dag K - I| entry
    ti_residual: float = 1e-10   # covariance residual for "is covariant"

    # Semidefinite solver
    sdp_gap: float = 1e-7        # primal-dual gap target
    sdp_feas: float = 1e-9       # dual marginal feasibility residual
    sdp_max_newton: int = 500    # total Newton step budget

    # Generic numeric slack for identities that hold exactly in theory
    num: float = 1e-9

    # Rational snapping of measured gaps and rates
    max_denominator: int = 10**6


DEFAULT = Tolerances()
