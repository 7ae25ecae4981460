"""Planning covariant pure-state conversions at the distribution level.

A covariant operation can turn m copies of psi1 into roughly R*m copies of
psi2 exactly when the integer energy distributions can be convolved and
shifted onto each other; the achievable rate is the variance ratio
V(psi1)/V(psi2).  The planner works entirely with those distributions:
it never synthesizes the channel, it certifies how close the conversion
can get (total variation -> fidelity floor 1 - 2*eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT, Tolerances
from .errors import (
    IncommensurateSpectrumError,
    PeriodMismatchError,
    ValidationError,
    ZeroTargetQFIError,
    ZeroTargetVarianceError,
)
from .clockdist import (
    IntegerDistribution,
    convolve_n,
    extract_distribution,
    shift,
    tv_distance,
)
from .linalg import eig_hermitian, obs_matrix, pure_state, PureState
from .measures import energy_variance, qfi
from .purification import coherence_sectors


@dataclass(frozen=True)
class ConversionPlan:
    """One certified conversion: m copies in, m2 copies out, output
    distribution shifted by k, total-variation error eps."""

    rate: float
    copies_in: int
    copies_out: int
    shift_k: int
    tv_error: float
    fidelity_lower_bound: float


def _plan(rate, m, m2, k, eps) -> ConversionPlan:
    return ConversionPlan(rate=float(rate), copies_in=int(m),
                          copies_out=int(m2), shift_k=int(k),
                          tv_error=float(eps),
                          fidelity_lower_bound=max(0.0, 1.0 - 2.0 * eps))


def intrinsic_period(psi, H, tols: Tolerances = DEFAULT) -> float:
    """Recurrence time of a pure state from its occupied energy gaps.

    Gaps are snapped to rationals (denominator <= max_denominator); the
    period is 2*pi over their gcd.  0.0 flags an energy eigenstate.
    IncommensurateSpectrum when a gap will not snap.
    """
    if not isinstance(psi, PureState):
        psi = pure_state(psi, tols)
    Hm = obs_matrix(H)
    w, V = eig_hermitian(Hm, tols)
    weights = (abs(V.conj().T @ psi.vector) ** 2)
    occ = [float(w[i]) for i in range(len(w)) if weights[i] > tols.prob]
    e0 = min(occ)
    gaps = sorted({e - e0 for e in occ if e - e0 > tols.gap_cutoff})
    if not gaps:
        return 0.0
    g = Fraction(0)
    for gap in gaps:
        f = Fraction(gap).limit_denominator(tols.max_denominator)
        if abs(gap - float(f)) > tols.level_rel * max(1.0, abs(gap)):
            raise IncommensurateSpectrumError(
                f"gap {gap:.12g} is not rational at denominator "
                f"<= {tols.max_denominator}"
            )
        g = Fraction(math.gcd(g.numerator * f.denominator,
                              f.numerator * g.denominator),
                     g.denominator * f.denominator)
    return 2.0 * math.pi / float(g)


def _common_period(psi1, H1, psi2, H2, tols: Tolerances) -> float:
    t1 = intrinsic_period(psi1, H1, tols)
    t2 = intrinsic_period(psi2, H2, tols)
    if t1 <= 0.0 or t2 <= 0.0:
        raise PeriodMismatchError("an energy eigenstate has no period")
    if abs(t1 - t2) > tols.level_rel * max(t1, t2):
        raise PeriodMismatchError(f"periods differ: {t1:.12g} vs {t2:.12g}")
    return t1


def max_rate(psi1, H1, psi2, H2, tols: Tolerances = DEFAULT) -> float:
    """Asymptotically achievable copies of psi2 per copy of psi1:
    the variance ratio V1/V2.  Both states must share a period."""
    v2 = energy_variance(psi2, H2, tols)
    if v2 <= tols.num:
        raise ZeroTargetVarianceError("target state has no energy spread")
    _common_period(psi1, H1, psi2, H2, tols)
    v1 = energy_variance(psi1, H1, tols)
    return v1 / v2


def best_shift(p: IntegerDistribution, q: IntegerDistribution,
               tols: Tolerances = DEFAULT):
    """Integer shift k of q minimizing tv(p, shift(q, k)).

    Exhaustive over every k where the windows overlap.  Ties go to the
    smaller |k|, then to the negative one.
    """
    k_lo = p.support_min - q.support_max
    k_hi = p.support_max - q.support_min
    best_k = None
    best_e = math.inf
    for k in range(k_lo, k_hi + 1):
        e = tv_distance(p, shift(q, k))
        better = e < best_e - 1e-15
        tie = abs(e - best_e) <= 1e-15
        if better or (tie and (abs(k) < abs(best_k)
                               or (abs(k) == abs(best_k) and k < best_k))):
            best_k, best_e = k, e
    if best_k is None:
        # windows never overlap for any k in range; any k gives tv = 1
        best_k, best_e = 0, 1.0
    return int(best_k), float(best_e)


def single_shot_bound(psi1, H1, psi2, H2, tau: float,
                      tols: Tolerances = DEFAULT) -> ConversionPlan:
    """One-copy conversion certificate: extract both distributions at the
    given reference period, shift-match them, floor = 1 - 2 eps."""
    p = extract_distribution(psi1, H1, tau, tols).distribution
    q = extract_distribution(psi2, H2, tau, tols).distribution
    k, eps = best_shift(p, q, tols)
    return _plan(1.0, 1, 1, k, eps)


def iid_sweep(psi1, H1, psi2, H2, R: float, m_list,
              tols: Tolerances = DEFAULT):
    """Conversion certificates at rate R for each copy count in m_list.

    For each m the planner compares the m-fold convolution of the input
    distribution against the ceil(R*m)-fold convolution of the target
    (R snapped to a rational first so the ceiling never flickers at
    representable boundaries).
    """
    if R <= 0:
        raise ValidationError(f"rate must be positive, got {R}")
    tau = _common_period(psi1, H1, psi2, H2, tols)
    p = extract_distribution(psi1, H1, tau, tols).distribution
    q = extract_distribution(psi2, H2, tau, tols).distribution
    r = Fraction(R).limit_denominator(tols.max_denominator)
    plans = []
    for m in m_list:
        m = int(m)
        if m < 1:
            raise ValidationError(f"copy counts must be >= 1, got {m}")
        m2 = -((-r.numerator * m) // r.denominator)   # exact ceil(R m)
        pm = convolve_n(p, m)
        qm = convolve_n(q, m2)
        k, eps = best_shift(pm, qm, tols)
        plans.append(_plan(R, m, m2, k, eps))
    return plans


def rate_feasibility(rho_in, H_in, rho_out, H_out, R: float,
                     tols: Tolerances = DEFAULT) -> bool:
    """Necessary condition for converting rho_in to rho_out at rate R:
    R <= qfi_in / qfi_out."""
    f_out = qfi(rho_out, H_out, tols)
    if f_out <= tols.num:
        raise ZeroTargetQFIError("target state has no Fisher information")
    f_in = qfi(rho_in, H_in, tols)
    return bool(R <= f_in / f_out + tols.num)


def coherence_cost(rho, H, tau: float, tols: Tolerances = DEFAULT) -> float:
    """Asymptotic cost of forming rho, in units of the reference two-level
    state of period tau: (tau/2pi)^2 * qfi(rho, H).

    rho must be tau-periodic (every coherence gap an integer multiple of
    2*pi/tau); incoherent states pass trivially with cost 0.
    """
    coherence_sectors(rho, H, tau, tols)   # raises PeriodMismatch if not
    scale = tau / (2.0 * math.pi)
    return scale * scale * qfi(rho, H, tols)
