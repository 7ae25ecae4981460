"""Integer energy distributions of periodic states and their limit shapes.

A pure state that returns to itself after time tau occupies energy levels
2*pi*n/tau (up to a reference shift); its physics under covariant
operations is captured by the integer distribution p(n) of those
occupations.  This module extracts that distribution, convolves it
(many-copy statistics), compares it in total variation to a translated
Poisson approximant, and evaluates the quantitative approximation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    GcdNotOneError,
    IncommensurateSpectrumError,
    SearchExhaustedError,
    ValidationError,
    ZeroNuError,
    ZeroVarianceError,
)
from .linalg import (
    HermitianObservable,
    PureState,
    eig_hermitian,
    group_levels,
    obs_matrix,
    observable,
    pure_state,
)


@dataclass(frozen=True)
class IntegerDistribution:
    """Probability mass function on a contiguous integer window.

    probs[i] is the mass at integer offset + i.
    """

    offset: int
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))

    @property
    def support_min(self) -> int:
        return self.offset

    @property
    def support_max(self) -> int:
        return self.offset + len(self.probs) - 1

    def mean(self) -> float:
        n = self.offset + np.arange(len(self.probs))
        return float(np.sum(n * self.probs))

    def variance(self) -> float:
        n = self.offset + np.arange(len(self.probs))
        m = np.sum(n * self.probs)
        return float(np.sum((n - m) ** 2 * self.probs))

    def support(self, cutoff: float = 0.0) -> np.ndarray:
        """Integers carrying mass above cutoff."""
        idx = np.nonzero(self.probs > cutoff)[0]
        return idx + self.offset


def integer_distribution(offset: int, probs,
                         tols: Tolerances = DEFAULT) -> IntegerDistribution:
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise ValidationError("probs must be a nonempty 1-D array")
    if np.min(probs) < -tols.prob:
        raise ValidationError(f"negative mass {np.min(probs):.3e}")
    total = float(np.sum(probs))
    if abs(total - 1.0) > tols.prob:
        raise ValidationError(f"mass sums to {total:.15f}, expected 1")
    return IntegerDistribution(offset=int(offset),
                               probs=np.clip(probs, 0.0, None))


@dataclass(frozen=True)
class PeriodicClockState:
    """A pure state with its integer energy occupation data.

    levels are the occupied integers after shifting the lowest occupied
    level to 0; period is tau divided by the gcd of the levels (0.0 flags
    an energy eigenstate, which never moves).
    """

    state: PureState
    hamiltonian: HermitianObservable
    tau: float
    levels: tuple
    distribution: IntegerDistribution
    period: float


@dataclass(frozen=True)
class TranslatedPoisson:
    """Integer-shifted Poisson matching a target mean and variance.

    Z = shift + Poisson(sigma2 + gamma) has mean mu exactly and variance
    in [sigma2, sigma2 + 1); dist holds the tail-truncated window.
    """

    mu: float
    sigma2: float
    shift: int
    gamma: float
    dist: IntegerDistribution


@dataclass(frozen=True)
class BarbourTerms:
    """Per-copy ingredients of the translated-Poisson approximation bound."""

    a: float      # per-copy standard deviation
    b: float      # smoothness term nu
    c: float      # phi / variance
    phi: float
    nu: float


def extract_distribution(psi, H, tau: float,
                         tols: Tolerances = DEFAULT) -> PeriodicClockState:
    """Integer energy distribution of psi under H for reference period tau.

    Occupied eigenvalues must sit on the grid E_min + (2*pi/tau) * n within
    level_rel grid units, else IncommensurateSpectrum.  The lowest occupied
    level maps to n = 0.
    """
    if tau <= 0:
        raise ValidationError(f"tau must be positive, got {tau}")
    if not isinstance(psi, PureState):
        psi = pure_state(psi, tols)
    Hm = obs_matrix(H)
    if Hm.shape[0] != psi.dim:
        raise ValidationError("state and Hamiltonian dimensions differ")
    w, V = eig_hermitian(Hm, tols)
    amps = V.conj().T @ psi.vector
    weights = np.abs(amps) ** 2

    # accumulate weight per (possibly degenerate) eigenvalue group
    energies = []
    masses = []
    for g in group_levels(w, tols.gap_cutoff):
        mass = float(np.sum(weights[g]))
        if mass > tols.prob:
            energies.append(float(np.mean(w[g])))
            masses.append(mass)
    unit = 2.0 * math.pi / tau
    e_min = min(energies)
    ns = []
    for e in energies:
        x = (e - e_min) / unit
        n = round(x)
        if abs(x - n) > tols.level_rel:
            raise IncommensurateSpectrumError(
                f"occupied level offset {x:.12g} grid units from integer"
            )
        ns.append(int(n))

    width = max(ns) + 1
    probs = np.zeros(width)
    for n, mass in zip(ns, masses):
        probs[n] += mass
    probs = probs / probs.sum()
    dist = integer_distribution(0, probs, tols)
    nz = [n for n in sorted(ns) if n != 0]
    g = 0
    for n in nz:
        g = math.gcd(g, n)
    per = 0.0 if g == 0 else tau / g
    return PeriodicClockState(state=psi, hamiltonian=observable(Hm, tols),
                              tau=tau, levels=tuple(sorted(set(ns))),
                              distribution=dist, period=per)


def period(psi, H, tau_ref: float, tols: Tolerances = DEFAULT) -> float:
    """Recurrence time of psi under H: tau_ref / gcd(occupied levels).

    Returns 0.0 for energy eigenstates (stationary, no period).
    """
    return extract_distribution(psi, H, tau_ref, tols).period


def shift(p: IntegerDistribution, k: int) -> IntegerDistribution:
    return IntegerDistribution(offset=p.offset + int(k), probs=p.probs)


def _convolve(p: IntegerDistribution,
              q: IntegerDistribution) -> IntegerDistribution:
    return IntegerDistribution(offset=p.offset + q.offset,
                               probs=np.convolve(p.probs, q.probs))


def convolve_n(p: IntegerDistribution, m: int) -> IntegerDistribution:
    """Exact m-fold convolution by repeated squaring."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    result = None
    base = p
    k = m
    while k:
        if k & 1:
            result = base if result is None else _convolve(result, base)
        k >>= 1
        if k:
            base = _convolve(base, base)
    return result


def tv_distance(p: IntegerDistribution, q: IntegerDistribution) -> float:
    """Total variation distance, windows aligned by their offsets."""
    lo = min(p.offset, q.offset)
    hi = max(p.support_max, q.support_max)
    a = np.zeros(hi - lo + 1)
    b = np.zeros(hi - lo + 1)
    a[p.offset - lo: p.offset - lo + len(p.probs)] = p.probs
    b[q.offset - lo: q.offset - lo + len(q.probs)] = q.probs
    return float(0.5 * np.sum(np.abs(a - b)))


def overlap_copy_count(p: IntegerDistribution, L_max: int = 64,
                       tols: Tolerances = DEFAULT) -> int:
    """Copies needed before the convolution power can straddle a unit step.

    Writes 1 as a signed combination of the support offsets (relative to
    the lowest occupied integer) with as few terms as possible; that term
    count L certifies that p^{*L} and its unit shift share support, hence
    tv(p^{*L}, shift) < 1.  Found by breadth-first search over partial
    sums.  GcdNotOne when no combination exists (support gcd > 1);
    SearchExhausted when L_max copies do not suffice.
    """
    sup = p.support(cutoff=tols.prob)
    offs = sorted({int(n - sup[0]) for n in sup} - {0})
    if not offs:
        raise GcdNotOneError("point mass never overlaps its shift")
    g = 0
    for d in offs:
        g = math.gcd(g, d)
    if g != 1:
        raise GcdNotOneError(f"support offsets share factor {g}")
    steps = [d for d in offs] + [-d for d in offs]
    frontier = {0}
    seen = {0}
    bound = max(offs) * (L_max + 1)
    for level in range(1, L_max + 1):
        nxt = set()
        for x in frontier:
            for s in steps:
                y = x + s
                if y == 1:
                    return level
                if abs(y) <= bound and y not in seen:
                    seen.add(y)
                    nxt.add(y)
        frontier = nxt
    raise SearchExhaustedError(f"no combination within {L_max} copies")


def _poisson_window(lam: float, tail_eps: float):
    """Poisson(lam) pmf over a window whose discarded tails perturb the
    mean and variance by less than tail_eps.  Returns (k_lo, probs)."""
    if lam <= 0.0:
        return 0, np.array([1.0])
    if lam < 700.0:
        k_hi = int(lam + 20.0 * math.sqrt(lam + 1.0) + 30.0)
        ks = np.arange(k_hi + 1)
        pmf = np.empty(k_hi + 1)
        pmf[0] = math.exp(-lam)
        for k in range(1, k_hi + 1):
            pmf[k] = pmf[k - 1] * lam / k
    else:
        half = int(20.0 * math.sqrt(lam) + 30.0)
        k_lo0 = max(0, int(lam) - half)
        ks = np.arange(k_lo0, int(lam) + half + 1)
        logs = ks * math.log(lam) - lam - np.array(
            [math.lgamma(k + 1) for k in ks]
        )
        pmf = np.exp(logs)
    # trim each tail while its mean/variance impact stays under budget
    weight = pmf * (1.0 + np.abs(ks - lam) + (ks - lam) ** 2)
    budget = tail_eps / 2.0
    lo = 0
    acc = 0.0
    while lo < len(pmf) - 1 and acc + weight[lo] < budget:
        acc += weight[lo]
        lo += 1
    hi = len(pmf) - 1
    acc = 0.0
    while hi > lo and acc + weight[hi] < budget:
        acc += weight[hi]
        hi -= 1
    return int(ks[lo]), pmf[lo: hi + 1]


def translated_poisson(mu: float, sigma2: float,
                       tols: Tolerances = DEFAULT) -> TranslatedPoisson:
    """TP(mu, sigma2): Z = s + Poisson(sigma2 + gamma) with s = floor(mu -
    sigma2) and gamma the leftover fraction, so the mean is exactly mu and
    the variance lands in [sigma2, sigma2 + 1)."""
    if sigma2 < 0:
        raise ValidationError(f"sigma2 must be >= 0, got {sigma2}")
    s = math.floor(mu - sigma2)
    gamma = mu - sigma2 - s
    lam = sigma2 + gamma
    k_lo, pmf = _poisson_window(lam, tols.tail_eps)
    dist = IntegerDistribution(offset=s + k_lo, probs=pmf)
    return TranslatedPoisson(mu=mu, sigma2=sigma2, shift=s, gamma=gamma,
                             dist=dist)


def barbour_terms(p: IntegerDistribution,
                  tols: Tolerances = DEFAULT) -> BarbourTerms:
    """Per-copy quantities feeding barbour_bound.

    phi = E[X(X-1)] + (|mu - var|/var) E[(X-1)(X-2)] + E|X(X-1)(X-2)|/var;
    nu = min(1/2, 1 - tv(p, p shifted by 1)).
    """
    mu = p.mean()
    var = p.variance()
    if var < tols.prob:
        raise ZeroVarianceError("per-copy variance is zero")
    n = p.offset + np.arange(len(p.probs))
    e_ff = float(np.sum(p.probs * n * (n - 1)))
    e_gg = float(np.sum(p.probs * (n - 1) * (n - 2)))
    e_abs = float(np.sum(p.probs * np.abs(n * (n - 1) * (n - 2))))
    phi = e_ff + abs(mu - var) / var * e_gg + e_abs / var
    nu = min(0.5, 1.0 - tv_distance(p, shift(p, 1)))
    if nu <= 0.0:
        raise ZeroNuError(
            "distribution is disjoint from its unit shift; "
            "raise copies via overlap_copy_count first"
        )
    return BarbourTerms(a=math.sqrt(var), b=nu, c=phi / var, phi=phi, nu=nu)


def barbour_bound(p: IntegerDistribution, m: int,
                  tols: Tolerances = DEFAULT) -> float:
    """Total-variation bound between p^{*m} and TP(m mu, m var):
    c / sqrt(m b - 1/2) + 2 / (m a).  Infinite when m b <= 1/2."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    t = barbour_terms(p, tols)
    if m * t.b - 0.5 <= 0.0:
        return math.inf
    return t.c / math.sqrt(m * t.b - 0.5) + 2.0 / (m * t.a)


def tp_distance(p: IntegerDistribution, m: int,
                tols: Tolerances = DEFAULT) -> float:
    """tv(p^{*m}, TP(m mu, m var)): the quantity barbour_bound dominates."""
    conv = convolve_n(p, m)
    tp = translated_poisson(m * p.mean(), m * p.variance(), tols)
    return tv_distance(conv, tp.dist)


def poisson_distance_bound(sigma2: float, x: float) -> float:
    """Total-variation bound between Poisson(sigma2) and Poisson(sigma2+x):
    min(x, sqrt(2/e) (sqrt(sigma2+x) - sqrt(sigma2)))."""
    if sigma2 < 0 or x < 0:
        raise ValidationError("sigma2 and x must be >= 0")
    return min(x, math.sqrt(2.0 / math.e)
               * (math.sqrt(sigma2 + x) - math.sqrt(sigma2)))
