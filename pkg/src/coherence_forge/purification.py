"""Minimal-variance purifications and variance-optimal pure ensembles.

Given rho on S with Hamiltonian H_S, there is a purification |Phi> on S x A
and an auxiliary Hamiltonian H_A such that the total energy variance of
|Phi> under H_S x I + I x H_A equals qfi(rho, H_S)/4, the minimum over all
purifications.  Measuring A in the eigenbasis of that optimal H_A collapses
|Phi> into a pure ensemble for rho whose average variance also equals F/4
(the convex-roof value).

Conventions used throughout: (p, V) is the eigendecomposition of rho with
degenerate eigenspaces rotated so that H_S is diagonal inside each block
(this pins down an otherwise arbitrary basis choice), S = V^dag H_S V, and
the purification is |Phi> = sum_i sqrt(p_i) |phi_i> x |phi_i> with the
*unconjugated* copy, so A-side operators built from coordinate formulas
must be transposed in this basis before rotating back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimMismatchError, PeriodMismatchError
from .linalg import (
    HermitianObservable,
    PureState,
    eig_hermitian,
    group_levels,
    obs_matrix,
    observable,
    pure_state,
    state_matrix,
    tensor,
)
from .measures import energy_variance, qfi


@dataclass(frozen=True)
class Purification:
    joint_state: PureState
    aux_hamiltonian: HermitianObservable
    total_hamiltonian: HermitianObservable
    total_variance: float


@dataclass(frozen=True)
class PureEnsemble:
    weights: np.ndarray
    states: list
    average_variance: float

    def mixture(self) -> np.ndarray:
        out = np.zeros((self.states[0].dim, self.states[0].dim), dtype=complex)
        for w, st in zip(self.weights, self.states):
            out += w * st.density()
        return out


def aligned_eigensystem(rho, H, tols: Tolerances = DEFAULT):
    """Eigendecomposition of rho with H diagonalized inside each degenerate
    eigenspace of rho.  Returns (p ascending, V)."""
    rho = state_matrix(rho)
    H = obs_matrix(H)
    if rho.shape != H.shape:
        raise DimMismatchError("state and Hamiltonian dimensions differ")
    p, V = eig_hermitian(rho, tols)
    for g in group_levels(p, tols.gap_cutoff):
        if len(g) < 2:
            continue
        block = V[:, g].conj().T @ H @ V[:, g]
        _, Q = eig_hermitian(block, tols)
        V[:, g] = V[:, g] @ Q
    return p, V


def canonical_purification(rho, tols: Tolerances = DEFAULT) -> PureState:
    """|Phi> = sum_i sqrt(p_i) |phi_i> x |phi_i| on S x A.

    Both marginals equal rho (the A marginal in the same matrix
    representation, since the copy is unconjugated and the basis
    orthonormal).
    """
    rho = state_matrix(rho)
    p, V = eig_hermitian(rho, tols)
    d = rho.shape[0]
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if p[i] <= 0.0:
            continue
        phi += np.sqrt(p[i]) * np.kron(V[:, i], V[:, i])
    return pure_state(phi, tols)


def _coordinate_aux(p, S, tols: Tolerances) -> np.ndarray:
    """Optimal H_A in rho-eigenbasis coordinates (before transposing).

    Entry [j, i] = -2 sqrt(p_i p_j)/(p_i + p_j) * S_ij; pairs with
    p_i + p_j below pair_cutoff sit in the kernel and are zeroed.
    """
    tot = p[:, None] + p[None, :]
    geo = np.sqrt(np.outer(np.clip(p, 0.0, None), np.clip(p, 0.0, None)))
    M = np.zeros_like(tot)
    np.divide(geo, tot, out=M, where=tot > tols.pair_cutoff)
    return -2.0 * M * S


def optimal_aux_hamiltonian(rho, H_S, tols: Tolerances = DEFAULT) -> np.ndarray:
    """Auxiliary Hamiltonian minimizing the purification's total variance.

    Returned in the computational basis of A (A carries the same basis
    labels as S through the unconjugated purification, hence the
    transpose of the coordinate formula).  Shifted by a multiple of the
    identity so the purification's mean total energy is zero.
    """
    p, V = aligned_eigensystem(rho, H_S, tols)
    S = V.conj().T @ obs_matrix(H_S) @ V
    coeff = _coordinate_aux(p, S, tols)
    H_A = V @ coeff.T @ V.conj().T
    # mean total energy of the purification: tr(rho H_S) + tr(rho_A H_A)
    rho_m = state_matrix(rho)
    shift = np.trace(rho_m @ obs_matrix(H_S)).real + np.trace(rho_m @ H_A).real
    return H_A - shift * np.eye(p.size)


def kkt_residual(rho, H_S, H_A=None, tols: Tolerances = DEFAULT) -> float:
    """Stationarity residual of the variance-minimization problem.

    In rho-eigenbasis coordinates with D = diag(p) and S = V^dag H_S V,
    the optimal auxiliary Hamiltonian satisfies

        (A^T D + D A^T)/2 + sqrt(D) S sqrt(D) = 0,

    where A = V^dag H_A V and the transpose reflects the A-side index
    flip of the purification.  Returns the max-abs violation (mean-energy
    shifts drop out, so the identity component of H_A is projected away
    on the support first).
    """
    if H_A is None:
        H_A = optimal_aux_hamiltonian(rho, H_S, tols)
    p, V = aligned_eigensystem(rho, H_S, tols)
    S = V.conj().T @ obs_matrix(H_S) @ V
    A = V.conj().T @ obs_matrix(H_A) @ V
    # re-gauge to the zero-mean-energy convention the identity assumes
    rho_m = state_matrix(rho)
    shift = np.trace(rho_m @ obs_matrix(H_S)).real \
        + np.trace(rho_m @ obs_matrix(H_A)).real
    A = A - shift * np.eye(p.size)
    D = np.diag(np.clip(p, 0.0, None))
    sq = np.sqrt(D)
    At = A.T
    resid = 0.5 * (At @ D + D @ At) + sq @ S @ sq
    return float(np.max(np.abs(resid)))


def build_optimal_purification(rho, H_S,
                               tols: Tolerances = DEFAULT) -> Purification:
    """Assemble the minimal-variance purification of rho under H_S."""
    p, V = aligned_eigensystem(rho, H_S, tols)
    d = p.size
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if p[i] <= 0.0:
            continue
        phi += np.sqrt(p[i]) * np.kron(V[:, i], V[:, i])
    H_A = optimal_aux_hamiltonian(rho, H_S, tols)
    H_tot = tensor(obs_matrix(H_S), np.eye(d)) + tensor(np.eye(d), H_A)
    joint = pure_state(phi, tols)
    var = energy_variance(joint.vector, H_tot, tols)
    return Purification(joint_state=joint,
                        aux_hamiltonian=observable(H_A, tols),
                        total_hamiltonian=observable(H_tot, tols),
                        total_variance=var)


def aux_qfi(rho, H_S, tols: Tolerances = DEFAULT) -> float:
    """QFI of rho with respect to the optimal auxiliary Hamiltonian,
    via the closed form sum 8 p_i p_j (p_i - p_j)^2 / (p_i + p_j)^3 |S_ij|^2."""
    p, V = aligned_eigensystem(rho, H_S, tols)
    S = V.conj().T @ obs_matrix(H_S) @ V
    tot = p[:, None] + p[None, :]
    num = 8.0 * np.outer(p, p) * (p[:, None] - p[None, :]) ** 2
    terms = np.zeros_like(tot)
    np.divide(num, tot ** 3, out=terms, where=tot > tols.pair_cutoff)
    return float(np.sum(terms * np.abs(S) ** 2))


def transpose_purification_variance(rho, H_S,
                                    tols: Tolerances = DEFAULT) -> float:
    """Total variance of the canonical purification with H_A chosen as the
    negated transpose of H_S in the rho eigenbasis.

    This suboptimal but simple choice gives exactly twice the skew
    information, an upper reference point for the optimal variance.
    """
    p, V = aligned_eigensystem(rho, H_S, tols)
    d = p.size
    S = V.conj().T @ obs_matrix(H_S) @ V
    H_A = V @ (-S.T) @ V.conj().T
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if p[i] <= 0.0:
            continue
        phi += np.sqrt(p[i]) * np.kron(V[:, i], V[:, i])
    H_tot = tensor(obs_matrix(H_S), np.eye(d)) + tensor(np.eye(d), H_A)
    return energy_variance(phi, H_tot, tols)


def optimal_ensemble(rho, H_S, tols: Tolerances = DEFAULT) -> PureEnsemble:
    """Pure ensemble of rho achieving average variance qfi/4.

    Obtained by measuring the A side of the optimal purification in the
    eigenbasis of the auxiliary Hamiltonian; outcome k has weight
    ||<E_k|Phi>||^2 and leaves S in the corresponding conditional state.
    """
    p, V = aligned_eigensystem(rho, H_S, tols)
    d = p.size
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if p[i] <= 0.0:
            continue
        phi += np.sqrt(p[i]) * np.kron(V[:, i], V[:, i])
    H_A = optimal_aux_hamiltonian(rho, H_S, tols)
    _, U = eig_hermitian(H_A, tols)
    phi_mat = phi.reshape(d, d)          # [s, a] amplitudes
    weights = []
    states = []
    for k in range(d):
        eta = phi_mat @ U[:, k].conj()
        w = float(np.vdot(eta, eta).real)
        if w <= tols.pair_cutoff:
            continue
        weights.append(w)
        states.append(pure_state(eta / np.sqrt(w), tols))
    weights = np.asarray(weights)
    weights = weights / weights.sum()
    avg = float(sum(w * energy_variance(st.vector, obs_matrix(H_S), tols)
                    for w, st in zip(weights, states)))
    return PureEnsemble(weights=weights, states=states, average_variance=avg)


def coherence_sectors(rho, H, tau: float, tols: Tolerances):
    """Partition the eigenspaces of H into groups linked by coherence of rho.

    Returns (sector projectors, integer level per eigenspace group,
    gcd of coherence-gap integers).  Raises PeriodMismatchError when an
    occupied coherence gap is not an integer multiple of 2*pi/tau.
    """
    rho = state_matrix(rho)
    H = obs_matrix(H)
    w, V = eig_hermitian(H, tols)
    groups = group_levels(w, tols.gap_cutoff)
    rt = V.conj().T @ rho @ V
    n_groups = len(groups)
    unit = 2.0 * np.pi / tau

    # adjacency: nonzero coherence between eigenspace groups
    parent = list(range(n_groups))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gap_ints = []
    for g in range(n_groups):
        for h in range(g + 1, n_groups):
            block = rt[np.ix_(groups[g], groups[h])]
            if np.max(np.abs(block)) <= tols.rank_cutoff:
                continue
            gap = w[groups[h][0]] - w[groups[g][0]]
            k = round(gap / unit)
            if abs(gap - k * unit) > tols.level_rel * unit:
                raise PeriodMismatchError(
                    f"coherence gap {gap:.6g} is not a multiple of 2*pi/tau"
                )
            gap_ints.append(abs(int(k)))
            parent[find(g)] = find(h)

    sectors = {}
    for g in range(n_groups):
        sectors.setdefault(find(g), []).append(g)
    projectors = []
    for members in sectors.values():
        idx = np.concatenate([groups[m] for m in members])
        P = np.zeros_like(rho)
        Vv = V[:, idx]
        P += Vv @ Vv.conj().T
        projectors.append(P)
    gcd = 0
    for k in gap_ints:
        gcd = np.gcd(gcd, k)
    return projectors, int(gcd)


def period_respecting_ensemble(rho, H, tau: float,
                               tols: Tolerances = DEFAULT) -> PureEnsemble:
    """Variance-optimal ensemble whose members are each tau-periodic.

    Requires rho itself to have full period tau (coherence-gap integers
    with gcd 1); incoherent rho is accepted trivially.  Each member of
    the optimal ensemble is split across the coherence sectors of rho;
    since rho carries no cross-sector coherence the split ensemble still
    averages to rho, and convex-roof minimality forces the average
    variance to stay at qfi/4 exactly.
    """
    projectors, gcd = coherence_sectors(rho, H, tau, tols)
    if gcd > 1:
        raise PeriodMismatchError(
            f"state period is tau/{gcd}, not tau"
        )
    base = optimal_ensemble(rho, H, tols)
    weights = []
    states = []
    H_m = obs_matrix(H)
    for w, st in zip(base.weights, base.states):
        for P in projectors:
            comp = P @ st.vector
            wc = float(np.vdot(comp, comp).real) * w
            if wc <= tols.pair_cutoff:
                continue
            weights.append(wc)
            states.append(pure_state(comp / np.linalg.norm(comp), tols))
    weights = np.asarray(weights)
    weights = weights / weights.sum()
    avg = float(sum(wc * energy_variance(st.vector, H_m, tols)
                    for wc, st in zip(weights, states)))
    return PureEnsemble(weights=weights, states=states, average_variance=avg)
