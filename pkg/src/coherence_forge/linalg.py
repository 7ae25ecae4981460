"""Hermitian linear algebra core shared by every other module.

Wraps numpy's Hermitian eigensolver with explicit validation (Hermiticity,
reconstruction residual) and provides the state / observable containers,
tensor-product helpers, energy dephasing, and the JSON wire format for
matrices and vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    DimMismatchError,
    NonHermitianError,
    SchemaError,
    ValidationError,
)


def require_square(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimMismatchError(f"expected a square matrix, got shape {M.shape}")
    return M


def eig_hermitian(M, tols: Tolerances = DEFAULT):
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, V) with w ascending and columns of V the matching
    orthonormal eigenvectors.  Raises NonHermitianError if M is not
    Hermitian within tols.herm, and ValidationError if the reconstruction
    V diag(w) V^dag misses M by more than tols.recon (which would indicate
    a solver failure, not bad input).
    """
    M = require_square(M)
    if M.size and np.max(np.abs(M - M.conj().T)) > tols.herm:
        raise NonHermitianError(
            f"matrix deviates from Hermiticity by "
            f"{np.max(np.abs(M - M.conj().T)):.3e}"
        )
    Msym = 0.5 * (M + M.conj().T)
    w, V = np.linalg.eigh(Msym)
    resid = np.max(np.abs(V @ np.diag(w) @ V.conj().T - Msym)) if M.size else 0.0
    if resid > tols.recon:
        raise ValidationError(f"eigendecomposition residual {resid:.3e}")
    return w, V


def psd_sqrt(M, tols: Tolerances = DEFAULT):
    """Square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-tols.psd, 0) are treated as zero.
    """
    w, V = eig_hermitian(M, tols)
    if w.size and w[0] < -tols.psd:
        raise ValidationError(f"matrix has a negative eigenvalue {w[0]:.3e}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def tensor(*ops) -> np.ndarray:
    """Kronecker product of the given matrices (or vectors), left to right."""
    if not ops:
        raise ValidationError("tensor() needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(M, dims, keep) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    dims = (dA, dB); keep = 0 (or "A") keeps the first factor, 1 (or "B")
    the second.
    """
    M = require_square(M)
    dA, dB = int(dims[0]), int(dims[1])
    if dA * dB != M.shape[0]:
        raise DimMismatchError(
            f"dims {dims} inconsistent with matrix of size {M.shape[0]}"
        )
    if keep in ("A", "a"):
        keep = 0
    elif keep in ("B", "b"):
        keep = 1
    if keep not in (0, 1):
        raise ValidationError(f"keep must be 0/1/'A'/'B', got {keep!r}")
    T = M.reshape(dA, dB, dA, dB)
    if keep == 0:
        return np.einsum("ijkj->ik", T)
    return np.einsum("ijil->jl", T)


def noninteracting_hamiltonian(terms) -> np.ndarray:
    """Sum_i I x ... x H_i x ... x I for local terms acting on a chain."""
    terms = [require_square(h) for h in terms]
    dims = [h.shape[0] for h in terms]
    total = np.zeros((int(np.prod(dims)), int(np.prod(dims))), dtype=complex)
    for i, h in enumerate(terms):
        left = np.eye(int(np.prod(dims[:i])))
        right = np.eye(int(np.prod(dims[i + 1:])))
        total += tensor(left, h, right)
    return total


def group_levels(w, gap_cutoff: float):
    """Partition a sorted eigenvalue array into degenerate groups.

    Consecutive values closer than gap_cutoff land in the same group.
    Returns a list of index arrays.
    """
    w = np.asarray(w, dtype=float)
    if w.size == 0:
        return []
    groups = [[0]]
    for i in range(1, w.size):
        if w[i] - w[groups[-1][0]] < gap_cutoff and w[i] - w[i - 1] < gap_cutoff:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.asarray(g, dtype=int) for g in groups]


def dephase(rho, H, tols: Tolerances = DEFAULT) -> np.ndarray:
    """Project a state onto the eigenspaces of H (pinching).

    Eigenvalues of H within tols.gap_cutoff of each other count as the
    same level, so exact degeneracies survive intact.
    """
    rho = require_square(state_matrix(rho))
    w, V = eig_hermitian(obs_matrix(H), tols)
    if w.size != rho.shape[0]:
        raise DimMismatchError("state and Hamiltonian dimensions differ")
    rt = V.conj().T @ rho @ V
    out = np.zeros_like(rt)
    for g in group_levels(w, tols.gap_cutoff):
        out[np.ix_(g, g)] = rt[np.ix_(g, g)]
    return V @ out @ V.conj().T


def fidelity(rho, sigma, tols: Tolerances = DEFAULT) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].

    For a pure rho this reduces to sqrt(<psi|sigma|psi>).
    """
    rho = state_matrix(rho)
    sigma = state_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimMismatchError("states have different dimensions")
    sq = psd_sqrt(rho, tols)
    inner = sq @ sigma @ sq
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def trace_distance(rho, sigma) -> float:
    """Unnormalized 1-norm ||rho - sigma||_1, in [0, 2] for states.

    Computed as the sum of absolute eigenvalues of the Hermitian
    difference.
    """
    rho = state_matrix(rho)
    sigma = state_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimMismatchError("states have different dimensions")
    w = np.linalg.eigvalsh(rho - sigma)
    return float(np.sum(np.abs(w)))


# ---------------------------------------------------------------------------
# containers


@dataclass(frozen=True)
class HermitianObservable:
    """Validated Hermitian matrix with a cached eigendecomposition.

    spectrum is ascending; eigenbasis columns align with it.
    """

    matrix: np.ndarray
    spectrum: np.ndarray = field(repr=False)
    eigenbasis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix.

    spectrum is descending (largest population first); eigenbasis columns
    align with it.  support_rank counts eigenvalues above rank_cutoff.
    """

    matrix: np.ndarray
    spectrum: np.ndarray = field(repr=False)
    eigenbasis: np.ndarray = field(repr=False)
    support_rank: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def support_projector(self) -> np.ndarray:
        Vs = self.eigenbasis[:, : self.support_rank]
        return Vs @ Vs.conj().T


@dataclass(frozen=True)
class PureState:
    """Normalized state vector."""

    vector: np.ndarray

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def density(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())


def observable(M, tols: Tolerances = DEFAULT) -> HermitianObservable:
    w, V = eig_hermitian(M, tols)
    return HermitianObservable(matrix=np.asarray(M, dtype=complex), spectrum=w,
                               eigenbasis=V)


def density_matrix(M, tols: Tolerances = DEFAULT) -> DensityMatrix:
    M = require_square(M)
    w, V = eig_hermitian(M, tols)
    if abs(np.sum(w) - 1.0) > tols.trace:
        raise ValidationError(f"trace is {np.sum(w):.12f}, expected 1")
    if w[0] < -tols.psd:
        raise ValidationError(f"negative eigenvalue {w[0]:.3e}")
    # flip to descending
    w = w[::-1].copy()
    V = V[:, ::-1].copy()
    rank = int(np.count_nonzero(w > tols.rank_cutoff))
    return DensityMatrix(matrix=M, spectrum=w, eigenbasis=V, support_rank=rank)


def pure_state(v, tols: Tolerances = DEFAULT) -> PureState:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimMismatchError(f"expected a vector, got shape {v.shape}")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tols.norm:
        raise ValidationError(f"norm is {n:.12f}, expected 1")
    return PureState(vector=v / n)


def state_matrix(x) -> np.ndarray:
    """Coerce DensityMatrix / PureState / vector / matrix to a density matrix
    as a plain ndarray. No validation beyond shape."""
    if isinstance(x, DensityMatrix):
        return x.matrix
    if isinstance(x, PureState):
        return x.density()
    a = np.asarray(x, dtype=complex)
    if a.ndim == 1:
        return np.outer(a, a.conj())
    return require_square(a)


def obs_matrix(x) -> np.ndarray:
    """Coerce HermitianObservable / matrix to a plain ndarray."""
    if isinstance(x, HermitianObservable):
        return x.matrix
    return require_square(x)


# ---------------------------------------------------------------------------
# seeded samplers


def random_observable(d: int, rng) -> np.ndarray:
    """Gaussian Hermitian matrix, entries O(1)."""
    rng = np.random.default_rng(rng)
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (G + G.conj().T) / 2.0


def random_density(d: int, rng, rank: int | None = None) -> np.ndarray:
    """Random density matrix: G G^dag / tr for a Gaussian d x rank factor."""
    rng = np.random.default_rng(rng)
    if rank is None:
        rank = d
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    M = G @ G.conj().T
    return M / np.trace(M).real


def random_pure(d: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# JSON wire format


def array_to_json(a) -> dict:
    """Encode a vector or matrix as {"dim": n, "re": ..., "im": ...}."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return {"dim": int(a.shape[0]), "re": a.real.tolist(),
                "im": a.imag.tolist()}
    if a.ndim == 2 and a.shape[0] == a.shape[1]:
        return {"dim": int(a.shape[0]), "re": a.real.tolist(),
                "im": a.imag.tolist()}
    raise DimMismatchError(f"cannot encode array of shape {a.shape}")


def array_from_json(obj) -> np.ndarray:
    """Decode the wire format back into a 1-D or 2-D complex ndarray."""
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}")
    for key in ("dim", "re", "im"):
        if key not in obj:
            raise SchemaError(f"missing key {key!r}")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"non-numeric payload: {exc}") from exc
    if re.shape != im.shape:
        raise SchemaError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    if re.ndim == 1:
        if re.shape != (dim,):
            raise SchemaError(f"vector length {re.shape[0]} != dim {dim}")
    elif re.ndim == 2:
        if re.shape != (dim, dim):
            raise SchemaError(f"matrix shape {re.shape} != ({dim}, {dim})")
    else:
        raise SchemaError(f"payload must be 1-D or 2-D, got {re.ndim}-D")
    return re + 1j * im
