"""Tolerance-parameterised numerical primitives.

Every semidefinite, rank, and eigenspace decision in the package goes
through this module so that one :class:`Tolerance` governs all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Decision thresholds.

    eps_psd
        PSD slack, relative to ``max(1, ||M||)``.
    eps_rank
        Singular-value cut-off, relative to the largest singular value.
    eps_eig
        Radius within which computed eigenvalues are merged.
    """

    eps_psd: float = 1e-9
    eps_rank: float = 1e-9
    eps_eig: float = 1e-8

    def __post_init__(self):
        for name in ("eps_psd", "eps_rank", "eps_eig"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {val!r}")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: complex
    vectors: np.ndarray = field(repr=False)  # columns, orthonormal

    @property
    def multiplicity(self) -> int:
        return self.vectors.shape[1]


def _square(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def _check_hermitian(M) -> np.ndarray:
    M = _square(M)
    if M.size:
        scale = 1.0 + np.max(np.abs(M))
        if np.max(np.abs(M - M.conj().T)) > 1e-10 * scale:
            raise ValueError("matrix is not Hermitian")
    return M


def hermitian_eigen(M) -> tuple[np.ndarray, np.ndarray]:
    """Ascending real eigenvalues and a unitary eigenvector matrix."""
    M = _check_hermitian(M)
    H = 0.5 * (M + M.conj().T)
    w, V = np.linalg.eigh(H)
    return w, V


def min_eigenvalue(M) -> float:
    M = _check_hermitian(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])


def psd_threshold(M, tol: Tolerance = DEFAULT_TOL) -> float:
    M = np.asarray(M)
    norm = float(np.linalg.norm(M, 2)) if M.size else 0.0
    return tol.eps_psd * max(1.0, norm)


def is_psd(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    return min_eigenvalue(M) >= -psd_threshold(M, tol)


def singular_values(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def matrix_rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.eps_rank * s[0]))


def kernel_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical right kernel of ``M``."""
    M = np.asarray(M, dtype=np.complex128)
    n = M.shape[1]
    if M.shape[0] == 0 or not np.any(M):
        return np.eye(n, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > tol.eps_rank * s[0]))
    return Vh[rank:].conj().T


def orth(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical column space of ``M``."""
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0 or not np.any(M):
        return np.zeros((M.shape[0], 0), dtype=np.complex128)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > tol.eps_rank * s[0]))
    return U[:, :rank]


def column_space_contained(A, B, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``range(A)`` is (numerically) inside ``range(B)``."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row counts differ: {A.shape[0]} vs {B.shape[0]}")
    return matrix_rank(np.hstack([A, B]), tol) == matrix_rank(B, tol)


def _group(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of complex values within ``radius``."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def general_eigen(M, tol: Tolerance = DEFAULT_TOL, values=None) -> list[EigenPair]:
    """Eigenvalues of a square matrix with numerical eigenspace bases.

    Eigenvalues closer than ``tol.eps_eig`` are merged and represented by
    their mean. Each eigenspace is the numerical kernel of ``M - lam I``;
    if that comes back empty (a badly split defective eigenvalue), the
    orthonormalised eigenvectors returned by LAPACK are used instead.

    ``values`` optionally restricts the computation to a precomputed subset
    of the eigenvalues of ``M``.
    """
    M = _square(M)
    n = M.shape[0]
    if n == 0:
        return []
    w, V = np.linalg.eig(M)
    if values is not None:
        keep = [int(np.argmin(np.abs(w - v))) for v in values]
        w, V = w[keep], V[:, keep]
    pairs = []
    for idx in _group(w, tol.eps_eig):
        lam = complex(np.mean(w[idx]))
        K = kernel_basis(M - lam * np.eye(n), tol)
        if K.shape[1] == 0:
            K = orth(V[:, idx], tol)
        pairs.append(EigenPair(lam, K))
    pairs.sort(key=lambda p: (-abs(p.value), p.value.real, p.value.imag))
    return pairs
