"""Defect grams, defect indices, defect-space inclusion and the Douglas constant.

For ``T = S_k + F`` the operators ``I - T*T`` and ``I - TT*`` vanish
outside finite blocks determined by ``C`` alone:

    I - T*T  = I_d     - C* C     (on e_0..e_{d-1})
    I - TT*  = I_{d+k} - C C*     (on e_0..e_{d+k-1})

and likewise for powers with ``C`` replaced by the stage block ``F_r``.
Ranges of the defect operators are identified with column spaces of
these blocks, so no matrix square roots are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import (
    DEFAULT_TOL,
    Tolerance,
    column_space_contained,
    hermitian_eigen,
    is_psd,
    matrix_rank,
)
from .model import OperatorSpec, stage_block


@dataclass(frozen=True, eq=False)
class DefectGrams:
    G_T: np.ndarray      # d x d block of I - T*T
    G_Tstar: np.ndarray  # (d+k) x (d+k) block of I - TT*


@dataclass(frozen=True, eq=False)
class StageDefectGrams:
    r: int
    G_r: np.ndarray  # d x d block of I - T*^r T^r
    H_r: np.ndarray  # (d+rk) x (d+rk) block of I - T^r T*^r


def _gram_pair(M: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    G = np.eye(d) - M.conj().T @ M
    H = np.eye(M.shape[0]) - M @ M.conj().T
    return 0.5 * (G + G.conj().T), 0.5 * (H + H.conj().T)


def embed(M, size: int) -> np.ndarray:
    """Pad a square matrix with zeros into the top-left of ``size x size``."""
    M = np.asarray(M, dtype=np.complex128)
    out = np.zeros((size, size), dtype=np.complex128)
    out[: M.shape[0], : M.shape[1]] = M
    return out


def defect_grams(spec: OperatorSpec) -> DefectGrams:
    G, H = _gram_pair(spec.C, spec.d)
    return DefectGrams(G, H)


def stage_defect_grams(spec: OperatorSpec, r: int) -> StageDefectGrams:
    G, H = _gram_pair(stage_block(spec, r), spec.d)
    return StageDefectGrams(int(r), G, H)


def commutator_block(spec: OperatorSpec) -> np.ndarray:
    """The ``(d+k) x (d+k)`` block carrying ``T*T - TT*``; zero elsewhere."""
    g = defect_grams(spec)
    return g.G_Tstar - embed(g.G_T, spec.d + spec.k)


def defect_dimensions(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> tuple[int, int]:
    g = defect_grams(spec)
    return matrix_rank(g.G_T, tol), matrix_rank(g.G_Tstar, tol)


def defect_inclusion(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    g = defect_grams(spec)
    return column_space_contained(embed(g.G_T, spec.d + spec.k), g.G_Tstar, tol)


def douglas_lambda(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> float | None:
    """Least ``lam >= 0`` with ``embed(G_T) <= lam * G_Tstar``, or ``None``.

    Computed as the largest eigenvalue of ``W* embed(G_T) W`` where ``W``
    whitens ``G_Tstar`` on its numerical range. ``None`` is returned when
    the range inclusion fails or when ``G_Tstar`` is not PSD (no
    whitening exists for a non-contraction).
    """
    if not defect_inclusion(spec, tol):
        return None
    g = defect_grams(spec)
    if not is_psd(g.G_Tstar, tol):
        return None
    E = embed(g.G_T, spec.d + spec.k)
    w, U = hermitian_eigen(g.G_Tstar)
    keep = w > tol.eps_rank * max(w[-1], 0.0)
    if not np.any(keep):
        return 0.0
    W = U[:, keep] / np.sqrt(w[keep])
    R = W.conj().T @ E @ W
    top = float(np.linalg.eigvalsh(0.5 * (R + R.conj().T))[-1])
    return max(top, 0.0)


def joint_kernel_dims(spec: OperatorSpec, r_max: int, tol: Tolerance = DEFAULT_TOL) -> list[int]:
    """Dimension of the window-restricted common equality set, per stage.

    Entry ``r - 1`` is the dimension of the set of ``x`` supported on
    e_0..e_{d+rk-1} with ``G_s x = 0`` and ``H_s x = 0`` for every
    ``s <= r``, i.e. ``||F_s x|| = ||P_d x||`` and
    ``||F_s* x|| = ||P_{d+sk} x||`` simultaneously. Diagnostic only: the
    newest ``k`` window coordinates are only weakly constrained.
    """
    d, k = spec.d, spec.k
    dims = []
    rows: list[np.ndarray] = []
    for r in range(1, r_max + 1):
        width = d + r * k
        sg = stage_defect_grams(spec, r)
        rows = [np.pad(R, ((0, 0), (0, k))) for R in rows]
        rows.append(np.pad(sg.G_r, ((0, 0), (0, width - d))))
        rows.append(sg.H_r)
        dims.append(width - matrix_rank(np.vstack(rows), tol))
    return dims
