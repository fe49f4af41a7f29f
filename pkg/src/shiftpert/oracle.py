"""Dense-truncation cross-checks and seeded random instances.

Everything here works from ``truncate(spec, N)`` and dense matrix
products, independently of the closed-form block formulas it validates.
Comparisons skip the trailing window where truncation cuts the shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .defect import defect_grams, embed, joint_kernel_dims, stage_defect_grams
from .kernel import DEFAULT_TOL, Tolerance, is_psd, orth
from .model import OperatorSpec, build_operator, stage_block, truncate


@dataclass(frozen=True)
class OracleConfig:
    N: int | None = None  # None: d + (r+2)k + 8 for each check
    tol_match: float = 1e-10
    seed: int = 0

    def size(self, spec: OperatorSpec, r: int = 1) -> int:
        if self.N is not None:
            return self.N
        return spec.d + (r + 2) * spec.k + 8


@dataclass
class CheckResult:
    name: str
    passed: bool
    discrepancy: float
    detail: dict = field(default_factory=dict)


def _require(N: int, minimum: int, what: str):
    if N < minimum:
        raise ValueError(f"{what}: truncation N={N} below the required minimum {minimum}")


def dense_defect_check(spec: OperatorSpec, config: OracleConfig = OracleConfig()) -> CheckResult:
    """``I - T_N*T_N`` and ``I - T_N T_N*`` against the closed-form grams."""
    d, k = spec.d, spec.k
    N = config.size(spec)
    _require(N, d + 2 * k + 4, "dense_defect_check")
    T = truncate(spec, N)
    I = np.eye(N)
    inner = N - k
    g = defect_grams(spec)
    err_t = np.max(np.abs((I - T.conj().T @ T)[:inner, :inner] - embed(g.G_T, N)[:inner, :inner]))
    err_ts = np.max(np.abs((I - T @ T.conj().T)[:inner, :inner] - embed(g.G_Tstar, N)[:inner, :inner]))
    err = float(max(err_t, err_ts))
    return CheckResult(
        "defect", err <= config.tol_match, err, {"N": N, "err_DT": float(err_t), "err_DTstar": float(err_ts)}
    )


def power_decomposition_check(spec: OperatorSpec, r: int, config: OracleConfig = OracleConfig()) -> CheckResult:
    """Dense ``T_N^r`` against ``F_r`` plus the shifted identity ``S_k^r (I - P_d)``."""
    d, k = spec.d, spec.k
    N = config.size(spec, r)
    _require(N, d + (r + 1) * k + 4, "power_decomposition_check")
    P = np.linalg.matrix_power(truncate(spec, N), r)
    expected = np.zeros((N, N), dtype=np.complex128)
    expected[: d + r * k, :d] = stage_block(spec, r)
    cols = np.arange(d, N - r * k)
    expected[cols + r * k, cols] = 1.0
    inner = N - r * k
    err = float(np.max(np.abs(P[:, :inner] - expected[:, :inner])))
    return CheckResult(f"power r={r}", err <= config.tol_match, err, {"N": N, "r": r})


def stage_defect_check(spec: OperatorSpec, r: int, config: OracleConfig = OracleConfig()) -> CheckResult:
    """Dense ``I - T*^r T^r`` and ``I - T^r T*^r`` against the stage grams."""
    d, k = spec.d, spec.k
    N = config.size(spec, r)
    _require(N, d + (r + 1) * k + 4, "stage_defect_check")
    P = np.linalg.matrix_power(truncate(spec, N), r)
    I = np.eye(N)
    sg = stage_defect_grams(spec, r)
    inner = N - r * k
    err_g = np.max(np.abs((I - P.conj().T @ P)[:inner, :inner] - embed(sg.G_r, N)[:inner, :inner]))
    err_h = np.max(np.abs((I - P @ P.conj().T)[:inner, :inner] - embed(sg.H_r, N)[:inner, :inner]))
    err = float(max(err_g, err_h))
    return CheckResult(f"stage defect r={r}", err <= config.tol_match, err, {"N": N, "r": r})


@dataclass
class StageKernelReport:
    r: int
    psd_G: bool
    psd_H: bool
    joint_kernel_dim: int


def kernel_condition_check(
    spec: OperatorSpec, r: int, config: OracleConfig = OracleConfig(), tol: Tolerance = DEFAULT_TOL
) -> list[StageKernelReport]:
    """Stage inequalities ``||F_s x|| <= ||P_d x||``, ``||F_s* x|| <= ||P_{d+sk} x||``
    as PSD tests for ``s = 1..r``, with the window-restricted joint
    equality dimension for each ``s``."""
    if not is_psd(defect_grams(spec).G_T, tol):
        raise ValueError("kernel_condition_check requires a contraction")
    dims = joint_kernel_dims(spec, r, tol)
    out = []
    for s in range(1, r + 1):
        sg = stage_defect_grams(spec, s)
        out.append(StageKernelReport(s, is_psd(sg.G_r, tol), is_psd(sg.H_r, tol), dims[s - 1]))
    return out


@dataclass
class ProbeStep:
    m: int
    overlap: float           # largest singular value of P_W T^m
    rank: int                # numerical rank of P_W T^m
    cosine: float            # cosine of the smallest principal angle, range(T^m) vs W
    direction: np.ndarray = field(repr=False)


def analytic_probe(
    spec: OperatorSpec, m_max: int, config: OracleConfig = OracleConfig(), tol: Tolerance = DEFAULT_TOL
) -> list[ProbeStep]:
    """How much of ``range(T^m)`` stays in the window W = span{e_0..e_{d+k-1}}.

    A diagnostic, not a verdict: a direction that persists for every m
    corroborates a non-zero eigenvalue, a vanishing overlap corroborates
    analyticity. Truncation cannot decide either.
    """
    d, k = spec.d, spec.k
    N = config.N if config.N is not None else d + (m_max + 2) * k + 8
    _require(N, d + k, "analytic_probe")
    T = truncate(spec, N)
    W = d + k
    steps = []
    P = np.eye(N, dtype=np.complex128)
    for m in range(1, m_max + 1):
        P = T @ P
        U, s, _ = np.linalg.svd(P[:W], full_matrices=False)
        overlap = float(s[0]) if s.size else 0.0
        rank = int(np.sum(s > tol.eps_rank * max(overlap, 1.0)))
        basis = orth(P, tol)
        cosine = float(np.linalg.norm(basis[:W], 2)) if basis.size else 0.0
        direction = U[:, 0] if overlap > 0 else np.zeros(W, dtype=np.complex128)
        steps.append(ProbeStep(m, overlap, rank, min(cosine, 1.0), direction))
    return steps


def random_contraction(d: int, k: int, seed, margin: float = 0.05) -> OperatorSpec:
    """Complex Gaussian ``C`` rescaled so that ``sigma_max(C) = 1 - margin``.

    ``seed`` may be an int or a sequence of ints (passed to
    :func:`numpy.random.default_rng`).
    """
    if d < 1 or k < 1:
        raise ValueError("d and k must be positive")
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    C = (rng.standard_normal((d + k, d)) + 1j * rng.standard_normal((d + k, d))) / np.sqrt(2)
    C *= (1.0 - margin) / np.linalg.norm(C, 2)
    return build_operator(d, k, C)


def random_rank_one(k: int, seed, radius: float | None = None):
    """Rank-one ``alpha`` with ``sum |alpha_i|^2 < 1``, uniform in direction."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(k + 1) + 1j * rng.standard_normal(k + 1)
    a /= np.linalg.norm(a)
    if radius is None:
        radius = rng.uniform(0.0, 0.999)
    return a * radius


def verify(spec: OperatorSpec, r_max: int = 4, config: OracleConfig = OracleConfig(),
           tol: Tolerance = DEFAULT_TOL) -> list[CheckResult]:
    """All dense checks for one spec; kernel diagnostics only for contractions."""
    results = [dense_defect_check(spec, config)]
    for r in range(1, r_max + 1):
        results.append(power_decomposition_check(spec, r, config))
        results.append(stage_defect_check(spec, r, config))
    if is_psd(defect_grams(spec).G_T, tol):
        stages = kernel_condition_check(spec, r_max, config, tol)
        ok = all(s.psd_G and s.psd_H for s in stages)
        results.append(CheckResult(
            "stage inequalities", ok, 0.0,
            {"joint_kernel_dims": [s.joint_kernel_dim for s in stages]},
        ))
    return results
