"""Decision procedures for contraction, hyponormality, point spectrum,
analyticity and complete non-unitarity, aggregated into one report.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .defect import (
    commutator_block,
    defect_dimensions,
    defect_grams,
    defect_inclusion,
    douglas_lambda,
    embed,
    joint_kernel_dims,
)
from .kernel import (
    DEFAULT_TOL,
    EigenPair,
    Tolerance,
    column_space_contained,
    general_eigen,
    is_psd,
    kernel_basis,
    min_eigenvalue,
    orth,
    psd_threshold,
    singular_values,
)
from .model import OperatorSpec, apply, apply_adjoint

WITNESS_TOL = 1e-8


class Undecided(enum.Enum):
    NA = "n/a"
    INCONCLUSIVE = "inconclusive"


NA = Undecided.NA
INCONCLUSIVE = Undecided.INCONCLUSIVE


class CnuVerdict(enum.Enum):
    CERTIFIED = "certified"
    NOT_CNU = "not_cnu"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class CnuStatus:
    verdict: CnuVerdict
    depth_used: int
    witness: np.ndarray | None = field(default=None, repr=False)
    witness_eigenvalue: complex | None = None
    joint_kernel_dims: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class EigenCriterionBlocks:
    A1: np.ndarray
    B: np.ndarray


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    is_contraction: bool
    dim_DT: int
    dim_DTstar: int
    inclusion: bool
    douglas_lambda: float | None
    hyponormal: bool | Undecided
    point_spectrum: list[EigenPair]
    analytic: bool | Undecided
    cnu: CnuStatus | Undecided
    in_paper_class: bool
    marginal_flags: list[str]


def is_contraction(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_psd(defect_grams(spec).G_T, tol)


def is_hyponormal(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_psd(commutator_block(spec), tol)


def eigen_blocks(spec: OperatorSpec) -> EigenCriterionBlocks:
    return EigenCriterionBlocks(spec.A1.copy(), spec.B.copy())


def _split_a1_spectrum(A1: np.ndarray, tol: Tolerance) -> tuple[np.ndarray, np.ndarray]:
    """Split the eigenvalues of ``A1`` into (non-zero, zero).

    The algebraic multiplicity of zero is read off ``dim ker A1^d`` rather
    than from eigenvalue moduli, since a nilpotent Jordan block of size m
    has computed eigenvalues of order eps**(1/m).
    """
    d = A1.shape[0]
    w = np.linalg.eigvals(A1)
    scale = max(1.0, float(np.linalg.norm(A1, 2))) ** d
    s = singular_values(np.linalg.matrix_power(A1, d))
    m0 = d - int(np.sum(s > tol.eps_rank * scale))
    order = np.argsort(np.abs(w), kind="stable")
    return w[order[m0:]], w[order[:m0]]


def nonzero_point_spectrum(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> list[EigenPair]:
    """Non-zero eigenvalues of ``T`` with finitely supported eigenvectors.

    ``lam != 0`` is an eigenvalue exactly when ``ker [(A1 - lam I); B]`` is
    non-trivial; the eigenvectors are supported on e_0..e_{d-1}. Eigenvalues
    of ``A1`` with ``|lam| > 1`` may also be eigenvalues of ``T`` through a
    geometrically decaying tail; those are not listed here (see
    :func:`expanding_eigenvalues`).
    """
    A1, B = spec.A1, spec.B
    nonzero, _ = _split_a1_spectrum(A1, tol)
    if nonzero.size == 0:
        return []
    d = spec.d
    out = []
    for pair in general_eigen(A1, tol, values=nonzero):
        lam = pair.value
        K = kernel_basis(np.vstack([A1 - lam * np.eye(d), B]), tol)
        if K.shape[1]:
            out.append(EigenPair(lam, K))
    return out


def expanding_eigenvalues(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> list[complex]:
    """Eigenvalues ``|lam| > 1`` of ``A1``; each is an eigenvalue of ``T``.

    For such ``lam`` the tail recursion ``h_{m+k} = h_m / lam`` is square
    summable, so any eigenvector of ``A1`` extends to one of ``T``. Only
    possible when ``A1`` is not a contraction.
    """
    nonzero, _ = _split_a1_spectrum(spec.A1, tol)
    return [complex(v) for v in nonzero if abs(v) > 1.0 + tol.eps_eig]


def a1_is_contraction(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> bool:
    A1 = spec.A1
    return is_psd(np.eye(spec.d) - A1.conj().T @ A1, tol)


def is_analytic(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL) -> bool | Undecided:
    if nonzero_point_spectrum(spec, tol) or expanding_eigenvalues(spec, tol):
        return False
    nonzero, _ = _split_a1_spectrum(spec.A1, tol)
    if nonzero.size == 0:
        # A1 nilpotent: T^m H is pushed past every fixed window
        return True
    if a1_is_contraction(spec, tol):
        return True
    return INCONCLUSIVE


def _pad(v: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.complex128)
    out[: v.size] = v
    return out


def unitary_witness_ok(spec: OperatorSpec, v, lam: complex | None = None) -> bool:
    """Check ``||Tv|| = ||T*v|| = ||v||`` and, for an eigen-witness, that
    ``span{v}`` is mapped into itself by ``T`` and ``T*``."""
    v = np.asarray(v, dtype=np.complex128)
    Tv = apply(spec, v)
    Tsv = apply_adjoint(spec, v)
    nv = np.linalg.norm(v)
    if abs(np.linalg.norm(Tv) - nv) > WITNESS_TOL or abs(np.linalg.norm(Tsv) - nv) > WITNESS_TOL:
        return False
    if lam is not None:
        n = max(Tv.size, Tsv.size, v.size)
        if np.linalg.norm(_pad(Tv, n) - lam * _pad(v, n)) > WITNESS_TOL:
            return False
        if np.linalg.norm(_pad(Tsv, n) - np.conj(lam) * _pad(v, n)) > WITNESS_TOL:
            return False
    return True


def _unimodular_witness(spec: OperatorSpec, tol: Tolerance) -> CnuStatus | None:
    eps = tol.eps_eig
    for pair in nonzero_point_spectrum(spec, tol):
        if abs(pair.value) >= 1.0 - eps:
            v = pair.vectors[:, 0]
            if unitary_witness_ok(spec, v, pair.value):
                return CnuStatus(CnuVerdict.NOT_CNU, 0, v, pair.value)
    # T* x = mu x with |mu| = 1 forces x onto the head, where T* acts as A1*
    for pair in general_eigen(spec.A1.conj().T, tol):
        if abs(pair.value) >= 1.0 - eps:
            v = pair.vectors[:, 0]
            lam = np.conj(pair.value)
            if unitary_witness_ok(spec, v, lam):
                return CnuStatus(CnuVerdict.NOT_CNU, 0, v, complex(lam))
    return None


def cnu_status(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL, max_depth: int = 64) -> CnuStatus:
    """Decide complete non-unitarity of a contraction with a certificate.

    Unimodular eigenvectors of ``T`` or ``T*`` give a ``NOT_CNU`` witness.
    Otherwise the subspace generated from both defect ranges under ``T``
    and ``T*`` is grown one step at a time; once it contains
    e_0..e_{d+k-1}, shifting reaches every basis vector, the unitary part
    is zero and the verdict is ``CERTIFIED``. Exact stabilisation gives a
    reducing subspace whose complement carries a unitary part. Reaching
    ``max_depth`` without either outcome is ``INCONCLUSIVE``.
    """
    if not is_contraction(spec, tol):
        raise ValueError("complete non-unitarity is only defined for contractions")
    found = _unimodular_witness(spec, tol)
    if found is not None:
        return found

    d, k = spec.d, spec.k
    window = d + k
    g = defect_grams(spec)
    Q = orth(np.hstack([embed(g.G_T, window), g.G_Tstar]), tol)
    L = window
    for depth in range(max_depth + 1):
        if Q.shape[1] and column_space_contained(np.eye(L, window), Q, tol):
            return CnuStatus(CnuVerdict.CERTIFIED, depth)
        if depth == max_depth:
            break
        L_next = L + k
        cols = [np.pad(Q, ((0, k), (0, 0)))]
        for i in range(Q.shape[1]):
            cols.append(apply(spec, Q[:, i]).reshape(-1, 1))
            cols.append(_pad(apply_adjoint(spec, Q[:, i]), L_next).reshape(-1, 1))
        Q_next = orth(np.hstack(cols), tol)
        if Q_next.shape[1] == Q.shape[1]:
            comp = kernel_basis(Q_next.conj().T, tol)
            for i in range(comp.shape[1]):
                if unitary_witness_ok(spec, comp[:, i]):
                    return CnuStatus(CnuVerdict.NOT_CNU, depth + 1, comp[:, i])
        Q, L = Q_next, L_next
    dims = tuple(joint_kernel_dims(spec, max_depth, tol)) if max_depth else ()
    return CnuStatus(CnuVerdict.INCONCLUSIVE, max_depth, joint_kernel_dims=dims)


def _near(value: float, thr: float) -> bool:
    # neither a structural zero nor clearly past the cut-off
    return thr > 0 and thr / 10 < abs(value) <= 10 * thr


def _marginal_flags(spec: OperatorSpec, tol: Tolerance) -> list[str]:
    flags = []
    g = defect_grams(spec)
    window = spec.d + spec.k
    comm = commutator_block(spec)
    for name, M in (("G_T", g.G_T), ("G_Tstar", g.G_Tstar), ("commutator", comm)):
        lo = min_eigenvalue(M)
        if lo < 0 and _near(lo, psd_threshold(M, tol)):
            flags.append(f"{name}: min eigenvalue {lo:.3e} near PSD threshold")
    for name, M in (
        ("G_T", g.G_T),
        ("G_Tstar", g.G_Tstar),
        ("inclusion", np.hstack([embed(g.G_T, window), g.G_Tstar])),
    ):
        s = singular_values(M)
        if s.size and s[0] > 0:
            for ratio in s[1:] / s[0]:
                if _near(ratio, tol.eps_rank):
                    flags.append(f"{name}: singular value ratio {ratio:.3e} near rank threshold")
    nonzero, zero = _split_a1_spectrum(spec.A1, tol)
    for v in nonzero:
        if _near(abs(v), tol.eps_eig):
            flags.append(f"A1: eigenvalue {v:.3e} near zero")
        if _near(abs(v) - 1.0, tol.eps_eig):
            flags.append(f"A1: eigenvalue {v:.3e} near the unit circle")
    if zero.size and np.max(np.abs(zero)) > 10 * tol.eps_eig:
        flags.append(f"A1: zero eigenvalue cluster spread {np.max(np.abs(zero)):.3e}")
    for v in expanding_eigenvalues(spec, tol):
        flags.append(f"A1: eigenvalue {v:.6g} outside the unit disk is an eigenvalue of T "
                     "with an infinitely supported eigenvector")
    return flags


def classify(spec: OperatorSpec, tol: Tolerance = DEFAULT_TOL, max_depth: int = 64) -> ClassificationReport:
    contraction = is_contraction(spec, tol)
    dim_dt, dim_dts = defect_dimensions(spec, tol)
    inclusion = defect_inclusion(spec, tol)
    lam = douglas_lambda(spec, tol)
    hypo: bool | Undecided = is_hyponormal(spec, tol) if contraction else NA
    cnu: CnuStatus | Undecided = cnu_status(spec, tol, max_depth) if contraction else NA
    in_class = (
        contraction
        and inclusion
        and dim_dt == spec.d
        and dim_dts == spec.d + spec.k
        and isinstance(cnu, CnuStatus)
        and cnu.verdict is CnuVerdict.CERTIFIED
    )
    return ClassificationReport(
        is_contraction=contraction,
        dim_DT=dim_dt,
        dim_DTstar=dim_dts,
        inclusion=inclusion,
        douglas_lambda=lam,
        hyponormal=hypo,
        point_spectrum=nonzero_point_spectrum(spec, tol),
        analytic=is_analytic(spec, tol),
        cnu=cnu,
        in_paper_class=bool(in_class),
        marginal_flags=_marginal_flags(spec, tol),
    )


# --- serialisation --------------------------------------------------------


def _verdict(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return v.value


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def cnu_to_dict(cnu: CnuStatus | Undecided):
    if isinstance(cnu, Undecided):
        return cnu.value
    return {
        "verdict": cnu.verdict.value,
        "depth_used": cnu.depth_used,
        "witness": None if cnu.witness is None else [_cx(z) for z in cnu.witness],
        "witness_eigenvalue": None if cnu.witness_eigenvalue is None else _cx(cnu.witness_eigenvalue),
        "joint_kernel_dims": list(cnu.joint_kernel_dims),
    }


def report_to_dict(report: ClassificationReport) -> dict:
    return {
        "is_contraction": _verdict(report.is_contraction),
        "dim_DT": report.dim_DT,
        "dim_DTstar": report.dim_DTstar,
        "inclusion": _verdict(report.inclusion),
        "douglas_lambda": report.douglas_lambda,
        "hyponormal": _verdict(report.hyponormal),
        "point_spectrum": [
            {
                "value": _cx(p.value),
                "eigenvectors": [[_cx(z) for z in p.vectors[:, i]] for i in range(p.multiplicity)],
            }
            for p in report.point_spectrum
        ],
        "analytic": _verdict(report.analytic),
        "cnu": cnu_to_dict(report.cnu),
        "in_paper_class": _verdict(report.in_paper_class),
        "marginal_flags": list(report.marginal_flags),
    }


def format_complex(z) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}i"


def report_to_text(report: ClassificationReport) -> str:
    lam = "none" if report.douglas_lambda is None else f"{report.douglas_lambda:.12g}"
    if isinstance(report.cnu, CnuStatus):
        cnu = f"{report.cnu.verdict.value} (depth {report.cnu.depth_used})"
    else:
        cnu = report.cnu.value
    spectrum = ", ".join(format_complex(p.value) for p in report.point_spectrum) or "none"
    lines = [
        f"contraction      : {_verdict(report.is_contraction)}",
        f"defect dims      : dim D_T = {report.dim_DT}, dim D_T* = {report.dim_DTstar}",
        f"inclusion        : {_verdict(report.inclusion)}",
        f"douglas lambda   : {lam}",
        f"hyponormal       : {_verdict(report.hyponormal)}",
        f"point spectrum   : {spectrum}",
        f"analytic         : {_verdict(report.analytic)}",
        f"c.n.u.           : {cnu}",
        f"target class     : {_verdict(report.in_paper_class)}",
    ]
    lines += [f"marginal         : {f}" for f in report.marginal_flags]
    return "\n".join(lines)
