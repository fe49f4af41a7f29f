"""Worked examples with their stated verdicts and matrices, and a runner
that classifies each one and diffs it against those expectations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classification import CnuStatus, classify
from .defect import commutator_block, defect_grams
from .kernel import DEFAULT_TOL, Tolerance, hermitian_eigen
from .model import OperatorSpec, build_operator, dump_spec, rank_one_operator

MATRIX_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GoldenCase:
    name: str
    spec: OperatorSpec
    expected: dict
    expected_matrices: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)  # expected key -> where it is stated


@dataclass
class CaseResult:
    name: str
    passed: bool
    diffs: list[str]


def example_2_1(a1: complex = 0.5, a2: complex = 0.5) -> GoldenCase:
    """Rank-one perturbation of ``S_2``: ``T e_0 = a1 e_1 + a2 e_2``."""
    s = abs(a1) ** 2 + abs(a2) ** 2
    if not (a1 != 0 and a2 != 0 and s < 1):
        raise ValueError("example_2_1 needs non-zero a1, a2 with |a1|^2 + |a2|^2 < 1")
    spec = build_operator(1, 2, [[0], [a1], [a2]])
    co = np.array(
        [
            [1, 0, 0],
            [0, 1 - abs(a1) ** 2, -a1 * np.conj(a2)],
            [0, -np.conj(a1) * a2, 1 - abs(a2) ** 2],
        ],
        dtype=np.complex128,
    )
    comm = co.copy()
    comm[0, 0] = s
    return GoldenCase(
        "example_2_1",
        spec,
        {
            "is_contraction": True,
            "dims": (1, 3),
            "inclusion": True,
            "hyponormal": True,
            "analytic": True,
            "cnu": "certified",
            "point_spectrum": [],
            "in_paper_class": True,
        },
        {"G_T": np.array([[1 - s]]), "G_Tstar": co, "commutator": comm},
        {
            "is_contraction": "worked S_2 example: T*T <= I and TT* <= I from the displayed blocks",
            "dims": "worked S_2 example: D_T = C1, D_T* = span{1, z, z^2}",
            "inclusion": "worked S_2 example: D_T contained in D_T*",
            "hyponormal": "worked S_2 example: T*T - TT* block has positive leading minors",
            "analytic": "worked S_2 example: T^n H^2 lies in z^n H^2",
            "cnu": "worked S_2 example: analytic contractions are c.n.u.",
            "G_T": "worked S_2 example: entry 1 - (|a1|^2 + |a2|^2)",
            "G_Tstar": "worked S_2 example: entries 1 - |a1|^2, -a1 conj(a2), 1 - |a2|^2",
            "commutator": "worked S_2 example: leading entry |a1|^2 + |a2|^2",
        },
    )


def example_3_3() -> GoldenCase:
    """``T 1 = T z = 1/2``, ``T z^m = z^{m+1}`` for ``m >= 2``."""
    spec = build_operator(2, 1, [[0.5, 0.5], [0, 0], [0, 0]])
    return GoldenCase(
        "example_3_3",
        spec,
        {
            "is_contraction": True,
            "dims": (2, 3),
            "inclusion": True,
            "hyponormal": False,
            "analytic": False,
            "cnu": "certified",
            "point_spectrum": [0.5],
            "in_paper_class": True,
        },
        {
            "G_T": np.array([[0.75, -0.25], [-0.25, 0.75]]),
            "G_Tstar": np.diag([0.5, 1.0, 1.0]),
            "commutator": np.array([[-0.25, 0.25, 0], [0.25, 0.25, 0], [0, 0, 1]]),
            "eigenvector_0.5": np.array([1.0, 0.0]),
        },
        {
            "dims": "non-hyponormal example: dim D_T = 2, dim D_T* = 3",
            "inclusion": "non-hyponormal example: D_T contained in D_T*",
            "hyponormal": "non-hyponormal example: <(T*T - TT*)1, 1> = -1/4",
            "analytic": "non-hyponormal example: 1 lies in every T^m H^2",
            "cnu": "non-hyponormal example: c.n.u. by the characterisation converse",
            "point_spectrum": "non-hyponormal example: T(1) = 1/2",
        },
    )


def intro_counterexample() -> GoldenCase:
    """``T 1 = T z = 1/sqrt(2)``, ``T z^n = z^{n+1}`` for ``n >= 2``."""
    s = 1 / np.sqrt(2)
    spec = build_operator(2, 1, [[s, s], [0, 0], [0, 0]])
    return GoldenCase(
        "intro_counterexample",
        spec,
        {
            "is_contraction": True,
            "dims": (1, 2),
            "inclusion": False,
            "analytic": False,
            "cnu": "certified",
            "point_spectrum": [s],
            "in_paper_class": False,
        },
        {"defect_direction": np.array([1.0, -1.0]) / np.sqrt(2)},
        {
            "dims": "1/sqrt(2) example: D_T = C(1 - z), D_T* = Cz + Cz^2",
            "inclusion": "1/sqrt(2) example: D_T not contained in D_T*",
            "analytic": "1/sqrt(2) example: 1 is an eigenvector of T",
            "cnu": "1/sqrt(2) example: T is c.n.u.",
            "defect_direction": "1/sqrt(2) example: D_T = C(1 - z)",
        },
    )


def rank_one_case(name: str, alpha) -> GoldenCase:
    """Rank-one defect family: always hyponormal; analytic iff
    ``alpha_0 = 0`` or some ``alpha_j != 0`` with ``j >= 1``."""
    alpha = np.asarray(alpha, dtype=np.complex128)
    k = alpha.size - 1
    analytic = bool(alpha[0] == 0 or np.any(alpha[1:] != 0))
    expected = {
        "is_contraction": True,
        "dims": (1, k + 1),
        "inclusion": True,
        "hyponormal": True,
        "analytic": analytic,
        "cnu": "certified",
        "point_spectrum": [] if analytic else [complex(alpha[0])],
        "in_paper_class": True,
    }
    return GoldenCase(
        name,
        rank_one_operator(k, alpha),
        expected,
        {},
        {
            "hyponormal": "rank-one defect corollary: dim D_T = 1 implies hyponormal",
            "analytic": "rank-one analyticity corollary: alpha_0 = 0 or some alpha_j != 0",
            "point_spectrum": "rank-one remark: alpha_0 is an eigenvalue with eigenvector e_0 when alpha_j = 0 for j >= 1",
        },
    )


def golden_cases() -> list[GoldenCase]:
    return [
        example_2_1(),
        example_3_3(),
        intro_counterexample(),
        rank_one_case("rank_one_k2_analytic", [0, 0.3, 0.4]),
        rank_one_case("rank_one_k1_eigen", [0.5, 0]),
        rank_one_case("rank_one_k3_eigen", [-0.4j, 0, 0, 0]),
        rank_one_case("rank_one_k2_mixed", [0.5, 0, 0.3]),
    ]


def subspace_sine(u, v) -> float:
    """Sine of the angle between the lines spanned by ``u`` and ``v``."""
    u = np.asarray(u, dtype=np.complex128) / np.linalg.norm(u)
    v = np.asarray(v, dtype=np.complex128) / np.linalg.norm(v)
    return float(np.linalg.norm(u - np.vdot(v, u) * v))


def _matrix_diffs(case: GoldenCase) -> list[str]:
    diffs = []
    g = defect_grams(case.spec)
    computed = {"G_T": g.G_T, "G_Tstar": g.G_Tstar, "commutator": commutator_block(case.spec)}
    for key, want in case.expected_matrices.items():
        if key in computed:
            got = computed[key]
            if got.shape != want.shape:
                diffs.append(f"{key}: shape {got.shape} != {want.shape}")
                continue
            err = float(np.max(np.abs(got - want)))
            if err > MATRIX_TOL:
                diffs.append(f"{key}: max entry error {err:.3e}")
        elif key == "defect_direction":
            _, V = hermitian_eigen(g.G_T)
            sin = subspace_sine(V[:, -1], want)
            if sin > MATRIX_TOL:
                diffs.append(f"{key}: angle sine {sin:.3e}")
    return diffs


def check_case(case: GoldenCase, tol: Tolerance = DEFAULT_TOL, max_depth: int = 64) -> CaseResult:
    rep = classify(case.spec, tol, max_depth)
    got = {
        "is_contraction": rep.is_contraction,
        "dims": (rep.dim_DT, rep.dim_DTstar),
        "inclusion": rep.inclusion,
        "hyponormal": rep.hyponormal,
        "analytic": rep.analytic,
        "cnu": rep.cnu.verdict.value if isinstance(rep.cnu, CnuStatus) else rep.cnu.value,
        "in_paper_class": rep.in_paper_class,
    }
    diffs = []
    for key, want in case.expected.items():
        if key == "point_spectrum":
            vals = sorted((p.value for p in rep.point_spectrum), key=lambda z: (z.real, z.imag))
            want_sorted = sorted((complex(z) for z in want), key=lambda z: (z.real, z.imag))
            if len(vals) != len(want_sorted) or any(
                abs(a - b) > MATRIX_TOL for a, b in zip(vals, want_sorted)
            ):
                diffs.append(f"point_spectrum: got {vals}, expected {want_sorted}")
            for p in rep.point_spectrum:
                ev = case.expected_matrices.get(f"eigenvector_{p.value.real:g}")
                if ev is not None:
                    sin = subspace_sine(p.vectors[:, 0], ev)
                    if p.multiplicity != 1 or sin > MATRIX_TOL:
                        diffs.append(f"eigenvector for {p.value}: angle sine {sin:.3e}")
        elif got[key] != want:
            value = got[key] if not hasattr(got[key], "value") else got[key].value
            diffs.append(f"{key}: got {value!r}, expected {want!r}")
    diffs += _matrix_diffs(case)
    return CaseResult(case.name, not diffs, diffs)


def run_corpus(tol: Tolerance = DEFAULT_TOL, cases=None, max_depth: int = 64) -> list[CaseResult]:
    if cases is None:
        cases = golden_cases()
    return [check_case(c, tol, max_depth) for c in cases]


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [[_jsonable(z) for z in row] for row in obj] if obj.ndim == 2 else [_jsonable(z) for z in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        return [float(obj), 0.0]
    if isinstance(obj, tuple):
        return list(obj)
    if isinstance(obj, list):
        return [_jsonable(z) for z in obj]
    return obj


def export_corpus(directory, cases=None) -> list[Path]:
    """Write ``<name>.json`` (operator spec) and ``<name>.expected.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for case in cases or golden_cases():
        spec_path = directory / f"{case.name}.json"
        dump_spec(case.spec, spec_path)
        sidecar = {
            "name": case.name,
            "expected": {key: _jsonable(v) for key, v in case.expected.items()},
            "expected_matrices": {key: _jsonable(v) for key, v in case.expected_matrices.items()},
            "source": case.source,
        }
        side_path = directory / f"{case.name}.expected.json"
        side_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
        written += [spec_path, side_path]
    return written
