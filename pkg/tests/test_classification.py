import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftpert.classification import (
    INCONCLUSIVE,
    NA,
    CnuVerdict,
    classify,
    cnu_status,
    expanding_eigenvalues,
    is_analytic,
    is_hyponormal,
    nonzero_point_spectrum,
    report_to_dict,
    report_to_text,
    unitary_witness_ok,
)
from shiftpert.kernel import Tolerance
from shiftpert.model import apply, build_operator, rank_one_operator, shift_spec
from strategies import specs

HALF = build_operator(2, 1, [[0.5, 0.5], [0, 0], [0, 0]])


def test_half_example_report():
    rep = classify(HALF)
    assert rep.is_contraction and rep.inclusion
    assert rep.hyponormal is False
    assert rep.analytic is False
    assert rep.cnu.verdict is CnuVerdict.CERTIFIED
    assert rep.in_paper_class
    (pair,) = rep.point_spectrum
    assert pair.value == pytest.approx(0.5)
    v = pair.vectors[:, 0]
    assert np.linalg.norm(apply(HALF, v)[:2] - 0.5 * v) < 1e-10
    assert abs(abs(v[0]) - 1) < 1e-12


def test_non_contraction_report():
    spec = build_operator(1, 1, [[0], [1.5]])
    rep = classify(spec)
    assert not rep.is_contraction
    assert rep.hyponormal is NA and rep.cnu is NA
    assert rep.douglas_lambda is None
    assert not rep.in_paper_class
    with pytest.raises(ValueError):
        cnu_status(spec)


def test_nilpotent_head_is_analytic():
    # A1 is a single Jordan block; its computed eigenvalues are not exactly zero
    A1 = np.diag([0.3, 0.3], 1)
    C = np.vstack([A1, [[0.1, 0.1, 0.1]]])
    spec = build_operator(3, 1, C)
    assert nonzero_point_spectrum(spec) == []
    assert is_analytic(spec) is True


def test_expanding_eigenvalue_is_not_analytic():
    # not a contraction; A1 = 2 gives a square-summable tail e_0 + e_1/2 + ...
    spec = build_operator(1, 1, [[2.0], [1.0]])
    assert expanding_eigenvalues(spec) == [2.0]
    assert nonzero_point_spectrum(spec) == []
    assert is_analytic(spec) is False
    assert any("outside the unit disk" in f for f in classify(spec).marginal_flags)


def test_inconclusive_analytic():
    # A1 has eigenvalues of modulus < 1 but is not a contraction, and no
    # eigenvector of A1 lies in ker B
    A1 = np.array([[0.5, 3.0], [0.0, 0.5]])
    spec = build_operator(2, 1, np.vstack([A1, [[1.0, 1.0]]]))
    assert nonzero_point_spectrum(spec) == []
    assert is_analytic(spec) is INCONCLUSIVE


@pytest.mark.parametrize("d, k", [(1, 1), (1, 3), (3, 2), (4, 1)])
def test_pure_shift_certified(d, k):
    cnu = cnu_status(shift_spec(d, k))
    assert cnu.verdict is CnuVerdict.CERTIFIED
    assert cnu.depth_used <= d + k + 2


@pytest.mark.parametrize("theta", np.linspace(0, 2 * np.pi, 8, endpoint=False))
def test_unimodular_corner_not_cnu(theta):
    spec = build_operator(1, 1, [[np.exp(1j * theta)], [0]])
    cnu = cnu_status(spec)
    assert cnu.verdict is CnuVerdict.NOT_CNU
    assert unitary_witness_ok(spec, cnu.witness, cnu.witness_eigenvalue)
    assert abs(cnu.witness_eigenvalue - np.exp(1j * theta)) < 1e-10


def test_unitary_witness_rejects_non_witness():
    assert not unitary_witness_ok(HALF, np.array([1.0, 0.0]))


def test_max_depth_zero_is_inconclusive():
    cnu = cnu_status(shift_spec(2, 1), max_depth=0)
    assert cnu.verdict is CnuVerdict.INCONCLUSIVE


def test_marginal_flag_near_psd_threshold():
    spec = build_operator(1, 1, [[0], [np.sqrt(1 + 5e-9)]])
    rep = classify(spec)
    assert any("PSD threshold" in f for f in rep.marginal_flags)


def test_tolerance_sensitivity():
    assert is_hyponormal(HALF) is False
    assert is_hyponormal(HALF, Tolerance(eps_psd=1.0)) is True


def test_report_serialisation_is_stable():
    rep = classify(HALF)
    d = report_to_dict(rep)
    assert list(d) == [
        "is_contraction", "dim_DT", "dim_DTstar", "inclusion", "douglas_lambda", "hyponormal",
        "point_spectrum", "analytic", "cnu", "in_paper_class", "marginal_flags",
    ]
    assert d["hyponormal"] == "false" and d["cnu"]["verdict"] == "certified"
    assert json.dumps(d) == json.dumps(report_to_dict(classify(HALF)))
    assert "hyponormal       : false" in report_to_text(rep)


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_hyponormal_implies_inclusion(spec):
    rep = classify(spec)
    if rep.hyponormal is True:
        assert rep.inclusion


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_hyponormal_iff_douglas_at_most_one(spec):
    rep = classify(spec)
    if rep.inclusion:
        assert rep.hyponormal == (rep.douglas_lambda <= 1 + 1e-9)


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_eigenpair_residuals(spec):
    for pair in nonzero_point_spectrum(spec):
        for i in range(pair.multiplicity):
            v = pair.vectors[:, i]
            Tv = apply(spec, v)
            resid = np.linalg.norm(Tv - pair.value * np.r_[v, np.zeros(spec.k)])
            assert resid <= 1e-8 * max(1.0, np.linalg.norm(spec.C, 2))


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_contraction_analytic_iff_no_point_spectrum(spec):
    rep = classify(spec)
    assert rep.analytic == (not rep.point_spectrum)


@given(specs(contraction=True))
@settings(max_examples=40, deadline=None)
def test_classify_is_deterministic(spec):
    a = json.dumps(report_to_dict(classify(spec)))
    b = json.dumps(report_to_dict(classify(spec)))
    assert a == b


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_rank_one_always_hyponormal(k, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(k + 1) + 1j * rng.standard_normal(k + 1)
    a *= rng.uniform(0, 0.999) / np.linalg.norm(a)
    rep = classify(rank_one_operator(k, a))
    assert rep.hyponormal is True
