import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftpert.defect import (
    commutator_block,
    defect_dimensions,
    defect_grams,
    defect_inclusion,
    douglas_lambda,
    embed,
    joint_kernel_dims,
    stage_defect_grams,
)
from shiftpert.kernel import Tolerance, is_psd, min_eigenvalue
from shiftpert.model import build_operator, shift_spec, stage_block
from strategies import specs

HALF = build_operator(2, 1, [[0.5, 0.5], [0, 0], [0, 0]])


def test_half_example_grams():
    g = defect_grams(HALF)
    np.testing.assert_allclose(g.G_T, [[0.75, -0.25], [-0.25, 0.75]], atol=1e-15)
    np.testing.assert_allclose(g.G_Tstar, np.diag([0.5, 1, 1]), atol=1e-15)
    np.testing.assert_allclose(
        commutator_block(HALF), [[-0.25, 0.25, 0], [0.25, 0.25, 0], [0, 0, 1]], atol=1e-15
    )
    assert defect_dimensions(HALF) == (2, 3)
    assert defect_inclusion(HALF)


def test_half_example_douglas_constant():
    # embed(G_T) <= lam diag(1/2, 1, 1) reduces to lam^2 - 9 lam / 4 + 1 = 0
    assert douglas_lambda(HALF) == pytest.approx((9 + np.sqrt(17)) / 8, abs=1e-12)


def test_half_example_second_stage():
    np.testing.assert_allclose(stage_block(HALF, 2), [[0.25, 0.25], [0, 0], [0, 0], [0, 0]])
    sg = stage_defect_grams(HALF, 2)
    np.testing.assert_allclose(sg.G_r, [[15 / 16, -1 / 16], [-1 / 16, 15 / 16]], atol=1e-15)
    np.testing.assert_allclose(sg.H_r, np.diag([7 / 8, 1, 1, 1]), atol=1e-15)


def test_rank_one_s2_grams():
    spec = build_operator(1, 2, [[0], [0.5], [0.5]])
    g = defect_grams(spec)
    np.testing.assert_allclose(g.G_T, [[0.5]])
    np.testing.assert_allclose(g.G_Tstar, [[1, 0, 0], [0, 0.75, -0.25], [0, -0.25, 0.75]])
    assert douglas_lambda(spec) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("d, k", [(1, 1), (2, 3), (4, 2)])
def test_pure_shift_dimensions(d, k):
    spec = shift_spec(d, k)
    assert defect_dimensions(spec) == (0, k)
    assert defect_inclusion(spec)
    assert douglas_lambda(spec) == 0.0


def test_zero_perturbation_dimensions():
    spec = build_operator(2, 1, np.zeros((3, 2)))
    assert defect_dimensions(spec) == (2, 3)


def test_non_inclusion_example():
    s = 1 / np.sqrt(2)
    spec = build_operator(2, 1, [[s, s], [0, 0], [0, 0]])
    assert defect_dimensions(spec) == (1, 2)
    assert not defect_inclusion(spec)
    assert douglas_lambda(spec) is None


def test_douglas_none_for_non_contraction():
    spec = build_operator(1, 1, [[0], [2]])
    assert douglas_lambda(spec) is None


def test_joint_kernel_dims_pure_shift():
    assert joint_kernel_dims(shift_spec(1, 1), 3) == [1, 1, 1]


def test_embed():
    np.testing.assert_allclose(embed([[1]], 2), [[1, 0], [0, 0]])


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_grams_psd_for_contractions(spec):
    g = defect_grams(spec)
    assert is_psd(g.G_T) and is_psd(g.G_Tstar)
    for r in (1, 2, 3):
        sg = stage_defect_grams(spec, r)
        assert is_psd(sg.G_r) and is_psd(sg.H_r)


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_stage_grams_monotone(spec):
    # ||T^{r+1} x|| <= ||T^r x||, so I - T*^r T^r increases with r
    g1 = stage_defect_grams(spec, 1).G_r
    g2 = stage_defect_grams(spec, 2).G_r
    assert min_eigenvalue(g2 - g1) >= -1e-10
    np.testing.assert_allclose(g1, defect_grams(spec).G_T, atol=1e-14)


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_douglas_constant_is_minimal(spec):
    lam = douglas_lambda(spec)
    if lam is None:
        return
    g = defect_grams(spec)
    E = embed(g.G_T, spec.d + spec.k)
    assert is_psd(lam * g.G_Tstar - E, Tolerance(eps_psd=1e-7))
    if lam > 1e-6:
        assert not is_psd((lam * (1 - 1e-4)) * g.G_Tstar - E, Tolerance(eps_psd=1e-12))


@given(specs(contraction=True))
@settings(max_examples=80, deadline=None)
def test_inclusion_rank_identity(spec):
    g = defect_grams(spec)
    dt, dts = defect_dimensions(spec)
    assert dt <= spec.d and dts <= spec.d + spec.k
    # T maps D_T isometrically onto range(C) and the index is -k
    assert dts - dt == spec.k


@given(specs(contraction=True), st.floats(0, 2 * np.pi))
@settings(max_examples=50, deadline=None)
def test_unimodular_scalar_invariance(spec, theta):
    rotated = build_operator(spec.d, spec.k, np.exp(1j * theta) * spec.C)
    assert defect_dimensions(rotated) == defect_dimensions(spec)
    assert defect_inclusion(rotated) == defect_inclusion(spec)
    a, b = douglas_lambda(rotated), douglas_lambda(spec)
    assert (a is None) == (b is None)
    if a is not None:
        assert a == pytest.approx(b, rel=1e-7, abs=1e-9)
