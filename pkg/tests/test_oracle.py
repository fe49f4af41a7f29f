import numpy as np
import pytest

from shiftpert.model import build_operator, shift_spec
from shiftpert.oracle import (
    OracleConfig,
    analytic_probe,
    dense_defect_check,
    kernel_condition_check,
    power_decomposition_check,
    random_contraction,
    random_rank_one,
    stage_defect_check,
    verify,
)

HALF = build_operator(2, 1, [[0.5, 0.5], [0, 0], [0, 0]])


def test_random_contraction_norm_and_seeding():
    a = random_contraction(3, 2, 7, margin=0.1)
    assert np.linalg.norm(a.C, 2) == pytest.approx(0.9)
    assert a == random_contraction(3, 2, 7, margin=0.1)
    assert a != random_contraction(3, 2, 8, margin=0.1)
    assert random_contraction(2, 1, [5, 0]) == random_contraction(2, 1, [5, 0])


@pytest.mark.parametrize("margin", [0.0, 1.0, -0.5])
def test_random_contraction_rejects_margin(margin):
    with pytest.raises(ValueError):
        random_contraction(1, 1, 0, margin=margin)


def test_random_rank_one_is_contraction():
    for seed in range(20):
        a = random_rank_one(3, seed)
        assert a.shape == (4,)
        assert np.sum(np.abs(a) ** 2) < 1


@pytest.mark.parametrize("check", [dense_defect_check])
def test_undersized_truncation_raises(check):
    with pytest.raises(ValueError):
        check(HALF, OracleConfig(N=4))


def test_undersized_power_truncation_raises():
    with pytest.raises(ValueError):
        power_decomposition_check(HALF, 3, OracleConfig(N=5))
    with pytest.raises(ValueError):
        stage_defect_check(HALF, 3, OracleConfig(N=5))


def test_kernel_condition_requires_contraction():
    with pytest.raises(ValueError):
        kernel_condition_check(build_operator(1, 1, [[0], [2]]), 2)


def test_kernel_condition_reports():
    reports = kernel_condition_check(HALF, 3)
    assert [r.r for r in reports] == [1, 2, 3]
    assert all(r.psd_G and r.psd_H for r in reports)


def test_analytic_probe_sees_eigenvector():
    steps = analytic_probe(HALF, 6)
    # the eigenvalue 1/2 keeps e_0 in every range, with shrinking norm
    assert all(s.cosine > 1 - 1e-10 for s in steps)
    assert abs(abs(steps[-1].direction[0]) - 1) < 1e-8


def test_analytic_probe_pure_shift_leaves_window():
    steps = analytic_probe(shift_spec(1, 1), 4)
    assert steps[0].overlap == pytest.approx(1.0)
    assert all(s.overlap < 1e-12 for s in steps[1:])


def test_verify_sweep():
    # identity checks on 200 seeded random contractions
    worst = 0.0
    for i in range(200):
        d, k = 1 + i % 4, 1 + (i // 4) % 3
        results = verify(random_contraction(d, k, [2024, i]), r_max=4)
        assert all(r.passed for r in results), [r for r in results if not r.passed]
        worst = max(worst, max(r.discrepancy for r in results))
    assert worst <= 1e-10


def test_verify_non_contraction_skips_stage_inequalities():
    results = verify(build_operator(1, 1, [[0], [2]]), r_max=2)
    assert "stage inequalities" not in [r.name for r in results]
    assert all(r.passed for r in results)
