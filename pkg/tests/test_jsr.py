import numpy as np
import pytest

from cksvar import CompanionSet, jsr_bounds

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0
PAIR = (np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_singleton_scalar_exact():
    est = jsr_bounds(CompanionSet((np.array([[0.5]]),)), depth=5)
    assert est.lower == pytest.approx(0.5, abs=1e-12)
    assert est.upper == pytest.approx(0.5, abs=1e-12)
    assert est.certified_lt_one


def test_singleton_defective_converges():
    A = np.array([[0.9, 1.0], [0.0, 0.9]])
    est = jsr_bounds(CompanionSet((A,)), depth=30)
    assert est.lower == pytest.approx(0.9, abs=1e-12)
    assert est.upper == pytest.approx(0.9, abs=1e-3)
    assert est.certified_lt_one


def test_golden_ratio_pair():
    est = jsr_bounds(CompanionSet(PAIR), depth=12)
    assert est.lower >= GOLDEN - 1e-3
    assert not est.certified_lt_one
    assert est.upper >= est.lower - 1e-12


def test_bounds_monotone_in_depth():
    lows, ups = [], []
    for depth in range(1, 13):
        est = jsr_bounds(CompanionSet(PAIR), depth=depth)
        lows.append(est.lower)
        ups.append(est.upper)
    assert all(b >= a - 1e-12 for a, b in zip(lows, lows[1:]))
    assert all(b <= a + 1e-12 for a, b in zip(ups, ups[1:]))


def test_lower_at_least_singleton_radius():
    rng = np.random.default_rng(21)
    for _ in range(20):
        mats = tuple(rng.normal(size=(3, 3)) * 0.5 for _ in range(int(rng.integers(1, 4))))
        est = jsr_bounds(CompanionSet(mats), depth=6)
        base = max(np.abs(np.linalg.eigvals(M)).max() for M in mats)
        assert est.lower >= base - 1e-12
        assert est.lower <= est.upper + 1e-12


def test_rejects_empty_and_mismatched():
    with pytest.raises(ValueError):
        CompanionSet(())
    with pytest.raises(ValueError):
        CompanionSet((np.eye(2), np.eye(3)))
    with pytest.raises(ValueError):
        jsr_bounds(CompanionSet((np.eye(2),)), depth=0)


def test_budget_truncation_flagged():
    est = jsr_bounds(CompanionSet(PAIR), depth=12, budget=10)
    assert est.truncated
    assert not est.certified_lt_one
