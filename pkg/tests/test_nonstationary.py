import math

import numpy as np
import pytest

from cookiedim import (
    DepthCapError,
    SystemFamily,
    block_sequence,
    bowen_root,
    cantor_intervals,
    combine_error,
    contraction_profile,
    dimension_estimates,
    explicit_sequence,
    growth_sequence,
    prefix_root,
    quasi_additivity_check,
    root_map,
    stationary_dimension,
)
from cookiedim.catalog import affine_system, ex61_f0, ex61_family, ex61_pair, middle_thirds, quarter
from cookiedim.nonstationary import DimensionEstimate

LOG23 = math.log(2) / math.log(3)


def test_prefix_root_constant_affine():
    seq = block_sequence([(0, 10**9)], 1)
    for n in (1, 10, 10**6, 10**9):
        assert prefix_root(middle_thirds(), seq, n).root == pytest.approx(LOG23, abs=1e-9)


def test_prefix_root_half_frequencies():
    fam = SystemFamily((middle_thirds(), quarter()))
    seq = block_sequence([("01", 500)], 2)
    r = prefix_root(fam, seq, 1000)
    assert r.route == "affine"
    assert r.root == pytest.approx(2 * math.log(2) / math.log(12), abs=1e-9)
    assert r.root == pytest.approx(root_map(fam, (0.5, 0.5)).root, abs=1e-10)


def test_affine_exactness_every_n():
    fam = SystemFamily((affine_system([0.3, 0.2]), affine_system([0.1, 0.25, 0.15])))
    seq = growth_sequence([0, 1], 3, 2, "geometric", j_max=6)
    for n in range(1, 200, 7):
        f = tuple(c / n for c in (np.bincount(seq.prefix(n), minlength=2)))
        assert prefix_root(fam, seq, n).root == pytest.approx(root_map(fam, f).root, abs=1e-10)


def test_prefix_root_matches_grouped_bowen():
    fam = ex61_family()
    r = prefix_root(fam, block_sequence([("01", 5)], 2), 10)
    g = bowen_root(ex61_pair(), (0,) * 5)
    assert r.route == "exact"
    assert abs(r.root - g.root) <= r.error_radius + g.error_radius
    assert r.root == pytest.approx(g.root, abs=1e-8)


def test_prefix_root_cap_and_fallback():
    fam = ex61_family()
    seq = block_sequence([("01", 20)], 2)
    with pytest.raises(DepthCapError):
        prefix_root(fam, seq, 40, depth_cap=2**12)
    r = prefix_root(fam, seq, 40, depth_cap=2**12, allow_fallback=True)
    assert r.route == "frequency"
    assert 0 <= r.root <= 1
    assert r.error_radius > 0


def test_estimates_constant_sequence():
    seq = block_sequence([(0, 10**6)], 2)
    fam = SystemFamily((middle_thirds(), quarter()))
    h, ub, trace = dimension_estimates(fam, seq, [10, 100, 1000, 10**4])
    assert h.value == pytest.approx(LOG23, abs=1e-9)
    assert ub.value == pytest.approx(LOG23, abs=1e-9)
    assert len(trace) == 4
    assert (h.kind, ub.kind) == ("hausdorff_liminf", "upper_box_limsup")


def test_estimates_supergeometric_min_max():
    fam = SystemFamily((middle_thirds(), quarter()))
    seq = growth_sequence([0, 1], 2, 2, "supergeometric", j_max=6)
    h, ub, _ = dimension_estimates(fam, seq, seq.block_ends())
    assert h.value == pytest.approx(0.5, abs=0.02)
    assert ub.value == pytest.approx(LOG23, abs=0.02)
    assert h.value <= ub.value


def test_estimates_reject_bad_horizons():
    seq = block_sequence([(0, 100)], 1)
    with pytest.raises(ValueError):
        dimension_estimates(middle_thirds(), seq, [10, 5])


def test_estimate_validation():
    with pytest.raises(ValueError):
        DimensionEstimate(0.5, "nonsense", 1, 0.0)
    with pytest.raises(ValueError):
        DimensionEstimate(0.5, "moran", 1, -1.0)


def test_stationary_dimension_routes():
    d = stationary_dimension(middle_thirds())
    assert (d.kind, d.value) == ("moran", pytest.approx(LOG23, abs=1e-12))
    d = stationary_dimension(ex61_pair(), depth_cap=2**10, allow_best=True)
    assert d.kind == "stationary"


def test_quasi_additivity_examples():
    fam = SystemFamily((middle_thirds(), affine_system([0.2, 0.3])))
    assert quasi_additivity_check(fam, (0, 1, 1, 0), 2, 0.7).measured == pytest.approx(0, abs=1e-12)
    F0 = ex61_f0()
    r = quasi_additivity_check(F0, (0,) * 8, 4, 0.5)
    assert r.holds
    assert r.bound == pytest.approx(contraction_profile(F0).c_kappa * 0.5)
    assert r.measured > 0
    assert quasi_additivity_check(F0, (0,) * 8, 4, 0.0).measured == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        quasi_additivity_check(F0, (0, 0), 2, 0.5)


def test_combine_examples():
    fam = SystemFamily((middle_thirds(), affine_system([0.2, 0.3])))
    r = combine_error(fam, explicit_sequence([0, 1, 1, 0, 0], 2), 5, 0.6)
    assert r.measured == pytest.approx(0, abs=1e-12)
    F0 = ex61_family()
    r = combine_error(F0, explicit_sequence([0] * 10, 2), 10, 0.5)
    assert r.holds
    r = combine_error(F0, explicit_sequence([0] * 6 + [1] * 6, 2), 12, 0.46)
    c_kappa = contraction_profile(F0).c_kappa
    assert r.bound >= (2 * 1 + 2) * c_kappa * 0.46 / 12
    assert r.holds


def test_cantor_intervals_examples():
    iv = cantor_intervals(middle_thirds(), explicit_sequence([0], 1), 1)
    assert [(w.left, w.right) for w in iv] == [pytest.approx((0, 1 / 3)), pytest.approx((2 / 3, 1))]
    iv = cantor_intervals(middle_thirds(), explicit_sequence([0, 0], 1), 2)
    assert len(iv) == 4
    assert all(w.length == pytest.approx(1 / 9) for w in iv)
    iv = cantor_intervals(ex61_f0(), explicit_sequence([0], 1), 1)
    assert [(w.left, w.right) for w in iv] == [pytest.approx((0, 1 / 20)), pytest.approx((19 / 20, 1))]


def test_cantor_refinement():
    fam = ex61_family()
    seq = explicit_sequence([0, 1, 1, 0, 1, 0], 2)
    for n in range(1, 6):
        coarse = cantor_intervals(fam, seq, n)
        fine = cantor_intervals(fam, seq, n + 1)
        lefts = np.array([w.left for w in coarse])
        rights = np.array([w.right for w in coarse])
        for w in fine:
            inside = (lefts <= w.left + 1e-15) & (w.right <= rights + 1e-15)
            assert inside.sum() == 1
        assert all(a.right < b.left for a, b in zip(fine, fine[1:]))


def test_bracketing_affine():
    fam = SystemFamily((middle_thirds(), quarter(), affine_system([0.2, 0.2, 0.2])))
    roots = [stationary_dimension(F).value for F in fam.systems]
    rng = np.random.default_rng(5)
    for _ in range(10):
        letters = rng.integers(0, 3, 40)
        r = prefix_root(fam, explicit_sequence(letters, 3), 40)
        assert min(roots) - r.error_radius <= r.root <= max(roots) + r.error_radius


def test_bracketing_ex61():
    fam = ex61_family()
    d = [stationary_dimension(F, depth_cap=2**12, allow_best=True) for F in fam.systems]
    rng = np.random.default_rng(6)
    for _ in range(5):
        letters = rng.integers(0, 2, 10)
        r = prefix_root(fam, explicit_sequence(letters, 2), 10)
        delta = r.error_radius + max(x.error_radius for x in d)
        assert min(x.value for x in d) - delta <= r.root <= max(x.value for x in d) + delta
