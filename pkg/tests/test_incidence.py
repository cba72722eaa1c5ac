from math import log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyllab.incidence import (
    IncidenceRecord,
    PointFamily,
    count_incidences,
    count_incidences_bruteforce,
    incidence_bound_ratio,
    random_family,
    sharpness_configuration,
)


def test_point_family_validation():
    PointFamily(4, {1: 0.1, 3: 0.7})
    with pytest.raises(ValueError):
        PointFamily(4, {1: 0.3})  # outside I_1
    with pytest.raises(ValueError):
        PointFamily(4, {5: 0.9})
    with pytest.raises(ValueError):
        PointFamily(4, {})


def test_single_point_q1_counts_once():
    for t in (0.0, 0.37, 0.93):
        j = int(t * 8) + 1
        fam = PointFamily(8, {j: t})
        assert count_incidences(fam, 1) == 1
        _, recs = count_incidences(fam, 1, collect=True)
        assert recs == [IncidenceRecord(j, j, recs[0].frac)]
        assert (recs[0].frac.num, recs[0].frac.den) == (0, 1)


def test_grid_family_q1_range():
    N = 20
    fam = PointFamily(N, {j: (j - 1) / N for j in range(1, N + 1)})
    cnt = count_incidences(fam, 1)
    assert 3 * N - 6 <= cnt <= 9 * N


def test_tolerance_validation():
    fam = PointFamily(4, {1: 0.0})
    with pytest.raises(ValueError):
        count_incidences(fam, 1, tol_mult=0.0)


def test_fast_counter_matches_bruteforce():
    rng = np.random.default_rng(0)
    for N, M, Q in ((32, 16, 1), (64, 64, 4), (128, 48, 16), (128, 64, 64)):
        fam = random_family(N, M, seed=int(rng.integers(1 << 30)))
        assert count_incidences(fam, Q) == count_incidences_bruteforce(fam, Q)


def test_fast_counter_matches_bruteforce_boundary_grid():
    # arithmetic families maximize exact boundary ties
    N = 40
    fam = PointFamily(N, {j: (j - 1) / N for j in range(1, N + 1)})
    for Q in (1, 2, 8):
        assert count_incidences(fam, Q) == count_incidences_bruteforce(fam, Q)


@given(st.integers(min_value=0, max_value=2 ** 31), st.sampled_from([1, 2, 4, 8]))
@settings(max_examples=25, deadline=None)
def test_fast_counter_matches_bruteforce_hypothesis(seed, Q):
    fam = random_family(64, 24, seed=seed)
    assert count_incidences(fam, Q) == count_incidences_bruteforce(fam, Q)


def test_wide_tolerance_fallback_consistent():
    fam = random_family(16, 8, seed=3)
    # tol_mult large enough that windows wrap the whole circle
    assert count_incidences(fam, 1, tol_mult=20.0) == count_incidences_bruteforce(
        fam, 1, tol_mult=20.0
    )


def test_symmetry_reversal_bijection():
    fam = random_family(64, 32, seed=5)
    _, recs = count_incidences(fam, 4, collect=True)
    keyed = {(r.i, r.j, r.frac.num, r.frac.den) for r in recs}
    for i, j, a, q in list(keyed):
        assert (j, i, (q - a) % q, q) in keyed


def test_monotonicity_under_enlargement():
    fam = random_family(64, 40, seed=7)
    js, _ = fam.ordered()
    sub = PointFamily(64, {int(j): fam.members[int(j)] for j in js[:20]})
    for Q in (1, 4, 16):
        assert count_incidences(sub, Q) <= count_incidences(fam, Q)


def test_sharpness_configuration_shape():
    # q=2, M=20: one row -> 2 points
    fam = sharpness_configuration(2, 20, 100)
    assert fam.size == 2
    ts = sorted(fam.members.values())
    assert ts == [0.0, 0.5]
    # q=1: degenerate single column m/N
    fam1 = sharpness_configuration(1, 30, 100)
    assert fam1.size == 3
    assert sorted(fam1.members.values()) == [0.0, 0.01, 0.02]


def test_sharpness_configuration_two_rows():
    fam = sharpness_configuration(8, 160, 1024)
    assert fam.size == 16
    cnt = count_incidences(fam, 8)
    assert cnt >= 8 ** 2 * 2 * 0.25


def test_sharpness_configuration_validates():
    with pytest.raises(ValueError):
        sharpness_configuration(8, 64, 1024)  # M < 10q


def test_remark_configuration_attains_bound():
    # family of size ~M/10 built with q = Q = 8
    N, Q = 1024, 8
    fam = sharpness_configuration(Q, 640, N)
    assert fam.size == 64
    cnt = count_incidences(fam, Q)
    assert cnt >= Q * 640 / 100
    assert cnt <= 100 * Q * 640 * log(N)


def test_bound_ratio_trivial_and_sharp():
    fam = PointFamily(512, {1: 0.0})
    assert incidence_bound_ratio(fam, 1) == 1 / log(513)
    sharp = sharpness_configuration(16, 512, 512)
    assert incidence_bound_ratio(sharp, 16) >= 1 / 100


def test_bound_ratio_random_families():
    for Q in (1, 4, 16, 64):
        for seed in (0, 1):
            fam = random_family(512, 512, seed=seed)
            assert incidence_bound_ratio(fam, Q) <= 100


def test_incidence_bound_suite_moderate():
    N = 128
    for Q in (1, 2, 8, 32, 128):
        for seed in (0, 1, 2):
            fam = random_family(N, N, seed=seed)
            cnt = count_incidences(fam, Q)
            assert cnt <= 100 * Q * N * log(N)
