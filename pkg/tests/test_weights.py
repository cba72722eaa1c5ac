from math import log, sqrt

import numpy as np
import pytest

from weyllab.expsum import ones_coefficients, random_phase_coefficients
from weyllab.weights import (
    Weight,
    decompose_weight_by_level,
    greedy_adversarial_weight,
    is_one_dimensional,
    load_weight_csv,
    mu_regime_report,
    random_one_dimensional_weight,
    save_weight_csv,
    tube_sup,
    uniform_weight,
    weighted_ratio,
    weighted_ratio_report,
)


def test_weight_validation():
    Weight(16, [0, 3], [5, 2], [1.0, 2.0])
    with pytest.raises(ValueError):
        Weight(15, [0], [0], [1.0])  # not a perfect square
    with pytest.raises(ValueError):
        Weight(16, [16], [0], [1.0])  # cell outside the ball
    with pytest.raises(ValueError):
        Weight(16, [0], [0], [-1.0])


def test_zero_weight_is_one_dimensional():
    ok, worst = is_one_dimensional(Weight(64, [], [], []))
    assert ok and worst["ratio"] == 0.0


def test_point_mass_two_fails():
    ok, worst = is_one_dimensional(Weight(64, [3], [4], [2.0]))
    assert not ok
    assert worst["r"] == 1 and worst["mass"] == 2.0


def test_unit_line_density_is_one_dimensional():
    R = 256
    w = Weight(R, np.arange(R), np.full(R, 100), np.full(R, 0.5))
    ok, worst = is_one_dimensional(w)
    assert ok
    assert worst["ratio"] <= 2.0  # the square/ball constant


def test_uniform_weight_not_one_dimensional():
    ok, worst = is_one_dimensional(uniform_weight(64))
    assert not ok
    assert worst["ratio"] == 2.0  # attained at r = R/2


def test_random_one_dimensional_weights():
    for seed in range(5):
        w = random_one_dimensional_weight(256, seed)
        ok, _ = is_one_dimensional(w)
        assert ok
        assert w.total == 128.0


def test_tube_sup_concentrated():
    R = 64
    w = Weight(R, [1, 5, 9], [2, 3, 1], [1.0, 2.0, 0.5])  # all inside T_1
    tube, mass = tube_sup(w, "horizontal")
    assert mass == 3.5
    assert tube.index == 1


def test_tube_sup_uniform_closed_form():
    R = 64
    tube, mass = tube_sup(uniform_weight(R), "horizontal")
    assert abs(mass - sqrt(R)) < 1e-9
    tube_a, mass_a = tube_sup(uniform_weight(R), "all")
    assert abs(mass_a - sqrt(R)) < 1e-9  # tilted bands only lose by clipping


def test_tube_sup_average_lower_bound():
    R = idx = 256
    rng = np.random.default_rng(3)
    for _ in range(10):
        k = int(rng.integers(1, 40))
        w = Weight(
            R,
            rng.integers(0, R, size=k),
            rng.integers(0, R, size=k),
            rng.random(k) + 0.1,
        )
        _, sup = tube_sup(w, "horizontal")
        assert sup >= w.total / sqrt(R) - 1e-12


def test_weighted_ratio_zero_weight():
    c = ones_coefficients(8)
    assert weighted_ratio(c, Weight(64, [], [], [])) == 0.0


@pytest.mark.parametrize("N", [16, 32])
def test_weighted_ratio_uniform_closed_form(N):
    # numerator = R ||a||^2 exactly, tube sup = sqrt(R): ratio = R^(-1/4)
    R = N * N
    c = random_phase_coefficients(N, seed=2)
    rep = weighted_ratio_report(c, uniform_weight(R), "horizontal")
    assert abs(rep["numerator"] - R * c.l2_norm ** 2) < 1e-6 * R * c.l2_norm ** 2
    assert abs(rep["ratio"] - R ** -0.25) < 0.1 * R ** -0.25


def test_weighted_ratio_rejects_heavy_weight():
    c = ones_coefficients(8)
    with pytest.raises(ValueError):
        weighted_ratio(c, uniform_weight(64, total=65.0))
    with pytest.raises(ValueError):
        weighted_ratio(c, uniform_weight(256))  # scale mismatch


def test_weighted_ratio_battery_small():
    for N in (16, 32):
        R = N * N
        bound = 100 * log(R)
        for coeffs in (ones_coefficients(N), random_phase_coefficients(N, seed=1)):
            for w in (
                uniform_weight(R),
                random_one_dimensional_weight(R, seed=5),
                greedy_adversarial_weight(coeffs, R),
            ):
                for mode in ("horizontal", "all"):
                    assert weighted_ratio(coeffs, w, mode) <= bound


def test_level_decomposition_partitions_exactly():
    N = 16
    R = N * N
    c = random_phase_coefficients(N, seed=7)
    w = random_one_dimensional_weight(R, seed=1)
    dec = decompose_weight_by_level(w, c)
    back = {}
    parts = list(dec.buckets.values()) + ([dec.discard] if dec.discard else [])
    for part in parts:
        for x, y, m in zip(part.cx, part.cy, part.mass):
            key = (int(x), int(y))
            back[key] = back.get(key, 0.0) + m
    orig = {(int(x), int(y)): m for x, y, m in zip(w.cx, w.cy, w.mass)}
    assert back == orig


def test_level_decomposition_single_cell():
    N = 16
    R = N * N
    c = ones_coefficients(N)
    w = Weight(R, [10], [20], [1.5])
    dec = decompose_weight_by_level(w, c)
    assert len(dec.buckets) + (1 if dec.discard else 0) == 1


def test_mu_regime_rows_uniform_dominant():
    N = 16
    R = N * N
    c = ones_coefficients(N)
    dec = decompose_weight_by_level(uniform_weight(R), c)
    rows = mu_regime_report(dec, "horizontal")
    assert rows
    top = max(rows, key=lambda r: r["mass"])
    assert top["mass"] >= 0.25 * R  # one dominant dyadic level
    for row in rows:
        assert row["lhs"] <= 100 * log(R) * row["rhs_unit"]


def test_mu_regime_rows_weyl_weight():
    from weyllab.counterexamples import weyl_weight_scaled

    N = 32
    R = N * N
    c = ones_coefficients(N)
    dec = decompose_weight_by_level(weyl_weight_scaled(R), c)
    rows = mu_regime_report(dec, "horizontal")
    for row in rows:
        assert row["lhs"] <= 100 * log(R) * row["rhs_unit"]
    # the heavy levels sit within a dyadic step of R^(1/6)
    top = max(rows, key=lambda r: r["mass"])
    assert R ** (1 / 6) / 2 <= top["mu"] <= 2 * R ** (1 / 6)


def test_greedy_weight_mass_and_determinism():
    N = 16
    R = N * N
    c = random_phase_coefficients(N, seed=3)
    w1 = greedy_adversarial_weight(c, R)
    w2 = greedy_adversarial_weight(c, R)
    assert w1.total == R
    assert np.array_equal(w1.cx, w2.cx) and np.array_equal(w1.cy, w2.cy)


def test_weight_csv_roundtrip(tmp_path):
    w = Weight(64, [1, 2], [3, 4], [0.5, 2.0])
    path = tmp_path / "w.csv"
    save_weight_csv(w, path)
    back = load_weight_csv(64, path)
    assert np.array_equal(back.cx, w.cx)
    assert np.array_equal(back.mass, w.mass)
