from math import log

import numpy as np
import pytest

from weyllab.expsum import TorusGrid, random_phase_coefficients
from weyllab.kernel import (
    ArcBump,
    arc_mask_values,
    arc_scales,
    bilinear_form,
    bilinear_forms,
    decompose,
    dyadic_pigeonhole,
    kernel_eval,
    l2_norm_on_selection,
    quintic_plateau,
    reconstruction_error,
    sup_norm_report,
)
from weyllab.levelsets import adversarial_selection, full_selection
from weyllab.rationals import canonical_layer_fractions
from weyllab.util import torus_dist


def test_bump_shape():
    u = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 2.5, -1.2])
    v = quintic_plateau(u)
    assert np.all(v[np.abs(u) <= 1] == 1.0)
    assert np.all(v[np.abs(u) >= 2] == 0.0)
    assert 0 < v[3] < 1
    assert v[6] == quintic_plateau(np.array([1.2]))[0]
    # C^2 smoothstep: derivative-free spot check of continuity at the knots
    eps = 1e-6
    assert abs(quintic_plateau(1 + eps) - 1.0) < 1e-16 + 40 * eps ** 3
    assert quintic_plateau(2 - eps) < 40 * eps ** 3


def test_arc_bump_rejects_bad_profiles():
    with pytest.raises(ValueError):
        ArcBump(profile=lambda u: np.ones_like(np.asarray(u, dtype=float)))
    with pytest.raises(ValueError):
        ArcBump(smoothness_order=1)


def test_kernel_eval_values():
    assert abs(kernel_eval(9, [(0.0, 0.0)])[0] - 9) < 1e-12
    for N in (6, 7):
        val = kernel_eval(N, [(0.5, 0.0)])[0]
        assert abs(val - (0 if N % 2 == 0 else -1)) < 1e-12
    # q | N at an odd prime: |K(0, a/q)| = (N/q) sqrt(q)
    val = kernel_eval(63, [(0.0, 3.0 / 7.0)])[0]
    assert abs(abs(val) - 9 * np.sqrt(7)) < 1e-9


def test_arc_scales_cutoff():
    assert arc_scales(64) == [1, 2, 4, 8]
    assert arc_scales(7) == []


def test_mask_is_one_on_arc_centers_and_zero_far():
    N = 64
    for Q in (1, 2, 4):
        fracs = canonical_layer_fractions(Q)
        vals = arc_mask_values(Q, N, [f.num / f.den for f in fracs])
        assert np.all(vals >= 1.0)  # bump = 1 at center, neighbors may add
        # a point far from every arc of the layer
        far = 0.5 / (2 * Q) + 1.0 / (4 * Q * N)
        dmin = min(torus_dist(far - f.num / f.den) for f in fracs)
        if dmin > 2.0 / (Q * N):
            assert arc_mask_values(Q, N, [far])[0] == 0.0


def test_decomposition_reconstruction_exact():
    N = 32
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    assert reconstruction_error(dec) <= 1e-10 * N


def test_piece_support():
    N = 64
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    ts = grid.t_values()
    for Q in dec.scales:
        fr = np.array([f.num / f.den for f in canonical_layer_fractions(Q)])
        for k in (3, 1000, grid.n_t - 7):
            dmin = np.min(torus_dist(ts[k] - fr))
            if dmin > 2.0 / (Q * N):
                assert dec.row_masks[Q][k] == 0.0


def test_sup_norm_bounds():
    for N in (32, 64):
        dec = decompose(N, TorusGrid(N))
        rep = sup_norm_report(dec)
        assert abs(rep["pieces"][1]["sup"] - N) < 1e-9  # K(0,0) = N on the q=1 arc
        for Q in dec.scales:
            assert rep["pieces"][Q]["ratio"] <= 10.0
        assert rep["minor"]["ratio"] <= 10.0


def test_bilinear_zero_h():
    N = 16
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    sel = full_selection(grid)
    h = np.zeros(len(sel.sample_points()))
    assert bilinear_form(dec, sel, h, "full") == 0


def test_bilinear_single_box_full_kernel():
    # h = 1 on one box near the origin: <K * h 1, h 1> ~ |B|^2 K(0) = N^-5
    N = 64
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    sel = full_selection(grid)
    pts = sel.sample_points()
    h = np.zeros(len(pts))
    box1 = (pts[:, 1] < 1.0 / N ** 2) & ((pts[:, 0] < 1.0 / N) | (pts[:, 0] > 1 - 1.0 / N))
    h[box1] = 1.0
    val = bilinear_form(dec, sel, h, "full", Y1=box1, Y2=box1)
    target = N ** -5.0
    assert target / 16 <= abs(val) <= 16 * target


def test_bilinear_bounds_all_pieces():
    N = 64
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    rng = np.random.default_rng(12)
    for M in (4, 16):
        sel = adversarial_selection(random_phase_coefficients(N, seed=1), grid, M)
        n_samples = len(sel.sample_points())
        h = rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)
        hn = l2_norm_on_selection(sel, h)
        vals = bilinear_forms(dec, sel, h, dec.pieces() + ["full"])
        for piece, v in vals.items():
            assert abs(v) <= 100 * log(N) * np.sqrt(M) / N ** 2 * hn ** 2, piece


def test_bilinear_validates_subsets():
    N = 16
    grid = TorusGrid(N)
    dec = decompose(N, grid)
    sel = full_selection(grid)
    n = len(sel.sample_points())
    with pytest.raises(ValueError):
        bilinear_form(dec, sel, np.ones(n), "full", Y1=np.array([n + 3]))
    with pytest.raises(ValueError):
        bilinear_form(dec, sel, np.ones(n - 1), "full")


def test_pigeonhole_constant_h():
    N = 16
    grid = TorusGrid(N)
    sel = full_selection(grid)
    n = len(sel.sample_points())
    lam1, Y1, lam2, Y2 = dyadic_pigeonhole(sel, np.full(n, 3.0))
    assert lam1 == lam2 == 2.0  # 3 sits in [2, 4)
    assert Y1.all() and Y2.all()


def test_pigeonhole_two_valued():
    N = 16
    grid = TorusGrid(N)
    sel = full_selection(grid)
    n = len(sel.sample_points())
    h = np.ones(n)
    h[: n // 2] = 100.0
    lam1, Y1, lam2, Y2 = dyadic_pigeonhole(sel, h)
    assert {lam1, lam2} <= {1.0, 64.0}
    area = grid.cell_area
    hsq = float(np.sum(np.abs(h) ** 2) * area)
    for lam, Y in ((lam1, Y1), (lam2, Y2)):
        assert hsq >= lam ** 2 * Y.sum() * area


def test_pigeonhole_random_h_l2_lower_bound():
    N = 16
    grid = TorusGrid(N)
    sel = full_selection(grid)
    n = len(sel.sample_points())
    rng = np.random.default_rng(4)
    h = rng.standard_normal(n) * np.exp(rng.standard_normal(n))
    lam1, Y1, lam2, Y2 = dyadic_pigeonhole(sel, h)
    hsq = float(np.sum(np.abs(h) ** 2) * grid.cell_area)
    assert hsq >= lam1 ** 2 * Y1.sum() * grid.cell_area
    assert hsq >= lam2 ** 2 * Y2.sum() * grid.cell_area
    with pytest.raises(ValueError):
        dyadic_pigeonhole(sel, np.zeros(n))
