"""Evaluate quadratic exponential sums and check their basic identities.

f(x,t) = sum_{n=1}^N a_n e(nx + n^2 t) on the torus. Direct summation is
the ground truth; the grid evaluator reaches the same values through one
FFT per t-row. The mean of |f|^2 over the grid recovers the coefficient
energy, and |f| is controlled by its local L^p averages on (1/N) x (1/N^2)
boxes.
"""

import numpy as np

from weyllab import (
    TorusGrid,
    eval_direct,
    eval_grid,
    eval_rows,
    locally_constant_defect,
    ones_coefficients,
    random_phase_coefficients,
)

N = 64
coeffs = ones_coefficients(N)

print(f"f at the origin with a_n = 1: {eval_direct(coeffs, [(0.0, 0.0)])[0]:.6f}")
print(f"  (the sum of N = {N} unit phases)")

val = eval_direct(ones_coefficients(7), [(0.0, 3 / 7)])[0]
print(f"\ncomplete quadratic sum at t = 3/7, N = 7: |f| = {abs(val):.9f}")
print(f"  against sqrt(7) = {np.sqrt(7):.9f}")

grid = TorusGrid(N)
rng = np.random.default_rng(1)
coeffs = random_phase_coefficients(N, seed=1)
ks = rng.integers(0, grid.n_t, size=200)
js = rng.integers(0, grid.n_x, size=200)
rows = eval_rows(coeffs, grid, ks)
pts = np.stack([js / grid.n_x, ks / grid.n_t], axis=1)
err = np.max(np.abs(rows[np.arange(200), js] - eval_direct(coeffs, pts)))
print(f"\nFFT rows vs direct summation over 200 random samples: max error {err:.2e}")
print(f"  tolerance 1e-9 sqrt(N) ||a|| = {1e-9 * np.sqrt(N) * coeffs.l2_norm:.2e}")

fld = eval_grid(coeffs, grid)
print(f"\nmean |f|^2 over the full grid: {fld.mean_square():.12f}")
print(f"coefficient energy ||a||^2:    {coeffs.l2_norm ** 2:.12f}")

for p in (1.0, 2.0, 4.0):
    d = locally_constant_defect(eval_grid(ones_coefficients(32), TorusGrid(32)), p)
    print(f"locally-constant defect at p = {p}: {d:.3f}  (bounded by an absolute constant)")
