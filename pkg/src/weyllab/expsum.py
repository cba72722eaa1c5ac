"""Quadratic exponential sums f(x,t) = sum_n a_n e(nx + n^2 t) on the torus.

Provides the coefficient/grid/field data model, exact pointwise evaluation,
fast FFT row evaluation on oversampled grids, and the empirical
locally-constant defect of a sampled field.
"""

from __future__ import annotations

import csv
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .util import cexp, thread_cap

DEFAULT_OVERSAMPLE = 4
DEFAULT_CHUNK_ROWS = 512


@dataclass(frozen=True)
class CoefficientVector:
    """Complex coefficients a_1..a_N with cached l2 norm."""

    values: np.ndarray
    l2_norm: float = field(init=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("coefficient vector must be 1-d and non-empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "l2_norm", float(np.linalg.norm(vals)))

    @property
    def n_max(self) -> int:
        return self.values.size


def ones_coefficients(n_max: int) -> CoefficientVector:
    """The Weyl-sum coefficients a_n = 1."""
    return CoefficientVector(np.ones(n_max))


def random_phase_coefficients(n_max: int, seed: int) -> CoefficientVector:
    """Unimodular coefficients e(theta_n), theta_n uniform, PCG64-seeded."""
    rng = np.random.default_rng(seed)
    return CoefficientVector(cexp(rng.random(n_max)))


def random_gaussian_coefficients(n_max: int, seed: int) -> CoefficientVector:
    """Standard complex Gaussian coefficients, E|a_n|^2 = 1, PCG64-seeded."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n_max) + 1j * rng.standard_normal(n_max)
    return CoefficientVector(z / np.sqrt(2.0))


def preset_coefficients(name: str, n_max: int, seed: int = 0) -> CoefficientVector:
    if name == "ones":
        return ones_coefficients(n_max)
    if name == "random-phase":
        return random_phase_coefficients(n_max, seed)
    if name == "random-gaussian":
        return random_gaussian_coefficients(n_max, seed)
    raise ValueError(f"unknown coefficient preset {name!r}")


@dataclass(frozen=True)
class TorusGrid:
    """Sampling lattice with x step 1/(x_oversample*N) and t step 1/(t_oversample*N^2).

    Oversampling >= 4 keeps at least 4x4 samples inside every
    (1/N) x (1/N^2) locally-constant box.
    """

    n_max: int
    x_oversample: int = DEFAULT_OVERSAMPLE
    t_oversample: int = DEFAULT_OVERSAMPLE

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.x_oversample < 4 or self.t_oversample < 4:
            raise ValueError("oversampling factors must be >= 4")

    @property
    def n_x(self) -> int:
        return self.x_oversample * self.n_max

    @property
    def n_t(self) -> int:
        return self.t_oversample * self.n_max ** 2

    @property
    def cell_area(self) -> float:
        return 1.0 / (self.n_x * self.n_t)

    def x_values(self, indices=None) -> np.ndarray:
        idx = np.arange(self.n_x) if indices is None else np.asarray(indices)
        return idx / self.n_x

    def t_values(self, indices=None) -> np.ndarray:
        idx = np.arange(self.n_t) if indices is None else np.asarray(indices)
        return idx / self.n_t

    def strip_of_row(self, k) -> np.ndarray:
        """Horizontal strip index j in 1..N for t-row k; boundary rows go low."""
        k = np.asarray(k)
        per = self.t_oversample * self.n_max
        return np.maximum(1, np.ceil(k / per)).astype(int)


def eval_direct(coeffs: CoefficientVector, points) -> np.ndarray:
    """f at arbitrary (x,t) points by direct summation.

    Error is pure floating arithmetic, below N*||a||*1e-13 per point.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        return np.zeros(0, dtype=complex)
    if pts.shape[1] != 2 or not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite (x, t) pairs")
    n = np.arange(1, coeffs.n_max + 1)
    x = np.mod(pts[:, 0], 1.0)
    t = np.mod(pts[:, 1], 1.0)
    # chunked to keep the phase matrix modest for large point sets
    out = np.empty(len(pts), dtype=complex)
    step = max(1, 2_000_000 // max(1, coeffs.n_max))
    for i0 in range(0, len(pts), step):
        sl = slice(i0, i0 + step)
        phases = np.outer(x[sl], n) + np.outer(t[sl], n * n)
        out[sl] = cexp(phases) @ coeffs.values
    return out


def eval_rows(coeffs: CoefficientVector, grid: TorusGrid, t_indices) -> np.ndarray:
    """Rows f(., t_k) on the grid's x lattice via a length-n_x inverse DFT.

    For each row, b_n = a_n e(n^2 t) and f(x_j) = sum_n b_n e(n j / n_x).
    """
    if grid.n_max != coeffs.n_max:
        raise ValueError("grid and coefficients disagree on n_max")
    ks = np.asarray(t_indices, dtype=int)
    n = np.arange(1, coeffs.n_max + 1)
    t = ks / grid.n_t
    b = np.zeros((len(ks), grid.n_x), dtype=complex)
    b[:, 1 : coeffs.n_max + 1] = coeffs.values * cexp(np.outer(t, n * n))
    return np.fft.ifft(b, axis=1) * grid.n_x


class TorusField:
    """Streamed samples of f on a TorusGrid, generated row-by-row in t order.

    Rows are produced lazily; the field can be iterated any number of times.
    Memory stays bounded by the chunk size regardless of grid size.
    """

    def __init__(self, coeffs: CoefficientVector, grid: TorusGrid,
                 chunk_rows: int = DEFAULT_CHUNK_ROWS):
        if grid.n_max != coeffs.n_max:
            raise ValueError("grid and coefficients disagree on n_max")
        self.coeffs = coeffs
        self.grid = grid
        self.chunk_rows = max(1, int(chunk_rows))

    def row_block(self, k0: int, k1: int) -> np.ndarray:
        return eval_rows(self.coeffs, self.grid, np.arange(k0, k1))

    def iter_chunks(self):
        """Yield (k0, rows) blocks covering rows 0..n_t-1 in ascending t."""
        n_t = self.grid.n_t
        starts = list(range(0, n_t, self.chunk_rows))
        workers = min(thread_cap(), len(starts))
        if workers <= 1:
            for k0 in starts:
                yield k0, self.row_block(k0, min(k0 + self.chunk_rows, n_t))
            return
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = pool.map(
                lambda k0: self.row_block(k0, min(k0 + self.chunk_rows, n_t)),
                starts,
            )
            for k0, block in zip(starts, blocks):
                yield k0, block

    def rows(self):
        """Yield (t_index, row) pairs in ascending t order."""
        for k0, block in self.iter_chunks():
            for i, row in enumerate(block):
                yield k0 + i, row

    def collect(self, max_samples: int = 64_000_000) -> np.ndarray:
        """Materialize the full (n_t, n_x) array; guarded against huge grids."""
        total = self.grid.n_t * self.grid.n_x
        if total > max_samples:
            raise ValueError(f"field too large to materialize ({total} samples)")
        return self.row_block(0, self.grid.n_t)

    def mean_square(self) -> float:
        """Mean of |f|^2 over all grid samples (equals ||a||^2 by orthogonality)."""
        acc = 0.0
        for _, block in self.iter_chunks():
            acc += float(np.sum(np.abs(block) ** 2))
        return acc / (self.grid.n_t * self.grid.n_x)


def eval_grid(coeffs: CoefficientVector, grid: TorusGrid,
              chunk_rows: int = DEFAULT_CHUNK_ROWS) -> TorusField:
    """Lazy full-grid evaluation; rows match eval_direct to 1e-9*sqrt(N)*||a||."""
    return TorusField(coeffs, grid, chunk_rows=chunk_rows)


def _circular_window_sum(row: np.ndarray, width: int, offset: int) -> np.ndarray:
    """out[j] = sum_{d=0}^{width-1} row[(j + offset + d) mod len(row)]."""
    n = row.size
    csum = np.concatenate(([0.0], np.cumsum(np.tile(row, 2))))
    start = (np.arange(n) + offset) % n
    return csum[start + width] - csum[start]


def locally_constant_defects(fld: TorusField, ps, box_constant: int = 10) -> dict:
    """Worst ratio of |f| at a sample to its surrounding box L^p average, per p.

    The box is box_constant/N by box_constant/N^2, torus-wrapped, and the
    average is (N^3 * midpoint-sum integral of |f|^p over the box)^(1/p).
    All requested p values are scanned in one streaming pass.
    """
    ps = [float(p) for p in ps]
    for p in ps:
        if not 1.0 <= p <= 8.0:
            raise ValueError("p must lie in [1, 8]")
    grid = fld.grid
    wx = box_constant * grid.x_oversample
    wt = box_constant * grid.t_oversample
    if wx > grid.n_x or wt > grid.n_t:
        raise ValueError("grid holds fewer samples than one box")
    ht = wt // 2
    hx = wx // 2
    norm = 1.0 / (grid.x_oversample * grid.t_oversample)  # N^3 * cell_area * window
    n_t = grid.n_t

    blk = max(wt, min(2048, n_t))
    cache: dict[int, np.ndarray] = {}

    def absrow(k):
        k = k % n_t
        b0 = (k // blk) * blk
        if b0 not in cache:
            if len(cache) > 4:
                cache.clear()
            cache[b0] = np.abs(eval_rows(fld.coeffs, grid, np.arange(b0, min(b0 + blk, n_t))))
        return cache[b0][k - b0]

    window: deque = deque()
    rolling = {p: None for p in ps}
    worst = {p: 0.0 for p in ps}
    for k in range(n_t + wt - 1):
        fa_k = absrow(k)
        xs = {p: _circular_window_sum(fa_k ** p, wx, -hx) for p in ps}
        window.append(xs)
        for p in ps:
            rolling[p] = xs[p] if rolling[p] is None else rolling[p] + xs[p]
        if len(window) > wt:
            old = window.popleft()
            for p in ps:
                rolling[p] = rolling[p] - old[p]
        j = k - wt + 1
        if j < 0:
            continue
        fa = absrow(j + ht)
        for p in ps:
            favg = rolling[p] * norm
            mask = favg > 0
            if np.any(mask):
                ratio = fa[mask] / favg[mask] ** (1.0 / p)
                worst[p] = max(worst[p], float(ratio.max()))
    return worst


def locally_constant_defect(fld: TorusField, p: float, box_constant: int = 10) -> float:
    """Single-p version of locally_constant_defects."""
    return locally_constant_defects(fld, [p], box_constant=box_constant)[float(p)]


def save_coefficients_csv(coeffs: CoefficientVector, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "re", "im"])
        for i, v in enumerate(coeffs.values, start=1):
            w.writerow([i, repr(float(v.real)), repr(float(v.imag))])


def load_coefficients_csv(path) -> CoefficientVector:
    entries = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "n":
                continue
            entries[int(row[0])] = float(row[1]) + 1j * float(row[2])
    if not entries:
        raise ValueError(f"no coefficients found in {path}")
    n_max = max(entries)
    vals = np.zeros(n_max, dtype=complex)
    for n, v in entries.items():
        vals[n - 1] = v
    return CoefficientVector(vals)


def dump_field_csv(fld: TorusField, path) -> None:
    """Stream the field to CSV rows (t_index, x_index, re, im)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t_index", "x_index", "re", "im"])
        for k, row in fld.rows():
            for j, v in enumerate(row):
                w.writerow([k, j, repr(float(v.real)), repr(float(v.imag))])
