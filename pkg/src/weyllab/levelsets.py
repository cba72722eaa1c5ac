"""Superlevel-set strip statistics and box-restricted L^4 / local-L^2 norms.

The torus splits into N horizontal strips S_j = [0,1] x [(j-1)/N, j/N].
A BoxSelection picks one grid-snapped (1/N) x (1/N^2) box per chosen strip;
the union of chosen boxes is the integration domain for the norm estimates.
Strip statistics count, per dyadic level lambda, how many strips contain a
grid sample with |f| in [lambda, 2*lambda) * ||a||.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .expsum import (
    CoefficientVector,
    TorusGrid,
    _circular_window_sum,
    eval_direct,
    eval_grid,
    eval_rows,
)


@dataclass(frozen=True)
class BoxSelection:
    """Grid-snapped box anchors, one per chosen strip.

    anchors maps strip index j (1-based) to (x_index, t_index); the box
    covers x_oversample x t_oversample grid cells starting there, i.e. a
    full (1/N) x (1/N^2) rectangle. The t anchor must keep the box inside
    its strip; the x anchor may wrap around the torus.
    """

    grid: TorusGrid
    anchors: Mapping[int, tuple[int, int]]

    def __post_init__(self):
        g = self.grid
        per = g.t_oversample * g.n_max
        for j, (x0, t0) in self.anchors.items():
            if not 1 <= j <= g.n_max:
                raise ValueError(f"strip index {j} out of range")
            if not 0 <= x0 < g.n_x:
                raise ValueError(f"x anchor {x0} out of range")
            if not (j - 1) * per <= t0 <= j * per - g.t_oversample:
                raise ValueError(f"box of strip {j} escapes its strip")

    @property
    def size(self) -> int:
        return len(self.anchors)

    def sample_points(self) -> np.ndarray:
        """All (x, t) sample coordinates of the selected boxes."""
        g = self.grid
        pts = []
        for j in sorted(self.anchors):
            x0, t0 = self.anchors[j]
            xs = (x0 + np.arange(g.x_oversample)) % g.n_x
            ts = t0 + np.arange(g.t_oversample)
            gx, gt = np.meshgrid(xs / g.n_x, ts / g.n_t, indexing="ij")
            pts.append(np.stack([gx.ravel(), gt.ravel()], axis=1))
        return np.concatenate(pts) if pts else np.zeros((0, 2))


@dataclass(frozen=True)
class StripStatistics:
    """Per-dyadic-level counts of strips attaining that level somewhere."""

    n_max: int
    lambda_values: tuple[float, ...]
    counts: Mapping[float, int]


def full_selection(grid: TorusGrid, x0: int = 0) -> BoxSelection:
    """One box per strip, anchored at the strip bottom and a common x."""
    per = grid.t_oversample * grid.n_max
    return BoxSelection(grid, {j: (x0, (j - 1) * per) for j in range(1, grid.n_max + 1)})


def origin_box_selection(grid: TorusGrid) -> BoxSelection:
    """Full selection whose first box is x-centered on the origin."""
    per = grid.t_oversample * grid.n_max
    anchors = {j: (0, (j - 1) * per) for j in range(1, grid.n_max + 1)}
    anchors[1] = ((-(grid.x_oversample // 2)) % grid.n_x, 0)
    return BoxSelection(grid, anchors)


def strip_attainment(coeffs: CoefficientVector, grid: TorusGrid, lams) -> StripStatistics:
    """One streaming pass counting, for each lambda, the strips with a
    sample in [lambda, 2*lambda) * ||a||."""
    lams = [float(l) for l in lams]
    norm = coeffs.l2_norm
    N = grid.n_max
    hit = np.zeros((len(lams), N + 1), dtype=bool)
    fld = eval_grid(coeffs, grid)
    for k0, block in fld.iter_chunks():
        ks = np.arange(k0, k0 + block.shape[0])
        strips = grid.strip_of_row(ks)
        absf = np.abs(block)
        for i, lam in enumerate(lams):
            rows_hit = ((absf >= lam * norm) & (absf < 2 * lam * norm)).any(axis=1)
            if rows_hit.any():
                np.logical_or.at(hit[i], strips, rows_hit)
    counts = {lam: int(hit[i, 1:].sum()) for i, lam in enumerate(lams)}
    return StripStatistics(N, tuple(lams), counts)


def strip_level_count(coeffs: CoefficientVector, grid: TorusGrid, lam: float) -> int:
    """Number of strips containing a grid sample with |f| in
    [lambda, 2*lambda) * ||a||. Warns outside the claimed dyadic range."""
    N = grid.n_max
    if not N ** 0.25 <= lam <= N ** 0.5:
        warnings.warn(
            f"lambda={lam} outside [N^(1/4), N^(1/2)]; count computed, "
            "but no bound is claimed there",
            stacklevel=2,
        )
    return strip_attainment(coeffs, grid, [lam]).counts[float(lam)]


def strip_maxima(coeffs: CoefficientVector, grid: TorusGrid) -> np.ndarray:
    """Per-strip maximum of |f| over grid samples; index 0 unused."""
    out = np.zeros(grid.n_max + 1)
    fld = eval_grid(coeffs, grid)
    for k0, block in fld.iter_chunks():
        ks = np.arange(k0, k0 + block.shape[0])
        strips = grid.strip_of_row(ks)
        np.maximum.at(out, strips, np.abs(block).max(axis=1))
    return out


def _selection_norm(coeffs, sel: BoxSelection, p: float) -> float:
    pts = sel.sample_points()
    vals = eval_direct(coeffs, pts)
    return float((np.abs(vals) ** p).sum() * sel.grid.cell_area) ** (1.0 / p)


def l4_on_selection(coeffs: CoefficientVector, sel: BoxSelection) -> float:
    """||f||_{L^4} over the union of boxes; requires all N strips chosen."""
    if sel.size != sel.grid.n_max:
        raise ValueError("L^4 selection must cover every strip")
    return _selection_norm(coeffs, sel, 4.0)


def local_l2_on_selection(coeffs: CoefficientVector, sel: BoxSelection) -> float:
    """||f||_{L^2} over the union of the |W| = M chosen boxes."""
    if sel.size == 0:
        raise ValueError("selection is empty")
    return _selection_norm(coeffs, sel, 2.0)


def adversarial_selection(coeffs: CoefficientVector, grid: TorusGrid, M: int) -> BoxSelection:
    """Per strip, the box maximizing the box sum of |f|^2; keeps the M strips
    with the largest maxima. Ties break to the lowest t anchor, then the
    lowest x anchor, then the lowest strip index."""
    N = grid.n_max
    if not 1 <= M <= N:
        raise ValueError("M must lie in [1, N]")
    per = grid.t_oversample * N
    best_val = np.zeros(N + 1)
    best_anchor = {}
    for j in range(1, N + 1):
        rows = eval_rows(coeffs, grid, np.arange((j - 1) * per, j * per))
        sq = np.abs(rows) ** 2
        xsum = np.array([_circular_window_sum(r, grid.x_oversample, 0) for r in sq])
        csum = np.cumsum(xsum, axis=0)
        csum = np.vstack([np.zeros(grid.n_x), csum])
        win = csum[grid.t_oversample :] - csum[: per - grid.t_oversample + 1]
        flat = int(np.argmax(win))
        t_rel, x0 = divmod(flat, grid.n_x)
        best_val[j] = win.ravel()[flat]
        best_anchor[j] = (x0, (j - 1) * per + t_rel)
    order = np.argsort(-best_val[1:], kind="stable") + 1
    chosen = sorted(order[:M])
    return BoxSelection(grid, {int(j): best_anchor[int(j)] for j in chosen})
