"""Weights on the R-ball [0,R]^2 (R = N^2) and their tube statistics.

A Weight is a nonnegative mass distribution on unit cells, stored sparsely
(or flagged uniform, in which case mass queries use exact closed forms).
Tubes are R x sqrt(R) bands: the horizontal tiling family plus, in
all-directions mode, slopes k/sqrt(R) for |k| <= sqrt(R) with offsets on a
half-width grid. The central statistic is

    sum_cells |G|^2 mass  /  (sup_T mass(T)^(1/2) * R * ||a||^2),

for the rescaled quadratic sum G(x,t) = sum_n a_n e(n x/sqrt(R) + n^2 t/R),
together with the dyadic level decomposition of a weight by |G| and the
per-level mass inequalities.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .expsum import CoefficientVector, eval_direct
from .util import dyadic_range

_MATERIALIZE_LIMIT = 4_000_000


@dataclass(frozen=True)
class Tube:
    """An R x sqrt(R) band {(x,t): offset <= t - slope*x < offset + sqrt(R)}.

    Horizontal tiling tubes carry index j with offset (j-1)*sqrt(R).
    """

    slope: float
    offset: float
    kind: str = "horizontal"
    index: int | None = None


class Weight:
    """Nonnegative mass on unit cells of [0,R]^2, sparse or uniform."""

    def __init__(self, r_scale: int, cx=None, cy=None, mass=None, uniform_total=None):
        if int(round(sqrt(r_scale))) ** 2 != r_scale:
            raise ValueError("r_scale must be a perfect square N^2")
        self.r_scale = int(r_scale)
        self.n_max = int(round(sqrt(r_scale)))
        if uniform_total is not None:
            self.kind = "uniform"
            self.total = float(uniform_total)
            self.cx = self.cy = self.mass = None
            if self.total < 0:
                raise ValueError("total mass must be nonnegative")
            return
        self.kind = "sparse"
        cx = np.asarray(cx if cx is not None else [], dtype=np.int64)
        cy = np.asarray(cy if cy is not None else [], dtype=np.int64)
        mass = np.asarray(mass if mass is not None else [], dtype=float)
        if not (len(cx) == len(cy) == len(mass)):
            raise ValueError("cell arrays must share a length")
        if len(cx) and (cx.min() < 0 or cx.max() >= r_scale or cy.min() < 0 or cy.max() >= r_scale):
            raise ValueError("cells must lie inside [0, R)^2")
        if np.any(mass < 0):
            raise ValueError("masses must be nonnegative")
        keep = mass > 0
        self.cx, self.cy, self.mass = cx[keep], cy[keep], mass[keep]
        self.total = float(self.mass.sum())

    @classmethod
    def from_cells(cls, r_scale: int, cells: dict) -> "Weight":
        items = sorted(cells.items())
        cx = [c[0] for c, _ in items]
        cy = [c[1] for c, _ in items]
        mass = [m for _, m in items]
        return cls(r_scale, cx, cy, mass)

    @classmethod
    def uniform(cls, r_scale: int, total: float | None = None) -> "Weight":
        return cls(r_scale, uniform_total=r_scale if total is None else total)

    @property
    def n_cells(self) -> int:
        if self.kind == "uniform":
            return self.r_scale ** 2
        return len(self.mass)

    @property
    def density(self) -> float:
        return self.total / self.r_scale ** 2

    def materialize(self) -> "Weight":
        """Sparse copy of a uniform weight (guarded against huge R)."""
        if self.kind == "sparse":
            return self
        if self.r_scale ** 2 > _MATERIALIZE_LIMIT:
            raise ValueError("uniform weight too large to materialize")
        R = self.r_scale
        gx, gy = np.meshgrid(np.arange(R), np.arange(R), indexing="ij")
        m = np.full(R * R, self.density)
        return Weight(R, gx.ravel(), gy.ravel(), m)

    def cell_centers(self) -> np.ndarray:
        if self.kind != "sparse":
            raise ValueError("cell_centers needs a sparse weight")
        return np.stack([self.cx + 0.5, self.cy + 0.5], axis=1)


def save_weight_csv(w: Weight, path) -> None:
    if w.kind != "sparse":
        raise ValueError("only sparse weights can be saved")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x_cell", "t_cell", "mass"])
        for x, y, m in zip(w.cx, w.cy, w.mass):
            wr.writerow([int(x), int(y), repr(float(m))])


def load_weight_csv(r_scale: int, path) -> Weight:
    cx, cy, mass = [], [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "x_cell":
                continue
            cx.append(int(row[0]))
            cy.append(int(row[1]))
            mass.append(float(row[2]))
    return Weight(r_scale, cx, cy, mass)


# ---------------------------------------------------------------------------
# One-dimensionality: mass of every lattice-centered square stays below its
# radius.


def _max_window_mass_sparse(w: Weight, r: int):
    """Max mass of a 2r x 2r half-open window with integer anchor, and the
    anchor attaining it. Anchors slide to cell coordinates without loss."""
    order = np.argsort(w.cx, kind="stable")
    xs, ys, ms = w.cx[order], w.cy[order], w.mass[order]
    best, best_anchor = 0.0, (0, 0)
    side = 2 * r
    for ax in np.unique(xs):
        lo = np.searchsorted(xs, ax, side="left")
        hi = np.searchsorted(xs, ax + side, side="left")
        sub_y, sub_m = ys[lo:hi], ms[lo:hi]
        sub_order = np.argsort(sub_y, kind="stable")
        sy, sm = sub_y[sub_order], sub_m[sub_order]
        csum = np.concatenate([[0.0], np.cumsum(sm)])
        ends = np.searchsorted(sy, sy + side, side="left")
        sums = csum[ends] - csum[np.arange(len(sy))]
        if len(sums):
            k = int(np.argmax(sums))
            if sums[k] > best:
                best = float(sums[k])
                best_anchor = (int(ax), int(sy[k]))
    return best, best_anchor


def is_one_dimensional(w: Weight):
    """Check mass(B(y, r)) <= r for all dyadic r in [1, R] and lattice
    centers y, balls taken as squares of side 2r. Returns (ok, witness)
    where the witness carries the worst center, radius, mass and ratio."""
    R = w.r_scale
    worst = {"ratio": 0.0, "center": None, "r": None, "mass": 0.0}
    for r in dyadic_range(1, R):
        if w.kind == "uniform":
            m = min(2 * r, R) ** 2 * w.density
            center = (R // 2, R // 2)
        else:
            if w.total <= r and worst["ratio"] >= w.total / r:
                continue
            m, anchor = _max_window_mass_sparse(w, r)
            center = (anchor[0] + r, anchor[1] + r)
        ratio = m / r
        if ratio > worst["ratio"]:
            worst = {"ratio": ratio, "center": center, "r": r, "mass": m}
    return worst["ratio"] <= 1.0, worst


# ---------------------------------------------------------------------------
# Tube masses.


def _uniform_band_area(R: float, slope: float, offset: float) -> float:
    """Exact area of {0<=x<=R, 0<=t<=R, offset <= t - slope*x < offset+sqrt(R)}."""
    w = sqrt(R)
    xs = {0.0, R}
    for target in (0.0, R):
        for b in (offset, offset + w):
            if slope != 0:
                x = (target - b) / slope
                if 0 < x < R:
                    xs.add(x)
    xs = sorted(xs)

    def seg_len(x):
        lo = max(0.0, slope * x + offset)
        hi = min(float(R), slope * x + offset + w)
        return max(0.0, hi - lo)

    area = 0.0
    for a, b in zip(xs, xs[1:]):
        area += 0.5 * (seg_len(a) + seg_len(b)) * (b - a)
    return area


def _tube_from_bin(slope: float, k: int, half: float, n_max: int) -> Tube:
    offset = k * half
    if slope == 0.0 and k % 2 == 0:
        j = k // 2 + 1
        if 1 <= j <= n_max:
            return Tube(0.0, offset, "horizontal", j)
    kind = "horizontal" if slope == 0.0 else "oriented"
    return Tube(slope, offset, kind, None)


def _slopes(mode: str, n_max: int) -> list[float]:
    if mode == "horizontal":
        return [0.0]
    if mode == "all":
        return [k / n_max for k in range(-n_max, n_max + 1)]
    raise ValueError("mode must be 'horizontal' or 'all'")


def tube_sup(w: Weight, mode: str = "horizontal"):
    """The maximizing tube and its mass.

    Horizontal mode scans the N tiling tubes plus the half-shifted ones;
    all-directions mode adds slopes k/sqrt(R), |k| <= sqrt(R), always with
    offsets on the half-width grid.
    """
    R = w.r_scale
    half = sqrt(R) / 2.0
    best_mass, best_tube = -1.0, None
    for slope in _slopes(mode, w.n_max):
        if w.kind == "uniform":
            k_lo = int(np.floor((-abs(slope) * R - sqrt(R)) / half)) - 1
            k_hi = int(np.ceil((R + abs(slope) * R) / half)) + 1
            for k in range(k_lo, k_hi + 1):
                m = _uniform_band_area(R, slope, k * half) * w.density
                if m > best_mass:
                    best_mass, best_tube = m, _tube_from_bin(slope, k, half, w.n_max)
        else:
            if len(w.mass) == 0:
                break
            rho = (w.cy + 0.5) - slope * (w.cx + 0.5)
            bins = np.floor(rho / half).astype(np.int64)
            k0 = int(bins.min())
            sums = np.bincount(bins - k0, weights=w.mass)
            window = sums + np.concatenate([sums[1:], [0.0]])
            k = int(np.argmax(window))
            if window[k] > best_mass:
                best_mass = float(window[k])
                best_tube = _tube_from_bin(slope, k + k0, half, w.n_max)
    if best_tube is None:
        best_mass, best_tube = 0.0, Tube(0.0, 0.0, "horizontal", 1)
    return best_tube, best_mass


# ---------------------------------------------------------------------------
# The weighted mass ratio for G.


def eval_G(coeffs: CoefficientVector, xs, ts, r_scale: int) -> np.ndarray:
    """G(x,t) = sum a_n e(n x / sqrt(R) + n^2 t / R) at ball coordinates."""
    N = int(round(sqrt(r_scale)))
    pts = np.stack(
        [np.asarray(xs, dtype=float) / N, np.asarray(ts, dtype=float) / r_scale], axis=1
    )
    return eval_direct(coeffs, pts)


def _numerator(coeffs: CoefficientVector, w: Weight) -> float:
    if w.kind == "sparse":
        if len(w.mass) == 0:
            return 0.0
        G = eval_G(coeffs, w.cx + 0.5, w.cy + 0.5, w.r_scale)
        return float(np.sum(np.abs(G) ** 2 * w.mass))
    # uniform: G on the R x R cell-center lattice repeats x-periodically
    # with period N, so the sum folds onto an N x R lattice
    N, R = w.n_max, w.r_scale
    xs = np.arange(N) + 0.5
    acc = 0.0
    chunk = max(1, 2_000_000 // (N * N))
    for j0 in range(0, R, chunk):
        ts = np.arange(j0, min(j0 + chunk, R)) + 0.5
        gx, gt = np.meshgrid(xs, ts, indexing="ij")
        G = eval_G(coeffs, gx.ravel(), gt.ravel(), R)
        acc += float(np.sum(np.abs(G) ** 2))
    return acc * (R / N) * w.density


def weighted_ratio_report(coeffs: CoefficientVector, w: Weight, mode: str = "horizontal") -> dict:
    """Numerator, maximizing tube and the normalized ratio
    numerator / (sup_T mass(T)^(1/2) * R * ||a||^2)."""
    R = w.r_scale
    if coeffs.n_max ** 2 != R:
        raise ValueError("weight ball scale must equal n_max^2")
    if w.total > R * (1 + 1e-9):
        raise ValueError("weight mass exceeds R, outside the theorem hypothesis")
    tube, sup = tube_sup(w, mode)
    num = _numerator(coeffs, w)
    if sup <= 0.0:
        return {"numerator": num, "tube_sup": 0.0, "tube": tube, "ratio": 0.0}
    ratio = num / (sqrt(sup) * R * coeffs.l2_norm ** 2)
    return {"numerator": num, "tube_sup": sup, "tube": tube, "ratio": ratio}


def weighted_ratio(coeffs: CoefficientVector, w: Weight, mode: str = "horizontal") -> float:
    return weighted_ratio_report(coeffs, w, mode)["ratio"]


# ---------------------------------------------------------------------------
# Dyadic level decomposition of a weight by |G|.


@dataclass(frozen=True)
class LevelDecomposition:
    r_scale: int
    buckets: dict  # mu -> Weight
    discard: Weight | None


def decompose_weight_by_level(w: Weight, coeffs: CoefficientVector) -> LevelDecomposition:
    """Partition cells by the dyadic size of |G|/||a|| at their centers;
    cells with |G| below R^-10 * ||a|| go to the discard bucket. The
    buckets sum back to the weight cell-by-cell."""
    if w.kind == "uniform":
        w = w.materialize()
    R = w.r_scale
    if len(w.mass) == 0:
        return LevelDecomposition(R, {}, None)
    G = eval_G(coeffs, w.cx + 0.5, w.cy + 0.5, R)
    rel = np.abs(G) / coeffs.l2_norm
    tiny = rel < R ** -10.0
    buckets = {}
    exps = np.full(len(rel), -(10 ** 9))
    pos = rel > 0
    exps[pos] = np.floor(np.log2(rel[pos])).astype(int)
    for m in np.unique(exps[~tiny]) if np.any(~tiny) else []:
        sel = (exps == m) & ~tiny
        buckets[2.0 ** m] = Weight(R, w.cx[sel], w.cy[sel], w.mass[sel])
    discard = None
    if np.any(tiny):
        discard = Weight(R, w.cx[tiny], w.cy[tiny], w.mass[tiny])
    return LevelDecomposition(R, buckets, discard)


def mu_regime_report(decomp: LevelDecomposition, mode: str = "horizontal") -> list[dict]:
    """Per dyadic level mu: masses, tube sup and the two sides of
    mu^2 * mass(B_R) <= C * R * sup_T mass(T)^(1/2), with the regime label
    relative to R^(1/8)."""
    R = decomp.r_scale
    rows = []
    for mu in sorted(decomp.buckets):
        wm = decomp.buckets[mu]
        _, sup = tube_sup(wm, mode)
        lhs = mu ** 2 * wm.total
        rhs_unit = R * sqrt(sup)
        rows.append(
            {
                "mu": mu,
                "mass": wm.total,
                "tube_sup": sup,
                "lhs": lhs,
                "rhs_unit": rhs_unit,
                "ratio": lhs / rhs_unit if rhs_unit > 0 else 0.0,
                "regime": "low" if mu < R ** 0.125 else "high",
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Weight generators for the experiment battery.


def uniform_weight(r_scale: int, total: float | None = None) -> Weight:
    return Weight.uniform(r_scale, total)


def random_one_dimensional_weight(r_scale: int, seed: int) -> Weight:
    """Mass 1/2 on one cell per column: any 2r-window then holds at most
    r mass, so the one-dimensionality check passes exactly. The column
    height profile varies by seed (iid, random walk, or jittered band)."""
    R = r_scale
    rng = np.random.default_rng(seed)
    style = int(rng.integers(3))
    if style == 0:
        heights = rng.integers(0, R, size=R)
    elif style == 1:
        steps = rng.integers(-2, 3, size=R)
        heights = np.mod(np.cumsum(steps) + rng.integers(0, R), R)
    else:
        base = int(rng.integers(0, R))
        heights = np.mod(base + rng.integers(-3, 4, size=R), R)
    return Weight(R, np.arange(R), heights, np.full(R, 0.5))


def greedy_adversarial_weight(coeffs: CoefficientVector, r_scale: int) -> Weight:
    """Unit masses on the R cells with the largest |G|^2, found through the
    x-periodic folding of the cell-center lattice."""
    N = coeffs.n_max
    R = r_scale
    if N * N != R:
        raise ValueError("r_scale must equal n_max^2")
    xs = np.arange(N) + 0.5
    vals = np.empty((N, R))
    chunk = max(1, 2_000_000 // (N * N))
    for j0 in range(0, R, chunk):
        ts = np.arange(j0, min(j0 + chunk, R)) + 0.5
        gx, gt = np.meshgrid(xs, ts, indexing="ij")
        G = eval_G(coeffs, gx.ravel(), gt.ravel(), R)
        vals[:, j0 : j0 + len(ts)] = np.abs(G).reshape(N, len(ts)) ** 2
    flat = vals.ravel()
    top = np.argsort(-flat, kind="stable")[:N]  # N classes of N cells = R cells
    cx, cy, mass = [], [], []
    for idx in sorted(top.tolist()):
        i0, j = divmod(idx, R)
        cx.extend((i0 + np.arange(N) * N).tolist())
        cy.extend([j] * N)
        mass.extend([1.0] * N)
    return Weight(R, cx, cy, mass)
