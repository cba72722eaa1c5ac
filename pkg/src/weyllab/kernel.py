"""Arc decomposition of the kernel K(x,t) = sum_{n<=N} e(nx + n^2 t).

K splits as sum_Q K_Q + K', where K_Q masks K near the rationals a/q with
q in [Q, 2Q): K_Q(x,t) = K(x,t) * sum_{a/q} phi((t - a/q) * Q * N) for a
plateau bump phi (=1 on [-1,1], supported in [-2,2]). The remainder K' is
definitional, so reconstruction is exact. Dyadic layers run over
8*Q <= N, which keeps every layer's arcs pairwise disjoint at desk scale.

Also provides the bilinear pairing <piece * h 1_{Y1}, h 1_{Y2}> over a box
selection by direct pair summation, and the dyadic pigeonholing of h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log

import numpy as np

from .expsum import TorusGrid, eval_direct, eval_rows, ones_coefficients
from .levelsets import BoxSelection
from .rationals import canonical_layer_fractions
from .util import cexp


def quintic_plateau(u) -> np.ndarray:
    """C^2 even bump: 1 on [-1,1], quintic smoothstep down to 0 at |u|=2."""
    u = np.abs(np.asarray(u, dtype=float))
    out = np.zeros(u.shape)
    out[u <= 1.0] = 1.0
    mid = (u > 1.0) & (u < 2.0)
    v = u[mid] - 1.0
    out[mid] = 1.0 - v ** 3 * (10.0 - 15.0 * v + 6.0 * v * v)
    return out


@dataclass(frozen=True)
class ArcBump:
    """Even plateau profile for arc masks; smoothness_order C^k with k >= 2."""

    profile: callable = quintic_plateau
    smoothness_order: int = 2

    def __post_init__(self):
        if self.smoothness_order < 2:
            raise ValueError("bump must be at least C^2")
        u = np.linspace(-3, 3, 601)
        vals = self.profile(u)
        if np.any(vals < 0) or np.any(vals > 1):
            raise ValueError("bump must take values in [0, 1]")
        if not np.allclose(vals, self.profile(-u)):
            raise ValueError("bump must be even")
        if not np.all(vals[np.abs(u) <= 1.0] == 1.0):
            raise ValueError("bump must equal 1 on [-1, 1]")
        if np.any(vals[np.abs(u) >= 2.0] != 0.0):
            raise ValueError("bump must vanish outside [-2, 2]")

    def __call__(self, u) -> np.ndarray:
        return self.profile(u)


def arc_scales(n_max: int) -> list[int]:
    """Dyadic layer scales Q with 8*Q <= N, ascending."""
    out = []
    Q = 1
    while 8 * Q <= n_max:
        out.append(Q)
        Q *= 2
    return out


def kernel_eval(n_max: int, points) -> np.ndarray:
    """K at arbitrary points: the quadratic sum with unit coefficients."""
    return eval_direct(ones_coefficients(n_max), points)


def arc_mask_values(Q: int, n_max: int, ts, bump: ArcBump | None = None) -> np.ndarray:
    """sum over canonical a/q (q in [Q,2Q)) of bump((t - a/q) * Q * N),
    with t - a/q torus-reduced. Adjacent arcs may overlap; the sum is
    taken literally."""
    bump = bump or ArcBump()
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(ts.shape)
    scale = Q * n_max
    for f in canonical_layer_fractions(Q):
        d = ts - (f.num / f.den)
        d -= np.round(d)
        near = np.abs(d) < 2.0 / scale
        if np.any(near):
            out[near] += bump(d[near] * scale)
    return out


@dataclass
class KernelDecomposition:
    """Row-mask representation of K = sum_Q K_Q + K' on a grid.

    row_masks[Q] holds the arc mask per t-row; the minor-arc factor is
    1 - sum of the masks. Pieces are identified by an int Q, "minor",
    or "full".
    """

    n_max: int
    grid: TorusGrid
    bump: ArcBump
    scales: tuple[int, ...]
    row_masks: dict = field(repr=False)

    def mask_factor(self, piece, ts) -> np.ndarray:
        """Mask factor of a piece at arbitrary t values."""
        ts = np.asarray(ts, dtype=float)
        if piece == "full":
            return np.ones(ts.shape)
        if piece == "minor":
            total = np.zeros(ts.shape)
            for Q in self.scales:
                total += arc_mask_values(Q, self.n_max, ts, self.bump)
            return 1.0 - total
        if piece in self.scales:
            return arc_mask_values(int(piece), self.n_max, ts, self.bump)
        raise ValueError(f"unknown piece {piece!r}")

    def piece_rows(self, piece, t_indices) -> np.ndarray:
        """Rows of the requested piece on the grid's x lattice."""
        ks = np.asarray(t_indices, dtype=int)
        base = eval_rows(ones_coefficients(self.n_max), self.grid, ks)
        if piece == "full":
            return base
        if piece == "minor":
            total = np.zeros(len(ks))
            for Q in self.scales:
                total += self.row_masks[Q][ks]
            return base * (1.0 - total)[:, None]
        if piece in self.scales:
            return base * self.row_masks[int(piece)][ks][:, None]
        raise ValueError(f"unknown piece {piece!r}")

    def pieces(self) -> list:
        return list(self.scales) + ["minor"]


def decompose(n_max: int, grid: TorusGrid, bump: ArcBump | None = None) -> KernelDecomposition:
    """Build the arc decomposition; every layer mask is evaluated once per
    t-row. Requires the grid to resolve arcs of width 1/(Q*N) >= 1/N^2."""
    if grid.n_max != n_max:
        raise ValueError("grid and kernel disagree on n_max")
    if grid.n_t < 2 * n_max ** 2:
        raise ValueError("grid too coarse to resolve the narrowest arcs")
    bump = bump or ArcBump()
    scales = tuple(arc_scales(n_max))
    ts = grid.t_values()
    row_masks = {Q: arc_mask_values(Q, n_max, ts, bump) for Q in scales}
    return KernelDecomposition(n_max, grid, bump, scales, row_masks)


def sup_norm_report(dec: KernelDecomposition, chunk_rows: int = 2048) -> dict:
    """Empirical sup of each |K_Q| and of |K'| over the grid, with the
    ratios to N/sqrt(Q) and sqrt(N)*(log N)^3 respectively."""
    grid = dec.grid
    N = dec.n_max
    rowmax = np.zeros(grid.n_t)
    coeffs = ones_coefficients(N)
    for k0 in range(0, grid.n_t, chunk_rows):
        ks = np.arange(k0, min(k0 + chunk_rows, grid.n_t))
        rowmax[ks] = np.abs(eval_rows(coeffs, grid, ks)).max(axis=1)
    report = {"n_max": N, "scales": list(dec.scales), "pieces": {}}
    total = np.zeros(grid.n_t)
    for Q in dec.scales:
        sup = float((rowmax * dec.row_masks[Q]).max())
        report["pieces"][Q] = {
            "sup": sup,
            "bound_unit": N / np.sqrt(Q),
            "ratio": sup / (N / np.sqrt(Q)),
            "row_max": rowmax * dec.row_masks[Q],
        }
        total += dec.row_masks[Q]
    sup_minor = float((rowmax * np.abs(1.0 - total)).max())
    unit = np.sqrt(N) * log(N) ** 3
    report["minor"] = {"sup": sup_minor, "bound_unit": unit, "ratio": sup_minor / unit}
    return report


def reconstruction_error(dec: KernelDecomposition, t_indices=None) -> float:
    """max |K - sum_Q K_Q - K'| over the sampled rows (0 up to rounding)."""
    grid = dec.grid
    if t_indices is None:
        step = max(1, grid.n_t // 512)
        t_indices = np.arange(0, grid.n_t, step)
    ks = np.asarray(t_indices, dtype=int)
    total = dec.piece_rows("minor", ks).copy()
    for Q in dec.scales:
        total += dec.piece_rows(Q, ks)
    base = dec.piece_rows("full", ks)
    return float(np.abs(base - total).max())


# ---------------------------------------------------------------------------
# Bilinear pairing over a box selection.


def _selection_h(sel: BoxSelection, h) -> np.ndarray:
    pts = sel.sample_points()
    h = np.asarray(h, dtype=complex).ravel()
    if h.shape[0] != pts.shape[0]:
        raise ValueError("h must give one value per selection sample")
    return h


def _subset_mask(n: int, Y) -> np.ndarray:
    if Y is None:
        return np.ones(n, dtype=bool)
    Y = np.asarray(Y)
    if Y.dtype == bool:
        if Y.shape[0] != n:
            raise ValueError("subset mask must match the selection samples")
        return Y
    idx = Y.astype(int)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("subset indices escape the selection")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def bilinear_form(
    dec: KernelDecomposition,
    sel: BoxSelection,
    h,
    piece="full",
    Y1=None,
    Y2=None,
) -> complex:
    """<piece * h 1_{Y1}, h 1_{Y2}> on the torus by direct pair summation:
    sum over sample pairs of piece(x2-x1, t2-t1) h(s1) conj(h(s2)) dA^2."""
    return bilinear_forms(dec, sel, h, [piece], Y1, Y2)[piece]


def bilinear_forms(dec, sel: BoxSelection, h, pieces, Y1=None, Y2=None) -> dict:
    """Several pieces at once; the kernel values over pair differences are
    computed a single time and only the mask factor varies."""
    pts = sel.sample_points()
    hvals = _selection_h(sel, h)
    m1 = _subset_mask(len(pts), Y1)
    m2 = _subset_mask(len(pts), Y2)
    p1, h1 = pts[m1], hvals[m1]
    p2, h2 = pts[m2], hvals[m2]
    if len(p1) == 0 or len(p2) == 0:
        return {piece: 0j for piece in pieces}
    dx = (p2[:, 0][:, None] - p1[:, 0][None, :]).ravel()
    dt = (p2[:, 1][:, None] - p1[:, 1][None, :]).ravel()
    kvals = kernel_eval(dec.n_max, np.stack([dx, dt], axis=1))
    weights = (np.conj(h2)[:, None] * h1[None, :]).ravel()
    area2 = sel.grid.cell_area ** 2
    out = {}
    for piece in pieces:
        factor = dec.mask_factor(piece, dt)
        out[piece] = complex(np.sum(kvals * factor * weights) * area2)
    return out


def l2_norm_on_selection(sel: BoxSelection, h) -> float:
    hvals = _selection_h(sel, h)
    return float(np.sqrt(np.sum(np.abs(hvals) ** 2) * sel.grid.cell_area))


def dyadic_pigeonhole(sel: BoxSelection, h):
    """Split h by dyadic modulus and return (lam1, Y1, lam2, Y2) maximizing
    the proxy lam1*lam2*sqrt(|Y1|*|Y2|); each Y_l = {|h| in [lam, 2 lam)}
    satisfies ||h||^2 >= lam^2 |Y_l|."""
    hvals = _selection_h(sel, h)
    mags = np.abs(hvals)
    if not np.any(mags > 0):
        raise ValueError("h vanishes identically")
    exps = np.unique(np.floor(np.log2(mags[mags > 0])).astype(int))
    area = sel.grid.cell_area
    windows = []
    for m in exps:
        lam = 2.0 ** m
        mask = (mags >= lam) & (mags < 2 * lam)
        windows.append((lam, mask, float(mask.sum()) * area))
    best = None
    for lam1, mask1, a1 in windows:
        for lam2, mask2, a2 in windows:
            proxy = lam1 * lam2 * np.sqrt(a1 * a2)
            if best is None or proxy > best[0]:
                best = (proxy, lam1, mask1, lam2, mask2)
    return best[1], best[2], best[3], best[4]
